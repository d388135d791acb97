import numpy as np
import pytest

from gtslatent import ae, linalg
from gtslatent.optim import TrainSchedule
from gtslatent.rng import Rng


def _finite_difference_grad(codec, batch, h=1e-6):
    grad = np.zeros_like(codec.a)
    it = np.nditer(codec.a, flags=["multi_index"])
    for _ in it:
        idx = it.multi_index
        plus = codec.a.copy()
        plus[idx] += h
        minus = codec.a.copy()
        minus[idx] -= h
        lp, _ = ae.loss_and_grad(ae.LinearCodec(codec.n, codec.m, plus), batch)
        lm, _ = ae.loss_and_grad(ae.LinearCodec(codec.n, codec.m, minus), batch)
        grad[idx] = (lp - lm) / (2.0 * h)
    return grad


class TestInit:
    def test_deterministic_per_seed(self):
        a = ae.init_codec(8, 3, seed=5)
        b = ae.init_codec(8, 3, seed=5)
        assert np.array_equal(a.a, b.a)

    def test_entries_bounded(self):
        codec = ae.init_codec(100, 10, seed=1)
        assert np.all(np.abs(codec.a) <= 0.1)

    def test_seeds_differ(self):
        a = ae.init_codec(6, 2, seed=1)
        b = ae.init_codec(6, 2, seed=2)
        assert np.any(a.a != b.a)

    def test_m_out_of_range(self):
        with pytest.raises(ValueError):
            ae.init_codec(4, 0, seed=1)
        with pytest.raises(ValueError):
            ae.init_codec(4, 5, seed=1)


class TestEncodeDecode:
    def test_identity_columns_select_entries(self):
        codec = ae.LinearCodec(5, 2, np.eye(5)[:, :2])
        x = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
        assert np.array_equal(ae.encode(codec, x), [1.0, 2.0])

    def test_zero_signal(self):
        codec = ae.init_codec(6, 3, seed=3)
        assert np.array_equal(ae.encode(codec, np.zeros(6)), np.zeros(3))

    def test_encode_matches_matmul_oracle(self):
        codec = ae.init_codec(7, 3, seed=4)
        x = Rng(5).uniform_matrix(1, 7, -1.0, 1.0)[0]
        by_matmul = linalg.matmul(codec.a.T, x[:, None])[:, 0]
        assert np.max(np.abs(ae.encode(codec, x) - by_matmul)) < 1e-12

    def test_orthonormal_columns_round_trip_span(self):
        q, _ = np.linalg.qr(Rng(6).uniform_matrix(6, 2, -1.0, 1.0))
        codec = ae.LinearCodec(6, 2, q)
        x = q @ np.array([0.3, -1.2])  # in the column span
        back = ae.decode(codec, ae.encode(codec, x))
        assert np.max(np.abs(back - x)) < 1e-10

    def test_zero_codec_reconstruction(self):
        codec = ae.LinearCodec(4, 2, np.zeros((4, 2)))
        x = np.array([1.0, -1.0, 2.0, 0.5])
        back = ae.decode(codec, ae.encode(codec, x))
        assert np.array_equal(back, np.zeros(4))
        loss, _ = ae.loss_and_grad(codec, x[None, :])
        assert abs(loss - np.mean(x ** 2)) < 1e-15

    def test_round_trip_equals_gram_oracle(self):
        codec = ae.init_codec(6, 3, seed=7)
        x = Rng(8).uniform_matrix(1, 6, -1.0, 1.0)[0]
        oracle = linalg.matmul(linalg.matmul(codec.a, codec.a.T),
                               x[:, None])[:, 0]
        back = ae.decode(codec, ae.encode(codec, x))
        assert np.max(np.abs(back - oracle)) < 1e-12

    def test_linearity(self):
        codec = ae.init_codec(5, 2, seed=9)
        rng = Rng(10)
        x = rng.uniform_matrix(1, 5, -1.0, 1.0)[0]
        y = rng.uniform_matrix(1, 5, -1.0, 1.0)[0]
        combo = ae.encode(codec, 2.0 * x - 3.0 * y)
        split = 2.0 * ae.encode(codec, x) - 3.0 * ae.encode(codec, y)
        assert np.max(np.abs(combo - split)) < 1e-10
        u = rng.uniform_matrix(1, 2, -1.0, 1.0)[0]
        v = rng.uniform_matrix(1, 2, -1.0, 1.0)[0]
        combo = ae.decode(codec, 0.5 * u + 4.0 * v)
        split = 0.5 * ae.decode(codec, u) + 4.0 * ae.decode(codec, v)
        assert np.max(np.abs(combo - split)) < 1e-10

    def test_length_mismatch(self):
        codec = ae.init_codec(5, 2, seed=11)
        with pytest.raises(ValueError):
            ae.encode(codec, np.zeros(4))
        with pytest.raises(ValueError):
            ae.decode(codec, np.zeros(3))


class TestLossAndGrad:
    def test_zero_codec_has_zero_gradient(self):
        codec = ae.LinearCodec(4, 2, np.zeros((4, 2)))
        batch = Rng(1).uniform_matrix(3, 4, -1.0, 1.0)
        _, grad = ae.loss_and_grad(codec, batch)
        assert np.array_equal(grad, np.zeros((4, 2)))

    def test_span_signals_give_zero_loss_and_grad(self):
        q, _ = np.linalg.qr(Rng(2).uniform_matrix(6, 3, -1.0, 1.0))
        codec = ae.LinearCodec(6, 3, q)
        batch = (q @ Rng(3).uniform_matrix(3, 4, -1.0, 1.0)).T  # in span
        loss, grad = ae.loss_and_grad(codec, batch)
        assert loss < 1e-25
        assert np.max(np.abs(grad)) < 1e-12

    def test_gradient_matches_finite_differences_6x3(self):
        codec = ae.init_codec(6, 3, seed=4)
        batch = Rng(5).uniform_matrix(4, 6, -1.0, 1.0)
        _, grad = ae.loss_and_grad(codec, batch)
        fd = _finite_difference_grad(codec, batch)
        rel = np.max(np.abs(grad - fd)) / max(np.max(np.abs(fd)), 1e-12)
        assert rel < 1e-6

    def test_gradient_check_random_instances(self):
        rng = Rng(6)
        for trial in range(20):
            n = rng.randint(9) + 2
            m = rng.randint(min(n, 5)) + 1
            bsz = rng.randint(8) + 1
            codec = ae.init_codec(n, m, seed=rng.next_u64())
            batch = rng.uniform_matrix(bsz, n, -1.5, 1.5)
            _, grad = ae.loss_and_grad(codec, batch)
            fd = _finite_difference_grad(codec, batch)
            rel = np.max(np.abs(grad - fd)) / max(np.max(np.abs(fd)), 1e-12)
            assert rel < 1e-5, trial

    def test_empty_batch_rejected(self):
        codec = ae.init_codec(4, 2, seed=1)
        with pytest.raises(ValueError):
            ae.loss_and_grad(codec, np.zeros((0, 4)))


class TestTrain:
    def test_zero_epochs_returns_codec_unchanged(self):
        codec = ae.init_codec(4, 2, seed=1)
        sched = TrainSchedule(epochs=0, batch_size=2, lr0=0.1)
        out, history = ae.train(codec, Rng(2).uniform_matrix(6, 4, -1, 1),
                                sched, seed=3)
        assert np.array_equal(out.a, codec.a)
        assert history.shape == (0,)

    def test_line_dataset_reaches_projection_optimum(self):
        # points on a line through the origin: optimal rank-1 codec is exact
        rng = Rng(4)
        direction = np.array([0.6, 0.8])
        ts = np.array([rng.uniform_in(-2.0, 2.0) for _ in range(40)])
        frames = ts[:, None] * direction[None, :]
        # closed-form optimum: projecting onto the line reconstructs exactly
        proj = np.outer(direction, direction)
        assert linalg.mse(frames, frames @ proj.T) < 1e-28
        codec = ae.init_codec(2, 1, seed=5)
        sched = TrainSchedule(epochs=300, batch_size=10, lr0=0.02)
        trained, history = ae.train(codec, frames, sched, seed=6)
        assert ae.reconstruction_mse(trained, frames) < 1e-3
        assert history[-1] < history[0]

    def test_same_seed_bitwise_identical(self):
        codec = ae.init_codec(5, 2, seed=7)
        frames = Rng(8).uniform_matrix(12, 5, -1.0, 1.0)
        sched = TrainSchedule(epochs=5, batch_size=4, lr0=0.01, wd0=1e-4)
        out1, hist1 = ae.train(codec, frames, sched, seed=9)
        out2, hist2 = ae.train(codec, frames, sched, seed=9)
        assert np.array_equal(out1.a, out2.a)
        assert np.array_equal(hist1, hist2)

    def test_loss_bounded_below_by_principal_subspace_error(self):
        rng = Rng(10)
        frames = rng.uniform_matrix(40, 6, -1.0, 1.0)
        codec = ae.init_codec(6, 2, seed=11)
        sched = TrainSchedule(epochs=200, batch_size=10, lr0=0.01)
        trained, history = ae.train(codec, frames, sched, seed=12)
        scatter = frames.T @ frames
        lam = np.sort(np.linalg.eigvalsh(scatter))
        floor = lam[:-2].sum() / frames.size
        assert history[-1] >= floor - 1e-6
        assert ae.reconstruction_mse(trained, frames) >= floor - 1e-6

    def test_empty_dataset_rejected(self):
        codec = ae.init_codec(4, 2, seed=1)
        sched = TrainSchedule(epochs=1, batch_size=2, lr0=0.1)
        with pytest.raises(ValueError):
            ae.train(codec, np.zeros((0, 4)), sched, seed=2)


class TestPersistence:
    def test_round_trip_through_gts1(self, tmp_path):
        codec = ae.init_codec(6, 3, seed=13)
        path = tmp_path / "codec.gts"
        ae.save_codec(codec, path)
        loaded = ae.load_codec(path)
        assert loaded.n == 6 and loaded.m == 3
        assert np.array_equal(loaded.a,
                              codec.a.astype(np.float32).astype(np.float64))
