"""Fully connected LSTM cell, warm-up/free-run rollout, and BPTT training.

The cell works directly in the latent dimension m: the hidden state
after consuming frame t *is* the prediction of frame t+1 (no output
projection).  A rollout starts from zero hidden and cell state, feeds
the first ``warmup`` real frames, then feeds the model its own previous
prediction for the remaining steps.  Training minimises the MSE over
all predicted frames (teacher-forced and free-run alike); evaluation
scores only the free-run part.

Gradients are exact backpropagation through time through that forward
graph, including through the fed-back predictions (an input that was a
previous prediction routes its gradient back into the step that
produced it).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .optim import TrainSchedule, adam_init, adam_step, schedule_at
from .rng import Rng

WEIGHT_NAMES = ("w_ii", "w_if", "w_ig", "w_io", "w_hi", "w_hf", "w_hg", "w_ho")
BIAS_NAMES = ("b_ii", "b_if", "b_ig", "b_io", "b_hi", "b_hf", "b_hg", "b_ho")
PARAM_NAMES = WEIGHT_NAMES + BIAS_NAMES


@dataclass(frozen=True)
class LstmCell:
    """Eight (m, m) gate weight matrices and eight length-m biases."""

    m: int
    w_ii: np.ndarray
    w_if: np.ndarray
    w_ig: np.ndarray
    w_io: np.ndarray
    w_hi: np.ndarray
    w_hf: np.ndarray
    w_hg: np.ndarray
    w_ho: np.ndarray
    b_ii: np.ndarray
    b_if: np.ndarray
    b_ig: np.ndarray
    b_io: np.ndarray
    b_hi: np.ndarray
    b_hf: np.ndarray
    b_hg: np.ndarray
    b_ho: np.ndarray

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("latent dimension must be at least 1")
        for name in WEIGHT_NAMES:
            w = linalg.as_matrix(getattr(self, name), name)
            if w.shape != (self.m, self.m):
                raise ValueError(f"{name} shape {w.shape} != ({self.m}, {self.m})")
            object.__setattr__(self, name, w)
        for name in BIAS_NAMES:
            b = linalg.as_vector(getattr(self, name), name)
            if b.shape != (self.m,):
                raise ValueError(f"{name} length {b.shape[0]} != {self.m}")
            object.__setattr__(self, name, b)

    def params(self) -> dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in PARAM_NAMES}


@dataclass(frozen=True)
class LstmState:
    """Hidden state (the running prediction) and cell state."""

    h: np.ndarray
    c: np.ndarray


def zero_state(m: int) -> LstmState:
    return LstmState(np.zeros(m), np.zeros(m))


def cell_from_params(m: int, params: dict) -> LstmCell:
    return LstmCell(m, **{name: params[name] for name in PARAM_NAMES})


def init_cell(m: int, seed: int) -> LstmCell:
    """Weights uniform on [-1/sqrt(m), 1/sqrt(m)], biases zero."""
    if m < 1:
        raise ValueError("latent dimension must be at least 1")
    rng = Rng(seed)
    bound = 1.0 / np.sqrt(m)
    params = {name: rng.uniform_matrix(m, m, -bound, bound)
              for name in WEIGHT_NAMES}
    params.update({name: np.zeros(m) for name in BIAS_NAMES})
    return cell_from_params(m, params)


def _sigmoid(z):
    # exp overflow on the negative tail saturates to inf, and
    # 1/(1+inf) == 0 is exactly the right limit
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(-z))


def step(cell: LstmCell, x, state: LstmState) -> LstmState:
    """One gate update: returns the next (hidden, cell) state.

    The hidden state of the returned state is the prediction of the
    next frame.
    """
    v = linalg.as_vector(x, "input")
    if v.shape[0] != cell.m:
        raise ValueError(f"input length {v.shape[0]} != m={cell.m}")
    h = linalg.as_vector(state.h, "hidden state")
    c = linalg.as_vector(state.c, "cell state")
    if h.shape[0] != cell.m or c.shape[0] != cell.m:
        raise ValueError("state dimension does not match the cell")

    i = _sigmoid(cell.w_ii @ v + cell.b_ii + cell.w_hi @ h + cell.b_hi)
    f = _sigmoid(cell.w_if @ v + cell.b_if + cell.w_hf @ h + cell.b_hf)
    g = np.tanh(cell.w_ig @ v + cell.b_ig + cell.w_hg @ h + cell.b_hg)
    o = _sigmoid(cell.w_io @ v + cell.b_io + cell.w_ho @ h + cell.b_ho)
    c_new = f * c + i * g
    h_new = o * np.tanh(c_new)
    return LstmState(h_new, c_new)


def _check_rollout_args(num_frames: int, warmup: int):
    if num_frames < 2:
        raise ValueError("sequences need at least 2 frames")
    if not 1 <= warmup <= num_frames - 1:
        raise ValueError(
            f"warmup {warmup} outside [1, {num_frames - 1}]"
        )


def run_sequence(cell: LstmCell, frames, warmup: int) -> np.ndarray:
    """Roll the cell over one (T, m) sequence; returns (T-1, m) predictions.

    Row k of the result is the prediction of frame k+1.  The first
    ``warmup`` steps consume real frames; every later step consumes the
    previous prediction.
    """
    f = linalg.as_matrix(frames, "frames")
    t_total = f.shape[0]
    _check_rollout_args(t_total, warmup)
    if f.shape[1] != cell.m:
        raise ValueError(f"frame length {f.shape[1]} != m={cell.m}")

    state = zero_state(cell.m)
    preds = np.empty((t_total - 1, cell.m))
    for k in range(t_total - 1):
        x = f[k] if k < warmup else preds[k - 1]
        state = step(cell, x, state)
        preds[k] = state.h
    return preds


def _forward(cell: LstmCell, batch: np.ndarray, warmup: int,
             keep_cache: bool):
    """Batched rollout over (B, T, m) sequences.

    Returns (predictions, cache); predictions has shape (B, T-1, m).
    The cache stores everything the backward pass needs, one tuple per
    step.
    """
    bsz, t_total, m = batch.shape
    h = np.zeros((bsz, m))
    c = np.zeros((bsz, m))
    preds = np.empty((bsz, t_total - 1, m))
    cache = []
    for k in range(t_total - 1):
        x = batch[:, k, :] if k < warmup else preds[:, k - 1, :]
        i = _sigmoid(x @ cell.w_ii.T + cell.b_ii + h @ cell.w_hi.T + cell.b_hi)
        f = _sigmoid(x @ cell.w_if.T + cell.b_if + h @ cell.w_hf.T + cell.b_hf)
        g = np.tanh(x @ cell.w_ig.T + cell.b_ig + h @ cell.w_hg.T + cell.b_hg)
        o = _sigmoid(x @ cell.w_io.T + cell.b_io + h @ cell.w_ho.T + cell.b_ho)
        c_new = f * c + i * g
        tc = np.tanh(c_new)
        h_new = o * tc
        if keep_cache:
            cache.append((x, h, c, i, f, g, o, tc))
        h, c = h_new, c_new
        preds[:, k, :] = h_new
    return preds, cache


def _backward(cell: LstmCell, warmup: int, preds: np.ndarray, cache,
              dpreds: np.ndarray) -> dict[str, np.ndarray]:
    """Exact BPTT through the forward graph of :func:`_forward`.

    ``dpreds`` is the loss gradient w.r.t. each prediction.  Where a
    prediction was fed back as the next input, its gradient receives
    the input path on top of the recurrent path.
    """
    grads = {name: np.zeros_like(arr) for name, arr in cell.params().items()}
    steps = preds.shape[1]
    dh_carry = np.zeros_like(preds[:, 0, :])
    dc_carry = np.zeros_like(dh_carry)
    for k in reversed(range(steps)):
        x, h_prev, c_prev, i, f, g, o, tc = cache[k]
        dh = dpreds[:, k, :] + dh_carry
        do = dh * tc
        dc = dc_carry + dh * o * (1.0 - tc * tc)
        di = dc * g
        dg = dc * i
        df = dc * c_prev
        dc_carry = dc * f

        dai = di * i * (1.0 - i)
        daf = df * f * (1.0 - f)
        dag = dg * (1.0 - g * g)
        dao = do * o * (1.0 - o)

        grads["w_ii"] += dai.T @ x
        grads["w_if"] += daf.T @ x
        grads["w_ig"] += dag.T @ x
        grads["w_io"] += dao.T @ x
        grads["w_hi"] += dai.T @ h_prev
        grads["w_hf"] += daf.T @ h_prev
        grads["w_hg"] += dag.T @ h_prev
        grads["w_ho"] += dao.T @ h_prev
        si, sf, sg, so = dai.sum(0), daf.sum(0), dag.sum(0), dao.sum(0)
        grads["b_ii"] += si
        grads["b_hi"] += si
        grads["b_if"] += sf
        grads["b_hf"] += sf
        grads["b_ig"] += sg
        grads["b_hg"] += sg
        grads["b_io"] += so
        grads["b_ho"] += so

        dx = dai @ cell.w_ii + daf @ cell.w_if + dag @ cell.w_ig + dao @ cell.w_io
        dh_carry = (dai @ cell.w_hi + daf @ cell.w_hf
                    + dag @ cell.w_hg + dao @ cell.w_ho)
        if k >= warmup:  # input was preds[:, k-1, :]
            dh_carry = dh_carry + dx
    return grads


def _batch_loss(cell: LstmCell, batch: np.ndarray, warmup: int):
    preds, cache = _forward(cell, batch, warmup, keep_cache=True)
    targets = batch[:, 1:, :]
    diff = preds - targets
    loss = float(np.mean(diff * diff))
    dpreds = (2.0 / diff.size) * diff
    return loss, preds, cache, dpreds


def loss_and_grad(cell: LstmCell, frames, warmup: int):
    """Training loss and exact parameter gradients for one sequence.

    Loss is the MSE between frames 2..T and all T-1 predictions;
    gradients cover all 16 parameters.
    """
    f = linalg.as_matrix(frames, "frames")
    _check_rollout_args(f.shape[0], warmup)
    if f.shape[1] != cell.m:
        raise ValueError(f"frame length {f.shape[1]} != m={cell.m}")
    loss, preds, cache, dpreds = _batch_loss(cell, f[None, :, :], warmup)
    grads = _backward(cell, warmup, preds, cache, dpreds)
    return loss, grads


def _clip_grads(grads: dict, max_norm: float):
    total = np.sqrt(sum(float(np.sum(g * g)) for g in grads.values()))
    if total > max_norm:
        scale = max_norm / total
        for name in grads:
            grads[name] = grads[name] * scale


def train(cell: LstmCell, sequences, schedule: TrainSchedule, warmup: int,
          seed: int, grad_clip: float | None = None):
    """Mini-batch BPTT training with Adam; deterministic per seed.

    ``sequences`` is (S, T, m).  Gradients are averaged over the batch
    (the batched loss already normalises by batch size).  Optional
    global-norm gradient clipping is off by default.  Returns the
    trained cell and per-epoch mean training loss.
    """
    s = np.asarray(sequences, dtype=np.float64)
    if s.ndim != 3 or s.shape[0] == 0:
        raise ValueError("sequences must be a non-empty (S, T, m) array")
    if not np.all(np.isfinite(s)):
        raise ValueError("sequences contain non-finite values")
    _check_rollout_args(s.shape[1], warmup)
    if s.shape[2] != cell.m:
        raise ValueError(f"frame length {s.shape[2]} != m={cell.m}")

    rng = Rng(seed)
    params = {name: arr.copy() for name, arr in cell.params().items()}
    states = {name: adam_init(arr.shape) for name, arr in params.items()}
    num = s.shape[0]
    history = np.zeros(schedule.epochs)
    for epoch in range(schedule.epochs):
        lr, wd = schedule_at(schedule, epoch)
        order = list(range(num))
        rng.shuffle(order)
        total = 0.0
        for start in range(0, num, schedule.batch_size):
            chunk = order[start:start + schedule.batch_size]
            current = cell_from_params(cell.m, params)
            loss, preds, cache, dpreds = _batch_loss(current, s[chunk], warmup)
            grads = _backward(current, warmup, preds, cache, dpreds)
            if grad_clip is not None:
                _clip_grads(grads, grad_clip)
            for name in PARAM_NAMES:
                params[name] = adam_step(states[name], params[name],
                                         grads[name], lr, wd)
            total += loss * len(chunk)
        history[epoch] = total / num
    return cell_from_params(cell.m, params), history


def save_cell(cell: LstmCell, out_dir) -> None:
    """Persist the cell as 16 GTS1 tensors named after the parameters."""
    from pathlib import Path
    from . import data
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, arr in cell.params().items():
        data.save_tensor(out / f"{name}.gts", arr.shape, arr)


def load_cell(path) -> LstmCell:
    """Load a cell written by :func:`save_cell` (float32 rounded)."""
    from pathlib import Path
    from . import data
    src = Path(path)
    params = {}
    for name in PARAM_NAMES:
        dims, values = data.load_tensor(src / f"{name}.gts")
        params[name] = values
    m = params["w_ii"].shape[0]
    return cell_from_params(m, params)


def evaluate_prediction(cell: LstmCell, latent_sequences, raw_sequences,
                        warmup: int, decode_fn) -> float:
    """Pixel-space free-run prediction MSE over a test set.

    Rolls the cell over the latent test sequences, decodes the
    predictions of the frames after the warm-up phase with
    ``decode_fn`` (mapping a (k, m) stack to (k, n)), and returns the
    mean over sequences of the MSE against the corresponding raw
    frames.  Pass an identity ``decode_fn`` for uncompressed inputs.
    """
    z = np.asarray(latent_sequences, dtype=np.float64)
    raw = np.asarray(raw_sequences, dtype=np.float64)
    if z.ndim != 3 or raw.ndim != 3:
        raise ValueError("sequence stacks must be 3-D (S, T, dim)")
    if z.shape[0] != raw.shape[0] or z.shape[1] != raw.shape[1]:
        raise ValueError("latent and raw sequence stacks must align")
    if z.shape[0] == 0:
        raise ValueError("no sequences to evaluate")
    _check_rollout_args(z.shape[1], warmup)
    if z.shape[2] != cell.m:
        raise ValueError(f"frame length {z.shape[2]} != m={cell.m}")

    preds, _ = _forward(cell, z, warmup, keep_cache=False)
    free = preds[:, warmup - 1:, :]          # predictions of frames W+1..T
    num_seq, num_eval, _ = free.shape
    decoded = decode_fn(free.reshape(num_seq * num_eval, -1))
    decoded = decoded.reshape(num_seq, num_eval, -1)
    targets = raw[:, warmup:, :]
    per_seq = np.mean((decoded - targets) ** 2, axis=(1, 2))
    return float(np.mean(per_seq))
