"""Adam optimizer and milestone learning-rate / weight-decay schedules.

Classic Adam with the L2 penalty folded into the gradient (coupled
decay, not AdamW-style decoupled decay).  Schedules are piecewise
constant: a milestone ``(epoch, divisor)`` divides the base value from
that epoch onward, inclusive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class AdamState:
    """Per-parameter Adam accumulators; owned by one training loop."""

    m: np.ndarray
    v: np.ndarray
    t: int
    beta1: float
    beta2: float
    eps: float


def adam_init(shape, beta1: float = 0.9, beta2: float = 0.999,
              eps: float = 1e-8) -> AdamState:
    if isinstance(shape, (int, np.integer)):
        shape = (int(shape),)
    shape = tuple(int(d) for d in shape)
    return AdamState(np.zeros(shape), np.zeros(shape), 0, beta1, beta2, eps)


def adam_step(state: AdamState, params: np.ndarray, grad: np.ndarray,
              lr: float, weight_decay: float = 0.0) -> np.ndarray:
    """One Adam update; returns the new parameter array.

    The effective gradient is ``grad + weight_decay * params``; both
    moment estimates are bias-corrected by the step counter.
    """
    params = np.asarray(params, dtype=np.float64)
    grad = np.asarray(grad, dtype=np.float64)
    if params.shape != grad.shape or params.shape != state.m.shape:
        raise ValueError(
            f"shape mismatch: params {params.shape}, grad {grad.shape}, "
            f"state {state.m.shape}"
        )
    if lr <= 0.0:
        raise ValueError("learning rate must be positive")

    g = grad + weight_decay * params
    state.t += 1
    state.m = state.beta1 * state.m + (1.0 - state.beta1) * g
    state.v = state.beta2 * state.v + (1.0 - state.beta2) * g * g
    m_hat = state.m / (1.0 - state.beta1 ** state.t)
    v_hat = state.v / (1.0 - state.beta2 ** state.t)
    return params - lr * m_hat / (np.sqrt(v_hat) + state.eps)


def _check_milestones(milestones, label):
    last = -1
    for entry in milestones:
        if len(entry) != 2:
            raise ValueError(f"{label} milestones must be (epoch, divisor) pairs")
        epoch, divisor = entry
        if epoch <= last:
            raise ValueError(f"{label} milestone epochs must be strictly increasing")
        if divisor <= 0:
            raise ValueError(f"{label} milestone divisors must be positive")
        last = epoch


@dataclass(frozen=True)
class TrainSchedule:
    """Epoch/batch counts plus stepwise lr and weight-decay schedules."""

    epochs: int
    batch_size: int
    lr0: float
    lr_milestones: tuple = ()
    wd0: float = 0.0
    wd_milestones: tuple = ()

    def __post_init__(self):
        if self.epochs < 0:
            raise ValueError("epochs must be nonnegative")
        if self.batch_size < 1:
            raise ValueError("batch_size must be at least 1")
        if self.lr0 <= 0.0:
            raise ValueError("lr0 must be positive")
        if self.wd0 < 0.0:
            raise ValueError("wd0 must be nonnegative")
        object.__setattr__(self, "lr_milestones",
                           tuple((int(e), float(d)) for e, d in self.lr_milestones))
        object.__setattr__(self, "wd_milestones",
                           tuple((int(e), float(d)) for e, d in self.wd_milestones))
        _check_milestones(self.lr_milestones, "lr")
        _check_milestones(self.wd_milestones, "wd")


def schedule_at(schedule: TrainSchedule, epoch: int) -> tuple[float, float]:
    """(lr, weight_decay) in force at the given epoch."""
    if not 0 <= epoch < schedule.epochs:
        raise ValueError(f"epoch {epoch} outside [0, {schedule.epochs})")
    lr = schedule.lr0
    for at, divisor in schedule.lr_milestones:
        if at <= epoch:
            lr /= divisor
    wd = schedule.wd0
    for at, divisor in schedule.wd_milestones:
        if at <= epoch:
            wd /= divisor
    return lr, wd


# Published training recipes for the full-scale experiments.
# Image autoencoder: 400 epochs, batches of 100, lr 1e-5, weight decay
# 1e-5 divided by 10 at epochs 4 and 120.
AE_IMAGE_SCHEDULE = TrainSchedule(
    epochs=400, batch_size=100, lr0=1e-5,
    wd0=1e-5, wd_milestones=((4, 10.0), (120, 10.0)),
)

# ROI-series autoencoder: 400 epochs, batches of 6, lr 1e-5 halved at
# epoch 200, constant weight decay 1e-5.
AE_ROI_SCHEDULE = TrainSchedule(
    epochs=400, batch_size=6, lr0=1e-5, lr_milestones=((200, 2.0),),
    wd0=1e-5,
)

# Sequence predictor: 600 epochs, batches of 6, lr 1e-3 halved at
# epochs 200 and 400, no weight decay.
LSTM_SCHEDULE = TrainSchedule(
    epochs=600, batch_size=6, lr0=1e-3,
    lr_milestones=((200, 2.0), (400, 2.0)),
)
