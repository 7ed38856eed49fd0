"""ADAM optimization, the MAE training loop, and the finite-difference check.

Training minimizes the mean absolute error on min-max-normalized data, stops
after `patience` epochs without improvement of the monitored training loss,
and restores the best weights seen. Refits keep parameters and optimizer
moments (warm start); only the scalers are refitted from the new window.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ..errors import DataError, DivergenceError
from ..scaling import fit_scaler, transform


class Adam:
    """ADAM with bias correction; moments persist across warm-start refits."""

    def __init__(self, learning_rate: float = 1e-3, beta1: float = 0.9,
                 beta2: float = 0.999, epsilon: float = 1e-8):
        self.lr = learning_rate
        self.beta1, self.beta2, self.epsilon = beta1, beta2, epsilon
        self.m: list[np.ndarray] | None = None
        self.v: list[np.ndarray] | None = None
        self.t = 0

    def step(self, params: list[np.ndarray], grads: list[np.ndarray]):
        if self.m is None:
            self.m = [np.zeros_like(p) for p in params]
            self.v = [np.zeros_like(p) for p in params]
        self.t += 1
        b1t = 1.0 - self.beta1 ** self.t
        b2t = 1.0 - self.beta2 ** self.t
        for p, g, m, v in zip(params, grads, self.m, self.v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            p -= self.lr * (m / b1t) / (np.sqrt(v / b2t) + self.epsilon)


@dataclass(frozen=True)
class FitReport:
    n_samples: int
    epochs: int
    best_epoch: int
    best_loss: float
    duration_s: float
    history: tuple[float, ...] = field(repr=False)


def _epoch_batches(n: int, batch_size: int | None, rng: np.random.Generator):
    if batch_size is None or batch_size >= n:
        yield np.arange(n)
        return
    order = rng.permutation(n)
    for lo in range(0, n, batch_size):
        yield order[lo:lo + batch_size]


def fit_network(model, X_raw: np.ndarray, y_raw: np.ndarray) -> FitReport:
    """Scaler refit + MAE/ADAM loop with early stopping and best-weight restore."""
    t0 = time.perf_counter()
    X_raw = np.asarray(X_raw, dtype=np.float64)
    y_raw = np.asarray(y_raw, dtype=np.float64)
    n = len(y_raw)
    if n < 1 or len(X_raw) != n:
        raise DataError("need at least one (X, y) sample with matching lengths")

    flat_X = X_raw.reshape(-1, X_raw.shape[-1])
    model.x_scaler = fit_scaler(flat_X)
    model.y_scaler = fit_scaler(y_raw)
    Xn = transform(X_raw, model.x_scaler)
    yn = transform(y_raw, model.y_scaler)

    cfg = model.train_config
    if model.optimizer is None:
        model.optimizer = Adam(cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon)
    params = [arr for _, arr in model.parameters()]

    best_loss = np.inf
    best_epoch = -1
    best_snap = model.snapshot()
    since_best = 0
    history: list[float] = []

    for epoch in range(cfg.max_epochs):
        # the monitored loss belongs to the weights as of the epoch start
        epoch_snap = model.snapshot()
        epoch_abs_err = 0.0
        for idx in _epoch_batches(n, cfg.batch_size, model._shuffle_rng):
            pred, cache = model._forward_full(Xn[idx])
            resid = pred - yn[idx]
            epoch_abs_err += float(np.abs(resid).sum())
            model.zero_grads()
            model._backward_full(cache, np.sign(resid) / len(idx))
            model.optimizer.step(params, model.gradients())
        loss = epoch_abs_err / n
        if not np.isfinite(loss):
            raise DivergenceError(
                f"non-finite training loss at epoch {epoch} "
                f"({model.config.kind}, {model.config.hidden_layers} layers, "
                f"{model.config.neurons} neurons)")
        history.append(loss)
        if loss < best_loss:
            best_loss = loss
            best_epoch = epoch
            best_snap = epoch_snap
            since_best = 0
        else:
            since_best += 1
            if since_best >= cfg.patience:
                break

    model.restore(best_snap)
    model.history = history
    model.fit_count += 1
    return FitReport(n_samples=n, epochs=len(history), best_epoch=best_epoch,
                     best_loss=best_loss, duration_s=time.perf_counter() - t0,
                     history=tuple(history))


def gradient_check(model, Xn: np.ndarray, yn: np.ndarray,
                   h: float = 1e-5) -> float:
    """Max relative error of analytic vs central finite-difference gradients.

    Uses a squared-error loss so the check is smooth (MAE has a kink at zero
    residual). Relative error per parameter is |ga - gn| / max(1, |ga|, |gn|).
    """
    Xn = np.asarray(Xn, dtype=np.float64)
    yn = np.asarray(yn, dtype=np.float64)
    n = len(yn)

    pred, cache = model._forward_full(Xn)
    model.zero_grads()
    model._backward_full(cache, 2.0 * (pred - yn) / n)
    analytic = model.grads_flat()

    def loss_at(theta: np.ndarray) -> float:
        model.set_flat(theta)
        p, _ = model._forward_full(Xn)
        return float(np.mean((p - yn) ** 2))

    theta0 = model.get_flat()
    numeric = np.empty_like(theta0)
    try:
        for k in range(len(theta0)):
            theta = theta0.copy()
            theta[k] = theta0[k] + h
            up = loss_at(theta)
            theta[k] = theta0[k] - h
            down = loss_at(theta)
            numeric[k] = (up - down) / (2.0 * h)
    finally:
        model.set_flat(theta0)

    scale = np.maximum(1.0, np.maximum(np.abs(analytic), np.abs(numeric)))
    return float(np.max(np.abs(analytic - numeric) / scale))
