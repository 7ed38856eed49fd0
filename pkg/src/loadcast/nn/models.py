"""FFNN and LSTM regression networks for pointwise load prediction.

Both map a feature row to one load value. The FFNN treats rows
independently; the LSTM consumes the trailing `lookback` rows ending at the
target row, with state reset per sample, and feeds the final hidden state
through a linear unit. Networks own their cached input/target scalers, which
are refitted on every fit() call; parameters and optimizer moments persist
across fits (warm start).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import ColdStartError, ConfigError, DataError
from ..scaling import ScalerParams, fit_scaler, inverse_transform, transform
from .layers import DenseLayer, LstmLayer

NEURON_GRID = (8, 16, 32, 64, 128)
LAYER_RANGE = range(1, 9)


@dataclass(frozen=True)
class NetworkConfig:
    kind: str  # "ffnn" | "lstm"
    hidden_layers: int = 4
    neurons: int = 8
    lookback: int = 12  # lstm only: trailing rows per sample

    def __post_init__(self):
        if self.kind not in ("ffnn", "lstm"):
            raise ConfigError(f"unknown network kind {self.kind!r}")
        if self.hidden_layers not in LAYER_RANGE:
            raise ConfigError(f"hidden_layers must be in {LAYER_RANGE}")
        if self.neurons not in NEURON_GRID:
            raise ConfigError(f"neurons must be one of {NEURON_GRID}")
        if self.kind == "lstm" and self.lookback < 1:
            raise ConfigError("lookback must be >= 1")


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    max_epochs: int = 2000
    patience: int = 50
    batch_size: int | None = None  # None = full batch
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.patience < self.max_epochs:
            raise ConfigError("patience must lie in (0, max_epochs)")
        if self.batch_size is not None and self.batch_size < 1:
            raise ConfigError("batch_size must be positive")


def sliding_windows(rows: np.ndarray, lookback: int) -> np.ndarray:
    """(m, f) feature rows -> (m - lookback + 1, lookback, f) sequences."""
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim != 2:
        raise DataError("rows must be 2-D")
    if len(rows) < lookback:
        raise ColdStartError(
            f"need at least {lookback} rows of context, got {len(rows)}")
    view = np.lib.stride_tricks.sliding_window_view(rows, lookback, axis=0)
    return np.ascontiguousarray(view.transpose(0, 2, 1))


class _Network:
    """Shared machinery: parameter access, scaler cache, fit/predict."""

    def __init__(self, config: NetworkConfig, train_config: TrainConfig,
                 n_features: int):
        self.config = config
        self.train_config = train_config
        self.n_features = n_features
        self.layers: list = []
        self.x_scaler: ScalerParams | None = None
        self.y_scaler: ScalerParams | None = None
        self.history: list[float] = []
        self.optimizer = None  # created on first fit, kept across refits
        self.fit_count = 0
        self._shuffle_rng = np.random.default_rng(train_config.seed + 1)

    # -- parameter plumbing ------------------------------------------------

    def parameters(self):
        out = []
        for li, layer in enumerate(self.layers):
            for name, arr in layer.parameters():
                out.append((f"layer{li}.{name}", arr))
        return out

    def gradients(self):
        out = []
        for layer in self.layers:
            out.extend(layer.gradients())
        return out

    def zero_grads(self):
        for layer in self.layers:
            layer.zero_grads()

    def n_parameters(self) -> int:
        return sum(arr.size for _, arr in self.parameters())

    def get_flat(self) -> np.ndarray:
        return np.concatenate([arr.ravel() for _, arr in self.parameters()])

    def set_flat(self, vec: np.ndarray):
        pos = 0
        for _, arr in self.parameters():
            arr[...] = vec[pos:pos + arr.size].reshape(arr.shape)
            pos += arr.size
        if pos != len(vec):
            raise DataError("flat parameter vector has wrong length")

    def grads_flat(self) -> np.ndarray:
        return np.concatenate([g.ravel() for g in self.gradients()])

    def snapshot(self) -> list[np.ndarray]:
        return [arr.copy() for _, arr in self.parameters()]

    def restore(self, snap: list[np.ndarray]):
        for (_, arr), saved in zip(self.parameters(), snap):
            arr[...] = saved

    # -- prediction ---------------------------------------------------------

    def forward(self, Xn: np.ndarray) -> np.ndarray:
        """Predictions in normalized space for normalized inputs."""
        pred, _ = self._forward_full(np.asarray(Xn, dtype=np.float64))
        return pred

    @property
    def is_fitted(self) -> bool:
        return self.x_scaler is not None

    def predict(self, X_raw: np.ndarray) -> np.ndarray:
        """Predictions in watts; inputs in raw feature units."""
        if not self.is_fitted:
            raise ColdStartError("network has not been fitted yet")
        Xn = transform(np.asarray(X_raw, dtype=np.float64), self.x_scaler)
        pred = self.forward(Xn)
        return inverse_transform(pred, self.y_scaler)

    def fit(self, X_raw: np.ndarray, y_raw: np.ndarray):
        """Refit scalers, then warm-start training. Returns a FitReport."""
        from .training import fit_network
        return fit_network(self, X_raw, y_raw)

    # subclasses: _forward_full(Xn) -> (pred, cache); _backward_full(cache, dpred)


class FfnnNetwork(_Network):
    """ReLU hidden layers, one linear output unit, row-independent."""

    def __init__(self, config: NetworkConfig, train_config: TrainConfig,
                 n_features: int = 10):
        if config.kind != "ffnn":
            raise ConfigError("FfnnNetwork requires kind='ffnn'")
        super().__init__(config, train_config, n_features)
        rng = np.random.default_rng(train_config.seed)
        width = n_features
        for _ in range(config.hidden_layers):
            self.layers.append(DenseLayer(width, config.neurons, "relu", rng))
            width = config.neurons
        self.layers.append(DenseLayer(width, 1, "linear", rng))

    def _shape_input(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise DataError(f"expected (n, {self.n_features}) inputs")
        return X

    def _forward_full(self, Xn: np.ndarray):
        A = self._shape_input(Xn)
        caches = []
        for layer in self.layers:
            A, cache = layer.forward(A)
            caches.append(cache)
        return A[:, 0], caches

    def _backward_full(self, caches, dpred: np.ndarray):
        dA = np.asarray(dpred, dtype=np.float64)[:, None]
        for layer, cache in zip(reversed(self.layers), reversed(caches)):
            dA = layer.backward(dA, cache)
        return dA


class LstmNetwork(_Network):
    """Stacked LSTM layers over a trailing lookback, linear output unit."""

    def __init__(self, config: NetworkConfig, train_config: TrainConfig,
                 n_features: int = 10):
        if config.kind != "lstm":
            raise ConfigError("LstmNetwork requires kind='lstm'")
        super().__init__(config, train_config, n_features)
        rng = np.random.default_rng(train_config.seed)
        width = n_features
        for _ in range(config.hidden_layers):
            self.layers.append(LstmLayer(width, config.neurons, rng))
            width = config.neurons
        self.layers.append(DenseLayer(width, 1, "linear", rng))

    def _shape_input(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 3 or X.shape[2] != self.n_features:
            raise DataError(f"expected (n, lookback, {self.n_features}) inputs")
        return X

    def _forward_full(self, Xn: np.ndarray):
        H = self._shape_input(Xn)
        caches = []
        for layer in self.layers[:-1]:
            H, cache = layer.forward_sequence(H)
            caches.append(cache)
        last_h = H[:, -1, :]
        out, dense_cache = self.layers[-1].forward(last_h)
        caches.append(dense_cache)
        return out[:, 0], caches

    def _backward_full(self, caches, dpred: np.ndarray):
        d_last = self.layers[-1].backward(
            np.asarray(dpred, dtype=np.float64)[:, None], caches[-1])
        batch = d_last.shape[0]
        steps = len(caches[-2])
        dH = np.zeros((batch, steps, self.layers[-2].units))
        dH[:, -1, :] = d_last
        for layer, cache in zip(reversed(self.layers[:-1]), reversed(caches[:-1])):
            dH = layer.backward_sequence(dH, cache)
        return dH


def build_network(config: NetworkConfig,
                  train_config: TrainConfig | None = None,
                  n_features: int = 10,
                  seed: int | None = None):
    """Construct the network for a config; seed overrides the train config's."""
    tc = train_config or TrainConfig()
    if seed is not None:
        tc = replace(tc, seed=seed)
    cls = FfnnNetwork if config.kind == "ffnn" else LstmNetwork
    return cls(config, tc, n_features=n_features)
