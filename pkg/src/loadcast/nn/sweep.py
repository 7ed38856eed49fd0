"""Architecture sweep: rolling evaluation for every (layers, neurons) cell.

Each cell runs the sliding-window simulation with a single neural forecaster
and reports metric averages over all issuances plus the mean training time.
Failing cells are marked and the sweep continues.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..metrics import aggregate
from .models import LAYER_RANGE, NEURON_GRID, NetworkConfig, TrainConfig


@dataclass(frozen=True)
class SweepCell:
    kind: str
    layers: int
    neurons: int
    mae_w: float = float("nan")
    mase: float = float("nan")
    rmse_w: float = float("nan")
    mape_pct: float = float("nan")
    n_issuances: int = 0
    mean_train_seconds: float = float("nan")
    failed: bool = False
    error: str = ""


@dataclass(frozen=True)
class SweepTable:
    kind: str
    layers: tuple[int, ...]
    neurons: tuple[int, ...]
    cells: tuple[SweepCell, ...]

    def cell(self, layers: int, neurons: int) -> SweepCell:
        for c in self.cells:
            if c.layers == layers and c.neurons == neurons:
                return c
        raise KeyError((layers, neurons))

    def grid(self, metric: str) -> np.ndarray:
        """(neurons x layers) matrix of one metric, NaN for failed cells."""
        out = np.full((len(self.neurons), len(self.layers)), np.nan)
        for c in self.cells:
            if not c.failed:
                out[self.neurons.index(c.neurons),
                    self.layers.index(c.layers)] = getattr(c, metric)
        return out


def architecture_sweep(dataset, engine_config, kind: str = "ffnn",
                       layers=tuple(LAYER_RANGE), neurons=NEURON_GRID,
                       train_config: TrainConfig | None = None,
                       lookback: int = 12) -> SweepTable:
    """Run the rolling evaluation once per architecture cell.

    dataset is the (load, temperature, holidays) bundle the engine consumes.
    Every cell gets a seed derived from the engine seed and its coordinates,
    so cells are independent and reproducible.
    """
    from ..engine import run as engine_run
    from ..forecasters import NeuralForecaster

    base_tc = train_config or TrainConfig()
    cells = []
    for n_layers in layers:
        for n_neurons in neurons:
            cell_seed = int(engine_config.seed) * 1_000_000 \
                + n_layers * 1_000 + n_neurons
            net_cfg = NetworkConfig(kind, hidden_layers=n_layers,
                                    neurons=n_neurons, lookback=lookback)
            tc = replace(base_tc, seed=cell_seed)
            try:
                fc = NeuralForecaster(kind, net_cfg, tc,
                                      refit_mode=engine_config.nn_refit)
                result = engine_run(dataset, engine_config, [fc])
                reports = result.reports[fc.name]
                agg = aggregate(reports)
                fit_secs = [r.duration_s for r in result.refit_log
                            if r.forecaster == fc.name and r.duration_s is not None]
                cells.append(SweepCell(
                    kind, n_layers, n_neurons,
                    mae_w=agg["mae_w"], mase=agg["mase"], rmse_w=agg["rmse_w"],
                    mape_pct=agg["mape_pct"], n_issuances=len(reports),
                    mean_train_seconds=float(np.mean(fit_secs)) if fit_secs
                    else float("nan")))
            except Exception as exc:  # marked, not fatal: sweep continues
                cells.append(SweepCell(kind, n_layers, n_neurons,
                                       failed=True, error=str(exc)))
    return SweepTable(kind, tuple(layers), tuple(neurons), tuple(cells))
