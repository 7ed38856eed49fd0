from .layers import DenseLayer, LstmLayer, relu, sigmoid
from .models import (LAYER_RANGE, NEURON_GRID, FfnnNetwork, LstmNetwork,
                     NetworkConfig, TrainConfig, build_network, sliding_windows)
from .training import Adam, FitReport, fit_network, gradient_check
from .sweep import SweepCell, SweepTable, architecture_sweep

__all__ = [
    "Adam", "DenseLayer", "FfnnNetwork", "FitReport", "LAYER_RANGE",
    "LstmLayer", "LstmNetwork", "NEURON_GRID", "NetworkConfig", "SweepCell",
    "SweepTable", "TrainConfig", "architecture_sweep", "build_network",
    "fit_network", "gradient_check", "relu", "sigmoid", "sliding_windows",
]
