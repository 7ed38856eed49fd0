"""Per-column min-max scaling to [0, 1] with exact inversion.

x_scal = (x - x_min) / (x_max - x_min); values outside the fitted range map
outside [0, 1] without clamping. A degenerate column (x_max == x_min)
transforms to 0 and is flagged so constant features do not abort training.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError


@dataclass(frozen=True)
class ScalerParams:
    x_min: np.ndarray = field(repr=False)
    x_max: np.ndarray = field(repr=False)

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.x_min, dtype=np.float64)).copy()
        hi = np.atleast_1d(np.asarray(self.x_max, dtype=np.float64)).copy()
        if lo.shape != hi.shape or lo.ndim != 1:
            raise DataError("x_min/x_max must be 1-D and of equal length")
        if np.any(hi < lo):
            raise DataError("x_max must be >= x_min per column")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "x_min", lo)
        object.__setattr__(self, "x_max", hi)

    @property
    def span(self) -> np.ndarray:
        return self.x_max - self.x_min

    @property
    def degenerate(self) -> np.ndarray:
        """Boolean mask of columns with x_max == x_min."""
        return self.span == 0.0

    @property
    def n_columns(self) -> int:
        return len(self.x_min)


def fit_scaler(matrix) -> ScalerParams:
    """Column-wise min/max of a non-empty (n,) or (n, k) matrix."""
    m = np.asarray(matrix, dtype=np.float64)
    if m.size == 0:
        raise DataError("cannot fit scaler on empty matrix")
    if m.ndim == 1:
        m = m[:, None]
    if m.ndim != 2:
        raise DataError("matrix must be 1-D or 2-D")
    params = ScalerParams(m.min(axis=0), m.max(axis=0))
    if params.degenerate.any():
        cols = np.flatnonzero(params.degenerate).tolist()
        warnings.warn(f"degenerate scaler column(s) {cols}: constant values map to 0",
                      stacklevel=2)
    return params


def _shape_for(matrix, params: ScalerParams):
    m = np.asarray(matrix, dtype=np.float64)
    squeeze = m.ndim == 1
    if squeeze:
        m = m[:, None]
    if m.shape[-1] != params.n_columns:
        raise DataError(
            f"matrix has {m.shape[-1]} columns, scaler was fitted on {params.n_columns}")
    return m, squeeze


def transform(matrix, params: ScalerParams) -> np.ndarray:
    m, squeeze = _shape_for(matrix, params)
    span = np.where(params.degenerate, 1.0, params.span)
    out = (m - params.x_min) / span
    out[..., params.degenerate] = 0.0
    return out[:, 0] if squeeze else out


def inverse_transform(matrix, params: ScalerParams) -> np.ndarray:
    m, squeeze = _shape_for(matrix, params)
    out = m * params.span + params.x_min
    # degenerate columns carry no information; restore the constant
    out[..., params.degenerate] = params.x_min[params.degenerate]
    return out[:, 0] if squeeze else out
