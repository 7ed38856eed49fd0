"""Rolling load-forecasting toolkit with an EV-charging load-management
simulation: timeseries handling, profile and neural forecasters, 5-minute
sliding-window evaluation, and grid-oriented charging scheduling."""

from .calendars import DayClass, Season, classify_day
from .engine import (ColdStartDecision, Dataset, EngineConfig, SimulationRun,
                     StepContext, adaptation_report, cold_start_policy, run)
from .errors import (ColdStartError, ConfigError, DataError, DivergenceError,
                     LoadcastError, UndefinedMetricError)
from .features import FEATURE_NAMES, FeatureMatrix, build_features
from .forecasters import (NeuralForecaster, PslpForecaster, RefitRecord,
                          SlpForecaster, build_roster)
from .metrics import (BoxplotSummary, ErrorReport, aggregate, boxplot_summary,
                      evaluate, mae, mape, mase, rmse)
from .profiles import (PslpState, SlpProfileSet, builtin_g1_profile,
                       estimate_annual_kwh, pslp_forecast, pslp_refit,
                       slp_forecast)
from .scaling import ScalerParams, fit_scaler, inverse_transform, transform
from .correlation import CorrelationReport, monthly_correlation_report, pearson
from .timeseries import (GapReport, LoadSeries, Timestamp, regularize,
                         resample)

__version__ = "0.1.0"
