"""File formats: measurement/temperature CSVs, holiday lists, profile tables,
and the exported artifacts of a run (metrics, forecasts, summaries, manifest).

All writers format floats with repr() and contain no wall-clock fields, so
re-running a command with the same inputs and seed reproduces every output
byte for byte. Training durations, which are inherently non-deterministic,
go to a separate timings sidecar.
"""

from __future__ import annotations

import csv
import datetime as _dt
import hashlib
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .calendars import DayClass, Season
from .engine import Dataset, SimulationRun
from .errors import ConfigError, DataError
from .metrics import METRIC_FIELDS, aggregate, boxplot_summary
from .profiles import QH_PER_DAY, SlpProfileSet
from .timeseries import GapReport, LoadSeries, Timestamp, regularize, resample

# ---------------------------------------------------------------------------
# primitives


def _fmt(value) -> str:
    """Deterministic cell formatting; NaN/None become empty cells."""
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return repr(value)
    return str(value)


def _iso(epoch_seconds: int) -> str:
    return Timestamp(int(epoch_seconds)).isoformat()


def _parse_ts(text: str) -> int:
    return Timestamp.from_datetime(_dt.datetime.fromisoformat(text)).epoch_seconds


def sha256_of_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, float) and math.isnan(obj):
        return None
    if isinstance(obj, np.floating):
        return None if math.isnan(float(obj)) else float(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (frozenset, set)):
        return sorted(str(v) for v in obj)
    if isinstance(obj, Timestamp):
        return obj.isoformat()
    if isinstance(obj, _dt.date):
        return obj.isoformat()
    return obj


def write_json(path, payload) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(_json_safe(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")


def ensure_outdir(path, overwrite: bool = False) -> Path:
    out = Path(path)
    if out.exists():
        if not out.is_dir():
            raise ConfigError(f"{out} exists and is not a directory")
        if any(out.iterdir()) and not overwrite:
            raise ConfigError(f"{out} is not empty; pass --overwrite to reuse it")
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# measurement ingestion


def read_points_csv(path, value_column: str) -> list[tuple[int, float]]:
    """Rows of (epoch seconds, value); unparseable rows abort with line numbers."""
    points, bad_lines = [], []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "timestamp" not in reader.fieldnames \
                or value_column not in reader.fieldnames:
            raise DataError(
                f"{path}: expected header with 'timestamp' and {value_column!r}")
        for lineno, row in enumerate(reader, start=2):
            try:
                points.append((_parse_ts(row["timestamp"]),
                               float(row[value_column])))
            except (ValueError, TypeError):
                bad_lines.append(lineno)
    if bad_lines:
        shown = ", ".join(map(str, bad_lines[:20]))
        raise DataError(f"{path}: unparseable rows at lines {shown}"
                        + (" ..." if len(bad_lines) > 20 else ""))
    if not points:
        raise DataError(f"{path}: no data rows")
    return points


def read_holidays(path) -> frozenset:
    days = set()
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                days.add(_dt.date.fromisoformat(text))
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: bad date {text!r}") from exc
    return frozenset(days)


@dataclass(frozen=True)
class QualityReport:
    """Raw-data quality in the style of the dataset characteristics table."""

    n_rows: int
    native_step_s: int
    missing_pct: float
    duplicate_pct: float
    invalid_pct: float
    gaps: GapReport

    @property
    def combined_pct(self) -> float:
        return self.missing_pct + self.duplicate_pct + self.invalid_pct


def _native_step(points) -> int:
    ts = np.sort(np.unique(np.array([t for t, _ in points], dtype=np.int64)))
    if len(ts) < 2:
        raise DataError("need at least two distinct timestamps")
    return int(np.median(np.diff(ts)))


def ingest(load_path, temperature_path, holidays_path=None,
           step_s: int = 300) -> tuple[Dataset, QualityReport]:
    """Read, regularize, and resample the input files into an engine dataset."""
    points = read_points_csv(load_path, "power_w")
    native = _native_step(points)
    if native < step_s and step_s % native == 0:
        series, gaps = regularize(points, native)
        load = resample(series, step_s)
    else:
        load, gaps = regularize(points, step_s)
        native = step_s
    quality = QualityReport(
        n_rows=len(points), native_step_s=native,
        missing_pct=gaps.missing_pct,
        duplicate_pct=100.0 * gaps.duplicate_timestamps / len(points),
        invalid_pct=100.0 * gaps.invalid_values / len(points),
        gaps=gaps)

    temp_points = read_points_csv(temperature_path, "temp_c")
    finite = [v for _, v in temp_points if math.isfinite(v)]
    if not finite:
        raise DataError(f"{temperature_path}: no finite temperature values")
    # temperatures may legitimately be negative: shift, regularize, unshift
    shift = min(finite)
    shifted = [(t, v - shift) for t, v in temp_points]
    temp_series, _ = regularize(shifted, step_s)
    temperature = LoadSeries(temp_series.start, step_s, temp_series.values + shift)
    if not (temperature.start <= load.start and load.end <= temperature.end):
        raise DataError("temperature file does not cover the load span")

    holidays = read_holidays(holidays_path) if holidays_path else frozenset()
    return Dataset(load, temperature, holidays), quality


# ---------------------------------------------------------------------------
# plain series and profile tables


def write_series_csv(path, series: LoadSeries, value_column: str) -> None:
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["timestamp", value_column])
        for t, v in zip(series.timestamps(), series.values):
            writer.writerow([_iso(t), _fmt(float(v))])


def write_holidays(path, holidays) -> None:
    with open(path, "w", newline="\n") as fh:
        for d in sorted(holidays):
            fh.write(d.isoformat() + "\n")


def write_profile_csv(path, profiles: SlpProfileSet) -> None:
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["season", "day_class", "slot_index",
                         "power_w_per_1000kwh"])
        for season in Season:
            for day_class in DayClass:
                curve = profiles.curve(season, day_class)
                for i, v in enumerate(curve):
                    writer.writerow([season.value, day_class.value, i,
                                     _fmt(float(v))])


def read_profile_csv(path, label: str | None = None,
                     tolerance: float = 0.005) -> SlpProfileSet:
    """Load a profile table and validate the 1000 kWh/a normalization."""
    curves: dict = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for lineno, row in enumerate(reader, start=2):
            try:
                season = Season(row["season"])
                day_class = DayClass(row["day_class"])
                slot = int(row["slot_index"])
                value = float(row["power_w_per_1000kwh"])
            except (KeyError, ValueError, TypeError) as exc:
                raise DataError(f"{path}:{lineno}: bad profile row") from exc
            if not 0 <= slot < QH_PER_DAY:
                raise DataError(f"{path}:{lineno}: slot index {slot} out of range")
            curves.setdefault((season, day_class), np.full(QH_PER_DAY, np.nan))
            curves[(season, day_class)][slot] = value
    for key, curve in curves.items():
        if np.isnan(curve).any():
            raise DataError(f"{path}: incomplete curve for {key}")
    profiles = SlpProfileSet(label or Path(path).stem, curves)
    annual = profiles.annual_energy_kwh()
    if abs(annual - 1000.0) > 1000.0 * tolerance:
        raise DataError(
            f"{path}: profile integrates to {annual:.1f} kWh/a, "
            f"expected 1000 within {tolerance:.1%}")
    return profiles


# ---------------------------------------------------------------------------
# run artifacts


def write_metrics_csv(path, reports) -> None:
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["issued_at", "h", "mae_w", "rmse_w", "mape_pct", "mase"])
        for r in reports:
            writer.writerow([_iso(r.issued_at), r.h, _fmt(r.mae_w),
                             _fmt(r.rmse_w), _fmt(r.mape_pct), _fmt(r.mase)])


def write_forecast_csv(path, run: SimulationRun, name: str) -> None:
    forecasts = run.forecasts.get(name) or []
    reports = run.reports[name]
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        h = run.config.horizon_steps
        writer.writerow(["issued_at"] + [f"step_{i}" for i in range(h)])
        for report, values in zip(reports, forecasts):
            writer.writerow([_iso(report.issued_at)]
                            + [_fmt(float(v)) for v in values])


def write_refit_log_csv(path, records) -> None:
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["step_index", "issued_at", "forecaster", "event",
                         "n_rows", "train_min_ts", "train_max_ts", "epochs",
                         "final_loss"])
        for r in records:
            writer.writerow([
                r.step_index, _iso(r.issued_at), r.forecaster, r.event,
                r.n_rows,
                _iso(r.train_min_ts) if r.train_min_ts is not None else "",
                _iso(r.train_max_ts) if r.train_max_ts is not None else "",
                _fmt(r.epochs), _fmt(r.final_loss)])


def write_timings_csv(path, records) -> None:
    """Training wall times; the one deliberately non-deterministic artifact."""
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["step_index", "forecaster", "duration_s"])
        for r in records:
            if r.duration_s is not None:
                writer.writerow([r.step_index, r.forecaster, _fmt(r.duration_s)])


def run_summary(run: SimulationRun) -> dict:
    summary: dict = {
        "sim_start": run.sim_start.isoformat(),
        "sim_end": run.sim_end.isoformat(),
        "n_steps": run.n_steps,
        "forecasters": {},
        "failures": len(run.failures),
    }
    for name in run.forecaster_names:
        reports = run.reports[name]
        entry: dict = {
            "issuances": len(reports),
            "ready_from_step": run.ready_from_index.get(name),
            "first_emit_step": run.first_emit_index.get(name),
        }
        if reports:
            entry["averages"] = aggregate(reports)
            entry["boxplots"] = {}
            for metric in METRIC_FIELDS:
                values = np.array([getattr(r, metric) for r in reports])
                values = values[~np.isnan(values)]
                if len(values):
                    entry["boxplots"][metric] = asdict(boxplot_summary(values))
        summary["forecasters"][name] = entry
    return summary


def write_plotdata(out_dir, run: SimulationRun) -> list[Path]:
    """Per-forecaster x/y columns (issuance time, MAE) for external plotting."""
    written = []
    for name in run.forecaster_names:
        reports = run.reports[name]
        if not reports:
            continue
        path = Path(out_dir) / f"plot_mae_{name}.csv"
        with open(path, "w", newline="\n") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["x", "y"])
            for r in reports:
                writer.writerow([_iso(r.issued_at), _fmt(r.mae_w)])
        written.append(path)
    return written


def write_manifest(path, command: str, config: dict, seed,
                   input_paths: dict) -> None:
    write_json(path, {
        "command": command,
        "config": config,
        "seed": seed,
        "inputs": {name: {"path": str(p), "sha256": sha256_of_file(p)}
                   for name, p in input_paths.items() if p is not None},
    })


def export_run(out_dir, run: SimulationRun, command: str, config: dict,
               input_paths: dict) -> None:
    """Write the full artifact set of a completed rolling simulation."""
    out = Path(out_dir)
    write_manifest(out / "manifest.json", command, config, run.config.seed,
                   input_paths)
    for name in run.forecaster_names:
        if run.reports[name]:
            write_metrics_csv(out / f"metrics_{name}.csv", run.reports[name])
            if run.config.store_forecasts:
                write_forecast_csv(out / f"forecast_{name}.csv", run, name)
    write_refit_log_csv(out / "refit_log.csv", run.refit_log)
    write_timings_csv(out / "timings.csv", run.refit_log)
    write_json(out / "summary.json", run_summary(run))
    write_plotdata(out, run)


# ---------------------------------------------------------------------------
# EV study artifacts


def write_sessions_csv(path, sessions) -> None:
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["profile_id", "arrival", "departure", "soc_in",
                         "battery_kwh", "max_charge_w", "station",
                         "delivered_kwh", "charging_seconds", "soc_out"])
        for s in sessions:
            writer.writerow([
                _fmt(s.profile_id), s.arrival.isoformat(),
                s.departure.isoformat(), _fmt(s.soc_in),
                _fmt(s.vehicle.battery_kwh), _fmt(s.vehicle.max_charge_w),
                _fmt(s.station), _fmt(s.delivered_kwh), s.charging_seconds,
                _fmt(s.soc)])


def _duration_hms(hours: float) -> str:
    total = int(round(hours * 3600))
    return f"{total // 3600:02d}:{total % 3600 // 60:02d}:{total % 60:02d}"


def write_ev_report(csv_path, txt_path, study) -> None:
    """Scenario table (CSV) plus a human-readable rendering.

    Overloads count 5-minute steps above the limit, not distinct events.
    """
    rows = []
    for sc in study.scenarios:
        st = sc.stats
        rows.append({
            "stations": sc.n_stations, "strategy": sc.strategy,
            "avg_energy_kwh": st.avg_energy_kwh,
            "avg_duration_h": st.avg_duration_h,
            "registered_overloads": st.overload_count,
            "max_overload_kw": st.max_overload_w / 1000.0,
            "mean_overload_kw": st.mean_overload_w / 1000.0,
            "sessions_served": st.sessions_served,
            "sessions_total": st.sessions_total,
        })
    with open(csv_path, "w", newline="\n") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()),
                                lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _fmt(v) for k, v in row.items()})

    with open(txt_path, "w", newline="\n") as fh:
        fh.write(f"Grid connection limit: {study.limit_w / 1000.0:.0f} kW\n")
        fh.write("Registered overloads count 5-minute steps above the limit.\n\n")
        header = (f"{'stations':>8} {'strategy':<12} {'energy kWh':>11} "
                  f"{'duration':>9} {'overloads':>9} {'max kW':>8} {'mean kW':>8}\n")
        fh.write(header)
        for row in rows:
            fh.write(f"{row['stations']:>8} {row['strategy']:<12} "
                     f"{row['avg_energy_kwh']:>11.2f} "
                     f"{_duration_hms(row['avg_duration_h']):>9} "
                     f"{row['registered_overloads']:>9} "
                     f"{row['max_overload_kw']:>8.2f} "
                     f"{row['mean_overload_kw']:>8.2f}\n")


# ---------------------------------------------------------------------------
# sweep artifacts


def write_sweep_csv(path, table) -> None:
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["kind", "layers", "neurons", "mae_w", "mase",
                         "rmse_w", "mape_pct", "n_issuances", "failed",
                         "error"])
        for c in table.cells:
            writer.writerow([c.kind, c.layers, c.neurons, _fmt(c.mae_w),
                             _fmt(c.mase), _fmt(c.rmse_w), _fmt(c.mape_pct),
                             c.n_issuances, int(c.failed), c.error])


def write_sweep_timings(path, table) -> None:
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["kind", "layers", "neurons", "mean_train_seconds"])
        for c in table.cells:
            writer.writerow([c.kind, c.layers, c.neurons,
                             _fmt(c.mean_train_seconds)])
