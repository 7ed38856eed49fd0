"""Command-line entry points.

Subcommands: gen-data, correlate, simulate-forecast, sweep, ev-study.
Exit codes: 0 success, 2 configuration error, 3 data error, 4 run failure.
Config files are JSON; --seed overrides the config's seed.
"""

from __future__ import annotations

import argparse
import dataclasses
import datetime as _dt
import json
import sys
import warnings

from . import dataio
from .correlation import monthly_correlation_report
from .engine import EngineConfig, run as engine_run
from .errors import ConfigError, DataError, LoadcastError
from .ev import (design_driver_profiles, generate_sessions, run_ev_study,
                 run_forecast_fn)
from .features import build_features
from .forecasters import build_roster
from .generator import SyntheticBuildingSpec, gen_building_load, gen_temperature
from .nn.models import NetworkConfig, TrainConfig
from .nn.sweep import architecture_sweep
from .timeseries import SECONDS_PER_WEEK


def _load_config(path) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc


def _pick(config: dict, keys) -> dict:
    return {k: config[k] for k in keys if k in config}


def _engine_config(config: dict, seed_override) -> EngineConfig:
    keys = ("step_s", "horizon_steps", "window_days", "nn_refit",
            "nn_refit_second_of_day", "pslp_refit", "forecasters", "seed",
            "lead_in_days", "mape_mode", "store_forecasts")
    kwargs = _pick(config, keys)
    if "forecasters" in kwargs:
        kwargs["forecasters"] = tuple(kwargs["forecasters"])
    if seed_override is not None:
        kwargs["seed"] = seed_override
    try:
        return EngineConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"bad engine config: {exc}") from exc


def _train_config(config: dict, seed: int) -> TrainConfig:
    keys = ("learning_rate", "beta1", "beta2", "epsilon", "max_epochs",
            "patience", "batch_size")
    kwargs = _pick(config.get("train", {}), keys)
    return TrainConfig(seed=seed, **kwargs)


def _net_configs(config: dict) -> dict:
    out = {}
    for kind in ("ffnn", "lstm"):
        spec = config.get("nn", {}).get(kind)
        if spec:
            out[kind] = NetworkConfig(kind=kind, **spec)
    return out


def _cmd_gen_data(args) -> int:
    config = _load_config(args.config)
    seed = args.seed if args.seed is not None else config.get("seed", 0)
    field_names = {f.name for f in dataclasses.fields(SyntheticBuildingSpec)}
    kwargs = {k: v for k, v in config.items()
              if k in field_names and k not in ("seed", "start")}
    if "start" in config:
        kwargs["start"] = _dt.date.fromisoformat(config["start"])
    spec = SyntheticBuildingSpec(seed=seed, **kwargs)

    out = dataio.ensure_outdir(args.out, args.overwrite)
    load = gen_building_load(spec)
    temperature = gen_temperature(load.start, len(load), spec.step_s,
                                  seed=seed + 1)
    holidays = {_dt.date.fromisoformat(d) for d in config.get("holidays", [])}
    dataio.write_series_csv(out / "load.csv", load, "power_w")
    dataio.write_series_csv(out / "temperature.csv", temperature, "temp_c")
    dataio.write_holidays(out / "holidays.txt", holidays)
    dataio.write_manifest(out / "manifest.json", "gen-data",
                          dataclasses.asdict(spec) | {"holidays": sorted(
                              d.isoformat() for d in holidays)},
                          seed, {})
    print(f"wrote synthetic dataset to {out}")
    return 0


def _ingest(args):
    return dataio.ingest(args.load, args.temperature, args.holidays)


def _input_paths(args) -> dict:
    return {"load": args.load, "temperature": args.temperature,
            "holidays": args.holidays}


def _cmd_correlate(args) -> int:
    dataset, quality = _ingest(args)
    out = dataio.ensure_outdir(args.out, args.overwrite)
    load = dataset.load
    start = load.start + SECONDS_PER_WEEK
    steps = (load.end - start) // load.step_seconds
    if steps < 2:
        raise DataError("need more than 7 days of data to correlate features")
    matrix = build_features(load, dataset.temperature, dataset.holidays,
                            start, steps)
    report = monthly_correlation_report(matrix)

    path = out / "correlations.csv"
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(["feature"] + list(report.column_labels)) + "\n")
        for row in report.rows():
            fh.write(",".join("" if v is None else
                              (v if isinstance(v, str) else repr(v))
                              for v in row) + "\n")
    dataio.write_json(out / "quality.json", dataclasses.asdict(quality))
    dataio.write_manifest(out / "manifest.json", "correlate", {}, None,
                          _input_paths(args))
    print(f"wrote correlation report to {path}")
    return 0


def _cmd_simulate_forecast(args) -> int:
    config = _load_config(args.config)
    engine_config = _engine_config(config, args.seed)
    dataset, _quality = _ingest(args)
    out = dataio.ensure_outdir(args.out, args.overwrite)

    if not engine_config.forecasters:
        dataio.write_manifest(out / "manifest.json", "simulate-forecast",
                              config, engine_config.seed, _input_paths(args))
        print("empty forecaster roster: nothing to simulate", file=sys.stderr)
        return 2

    roster = build_roster(engine_config.forecasters, engine_config,
                          annual_kwh=config.get("annual_kwh"),
                          net_configs=_net_configs(config),
                          train_config=_train_config(config,
                                                     engine_config.seed))
    result = engine_run(dataset, engine_config, roster)
    dataio.export_run(out, result, "simulate-forecast",
                      config | dataclasses.asdict(engine_config),
                      _input_paths(args))
    print(f"simulated {result.n_steps} steps; artifacts in {out}")
    return 0


def _cmd_sweep(args) -> int:
    config = _load_config(args.config)
    engine_config = _engine_config(config.get("engine", {}), args.seed)
    dataset, _quality = _ingest(args)
    out = dataio.ensure_outdir(args.out, args.overwrite)

    table = architecture_sweep(
        dataset, engine_config,
        kind=config.get("kind", "ffnn"),
        layers=tuple(config.get("layers", list(range(1, 9)))),
        neurons=tuple(config.get("neurons", [8, 16, 32, 64, 128])),
        train_config=_train_config(config, engine_config.seed),
        lookback=config.get("lookback", 12))
    dataio.write_sweep_csv(out / "sweep_results.csv", table)
    dataio.write_sweep_timings(out / "sweep_timings.csv", table)
    dataio.write_manifest(out / "manifest.json", "sweep", config,
                          engine_config.seed, _input_paths(args))
    failed = sum(1 for c in table.cells if c.failed)
    print(f"swept {len(table.cells)} cells ({failed} failed); results in {out}")
    return 0


def _cmd_ev_study(args) -> int:
    config = _load_config(args.config)
    seed = args.seed if args.seed is not None else config.get("seed", 0)
    dataset, _quality = _ingest(args)
    out = dataio.ensure_outdir(args.out, args.overwrite)
    load = dataset.load

    session_cfg = config.get("sessions", {})
    working = tuple(session_cfg.get("working_hours", [8 * 3600, 18 * 3600]))
    profiles = design_driver_profiles(
        session_cfg.get("n_profiles", 10),
        seed=session_cfg.get("profiles_seed", seed))
    sessions = generate_sessions(
        profiles, load.start.date(),
        (load.end - load.start) // 86400, working, seed=seed,
        weekend_arrival_prob=session_cfg.get("weekend_arrival_prob", 0.05),
        holidays=dataset.holidays)

    forecaster = config.get("forecaster", "perfect")
    sim_start = sim_end = None
    forecast_fn = None
    if forecaster != "perfect":
        engine_config = _engine_config(config.get("engine", {}), args.seed)
        if forecaster not in engine_config.forecasters:
            engine_config = dataclasses.replace(
                engine_config, forecasters=(forecaster,))
        roster = build_roster(engine_config.forecasters, engine_config,
                              annual_kwh=config.get("annual_kwh"),
                              net_configs=_net_configs(config),
                              train_config=_train_config(
                                  config, engine_config.seed))
        run_result = engine_run(dataset, engine_config, roster)
        if not run_result.reports[forecaster]:
            raise DataError(f"forecaster {forecaster!r} never became ready")
        forecast_fn = run_forecast_fn(run_result, forecaster)
        first = run_result.first_emit_index[forecaster]
        sim_start = run_result.step_time(first)
        sim_end = run_result.sim_end

    study = run_ev_study(
        load, sessions,
        station_counts=tuple(config.get("stations", [2, 5, 10])),
        strategies=tuple(config.get("strategies",
                                    ["controlled", "uncontrolled"])),
        limit_w=config.get("limit_w"), forecast_fn=forecast_fn,
        sim_start=sim_start, sim_end=sim_end)

    dataio.write_ev_report(out / "ev_report.csv", out / "ev_report.txt", study)
    for sc in study.scenarios:
        dataio.write_sessions_csv(
            out / f"sessions_{sc.n_stations}_{sc.strategy}.csv", sc.sessions)
    dataio.write_manifest(out / "manifest.json", "ev-study", config, seed,
                          _input_paths(args))
    print(f"simulated {len(study.scenarios)} scenarios; report in {out}")
    return 0


def _add_io_args(p, needs_config: bool):
    p.add_argument("--load", required=True, help="load CSV (timestamp,power_w)")
    p.add_argument("--temperature", required=True,
                   help="temperature CSV (timestamp,temp_c)")
    p.add_argument("--holidays", help="holiday file, one ISO date per line")
    if needs_config:
        p.add_argument("--config", help="JSON config file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--overwrite", action="store_true",
                   help="allow writing into a non-empty directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loadcast",
        description="Rolling load forecasting and EV charging simulation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="generate a synthetic building dataset")
    p.add_argument("--config", help="JSON spec for the synthetic building")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--overwrite", action="store_true")
    p.set_defaults(handler=_cmd_gen_data)

    p = sub.add_parser("correlate", help="feature/load correlation table")
    _add_io_args(p, needs_config=False)
    p.set_defaults(handler=_cmd_correlate)

    p = sub.add_parser("simulate-forecast", help="run the rolling simulation")
    _add_io_args(p, needs_config=True)
    p.set_defaults(handler=_cmd_simulate_forecast)

    p = sub.add_parser("sweep", help="architecture sweep over the grid")
    _add_io_args(p, needs_config=True)
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("ev-study", help="EV charging scenario study")
    _add_io_args(p, needs_config=True)
    p.set_defaults(handler=_cmd_ev_study)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    warnings.filterwarnings("ignore", message="degenerate scaler column")
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except LoadcastError as exc:
        print(f"run failed: {exc}", file=sys.stderr)
        return 4
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"run failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
