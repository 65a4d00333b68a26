"""``powercast`` command line: synth, diagnose, fit, forecast, evaluate, compare.

Exit status is 0 on success, 1 on a usage or configuration error and 2
when a run fails. Output files land in ``--out-dir`` (default: the
``POWERCAST_OUT`` environment variable, else the working directory).
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .artifacts import load_json, model_from_dict, save_json, write_text
from .core import iso, read_dataset, serialize_dataset
from .errors import BadConfig, ConfigError, PowercastError
from .families import FAMILIES
from .pipeline import (
    RunConfig,
    compare,
    compare_table,
    diagnose,
    evaluate_family,
    fit_family,
    forecast_from,
    horizon_days,
    model_artifact,
    parse_order,
    prepare,
)
from .presets import DEFAULT_SPLIT, PRESETS
from .svg import correlogram, line_plot
from .synth import SynthConfig, generate_synthetic

OUT_ENV = "POWERCAST_OUT"
USAGE_ERROR, RUN_ERROR = 1, 2

log = logging.getLogger("powercast")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _out_dir(args) -> Path:
    return Path(args.out_dir or os.environ.get(OUT_ENV) or ".")


def _add_data_flags(p):
    p.add_argument("--input", help="dataset CSV (date,load,generation,deficit,temperature,humidity)")
    p.add_argument("--target", choices=["load", "generation", "deficit"])
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--config", help="RunConfig JSON file; flags override its values")
    p.add_argument("--savgol", metavar="W,P", help="Savitzky-Golay window,polyorder")
    p.add_argument("--no-savgol", action="store_true")
    p.add_argument("--no-interpolate", action="store_true")
    p.add_argument("--no-log", action="store_true")
    p.add_argument("--log-offset", type=float)
    p.add_argument("--exog", help="comma-separated exogenous columns ('' for none)")
    p.add_argument("--seed", type=int)
    p.add_argument("--out-dir")


def _add_model_flags(p):
    p.add_argument("--family", choices=sorted(FAMILIES))
    p.add_argument("--order", metavar="p,d,q")
    p.add_argument("--seasonal", metavar="P,D,Q,s")
    p.add_argument("--params", help="JSON object of family hyperparameters")
    sel = p.add_mutually_exclusive_group()
    sel.add_argument("--auto", action="store_true", help="auto-ARIMA order search")
    sel.add_argument("--grid", help="JSON object of parameter lists for grid search")
    p.add_argument("--folds", type=int)
    p.add_argument("--score", choices=["mse", "rmse", "mae", "mape"])
    p.add_argument("--split-date")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="powercast", description="Daily electricity forecasting toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", metavar="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("synth", help="write a synthetic dataset CSV")
    p.add_argument("--config", help="SynthConfig JSON file")
    p.add_argument("--seed", type=int)
    p.add_argument("--start")
    p.add_argument("--end")
    p.add_argument("--out", help="output CSV path (default: <out-dir>/synth.csv)")
    p.add_argument("--out-dir")

    p = sub.add_parser("diagnose", help="ADF test, ACF/PACF and correlogram")
    _add_data_flags(p)
    p.add_argument("--max-lag", type=int, default=40)
    p.add_argument("--regression", choices=["n", "c", "ct"], default="ct")
    p.add_argument("--diff", type=int, default=1, help="differencing order for the second ADF test")

    p = sub.add_parser("fit", help="fit one model and write its artifact")
    _add_data_flags(p)
    _add_model_flags(p)

    p = sub.add_parser("forecast", help="forecast to a horizon end date")
    _add_data_flags(p)
    _add_model_flags(p)
    p.add_argument("--model", help="model.json from 'fit' (otherwise fit on the full input)")
    p.add_argument("--horizon-end")
    p.add_argument("--horizon", type=int, help="number of days (overrides --horizon-end)")

    p = sub.add_parser("evaluate", help="held-out metrics on both scales")
    _add_data_flags(p)
    _add_model_flags(p)
    p.add_argument("--multi-step", action="store_true", help="score one forecast from the split origin")

    p = sub.add_parser("compare", help="all six families side by side")
    _add_data_flags(p)
    p.add_argument("--split-date")
    p.add_argument("--multi-step", action="store_true")
    p.add_argument("--families", help="comma-separated subset (default: all six)")
    return parser


def _json_arg(text, what):
    if text is None:
        return None
    try:
        value = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{what} is not valid JSON: {exc}") from None
    if not isinstance(value, dict):
        raise ConfigError(f"{what} must be a JSON object")
    return value


def run_config(args) -> RunConfig:
    config_text = Path(args.config).read_text(encoding="utf-8") if getattr(args, "config", None) else None
    o: dict = {"input": args.input, "target": args.target, "seed": args.seed}
    if args.no_interpolate:
        o["interpolate"] = False
    if args.no_log:
        o["log"] = False
    o["log_offset"] = args.log_offset
    if args.no_savgol:
        o["savgol"] = None
    elif args.savgol:
        o["savgol"] = parse_order(args.savgol)
    if args.exog is not None:
        o["exog"] = [n for n in args.exog.split(",") if n]
    o["split_date"] = getattr(args, "split_date", None)
    if getattr(args, "multi_step", False):
        o["multi_step"] = True
    if getattr(args, "horizon_end", None):
        o["horizon_end"] = args.horizon_end
    if getattr(args, "family", None):
        o["family"] = args.family
    params = _json_arg(getattr(args, "params", None), "--params") or {}
    if getattr(args, "order", None):
        params["order"] = parse_order(args.order)
    if getattr(args, "seasonal", None):
        params["seasonal_order"] = parse_order(args.seasonal)
    if params:
        o["params"] = params
    if getattr(args, "auto", False):
        o["mode"] = "auto"
    grid = _json_arg(getattr(args, "grid", None), "--grid")
    if grid:
        o["mode"], o["grid"] = "grid", grid
    o["folds"] = getattr(args, "folds", None)
    o["score"] = getattr(args, "score", None)
    return RunConfig.from_sources(args.preset, config_text, o)


def _load_prepared(cfg: RunConfig):
    if not cfg.input:
        raise ConfigError("--input is required")
    ds = read_dataset(cfg.input)
    return prepare(ds, cfg)


def cmd_synth(args) -> None:
    text = Path(args.config).read_text(encoding="utf-8") if args.config else ""
    try:
        cfg = SynthConfig.from_json(text, seed=args.seed, start=args.start, end=args.end)
    except (TypeError, json.JSONDecodeError) as exc:
        raise BadConfig(str(exc)) from None
    out = Path(args.out) if args.out else _out_dir(args) / "synth.csv"
    write_text(out, serialize_dataset(generate_synthetic(cfg)))
    print(out)


def cmd_diagnose(args) -> None:
    cfg = run_config(args)
    prep = _load_prepared(cfg)
    report = diagnose(prep, args.max_lag, args.regression, args.diff)
    out = _out_dir(args)
    save_json(out / "diagnostics.json", report)
    band = report["acf"][0]["band"]
    svg = correlogram([p["value"] for p in report["acf"][1:]], [p["value"] for p in report["pacf"][1:]],
                      band, f"{cfg.target}: ACF / PACF")
    write_text(out / "correlogram.svg", svg)
    a = report["adf"]
    print(f"ADF {cfg.target}: stat={a['statistic']:.4f} p={a['pvalue']:.4g} "
          f"{'stationary' if a['stationary'] else 'unit root not rejected'}")


def _train_span(cfg: RunConfig, prep):
    if cfg.split_date is None:
        return prep
    from .evaluation import train_test_split
    train, _ = train_test_split(prep.series, cfg.split_date)
    n = len(train)
    exog = None if prep.exog is None else prep.exog.slice(0, n)
    return type(prep)(prep.raw.slice(0, n), train, prep.chain, exog)


def cmd_fit(args) -> None:
    cfg = run_config(args)
    prep = _train_span(cfg, _load_prepared(cfg))
    model, report = fit_family(cfg, cfg.family, prep.series, prep.exog, prep.chain)
    out = _out_dir(args)
    save_json(out / "model.json", model_artifact(cfg, cfg.family, model, prep, prep.series.end))
    report.update(target=cfg.target, train_start=iso(prep.series.start), train_end=iso(prep.series.end),
                  n_train=len(prep.series), chain=prep.chain.to_dict())
    save_json(out / "fit_report.json", report)
    print(f"{cfg.family}: {report['summary'].get('label', report['summary'].get('kind'))}")


def cmd_forecast(args) -> None:
    cfg = run_config(args)
    prep = _load_prepared(cfg)
    if args.model:
        art = load_json(args.model)
        family, model = art.get("family"), model_from_dict(art.get("model", {}))
        if family not in FAMILIES:
            raise ConfigError(f"{args.model}: unknown family {family!r}")
    else:
        family = cfg.family
        model, _ = fit_family(cfg, family, prep.series, prep.exog, prep.chain)
    horizon = horizon_days(prep.series.end, cfg.horizon_end, args.horizon)
    fc = forecast_from(family, model, prep, horizon)
    lines = ["date,prediction_original,prediction_transformed"]
    for day, po, pt in zip(fc.days, fc.predictions, fc.transformed):
        lines.append(f"{iso(day)},{float(po)!r},{float(pt)!r}")
    out = _out_dir(args)
    write_text(out / "forecast.csv", "\n".join(lines) + "\n")
    hist = prep.chain.inverse(prep.series.values)
    svg = line_plot([("history", prep.series.days, hist), ("forecast", fc.days, fc.predictions)],
                    f"{cfg.target}: {fc.model}", "day", prep.raw.unit)
    write_text(out / "forecast.svg", svg)
    print(f"{family}: {horizon} days to {iso(fc.days[-1])}")


def cmd_evaluate(args) -> None:
    cfg = run_config(args)
    prep = _load_prepared(cfg)
    row, _, report = evaluate_family(cfg, cfg.family, prep)
    result = {"target": cfg.target, "split_date": cfg.split_date or DEFAULT_SPLIT,
              "evaluation": "multi-step" if cfg.multi_step else "one-step",
              **row, "fit": report}
    save_json(_out_dir(args) / "metrics.json", result)
    m = row["metrics"]["original"]
    mape = "undefined" if m["mape"] is None else f"{m['mape']:.4f}%"
    print(f"{row['label']}: RMSE={m['rmse']:.4f} MAE={m['mae']:.4f} MAPE={mape}")


def cmd_compare(args) -> None:
    cfg = run_config(args)
    prep = _load_prepared(cfg)
    fams = [f for f in args.families.split(",") if f] if args.families else None
    if fams:
        bad = [f for f in fams if f not in FAMILIES or f == "naive"]
        if bad:
            raise ConfigError(f"unknown families: {bad}")
    result = compare(cfg, prep, fams)
    out = _out_dir(args)
    save_json(out / "compare.json", result)
    table = compare_table(result)
    write_text(out / "compare.txt", table)
    sys.stdout.write(table)


COMMANDS = {
    "synth": cmd_synth,
    "diagnose": cmd_diagnose,
    "fit": cmd_fit,
    "forecast": cmd_forecast,
    "evaluate": cmd_evaluate,
    "compare": cmd_compare,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return USAGE_ERROR
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        with warnings.catch_warnings():
            if not args.verbose:
                warnings.simplefilter("ignore")
            COMMANDS[args.command](args)
    except (ConfigError, BadConfig) as exc:
        print(f"powercast {args.command}: configuration error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (PowercastError, OSError, ValueError, np.linalg.LinAlgError) as exc:
        print(f"powercast {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return RUN_ERROR
    return 0


if __name__ == "__main__":
    sys.exit(main())
