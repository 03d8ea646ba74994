"""Command-line front end for the full pipeline and its individual stages.

Runs are driven by a flat key = value config file (see README for the
schema); command-line flags override config values. All randomness
flows from a single master seed, echoed into the output so any run can
be reproduced exactly.
"""

from __future__ import annotations

import argparse
import datetime as dt
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import report
from .cointegration import CointReport, johansen_test
from .diagnostics import DiagnosticsReport, diagnose_residuals
from .exceptions import ConfigError, DataError, NumericalError, SvarLingamError
from .ingest import (
    Panel,
    RawSeries,
    StatsTable,
    align_panel,
    compute_cer,
    load_price_csv,
    log_transform,
    read_panel_csv,
    slice_period,
    summary_stats,
    weekend_fill,
    write_panel_csv,
)
from .irf import IrfResult, compare_subperiods, irf_bootstrap_bands, structural_irf
from .svar import (
    BootstrapSummary,
    CausalGraph,
    SvarLingamModel,
    bootstrap_significance,
    fit_svar_lingam,
    to_causal_graph,
)
from .synthetic import GroundTruthSpec, generate_svar
from .unitroot import AdfReport, adf_test, select_lag_sic
from .var import VarModel, fit_var, select_var_lag_sic

_DEFAULTS = {
    "date_column": "Date",
    "value_column": "Close",
    "log": "true",
    "lag": "sic",
    "max_lag": "8",
    "adf_max_lag": "8",
    "adf_spec": "constant",
    "ljung_box_lags": "10",
    "bootstrap_iterations": "1000",
    "irf_horizon": "20",
    "irf_level": "0.99",
    "graph_level": "95%",
    "nonlinearity": "tanh",
    "ica_max_iter": "200",
    "ica_tol": "1e-4",
}


def parse_config(path) -> dict[str, str]:
    """Flat key = value file; '#' starts a comment, blank lines ignored."""
    config: dict[str, str] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{line_no}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        config[key.strip()] = value.strip()
    return config


def _get(config: dict, key: str, default=None) -> str | None:
    if key in config:
        return config[key]
    if key in _DEFAULTS:
        return _DEFAULTS[key]
    return default


def _get_int(config, key) -> int:
    raw = _get(config, key)
    try:
        return int(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"config key {key!r} must be an integer, got {raw!r}") from None


def _get_float(config, key) -> float:
    raw = _get(config, key)
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"config key {key!r} must be a number, got {raw!r}") from None


def _get_bool(config, key) -> bool:
    raw = (_get(config, key) or "").lower()
    if raw in ("true", "yes", "1"):
        return True
    if raw in ("false", "no", "0"):
        return False
    raise ConfigError(f"config key {key!r} must be true/false, got {raw!r}")


def _get_date(config, key) -> dt.date | None:
    raw = config.get(key)
    if raw is None:
        return None
    try:
        return dt.date.fromisoformat(raw)
    except ValueError:
        raise ConfigError(f"config key {key!r} must be an ISO date, got {raw!r}") from None


def build_panel(config: dict) -> Panel:
    """Panel from config: either a prebuilt panel CSV or raw price files.

    Raw mode loads a spot series (weekend-filled over [start, end]) and
    any number of exchange-rate pairs under cer.<NAME>.eur/usd, applies
    the optional log transform, and aligns everything on shared dates.
    """
    if "panel" in config:
        panel = read_panel_csv(config["panel"])
        start, end = _get_date(config, "start"), _get_date(config, "end")
        if start or end:
            panel = slice_period(panel, start or panel.dates[0], end or panel.dates[-1])
        return panel

    date_col = _get(config, "date_column")
    value_col = _get(config, "value_column")
    use_log = _get_bool(config, "log")

    series = []
    if "spot.file" in config:
        spot = load_price_csv(config["spot.file"], date_col, value_col)
        spot = RawSeries(_get(config, "spot.name", "SPT"), spot.dates, spot.values)
        start = _get_date(config, "start") or spot.dates[0]
        end = _get_date(config, "end") or spot.dates[-1]
        spot = weekend_fill(spot, start, end)
        series.append(spot)

    pair_names: list[str] = []
    for key in config:
        if key.startswith("cer.") and key.count(".") == 2:
            name = key.split(".")[1]
            if name not in pair_names:
                pair_names.append(name)
    for name in pair_names:
        eur_key, usd_key = f"cer.{name}.eur", f"cer.{name}.usd"
        if eur_key not in config or usd_key not in config:
            raise ConfigError(f"pair {name!r} needs both {eur_key} and {usd_key}")
        eur = load_price_csv(config[eur_key], date_col, value_col)
        usd = load_price_csv(config[usd_key], date_col, value_col)
        series.append(compute_cer(eur, usd, name=name))

    if not series:
        raise ConfigError("config must provide either 'panel' or spot.file/cer.* inputs")
    if use_log:
        series = [log_transform(s) for s in series]
    if len(series) == 1:
        raise ConfigError("need at least two variables to build a panel")
    panel = align_panel(series)
    start, end = _get_date(config, "start"), _get_date(config, "end")
    if start or end:
        panel = slice_period(panel, start or panel.dates[0], end or panel.dates[-1])
    return panel


@dataclass(frozen=True)
class ReportBundle:
    """Everything one pipeline run produces, written as one file per table."""

    config: dict[str, str]
    panel: Panel
    stats: StatsTable
    adf_levels: list[AdfReport]
    adf_diffs: list[AdfReport]
    coint: CointReport
    var: VarModel
    diagnostics: DiagnosticsReport
    model: SvarLingamModel
    bootstrap: BootstrapSummary
    irf: IrfResult
    irf_first: IrfResult | None
    irf_second: IrfResult | None
    graph: CausalGraph

    def files(self) -> dict[str, str]:
        out = {
            "config.txt": "".join(f"{k} = {self.config[k]}\n" for k in sorted(self.config)),
            "stats.csv": self.stats.to_csv(),
            "adf.csv": report.adf_table_csv(self.adf_levels, self.adf_diffs),
            "adf.json": report.to_json(
                {
                    "levels": [r.to_dict() for r in self.adf_levels],
                    "differences": [r.to_dict() for r in self.adf_diffs],
                }
            ),
            "johansen.csv": report.johansen_table_csv(self.coint),
            "johansen.json": report.to_json(self.coint.to_dict()),
            "var_coefficients.csv": report.var_table_csv(self.var),
            "var_model.json": report.to_json(self.var.to_dict()),
            "diagnostics.csv": report.diagnostics_table_csv(self.diagnostics),
            "diagnostics.json": report.to_json(self.diagnostics.to_dict()),
            "svar_model.json": report.to_json(self.model.to_dict()),
            "svar_coefficients.csv": report.svar_table_csv(self.bootstrap),
            "bootstrap.json": report.to_json(self.bootstrap.to_dict()),
            "irf.csv": report.irf_long_csv(self.irf),
            "irf.json": report.to_json(self.irf.to_dict()),
            "graph.dot": report.export_dot(self.graph),
            "graph.json": report.to_json(self.graph.to_dict()),
        }
        if self.irf_first is not None:
            out["irf_first.csv"] = report.irf_long_csv(self.irf_first)
            out["irf_second.csv"] = report.irf_long_csv(self.irf_second)
        return out

    def write(self, out_dir) -> list[Path]:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        written = []
        files = self.files()
        panel_path = out_dir / "panel.csv"
        write_panel_csv(self.panel, panel_path)
        written.append(panel_path)
        for name, text in files.items():
            path = out_dir / name
            path.write_text(text, encoding="utf-8")
            written.append(path)
        return written


class _Stage:
    """Annotates any error with the pipeline stage that raised it."""

    def __init__(self, name: str):
        self.name = name

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is not None and isinstance(exc, SvarLingamError):
            exc.args = (f"stage '{self.name}': {exc.args[0] if exc.args else ''}",) + exc.args[1:]
        return False


def run_pipeline(config: dict[str, str]) -> ReportBundle:
    """Execute ingest through IRF under one config and master seed."""
    config = dict(config)
    if "seed" not in config:
        config["seed"] = str(int(np.random.SeedSequence().generate_state(1)[0]))
    seed = _get_int(config, "seed")
    nonlinearity = _get(config, "nonlinearity")
    ica_max_iter = _get_int(config, "ica_max_iter")
    ica_tol = _get_float(config, "ica_tol")

    with _Stage("ingest"):
        panel = build_panel(config)
    with _Stage("stats"):
        stats = summary_stats(panel)
    with _Stage("adf"):
        spec = _get(config, "adf_spec")
        adf_max = _get_int(config, "adf_max_lag")
        adf_levels, adf_diffs = [], []
        for name in panel.names:
            col = panel.column(name)
            adf_levels.append(adf_test(col, select_lag_sic(col, adf_max, spec), spec))
            diff = _difference(col)
            adf_diffs.append(adf_test(diff, select_lag_sic(diff, adf_max, spec), spec))
    with _Stage("lag-selection"):
        lag_cfg = _get(config, "lag")
        if lag_cfg == "sic":
            p = select_var_lag_sic(panel, _get_int(config, "max_lag"))
        else:
            try:
                p = int(lag_cfg)
            except ValueError:
                raise ConfigError(f"lag must be 'sic' or an integer, got {lag_cfg!r}") from None
    with _Stage("johansen"):
        coint = johansen_test(panel, max(p, 1))
    with _Stage("var"):
        var = fit_var(panel, p)
        diagnostics = diagnose_residuals(var, _get_int(config, "ljung_box_lags"))
    with _Stage("fit"):
        model = fit_svar_lingam(
            panel, p, nonlinearity=nonlinearity, max_iter=ica_max_iter, tol=ica_tol, seed=seed
        )
    with _Stage("bootstrap"):
        iterations = _get_int(config, "bootstrap_iterations")
        summary = bootstrap_significance(model, panel, iterations=iterations, seed=seed)
    with _Stage("irf"):
        horizon = _get_int(config, "irf_horizon")
        level = _get_float(config, "irf_level")
        irf = irf_bootstrap_bands(
            model, panel, horizon, level=level, iterations=iterations, seed=seed
        )
        split = _get_date(config, "split_date")
        irf_first = irf_second = None
        if split is not None:
            _, first, second = compare_subperiods(
                panel,
                split,
                p,
                horizon,
                nonlinearity=nonlinearity,
                max_iter=ica_max_iter,
                tol=ica_tol,
                seed=seed,
            )
            irf_first, irf_second = first, second
    with _Stage("graph"):
        graph = to_causal_graph(model, summary, _get(config, "graph_level"))

    return ReportBundle(
        config=config,
        panel=panel,
        stats=stats,
        adf_levels=adf_levels,
        adf_diffs=adf_diffs,
        coint=coint,
        var=var,
        diagnostics=diagnostics,
        model=model,
        bootstrap=summary,
        irf=irf,
        irf_first=irf_first,
        irf_second=irf_second,
        graph=graph,
    )


def _difference(series: RawSeries) -> RawSeries:
    return RawSeries(
        f"d_{series.name}", series.dates[1:], np.diff(np.asarray(series.values, dtype=float))
    )


def _load_panel_arg(args) -> Panel:
    return read_panel_csv(args.panel)


def _write(out_dir: str, name: str, text: str) -> Path:
    path = Path(out_dir) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    print(path)
    return path


def _cmd_ingest(args) -> None:
    config = parse_config(args.config)
    panel = build_panel(config)
    Path(args.out_dir).mkdir(parents=True, exist_ok=True)
    path = Path(args.out_dir) / "panel.csv"
    write_panel_csv(panel, path)
    print(path)


def _cmd_stats(args) -> None:
    panel = _load_panel_arg(args)
    _write(args.out_dir, "stats.csv", summary_stats(panel).to_csv())


def _cmd_adf(args) -> None:
    panel = _load_panel_arg(args)
    levels, diffs = [], []
    for name in panel.names:
        col = panel.column(name)
        lag = args.lag if args.lag is not None else select_lag_sic(col, args.max_lag, args.spec)
        levels.append(adf_test(col, lag, args.spec))
        diff = _difference(col)
        dlag = args.lag if args.lag is not None else select_lag_sic(diff, args.max_lag, args.spec)
        diffs.append(adf_test(diff, dlag, args.spec))
    _write(args.out_dir, "adf.csv", report.adf_table_csv(levels, diffs))
    _write(
        args.out_dir,
        "adf.json",
        report.to_json(
            {"levels": [r.to_dict() for r in levels], "differences": [r.to_dict() for r in diffs]}
        ),
    )


def _cmd_johansen(args) -> None:
    panel = _load_panel_arg(args)
    result = johansen_test(panel, args.lag)
    _write(args.out_dir, "johansen.csv", report.johansen_table_csv(result))
    _write(args.out_dir, "johansen.json", report.to_json(result.to_dict()))


def _cmd_var(args) -> None:
    panel = _load_panel_arg(args)
    p = args.lag if args.lag is not None else select_var_lag_sic(panel, args.max_lag)
    model = fit_var(panel, p)
    _write(args.out_dir, "var_coefficients.csv", report.var_table_csv(model))
    _write(args.out_dir, "var_model.json", report.to_json(model.to_dict()))


def _cmd_diagnose(args) -> None:
    panel = _load_panel_arg(args)
    model = fit_var(panel, args.lag)
    diag = diagnose_residuals(model, args.lb_lags)
    _write(args.out_dir, "diagnostics.csv", report.diagnostics_table_csv(diag))
    _write(args.out_dir, "diagnostics.json", report.to_json(diag.to_dict()))


def _fit_from_args(args, panel):
    return fit_svar_lingam(
        panel,
        args.lag,
        nonlinearity=args.nonlinearity,
        max_iter=args.ica_max_iter,
        tol=args.ica_tol,
        seed=args.seed,
    )


def _cmd_fit(args) -> None:
    panel = _load_panel_arg(args)
    model = _fit_from_args(args, panel)
    _write(args.out_dir, "svar_model.json", report.to_json(model.to_dict()))


def _cmd_bootstrap(args) -> None:
    panel = _load_panel_arg(args)
    model = _fit_from_args(args, panel)
    summary = bootstrap_significance(
        model, panel, iterations=args.iterations, seed=args.seed, refit_order=args.refit_order
    )
    _write(args.out_dir, "svar_coefficients.csv", report.svar_table_csv(summary))
    _write(args.out_dir, "bootstrap.json", report.to_json(summary.to_dict()))


def _cmd_irf(args) -> None:
    panel = _load_panel_arg(args)
    model = _fit_from_args(args, panel)
    if args.iterations:
        result = irf_bootstrap_bands(
            model, panel, args.horizon, level=args.level, iterations=args.iterations, seed=args.seed
        )
    else:
        result = structural_irf(model, args.horizon)
    _write(args.out_dir, "irf.csv", report.irf_long_csv(result))
    _write(args.out_dir, "irf.json", report.to_json(result.to_dict()))
    if args.split_date:
        split = dt.date.fromisoformat(args.split_date)
        _, first, second = compare_subperiods(
            panel,
            split,
            args.lag,
            args.horizon,
            nonlinearity=args.nonlinearity,
            max_iter=args.ica_max_iter,
            tol=args.ica_tol,
            seed=args.seed,
        )
        _write(args.out_dir, "irf_first.csv", report.irf_long_csv(first))
        _write(args.out_dir, "irf_second.csv", report.irf_long_csv(second))


def _cmd_simulate(args) -> None:
    try:
        spec = GroundTruthSpec.from_json(Path(args.spec_file).read_text(encoding="utf-8"))
    except (OSError, KeyError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read ground-truth spec {args.spec_file}: {exc}") from exc
    panel, _ = generate_svar(spec)
    Path(args.out_dir).mkdir(parents=True, exist_ok=True)
    path = Path(args.out_dir) / "panel.csv"
    write_panel_csv(panel, path)
    print(path)
    _write(args.out_dir, "truth.json", spec.to_json() + "\n")


def _cmd_graph(args) -> None:
    try:
        model_dict = json.loads(Path(args.model).read_text(encoding="utf-8"))
        summary_dict = (
            json.loads(Path(args.summary).read_text(encoding="utf-8")) if args.summary else None
        )
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read model/summary JSON: {exc}") from exc
    graph = report.graph_from_dicts(model_dict, summary_dict, args.level)
    _write(args.out_dir, "graph.dot", report.export_dot(graph))
    _write(args.out_dir, "graph.json", report.to_json(graph.to_dict()))


def _cmd_run(args) -> None:
    config = parse_config(args.config)
    for override in args.set or []:
        if "=" not in override:
            raise ConfigError(f"--set expects key=value, got {override!r}")
        key, value = override.split("=", 1)
        config[key.strip()] = value.strip()
    if args.seed is not None:
        config["seed"] = str(args.seed)
    out_dir = args.out_dir or config.get("out_dir")
    if not out_dir:
        raise ConfigError("set out_dir in the config or pass -o")
    bundle = run_pipeline(config)
    for path in bundle.write(out_dir):
        print(path)


def _add_common_fit_args(sub) -> None:
    sub.add_argument("--lag", type=int, required=True, help="VAR lag order p")
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--nonlinearity", choices=["tanh", "cube"], default="tanh")
    sub.add_argument("--ica-max-iter", type=int, default=200)
    sub.add_argument("--ica-tol", type=float, default=1e-4)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="svarlingam",
        description="Causal discovery for multivariate time series via SVAR-LiNGAM",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sub = subs.add_parser(name, help=help_text)
        sub.set_defaults(func=func)
        sub.add_argument("-o", "--out-dir", default=".", help="output directory")
        return sub

    s = add("ingest", _cmd_ingest, "build the aligned panel from raw price CSVs")
    s.add_argument("-c", "--config", required=True)

    s = add("stats", _cmd_stats, "descriptive statistics of a panel")
    s.add_argument("--panel", required=True)

    s = add("adf", _cmd_adf, "ADF unit-root tests on levels and differences")
    s.add_argument("--panel", required=True)
    s.add_argument("--spec", choices=["constant", "trend"], default="constant")
    s.add_argument("--lag", type=int, default=None, help="fixed lag (default: SIC-selected)")
    s.add_argument("--max-lag", type=int, default=8)

    s = add("johansen", _cmd_johansen, "Johansen cointegration tests")
    s.add_argument("--panel", required=True)
    s.add_argument("--lag", type=int, required=True)

    s = add("var", _cmd_var, "reduced-form VAR estimation")
    s.add_argument("--panel", required=True)
    s.add_argument("--lag", type=int, default=None)
    s.add_argument("--max-lag", type=int, default=8)

    s = add("diagnose", _cmd_diagnose, "normality and serial-correlation diagnostics")
    s.add_argument("--panel", required=True)
    s.add_argument("--lag", type=int, required=True)
    s.add_argument("--lb-lags", type=int, default=10)

    s = add("fit", _cmd_fit, "fit the structural model")
    s.add_argument("--panel", required=True)
    _add_common_fit_args(s)

    s = add("bootstrap", _cmd_bootstrap, "bootstrap significance of structural coefficients")
    s.add_argument("--panel", required=True)
    _add_common_fit_args(s)
    s.add_argument("--iterations", type=int, default=1000)
    s.add_argument("--refit-order", action="store_true")

    s = add("irf", _cmd_irf, "structural impulse responses with bands")
    s.add_argument("--panel", required=True)
    _add_common_fit_args(s)
    s.add_argument("--horizon", type=int, default=20)
    s.add_argument("--level", type=float, default=0.99)
    s.add_argument("--iterations", type=int, default=0, help="band bootstrap size; 0 = no bands")
    s.add_argument("--split-date", default=None, help="ISO date splitting two subperiods")

    s = add("simulate", _cmd_simulate, "generate synthetic data from a ground-truth spec")
    s.add_argument("--spec-file", required=True)

    s = add("graph", _cmd_graph, "DOT causal graph from persisted model/bootstrap JSON")
    s.add_argument("--model", required=True)
    s.add_argument("--summary", default=None)
    s.add_argument("--level", choices=["90%", "95%", "99%"], default="95%")

    s = add("run", _cmd_run, "full pipeline from a config file")
    s.add_argument("-c", "--config", required=True)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except (NumericalError, SvarLingamError) as exc:
        print(f"estimation error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
