"""Command-line interface.

Two subcommands sharing one option set: `train` renders the cross-validation
summary table (markdown or CSV), `decompose` prints the per-fold ambiguity
decomposition of the ensemble error.  Options may also come from a key=value
config file (--config) and, for column roles, a key=value schema file
(--schema); command-line flags override file values, and config-file values
override schema-file values.

Exit codes: 0 success, 1 configuration error, 2 data error, 3 runtime failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .data import CsvSchema, DataError
from .experiment import ExperimentConfig, ResultsSummary, report, run_cv_experiment
from .swarm import SwarmConfig


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); config errors are exit 1
        raise _CliError(message)


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_delimiter(text: str) -> str | None:
    if text == "whitespace":
        return None
    if text == "tab":
        return "\t"
    return text


def _parse_ignore_cols(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(part) for part in text.split(","))


def _parse_class_values(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(","))


def _parse_mode(text: str) -> str:
    mapping = {"kmpso": "kmpso", "gbest": "global_best", "global_best": "global_best"}
    if text not in mapping:
        raise ValueError(f"mode must be kmpso or gbest, got {text!r}")
    return mapping[text]


# converters for values read from config/schema files; keys use underscores
_CONVERTERS = {
    "data": str, "schema": str, "class_col": int, "delimiter": _parse_delimiter,
    "missing": str, "ignore_cols": _parse_ignore_cols, "binarize": _parse_bool,
    "class_values": _parse_class_values, "folds": int, "repeats": int, "pop": int,
    "iters": int, "clusters": int, "hidden": int, "c1": float, "c2": float,
    "w_start": float, "w_end": float, "pos_bound": float, "v_max": float,
    "seed": int, "mode": _parse_mode, "out": str, "format": str,
}

_SCHEMA_KEYS = ("class_col", "delimiter", "missing", "ignore_cols", "binarize", "class_values")

_DEFAULTS = {
    "class_col": -1, "delimiter": ",", "missing": "?", "ignore_cols": (),
    "binarize": False, "class_values": None, "folds": 10, "repeats": 1,
    "pop": 250, "iters": 150, "clusters": 10, "hidden": 7, "c1": 2.0, "c2": 2.0,
    "w_start": 0.9, "w_end": 0.2, "pos_bound": 5.0, "v_max": 5.0, "seed": 0,
    "mode": "kmpso", "out": None, "format": "md",
}


def _add_options(parser: argparse.ArgumentParser) -> None:
    add = parser.add_argument
    add("--config", help="key = value file mirroring these flags; flags override it")
    add("--data", help="path to the delimited data file")
    add("--schema", help="key = value file with column roles (class_col, delimiter, "
                         "missing, ignore_cols, binarize, class_values)")
    add("--class-col", type=int, dest="class_col", help="class column index (default -1)")
    add("--delimiter", type=_parse_delimiter,
        help="field delimiter; 'whitespace' or 'tab' are understood (default ,)")
    add("--missing", help="missing-value marker (default ?)")
    add("--ignore-cols", type=_parse_ignore_cols, dest="ignore_cols",
        help="comma-separated column indices to drop, e.g. sample ids")
    add("--binarize", action="store_true", default=None,
        help="collapse a numeric class column to zero vs nonzero")
    add("--folds", type=int, help="number of cross-validation folds (default 10)")
    add("--repeats", type=int, help="full CV repetitions with derived seeds (default 1)")
    add("--pop", type=int, help="swarm population size (default 250)")
    add("--iters", type=int, help="swarm iterations (default 150)")
    add("--clusters", type=int, help="number of k-means clusters / ensemble size (default 10)")
    add("--hidden", type=int, help="hidden-layer size (default 7)")
    add("--c1", type=float, help="cognitive acceleration constant (default 2.0)")
    add("--c2", type=float, help="social acceleration constant (default 2.0)")
    add("--w-start", type=float, dest="w_start", help="initial inertia weight (default 0.9)")
    add("--w-end", type=float, dest="w_end", help="final inertia weight (default 0.2)")
    add("--pos-bound", type=float, dest="pos_bound",
        help="weights bounded in [-B, B] (default 5)")
    add("--v-max", type=float, dest="v_max", help="velocity clamp (default 5)")
    add("--seed", type=int, help="master RNG seed (default 0)")
    add("--mode", type=_parse_mode, help="kmpso (cluster best) or gbest (canonical PSO)")
    add("--out", help="write output to this file instead of stdout")
    add("--format", choices=("md", "csv"), help="train report format (default md)")


def build_parser() -> _Parser:
    parser = _Parser(prog="kmpso", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command")
    for name, description in (("train", "run cross-validation and report error statistics"),
                              ("decompose", "run cross-validation and print the per-fold "
                                            "error decomposition")):
        sub = commands.add_parser(name, help=description)
        _add_options(sub)
    return parser


def _read_kv_file(path: str) -> dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _CliError(f"cannot read {path}: {exc}") from exc
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise _CliError(f"{path}:{lineno}: expected 'key = value'")
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _convert(key: str, text: str, origin: str):
    try:
        return _CONVERTERS[key](text)
    except ValueError as exc:
        raise _CliError(f"{origin}: bad value for {key}: {exc}") from exc


def _effective_options(args: argparse.Namespace) -> dict:
    """Merge flag values over config-file values over schema-file values."""
    config_vals = _read_kv_file(args.config) if args.config else {}
    for key in config_vals:
        if key not in _CONVERTERS:
            raise _CliError(f"unknown config key {key!r}")

    schema_path = args.schema if args.schema is not None else config_vals.get("schema")
    schema_vals = _read_kv_file(schema_path) if schema_path else {}
    for key in schema_vals:
        if key not in _SCHEMA_KEYS:
            raise _CliError(f"unknown schema key {key!r}")

    options = {}
    for key, default in _DEFAULTS.items():
        value = getattr(args, key, None)
        if value is None and key in config_vals:
            value = _convert(key, config_vals[key], "config")
        if value is None and key in schema_vals:
            value = _convert(key, schema_vals[key], "schema")
        options[key] = default if value is None else value

    data = args.data if args.data is not None else config_vals.get("data")
    if data is None:
        raise _CliError("--data is required (flag or config file)")
    options["data"] = data
    return options


def _build_config(options: dict) -> ExperimentConfig:
    schema = CsvSchema(class_col=options["class_col"], delimiter=options["delimiter"],
                       missing=options["missing"], ignore_cols=options["ignore_cols"],
                       class_values=options["class_values"], binarize=options["binarize"])
    swarm = SwarmConfig(population=options["pop"], iterations=options["iters"],
                        c1=options["c1"], c2=options["c2"], w_start=options["w_start"],
                        w_end=options["w_end"], n_clusters=options["clusters"],
                        pos_min=-options["pos_bound"], pos_max=options["pos_bound"],
                        v_max=options["v_max"], mode=options["mode"])
    return ExperimentConfig(data_path=options["data"], schema=schema, folds=options["folds"],
                            repeats=options["repeats"], swarm=swarm,
                            n_hidden=options["hidden"], seed=options["seed"])


def _decompose_text(summary: ResultsSummary) -> str:
    lines = []
    for r in summary.fold_results:
        d = r.decomposition
        lines.append(f"repeat {r.repeat} fold {r.fold}: E={d.ensemble_error:.3f} "
                     f"E_bar={d.mean_component_error:.3f} D_bar={d.mean_ambiguity:.3f}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise _CliError("a subcommand is required: train or decompose")
        options = _effective_options(args)
        config = _build_config(options)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:  # config dataclass validation
        print(f"error: {exc}", file=sys.stderr)
        return 1

    try:
        summary = run_cv_experiment(config)
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 3

    fmt = {"md": "markdown_table", "csv": "csv"}[options["format"]]
    text = report(summary, fmt) if args.command == "train" else _decompose_text(summary)
    try:
        if options["out"]:
            Path(options["out"]).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"runtime failure: {exc}", file=sys.stderr)
        return 3
    return 0
