"""Cross-validation experiment runner and result reporting.

Each fold normalizes with training-fold statistics only, trains a swarm on
the training partition (the test fold never reaches the objective), builds
the ensemble from the final clustering and records training/testing error
rates plus the ambiguity decomposition on the test fold.  Everything is
reproducible from the master seed: repeat r uses SeedSequence([seed, r]) for
its fold plan and SeedSequence([seed, r, f]) for fold f's swarm.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .data import CsvSchema, Dataset, impute_missing, kfold_split, load_csv, make_dataset, normalize
from .ensemble import Decomposition, build_ensemble, decomposition, error_rate
from .network import Topology
from .swarm import SwarmConfig, run as run_swarm


@dataclass
class ExperimentConfig:
    data_path: str
    schema: CsvSchema = field(default_factory=CsvSchema)
    folds: int = 10
    repeats: int = 1
    swarm: SwarmConfig = field(default_factory=SwarmConfig)
    n_hidden: int = 7
    seed: int = 0

    def __post_init__(self):
        if self.folds < 2:
            raise ValueError(f"folds must be >= 2, got {self.folds}")
        if self.repeats < 1:
            raise ValueError(f"repeats must be >= 1, got {self.repeats}")
        if self.n_hidden < 1:
            raise ValueError(f"n_hidden must be >= 1, got {self.n_hidden}")
        if self.seed < 0:
            raise ValueError(f"seed must be >= 0, got {self.seed}")


@dataclass(frozen=True)
class FoldResult:
    repeat: int
    fold: int
    train_error: float
    test_error: float
    decomposition: Decomposition  # computed on the test fold


@dataclass(frozen=True)
class Stats:
    mean: float
    sd: float   # population SD (divide by count)
    min: float
    max: float


def _stats(values) -> Stats:
    values = np.asarray(values, dtype=float)
    return Stats(mean=float(values.mean()), sd=float(values.std()),
                 min=float(values.min()), max=float(values.max()))


@dataclass(frozen=True)
class ResultsSummary:
    fold_results: tuple[FoldResult, ...]
    folds: int
    repeats: int
    seed: int
    train_stats: Stats
    test_stats: Stats
    wall_seconds: float  # informational; excluded from reports and equality checks


def fold_datasets(table, plan, fold: int) -> tuple[Dataset, Dataset]:
    """Training and test Datasets for one fold, normalized with statistics
    computed on the training partition only (test values clamped to [0, 1])."""
    train_idx = plan.train_indices(fold)
    test_idx = plan.test_indices(fold)
    train_features, stats = normalize(table.values[train_idx])
    test_features, _ = normalize(table.values[test_idx], stats=stats)
    train = make_dataset(train_features, table.labels[train_idx], table.n_classes, stats)
    test = make_dataset(test_features, table.labels[test_idx], table.n_classes, stats)
    return train, test


def run_cv_experiment(config: ExperimentConfig) -> ResultsSummary:
    """Run the full (repeats x folds) cross-validation described by config."""
    started = time.perf_counter()
    table = impute_missing(load_csv(config.data_path, config.schema))
    topology = Topology(n_inputs=table.n_features, n_hidden=config.n_hidden,
                        n_outputs=table.n_classes)

    results: list[FoldResult] = []
    for repeat in range(config.repeats):
        plan_rng = np.random.default_rng(np.random.SeedSequence([config.seed, repeat]))
        plan = kfold_split(table.n_examples, config.folds, plan_rng)
        for fold in range(config.folds):
            train, test = fold_datasets(table, plan, fold)
            fold_rng = np.random.default_rng(np.random.SeedSequence([config.seed, repeat, fold]))
            swarm, clusters = run_swarm(config.swarm, topology, data=train, rng=fold_rng)
            ens = build_ensemble(swarm, clusters)
            results.append(FoldResult(
                repeat=repeat, fold=fold,
                train_error=error_rate(ens, train),
                test_error=error_rate(ens, test),
                decomposition=decomposition(ens, test),
            ))

    return ResultsSummary(
        fold_results=tuple(results),
        folds=config.folds, repeats=config.repeats, seed=config.seed,
        train_stats=_stats([r.train_error for r in results]),
        test_stats=_stats([r.test_error for r in results]),
        wall_seconds=time.perf_counter() - started,
    )


def report(summary: ResultsSummary, fmt: str = "markdown_table") -> str:
    """Render a summary as a markdown table (Mean/SD/Min/Max rows for training
    and testing error) or as CSV with one row per fold plus four aggregate
    rows.  Numbers use three decimal places."""
    if fmt in ("markdown_table", "md"):
        rows = [
            "|          | Training error | Testing error |",
            "| -------- | -------------- | ------------- |",
        ]
        for name in ("mean", "sd", "min", "max"):
            tr = getattr(summary.train_stats, name)
            te = getattr(summary.test_stats, name)
            label = name.upper() if name == "sd" else name.capitalize()
            rows.append(f"| {label:<8} | {tr:.3f}          | {te:.3f}         |")
        return "\n".join(rows) + "\n"
    if fmt == "csv":
        rows = ["kind,repeat,fold,train_error,test_error,ensemble_error,"
                "mean_component_error,mean_ambiguity"]
        for r in summary.fold_results:
            d = r.decomposition
            rows.append(f"fold,{r.repeat},{r.fold},{r.train_error:.3f},{r.test_error:.3f},"
                        f"{d.ensemble_error:.3f},{d.mean_component_error:.3f},"
                        f"{d.mean_ambiguity:.3f}")
        for name in ("mean", "sd", "min", "max"):
            tr = getattr(summary.train_stats, name)
            te = getattr(summary.test_stats, name)
            rows.append(f"{name},,,{tr:.3f},{te:.3f},,,")
        return "\n".join(rows) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")
