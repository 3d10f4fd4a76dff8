"""Tabular dataset ingestion for small classification benchmarks.

Handles delimited text files (comma or whitespace), missing-value imputation,
per-column min-max normalization, 1-of-m target encoding and k-fold splitting.
Categorical feature values are mapped to integer codes in first-seen order and
then normalized like any numeric column.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class DataError(ValueError):
    """Any problem with the contents of a data file."""


class ParseError(DataError):
    """Structural problem in a delimited file; carries the 1-based row number."""

    def __init__(self, message: str, row: int | None = None):
        self.row = row
        super().__init__(f"row {row}: {message}" if row is not None else message)


@dataclass(frozen=True)
class CsvSchema:
    """Column roles for a delimited file.

    class_col may be negative (python-style, -1 = last column).  delimiter=None
    splits on any whitespace.  ignore_cols drops columns (e.g. sample ids)
    before anything else is interpreted.  With binarize=True the class column
    must be numeric and is collapsed to 0 (zero) vs 1 (anything else).
    class_values, when given, fixes the label order and makes any other class
    token a parse error.
    """

    class_col: int = -1
    delimiter: str | None = ","
    missing: str = "?"
    ignore_cols: tuple[int, ...] = ()
    class_values: tuple[str, ...] | None = None
    binarize: bool = False


@dataclass(frozen=True)
class RawTable:
    """Parsed but not yet normalized table."""

    values: np.ndarray          # (p, n) float, NaN where missing
    missing: np.ndarray         # (p, n) bool
    labels: np.ndarray          # (p,) class index
    class_names: tuple[str, ...]

    @property
    def n_examples(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)


@dataclass(frozen=True)
class Dataset:
    """Normalized features plus 1-of-m targets, ready for fitness evaluation."""

    features: np.ndarray         # (p, n), every entry in [0, 1]
    targets: np.ndarray          # (p, m), exactly one 1 per row
    labels: np.ndarray           # (p,) class index in [0, m)
    attribute_stats: np.ndarray  # (2, n) per-column (min, max) used to normalize

    def __post_init__(self):
        p, n = self.features.shape
        if p < 1:
            raise DataError("dataset must contain at least one example")
        if self.features.min() < 0.0 or self.features.max() > 1.0:
            raise DataError("features must be normalized to [0, 1]")
        if self.targets.shape[0] != p or self.targets.ndim != 2:
            raise DataError("targets must be (p, m)")
        one_hot = np.isin(self.targets, (0.0, 1.0)).all() and (self.targets.sum(axis=1) == 1.0).all()
        if not one_hot:
            raise DataError("targets must be 1-of-m rows")
        if self.labels.shape != (p,) or (self.labels != self.targets.argmax(axis=1)).any():
            raise DataError("labels must match the 1 positions of targets")
        if self.attribute_stats.shape != (2, n):
            raise DataError("attribute_stats must be (2, n)")

    @property
    def n_examples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def n_classes(self) -> int:
        return self.targets.shape[1]


@dataclass(frozen=True)
class FoldPlan:
    """Partition of example indices into folds of near-equal size."""

    assignments: np.ndarray  # (p,) fold index per example
    folds: int

    def test_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == fold)

    def train_indices(self, fold: int) -> np.ndarray:
        return np.flatnonzero(self.assignments != fold)


def _tokenize(path, delimiter: str | None) -> list[list[str]]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    rows = []
    for line in lines:
        line = line.strip()
        if not line:
            continue
        tokens = line.split(delimiter) if delimiter else line.split()
        rows.append([t.strip() for t in tokens])
    return rows


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def load_csv(path, schema: CsvSchema) -> RawTable:
    """Parse a delimited file into features, missing flags and class labels.

    Feature columns whose non-missing values are not all numeric are treated
    as categorical and coded by first appearance.  A missing marker in the
    class column is an error.
    """
    rows = _tokenize(path, schema.delimiter)
    if not rows:
        raise ParseError(f"{path} contains no data rows")
    arity = len(rows[0])
    for r, row in enumerate(rows, start=1):
        if len(row) != arity:
            raise ParseError(f"expected {arity} columns, found {len(row)}", row=r)

    class_col = schema.class_col % arity
    ignored = {c % arity for c in schema.ignore_cols}
    if class_col in ignored:
        raise ParseError("class column cannot also be ignored")
    feature_cols = [c for c in range(arity) if c != class_col and c not in ignored]
    if not feature_cols:
        raise ParseError("schema leaves no feature columns")

    # class labels
    labels = np.empty(len(rows), dtype=int)
    if schema.binarize:
        class_names: tuple[str, ...] = ("0", ">0")
        for r, row in enumerate(rows, start=1):
            token = row[class_col]
            if token == schema.missing:
                raise ParseError("missing class value", row=r)
            if not _is_number(token):
                raise ParseError(f"class value {token!r} is not numeric", row=r)
            labels[r - 1] = 0 if float(token) == 0.0 else 1
    else:
        if schema.class_values is not None:
            mapping = {v: i for i, v in enumerate(schema.class_values)}
            frozen = True
        else:
            mapping = {}
            frozen = False
        for r, row in enumerate(rows, start=1):
            token = row[class_col]
            if token == schema.missing:
                raise ParseError("missing class value", row=r)
            if token not in mapping:
                if frozen:
                    raise ParseError(f"unknown class value {token!r}", row=r)
                mapping[token] = len(mapping)
            labels[r - 1] = mapping[token]
        class_names = tuple(mapping)

    # feature columns: numeric unless some non-missing token fails to parse
    p, n = len(rows), len(feature_cols)
    values = np.full((p, n), np.nan)
    missing = np.zeros((p, n), dtype=bool)
    for j, col in enumerate(feature_cols):
        tokens = [row[col] for row in rows]
        present = [t for t in tokens if t != schema.missing]
        numeric = all(_is_number(t) for t in present)
        codes: dict[str, int] = {}
        for i, token in enumerate(tokens):
            if token == schema.missing:
                missing[i, j] = True
            elif numeric:
                values[i, j] = float(token)
            else:
                if token not in codes:
                    codes[token] = len(codes)
                values[i, j] = codes[token]
    return RawTable(values=values, missing=missing, labels=labels, class_names=class_names)


def impute_missing(table: RawTable) -> RawTable:
    """Replace each missing cell with its column mean over non-missing values."""
    if not table.missing.any():
        return table
    values = table.values.copy()
    for j in range(table.n_features):
        gap = table.missing[:, j]
        if gap.all():
            raise DataError(f"column {j} is entirely missing; cannot impute")
        if gap.any():
            values[gap, j] = values[~gap, j].mean()
    return RawTable(values=values, missing=np.zeros_like(table.missing), labels=table.labels,
                    class_names=table.class_names)


def normalize(values: np.ndarray, stats: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Min-max scale each column to [0, 1]; constant columns map to 0.

    When stats (a (2, n) array of per-column min/max, typically from a
    training fold) are supplied they are applied unchanged and the result is
    clamped to [0, 1].  Returns (features, stats).
    """
    vals = np.asarray(values, dtype=float)
    if stats is None:
        stats = np.vstack([vals.min(axis=0), vals.max(axis=0)])
    lo, hi = stats
    span = hi - lo
    scaled = (vals - lo) / np.where(span > 0, span, 1.0)
    scaled = np.where(span > 0, scaled, 0.0)
    return np.clip(scaled, 0.0, 1.0), stats


def encode_labels(labels: np.ndarray, n_classes: int) -> np.ndarray:
    """1-of-m encoding: row l is all zeros with a single 1 at column labels[l]."""
    labels = np.asarray(labels)
    if labels.size and (labels.min() < 0 or labels.max() >= n_classes):
        raise DataError(f"labels must lie in [0, {n_classes})")
    targets = np.zeros((len(labels), n_classes))
    targets[np.arange(len(labels)), labels] = 1.0
    return targets


def kfold_split(n_examples: int, folds: int, rng: np.random.Generator) -> FoldPlan:
    """Shuffle example indices and deal them round-robin into folds."""
    if folds < 2:
        raise ValueError(f"folds must be >= 2, got {folds}")
    if folds > n_examples:
        raise ValueError(f"cannot split {n_examples} examples into {folds} folds")
    perm = rng.permutation(n_examples)
    assignments = np.empty(n_examples, dtype=int)
    assignments[perm] = np.arange(n_examples) % folds
    return FoldPlan(assignments=assignments, folds=folds)


def make_dataset(features: np.ndarray, labels: np.ndarray, n_classes: int,
                 stats: np.ndarray | None = None) -> Dataset:
    """Assemble a Dataset from already-normalized features and class labels."""
    features = np.asarray(features, dtype=float)
    labels = np.asarray(labels, dtype=int)
    if stats is None:
        stats = np.vstack([features.min(axis=0), features.max(axis=0)])
    return Dataset(features=features, targets=encode_labels(labels, n_classes),
                   labels=labels, attribute_stats=stats)
