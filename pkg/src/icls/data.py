"""Dataset ingestion, encoding, splitting, and synthetic generation.

CSV files need a header row (RFC 4180 quoting, UTF-8). Rows containing a
missing value are dropped and counted. Non-numeric feature columns are
expanded into level indicators with the lexicographically first level
dropped, which avoids exact collinearity with the intercept. The intercept
is always the leading all-ones column. The two class names are sorted
lexicographically; the smaller becomes label 0.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import (
    DataError,
    DimensionError,
    EmptyDataError,
    InputError,
    LabelCountError,
    MissingFileError,
)

MISSING_TOKENS = frozenset({"", "?", "NA", "N/A", "NaN", "nan"})


@dataclass(frozen=True)
class ColumnSpec:
    """How one raw CSV column maps into the design matrix."""

    name: str
    numeric: bool
    levels: tuple[str, ...] = ()  # sorted; levels[0] is the dropped one


@dataclass(frozen=True)
class TableSchema:
    label_column: str | None
    columns: tuple[ColumnSpec, ...]
    class_names: tuple[str, str] | None

    @property
    def n_design_columns(self) -> int:
        # intercept + one column per numeric, levels-1 per categorical
        return 1 + sum(
            1 if c.numeric else len(c.levels) - 1 for c in self.columns
        )


@dataclass(frozen=True)
class Dataset:
    name: str
    design: np.ndarray
    labels: np.ndarray
    feature_names: tuple[str, ...]
    class_names: tuple[str, str]
    dropped_rows: int = 0
    schema: TableSchema | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        design = np.array(self.design, dtype=np.float64, order="C")
        labels = np.array(self.labels, dtype=np.float64, order="C")
        if design.ndim != 2:
            raise DimensionError("design must be 2-D")
        if labels.ndim != 1 or labels.shape[0] != design.shape[0]:
            raise DimensionError("labels must be 1-D with one entry per design row")
        if not np.all(np.isfinite(design)):
            raise InputError("design contains non-finite entries")
        if not np.all((labels == 0.0) | (labels == 1.0)):
            raise InputError("labels must be 0/1")
        if not (np.any(labels == 0.0) and np.any(labels == 1.0)):
            raise LabelCountError("dataset must contain both classes")
        if design.shape[1] < 1 or not np.all(design[:, 0] == 1.0):
            raise InputError("design must carry a leading all-ones intercept column")
        if len(self.feature_names) != design.shape[1] - 1:
            raise DimensionError("feature_names must match non-intercept columns")
        design.flags.writeable = False
        labels.flags.writeable = False
        object.__setattr__(self, "design", design)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        return int(self.design.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.design.shape[1]) - 1


@dataclass(frozen=True)
class SplitScenario:
    labeled_idx: np.ndarray
    unlabeled_idx: np.ndarray
    test_idx: np.ndarray
    seed: int

    def __post_init__(self):
        for name in ("labeled_idx", "unlabeled_idx", "test_idx"):
            arr = np.array(getattr(self, name), dtype=np.int64, order="C")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        combined = np.concatenate([self.labeled_idx, self.unlabeled_idx, self.test_idx])
        if combined.size and combined.min() < 0:
            raise InputError("negative index in split")
        if np.unique(combined).size != combined.size:
            raise InputError("split index sets overlap")


def _read_rows(path) -> tuple[list[str], list[list[str]]]:
    p = Path(path)
    if not p.exists():
        raise MissingFileError(f"no such file: {p}")
    with p.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptyDataError(f"{p} is empty (no header row)") from None
        header = [h.strip() for h in header]
        if len(set(header)) != len(header):
            raise DataError(f"{p}: duplicate column names in header")
        rows = []
        for row in reader:
            if not row:
                continue
            if len(row) != len(header):
                raise DataError(
                    f"{p}: row {len(rows) + 2} has {len(row)} fields, expected {len(header)}"
                )
            rows.append([cell.strip() for cell in row])
    return header, rows


def _drop_missing(rows: list[list[str]]) -> tuple[list[list[str]], int]:
    kept = [row for row in rows if not any(cell in MISSING_TOKENS for cell in row)]
    return kept, len(rows) - len(kept)


def _is_float(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def _infer_schema(
    header: list[str], rows: list[list[str]], label_column: str | None
) -> TableSchema:
    class_names = None
    if label_column is not None:
        if label_column not in header:
            raise DataError(f"label column {label_column!r} not found in header")
        label_pos = header.index(label_column)
        classes = sorted({row[label_pos] for row in rows})
        if len(classes) != 2:
            raise LabelCountError(
                f"label column {label_column!r} has {len(classes)} distinct values, need 2"
            )
        class_names = (classes[0], classes[1])

    columns = []
    for pos, name in enumerate(header):
        if name == label_column:
            continue
        values = [row[pos] for row in rows]
        if all(_is_float(v) for v in values):
            columns.append(ColumnSpec(name=name, numeric=True))
        else:
            levels = tuple(sorted(set(values)))
            columns.append(ColumnSpec(name=name, numeric=False, levels=levels))
    return TableSchema(
        label_column=label_column, columns=tuple(columns), class_names=class_names
    )


def feature_names_for(schema: TableSchema) -> tuple[str, ...]:
    names: list[str] = []
    for col in schema.columns:
        if col.numeric:
            names.append(col.name)
        else:
            names.extend(f"{col.name}={level}" for level in col.levels[1:])
    return tuple(names)


def encode_rows(
    header: list[str], rows: list[list[str]], schema: TableSchema
) -> np.ndarray:
    """Build the intercept-first design matrix for rows under a schema."""
    positions = {name: i for i, name in enumerate(header)}
    n = len(rows)
    design = np.ones((n, schema.n_design_columns), dtype=np.float64)
    out_col = 1
    for col in schema.columns:
        if col.name not in positions:
            raise DataError(f"column {col.name!r} missing from file")
        pos = positions[col.name]
        if col.numeric:
            for i, row in enumerate(rows):
                if not _is_float(row[pos]):
                    raise DataError(
                        f"column {col.name!r}: non-numeric value {row[pos]!r}"
                    )
                design[i, out_col] = float(row[pos])
            out_col += 1
        else:
            level_index = {level: k for k, level in enumerate(col.levels)}
            width = len(col.levels) - 1
            design[:, out_col : out_col + width] = 0.0
            for i, row in enumerate(rows):
                k = level_index.get(row[pos])
                if k is None:
                    raise DataError(
                        f"column {col.name!r}: unseen level {row[pos]!r}"
                    )
                if k > 0:
                    design[i, out_col + k - 1] = 1.0
            out_col += width
    if not np.all(np.isfinite(design)):
        raise InputError("design contains non-finite entries after encoding")
    return design


def load_csv(path, label_column: str) -> Dataset:
    """Load a labeled CSV into a Dataset."""
    header, rows = _read_rows(path)
    rows, dropped = _drop_missing(rows)
    if not rows:
        raise EmptyDataError(f"{path}: no usable rows after dropping missing values")
    schema = _infer_schema(header, rows, label_column)
    design = encode_rows(header, rows, schema)
    label_pos = header.index(label_column)
    assert schema.class_names is not None
    labels = np.array(
        [0.0 if row[label_pos] == schema.class_names[0] else 1.0 for row in rows]
    )
    return Dataset(
        name=Path(path).stem,
        design=design,
        labels=labels,
        feature_names=feature_names_for(schema),
        class_names=schema.class_names,
        dropped_rows=dropped,
        schema=schema,
    )


def load_design_csv(path, schema: TableSchema) -> np.ndarray:
    """Encode a feature file with an existing schema (label column, if any,
    is ignored). Used for unlabeled and prediction inputs."""
    header, rows = _read_rows(path)
    rows, _ = _drop_missing(rows)
    return encode_rows(header, rows, schema)


def infer_feature_design(path, label_column: str | None = None) -> np.ndarray:
    """Encode a feature file using a schema inferred from the file itself.

    If ``label_column`` names a column that is present it is excluded from
    the features. Level sets are taken from this file alone, so categorical
    encodings are only comparable across files with identical levels.
    """
    header, rows = _read_rows(path)
    rows, _ = _drop_missing(rows)
    if not rows:
        raise EmptyDataError(f"{path}: no usable rows after dropping missing values")
    if label_column is not None and label_column not in header:
        label_column = None
    schema = _infer_schema(header, rows, None)
    if label_column is not None:
        schema = TableSchema(
            label_column=label_column,
            columns=tuple(c for c in schema.columns if c.name != label_column),
            class_names=None,
        )
    return encode_rows(header, rows, schema)


def make_split(
    dataset: Dataset, labeled_count: int, unlabeled_count: int, seed: int
) -> SplitScenario:
    """Sample a labeled/unlabeled/test partition without replacement.

    The labeled draw is repeated until it contains at least one object of
    each class. Everything not labeled or unlabeled becomes the test set.
    """
    n = dataset.n
    if labeled_count < 2:
        raise InputError("labeled_count must be at least 2 to cover both classes")
    if unlabeled_count < 0:
        raise InputError("unlabeled_count must be non-negative")
    if labeled_count + unlabeled_count >= n:
        raise InputError(
            f"labeled_count + unlabeled_count = {labeled_count + unlabeled_count} "
            f"must be < {n} rows"
        )
    rng = np.random.default_rng(seed)
    while True:
        labeled = np.sort(rng.choice(n, size=labeled_count, replace=False))
        drawn = dataset.labels[labeled]
        if np.any(drawn == 0.0) and np.any(drawn == 1.0):
            break
    remainder = np.setdiff1d(np.arange(n), labeled)
    unlabeled = np.sort(rng.choice(remainder, size=unlabeled_count, replace=False))
    test = np.setdiff1d(remainder, unlabeled)
    return SplitScenario(
        labeled_idx=labeled, unlabeled_idx=unlabeled, test_idx=test, seed=seed
    )


@dataclass(frozen=True)
class GaussianSpec:
    """Two spherical Gaussian classes; means ``separation * scale`` apart
    along the first axis, so the optimal error is Phi(-separation / 2)."""

    dim: int = 2
    separation: float = 2.0
    scale: float = 1.0

    def __post_init__(self):
        if self.dim < 1:
            raise InputError("dim must be at least 1")
        if not (self.separation >= 0.0 and np.isfinite(self.separation)):
            raise InputError("separation must be a finite non-negative number")
        if not (self.scale > 0.0 and np.isfinite(self.scale)):
            raise InputError("scale must be a finite positive number")


def gen_synthetic(spec: GaussianSpec, n: int, seed: int) -> Dataset:
    """Generate a two-class Gaussian dataset with an intercept column."""
    if n < 4:
        raise InputError("need at least 4 points")
    rng = np.random.default_rng(seed)
    while True:
        ys = rng.integers(0, 2, size=n).astype(np.float64)
        if np.any(ys == 0.0) and np.any(ys == 1.0):
            break
    feats = rng.normal(size=(n, spec.dim)) * spec.scale
    feats[:, 0] += (2.0 * ys - 1.0) * (spec.separation * spec.scale / 2.0)
    design = np.hstack([np.ones((n, 1)), feats])
    return Dataset(
        name=f"gaussian-{spec.dim}d-sep{spec.separation:g}",
        design=design,
        labels=ys,
        feature_names=tuple(f"x{i}" for i in range(spec.dim)),
        class_names=("neg", "pos"),
    )


def standardize_design(design: np.ndarray, fit_rows: np.ndarray) -> np.ndarray:
    """Z-score the non-intercept columns using statistics from ``fit_rows``.

    Constant columns are centered but not rescaled. Returns a new matrix
    covering all rows.
    """
    out = np.array(design, dtype=np.float64)
    stats = out[np.asarray(fit_rows, dtype=np.int64), 1:]
    mean = stats.mean(axis=0)
    std = stats.std(axis=0, ddof=0)
    std = np.where(std > 0.0, std, 1.0)
    out[:, 1:] = (out[:, 1:] - mean) / std
    return out


def load_registry() -> dict[str, dict]:
    """Known benchmark datasets keyed by name, with expected shapes."""
    text = resources.files("icls").joinpath("dataset_registry.json").read_text()
    return {entry["name"]: entry for entry in json.loads(text)}


def validate_against_registry(dataset: Dataset, name: str) -> None:
    """Raise if the dataset's shape does not match the registry entry."""
    registry = load_registry()
    if name not in registry:
        raise DataError(f"unknown registry name {name!r}")
    entry = registry[name]
    if dataset.n != entry["objects"] or dataset.n_features != entry["features"]:
        raise DataError(
            f"{name}: expected {entry['objects']} objects x {entry['features']} "
            f"features, loaded {dataset.n} x {dataset.n_features}"
        )
