"""Dataset ingestion, min-max normalization, padding, and synthetic families."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace

import numpy as np


class DataError(Exception):
    """Malformed input data (ragged rows, non-numeric cells, missing columns)."""


@dataclass(frozen=True)
class Dataset:
    column_names: tuple[str, ...]
    features: np.ndarray            # (rows, n) float
    labels: tuple[str, ...]
    mins: np.ndarray | None = None  # normalization stats, set by normalize()
    maxs: np.ndarray | None = None
    clamped: int = 0                # values clamped into [0,1] by apply_normalization

    def __post_init__(self):
        if self.features.ndim != 2:
            raise DataError("features must be a 2-D array")
        if len(self.labels) != self.features.shape[0]:
            raise DataError("label count must equal row count")
        if len(self.column_names) != self.features.shape[1]:
            raise DataError("column-name count must equal feature count")

    @property
    def n(self) -> int:
        return self.features.shape[1]

    @property
    def row_count(self) -> int:
        return self.features.shape[0]

    @property
    def classes(self) -> tuple[str, ...]:
        return tuple(sorted(set(self.labels)))


@dataclass(frozen=True)
class PaddingPolicy:
    """How to make an odd coordinate count even."""

    kind: str = "duplicate-last"    # "duplicate-last" | "constant" | "none"
    constant: float = 1.0

    def __post_init__(self):
        if self.kind not in ("duplicate-last", "constant", "none"):
            raise DataError(f"unknown padding policy {self.kind!r}")
        if self.kind == "constant" and not (0.0 <= self.constant <= 1.0):
            raise DataError("constant padding value must lie in [0, 1]")

    @classmethod
    def parse(cls, text: str) -> "PaddingPolicy":
        """CLI form: 'dup', 'none' or 'const:<v>'."""
        if text in ("dup", "duplicate-last"):
            return cls("duplicate-last")
        if text == "none":
            return cls("none")
        if text.startswith("const:"):
            return cls("constant", float(text.split(":", 1)[1]))
        raise DataError(f"unknown padding policy {text!r}")


@dataclass(frozen=True)
class SyntheticSpec:
    """One of the built-in synthetic families A, B, C or S4."""

    family: str

    def __post_init__(self):
        if self.family not in ("A", "B", "C", "S4"):
            raise DataError(f"unknown synthetic family {self.family!r}")


def load_csv(source, label_column=None, header: bool | None = None) -> Dataset:
    """Parse CSV bytes/text/path into a Dataset.

    label_column may be a column name or index; default: the last column.
    header=None auto-detects by checking whether the first row parses as
    numbers in the feature columns.
    """
    if isinstance(source, bytes):
        text = source.decode("utf-8")
    elif hasattr(source, "read"):
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8")
    elif isinstance(source, str) and "\n" not in source and source.endswith(".csv"):
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = str(source)
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise DataError("empty CSV input")
    width = len(rows[0])
    for ln, r in enumerate(rows, start=1):
        if len(r) != width:
            raise DataError(f"line {ln}: expected {width} fields, got {len(r)}")
    if width < 2:
        raise DataError("need at least one feature column and one label column")

    def _numericable(cells) -> bool:
        try:
            for c in cells:
                float(c)
            return True
        except ValueError:
            return False

    if header is None:
        header = not _numericable(rows[0][:-1])
    if header:
        names = [c.strip() for c in rows[0]]
        body = rows[1:]
    else:
        names = [f"x{i + 1}" for i in range(width)]
        body = rows
    if not body:
        raise DataError("CSV has a header but no data rows")

    if label_column is None:
        label_idx = width - 1
    elif isinstance(label_column, int):
        label_idx = label_column if label_column >= 0 else width + label_column
    else:
        if label_column not in names:
            raise DataError(f"label column {label_column!r} not found in {names}")
        label_idx = names.index(label_column)
    if not (0 <= label_idx < width):
        raise DataError(f"label column index {label_column} out of range")

    feat_idx = [i for i in range(width) if i != label_idx]
    feats = np.empty((len(body), len(feat_idx)))
    labels = []
    offset = 2 if header else 1
    for r, row in enumerate(body):
        for c, i in enumerate(feat_idx):
            cell = row[i].strip()
            try:
                feats[r, c] = float(cell)
            except ValueError:
                raise DataError(
                    f"line {r + offset}, column {names[i]!r}: non-numeric value {cell!r}")
        labels.append(row[label_idx].strip())
    return Dataset(column_names=tuple(names[i] for i in feat_idx),
                   features=feats, labels=tuple(labels))


def normalize(ds: Dataset) -> Dataset:
    """Min-max normalize each column to [0, 1]; constant columns map to 0.5.

    The per-column stats are stored on the result so validation splits can
    reuse training ranges via apply_normalization.
    """
    mins = ds.features.min(axis=0)
    maxs = ds.features.max(axis=0)
    return replace(apply_normalization(ds, mins, maxs), clamped=0)


def apply_normalization(ds: Dataset, mins: np.ndarray, maxs: np.ndarray) -> Dataset:
    """Normalize with the given stats, clamping out-of-range values into [0,1]."""
    mins = np.asarray(mins, dtype=float)
    maxs = np.asarray(maxs, dtype=float)
    span = maxs - mins
    flat = span == 0
    safe = np.where(flat, 1.0, span)
    vals = (ds.features - mins) / safe
    vals[:, flat] = 0.5
    clamped = int(np.sum((vals < 0) | (vals > 1)))
    vals = np.clip(vals, 0.0, 1.0)
    return Dataset(column_names=ds.column_names, features=vals, labels=ds.labels,
                   mins=mins, maxs=maxs, clamped=clamped)


def pad(ds: Dataset, policy: PaddingPolicy) -> Dataset:
    """Make the coordinate count even by appending one column."""
    if ds.n % 2 == 0 or policy.kind == "none":
        return ds
    if policy.kind == "duplicate-last":
        col = ds.features[:, -1:]
        name = ds.column_names[-1] + "_dup"
    else:
        col = np.full((ds.row_count, 1), policy.constant)
        name = "pad"
    return Dataset(column_names=ds.column_names + (name,),
                   features=np.hstack([ds.features, col]),
                   labels=ds.labels, mins=None, maxs=None, clamped=ds.clamped)


def generate_synthetic(spec: SyntheticSpec) -> Dataset:
    """The built-in point families.

    A: nine 8-D points, odd coordinates stepping 0.9 down to 0.1 and even
       coordinates the complement.
    B: nine 4-D points (k/10, k/10, k/10, k/10).
    C: nine 4-D points (k/10, 1-k/10, k/10, 1-k/10).
    S4: seven 4-D points (k/8, k/8, 1-k/8, 1-k/8).
    """
    fam = spec.family
    if fam == "A":
        rows = [[(10 - i) / 10 if j % 2 == 0 else i / 10 for j in range(8)]
                for i in range(1, 10)]
    elif fam == "B":
        rows = [[k / 10] * 4 for k in range(1, 10)]
    elif fam == "C":
        rows = [[k / 10, 1 - k / 10, k / 10, 1 - k / 10] for k in range(1, 10)]
    else:
        rows = [[k / 8, k / 8, 1 - k / 8, 1 - k / 8] for k in range(1, 8)]
    feats = np.array(rows, dtype=float)
    names = tuple(f"x{i + 1}" for i in range(feats.shape[1]))
    labels = tuple(fam for _ in rows)
    return Dataset(column_names=names, features=feats, labels=labels)


def to_csv(ds: Dataset, label_name: str = "class") -> str:
    """Serialize a dataset back to CSV (header row included)."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(list(ds.column_names) + [label_name])
    for row, lab in zip(ds.features, ds.labels):
        w.writerow([repr(float(v)) for v in row] + [lab])
    return out.getvalue()
