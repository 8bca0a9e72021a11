"""Tabular datasets: loading, attribute ranges, seeded train/validation splits.

Feature values are floats; a missing value is stored as ``None`` (never 0).
Datasets are immutable after loading and safe to share between threads.
"""
from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Mapping

# Widening applied to a zero-width observed range so plots keep a usable extent.
ZERO_WIDTH_EPS = 0.5


class DatasetError(ValueError):
    """Raised for malformed input data or bad dataset operations."""


@dataclass(frozen=True)
class AttributeMeta:
    name: str
    index: int
    observed_min: float
    observed_max: float
    declared_range: tuple[float, float] | None = None


@dataclass(frozen=True)
class Case:
    id: int
    values: tuple[float | None, ...]
    label: str


@dataclass(frozen=True)
class Dataset:
    attributes: tuple[AttributeMeta, ...]
    cases: tuple[Case, ...]
    classes: tuple[str, ...]

    def attribute_index(self, name: str) -> int:
        for a in self.attributes:
            if a.name == name:
                return a.index
        raise DatasetError(f"unknown attribute: {name!r}")

    def value(self, case: Case, attr: str) -> float | None:
        return case.values[self.attribute_index(attr)]

    @property
    def attribute_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.attributes)

    def __len__(self) -> int:
        return len(self.cases)


def _as_text(source: str | bytes | IO) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, str):
        return source
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return data


def load_csv(
    source: str | bytes | IO,
    label_column: str = "class",
    missing_token: str = "?",
    declared_ranges: Mapping[str, tuple[float, float]] | None = None,
) -> Dataset:
    """Parse a header-bearing CSV into a Dataset.

    ``source`` is CSV text, bytes, or a file-like object.  Every non-label
    column is a numeric feature; ``missing_token`` cells are recorded as
    missing.  Class order follows first appearance, which fixes colors and
    report row order downstream.
    """
    text = _as_text(source)
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not rows:
        raise DatasetError("empty input")
    header = [h.strip() for h in rows[0]]
    if label_column not in header:
        raise DatasetError(f"unknown label column: {label_column!r}")
    label_idx = header.index(label_column)
    feat_names = [h for i, h in enumerate(header) if i != label_idx]

    cases: list[Case] = []
    classes: list[str] = []
    columns: list[list[float]] = [[] for _ in feat_names]
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise DatasetError(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
        label = row[label_idx].strip()
        values: list[float | None] = []
        fi = 0
        for i, cell in enumerate(row):
            if i == label_idx:
                continue
            cell = cell.strip()
            if cell == missing_token:
                values.append(None)
            else:
                try:
                    v = float(cell)
                except ValueError:
                    raise DatasetError(
                        f"line {lineno}: non-numeric value {cell!r} in column {feat_names[fi]!r}"
                    ) from None
                values.append(v)
                columns[fi].append(v)
            fi += 1
        if label not in classes:
            classes.append(label)
        cases.append(Case(id=len(cases), values=tuple(values), label=label))

    declared_ranges = dict(declared_ranges or {})
    attributes = []
    for i, name in enumerate(feat_names):
        col = columns[i]
        lo = min(col) if col else 0.0
        hi = max(col) if col else 0.0
        declared = declared_ranges.get(name)
        if declared is not None and not (declared[0] <= lo and hi <= declared[1]):
            raise DatasetError(f"declared range for {name!r} does not contain observed values")
        attributes.append(AttributeMeta(name, i, lo, hi, declared))
    return Dataset(tuple(attributes), tuple(cases), tuple(classes))


def load_csv_file(
    path: str | Path,
    label_column: str = "class",
    missing_token: str = "?",
    declared_ranges: Mapping[str, tuple[float, float]] | None = None,
) -> Dataset:
    return load_csv(Path(path).read_bytes(), label_column, missing_token, declared_ranges)


def to_csv(dataset: Dataset, missing_token: str = "?") -> str:
    """Serialize back to CSV; load_csv(to_csv(d)) reproduces cases and ranges."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(list(dataset.attribute_names) + ["class"])
    for c in dataset.cases:
        row = [missing_token if v is None else format(v, "g") for v in c.values]
        w.writerow(row + [c.label])
    return out.getvalue()


def split(dataset: Dataset, train_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """Disjoint seeded partition with |train| = round(train_fraction * N).

    Case ids are preserved so the two sides can be checked to partition the
    source; attribute metadata (and thus plot ranges) is inherited unchanged.
    Not stratified.
    """
    if not dataset.cases:
        raise DatasetError("cannot split an empty dataset")
    if not 0.0 < train_fraction < 1.0:
        raise DatasetError("train_fraction must be in (0, 1)")
    n = len(dataset.cases)
    k = int(round(train_fraction * n))
    if k == 0 or k == n:
        raise DatasetError("split fraction produces an empty side")
    order = list(range(n))
    random.Random(seed).shuffle(order)
    train_ids = sorted(order[:k])
    val_ids = sorted(order[k:])
    train = Dataset(dataset.attributes, tuple(dataset.cases[i] for i in train_ids), dataset.classes)
    val = Dataset(dataset.attributes, tuple(dataset.cases[i] for i in val_ids), dataset.classes)
    return train, val


def attribute_range(dataset: Dataset, attr: str) -> tuple[float, float]:
    """Plot range for an attribute: declared range if present, else observed.

    A zero-width range is widened by ZERO_WIDTH_EPS on both sides so scaling
    stays well defined.
    """
    meta = dataset.attributes[dataset.attribute_index(attr)]
    if meta.declared_range is not None:
        lo, hi = meta.declared_range
    else:
        lo, hi = meta.observed_min, meta.observed_max
    if lo == hi:
        lo, hi = lo - ZERO_WIDTH_EPS, hi + ZERO_WIDTH_EPS
    return lo, hi


def bundled_data_dir() -> Path:
    """Directory holding the vendored CSV and tree fixtures.

    Resolution order: $SPCDT_DATA, then the repository-level data/ directory.
    """
    import os

    env = os.environ.get("SPCDT_DATA")
    if env:
        return Path(env)
    return Path(__file__).resolve().parents[2] / "data"


def load_bundled(name: str) -> Dataset:
    """Load one of the vendored datasets: iris, wine or wbc."""
    path = bundled_data_dir() / f"{name}.csv"
    if not path.exists():
        raise DatasetError(f"no bundled dataset named {name!r}")
    ranges = {"wbc": {a: (1.0, 10.0) for a in (
        "clump", "ucellsize", "ucellshape", "mgadhesion", "sepics",
        "bnuclei", "bchromatin", "normnucl", "mitoses")}}.get(name)
    return load_csv_file(path, declared_ranges=ranges)
