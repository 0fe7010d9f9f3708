"""Sparse feature-typed datasets: parsing, validation, serialization, projection.

Vector files hold one row per line::

    <label>\t<col>:<value> <col>:<value> ...

Column indices are 0-based. Blank lines and ``#`` comments are skipped.
Boundary files hold one feature-type block per line::

    <type_name>\t<start_col>\t<end_col_exclusive>
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence, TextIO

import numpy as np

if TYPE_CHECKING:
    from .enumeration import ClassPartition


class DatasetError(ValueError):
    """Raised for malformed or invalid dataset inputs."""


@dataclass(frozen=True)
class FeatureTypeLayout:
    """Ordered, contiguous column blocks, one per feature type."""

    blocks: tuple[tuple[str, int, int], ...]

    def __post_init__(self):
        if not self.blocks:
            raise DatasetError("layout has no blocks")
        seen = set()
        expected_start = 0
        for name, start, end in self.blocks:
            if name in seen:
                raise DatasetError(f"duplicate feature type name {name!r}")
            seen.add(name)
            if start != expected_start:
                kind = "overlapping" if start < expected_start else "gapped"
                raise DatasetError(
                    f"block {name!r} starts at {start}, expected {expected_start} "
                    f"({kind} blocks)"
                )
            if end <= start:
                raise DatasetError(f"block {name!r} is empty ({start}..{end})")
            expected_start = end

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(b[0] for b in self.blocks)

    @property
    def n_columns(self) -> int:
        return self.blocks[-1][2]

    def block(self, name: str) -> tuple[int, int]:
        for n, start, end in self.blocks:
            if n == name:
                return start, end
        raise KeyError(name)


@dataclass(frozen=True)
class FeatureSubset:
    """A nonempty set of feature-type names."""

    selected: frozenset[str]

    def __post_init__(self):
        if not self.selected:
            raise DatasetError("feature subset is empty")

    @classmethod
    def of(cls, *names: str) -> "FeatureSubset":
        return cls(frozenset(names))

    def ordered(self, layout: FeatureTypeLayout) -> tuple[str, ...]:
        """Selected names in layout order."""
        return tuple(n for n in layout.names if n in self.selected)

    def key(self, layout: FeatureTypeLayout) -> str:
        return ",".join(self.ordered(layout))

    def check(self, layout: FeatureTypeLayout) -> None:
        unknown = self.selected - set(layout.names)
        if unknown:
            raise DatasetError(f"unknown feature types {sorted(unknown)}")


@dataclass(frozen=True)
class SparseDataset:
    """Rows of nonnegative sparse vectors with string labels.

    Each row is a mapping from column index to value. Construction validates
    every invariant; use :func:`parse_dataset` to read from files.
    """

    rows: tuple[Mapping[int, float], ...]
    row_labels: tuple[str, ...]
    layout: FeatureTypeLayout
    _dense: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.rows) != len(self.row_labels):
            raise DatasetError("row and label counts differ")
        if len(self.rows) < 2:
            raise DatasetError("dataset needs at least 2 rows")
        if len(set(self.row_labels)) < 2:
            raise DatasetError("dataset needs at least 2 distinct labels")
        n = self.layout.n_columns
        for i, row in enumerate(self.rows):
            _check_row(row, n, self.layout, i)
        dense = np.zeros((len(self.rows), n))
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                dense[i, j] = v
        dense.setflags(write=False)
        object.__setattr__(self, "_dense", dense)

    @property
    def n_columns(self) -> int:
        return self.layout.n_columns

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def labels(self) -> tuple[str, ...]:
        """Distinct labels, sorted."""
        return tuple(sorted(set(self.row_labels)))

    def to_dense(self) -> np.ndarray:
        """Read-only dense ``(n_rows, n_columns)`` array."""
        return self._dense


def _check_row(row, n_columns, layout, index, lineno=None):
    where = f"line {lineno}" if lineno is not None else f"row {index}"
    for j, v in row.items():
        if not 0 <= j < n_columns:
            raise DatasetError(f"{where}: column index {j} out of range [0, {n_columns})")
        if not math.isfinite(v) or v < 0:
            raise DatasetError(f"{where}: value {v} at column {j} is not a nonnegative real")
    for name, start, end in layout.blocks:
        if not any(start <= j < end and v != 0 for j, v in row.items()):
            raise DatasetError(f"{where}: row has no nonzero in block {name!r}")


def _lines(stream: TextIO | Iterable[str]):
    for lineno, raw in enumerate(stream, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield lineno, line


def parse_layout(boundaries_text: TextIO | Iterable[str]) -> FeatureTypeLayout:
    blocks = []
    for lineno, line in _lines(boundaries_text):
        parts = line.split("\t")
        if len(parts) != 3:
            raise DatasetError(f"boundaries line {lineno}: expected 3 tab-separated fields")
        name, start, end = parts
        try:
            blocks.append((name, int(start), int(end)))
        except ValueError:
            raise DatasetError(f"boundaries line {lineno}: bad column bound") from None
    return FeatureTypeLayout(tuple(blocks))


def parse_dataset(
    vectors_text: TextIO | Iterable[str], boundaries_text: TextIO | Iterable[str]
) -> SparseDataset:
    """Parse and validate a dataset from a vector stream and a boundaries stream."""
    layout = parse_layout(boundaries_text)
    n = layout.n_columns
    rows, labels = [], []
    for lineno, line in _lines(vectors_text):
        label, sep, body = line.partition("\t")
        if not sep or not label:
            raise DatasetError(f"line {lineno}: expected '<label><TAB><entries>'")
        row: dict[int, float] = {}
        for token in body.split():
            col, colon, val = token.partition(":")
            try:
                if not colon:
                    raise ValueError
                j, v = int(col), float(val)
            except ValueError:
                raise DatasetError(f"line {lineno}: malformed entry {token!r}") from None
            if j in row:
                raise DatasetError(f"line {lineno}: duplicate column index {j}")
            row[j] = v
        _check_row(row, n, layout, len(rows), lineno)
        rows.append(row)
        labels.append(label)
    return SparseDataset(tuple(rows), tuple(labels), layout)


def _fmt(v: float) -> str:
    return str(int(v)) if float(v).is_integer() else repr(float(v))


def write_vectors(ds: SparseDataset, out: TextIO) -> None:
    for label, row in zip(ds.row_labels, ds.rows):
        entries = " ".join(f"{j}:{_fmt(row[j])}" for j in sorted(row) if row[j] != 0)
        out.write(f"{label}\t{entries}\n")


def write_boundaries(layout: FeatureTypeLayout, out: TextIO) -> None:
    for name, start, end in layout.blocks:
        out.write(f"{name}\t{start}\t{end}\n")


def from_dense(
    matrix: np.ndarray, row_labels: Sequence[str], layout: FeatureTypeLayout
) -> SparseDataset:
    matrix = np.asarray(matrix, dtype=float)
    rows = tuple(
        {int(j): float(r[j]) for j in np.flatnonzero(r)} for r in matrix
    )
    return SparseDataset(rows, tuple(row_labels), layout)


def project(ds: SparseDataset, subset: FeatureSubset) -> SparseDataset:
    """Keep only the columns of the selected blocks, re-indexed in block order."""
    subset.check(ds.layout)
    blocks, remap = [], {}
    offset = 0
    for name, start, end in ds.layout.blocks:
        if name not in subset.selected:
            continue
        for j in range(start, end):
            remap[j] = offset + j - start
        blocks.append((name, offset, offset + end - start))
        offset += end - start
    rows = tuple({remap[j]: v for j, v in row.items() if j in remap} for row in ds.rows)
    return SparseDataset(rows, ds.row_labels, FeatureTypeLayout(tuple(blocks)))


def split_by_partition(
    ds: SparseDataset, part: "ClassPartition"
) -> tuple[list[int], list[int]]:
    """Row indices of the positive and negative sides, in original order."""
    pos, neg = [], []
    for i, label in enumerate(ds.row_labels):
        if label in part.positive:
            pos.append(i)
        elif label in part.negative:
            neg.append(i)
        else:
            raise DatasetError(f"label {label!r} is not covered by partition {part.canonical_name}")
    if not pos:
        raise DatasetError(f"partition {part.canonical_name} has an empty positive class")
    if not neg:
        raise DatasetError(f"partition {part.canonical_name} has an empty negative class")
    return pos, neg
