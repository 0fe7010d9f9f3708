"""Enumeration of binary classifiers (label splits) and feature-type subsets."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .dataio import DatasetError, FeatureSubset, FeatureTypeLayout


@dataclass(frozen=True)
class ClassPartition:
    """A split of the label set into a positive and a negative side."""

    positive: frozenset[str]
    negative: frozenset[str]

    def __post_init__(self):
        if self.positive & self.negative:
            raise DatasetError("partition sides overlap")

    @classmethod
    def of(cls, positive: Iterable[str], negative: Iterable[str]) -> "ClassPartition":
        return cls(frozenset(positive), frozenset(negative))

    @property
    def canonical_name(self) -> str:
        return "pos=" + ",".join(sorted(self.positive))


def enumerate_partitions(labels: Iterable[str]) -> list[ClassPartition]:
    """All ``2**(l-1) - 1`` binary classifiers, mirror images removed.

    The side holding the smallest label is always the negative one, so the
    positive side ranges over the nonempty subsets of the remaining labels.
    """
    ordered = sorted(set(labels))
    if len(ordered) < 2:
        raise DatasetError(f"need at least 2 labels, got {len(ordered)}")
    anchor, rest = ordered[0], ordered[1:]
    parts = []
    for size in range(1, len(rest) + 1):
        for pos in combinations(rest, size):
            neg = [anchor] + [x for x in rest if x not in pos]
            parts.append(ClassPartition.of(pos, neg))
    return sorted(parts, key=lambda p: p.canonical_name)


def enumerate_subsets(layout: FeatureTypeLayout) -> list[FeatureSubset]:
    """All nonempty feature-type subsets, by ascending bitmask over layout order."""
    names = layout.names
    if not names:
        raise DatasetError("layout has no feature types")
    return [
        FeatureSubset(frozenset(n for bit, n in enumerate(names) if mask >> bit & 1))
        for mask in range(1, 1 << len(names))
    ]
