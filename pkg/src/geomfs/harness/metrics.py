"""Confusion counts and the derived accuracy / precision / recall / F1."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise ValueError("confusion counts must be nonnegative")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[bool, bool]]) -> "ConfusionCounts":
        """Count ``(truth, predicted)`` boolean pairs."""
        tp = fp = tn = fn = 0
        for truth, pred in pairs:
            if pred:
                tp += truth
                fp += not truth
            else:
                fn += truth
                tn += not truth
        return cls(tp, fp, tn, fn)

    def __add__(self, other: "ConfusionCounts") -> "ConfusionCounts":
        return ConfusionCounts(
            self.tp + other.tp, self.fp + other.fp, self.tn + other.tn, self.fn + other.fn
        )


class Scores(NamedTuple):
    accuracy: float
    precision: float
    recall: float
    f1: float


def metrics(counts: ConfusionCounts) -> Scores:
    """Empty denominators give 0 for precision, recall and F1."""
    if counts.total == 0:
        raise ValueError("no evaluated examples")
    tp, fp, tn, fn = counts.tp, counts.fp, counts.tn, counts.fn
    accuracy = (tp + tn) / counts.total
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return Scores(accuracy, precision, recall, f1)
