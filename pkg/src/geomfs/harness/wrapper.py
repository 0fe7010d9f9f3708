"""All-subsets wrapper labeling: train and test a linear SVM per feature subset."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from ..dataio import DatasetError, FeatureSubset, SparseDataset, project, split_by_partition
from ..enumeration import ClassPartition, enumerate_subsets
from ..geometry import zscore
from ..selector import SelectionReport
from .metrics import ConfusionCounts, Scores, metrics
from .svm import SVMParams, train_svm

TEST_FRACTION = 0.3


@dataclass(frozen=True)
class SubsetLabel:
    partition: str
    subset: str
    test_accuracy: float
    z_accuracy: float
    optimal: bool

    @property
    def key(self) -> tuple[str, str]:
        return self.partition, self.subset


def stratified_split(
    targets: Sequence[int], seed: int, test_fraction: float = TEST_FRACTION
) -> tuple[np.ndarray, np.ndarray]:
    """Train / test row indices, splitting each class separately."""
    rng = np.random.default_rng(seed)
    targets = np.asarray(targets)
    train, test = [], []
    for cls in (-1, 1):
        idx = np.flatnonzero(targets == cls)
        if len(idx) < 4:
            raise DatasetError(f"class {cls:+d} has {len(idx)} rows; at least 4 needed to split")
        idx = rng.permutation(idx)
        n_test = min(max(1, round(test_fraction * len(idx))), len(idx) - 1)
        test.extend(idx[:n_test])
        train.extend(idx[n_test:])
    return np.sort(train), np.sort(test)


def partition_targets(ds: SparseDataset, part: ClassPartition) -> np.ndarray:
    pos, _ = split_by_partition(ds, part)
    y = -np.ones(ds.n_rows, dtype=int)
    y[pos] = 1
    return y


def subset_accuracy(
    ds: SparseDataset,
    y: np.ndarray,
    subset: FeatureSubset,
    train: np.ndarray,
    test: np.ndarray,
    params: SVMParams,
) -> float:
    X = project(ds, subset).to_dense()
    model = train_svm(X[train], y[train], params)
    return model.accuracy(X[test], y[test])


def wrapper_label(
    ds: SparseDataset,
    part: ClassPartition,
    params: SVMParams = SVMParams(),
    split_seed: int = 0,
) -> list[SubsetLabel]:
    """Label each subset optimal iff its test accuracy z-score is above 0.

    One stratified split is drawn per classifier and shared by all subsets.
    """
    y = partition_targets(ds, part)
    train, test = stratified_split(y, split_seed)
    subsets = enumerate_subsets(ds.layout)
    acc = [subset_accuracy(ds, y, s, train, test, params) for s in subsets]
    z = zscore(acc)
    return [
        SubsetLabel(part.canonical_name, s.key(ds.layout), a, float(zi), bool(zi > 0))
        for s, a, zi in zip(subsets, acc, z)
    ]


def write_labels(labels: Iterable[SubsetLabel], out: TextIO) -> None:
    for lab in labels:
        verdict = "optimal" if lab.optimal else "suboptimal"
        out.write(
            f"{lab.partition}\t{lab.subset}\t{lab.test_accuracy:.10g}\t"
            f"{lab.z_accuracy:.10g}\t{verdict}\n"
        )


def read_labels(stream: TextIO) -> list[SubsetLabel]:
    labels = []
    for lineno, line in enumerate(stream, start=1):
        line = line.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 5 or parts[4] not in ("optimal", "suboptimal"):
            raise DatasetError(f"labels line {lineno}: expected 5 fields ending in optimal|suboptimal")
        try:
            acc, z = float(parts[2]), float(parts[3])
        except ValueError:
            raise DatasetError(f"labels line {lineno}: bad number") from None
        labels.append(SubsetLabel(parts[0], parts[1], acc, z, parts[4] == "optimal"))
    return labels


def compare(predicted: dict[tuple[str, str], bool], truth: Sequence[SubsetLabel]) -> ConfusionCounts:
    truth_map = {lab.key: lab.optimal for lab in truth}
    if set(truth_map) != set(predicted):
        missing = set(truth_map) ^ set(predicted)
        raise DatasetError(f"prediction and label keys differ ({len(missing)} unmatched), e.g. {sorted(missing)[0]}")
    return ConfusionCounts.from_pairs((truth_map[k], predicted[k]) for k in sorted(truth_map))


def selection_quality(predicted: SelectionReport, truth: Sequence[SubsetLabel]) -> Scores:
    """Selector verdicts scored against oracle labels taken as ground truth."""
    return metrics(compare(predicted.verdicts(), truth))
