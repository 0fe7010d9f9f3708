import io

import numpy as np
import pytest
from hypothesis import given, strategies as st

from geomfs.dataio import DatasetError, FeatureSubset, FeatureTypeLayout, from_dense, project
from geomfs.enumeration import ClassPartition, enumerate_partitions
from geomfs.geometry import build_clouds, compute_profile
from geomfs.harness.metrics import ConfusionCounts, metrics
from geomfs.harness.svm import SVMParams, train_svm
from geomfs.harness.synth import SynthSpec, augment_random_columns, generate_synthetic
from geomfs.harness.wrapper import (
    SubsetLabel,
    read_labels,
    selection_quality,
    stratified_split,
    wrapper_label,
    write_labels,
)
from geomfs.linalg import affine_dimension
from geomfs.selector import select


# --- metrics ---------------------------------------------------------------

@pytest.mark.parametrize(
    "counts, expected",
    [
        ((1, 0, 0, 0), (1, 1, 1, 1)),
        ((3, 1, 4, 2), (0.7, 0.75, 0.6, 2 / 3)),
        ((0, 0, 5, 5), (0.5, 0, 0, 0)),
    ],
)
def test_metrics_examples(counts, expected):
    assert metrics(ConfusionCounts(*counts)) == pytest.approx(expected, abs=1e-12)


def test_metrics_errors():
    with pytest.raises(ValueError):
        metrics(ConfusionCounts())
    with pytest.raises(ValueError):
        ConfusionCounts(-1, 0, 0, 0)


def test_from_pairs():
    c = ConfusionCounts.from_pairs([(True, True), (True, False), (False, True), (False, False), (False, False)])
    assert c == ConfusionCounts(tp=1, fp=1, tn=2, fn=1)


@given(st.tuples(*[st.integers(0, 50)] * 4).filter(lambda c: sum(c) > 0))
def test_metrics_properties(c):
    s = metrics(ConfusionCounts(*c))
    assert all(0 <= v <= 1 for v in s)
    assert s.f1 <= max(s.precision, s.recall) + 1e-15
    if s.precision > 0 and s.recall > 0:
        assert s.f1 == pytest.approx(2 / (1 / s.precision + 1 / s.recall))


# --- svm -------------------------------------------------------------------

def test_svm_symmetric_pair():
    m = train_svm([[-1, 0], [1, 0]], [-1, 1])
    assert abs(m.bias) < 1e-3
    assert m.weights[0] > 0
    assert m.accuracy([[-1, 0], [1, 0]], [-1, 1]) == 1.0


def test_svm_two_arbitrary_points():
    rng = np.random.default_rng(8)
    for _ in range(20):
        X = rng.standard_normal((2, 3))
        assert train_svm(X, [1, -1]).accuracy(X, [1, -1]) == 1.0


def test_svm_xor():
    X = [[0, 0], [1, 1], [0, 1], [1, 0]]
    y = [1, 1, -1, -1]
    assert train_svm(X, y).accuracy(X, y) <= 0.75


def test_svm_dual_monotone_and_hinge_drops():
    rng = np.random.default_rng(3)
    X = rng.standard_normal((40, 5))
    y = np.where(X[:, 0] + 0.5 * rng.standard_normal(40) > 0, 1, -1)
    m = train_svm(X, y, SVMParams(C=1.0, seed=1))
    assert np.all(np.diff(m.dual_history) >= -1e-12)
    zero = type(m)(np.zeros(5), 0.0, m.params)
    assert m.hinge_objective(X, y) <= zero.hinge_objective(X, y)


def test_svm_deterministic():
    rng = np.random.default_rng(4)
    X = rng.standard_normal((30, 4))
    y = np.where(X[:, 1] > 0, 1, -1)
    a = train_svm(X, y, SVMParams(seed=7))
    b = train_svm(X, y, SVMParams(seed=7))
    np.testing.assert_array_equal(a.weights, b.weights)


def test_svm_errors():
    with pytest.raises(ValueError, match="both classes"):
        train_svm([[0], [1]], [1, 1])
    with pytest.raises(ValueError, match="finite"):
        train_svm([[np.inf], [1]], [1, -1])
    with pytest.raises(ValueError):
        SVMParams(C=0)


# --- wrapper ---------------------------------------------------------------

def test_stratified_split():
    y = np.array([1] * 10 + [-1] * 10)
    train, test = stratified_split(y, 3)
    assert len(test) == 6 and len(train) == 14
    assert sorted(np.concatenate([train, test])) == list(range(20))
    assert (y[test] == 1).sum() == 3
    with pytest.raises(DatasetError, match="at least 4"):
        stratified_split(np.array([1] * 3 + [-1] * 10), 0)


def test_wrapper_single_type_is_suboptimal():
    ds = generate_synthetic(SynthSpec(block_columns=(8,), rows_per_class=8, rank=2, noise=0.1, seed=3))
    (label,) = wrapper_label(ds, enumerate_partitions(ds.labels)[0])
    assert label.z_accuracy == 0 and not label.optimal


def test_wrapper_two_subsets_z_scores(monkeypatch):
    import geomfs.harness.wrapper as w

    accs = iter([0.9, 0.5, 0.7])
    monkeypatch.setattr(w, "subset_accuracy", lambda *a: next(accs))
    ds = generate_synthetic(SynthSpec(block_columns=(4, 4), rows_per_class=6, rank=1, seed=0))
    labels = wrapper_label(ds, enumerate_partitions(ds.labels)[0])
    # population std of (0.9, 0.5, 0.7) is sqrt(0.08 / 3)
    assert [round(l.z_accuracy, 6) for l in labels] == [1.224745, -1.224745, 0.0]
    assert [l.optimal for l in labels] == [True, False, False]


def test_wrapper_two_accuracies():
    from geomfs.geometry import zscore

    assert list(zscore([0.9, 0.5])) == pytest.approx([1.0, -1.0])


def test_wrapper_noise_type_scores_lower():
    # t1 carries the class signal; "noise" is a dense random block
    all_types, informative = [], []
    for seed in range(6):
        spec = SynthSpec(block_columns=(12,), rows_per_class=20, rank=2, noise=0.15, seed=seed)
        ds = augment_random_columns(generate_synthetic(spec), 1.0, 0.5, seed=50 + seed, block="noise")
        acc = {l.subset: l.test_accuracy
               for l in wrapper_label(ds, enumerate_partitions(ds.labels)[0], split_seed=seed)}
        all_types.append(acc["t1,noise"])
        informative.append(acc["t1"])
    assert np.mean(all_types) < np.mean(informative)


def test_wrapper_deterministic():
    ds = generate_synthetic(SynthSpec(block_columns=(6, 6), rows_per_class=10, noise=0.1, seed=2))
    part = enumerate_partitions(ds.labels)[0]
    assert wrapper_label(ds, part, SVMParams(seed=3), 9) == wrapper_label(ds, part, SVMParams(seed=3), 9)


def test_labels_file_round_trip():
    labels = [SubsetLabel("pos=B", "t1,t2", 0.75, 1.25, True), SubsetLabel("pos=B", "t1", 0.5, -1.0, False)]
    buf = io.StringIO()
    write_labels(labels, buf)
    assert buf.getvalue().splitlines()[0] == "pos=B\tt1,t2\t0.75\t1.25\toptimal"
    buf.seek(0)
    assert read_labels(buf) == labels
    with pytest.raises(DatasetError):
        read_labels(io.StringIO("pos=B\tt1\t0.5\t0\tmaybe\n"))


def _report_and_truth(truth_flags):
    ds = generate_synthetic(SynthSpec(block_columns=(4, 4), rows_per_class=5, rank=1, seed=0))
    report = select(ds)
    keys = sorted(report.verdicts())
    truth = [SubsetLabel(p, s, 0.5, 0.0, flag) for (p, s), flag in zip(keys, truth_flags(report, keys))]
    return report, truth


def test_selection_quality_perfect():
    report, truth = _report_and_truth(lambda r, keys: [r.verdicts()[k] for k in keys])
    assert selection_quality(report, truth).accuracy == 1.0


def test_selection_quality_all_suboptimal_recall_zero():
    report, truth = _report_and_truth(lambda r, keys: [True] * len(keys))
    for pr in report.partitions:
        pr.results = [type(x)(x.subset, x.profile, type(x.verdict)(0, 0, False), 0) for x in pr.results]
    assert selection_quality(report, truth).recall == 0.0


def test_selection_quality_key_mismatch():
    report, truth = _report_and_truth(lambda r, keys: [True] * len(keys))
    with pytest.raises(DatasetError, match="keys differ"):
        selection_quality(report, truth[:-1])


def test_independent_verdicts_accuracy_near_base_rate():
    from geomfs.harness.wrapper import compare

    rng = np.random.default_rng(12)
    n = 4000
    truth = [SubsetLabel("p", str(i), 0.5, 0.0, bool(rng.random() < 0.3)) for i in range(n)]
    predicted = {("p", str(i)): bool(rng.random() < 0.2) for i in range(n)}
    acc = metrics(compare(predicted, truth)).accuracy
    # independent guesses: 0.3*0.2 + 0.7*0.8 = 0.62, below max base rate 0.7
    assert acc == pytest.approx(0.62, abs=0.03)
    assert acc <= 0.7


# --- synthetic data -----------------------------------------------------------

def test_augment_counts():
    layout = FeatureTypeLayout((("t1", 0, 400), ("t2", 400, 800)))
    X = np.zeros((4, 800))
    X[:, 0] = X[:, 400] = 1
    ds = from_dense(X, ["A", "B", "A", "B"], layout)
    aug = augment_random_columns(ds, 0.25, 0.5, seed=1)
    assert aug.n_columns == 1000
    assert aug.layout.blocks[-1] == ("random", 800, 1000)
    np.testing.assert_array_equal(aug.to_dense()[:, :800], ds.to_dense())


def test_augment_645_to_806():
    layout = FeatureTypeLayout((("t1", 0, 645),))
    X = np.zeros((2, 645))
    X[:, 3] = 1
    ds = from_dense(X, ["A", "B"], layout)
    assert augment_random_columns(ds, 0.25, 0.5, seed=0).n_columns == 806


def test_augment_floor_and_determinism():
    ds = generate_synthetic(SynthSpec(block_columns=(5,), rows_per_class=4, rank=1, seed=0))
    aug = augment_random_columns(ds, 0.01, 0.05, seed=3)
    assert aug.n_columns == 6
    assert np.all(aug.to_dense()[:, 5] == 1)  # repaired: single column must be nonzero
    assert augment_random_columns(ds, 0.5, 0.3, seed=3) == augment_random_columns(ds, 0.5, 0.3, seed=3)
    with pytest.raises(DatasetError):
        augment_random_columns(ds, 0.0, 0.5)
    with pytest.raises(DatasetError):
        augment_random_columns(ds, 0.5, 1.0)


@pytest.mark.parametrize("rank", [0, 1, 3])
def test_synthetic_rank_target(rank):
    spec = SynthSpec(block_columns=(12, 12), rows_per_class=15, rank=rank, group_size=2, seed=rank)
    ds = generate_synthetic(spec)
    X = ds.to_dense()
    for label in ds.labels:
        rows = X[[i for i, l in enumerate(ds.row_labels) if l == label]]
        for _, s, e in ds.layout.blocks:
            assert affine_dimension(rows[:, s:e]) <= rank


def test_synthetic_identical_templates_f6_one():
    ds = generate_synthetic(SynthSpec(block_columns=(8, 8), rows_per_class=10, rank=2,
                                      shared_templates=True, seed=4))
    part = enumerate_partitions(ds.labels)[0]
    for subset in (FeatureSubset.of("t1"), FeatureSubset.of("t1", "t2")):
        assert compute_profile(build_clouds(ds, part, subset)).f6 == 1.0


def test_synthetic_deterministic():
    spec = SynthSpec(n_classes=3, block_columns=(6, 7), rows_per_class=5, noise=0.1, seed=9)
    a, b = generate_synthetic(spec), generate_synthetic(spec)
    assert a == b
    np.testing.assert_array_equal(a.to_dense(), b.to_dense())


def test_synthetic_infeasible():
    with pytest.raises(DatasetError, match="exceeds"):
        generate_synthetic(SynthSpec(block_columns=(20,), rows_per_class=3, rank=3))
    with pytest.raises(DatasetError, match="too few"):
        generate_synthetic(SynthSpec(block_columns=(4,), rows_per_class=10, rank=3, group_size=2))


def test_synthetic_per_block_noise():
    spec = SynthSpec(block_columns=(12, 12), rows_per_class=15, rank=2, noise=(0.0, 0.3), seed=2)
    ds = generate_synthetic(spec)
    X = ds.to_dense()
    for label in ds.labels:
        rows = X[[i for i, l in enumerate(ds.row_labels) if l == label]]
        assert affine_dimension(rows[:, 0:12]) <= 2
        assert affine_dimension(rows[:, 12:24]) > 2
    with pytest.raises(DatasetError, match="one noise rate per block"):
        generate_synthetic(SynthSpec(block_columns=(12, 12), noise=(0.1,)))
    with pytest.raises(DatasetError, match="noise"):
        generate_synthetic(SynthSpec(block_columns=(12, 12), noise=(0.1, 1.0)))
