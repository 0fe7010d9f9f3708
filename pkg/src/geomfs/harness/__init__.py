"""Ground-truth tooling: linear SVM, metrics, wrapper oracle, synthetic data."""

from .metrics import ConfusionCounts, Scores, metrics
from .svm import LinearModel, SVMParams, train_svm
from .synth import SynthSpec, augment_random_columns, generate_synthetic
from .wrapper import SubsetLabel, read_labels, selection_quality, wrapper_label, write_labels

__all__ = [
    "ConfusionCounts",
    "LinearModel",
    "SVMParams",
    "Scores",
    "SubsetLabel",
    "SynthSpec",
    "augment_random_columns",
    "generate_synthetic",
    "metrics",
    "read_labels",
    "selection_quality",
    "train_svm",
    "wrapper_label",
    "write_labels",
]
