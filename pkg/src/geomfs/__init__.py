"""Geometry-driven feature-type selection for linear SVMs.

Affine hull dimensions of the class point clouds, measured per feature-type
subset, are standardized and fed through fixed linear and logistic models
that mark each subset optimal or suboptimal.
"""

from .dataio import (
    DatasetError,
    FeatureSubset,
    FeatureTypeLayout,
    SparseDataset,
    parse_dataset,
    project,
    split_by_partition,
)
from .enumeration import ClassPartition, enumerate_partitions, enumerate_subsets
from .geometry import F6Mode, GeometryProfile, PointClouds, build_clouds, compute_profile, standardize_profiles
from .linalg import RankTolerance, affine_dimension, ambient_dimension, exact_rank, in_affine_hull, numerical_rank
from .selector import ModelCoefficients, SelectionReport, Verdict, default_coefficients, predict, refit, select

__version__ = "0.1.0"
