"""Point clouds per (classifier, feature subset) and the six geometric ratios.

Ratios, with affdim the affine hull dimension and ambdim the count of
nonzero columns:

    f1 = affdim(P_p) / ambdim(P_p)
    f2 = affdim(P_n) / ambdim(P_n)
    f3 = affdim(P_p) / ambdim(P_f)
    f4 = affdim(P_n) / ambdim(P_f)
    f5 = affdim(P_f) / ambdim(P_f)
    f6 = share of samples lying in the intersection of two affine hulls

A zero denominator yields 0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .dataio import DatasetError, FeatureSubset, SparseDataset, project, split_by_partition
from .enumeration import ClassPartition
from .linalg import (
    DEFAULT_TOLERANCE,
    RankTolerance,
    affine_dimension,
    ambient_dimension,
    hull_membership,
)


class F6Mode(str, enum.Enum):
    #: samples in aff(P_p) and in aff(P_n)
    CLASS_VS_CLASS = "class"
    #: samples in aff(P_p) and in aff(P_f), as tabulated
    TABLE1_LITERAL = "table1"


@dataclass(frozen=True)
class PointClouds:
    positive: np.ndarray
    negative: np.ndarray
    full: np.ndarray

    def __post_init__(self):
        if len(self.positive) == 0 or len(self.negative) == 0:
            raise DatasetError("both classes must be nonempty")
        if len(self.full) != len(self.positive) + len(self.negative):
            raise DatasetError("full cloud must be the union of the class clouds")
        if not self.positive.shape[1] == self.negative.shape[1] == self.full.shape[1]:
            raise DatasetError("clouds differ in column count")


@dataclass(frozen=True)
class GeometryProfile:
    f: tuple[float, ...]
    z: tuple[float, ...] | None = None
    f6_mode: F6Mode = F6Mode.CLASS_VS_CLASS

    def __getattr__(self, name):
        # f1..f6 / z1..z6 shorthands
        if len(name) == 2 and name[0] in "fz" and name[1] in "123456":
            values = object.__getattribute__(self, name[0])
            if values is None:
                raise AttributeError(f"{name}: profile is not standardized")
            return values[int(name[1]) - 1]
        raise AttributeError(name)


def build_clouds(ds: SparseDataset, part: ClassPartition, subset: FeatureSubset) -> PointClouds:
    dense = project(ds, subset).to_dense()
    pos, neg = split_by_partition(ds, part)
    return PointClouds(dense[pos], dense[neg], dense)


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def compute_profile(
    clouds: PointClouds,
    tol: RankTolerance = DEFAULT_TOLERANCE,
    f6_mode: F6Mode | str = F6Mode.CLASS_VS_CLASS,
) -> GeometryProfile:
    f6_mode = F6Mode(f6_mode)
    Pp, Pn, Pf = clouds.positive, clouds.negative, clouds.full
    aff_p = affine_dimension(Pp, tol)
    aff_n = affine_dimension(Pn, tol)
    aff_f = affine_dimension(Pf, tol)
    amb_p, amb_n, amb_f = ambient_dimension(Pp), ambient_dimension(Pn), ambient_dimension(Pf)

    in_p = hull_membership(Pf, Pp, tol)
    other = Pn if f6_mode is F6Mode.CLASS_VS_CLASS else Pf
    in_other = hull_membership(Pf, other, tol)
    f6 = float(np.count_nonzero(in_p & in_other)) / len(Pf)

    return GeometryProfile(
        f=(
            _ratio(aff_p, amb_p),
            _ratio(aff_n, amb_n),
            _ratio(aff_p, amb_f),
            _ratio(aff_n, amb_f),
            _ratio(aff_f, amb_f),
            f6,
        ),
        f6_mode=f6_mode,
    )


def zscore(values) -> np.ndarray:
    """Population z-scores along axis 0; a constant column maps to 0.

    Results are rounded to 12 decimals so a value equal to the mean scores
    exactly 0 instead of a rounding-error residue.
    """
    X = np.asarray(values, dtype=np.float64)
    Z = np.zeros_like(X)
    std = X.std(axis=0)
    # max > min excludes rounding noise in the mean of identical values
    varying = (X.max(axis=0) > X.min(axis=0)) & (std > 0)
    Z[..., varying] = (X[..., varying] - X.mean(axis=0)[varying]) / std[varying]
    return np.round(Z, 12) + 0.0


def standardize_profiles(profiles: Sequence[GeometryProfile]) -> list[GeometryProfile]:
    """Z-score each ratio across the profiles of one classifier."""
    if not profiles:
        raise ValueError("no profiles to standardize")
    Z = zscore([p.f for p in profiles])
    return [replace(p, z=tuple(float(v) for v in row)) for p, row in zip(profiles, Z)]
