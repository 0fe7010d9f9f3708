"""Regression-gated subset selection over standardized geometry profiles."""

from __future__ import annotations

import logging
import math
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence, TextIO

import numpy as np
from scipy.special import expit

from .dataio import FeatureSubset, SparseDataset
from .enumeration import ClassPartition, enumerate_partitions, enumerate_subsets
from .geometry import (
    F6Mode,
    GeometryProfile,
    build_clouds,
    compute_profile,
    standardize_profiles,
)
from .linalg import DEFAULT_TOLERANCE, RankTolerance

log = logging.getLogger(__name__)


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class ModelCoefficients:
    """Intercept followed by one weight per standardized ratio, for each model."""

    logistic: tuple[float, ...]
    linear: tuple[float, ...]

    def __post_init__(self):
        for name in ("logistic", "linear"):
            values = getattr(self, name)
            if len(values) != 7:
                raise ValueError(f"{name} needs 7 coefficients, got {len(values)}")
            if not all(math.isfinite(v) for v in values):
                raise ValueError(f"{name} coefficients must be finite")


def default_coefficients() -> ModelCoefficients:
    # The linear f3 weight is printed without its leading decimal point in the
    # source table; 0.09114375 is the reading used here.
    return ModelCoefficients(
        logistic=(
            -0.64063267,
            0.15706603,
            0.1327297,
            -0.03350878,
            -0.15182902,
            0.19548473,
            -0.68787718,
        ),
        linear=(-1.039011e-12, 0.0, 0.0, 0.09114375, -0.01223389, -0.0200644, 0.0),
    )


def read_coefficients(stream: TextIO) -> ModelCoefficients:
    """Read ``logistic|linear<TAB>b0..b6`` lines; missing models keep defaults."""
    found = {}
    for lineno, line in enumerate(stream, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, *values = line.split("\t")
        if name not in ("logistic", "linear") or len(values) != 7:
            raise ValueError(f"coefficients line {lineno}: expected a model name and 7 values")
        try:
            found[name] = tuple(float(v) for v in values)
        except ValueError:
            raise ValueError(f"coefficients line {lineno}: bad number") from None
    defaults = default_coefficients()
    return ModelCoefficients(
        logistic=found.get("logistic", defaults.logistic),
        linear=found.get("linear", defaults.linear),
    )


def write_coefficients(coeffs: ModelCoefficients, out: TextIO) -> None:
    for name in ("logistic", "linear"):
        out.write(name + "\t" + "\t".join(repr(v) for v in getattr(coeffs, name)) + "\n")


@dataclass(frozen=True)
class Verdict:
    lin_pred: float
    log_pred: float
    optimal: bool


def _sigmoid(t: float) -> float:
    if t >= 0:
        return 1.0 / (1.0 + math.exp(-t))
    e = math.exp(t)
    return e / (1.0 + e)


def predict(profile: GeometryProfile, coeffs: ModelCoefficients) -> Verdict:
    """Linear prediction must be > 0 and logistic prediction >= 0.5."""
    if profile.z is None:
        raise ValueError("profile has no z-scores; run standardize_profiles first")
    z = profile.z
    lin = coeffs.linear[0] + math.fsum(b * v for b, v in zip(coeffs.linear[1:], z))
    eta = coeffs.logistic[0] + math.fsum(b * v for b, v in zip(coeffs.logistic[1:], z))
    log_pred = _sigmoid(eta)
    return Verdict(lin, log_pred, lin > 0 and log_pred >= 0.5)


@dataclass(frozen=True)
class SubsetResult:
    subset: FeatureSubset
    profile: GeometryProfile
    verdict: Verdict
    seconds: float


@dataclass
class PartitionResult:
    partition: ClassPartition
    results: list[SubsetResult]
    seconds: float

    @property
    def selected(self) -> list[FeatureSubset]:
        return [r.subset for r in self.results if r.verdict.optimal]


@dataclass
class SelectionReport:
    layout_names: tuple[str, ...]
    partitions: list[PartitionResult] = field(default_factory=list)

    def verdicts(self) -> dict[tuple[str, str], bool]:
        """``(canonical_name, subset key) -> optimal`` for every evaluated pair."""
        out = {}
        for pr in self.partitions:
            for r in pr.results:
                key = ",".join(n for n in self.layout_names if n in r.subset.selected)
                out[(pr.partition.canonical_name, key)] = r.verdict.optimal
        return out


def _timed_profile(ds, part, subset, tol, f6_mode):
    start = time.perf_counter()
    profile = compute_profile(build_clouds(ds, part, subset), tol, f6_mode)
    return profile, time.perf_counter() - start


def select_partition(
    ds: SparseDataset,
    part: ClassPartition,
    coeffs: ModelCoefficients | None = None,
    tol: RankTolerance = DEFAULT_TOLERANCE,
    f6_mode: F6Mode | str = F6Mode.CLASS_VS_CLASS,
    threads: int = 1,
) -> PartitionResult:
    coeffs = coeffs or default_coefficients()
    subsets = enumerate_subsets(ds.layout)
    start = time.perf_counter()
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            timed = list(pool.map(lambda s: _timed_profile(ds, part, s, tol, f6_mode), subsets))
    else:
        timed = [_timed_profile(ds, part, s, tol, f6_mode) for s in subsets]
    profiles = standardize_profiles([p for p, _ in timed])
    results = [
        SubsetResult(s, p, predict(p, coeffs), secs)
        for s, p, (_, secs) in zip(subsets, profiles, timed)
    ]
    elapsed = time.perf_counter() - start
    log.info("%s: %d/%d subsets accepted in %.3fs", part.canonical_name,
             sum(r.verdict.optimal for r in results), len(results), elapsed)
    return PartitionResult(part, results, elapsed)


def select(
    ds: SparseDataset,
    coeffs: ModelCoefficients | None = None,
    tol: RankTolerance = DEFAULT_TOLERANCE,
    f6_mode: F6Mode | str = F6Mode.CLASS_VS_CLASS,
    threads: int = 1,
) -> SelectionReport:
    """Score every feature subset for every binary classifier of ``ds``."""
    report = SelectionReport(ds.layout.names)
    for part in enumerate_partitions(ds.labels):
        report.partitions.append(select_partition(ds, part, coeffs, tol, f6_mode, threads))
    return report


def _design(Z) -> np.ndarray:
    Z = np.asarray(Z, dtype=np.float64)
    return np.column_stack([np.ones(len(Z)), Z])


def fit_logistic_irls(X, y, max_iter: int = 100, tol: float = 1e-10) -> np.ndarray:
    """Newton-Raphson / IRLS for logistic regression; ``X`` includes the intercept."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    beta = np.zeros(X.shape[1])
    for _ in range(max_iter):
        eta = X @ beta
        mu = expit(eta)
        w = np.clip(mu * (1 - mu), 1e-12, None)
        working = eta + (y - mu) / w
        sw = np.sqrt(w)
        new, *_ = np.linalg.lstsq(X * sw[:, None], working * sw, rcond=None)
        if np.max(np.abs(new - beta)) <= tol * (1 + np.max(np.abs(beta))):
            return new
        beta = new
    raise ConvergenceError(f"IRLS did not converge within {max_iter} iterations")


def refit(
    profiles: Sequence[GeometryProfile],
    optimal: Sequence[bool],
    z_accuracy: Sequence[float],
    max_iter: int = 100,
) -> ModelCoefficients:
    """Refit both full six-predictor models on standardized profiles.

    No predictor selection is performed. A rank-deficient design is reported
    with a warning and solved by minimum-norm least squares.
    """
    if len(profiles) < 10:
        raise ValueError("refit needs at least 10 training records")
    if not len(profiles) == len(optimal) == len(z_accuracy):
        raise ValueError("training columns differ in length")
    y = np.asarray(optimal, dtype=np.float64)
    if y.min() == y.max():
        raise ValueError("refit needs both optimal and suboptimal records")
    if any(p.z is None for p in profiles):
        raise ValueError("training profiles must be standardized")
    X = _design([p.z for p in profiles])
    if np.linalg.matrix_rank(X) < X.shape[1]:
        warnings.warn("rank-deficient design matrix; using minimum-norm solution", stacklevel=2)
    logistic = fit_logistic_irls(X, y, max_iter=max_iter)
    linear, *_ = np.linalg.lstsq(X, np.asarray(z_accuracy, dtype=np.float64), rcond=None)
    return ModelCoefficients(tuple(map(float, logistic)), tuple(map(float, linear)))
