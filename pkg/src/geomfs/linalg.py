"""Numerical rank, affine hull dimension and affine hull membership."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np


@dataclass(frozen=True)
class RankTolerance:
    """Singular value cutoff policy.

    ``relative``: keep sigma_i > max(m, n) * epsilon * sigma_max.
    ``absolute``: keep sigma_i > epsilon.
    """

    policy: Literal["relative", "absolute"] = "relative"
    epsilon: float = float(np.finfo(np.float64).eps)

    def __post_init__(self):
        if self.policy not in ("relative", "absolute"):
            raise ValueError(f"unknown tolerance policy {self.policy!r}")
        if not np.isfinite(self.epsilon) or self.epsilon <= 0:
            raise ValueError("tolerance epsilon must be finite and positive")

    def threshold(self, shape: tuple[int, int], sigma_max: float) -> float:
        if self.policy == "absolute":
            return self.epsilon
        return max(shape) * self.epsilon * sigma_max


DEFAULT_TOLERANCE = RankTolerance()


def numerical_rank(M, tol: RankTolerance = DEFAULT_TOLERANCE) -> int:
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2:
        raise ValueError("expected a 2-D matrix")
    if M.size == 0:
        return 0
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.count_nonzero(s > tol.threshold(M.shape, s[0])))


def exact_rank(M: Sequence[Sequence[int]]) -> int:
    """Rank over the rationals by fraction-free (Bareiss) elimination."""
    A = [[int(x) for x in row] for row in M]
    if not A or not A[0]:
        return 0
    m, n = len(A), len(A[0])
    rank, prev = 0, 1
    for col in range(n):
        if rank == m:
            break
        pivot = next((r for r in range(rank, m) if A[r][col] != 0), None)
        if pivot is None:
            continue
        A[rank], A[pivot] = A[pivot], A[rank]
        p = A[rank][col]
        for r in range(rank + 1, m):
            a = A[r][col]
            A[r] = [(p * A[r][c] - a * A[rank][c]) // prev for c in range(n)]
        prev = p
        rank += 1
    return rank


def _as_points(points) -> np.ndarray:
    P = np.asarray(points, dtype=np.float64)
    if P.ndim != 2 or P.shape[0] == 0:
        raise ValueError("need a nonempty list of equal-length vectors")
    return P


def _differences(P: np.ndarray) -> np.ndarray:
    # columns v_i - v_last, one per leading point
    return (P[:-1] - P[-1]).T


def affine_dimension(points, tol: RankTolerance = DEFAULT_TOLERANCE) -> int:
    P = _as_points(points)
    if P.shape[0] == 1:
        return 0
    return numerical_rank(_differences(P), tol)


def in_affine_hull(x, points, tol: RankTolerance = DEFAULT_TOLERANCE) -> bool:
    """True iff appending ``x`` does not raise the affine dimension of ``points``."""
    P = _as_points(points)
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (P.shape[1],):
        raise ValueError("point and hull generators differ in length")
    return bool(hull_membership(x[None, :], P, tol)[0])


def hull_membership(X, points, tol: RankTolerance = DEFAULT_TOLERANCE) -> np.ndarray:
    """Vectorized :func:`in_affine_hull` over the rows of ``X``.

    The generator rank is computed once; each candidate then costs one SVD
    of the generator differences with one extra column.
    """
    P = _as_points(points)
    X = np.asarray(X, dtype=np.float64)
    D = _differences(P)
    base = numerical_rank(D, tol) if D.shape[1] else 0
    out = np.empty(len(X), dtype=bool)
    for i, x in enumerate(X):
        out[i] = numerical_rank(np.column_stack([D, x - P[-1]]), tol) == base
    return out


def ambient_dimension(points) -> int:
    """Number of coordinates that are nonzero in at least one point."""
    P = _as_points(points)
    return int(np.count_nonzero(np.any(P != 0, axis=0)))
