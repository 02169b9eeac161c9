"""Blades built from spanning vectors, with their orthogonal factorization."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateSpan, DimensionMismatch, ZeroBlade
from .ga_core import MAX_DIM, Multivector, geometric_product, modulus, outer_fold, outer_product

TOL_RANK = 1e-10
# residual/input ratio below which a vector gets a second orthogonalization pass
REORTH_RATIO = 1e-6


@dataclass(frozen=True)
class SpanningSet:
    n: int
    vectors: tuple

    def __init__(self, n: int, vectors):
        vecs = tuple(np.array(v, dtype=np.float64) for v in vectors)
        if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_DIM:
            raise ValueError(f"dimension must be in [1, {MAX_DIM}], got {n!r}")
        if not 1 <= len(vecs) <= n:
            raise DimensionMismatch(f"need 1..{n} spanning vectors, got {len(vecs)}")
        for v in vecs:
            if v.shape != (n,):
                raise DimensionMismatch(f"spanning vector has shape {v.shape}, expected ({n},)")
            if not np.all(np.isfinite(v)):
                raise ValueError("spanning vectors must be finite")
            if not np.any(v):
                raise DegenerateSpan("zero spanning vector")
            v.setflags(write=False)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "vectors", vecs)

    @property
    def r(self) -> int:
        return len(self.vectors)

    def matrix(self) -> np.ndarray:
        """n x r matrix with the spanning vectors as columns."""
        return np.column_stack(self.vectors)


def orthogonal_factorization(vectors: Sequence[np.ndarray], tol_rank: float = TOL_RANK):
    """Modified Gram-Schmidt with magnitude bookkeeping.

    Returns ``(magnitude, factors)`` where ``factors`` is an ``r x n`` array of
    orthonormal rows and ``magnitude`` is the product of the residual norms,
    so that ``v1 ^ ... ^ vr == magnitude * f1 f2 ... fr``.

    Raises
    ------
    DegenerateSpan
        If a residual drops below ``tol_rank`` times the largest input norm.
    """
    V = np.array([np.asarray(v, dtype=np.float64) for v in vectors])
    if V.ndim != 2 or V.shape[0] == 0:
        raise DimensionMismatch("expected a non-empty list of equal-length vectors")
    scale = max(np.linalg.norm(V, axis=1).max(), np.finfo(float).tiny)
    Q = np.zeros_like(V)
    magnitude = 1.0
    for k in range(V.shape[0]):
        w = V[k].copy()
        in_norm = np.linalg.norm(w)
        for j in range(k):
            w -= np.dot(Q[j], w) * Q[j]
        res = np.linalg.norm(w)
        if res < REORTH_RATIO * in_norm:
            for j in range(k):
                w -= np.dot(Q[j], w) * Q[j]
            res = np.linalg.norm(w)
        if res < tol_rank * scale:
            raise DegenerateSpan(
                f"vector {k} is linearly dependent on its predecessors (residual {res:.3e})"
            )
        Q[k] = w / res
        magnitude *= res
    return magnitude, Q


@dataclass(frozen=True)
class Blade:
    mv: Multivector
    grade: int
    magnitude: float
    ortho_factors: np.ndarray  # r x n, orthonormal rows

    @property
    def n(self) -> int:
        return self.mv.n

    def factor_product(self) -> Multivector:
        """``magnitude * f1 f2 ... fr`` rebuilt from the factorization."""
        out = Multivector.scalar(self.n, self.magnitude)
        for f in self.ortho_factors:
            out = geometric_product(out, Multivector.vector(f))
        return out


def blade_from_spanning(s: SpanningSet, tol_rank: float = TOL_RANK) -> Blade:
    magnitude, factors = orthogonal_factorization(s.vectors, tol_rank)
    mv = outer_fold(Multivector.vector(v) for v in s.vectors)
    factors.setflags(write=False)
    return Blade(mv=mv, grade=s.r, magnitude=magnitude, ortho_factors=factors)


def blade_from_vectors(vectors, tol_rank: float = TOL_RANK) -> Blade:
    vecs = [np.asarray(v, dtype=np.float64) for v in vectors]
    return blade_from_spanning(SpanningSet(len(vecs[0]), vecs), tol_rank)


def subspace_membership(x, A: Blade, tol: float = 1e-10) -> bool:
    """True iff ``|x ^ A| <= tol |x| |A|``."""
    xv = x if isinstance(x, Multivector) else Multivector.vector(x)
    if xv.n != A.n:
        raise DimensionMismatch(f"vector in R^{xv.n}, blade in R^{A.n}")
    return modulus(outer_product(xv, A.mv)) <= tol * modulus(xv) * A.magnitude


def unit_blade(A: Blade) -> Blade:
    if not A.magnitude > 0:
        raise ZeroBlade("cannot normalize a zero blade")
    return Blade(mv=A.mv / A.magnitude, grade=A.grade, magnitude=1.0, ortho_factors=A.ortho_factors)
