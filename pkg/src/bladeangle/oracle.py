"""Principal angles by the classical matrix route: QR, then SVD of Q_A^T Q_B.

Both factorizations are written out here (modified Gram-Schmidt and
one-sided Jacobi) so the check against the Clifford path does not lean on
the same LAPACK kernels the rest of the stack might use.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blades import REORTH_RATIO, TOL_RANK, SpanningSet
from .errors import DimensionMismatch, NumericalFailure, RankDeficient

MAX_SWEEPS = 30
JACOBI_TOL = 1e-14


@dataclass(frozen=True)
class PrincipalData:
    angles: np.ndarray  # ascending
    cosines: np.ndarray  # descending
    a_vectors: np.ndarray  # r x n rows
    b_vectors: np.ndarray

    @property
    def cos_total(self) -> float:
        return float(np.prod(self.cosines))


def orthonormalize(M: np.ndarray, tol_rank: float = TOL_RANK) -> np.ndarray:
    """Orthonormal basis (as columns) for the column span of ``M``."""
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[1] > M.shape[0]:
        raise DimensionMismatch(f"need an n x r matrix with r <= n, got {M.shape}")
    Q = M.copy()
    scale = max(np.linalg.norm(M, axis=0).max(initial=0.0), np.finfo(float).tiny)
    for k in range(Q.shape[1]):
        in_norm = np.linalg.norm(Q[:, k])
        # two passes when cancellation is heavy
        for _ in range(2):
            for j in range(k):
                Q[:, k] -= np.dot(Q[:, j], Q[:, k]) * Q[:, j]
            res = np.linalg.norm(Q[:, k])
            if res >= REORTH_RATIO * in_norm:
                break
        if res < tol_rank * scale:
            raise RankDeficient(f"column {k} is (numerically) dependent, residual {res:.3e}")
        Q[:, k] /= res
    return Q


def _complete_columns(U: np.ndarray, keep: np.ndarray) -> np.ndarray:
    # Replace columns not in `keep` by an orthonormal completion.
    r = U.shape[0]
    good = [U[:, k] for k in range(U.shape[1]) if keep[k]]
    out = U.copy()
    candidates = iter(np.eye(r))
    for k in range(U.shape[1]):
        if keep[k]:
            continue
        for c in candidates:
            w = c.copy()
            for g in good:
                w -= np.dot(g, w) * g
            for g in good:
                w -= np.dot(g, w) * g
            nw = np.linalg.norm(w)
            if nw > 0.5:
                w /= nw
                good.append(w)
                out[:, k] = w
                break
    return out


def svd_small(C: np.ndarray, max_sweeps: int | None = None, tol: float = JACOBI_TOL):
    """One-sided Jacobi SVD of a small square matrix.

    Returns ``U, sigma, V`` with ``C = U @ diag(sigma) @ V.T`` and ``sigma``
    sorted descending.

    Raises
    ------
    NumericalFailure
        If the columns are not mutually orthogonal after ``max_sweeps``.
    """
    if max_sweeps is None:
        max_sweeps = MAX_SWEEPS
    C = np.asarray(C, dtype=np.float64)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise DimensionMismatch(f"svd_small needs a square matrix, got {C.shape}")
    r = C.shape[0]
    W = C.copy()
    V = np.eye(r)
    fro = np.linalg.norm(W)
    for _ in range(max_sweeps):
        rotated = False
        for p in range(r - 1):
            for q in range(p + 1, r):
                alpha = np.dot(W[:, p], W[:, p])
                beta = np.dot(W[:, q], W[:, q])
                gamma = np.dot(W[:, p], W[:, q])
                if abs(gamma) <= tol * fro * fro or abs(gamma) <= tol * np.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = np.copysign(1.0, zeta) / (abs(zeta) + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = c * t
                wp, wq = W[:, p].copy(), W[:, q]
                W[:, p] = c * wp - s * wq
                W[:, q] = s * wp + c * wq
                vp, vq = V[:, p].copy(), V[:, q]
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
        if not rotated:
            break
    else:
        raise NumericalFailure(f"Jacobi SVD did not converge in {max_sweeps} sweeps")
    sigma = np.linalg.norm(W, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma, W, V = sigma[order], W[:, order], V[:, order]
    keep = sigma > 1e-15 * max(fro, 1.0)
    U = np.zeros_like(W)
    U[:, keep] = W[:, keep] / sigma[keep]
    if not keep.all():
        U = _complete_columns(U, keep)
    return U, sigma, V


def principal_angles(A: SpanningSet, B: SpanningSet, tol_rank: float = TOL_RANK) -> PrincipalData:
    if A.n != B.n:
        raise DimensionMismatch(f"subspaces live in R^{A.n} and R^{B.n}")
    if A.r != B.r:
        raise DimensionMismatch(f"subspace dimensions differ: {A.r} vs {B.r}")
    QA = orthonormalize(A.matrix(), tol_rank)
    QB = orthonormalize(B.matrix(), tol_rank)
    U, sigma, V = svd_small(QA.T @ QB)
    cosines = np.clip(sigma, 0.0, 1.0)
    return PrincipalData(
        angles=np.arccos(cosines),
        cosines=cosines,
        a_vectors=(QA @ U).T,
        b_vectors=(QB @ V).T,
    )
