"""Relative orientation of two r-blades from the single product ``A B~``.

For unit blades the product factors into commuting rotors, one per pair
of principal vectors, ``G = (c1 + s1 i1)(c2 + s2 i2)...(cr + sr ir)``.
Its scalar part is the product of the cosines, its top grade the product
of the sines, and after dividing out the lowest nonzero grade (the
perpendicular planes scaled by the surviving cosines) the bivector part is
``sum tan(theta_k) i_k``.  Splitting that bivector into orthogonal planes
gives every individual angle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .blades import Blade
from .errors import DimensionMismatch, GradeMismatch, NumericalFailure, SplitFailure, ZeroBlade
from .ga_core import (
    Multivector,
    geometric_product,
    grade_of,
    grade_projection,
    modulus,
    outer_product,
    reverse,
    scalar_product,
)

TOL_GRADE = 1e-10
TOL_ANGLE = 1e-9
SPLIT_RTOL = 1e-9
EIGH_MAX_SWEEPS = 50


def _check_pair(A: Blade, B: Blade) -> None:
    if A.n != B.n:
        raise DimensionMismatch(f"blades live in R^{A.n} and R^{B.n}")
    if A.grade != B.grade:
        raise GradeMismatch(f"blade grades differ: {A.grade} vs {B.grade}")
    if not (A.magnitude > 0 and B.magnitude > 0):
        raise ZeroBlade("zero blade has no orientation")


def cos_angle(A: Blade, B: Blade) -> float:
    """Signed cosine of the total angle, ``<A B~>_0 / (|A||B|)``.

    The sign carries relative blade orientation; its absolute value is the
    product of the principal-angle cosines.
    """
    _check_pair(A, B)
    return scalar_product(A.mv, reverse(B.mv)) / (A.magnitude * B.magnitude)


# above this many coefficient pairs, multiply through the orthogonal factors
DIRECT_PRODUCT_MAX_PAIRS = 1 << 22


def _unit_product(A: Blade, B: Blade) -> Multivector:
    pairs = np.count_nonzero(A.mv.coeffs) * np.count_nonzero(B.mv.coeffs)
    if pairs <= DIRECT_PRODUCT_MAX_PAIRS:
        return geometric_product(A.mv / A.magnitude, reverse(B.mv / B.magnitude))
    # same element: unit(A) = a1 a2 ... ar, reverse(unit(B)) = br ... b1
    G = Multivector.scalar(A.n)
    for f in list(A.ortho_factors) + list(B.ortho_factors[::-1]):
        G = geometric_product(G, Multivector.vector(f))
    return G


def sin_product(A: Blade, B: Blade) -> float:
    """``|<A B~>_{2r}| / (|A||B|)``, the product of all principal-angle sines.

    When ``2r > n`` the two subspaces must share at least ``2r - n``
    directions, so the product is zero; this matches the empty top grade.
    """
    _check_pair(A, B)
    r = A.grade
    if 2 * r > A.n:
        return 0.0
    return float(_unit_product(A, B).grade_norms()[2 * r])


@dataclass(frozen=True)
class ProductDecomposition:
    G: Multivector
    grade_norms: np.ndarray
    lowest_grade: int
    highest_grade: int
    r: int

    @property
    def s(self) -> int:
        return self.r - self.highest_grade // 2

    @property
    def t(self) -> int:
        return self.lowest_grade // 2


def decompose_product(A: Blade, B: Blade, tol_grade: float = TOL_GRADE) -> ProductDecomposition:
    _check_pair(A, B)
    G = _unit_product(A, B)
    norms = G.grade_norms()
    present = np.flatnonzero(norms > tol_grade)
    if present.size == 0:
        raise NumericalFailure("product of unit blades vanished")
    return ProductDecomposition(
        G=G,
        grade_norms=norms,
        lowest_grade=int(present[0]),
        highest_grade=int(present[-1]),
        r=A.grade,
    )


def bivector_matrix(F: Multivector) -> np.ndarray:
    """Antisymmetric ``n x n`` matrix with ``M[i, j]`` the coefficient of ``e_{i+1} e_{j+1}``."""
    n = F.n
    M = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            c = F.coeffs[(1 << i) | (1 << j)]
            M[i, j] = c
            M[j, i] = -c
    return M


def _jacobi_eigh(S: np.ndarray, max_sweeps: int = EIGH_MAX_SWEEPS):
    """Cyclic Jacobi eigensolver for a small symmetric matrix."""
    A = np.array(S, dtype=np.float64)
    m = A.shape[0]
    V = np.eye(m)
    fro = np.linalg.norm(A)
    for _ in range(max_sweeps):
        off = np.linalg.norm(A - np.diag(np.diag(A)))
        if off <= 1e-15 * fro or fro == 0.0:
            return np.diag(A).copy(), V
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = A[p, q]
                if abs(apq) <= 1e-18 * fro:
                    A[p, q] = A[q, p] = 0.0
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = np.copysign(1.0, theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    raise NumericalFailure(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")


@dataclass(frozen=True)
class SplitComponent:
    sigma: float
    plane: Multivector
    u: np.ndarray
    v: np.ndarray


def bivector_split(F: Multivector, rtol: float = SPLIT_RTOL) -> list[SplitComponent]:
    """Write a bivector as ``sum sigma_k u_k ^ v_k`` over orthogonal planes.

    Components come out largest first.  Each step takes the dominant
    eigenvector ``u`` of ``M^T M`` (``M`` the antisymmetric coefficient
    matrix) restricted to the not-yet-used subspace, pairs it with
    ``v = M^T u / |M^T u|`` and deflates both.  Repeated ``sigma`` values
    give a valid but non-unique choice of planes.

    Raises
    ------
    SplitFailure
        If the components do not reconstruct ``F`` to ``rtol * |F|``.
    """
    n = F.n
    fnorm = modulus(F)
    other = modulus(F - grade_projection(F, 2)) if n >= 2 else fnorm
    if other > 1e-12 * max(fnorm, 1.0):
        raise ValueError("bivector_split expects a pure bivector")
    if fnorm == 0.0 or n < 2:
        return []
    M = bivector_matrix(F)
    floor = 64 * np.finfo(float).eps * fnorm
    W = np.eye(n)
    comps: list[SplitComponent] = []
    while W.shape[1] >= 2:
        Mw = W.T @ M @ W
        if np.linalg.norm(Mw) <= floor:
            break
        evals, evecs = _jacobi_eigh(Mw.T @ Mw)
        y = evecs[:, int(np.argmax(evals))]
        u = W @ y
        u /= np.linalg.norm(u)
        v = M.T @ u
        v = W @ (W.T @ v)
        v -= np.dot(u, v) * u
        sigma = float(np.linalg.norm(v))
        if sigma <= floor:
            break
        v /= sigma
        sigma = float(u @ M @ v)
        plane = outer_product(Multivector.vector(u), Multivector.vector(v))
        comps.append(SplitComponent(sigma, plane, u, v))
        # orthonormal basis of the part of span(W) orthogonal to u, v
        yu, yv = W.T @ u, W.T @ v
        basis = np.column_stack([yu, yv, np.eye(W.shape[1])])
        Qfull, _ = np.linalg.qr(basis, mode="reduced")
        W = W @ Qfull[:, 2 : W.shape[1]]
    rebuilt = Multivector(n)
    for c in comps:
        rebuilt = rebuilt + c.sigma * c.plane
    residual = modulus(F - rebuilt)
    if residual > rtol * fnorm:
        raise SplitFailure(f"bivector split residual {residual:.3e} exceeds {rtol:.1e}*|F|")
    return comps


@dataclass(frozen=True)
class AngleReport:
    r: int
    n: int
    cos_total: float
    sin_product_abs: float
    s_intersection: int
    t_perpendicular: int
    principal_angles: np.ndarray  # descending
    principal_planes: list  # unit 2-blades, ordered like the angles they belong to
    perpendicular_blade: Multivector | None
    lowest_grade: int
    highest_grade: int
    residuals: dict = field(default_factory=dict)


def full_orientation(
    A: Blade,
    B: Blade,
    tol_grade: float = TOL_GRADE,
    tol_angle: float = TOL_ANGLE,
) -> AngleReport:
    """Every principal angle and plane of two equal-grade blades.

    Zero angles are counted from the bivector split (components whose
    tangent falls below ``tan(tol_angle)``), right angles from the lowest
    nonzero grade of ``G``; the spread of the split is the remaining
    angles via ``arctan``.
    """
    dec = decompose_product(A, B, tol_grade)
    G, r, n = dec.G, dec.r, A.n
    t = dec.t

    L = grade_projection(G, dec.lowest_grade)
    L_norm = modulus(L)
    L_inv = reverse(L) / (L_norm * L_norm)
    G_div = geometric_product(L_inv, G)
    F = grade_projection(G_div, 2) if n >= 2 else Multivector(n)
    comps = bivector_split(F)

    tan_floor = np.tan(tol_angle)
    mids = [c for c in comps if c.sigma > tan_floor]
    if len(mids) > r - t:
        raise SplitFailure(
            f"bivector part has {len(mids)} planes but only {r - t} non-right angles remain"
        )
    angles = [np.pi / 2] * t + [float(np.arctan(c.sigma)) for c in mids]
    angles += [0.0] * (r - len(angles))
    angles = np.array(sorted(angles, reverse=True))

    s_count = int(np.sum(angles < tol_angle))
    t_count = int(np.sum(np.pi / 2 - angles < tol_angle))

    mids_sorted = sorted(mids, key=lambda c: -c.sigma)
    planes = [c.plane for c in mids_sorted if np.pi / 2 - np.arctan(c.sigma) >= tol_angle]
    perp_blade = None
    if t > 0:
        perp_blade = L / L_norm
        if t == 1:
            # a single perpendicular pair: L is itself that plane
            planes = [perp_blade] + planes

    rotor = L / L_norm
    for c in mids:
        th = np.arctan(c.sigma)
        rotor = geometric_product(rotor, np.cos(th) + np.sin(th) * c.plane)
    recon = float(np.max(np.abs(G.coeffs - rotor.coeffs)))

    top = min(2 * (r - s_count), 2 * (n // 2))
    top_part = grade_projection(G, top)
    top_sign = float(np.sign(top_part.coeffs[np.argmax(np.abs(top_part.coeffs))]))
    sin_abs = float(dec.grade_norms[top])

    g = grade_of(np.arange(1 << n))
    leak_mask = (g % 2 == 1) | (g > 2 * min(r, n // 2))
    nonzero = angles[angles >= tol_angle]
    residuals = {
        "grade_leakage": float(np.linalg.norm(G.coeffs[leak_mask])),
        "norm_defect": abs(modulus(G) - 1.0),
        "split_residual": modulus(F - sum((c.sigma * c.plane for c in comps), Multivector(n))),
        "reconstruction": recon,
        "cos_consistency": abs(abs(G.coeffs[0]) - float(np.prod(np.cos(angles)))),
        "sin_consistency": abs(sin_abs - float(np.prod(np.sin(nonzero)))),
        "top_grade_sign": top_sign,
    }
    return AngleReport(
        r=r,
        n=n,
        cos_total=float(G.coeffs[0]),
        sin_product_abs=sin_abs,
        s_intersection=s_count,
        t_perpendicular=t_count,
        principal_angles=angles,
        principal_planes=planes,
        perpendicular_blade=perp_blade,
        lowest_grade=dec.lowest_grade,
        highest_grade=dec.highest_grade,
        residuals=residuals,
    )
