"""Dense Clifford algebra Cl(n, 0).

A multivector is a length ``2**n`` float64 array indexed by basis-blade
bitmask: bit ``i`` set means ``e_{i+1}`` is a factor, factors in ascending
order.  All products go through one kernel that restricts work to the
nonzero coefficients of both operands, so blades in moderately large ``n``
stay cheap even though storage is dense.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, ZeroBlade

MAX_DIM = 16
# full sign tables are cached up to this dimension (256 x 256 entries)
SIGN_TABLE_MAX_DIM = 8


def grade_of(bits):
    """Popcount of a bitmask (scalar or array)."""
    return np.bitwise_count(np.asarray(bits, dtype=np.int64)).astype(np.int64)


def _reorder_sign(a: np.ndarray, b: np.ndarray, n: int) -> np.ndarray:
    # Parity of the transpositions needed to merge e_a e_b into canonical
    # order; repeated factors contract to +1 in Euclidean signature.
    a = np.asarray(a, dtype=np.int64) >> 1
    b = np.asarray(b, dtype=np.int64)
    swaps = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
    for _ in range(n):
        swaps += np.bitwise_count(a & b)
        a = a >> 1
    return np.where(swaps & 1, -1.0, 1.0)


@lru_cache(maxsize=None)
def _sign_table(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    table = _reorder_sign(idx[:, None], idx[None, :], n)
    table.setflags(write=False)
    return table


def blade_sign(a, b, n: int):
    """Sign of ``e_a e_b`` relative to ``e_{a xor b}``."""
    if n <= SIGN_TABLE_MAX_DIM:
        return _sign_table(n)[a, b]
    return _reorder_sign(a, b, n)


def blade_name(bits: int) -> str:
    if bits == 0:
        return "1"
    return "".join(f"e{i + 1}" for i in range(bits.bit_length()) if bits >> i & 1)


def parse_blade_name(name: str) -> int:
    if name == "1":
        return 0
    parts = name.split("e")
    if parts[0] != "" or len(parts) < 2:
        raise ValueError(f"bad basis blade name {name!r}")
    bits = 0
    for p in parts[1:]:
        i = int(p) - 1
        if i < 0 or bits >> i & 1:
            raise ValueError(f"bad basis blade name {name!r}")
        bits |= 1 << i
    return bits


class Multivector:
    """Immutable element of Cl(n, 0) with dense coefficients."""

    __slots__ = ("n", "coeffs")

    def __init__(self, n: int, coeffs=None):
        if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_DIM:
            raise ValueError(f"algebra dimension must be in [1, {MAX_DIM}], got {n!r}")
        size = 1 << int(n)
        if coeffs is None:
            arr = np.zeros(size)
        else:
            arr = np.array(coeffs, dtype=np.float64)
            if arr.shape != (size,):
                raise DimensionMismatch(f"expected {size} coefficients, got shape {arr.shape}")
            if not np.all(np.isfinite(arr)):
                raise ValueError("multivector coefficients must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # constructors

    @classmethod
    def scalar(cls, n: int, value: float = 1.0) -> "Multivector":
        c = np.zeros(1 << n)
        c[0] = value
        return cls(n, c)

    @classmethod
    def basis(cls, n: int, *indices: int) -> "Multivector":
        """Basis blade ``e_{i1} e_{i2} ...`` from 1-based indices.

        Indices need not be sorted or distinct; the product is evaluated.
        """
        out = cls.scalar(n)
        for i in indices:
            if not 1 <= i <= n:
                raise ValueError(f"basis index {i} outside 1..{n}")
            c = np.zeros(1 << n)
            c[1 << (i - 1)] = 1.0
            out = geometric_product(out, cls(n, c))
        return out

    @classmethod
    def vector(cls, values: Sequence[float]) -> "Multivector":
        v = np.asarray(values, dtype=np.float64)
        n = v.shape[0]
        c = np.zeros(1 << n)
        c[1 << np.arange(n)] = v
        return cls(n, c)

    @classmethod
    def from_dict(cls, n: int, terms: dict) -> "Multivector":
        c = np.zeros(1 << n)
        for name, val in terms.items():
            bits = parse_blade_name(name) if isinstance(name, str) else int(name)
            if bits >= 1 << n:
                raise ValueError(f"blade {name!r} outside Cl({n})")
            c[bits] += val
        return cls(n, c)

    @classmethod
    def pseudoscalar(cls, n: int) -> "Multivector":
        c = np.zeros(1 << n)
        c[-1] = 1.0
        return cls(n, c)

    # views

    def as_vector(self) -> np.ndarray:
        """Grade-1 coefficients as an ``n``-array (other grades ignored)."""
        return self.coeffs[1 << np.arange(self.n)].copy()

    def to_dict(self, tol: float = 0.0) -> dict:
        idx = np.flatnonzero(np.abs(self.coeffs) > tol)
        return {blade_name(int(i)): float(self.coeffs[i]) for i in idx}

    def grades(self, tol: float = 0.0) -> list[int]:
        idx = np.flatnonzero(np.abs(self.coeffs) > tol)
        return sorted(set(grade_of(idx).tolist()))

    def grade_norms(self) -> np.ndarray:
        g = grade_of(np.arange(1 << self.n))
        return np.sqrt(np.bincount(g, weights=self.coeffs**2, minlength=self.n + 1))

    def scalar_part(self) -> float:
        return float(self.coeffs[0])

    # arithmetic

    def _check(self, other: "Multivector") -> None:
        if not isinstance(other, Multivector):
            raise TypeError(f"expected Multivector, got {type(other).__name__}")
        if other.n != self.n:
            raise DimensionMismatch(f"Cl({self.n}) vs Cl({other.n})")

    def __add__(self, other):
        if isinstance(other, (int, float, np.floating)):
            other = Multivector.scalar(self.n, float(other))
        self._check(other)
        return Multivector(self.n, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Multivector(self.n, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Multivector(self.n, self.coeffs * float(other))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Multivector(self.n, self.coeffs * float(other))
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return Multivector(self.n, self.coeffs / float(other))
        return NotImplemented

    def __xor__(self, other):
        return outer_product(self, other)

    def __invert__(self):
        return reverse(self)

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.n, self.coeffs.tobytes()))

    def allclose(self, other: "Multivector", rtol: float = 1e-12, atol: float = 1e-12) -> bool:
        self._check(other)
        return bool(np.allclose(self.coeffs, other.coeffs, rtol=rtol, atol=atol))

    def __repr__(self):
        terms = self.to_dict(tol=0.0)
        if not terms:
            return f"Multivector(n={self.n}, 0)"
        body = " + ".join(f"{v:.6g}*{k}" if k != "1" else f"{v:.6g}" for k, v in terms.items())
        return f"Multivector(n={self.n}, {body})"


def _bilinear(M: Multivector, N: Multivector, kind: str) -> Multivector:
    M._check(N)
    n = M.n
    ia = np.flatnonzero(M.coeffs)
    ib = np.flatnonzero(N.coeffs)
    out = np.zeros(1 << n)
    if ia.size == 0 or ib.size == 0:
        return Multivector(n, out)
    a = ia[:, None]
    b = ib[None, :]
    if kind == "gp":
        keep = np.ones((ia.size, ib.size), dtype=bool)
    elif kind == "outer":
        keep = (a & b) == 0
    elif kind == "lc":
        keep = (a & ~b) == 0
    else:
        raise ValueError(kind)
    a, b = np.broadcast_arrays(a, b)
    a, b = a[keep], b[keep]
    if a.size == 0:
        return Multivector(n, out)
    vals = blade_sign(a, b, n) * M.coeffs[a] * N.coeffs[b]
    out = np.bincount(a ^ b, weights=vals, minlength=1 << n)
    return Multivector(n, out)


def geometric_product(M: Multivector, N: Multivector) -> Multivector:
    return _bilinear(M, N, "gp")


def outer_product(M: Multivector, N: Multivector) -> Multivector:
    return _bilinear(M, N, "outer")


def left_contraction(A: Multivector, B: Multivector) -> Multivector:
    """``A ⌋ B``: per grade pair, the ``(s - r)`` part of ``A_r B_s`` (zero if r > s)."""
    return _bilinear(A, B, "lc")


def outer_fold(vectors: Iterable[Multivector]) -> Multivector:
    vectors = list(vectors)
    if not vectors:
        raise ValueError("need at least one vector")
    out = vectors[0]
    for v in vectors[1:]:
        out = outer_product(out, v)
    return out


def grade_projection(M: Multivector, k: int) -> Multivector:
    if not 0 <= k <= M.n:
        raise ValueError(f"grade {k} outside 0..{M.n}")
    mask = grade_of(np.arange(1 << M.n)) == k
    return Multivector(M.n, np.where(mask, M.coeffs, 0.0))


def _reverse_signs(n: int) -> np.ndarray:
    g = grade_of(np.arange(1 << n))
    return np.where((g * (g - 1) // 2) % 2, -1.0, 1.0)


def reverse(M: Multivector) -> Multivector:
    return Multivector(M.n, M.coeffs * _reverse_signs(M.n))


def scalar_product(M: Multivector, N: Multivector) -> float:
    """``<M N>_0`` of the raw arguments (pass ``reverse(N)`` for ``M * N~``)."""
    M._check(N)
    return float(np.dot(M.coeffs * N.coeffs, _reverse_signs(M.n)))


def modulus(M: Multivector) -> float:
    return float(np.linalg.norm(M.coeffs))


def versor_inverse(M: Multivector, tol: float = 1e-12) -> Multivector:
    """Inverse of a versor (blade or product of vectors): ``M~ / (M M~)``.

    Raises ZeroBlade if ``M M~`` vanishes and ValueError if it is not a
    scalar, i.e. ``M`` is not a versor.
    """
    rev = reverse(M)
    norm_sq = geometric_product(M, rev)
    scale = norm_sq.coeffs[0]
    if abs(scale) <= tol * max(modulus(M) ** 2, np.finfo(float).tiny):
        raise ZeroBlade("element is not invertible")
    leak = modulus(norm_sq - Multivector.scalar(M.n, scale))
    if leak > 1e-9 * abs(scale):
        raise ValueError("element is not a versor; M M~ is not scalar")
    return rev / scale


def dual(M: Multivector) -> Multivector:
    """``M i_n^{-1}`` with ``i_n = e1 e2 ... en``.

    ``i_n^{-1} = reverse(i_n)`` since the pseudoscalar is a unit blade, so
    ``dual(dual(M)) = (-1)**(n(n-1)/2) M``.  In Cl(3): ``dual(e1e2) = e3``
    and ``dual(1) = -e1e2e3``.
    """
    return geometric_product(M, reverse(Multivector.pseudoscalar(M.n)))


def double_dual_sign(n: int) -> int:
    return -1 if (n * (n - 1) // 2) % 2 else 1


def reflect(x: Multivector, a: Multivector) -> Multivector:
    """Reflect vector ``x`` in the hyperplane with normal ``a``: ``-a^{-1} x a``."""
    x._check(a)
    a_sq = float(np.dot(a.coeffs, a.coeffs))
    if a_sq == 0.0 or modulus(grade_projection(a, 1)) == 0.0:
        raise ZeroBlade("reflection normal must be a nonzero vector")
    x1 = grade_projection(x, 1)
    if modulus(x - x1) > 1e-12 * modulus(x):
        raise ValueError("reflect expects a pure vector x")
    a_inv = a / a_sq
    # the sandwich of vectors is a vector; drop round-off in grade 3
    return grade_projection(-geometric_product(geometric_product(a_inv, x1), a), 1)


def rotor_apply(R: Multivector, x: Multivector) -> Multivector:
    """Sandwich ``R^{-1} x R``."""
    R._check(x)
    return geometric_product(geometric_product(versor_inverse(R), x), R)


def e(n: int, *indices: int) -> Multivector:
    """Shorthand for :meth:`Multivector.basis`."""
    return Multivector.basis(n, *indices)
