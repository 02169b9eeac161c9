"""Pair files, seeded generation, and the report document."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .blades import SpanningSet, blade_from_spanning
from .errors import BladeAngleError, GradeMismatch
from .ga_core import MAX_DIM
from .oracle import PrincipalData, principal_angles
from .orientation import TOL_ANGLE, AngleReport, full_orientation


class ParseError(BladeAngleError, ValueError):
    exit_code = 2


@dataclass(frozen=True)
class SubspacePairSpec:
    n: int
    a_span: tuple
    b_span: tuple

    @property
    def r(self) -> int:
        return len(self.a_span)

    def spanning_sets(self) -> tuple[SpanningSet, SpanningSet]:
        return SpanningSet(self.n, self.a_span), SpanningSet(self.n, self.b_span)


def _parse_span(raw, n: int, key: str) -> tuple:
    if not isinstance(raw, list) or not raw:
        raise ParseError(f"{key!r} must be a non-empty list of vectors")
    out = []
    for i, vec in enumerate(raw):
        if not isinstance(vec, list) or len(vec) != n:
            raise ParseError(f"{key}[{i}] must be a list of {n} numbers")
        for x in vec:
            if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
                raise ParseError(f"{key}[{i}] contains a non-finite or non-numeric entry")
        out.append(tuple(float(x) for x in vec))
    return tuple(out)


def spec_from_dict(doc) -> SubspacePairSpec:
    """Validate a decoded ``{"n", "A", "B"}`` document.

    Unequal span lengths are not a parse error; they surface later as a
    grade mismatch.
    """
    if not isinstance(doc, dict):
        raise ParseError("pair document must be a JSON object")
    missing = {"n", "A", "B"} - doc.keys()
    if missing:
        raise ParseError(f"missing keys: {sorted(missing)}")
    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int) or not 1 <= n <= MAX_DIM:
        raise ParseError(f"'n' must be an integer in [1, {MAX_DIM}]")
    a = _parse_span(doc["A"], n, "A")
    b = _parse_span(doc["B"], n, "B")
    if len(a) > n or len(b) > n:
        raise ParseError(f"at most {n} spanning vectors allowed in R^{n}")
    return SubspacePairSpec(n, a, b)


def parse_spec(text: str) -> SubspacePairSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return spec_from_dict(doc)


def load_spec(path) -> SubspacePairSpec:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return parse_spec(text)


def render_spec(spec: SubspacePairSpec) -> str:
    doc = {"n": spec.n, "A": [list(v) for v in spec.a_span], "B": [list(v) for v in spec.b_span]}
    return json.dumps(doc, indent=2) + "\n"


# generation


def _random_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def _recombination(rng: np.random.Generator, r: int) -> np.ndarray:
    # well-conditioned random invertible r x r matrix (condition number <= 4)
    d = rng.uniform(0.5, 2.0, size=r)
    return _random_orthogonal(rng, r) @ np.diag(d) @ _random_orthogonal(rng, r)


def random_pair(rng: np.random.Generator, n: int, r: int) -> SubspacePairSpec:
    a = rng.standard_normal((r, n))
    b = rng.standard_normal((r, n))
    return SubspacePairSpec(n, tuple(map(tuple, a.tolist())), tuple(map(tuple, b.tolist())))


def planted_pair(rng: np.random.Generator, n: int, r: int, angles) -> SubspacePairSpec:
    """Pair whose principal angles are ``angles`` padded with zeros to length ``r``.

    Each nonzero angle rotates one orthonormal factor of A towards its own
    fresh direction orthogonal to A and to every other fresh direction, so
    ``n >= r + count(angles > 0)`` is required.  Both spans are then
    scrambled by random invertible recombinations.
    """
    angles = [float(x) for x in angles]
    if len(angles) > r:
        raise ValueError(f"{len(angles)} planted angles for r = {r}")
    if any(not 0.0 <= x <= math.pi / 2 for x in angles):
        raise ValueError("planted angles must lie in [0, pi/2]")
    angles += [0.0] * (r - len(angles))
    need = r + sum(1 for x in angles if x > 0)
    if need > n:
        raise ValueError(f"planting {need - r} nonzero angles with r = {r} needs n >= {need}")
    Q = _random_orthogonal(rng, n)
    a_rows = Q[:, :r].T
    b_rows = a_rows.copy()
    fresh = r
    for k, th in enumerate(angles):
        if th > 0:
            b_rows[k] = math.cos(th) * a_rows[k] + math.sin(th) * Q[:, fresh]
            fresh += 1
    a_rows = _recombination(rng, r) @ a_rows
    b_rows = _recombination(rng, r) @ b_rows
    return SubspacePairSpec(n, tuple(map(tuple, a_rows.tolist())), tuple(map(tuple, b_rows.tolist())))


def generate(n: int, r: int, count: int, seed: int, planted=None) -> list[SubspacePairSpec]:
    if not 1 <= n <= MAX_DIM:
        raise ValueError(f"n must be in [1, {MAX_DIM}]")
    if not 1 <= r <= n:
        raise ValueError(f"need 1 <= r <= n, got r = {r}, n = {n}")
    if count < 1:
        raise ValueError("count must be positive")
    rng = np.random.default_rng(seed)
    if planted is None:
        return [random_pair(rng, n, r) for _ in range(count)]
    return [planted_pair(rng, n, r, planted) for _ in range(count)]


# report


def _mv_dict(mv, tol: float = 1e-15) -> dict:
    return mv.to_dict(tol=tol * max(1.0, float(np.abs(mv.coeffs).max(initial=0.0))))


def angle_report_dict(rep: AngleReport) -> dict:
    return {
        "cos_total": rep.cos_total,
        "sin_product_abs": rep.sin_product_abs,
        "s_intersection": rep.s_intersection,
        "t_perpendicular": rep.t_perpendicular,
        "principal_angles": [float(x) for x in rep.principal_angles],
        "principal_angles_deg": [math.degrees(x) for x in rep.principal_angles],
        "principal_planes": [_mv_dict(p) for p in rep.principal_planes],
        "perpendicular_blade": None if rep.perpendicular_blade is None else _mv_dict(rep.perpendicular_blade),
        "lowest_grade": rep.lowest_grade,
        "highest_grade": rep.highest_grade,
        "residuals": {k: float(v) for k, v in rep.residuals.items()},
    }


def principal_data_dict(pd: PrincipalData) -> dict:
    return {
        "principal_angles": [float(x) for x in pd.angles[::-1]],
        "cosines": [float(x) for x in pd.cosines],
        "a_vectors": pd.a_vectors.tolist(),
        "b_vectors": pd.b_vectors.tolist(),
    }


def angle_deviation(rep: AngleReport, pd: PrincipalData) -> float:
    return float(np.max(np.abs(np.sort(rep.principal_angles) - np.sort(pd.angles))))


def evaluate(spec: SubspacePairSpec, oracle: bool = False, tol_angle: float = TOL_ANGLE, source=None) -> dict:
    """Run the Clifford path (and optionally the oracle) and build a report document.

    Wall-clock figures live only under ``"timings"``; everything else is
    deterministic for a given input.
    """
    if len(spec.a_span) != len(spec.b_span):
        raise GradeMismatch(f"A spans {len(spec.a_span)} vectors, B spans {len(spec.b_span)}")
    sa, sb = spec.spanning_sets()
    t0 = time.perf_counter()
    rep = full_orientation(blade_from_spanning(sa), blade_from_spanning(sb), tol_angle=tol_angle)
    t1 = time.perf_counter()
    doc = {
        "input": {"n": spec.n, "r": spec.r, "source": None if source is None else str(source)},
        "clifford": angle_report_dict(rep),
    }
    timings = {"clifford_s": t1 - t0}
    if oracle:
        t0 = time.perf_counter()
        pd = principal_angles(sa, sb)
        timings["oracle_s"] = time.perf_counter() - t0
        doc["oracle"] = principal_data_dict(pd)
        doc["agreement"] = {"max_angle_deviation": angle_deviation(rep, pd)}
    doc["timings"] = timings
    return doc


def error_object(exc: BaseException, source=None) -> dict:
    return {
        "error": type(exc).__name__,
        "message": str(exc),
        "exit_code": getattr(exc, "exit_code", 1),
        "source": None if source is None else str(source),
    }
