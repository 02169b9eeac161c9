import math

import numpy as np
import pytest

from bladeangle.blades import SpanningSet
from bladeangle.errors import DimensionMismatch, NumericalFailure, RankDeficient
from bladeangle.oracle import orthonormalize, principal_angles, svd_small


def test_orthonormalize_examples(rng):
    np.testing.assert_array_equal(orthonormalize(np.eye(3)), np.eye(3))
    Q = orthonormalize(np.array([[1.0, 1.0], [0.0, 1.0]]))
    np.testing.assert_allclose(Q, np.eye(2), atol=1e-15)
    M = rng.standard_normal((6, 3))
    Q = orthonormalize(M)
    np.testing.assert_allclose(Q.T @ Q, np.eye(3), atol=1e-12)
    # same column span: projecting M onto span(Q) leaves it unchanged
    np.testing.assert_allclose(Q @ (Q.T @ M), M, atol=1e-12)


def test_orthonormalize_rank_deficient():
    with pytest.raises(RankDeficient):
        orthonormalize(np.array([[1.0, 2.0], [1.0, 2.0], [0.0, 0.0]]))


def test_svd_examples(rng):
    U, s, V = svd_small(np.eye(3))
    np.testing.assert_allclose(s, 1.0)
    U, s, V = svd_small(np.diag([0.5, 0.2]))
    np.testing.assert_allclose(s, [0.5, 0.2])
    U, s, V = svd_small(np.diag([0.2, 0.5]))
    np.testing.assert_allclose(s, [0.5, 0.2])


@pytest.mark.parametrize("r", [1, 2, 3, 5, 8, 16])
def test_svd_reconstruction(r, rng):
    for _ in range(5):
        C = rng.standard_normal((r, r))
        U, s, V = svd_small(C)
        assert np.max(np.abs(U @ np.diag(s) @ V.T - C)) < 1e-10
        np.testing.assert_allclose(U.T @ U, np.eye(r), atol=1e-10)
        np.testing.assert_allclose(V.T @ V, np.eye(r), atol=1e-10)
        assert np.all(np.diff(s) <= 0) and np.all(s >= 0)
        # independent reference
        np.testing.assert_allclose(s, np.linalg.svd(C, compute_uv=False), rtol=1e-10, atol=1e-13)


def test_svd_singular_matrix_completes_u():
    C = np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 2.0]])
    U, s, V = svd_small(C)
    np.testing.assert_allclose(s, [2.0, 1.0, 0.0])
    np.testing.assert_allclose(U.T @ U, np.eye(3), atol=1e-14)
    np.testing.assert_allclose(U @ np.diag(s) @ V.T, C, atol=1e-14)


def test_svd_iteration_cap():
    with pytest.raises(NumericalFailure):
        svd_small(np.random.default_rng(0).standard_normal((6, 6)), max_sweeps=1)


def _span(n, *vecs):
    return SpanningSet(n, vecs)


def test_principal_angle_examples():
    pd = principal_angles(_span(3, [1, 0, 0], [0, 1, 0]), _span(3, [1, 0, 0], [0, 1, 0]))
    np.testing.assert_allclose(pd.angles, [0, 0], atol=1e-8)
    pd = principal_angles(_span(4, [1, 0, 0, 0], [0, 1, 0, 0]), _span(4, [0, 0, 1, 0], [0, 0, 0, 1]))
    np.testing.assert_allclose(pd.angles, [math.pi / 2] * 2, atol=1e-15)
    th = math.pi / 3
    pd = principal_angles(
        _span(3, [1, 0, 0], [0, 1, 0]), _span(3, [1, 0, 0], [0, math.cos(th), math.sin(th)])
    )
    np.testing.assert_allclose(pd.angles, [0, th], atol=1e-8)
    np.testing.assert_allclose(pd.cosines, [1.0, 0.5], atol=1e-15)


def test_principal_angle_errors():
    with pytest.raises(DimensionMismatch):
        principal_angles(_span(3, [1, 0, 0]), _span(3, [1, 0, 0], [0, 1, 0]))
    with pytest.raises(DimensionMismatch):
        principal_angles(_span(3, [1, 0, 0]), _span(2, [1, 0]))
    with pytest.raises(RankDeficient):
        principal_angles(_span(3, [1, 0, 0], [2, 0, 0]), _span(3, [1, 0, 0], [0, 1, 0]))


@pytest.mark.parametrize("n,r", [(4, 2), (6, 3), (8, 4), (7, 2)])
def test_principal_data_structure(n, r, rng):
    for _ in range(20):
        A = SpanningSet(n, rng.standard_normal((r, n)))
        B = SpanningSet(n, rng.standard_normal((r, n)))
        pd = principal_angles(A, B)
        a, b = pd.a_vectors, pd.b_vectors
        np.testing.assert_allclose(a @ a.T, np.eye(r), atol=1e-12)
        np.testing.assert_allclose(b @ b.T, np.eye(r), atol=1e-12)
        np.testing.assert_allclose(np.sum(a * b, axis=1), pd.cosines, atol=1e-10)
        # cross terms vanish: a_k . b_l = 0 for k != l
        cross = a @ b.T - np.diag(np.diag(a @ b.T))
        assert np.max(np.abs(cross)) < 1e-10
        assert np.all(np.diff(pd.cosines) <= 0)
        assert np.all((pd.cosines >= 0) & (pd.cosines <= 1))
        # principal planes mutually orthogonal
        for k in range(r):
            for l in range(k + 1, r):
                Pk = np.vstack([a[k], b[k]])
                Pl = np.vstack([a[l], b[l]])
                assert np.max(np.abs(Pk @ Pl.T)) < 1e-10
        # independent check against LAPACK via numpy
        Qa, _ = np.linalg.qr(np.array(A.vectors).T)
        Qb, _ = np.linalg.qr(np.array(B.vectors).T)
        ref = np.linalg.svd(Qa.T @ Qb, compute_uv=False)
        np.testing.assert_allclose(pd.cosines, np.clip(ref, 0, 1), atol=1e-12)


def test_basis_change_invariance(rng):
    n, r = 6, 3
    for _ in range(20):
        a = rng.standard_normal((r, n))
        b = rng.standard_normal((r, n))
        base = principal_angles(SpanningSet(n, a), SpanningSet(n, b))
        Ma = rng.standard_normal((r, r)) + 2 * np.eye(r)
        Mb = rng.standard_normal((r, r)) + 2 * np.eye(r)
        moved = principal_angles(SpanningSet(n, Ma @ a), SpanningSet(n, Mb @ b))
        np.testing.assert_allclose(moved.cosines, base.cosines, atol=1e-9)
