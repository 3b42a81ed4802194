import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given
from hypothesis import strategies as st

import exact
from example_data import EXAMPLE_A, EXAMPLE_XY
from pinvupdate.matrix_core import (
    DEFAULT_TOL,
    DecompositionError,
    DimensionError,
    TolerancePolicy,
    adjoint,
    approx_equal,
    as_matrix,
    numerical_rank,
    penrose_residuals,
    pinv_oracle,
)
from pinvupdate.generate import random_rank


def rank_deficient(seed, m, n, r):
    rng = np.random.default_rng(seed)
    U, _ = np.linalg.qr(rng.standard_normal((m, r)) + 1j * rng.standard_normal((m, r)))
    V, _ = np.linalg.qr(rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r)))
    return (U * rng.uniform(1, 3, r)) @ adjoint(V)


@st.composite
def matrices(draw, max_dim=12):
    m = draw(st.integers(1, max_dim))
    n = draw(st.integers(1, max_dim))
    r = draw(st.integers(0, min(m, n)))
    seed = draw(st.integers(0, 2**32 - 1))
    if r == 0:
        return np.zeros((m, n), dtype=complex)
    return rank_deficient(seed, m, n, r)


class TestTolerancePolicy:
    def test_defaults(self):
        tol = TolerancePolicy()
        assert tol.eq_rtol == 1e-10
        assert tol.cond_max == 1e12
        assert tol.rank_cutoff((3, 7)) == 7 * np.finfo(float).eps

    @pytest.mark.parametrize("kw", [
        {"rank_rtol": 1.0}, {"rank_rtol": -1e-3}, {"eq_rtol": 1.5}, {"cond_max": 1.0},
    ])
    def test_rejects_out_of_range(self, kw):
        with pytest.raises(ValueError):
            TolerancePolicy(**kw)

    def test_explicit_cutoff(self):
        assert TolerancePolicy(rank_rtol=1e-6).rank_cutoff((100, 100)) == 1e-6


def test_as_matrix_rejects_nonfinite():
    with pytest.raises(ValueError):
        as_matrix([[1.0, np.nan]])
    with pytest.raises(DimensionError):
        as_matrix([1.0, 2.0])


class TestAdjoint:
    def test_scalar(self):
        npt.assert_array_equal(adjoint(np.array([[2 + 3j]])), [[2 - 3j]])

    def test_real_symmetric(self):
        M = np.array([[1.0, 2.0], [2.0, 5.0]])
        npt.assert_array_equal(adjoint(M), M)

    def test_example_matrix_is_transposed(self):
        A = np.array(EXAMPLE_A, dtype=complex)
        npt.assert_array_equal(adjoint(A), A.T)
        assert adjoint(np.ones((2, 5))).shape == (5, 2)


class TestPinvOracle:
    def test_identity(self):
        npt.assert_allclose(pinv_oracle(np.eye(4)), np.eye(4), atol=1e-15)

    def test_example_matrix(self, example):
        npt.assert_allclose(pinv_oracle(example["A"]), example["apinv"], atol=1e-14)

    def test_zero_matrix_gives_transposed_zero(self):
        B = pinv_oracle(np.zeros((2, 5)))
        assert B.shape == (5, 2)
        assert not B.any()

    def test_rank_deficient_is_certified_by_penrose(self):
        M = rank_deficient(3, 6, 4, 3)
        B = pinv_oracle(M)
        assert B.shape == (4, 6)
        assert max(penrose_residuals(M, B)) <= DEFAULT_TOL.eq_rtol

    def test_matches_numpy(self):
        M = rank_deficient(11, 7, 5, 2)
        npt.assert_allclose(pinv_oracle(M), np.linalg.pinv(M), atol=1e-12)

    def test_svd_failure_is_distinct(self, monkeypatch):
        def boom(*a, **k):
            raise np.linalg.LinAlgError("SVD did not converge")
        monkeypatch.setattr(np.linalg, "svd", boom)
        with pytest.raises(DecompositionError):
            pinv_oracle(np.eye(2))


class TestNumericalRank:
    def test_zero(self):
        assert numerical_rank(np.zeros((3, 3))) == 0

    def test_example_matrix(self):
        # rows 2 and 3 coincide: exact determinant is 0 and the exact rank 3
        assert exact.det(exact.frac(EXAMPLE_A)) == 0
        assert exact.rank(EXAMPLE_A) == 3
        assert numerical_rank(np.array(EXAMPLE_A, dtype=complex)) == 3

    def test_example_xy(self):
        assert exact.rank(EXAMPLE_XY) == 1
        assert numerical_rank(np.array(EXAMPLE_XY, dtype=complex)) == 1

    @pytest.mark.parametrize("m,r", [(5, 1), (8, 4), (12, 12)])
    def test_constructed(self, m, r):
        assert numerical_rank(random_rank(np.random.default_rng(m), m, r)) == r


class TestPenroseResiduals:
    def test_identity(self):
        assert penrose_residuals(np.eye(3), np.eye(3)) == (0.0, 0.0, 0.0, 0.0)

    def test_example_pair(self, example):
        assert max(penrose_residuals(example["A"], example["apinv"])) <= 1e-12

    def test_zero_candidate(self):
        A = np.array([[1.0, 2.0], [0.0, 1.0]])
        assert penrose_residuals(A, np.zeros((2, 2)))[0] == 1.0

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            penrose_residuals(np.ones((2, 3)), np.ones((2, 3)))


class TestApproxEqual:
    def test_reflexive_and_zero(self):
        M = rank_deficient(0, 3, 3, 2)
        assert approx_equal(M, M)
        assert approx_equal(np.zeros((2, 2)), np.zeros((2, 2)))

    def test_example_pinv(self, example):
        assert approx_equal(example["apinv"], pinv_oracle(example["A"]), TolerancePolicy(eq_rtol=1e-10))

    def test_detects_difference(self):
        assert not approx_equal(np.eye(2), np.eye(2) * (1 + 1e-6))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            approx_equal(np.eye(2), np.eye(3))


@given(matrices())
def test_oracle_satisfies_penrose(M):
    assert max(penrose_residuals(M, pinv_oracle(M))) <= DEFAULT_TOL.eq_rtol


@given(matrices())
def test_pinv_involution(M):
    assert approx_equal(pinv_oracle(pinv_oracle(M)), M)


@given(matrices())
def test_pinv_commutes_with_adjoint(M):
    assert approx_equal(pinv_oracle(adjoint(M)), adjoint(pinv_oracle(M)))


@given(matrices())
def test_range_projectors_are_hermitian_idempotents(M):
    B = pinv_oracle(M)
    for P in (M @ B, B @ M):
        assert approx_equal(P, adjoint(P))
        assert approx_equal(P @ P, P)


@given(matrices())
def test_rank_invariant_under_adjoint(M):
    assert numerical_rank(M) == numerical_rank(adjoint(M))
