import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given
from hypothesis import strategies as st

import exact
from example_data import EXAMPLE_APINV, EXAMPLE_XY
from pinvupdate.matrix_core import (
    DEFAULT_TOL,
    NumericalError,
    PreconditionError,
    TolerancePolicy,
    adjoint,
    approx_equal,
    condition_number,
    numerical_rank,
    pinv_oracle,
)
from pinvupdate.generate import random_idempotent, random_inner_inverse, random_rank
from pinvupdate.projector_ops import (
    complement_orthoproj,
    is_idempotent,
    orthoproj_pinv,
    orthoproj_resolvent,
    pinv_via_inner,
)

S_OBLIQUE = np.array([[1.0, 1.0], [0.0, 0.0]])


class TestIsIdempotent:
    def test_projections(self):
        assert is_idempotent(np.diag([1.0, 0.0]))
        assert is_idempotent(S_OBLIQUE)

    def test_example_product(self):
        W1 = exact.matmul(exact.frac(EXAMPLE_APINV), exact.frac(EXAMPLE_XY))
        assert exact.matmul(W1, W1) == W1
        W1f = np.array([[float(v) for v in row] for row in W1])
        assert is_idempotent(W1f)

    def test_rejects(self):
        assert not is_idempotent(2 * np.eye(2))
        with pytest.raises(ValueError):
            is_idempotent(np.ones((2, 3)))


class TestOrthoproj:
    # I - S - S^* = [[-1,-1],[-1,1]], inverse [[-1,-1],[-1,1]]/2, so
    # -S K^{-1} = [[1,0],[0,0]]
    EXPECTED_OBLIQUE = np.array([[1.0, 0.0], [0.0, 0.0]])

    @pytest.mark.parametrize("fn", [orthoproj_resolvent, orthoproj_pinv])
    def test_examples(self, fn):
        npt.assert_allclose(fn(np.diag([1.0, 0.0])), np.diag([1.0, 0.0]), atol=1e-15)
        npt.assert_allclose(fn(S_OBLIQUE), self.EXPECTED_OBLIQUE, atol=1e-15)
        npt.assert_allclose(fn(np.eye(3)), np.eye(3), atol=1e-15)

    def test_left_not_right_absorption(self):
        # P S = S always; S P = S fails for oblique S
        P = orthoproj_resolvent(S_OBLIQUE)
        npt.assert_allclose(P @ S_OBLIQUE, S_OBLIQUE, atol=1e-15)
        assert not np.allclose(S_OBLIQUE @ P, S_OBLIQUE)

    def test_zero(self):
        assert not orthoproj_pinv(np.zeros((3, 3))).any()
        npt.assert_allclose(orthoproj_resolvent(np.zeros((3, 3))), 0, atol=1e-15)

    def test_rejects_non_idempotent(self):
        with pytest.raises(PreconditionError):
            orthoproj_resolvent(2 * np.eye(2))
        with pytest.raises(PreconditionError):
            orthoproj_pinv(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_singular_resolvent_signals_loose_tolerance(self):
        # a non-idempotent matrix let through by a huge eq_rtol
        S = np.diag([0.5, 0.0])
        with pytest.raises(NumericalError):
            orthoproj_resolvent(S, TolerancePolicy(eq_rtol=0.9))


class TestComplement:
    def test_examples(self):
        npt.assert_allclose(complement_orthoproj(np.diag([1.0, 0.0])), np.diag([0.0, 1.0]), atol=1e-15)
        npt.assert_allclose(complement_orthoproj(np.eye(3)), 0, atol=1e-15)

    def test_oblique_null_space(self):
        P = complement_orthoproj(S_OBLIQUE)
        v = np.array([1.0, -1.0])
        npt.assert_allclose(P @ v, v, atol=1e-15)
        npt.assert_allclose(P, [[0.5, -0.5], [-0.5, 0.5]], atol=1e-15)


class TestPinvViaInner:
    def test_identity(self):
        npt.assert_allclose(pinv_via_inner(np.eye(3), np.eye(3)), np.eye(3), atol=1e-15)

    def test_pinv_as_inner_inverse(self):
        T = random_rank(np.random.default_rng(5), 5, 3)
        assert approx_equal(pinv_via_inner(T, pinv_oracle(T)), pinv_oracle(T))

    def test_worked_example(self, example):
        # A^+ is an inner inverse of A - XY* in the worked example
        T = example["A"] - example["xy"]
        npt.assert_allclose(pinv_via_inner(T, example["apinv"]), example["update"], atol=1e-12)

    def test_rejects_non_inner(self):
        T = np.diag([1.0, 0.0])
        with pytest.raises(PreconditionError):
            pinv_via_inner(T, 2 * np.eye(2))


@st.composite
def idempotents(draw):
    m = draw(st.integers(1, 12))
    k = draw(st.integers(0, m))
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    return random_idempotent(rng, m, k, cond_max=1e3)


@given(idempotents())
def test_resolvent_agrees_with_pinv_route(S):
    K = np.eye(S.shape[0]) - S - adjoint(S)
    assert condition_number(K) < DEFAULT_TOL.cond_max
    loose = TolerancePolicy(eq_rtol=1e-9)
    assert approx_equal(orthoproj_resolvent(S), orthoproj_pinv(S), loose)


@given(idempotents())
def test_resolvent_projector_properties(S):
    loose = TolerancePolicy(eq_rtol=1e-9)
    loose_rank = TolerancePolicy(rank_rtol=1e-9)
    P = orthoproj_resolvent(S)
    assert approx_equal(P, adjoint(P), loose)
    assert approx_equal(P @ P, P, loose)
    assert approx_equal(P @ S, S, loose)
    # P carries noise of order cond(I - S - S^*) * eps, above the default cutoff
    assert numerical_rank(P, loose_rank) == numerical_rank(S, loose_rank)


@given(idempotents())
def test_complement_agrees_with_resolvent(S):
    m = S.shape[0]
    loose = TolerancePolicy(eq_rtol=1e-9)
    assert approx_equal(complement_orthoproj(S), orthoproj_resolvent(np.eye(m) - S), loose)


@given(st.integers(1, 12), st.integers(0, 2**32 - 1), st.booleans())
def test_inner_inverse_route(m, seed, randomized):
    rng = np.random.default_rng(seed)
    T = random_rank(rng, m, int(rng.integers(1, m + 1)))
    B = random_inner_inverse(rng, T) if randomized else pinv_oracle(T)
    assert approx_equal(pinv_via_inner(T, B), pinv_oracle(T), TolerancePolicy(eq_rtol=1e-9))
