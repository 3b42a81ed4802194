"""
Orthogonal projectors onto ranges of idempotents, and the pseudoinverse of
``T`` recovered from any inner inverse ``B`` (``TBT = T``).

Production code builds projectors with the resolvent identity
``O(S) = -S (I - S - S^*)^{-1}``, which costs one Hermitian solve. The
``S S^+`` route is kept for cross-checking.
"""

from __future__ import annotations

import numpy as np

from .matrix_core import (
    DEFAULT_TOL,
    DimensionError,
    NumericalError,
    PreconditionError,
    adjoint,
    as_matrix,
    condition_number,
    fro,
    pinv_oracle,
)

__all__ = [
    "is_idempotent",
    "idempotency_residual",
    "orthoproj_resolvent",
    "orthoproj_pinv",
    "complement_orthoproj",
    "pinv_via_inner",
]


def _square(S, name="S"):
    S = as_matrix(S, name)
    if S.shape[0] != S.shape[1]:
        raise DimensionError(f"{name} must be square, got {S.shape}")
    return S


def idempotency_residual(S):
    """``||S^2 - S||_F / max(1, ||S||_F^2)``."""
    S = _square(S)
    return fro(S @ S - S) / max(1.0, fro(S) ** 2)


def is_idempotent(S, tol=DEFAULT_TOL):
    # S^2 is quadratic in S, hence the squared norm in the scale
    return idempotency_residual(S) <= tol.eq_rtol


def _require_idempotent(S, tol):
    S = _square(S)
    if not is_idempotent(S, tol):
        raise PreconditionError(
            f"matrix is not idempotent (residual {idempotency_residual(S):.3e})",
            failed=("idempotent",),
        )
    return S


def orthoproj_resolvent(S, tol=DEFAULT_TOL):
    """
    Orthogonal projector onto ``range(S)`` for an idempotent ``S``.

    Computed as ``-S (I - S - S^*)^{-1}``. The middle factor is Hermitian and
    invertible for every exact idempotent; if it is numerically singular the
    idempotency tolerance was too loose for this ``S``.

    Raises
    ------
    PreconditionError
        ``S`` is not idempotent within ``tol.eq_rtol``.
    NumericalError
        ``cond(I - S - S^*) >= tol.cond_max``.
    """
    S = _require_idempotent(S, tol)
    m = S.shape[0]
    K = np.eye(m) - S - adjoint(S)
    cond = condition_number(K)
    if not cond < tol.cond_max:
        raise NumericalError(f"I - S - S* is numerically singular (cond {cond:.3e})")
    # P = -S K^{-1}  <=>  P^* = -K^{-1} S^*  since K is Hermitian
    return -adjoint(np.linalg.solve(K, adjoint(S)))


def orthoproj_pinv(S, tol=DEFAULT_TOL):
    """``S S^+`` for an idempotent ``S``."""
    S = _require_idempotent(S, tol)
    return S @ pinv_oracle(S, tol)


def complement_orthoproj(S, tol=DEFAULT_TOL):
    """``I - S^+ S``, the orthogonal projector onto ``range(I - S) = null(S)``."""
    S = _require_idempotent(S, tol)
    return np.eye(S.shape[0]) - pinv_oracle(S, tol) @ S


def pinv_via_inner(T, B, tol=DEFAULT_TOL):
    """
    Pseudoinverse of ``T`` from an inner inverse ``B``.

    Returns ``(I - O(I - BT)) B O(TB)`` where both ``BT`` and ``TB`` are
    idempotent because ``TBT = T``.
    """
    T = _square(T, "T")
    B = _square(B, "B")
    if T.shape != B.shape:
        raise DimensionError(f"T {T.shape} and B {B.shape} differ in shape")
    if fro(T @ B @ T - T) > tol.eq_rtol * max(1.0, fro(T)):
        raise PreconditionError("B is not an inner inverse of T", failed=("inner_inverse",))
    eye = np.eye(T.shape[0])
    BT = B @ T
    TB = T @ B
    left = eye - orthoproj_resolvent(eye - BT, tol)
    right = orthoproj_resolvent(TB, tol)
    return left @ B @ right
