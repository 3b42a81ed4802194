"""
Pseudoinverse of a low-rank perturbation ``A - X Y^*``.

Three closed forms are available, each valid under its own hypotheses on
``(A, X, Y)``; all of them assume ``range(X) <= range(A)`` and
``range(Y) <= range(A^*)``:

``smw``
    ``A^+ + A^+ X (I - Y^* A^+ X)^{-1} Y^* A^+`` when the ``n x n`` core
    ``I - Y^* A^+ X`` is invertible.
``special``
    ``(I - (A^+X)(A^+X)^+) A^+ (I - (Y^*A^+)^+ (Y^*A^+))`` when
    ``X Y^* A^+ X = X`` and ``Y^* A^+ X Y^* = Y^*``.
``general``
    ``(I - W1 W1^+) A^+ (I - W2^+ W2)`` with ``W1 = A^+ X Y^*`` and
    ``W2 = X Y^* A^+``, when ``X Y^* A^+ X Y^* = X Y^*``.

:func:`update` checks the hypotheses once and dispatches in that order,
falling back to the SVD oracle when none applies.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .matrix_core import (
    DEFAULT_TOL,
    EPS,
    DimensionError,
    NumericalError,
    PreconditionError,
    adjoint,
    approx_equal,
    as_matrix,
    numerical_rank,
    penrose_residuals,
    pinv_oracle,
    rel_deviation,
    rel_residual,
    singular_values,
)

__all__ = [
    "Formula",
    "ConditionReport",
    "UpdateResult",
    "check_conditions",
    "check_rank_conditions",
    "apinv_inner_residual",
    "perturbed_oracle",
    "smw_pinv",
    "update_pinv_general",
    "update_pinv_special",
    "verify_converse_general",
    "verify_converse_special",
    "update",
]

log = logging.getLogger(__name__)

# a formula result is rejected when any Penrose residual exceeds this many eq_rtol
PENROSE_ESCALATION = 10.0
# safety margin on the rounding floor of A - X Y^*
NOISE_FACTOR = 10.0


class Formula(str, enum.Enum):
    SMW = "smw"
    SPECIAL = "special"
    GENERAL = "general"
    ORACLE_FALLBACK = "oracle_fallback"


@dataclass(frozen=True)
class ConditionReport:
    """Which hypotheses hold for ``(A, X, Y)``, with the residual behind each flag.

    All residuals are relative Frobenius norms with a ``max(1, .)`` floor on
    the reference; a flag is true iff its residual is at most ``eq_rtol``.
    ``smw_core_cond`` is ``(1 + ||C||_2) / sigma_min(I - C)`` with
    ``C = Y^* A^+ X``; it is at least the 2-norm condition number of the core
    and stays large when ``I - C`` is only rounding noise.
    """

    range_X_ok: bool
    range_X_residual: float
    range_Y_ok: bool
    range_Y_residual: float
    smw_core_invertible: bool
    smw_core_cond: float
    inner_regular: bool
    inner_residual: float
    special_pair: bool
    special_residuals: tuple[float, float]

    @property
    def ranges_ok(self):
        return self.range_X_ok and self.range_Y_ok

    def to_dict(self):
        return {
            "range_X_ok": self.range_X_ok,
            "range_X_residual": self.range_X_residual,
            "range_Y_ok": self.range_Y_ok,
            "range_Y_residual": self.range_Y_residual,
            "smw_core_invertible": self.smw_core_invertible,
            "smw_core_cond": self.smw_core_cond,
            "inner_regular": self.inner_regular,
            "inner_residual": self.inner_residual,
            "special_pair": self.special_pair,
            "special_residuals": list(self.special_residuals),
        }

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        d["special_residuals"] = tuple(d["special_residuals"])
        return cls(**d)


@dataclass
class UpdateResult:
    formula_used: Formula
    pseudoinverse: np.ndarray
    penrose: tuple[float, float, float, float]
    report: ConditionReport
    oracle_deviation: float | None = None
    warnings: list[str] = field(default_factory=list)
    intermediates: dict[str, np.ndarray] = field(default_factory=dict)


def _operands(A, X, Y):
    A = as_matrix(A, "A")
    X = as_matrix(X, "X")
    Y = as_matrix(Y, "Y")
    m = A.shape[0]
    if A.shape != (m, m):
        raise DimensionError(f"A must be square, got {A.shape}")
    if X.shape[0] != m or Y.shape != X.shape:
        raise DimensionError(
            f"X {X.shape} and Y {Y.shape} must both be {m} x n for A {A.shape}"
        )
    return A, X, Y


def _core_cond(C):
    # sigma_min of I - C against the size of its terms, so that a core that
    # cancels to rounding noise reads as singular
    n = C.shape[0]
    if n == 0:
        return 1.0
    s = singular_values(np.eye(n) - C)
    if s[-1] == 0.0:
        return float("inf")
    return float((1.0 + singular_values(C)[0]) / s[-1])


def _check(A, X, Y, apinv, tol):
    n = X.shape[1]
    Ys = adjoint(Y)
    W = X @ Ys
    rx = rel_residual(A @ (apinv @ X) - X, X)
    ry = rel_residual((Ys @ apinv) @ A - Ys, Ys)
    core_cond = _core_cond(Ys @ apinv @ X)
    ri = rel_residual(W @ apinv @ W - W, W)
    s1 = rel_residual(W @ apinv @ X - X, X)
    s2 = rel_residual(Ys @ apinv @ W - Ys, Ys)
    eq = tol.eq_rtol
    return ConditionReport(
        range_X_ok=rx <= eq,
        range_X_residual=rx,
        range_Y_ok=ry <= eq,
        range_Y_residual=ry,
        smw_core_invertible=core_cond < tol.cond_max,
        smw_core_cond=core_cond,
        inner_regular=ri <= eq,
        inner_residual=ri,
        special_pair=s1 <= eq and s2 <= eq,
        special_residuals=(s1, s2),
    )


def check_conditions(A, X, Y, tol=DEFAULT_TOL, apinv=None):
    """
    Evaluate every hypothesis used by the update formulas.

    Parameters
    ----------
    A : array_like, shape (m, m)
    X, Y : array_like, shape (m, n)
    tol : TolerancePolicy
    apinv : ndarray, optional
        Precomputed ``pinv_oracle(A, tol)``; computed here when omitted.

    Returns
    -------
    ConditionReport
    """
    A, X, Y = _operands(A, X, Y)
    if apinv is None:
        apinv = pinv_oracle(A, tol)
    return _check(A, X, Y, apinv, tol)


def check_rank_conditions(A, X, Y, tol=DEFAULT_TOL):
    """``(rank [A | X] == rank A, rank [A ; Y^*] == rank A)``.

    Equivalent to the two range inclusions; kept as an independent check.
    """
    A, X, Y = _operands(A, X, Y)
    rank_a = numerical_rank(A, tol)
    return (
        numerical_rank(np.hstack([A, X]), tol) == rank_a,
        numerical_rank(np.vstack([A, adjoint(Y)]), tol) == rank_a,
    )


def apinv_inner_residual(A, X, Y, tol=DEFAULT_TOL, apinv=None):
    """How far ``A^+`` is from being an inner inverse of ``A - X Y^*``."""
    A, X, Y = _operands(A, X, Y)
    if apinv is None:
        apinv = pinv_oracle(A, tol)
    T = A - X @ adjoint(Y)
    return rel_residual(T @ apinv @ T - T, T)


def perturbed_oracle(A, X, Y, tol=DEFAULT_TOL):
    """
    SVD pseudoinverse of ``A - X Y^*``, independent of the update formulas.

    Forming the difference (and, typically, the factors themselves) leaves
    rounding noise of size about ``m * eps * (||A||_2 + ||X||_2 ||Y||_2)`` in
    directions where the exact difference vanishes. With the default cutoff
    (``tol.rank_rtol is None``) singular values under that floor are dropped
    as well; an explicit ``rank_rtol`` is used as given.
    """
    A, X, Y = _operands(A, X, Y)
    return _floored_pinv(A - X @ adjoint(Y), _norm2(A) + _norm2(X) * _norm2(Y), tol)


def _norm2(M):
    return singular_values(M)[0] if M.size else 0.0


def _floored_pinv(M, scale, tol):
    """
    ``pinv_oracle(M)`` with singular values below the rounding floor
    ``NOISE_FACTOR * rows * eps * scale`` dropped, ``scale`` bounding the norms
    of the terms ``M`` was formed from. An explicit ``rank_rtol`` wins.
    """
    if tol.rank_rtol is not None or M.size == 0:
        return pinv_oracle(M, tol)
    smax = _norm2(M)
    if smax == 0.0:
        return pinv_oracle(M, tol)
    cutoff = max(tol.rank_cutoff(M.shape), NOISE_FACTOR * M.shape[0] * EPS * scale / smax)
    if cutoff >= 1.0:
        # the whole matrix is rounding noise
        return np.zeros_like(adjoint(M))
    return pinv_oracle(M, replace(tol, rank_rtol=cutoff))


_REQUIRES = {
    Formula.SMW: ("range_X_ok", "range_Y_ok", "smw_core_invertible"),
    Formula.SPECIAL: ("range_X_ok", "range_Y_ok", "special_pair"),
    Formula.GENERAL: ("range_X_ok", "range_Y_ok", "inner_regular"),
}


def _require(report, formula):
    failed = [name for name in _REQUIRES[formula] if not getattr(report, name)]
    if failed:
        raise PreconditionError(
            f"{formula.value} formula not applicable: {', '.join(failed)} false",
            failed=failed,
        )


def _smw(X, Y, apinv):
    n = X.shape[1]
    Ys = adjoint(Y)
    if n == 0:
        return apinv.copy()
    core = np.eye(n) - Ys @ apinv @ X
    return apinv + (apinv @ X) @ np.linalg.solve(core, Ys @ apinv)


def _general(X, Y, apinv, tol, keep=None):
    m = apinv.shape[0]
    W = X @ adjoint(Y)
    W1 = apinv @ W
    W2 = W @ apinv
    # X Y^* A^+ may cancel: rank noise scales with the factors, not with W
    scale = _norm2(apinv) * _norm2(X) * _norm2(Y)
    W1p = _floored_pinv(W1, scale, tol)
    W2p = _floored_pinv(W2, scale, tol)
    if keep is not None:
        keep.update(xy=W, w1_pinv=W1p, w2_pinv=W2p)
    eye = np.eye(m)
    return (eye - W1 @ W1p) @ apinv @ (eye - W2p @ W2)


def _special(X, Y, apinv, tol, keep=None):
    m = apinv.shape[0]
    L = apinv @ X
    R = adjoint(Y) @ apinv
    Lp = _floored_pinv(L, _norm2(apinv) * _norm2(X), tol)
    Rp = _floored_pinv(R, _norm2(apinv) * _norm2(Y), tol)
    if keep is not None:
        keep.update(apinv_x_pinv=Lp, ys_apinv_pinv=Rp)
    eye = np.eye(m)
    return (eye - L @ Lp) @ apinv @ (eye - Rp @ R)


def _prepare(A, X, Y, tol, apinv):
    A, X, Y = _operands(A, X, Y)
    if apinv is None:
        apinv = pinv_oracle(A, tol)
    return A, X, Y, apinv, _check(A, X, Y, apinv, tol)


def smw_pinv(A, X, Y, tol=DEFAULT_TOL, apinv=None):
    """Generalized Sherman-Morrison-Woodbury pseudoinverse of ``A - X Y^*``.

    Raises
    ------
    PreconditionError
        A range inclusion fails or ``I - Y^* A^+ X`` is numerically singular.
    """
    A, X, Y, apinv, report = _prepare(A, X, Y, tol, apinv)
    _require(report, Formula.SMW)
    return _smw(X, Y, apinv)


def update_pinv_general(A, X, Y, tol=DEFAULT_TOL, apinv=None):
    """``(I - W1 W1^+) A^+ (I - W2^+ W2)``; needs ``X Y^* A^+ X Y^* = X Y^*``."""
    A, X, Y, apinv, report = _prepare(A, X, Y, tol, apinv)
    _require(report, Formula.GENERAL)
    return _general(X, Y, apinv, tol)


def update_pinv_special(A, X, Y, tol=DEFAULT_TOL, apinv=None):
    """``(I - (A^+X)(A^+X)^+) A^+ (I - (Y^*A^+)^+ Y^*A^+)``.

    Needs ``X Y^* A^+ X = X`` and ``Y^* A^+ X Y^* = Y^*``.
    """
    A, X, Y, apinv, report = _prepare(A, X, Y, tol, apinv)
    _require(report, Formula.SPECIAL)
    return _special(X, Y, apinv, tol)


def _converse(A, X, Y, tol, formula_fn, flag):
    A, X, Y, apinv, report = _prepare(A, X, Y, tol, None)
    missing = [name for name in ("range_X_ok", "range_Y_ok") if not getattr(report, name)]
    if missing:
        raise PreconditionError("range inclusion fails", failed=missing)
    candidate = formula_fn(X, Y, apinv, tol)
    truth = perturbed_oracle(A, X, Y, tol)
    return (approx_equal(candidate, truth, tol), bool(getattr(report, flag)))


def verify_converse_general(A, X, Y, tol=DEFAULT_TOL):
    """
    Return ``(formula_matches_oracle, inner_regular)``.

    With both range inclusions in place the two booleans should coincide: the
    general formula reproduces ``(A - XY^*)^+`` exactly when
    ``X Y^* A^+ X Y^* = X Y^*``.
    """
    return _converse(A, X, Y, tol, _general, "inner_regular")


def verify_converse_special(A, X, Y, tol=DEFAULT_TOL):
    """Return ``(special_formula_matches_oracle, special_pair)``."""
    return _converse(A, X, Y, tol, _special, "special_pair")


def _dispatch_order(report):
    if not report.ranges_ok:
        return None
    if report.smw_core_invertible:
        return Formula.SMW
    if report.special_pair:
        return Formula.SPECIAL
    if report.inner_regular:
        return Formula.GENERAL
    return None


def update(A, X, Y, tol=DEFAULT_TOL, verify=False, formula=None, intermediates=False):
    """
    Pseudoinverse of ``A - X Y^*`` through the cheapest applicable formula.

    Parameters
    ----------
    A : array_like, shape (m, m)
    X, Y : array_like, shape (m, n)
    tol : TolerancePolicy
    verify : bool
        Also compute the SVD oracle of ``A - X Y^*`` and record the relative
        deviation from it.
    formula : {"smw", "special", "general"}, optional
        Skip dispatch and use this formula. Its hypotheses must hold, and an
        inaccurate result raises instead of falling back.
    intermediates : bool
        Keep ``A^+`` and the products formed inside the chosen formula.

    Returns
    -------
    UpdateResult

    Raises
    ------
    PreconditionError
        ``formula`` was given and its hypotheses fail.
    NumericalError
        ``formula`` was given and the result fails the Penrose check.
    """
    A, X, Y = _operands(A, X, Y)
    apinv = pinv_oracle(A, tol)
    report = _check(A, X, Y, apinv, tol)
    T = A - X @ adjoint(Y)
    warnings = []
    keep = {"apinv": apinv, "xy": X @ adjoint(Y)} if intermediates else None

    if formula is not None:
        chosen = Formula(formula)
        if chosen is Formula.ORACLE_FALLBACK:
            raise ValueError("the oracle is not a formula path")
        _require(report, chosen)
    else:
        chosen = _dispatch_order(report)
        if chosen is None:
            reason = "range inclusion fails" if not report.ranges_ok else "no formula hypothesis holds"
            warnings.append(f"{reason}; used SVD oracle")

    truth = None
    if chosen is Formula.SMW:
        B = _smw(X, Y, apinv)
    elif chosen is Formula.SPECIAL:
        B = _special(X, Y, apinv, tol, keep)
    elif chosen is Formula.GENERAL:
        B = _general(X, Y, apinv, tol, keep)
    else:
        chosen = Formula.ORACLE_FALLBACK
        B = truth = perturbed_oracle(A, X, Y, tol)
    penrose = penrose_residuals(T, B)

    limit = PENROSE_ESCALATION * tol.eq_rtol
    if chosen is not Formula.ORACLE_FALLBACK and max(penrose) > limit:
        msg = f"{chosen.value} result has Penrose residual {max(penrose):.3e} > {limit:.1e}"
        if formula is not None:
            raise NumericalError(msg)
        log.warning("%s; escalating to oracle", msg)
        warnings.append(msg + "; escalated to SVD oracle")
        chosen = Formula.ORACLE_FALLBACK
        B = truth = perturbed_oracle(A, X, Y, tol)
        penrose = penrose_residuals(T, B)

    deviation = None
    if verify:
        if truth is None:
            truth = perturbed_oracle(A, X, Y, tol)
        deviation = rel_deviation(B, truth)

    return UpdateResult(
        formula_used=chosen,
        pseudoinverse=B,
        penrose=penrose,
        report=report,
        oracle_deviation=deviation,
        warnings=warnings,
        intermediates=keep or {},
    )
