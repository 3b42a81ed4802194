"""
Dense complex matrix substrate: tolerance policy, SVD pseudoinverse oracle,
numerical rank and the Penrose residuals used to certify every result.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``. Real
input is embedded with zero imaginary part by :func:`as_matrix`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "DimensionError",
    "DecompositionError",
    "PreconditionError",
    "NumericalError",
    "TolerancePolicy",
    "DEFAULT_TOL",
    "EPS",
    "as_matrix",
    "adjoint",
    "fro",
    "rel_residual",
    "pinv_oracle",
    "numerical_rank",
    "singular_values",
    "penrose_residuals",
    "approx_equal",
    "condition_number",
    "rel_deviation",
]

EPS = np.finfo(np.float64).eps


class DimensionError(ValueError):
    """Operand shapes are not conformable."""


class DecompositionError(RuntimeError):
    """The SVD (or another LAPACK factorization) did not converge."""


class PreconditionError(ValueError):
    """A hypothesis required by a formula does not hold numerically.

    ``failed`` lists the names of the violated conditions.
    """

    def __init__(self, message, failed=()):
        super().__init__(message)
        self.failed = tuple(failed)


class NumericalError(ArithmeticError):
    """A matrix that must be invertible is numerically singular."""


@dataclass(frozen=True)
class TolerancePolicy:
    """Thresholds for every approximate decision in the package.

    Parameters
    ----------
    rank_rtol : float or None
        Relative singular-value cutoff. ``None`` means
        ``max(rows, cols) * eps`` of the matrix being truncated.
    eq_rtol : float
        Relative Frobenius threshold for matrix equality and hypothesis
        residuals.
    cond_max : float
        2-norm condition number at or above which a matrix counts as
        numerically singular.
    """

    rank_rtol: float | None = None
    eq_rtol: float = 1e-10
    cond_max: float = 1e12

    def __post_init__(self):
        if self.rank_rtol is not None and not 0.0 <= self.rank_rtol < 1.0:
            raise ValueError(f"rank_rtol must lie in [0, 1), got {self.rank_rtol}")
        if not 0.0 <= self.eq_rtol < 1.0:
            raise ValueError(f"eq_rtol must lie in [0, 1), got {self.eq_rtol}")
        if not self.cond_max > 1.0:
            raise ValueError(f"cond_max must exceed 1, got {self.cond_max}")

    def rank_cutoff(self, shape):
        """Relative cutoff applied to a matrix of the given shape."""
        if self.rank_rtol is not None:
            return self.rank_rtol
        return max(shape) * EPS


DEFAULT_TOL = TolerancePolicy()


def as_matrix(M, name="matrix"):
    """Return ``M`` as a finite 2-D complex128 array.

    Zero-sized dimensions are allowed so that an ``m x 0`` factor can stand
    for an empty perturbation.
    """
    arr = np.asarray(M)
    if arr.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {arr.shape}")
    arr = arr.astype(np.complex128, copy=False)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def adjoint(M):
    """Conjugate transpose."""
    return np.conj(np.asarray(M)).T


def fro(M):
    return float(np.linalg.norm(M)) if np.size(M) else 0.0


def rel_residual(diff, ref):
    """``||diff||_F / max(1, ||ref||_F)``."""
    return fro(diff) / max(1.0, fro(ref))


def _svd(M, compute_uv=True):
    try:
        return np.linalg.svd(M, full_matrices=False, compute_uv=compute_uv)
    except np.linalg.LinAlgError as exc:
        raise DecompositionError(f"SVD did not converge: {exc}") from exc


def singular_values(M):
    M = as_matrix(M)
    if M.size == 0:
        return np.zeros(0)
    return _svd(M, compute_uv=False)


def pinv_oracle(M, tol=DEFAULT_TOL):
    """
    Moore-Penrose pseudoinverse by truncated SVD.

    Singular values at or below ``rank_cutoff * sigma_max`` are treated as
    zero. This path never touches the update formulas and serves as ground
    truth for them.

    Parameters
    ----------
    M : array_like, shape (m, n)
    tol : TolerancePolicy

    Returns
    -------
    ndarray, shape (n, m)
    """
    M = as_matrix(M)
    m, n = M.shape
    if M.size == 0:
        return np.zeros((n, m), dtype=np.complex128)
    U, s, Vh = _svd(M)
    if s[0] == 0.0:
        return np.zeros((n, m), dtype=np.complex128)
    keep = s > tol.rank_cutoff(M.shape) * s[0]
    k = int(np.count_nonzero(keep))
    return (adjoint(Vh[:k]) / s[:k]) @ adjoint(U[:, :k])


def numerical_rank(M, tol=DEFAULT_TOL):
    """Number of singular values above ``rank_cutoff * sigma_max``."""
    M = as_matrix(M)
    s = singular_values(M)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_cutoff(M.shape) * s[0]))


def condition_number(M):
    """2-norm condition number; ``inf`` for singular input, 1 for empty."""
    M = as_matrix(M)
    if M.size == 0:
        return 1.0
    s = singular_values(M)
    if s[-1] == 0.0:
        return float("inf")
    return float(s[0] / s[-1])


def _ratio(num, den):
    # zero denominators fall back to the absolute norm
    return num / den if den > 0.0 else num


def penrose_residuals(A, B):
    """The four relative Penrose defects of ``B`` as a candidate for ``A^+``.

    Returns ``(||ABA-A||/||A||, ||BAB-B||/||B||, ||(AB)^*-AB||/(1+||AB||),
    ||(BA)^*-BA||/(1+||BA||))``, all Frobenius.
    """
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    if B.shape != (A.shape[1], A.shape[0]):
        raise DimensionError(
            f"B has shape {B.shape}, expected {(A.shape[1], A.shape[0])}"
        )
    AB = A @ B
    BA = B @ A
    r1 = _ratio(fro(AB @ A - A), fro(A))
    r2 = _ratio(fro(BA @ B - B), fro(B))
    r3 = fro(adjoint(AB) - AB) / (1.0 + fro(AB))
    r4 = fro(adjoint(BA) - BA) / (1.0 + fro(BA))
    return (r1, r2, r3, r4)


def approx_equal(P, Q, tol=DEFAULT_TOL):
    """True iff ``||P-Q||_F <= eq_rtol * max(1, ||P||_F, ||Q||_F)``."""
    P = as_matrix(P, "P")
    Q = as_matrix(Q, "Q")
    if P.shape != Q.shape:
        raise DimensionError(f"shape mismatch {P.shape} vs {Q.shape}")
    return fro(P - Q) <= tol.eq_rtol * max(1.0, fro(P), fro(Q))


def rel_deviation(P, Q):
    """``||P-Q||_F / max(1, ||Q||_F)``, the scale used for oracle deviation."""
    return rel_residual(as_matrix(P) - as_matrix(Q), Q)
