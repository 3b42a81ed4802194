"""
Seeded random instances for each hypothesis regime.

Every generator certifies its output with :func:`check_conditions` and
resamples until the instance meets its kind's contract, so callers can rely
on the label without re-checking.
"""

from __future__ import annotations

import enum

import numpy as np

from .matrix_core import DEFAULT_TOL, adjoint, condition_number, pinv_oracle
from .update_engine import check_conditions

__all__ = [
    "InstanceKind",
    "InfeasibleError",
    "random_rank",
    "random_idempotent",
    "random_inner_inverse",
    "generate_instance",
]

MAX_TRIES = 200
# conditioning caps for the random factors; tight enough that formula and
# oracle agree to ~1e-12 at m <= 12
FACTOR_COND_MAX = 1e2
CORE_COND_MAX = 1e4


class InstanceKind(str, enum.Enum):
    SMW_REGULAR = "smw_regular"
    INNER_REGULAR = "inner_regular"
    SPECIAL_PAIR = "special_pair"
    RANGE_VIOLATING = "range_violating"
    INNER_VIOLATING = "inner_violating"


class InfeasibleError(ValueError):
    """Parameters admit no instance of the requested kind, or sampling gave up."""


def _gauss(rng, *shape, complex_=True):
    z = rng.standard_normal(shape)
    if complex_:
        z = (z + 1j * rng.standard_normal(shape)) / np.sqrt(2)
    return z


def _orthonormal(rng, m, k, complex_=True):
    q, _ = np.linalg.qr(_gauss(rng, m, k, complex_=complex_))
    return q


def _well_conditioned(rng, k, cond_max=FACTOR_COND_MAX, complex_=True):
    """Random ``k x k`` matrix whose condition number is log-uniform in [1, cond_max)."""
    target = cond_max ** rng.uniform(0.0, 1.0)
    s = np.exp(rng.uniform(0.0, np.log(target), size=k))
    if k > 1:
        s[0], s[1] = 1.0, target
    return (_orthonormal(rng, k, k, complex_) * s) @ adjoint(_orthonormal(rng, k, k, complex_))


def random_rank(rng, m, r, complex_=True):
    """``m x m`` matrix of exact rank ``r`` with singular values in [1, 3]."""
    U = _orthonormal(rng, m, r, complex_)
    V = _orthonormal(rng, m, r, complex_)
    s = rng.uniform(1.0, 3.0, size=r)
    return (U * s) @ adjoint(V)


def random_idempotent(rng, m, k=None, cond_max=1e3, complex_=True):
    """Oblique idempotent ``V diag(I_k, 0) V^{-1}`` with ``cond(V) < cond_max``."""
    if k is None:
        k = int(rng.integers(0, m + 1))
    V = _well_conditioned(rng, m, cond_max, complex_)
    D = np.zeros(m)
    D[:k] = 1.0
    return (V * D) @ np.linalg.inv(V)


def random_inner_inverse(rng, T, tol=DEFAULT_TOL, scale=1.0):
    """``T^+ + (I - T^+T) R (I - TT^+)`` for Gaussian ``R``; satisfies ``TBT = T``."""
    m, n = T.shape
    Tp = pinv_oracle(T, tol)
    R = scale * _gauss(rng, n, m)
    return Tp + (np.eye(n) - Tp @ T) @ R @ (np.eye(m) - T @ Tp)


def _smw_regular(rng, m, n, r, tol):
    A = random_rank(rng, m, r)
    c = 0.5 / np.sqrt(m)
    X = A @ (c * _gauss(rng, m, n))
    Y = adjoint(A) @ (c * _gauss(rng, m, n))
    return A, X, Y


def _special_pair(rng, m, n, r, tol):
    if n >= r:
        # n = r gives X Y^* = A exactly, so A - X Y^* is pure rounding noise
        raise InfeasibleError(f"special_pair needs n < r, got n={n}, r={r}")
    A = random_rank(rng, m, r)
    Ap = pinv_oracle(A, tol)
    M = _gauss(rng, m, n) / np.sqrt(m)
    L = Ap @ A @ M
    # well-conditioned A^+ A M keeps (A^+ A M)^+ accurate
    if condition_number(L) > FACTOR_COND_MAX:
        return None
    X = A @ M
    Y = adjoint(pinv_oracle(L, tol))
    return A, X, Y


def _inner_regular(rng, m, n, r, tol):
    if r < 2:
        # rank-one A admits only X Y^* in {0, A}
        raise InfeasibleError("inner_regular needs r >= 2")
    U = _orthonormal(rng, m, r)
    V = _orthonormal(rng, m, r)
    s = rng.uniform(1.0, 3.0, size=r)
    A = (U * s) @ adjoint(V)
    # k = r would make X Y^* = A
    k = int(rng.integers(1, min(n, r - 1) + 1))
    # Q = V E V^* with E an r x r idempotent keeps W = A Q inside both ranges
    # and gives W A^+ W = A Q V V^* Q = A Q^2 = W
    E = random_idempotent(rng, r, k, cond_max=10.0)
    W = A @ V @ E @ adjoint(V)
    P, sw, Qh = np.linalg.svd(W)
    X = P[:, :k] * sw[:k]
    Y = adjoint(Qh[:k])
    if n > k:
        # extra columns of X inside range(A) but outside range(W); matching
        # zero columns of Y leave X Y^* unchanged and break the special pair
        X_extra = A @ (_gauss(rng, m, n - k) / np.sqrt(m))
        Y_extra = np.zeros((m, n - k), dtype=complex)
        if rng.random() < 0.5:
            X = np.hstack([X, X_extra])
            Y = np.hstack([Y, Y_extra])
        else:
            # mirrored: the extra directions live in Y inside range(A^*)
            X = np.hstack([X, Y_extra])
            Y = np.hstack([Y, adjoint(A) @ (_gauss(rng, m, n - k) / np.sqrt(m))])
    G = _well_conditioned(rng, n, cond_max=10.0)
    X = X @ G
    Y = Y @ adjoint(np.linalg.inv(G))
    return A, X, Y


def _inner_violating(rng, m, n, r, tol):
    if n == 1 or n >= r:
        # n = 1: a singular core forces y^* A^+ x = 1, hence inner regularity,
        # so only the generic (invertible core) violation exists
        return _smw_regular(rng, m, n, r, tol)
    base = _special_pair(rng, m, n, r, tol)
    if base is None:
        return None
    A, X, Y = base
    Ap = pinv_oracle(A, tol)
    # perturb Y inside range(A^*) orthogonally to A^+ x_1: the core keeps the
    # eigenvector e_1 with eigenvalue 0 while Y^* A^+ X stops being I_n
    u = Ap @ X[:, 0]
    u = u / np.linalg.norm(u)
    Z = Ap @ A @ _gauss(rng, m, n)
    Z = Z - np.outer(u, np.conj(u) @ Z)
    Z *= np.linalg.norm(Y) / np.linalg.norm(Z)
    return A, X, Y + Z


def _range_violating(rng, m, n, r, tol):
    if r >= m:
        raise InfeasibleError("range_violating needs r < m so that range(A) is proper")
    A, X, Y = _smw_regular(rng, m, n, r, tol)
    Ap = pinv_oracle(A, tol)
    off = _gauss(rng, m, n)
    off = off - A @ (Ap @ off)
    return A, X + off / np.linalg.norm(off) * max(1.0, np.linalg.norm(X)), Y


_BUILDERS = {
    InstanceKind.SMW_REGULAR: _smw_regular,
    InstanceKind.INNER_REGULAR: _inner_regular,
    InstanceKind.SPECIAL_PAIR: _special_pair,
    InstanceKind.RANGE_VIOLATING: _range_violating,
    InstanceKind.INNER_VIOLATING: _inner_violating,
}


def _accept(kind, report, n, r):
    if kind is InstanceKind.RANGE_VIOLATING:
        return not report.range_X_ok
    if not report.ranges_ok:
        return False
    if kind is InstanceKind.SMW_REGULAR:
        return report.smw_core_cond < CORE_COND_MAX
    if kind is InstanceKind.INNER_REGULAR:
        return report.inner_regular
    if kind is InstanceKind.SPECIAL_PAIR:
        return report.special_pair
    # inner_violating: clearly off, with a singular core whenever the
    # construction allows one
    clear = report.inner_residual > 1e-3
    if 2 <= n < r:
        return clear and not report.smw_core_invertible
    return clear and report.smw_core_cond < CORE_COND_MAX


def generate_instance(kind, m, n, r, seed, tol=DEFAULT_TOL):
    """
    Random ``(A, X, Y)`` of the requested kind, deterministic in ``seed``.

    Parameters
    ----------
    kind : InstanceKind or str
    m : int
        Size of the square ``A``.
    n : int
        Number of columns of ``X`` and ``Y``.
    r : int
        Rank of ``A``, ``1 <= r <= m``.
    seed : int

    Raises
    ------
    InfeasibleError
        Parameters admit no instance (e.g. ``n >= r`` for ``special_pair``)
        or rejection sampling hit its cap.
    """
    kind = InstanceKind(kind)
    if m < 1 or n < 1:
        raise InfeasibleError(f"need m, n >= 1, got m={m}, n={n}")
    if not 1 <= r <= m:
        raise InfeasibleError(f"need 1 <= r <= m, got r={r}, m={m}")
    rng = np.random.default_rng(seed)
    build = _BUILDERS[kind]
    for _ in range(MAX_TRIES):
        inst = build(rng, m, n, r, tol)
        if inst is None:
            continue
        if _accept(kind, check_conditions(*inst, tol), n, r):
            return inst
    raise InfeasibleError(f"no {kind.value} instance for m={m}, n={n}, r={r} after {MAX_TRIES} tries")


def random_dims(rng, kind, max_m=12, max_n=4):
    """Draw ``(m, n, r)`` for which ``kind`` is feasible, with ``m <= max_m``, ``n <= max_n``."""
    kind = InstanceKind(kind)
    if kind is InstanceKind.SMW_REGULAR:
        m = int(rng.integers(1, max_m + 1))
        r = int(rng.integers(1, m + 1))
    elif kind is InstanceKind.RANGE_VIOLATING:
        m = int(rng.integers(2, max_m + 1))
        r = int(rng.integers(1, m))
    else:
        m = int(rng.integers(2, max_m + 1))
        r = int(rng.integers(2, m + 1))
    top = min(max_n, r - 1) if kind is InstanceKind.SPECIAL_PAIR else max_n
    return m, int(rng.integers(1, top + 1)), r
