"""Dense linear algebra for small nonnegative systems.

Everything here works on plain float ``numpy`` arrays. The Perron-Frobenius
solver runs power iteration on the shifted matrix ``(M + I) / 2`` so that
periodic (imprimitive) inputs such as permutation matrices still converge;
the shift keeps the eigenvectors and maps the eigenvalue ``lam`` to
``(lam + 1) / 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections import deque

import numpy as np

from .errors import (
    DimensionMismatch,
    NegativeEntry,
    NonConvergence,
    NonSquare,
    SingularMatrix,
    ValidationError,
)

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 100_000
# pivot magnitude below this fraction of the largest entry counts as zero
SINGULAR_RTOL = 1e-12


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    a = np.array(M, dtype=float)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValidationError(f"{name} must be a non-empty 2-D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} contains NaN or infinite entries")
    return a


def as_square(M, name: str = "matrix") -> np.ndarray:
    a = as_matrix(M, name)
    if a.shape[0] != a.shape[1]:
        raise NonSquare(f"{name} must be square, got shape {a.shape}")
    return a


def as_vector(v, name: str = "vector", length: int | None = None) -> np.ndarray:
    a = np.array(v, dtype=float)
    if a.ndim != 1 or a.size < 1:
        raise ValidationError(f"{name} must be a non-empty 1-D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"{name} contains NaN or infinite entries")
    if length is not None and a.size != length:
        raise DimensionMismatch(f"{name} has length {a.size}, expected {length}")
    return a


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def _check_nonnegative(a: np.ndarray, name: str) -> None:
    if np.any(a < 0):
        i, j = np.argwhere(a < 0)[0]
        raise NegativeEntry(f"{name}[{i}][{j}] = {a[i, j]!r} is negative")


@dataclass(frozen=True)
class EigenResult:
    """Frobenius eigenpair of a nonnegative matrix.

    Both eigenvectors are scaled so that their largest entry is 1.
    ``residual`` is the larger of the right and left residuals
    ``||M v - lam v||_inf`` (with ``||v||_inf = 1``).
    """

    lam: float
    right: np.ndarray
    left: np.ndarray
    iterations: int
    residual: float

    def __post_init__(self):
        _frozen(self.right)
        _frozen(self.left)


def _power_iteration(M: np.ndarray, tol: float, max_iter: int) -> tuple[float, np.ndarray, int, float]:
    n = M.shape[0]
    shifted = 0.5 * (M + np.eye(n))
    # floating error of M @ v grows with ||M||; keep the test attainable
    threshold = tol * max(1.0, float(np.abs(M).sum(axis=1).max()))
    v = np.ones(n)
    lam = 0.0
    res = np.inf
    for k in range(1, max_iter + 1):
        y = shifted @ v
        mu = y.max()
        v = y / mu
        lam = max(2.0 * mu - 1.0, 0.0)
        res = float(np.abs(M @ v - lam * v).max())
        if res <= threshold:
            return lam, v, k, res
    raise NonConvergence(max_iter, res)


def frobenius_eigen(M, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> EigenResult:
    """Dominant eigenvalue and right/left eigenvectors of a nonnegative matrix.

    Reducible matrices are accepted; strict positivity of the eigenvectors
    is only guaranteed when :func:`is_irreducible` holds.
    """
    a = as_square(M)
    _check_nonnegative(a, "matrix")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if a.shape[0] == 1:
        return EigenResult(float(a[0, 0]), np.ones(1), np.ones(1), 0, 0.0)
    lam, right, it_r, res_r = _power_iteration(a, tol, max_iter)
    _, left, it_l, res_l = _power_iteration(a.T, tol, max_iter)
    return EigenResult(lam, right, left, max(it_r, it_l), max(res_r, res_l))


def _lu(M: np.ndarray, check: bool = True) -> tuple[np.ndarray, np.ndarray, int]:
    """In-place style LU with partial pivoting: returns (packed LU, row permutation, sign)."""
    a = np.array(M, dtype=float)
    n = a.shape[0]
    perm = np.arange(n)
    sign = 1
    scale = float(np.abs(a).max()) if a.size else 0.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if p != k:
            a[[k, p]] = a[[p, k]]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        piv = a[k, k]
        if check and (scale == 0.0 or abs(piv) <= SINGULAR_RTOL * scale):
            raise SingularMatrix(f"pivot {k} has magnitude {abs(piv):.3e} (matrix scale {scale:.3e})")
        if piv == 0.0:
            continue
        a[k + 1:, k] /= piv
        a[k + 1:, k + 1:] -= np.outer(a[k + 1:, k], a[k, k + 1:])
    return a, perm, sign


def _lu_solve(lu: np.ndarray, perm: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = lu.shape[0]
    y = np.array(b[perm], dtype=float)
    for i in range(1, n):
        y[i] -= lu[i, :i] @ y[:i]
    for i in range(n - 1, -1, -1):
        y[i] = (y[i] - lu[i, i + 1:] @ y[i + 1:]) / lu[i, i]
    return y


def solve_linear(M, b) -> np.ndarray:
    """Solve ``M y = b`` by Gaussian elimination with partial pivoting.

    ``b`` may be a vector or a matrix of right-hand sides.
    """
    a = as_square(M)
    rhs = np.array(b, dtype=float)
    if rhs.ndim not in (1, 2) or rhs.shape[0] != a.shape[0]:
        raise DimensionMismatch(f"right-hand side shape {rhs.shape} does not match {a.shape}")
    lu, perm, _ = _lu(a)
    return _lu_solve(lu, perm, rhs)


def invert(M) -> np.ndarray:
    a = as_square(M)
    return solve_linear(a, np.eye(a.shape[0]))


def determinant(M) -> float:
    a = as_square(M)
    lu, _, sign = _lu(a, check=False)
    return float(sign * np.prod(np.diag(lu)))


def leading_principal_minors(M) -> np.ndarray:
    """Determinants of the top-left k-by-k blocks, k = 1..n."""
    a = as_square(M)
    return np.array([determinant(a[:k, :k]) for k in range(1, a.shape[0] + 1)])


def _reachable(adj: np.ndarray, start: int) -> np.ndarray:
    seen = np.zeros(adj.shape[0], dtype=bool)
    seen[start] = True
    queue = deque([start])
    while queue:
        i = queue.popleft()
        for j in np.flatnonzero(adj[i] & ~seen):
            seen[j] = True
            queue.append(j)
    return seen


def is_irreducible(M) -> bool:
    """True iff the graph with an edge i -> j wherever ``M[i, j] > 0`` is strongly connected."""
    a = as_square(M)
    _check_nonnegative(a, "matrix")
    adj = a > 0
    return bool(_reachable(adj, 0).all() and _reachable(adj.T, 0).all())


def transitive_closure(adj) -> np.ndarray:
    """Boolean matrix R with R[i, j] true iff a path of length >= 1 leads from i to j."""
    reach = np.array(adj, dtype=bool)
    for k in range(reach.shape[0]):
        reach |= np.outer(reach[:, k], reach[k, :])
    return reach
