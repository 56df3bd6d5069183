"""The stochastic similarity table of an interindustrial economy.

With no final demand the distribution matrix ``D = diag(q)^-1 S`` is row
stochastic, and the value, price and quantity state matrices are all
diagonal similarity transforms of it::

    A = X D X^-1,   B = P D P^-1,   C = Q D Q^-1      (X, P, Q diagonal)

so they share the Frobenius eigenvalue 1, with eigenvectors ``x``, ``p``
and ``q`` respectively (and ``e``, the ones vector, for ``D``).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace

import numpy as np

from .errors import IotaError, NonPositive, NotInterindustrial
from .iot import MonetaryTable
from .linalg import _frozen, as_square, as_vector, frobenius_eigen

INTERINDUSTRIAL_TOL = 1e-6


@dataclass(frozen=True)
class GdpTable:
    x: np.ndarray
    p: np.ndarray
    q: np.ndarray
    e: np.ndarray
    Z: np.ndarray
    T: np.ndarray
    S: np.ndarray
    D_flow: np.ndarray
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D_state: np.ndarray
    unit_prices: bool = False

    def __post_init__(self):
        for name in ("x", "p", "q", "e", "Z", "T", "S", "D_flow", "A", "B", "C", "D_state"):
            object.__setattr__(self, name, _frozen(np.array(getattr(self, name), dtype=float)))


def _conjugate(d: np.ndarray, M: np.ndarray) -> np.ndarray:
    """``diag(d) M diag(d)^-1``."""
    return d[:, np.newaxis] * M / d[np.newaxis, :]


def monetary_physical_bridge(C, p) -> np.ndarray:
    """Monetary technical coefficients from physical ones: ``A = diag(p) C diag(p)^-1``."""
    C = as_square(C, "C")
    p = as_vector(p, "p", C.shape[0])
    for i in np.flatnonzero(p <= 0):
        raise NonPositive("p", int(i))
    return _conjugate(p, C)


def build_gdp_table(S, q, p, tol: float = INTERINDUSTRIAL_TOL) -> GdpTable:
    S = as_square(S, "S")
    n = S.shape[0]
    q = as_vector(q, "q", n)
    p = as_vector(p, "p", n)
    for name, vec in (("q", q), ("p", p)):
        for i in np.flatnonzero(vec <= 0):
            raise NonPositive(name, int(i))
    if np.any(S < 0):
        raise NonPositive("S", int(np.argwhere(S < 0)[0][0]))
    gap = np.abs(S.sum(axis=1) - q) / q
    worst = int(np.argmax(gap))
    if gap[worst] > tol:
        raise NotInterindustrial(str(worst), float(gap[worst]))

    x = p * q
    D = S / q[:, np.newaxis]
    return GdpTable(
        x=x, p=p, q=q, e=np.ones(n),
        Z=p[:, np.newaxis] * S,
        T=p[:, np.newaxis] * D,
        S=S,
        D_flow=D,
        A=_conjugate(x, D),
        B=_conjugate(p, D),
        C=_conjugate(q, D),
        D_state=D,
    )


def gdp_table_from_monetary(t: MonetaryTable, tol: float = INTERINDUSTRIAL_TOL) -> GdpTable:
    """Table for a monetary IOT under unit prices (``S = Z``, ``q = x``, ``p = e``)."""
    return replace(build_gdp_table(t.Z, t.x, np.ones(t.n), tol), unit_prices=True)


@dataclass(frozen=True)
class RelationCheck:
    name: str
    group: str
    deviation: float
    passed: bool


@dataclass(frozen=True)
class VerificationReport:
    tol: float
    checks: tuple[RelationCheck, ...]
    eigenvalues: dict[str, float]
    unit_prices: bool = False

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[str]:
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "tol": self.tol,
            "passed": self.passed,
            "unit_prices": self.unit_prices,
            "eigenvalues": dict(self.eigenvalues),
            "relations": [asdict(c) for c in self.checks],
        }


def _rel(diff: np.ndarray, ref: np.ndarray) -> float:
    return float(np.abs(diff).max() / max(float(np.abs(ref).max()), 1.0))


def verify_gdp_table(g: GdpTable, tol: float = 1e-9) -> VerificationReport:
    """Check the four row-sum, four eigenvector and three similarity relations
    plus the shared Frobenius eigenvalue. Failures are reported, not raised.
    """
    e = np.ones(len(g.x))
    rows: list[tuple[str, str, float]] = [
        ("Ze = x", "row-sum", _rel(g.Z @ e - g.x, g.x)),
        ("Te = p", "row-sum", _rel(g.T @ e - g.p, g.p)),
        ("Se = q", "row-sum", _rel(g.S @ e - g.q, g.q)),
        ("De = e", "row-sum", _rel(g.D_flow @ e - g.e, g.e)),
        ("Ax = x", "eigenvector", _rel(g.A @ g.x - g.x, g.x)),
        ("Bp = p", "eigenvector", _rel(g.B @ g.p - g.p, g.p)),
        ("Cq = q", "eigenvector", _rel(g.C @ g.q - g.q, g.q)),
        ("De = e (eigen)", "eigenvector", _rel(g.D_state @ g.e - g.e, g.e)),
        ("A = xDx^-1", "similarity", _rel(g.A - _conjugate(g.x, g.D_state), g.A)),
        ("B = pDp^-1", "similarity", _rel(g.B - _conjugate(g.p, g.D_state), g.B)),
        ("C = qDq^-1", "similarity", _rel(g.C - _conjugate(g.q, g.D_state), g.C)),
    ]
    eigenvalues: dict[str, float] = {}
    for name, M in (("A", g.A), ("B", g.B), ("C", g.C), ("D", g.D_state)):
        try:
            eigenvalues[name] = frobenius_eigen(M).lam
        except IotaError:
            eigenvalues[name] = float("nan")
    lams = np.array(list(eigenvalues.values()))
    spectral = float(np.abs(lams - 1.0).max()) if np.all(np.isfinite(lams)) else float("inf")
    rows.append(("lambda(A) = lambda(B) = lambda(C) = lambda(D) = 1", "spectral", spectral))
    checks = tuple(RelationCheck(name, group, dev, bool(dev <= tol)) for name, group, dev in rows)
    return VerificationReport(tol, checks, eigenvalues, g.unit_prices)
