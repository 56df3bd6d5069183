"""Prices of production for single-product systems.

The price equation, with wages paid at the end of the period::

    (1 + r) S' p + w L = diag(q) p

For a fixed profit rate ``r`` below the maximum ``R`` the matrix
``diag(q) - (1 + r) S'`` is invertible, prices are proportional to
``(diag(q) - (1 + r) S')^-1 L`` and the numeraire fixes the scale (and
with it ``w``). At ``r = R`` the wage vanishes and prices are the left
Frobenius eigenvector of ``C = S diag(q)^-1``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ..errors import (
    InfeasibleRate,
    InvalidNumeraire,
    NoLabor,
    NonConvergence,
    NotSelfReplacing,
    ReducibleSystem,
    ReducibleSystemWarning,
    ValidationError,
)
from ..leontief import ProductivenessReport, productiveness
from ..linalg import _frozen, frobenius_eigen, is_irreducible, leading_principal_minors, solve_linear, transitive_closure
from .system import NumeraireSpec, PhysicalSystem

SELF_REPLACING_TOL = 1e-9
# |r - R| below this (relative to max(1, R)) is treated as the r = R boundary
BOUNDARY_RTOL = 1e-9
RATE_TOL = 1e-10


@dataclass(frozen=True)
class SraffaSolution:
    p: np.ndarray
    r: float
    w: float
    numeraire: NumeraireSpec
    residual: float = 0.0
    warnings: tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "p", _frozen(np.array(self.p, dtype=float)))


@dataclass(frozen=True)
class StandardSystem:
    multipliers: np.ndarray
    R: float
    standard_net_product: np.ndarray
    means_of_production: np.ndarray
    normalization: str

    def __post_init__(self):
        for a in (self.multipliers, self.standard_net_product, self.means_of_production):
            _frozen(a)


@dataclass(frozen=True)
class BasicsPartition:
    basics: frozenset[int]
    non_basics: frozenset[int]


class FrontierPoint(NamedTuple):
    r: float
    w: float
    p: np.ndarray


def _require_single(ps: PhysicalSystem) -> None:
    if ps.is_joint:
        raise ValidationError("operation needs a single-product system; use the joint-production solvers")


def physical_tech_matrix(ps: PhysicalSystem) -> np.ndarray:
    """``C = S diag(q)^-1``: physical input of i per unit of commodity j."""
    _require_single(ps)
    return ps.S / ps.q[np.newaxis, :]


def price_residual(S: np.ndarray, out: np.ndarray, L: np.ndarray, p: np.ndarray, r, w) -> float:
    """Relative residual of ``(1 + r) S' p + w L = out' p``; ``r`` and ``w`` may be per-industry vectors."""
    lhs = (1.0 + np.asarray(r)) * (S.T @ p) + np.asarray(w) * L
    rhs = out.T @ p
    return float(np.abs(lhs - rhs).max() / max(np.abs(rhs).max(), np.finfo(float).tiny))


def classify_basics(ps: PhysicalSystem) -> BasicsPartition:
    """Basics are commodities that enter, directly or indirectly, every production process."""
    _require_single(ps)
    reach = transitive_closure(ps.S > 0)
    basics = frozenset(int(i) for i in np.flatnonzero(reach.all(axis=1)))
    return BasicsPartition(basics, frozenset(range(ps.n)) - basics)


def max_profit_rate(ps: PhysicalSystem) -> ProductivenessReport:
    C = physical_tech_matrix(ps)
    return productiveness(frobenius_eigen(C).lam, ps.n, "physical")


def standard_system(ps: PhysicalSystem) -> StandardSystem:
    """Rescale the basic industries so that net product and means of production
    have the same composition.

    Non-basic industries get multiplier 0. Multipliers are normalised to
    employ one unit of labour in total, or to a largest multiplier of 1 when
    the basic industries use no labour.
    """
    basics = sorted(classify_basics(ps).basics)
    if not basics:
        raise ReducibleSystem("system has no basic commodities")
    C = physical_tech_matrix(ps)
    Cb = C[np.ix_(basics, basics)]
    if not is_irreducible(Cb):
        raise ReducibleSystem("basic subsystem is reducible")
    eig = frobenius_eigen(Cb)
    q_star = np.zeros(ps.n)
    q_star[basics] = eig.right
    m = q_star / ps.q
    labour = float(m @ ps.L)
    if labour > 0:
        m, normalization = m / labour, "labor"
    else:
        m, normalization = m / m.max(), "max"
    means = ps.S @ m
    R = productiveness(eig.lam).R
    return StandardSystem(m, R, m * ps.q - means, means, normalization)


def numeraire_vector(ps: PhysicalSystem, numeraire: NumeraireSpec) -> np.ndarray:
    """Weights c such that the numeraire reads ``c @ p == 1``."""
    if numeraire.kind == "commodity":
        if not 0 <= numeraire.index < ps.n:
            raise InvalidNumeraire(f"commodity index {numeraire.index} out of range")
        c = np.zeros(ps.n)
        c[numeraire.index] = 1.0
        return c
    if numeraire.kind == "net":
        return ps.net_product()
    if numeraire.kind == "standard":
        if ps.is_joint:
            raise InvalidNumeraire("standard numeraire is only defined for single-product systems")
        return standard_system(ps).standard_net_product
    raise InvalidNumeraire(f"unknown numeraire kind {numeraire.kind!r}")


def _normalise(p_raw: np.ndarray, c: np.ndarray) -> tuple[np.ndarray, float]:
    value = float(c @ p_raw)
    if not value > 1e-300:
        raise InvalidNumeraire("numeraire has zero or negative value at these prices")
    return p_raw / value, value


def subsistence_prices(
    ps: PhysicalSystem,
    numeraire: NumeraireSpec = NumeraireSpec(),
    tol: float = SELF_REPLACING_TOL,
) -> SraffaSolution:
    """Exchange ratios that let a self-replacing system reproduce itself: ``S' p = diag(q) p``."""
    _require_single(ps)
    gap = np.abs(ps.S.sum(axis=1) - ps.q) / ps.q
    worst = int(np.argmax(gap))
    if gap[worst] > tol:
        raise NotSelfReplacing(ps.commodities[worst], float(gap[worst]))
    C = physical_tech_matrix(ps)
    notes = ()
    if not is_irreducible(C):
        msg = "technology is reducible; subsistence prices may not be unique"
        warnings.warn(msg, ReducibleSystemWarning, stacklevel=2)
        notes = (msg,)
    p, _ = _normalise(frobenius_eigen(C).left, numeraire_vector(ps, numeraire))
    res = price_residual(ps.S, np.diag(ps.q), ps.L, p, 0.0, 0.0)
    return SraffaSolution(p, 0.0, 0.0, numeraire, res, notes)


def _solve_at_rate(ps: PhysicalSystem, r: float, R: float, left: np.ndarray, c: np.ndarray, numeraire) -> SraffaSolution:
    band = BOUNDARY_RTOL * max(1.0, abs(R))
    if r < 0 or r > R + band:
        raise InfeasibleRate(f"profit rate {float(r):g} outside [0, R = {float(R):g}]")
    if r >= R - band:
        p, _ = _normalise(left, c)
        w = 0.0
    else:
        if not np.any(ps.L > 0):
            raise NoLabor("wage rate is undetermined when no industry employs labour")
        p_tilde = solve_linear(np.diag(ps.q) - (1.0 + r) * ps.S.T, ps.L)
        p, value = _normalise(p_tilde, c)
        w = 1.0 / value
    res = price_residual(ps.S, np.diag(ps.q), ps.L, p, r, w)
    return SraffaSolution(p, float(r), float(w), numeraire, res)


def _feasible(C: np.ndarray, r: float) -> bool:
    # strict signs: the Hawkins-Simon tolerance grows like ||C||^n and
    # would shift the bisection root by far more than RATE_TOL
    minors = leading_principal_minors(np.eye(C.shape[0]) - (1.0 + r) * C)
    return bool(np.all(minors > 0))


def rate_for_wage(ps: PhysicalSystem, w: float, c: np.ndarray) -> float:
    """Profit rate at which the wage equals ``w``, by bisection.

    Feasibility of a trial rate is decided by the signs of the leading
    principal minors of ``I - (1 + r) C``, not by the eigenvalue solver, so ``w = 0`` gives an
    estimate of R that is independent of :func:`max_profit_rate`.
    """
    _require_single(ps)
    if w < 0:
        raise InfeasibleRate(f"wage {float(w):g} is negative")
    if w > 0 and not np.any(ps.L > 0):
        raise NoLabor("a positive wage needs some labour input")
    C = physical_tech_matrix(ps)
    Mq = np.diag(ps.q)

    def below_root(r: float) -> bool:
        if not _feasible(C, r):
            return False
        if w == 0:
            return True
        value = c @ solve_linear(Mq - (1.0 + r) * ps.S.T, ps.L)
        return value > 0 and 1.0 / value > w

    if not below_root(0.0):
        if w == 0 and abs(frobenius_eigen(C).lam - 1.0) <= BOUNDARY_RTOL:
            return 0.0
        raise InfeasibleRate(f"no profit rate r >= 0 yields wage {float(w):g}")
    lo, hi = 0.0, 1.0
    while below_root(hi):
        lo, hi = hi, 2.0 * hi
        if hi > 1e12:
            raise NonConvergence(0)
    steps = 0
    while hi - lo > RATE_TOL:
        mid = 0.5 * (lo + hi)
        if below_root(mid):
            lo = mid
        else:
            hi = mid
        steps += 1
        if steps > 200:
            raise NonConvergence(steps)
    return 0.5 * (lo + hi)


def surplus_solve(
    ps: PhysicalSystem,
    r: float | None = None,
    w: float | None = None,
    numeraire: NumeraireSpec = NumeraireSpec(),
) -> SraffaSolution:
    """Solve the price system given exactly one of the profit rate or the wage.

    With ``w`` given, ``r`` comes from :func:`rate_for_wage` and the returned
    ``w`` is the wage consistent with that ``r`` (equal to the request to
    within the bisection tolerance).
    """
    _require_single(ps)
    if (r is None) == (w is None):
        raise ValueError("give exactly one of r or w")
    C = physical_tech_matrix(ps)
    eig = frobenius_eigen(C)
    R = productiveness(eig.lam).R
    c = numeraire_vector(ps, numeraire)
    if r is None:
        r = rate_for_wage(ps, float(w), c)
    return _solve_at_rate(ps, float(r), R, eig.left, c, numeraire)


def wage_profit_frontier(
    ps: PhysicalSystem,
    samples: int = 11,
    numeraire: NumeraireSpec = NumeraireSpec(),
) -> list[FrontierPoint]:
    """Evaluate the price system at ``samples`` evenly spaced rates from 0 to R.

    Each point is solved independently of the others.
    """
    if samples < 2:
        raise ValueError("samples must be at least 2")
    R = max_profit_rate(ps).R
    if not np.isfinite(R):
        raise InfeasibleRate("maximum profit rate is unbounded")
    points = []
    for k in range(samples):
        rate = R * k / (samples - 1)
        sol = surplus_solve(ps, r=rate, numeraire=numeraire)
        points.append(FrontierPoint(sol.r, sol.w, np.array(sol.p)))
    return points
