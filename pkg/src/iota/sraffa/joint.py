"""Joint production and sector-specific distribution rates.

With an output matrix ``F`` (``F[i, j]`` = commodity i made by industry j)
the price equation reads ``(1 + r) S' p + w L = F' p``. Prices may come
out negative: a by-product that some industry has to absorb (an emission,
waste) is an ordinary commodity row in both ``S`` and ``F`` and acquires a
negative price when disposing of it is costly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.optimize import brentq

from ..errors import (
    InfeasibleRate,
    InvalidNumeraire,
    NoLabor,
    SingularMatrix,
    SingularNetOutput,
    SingularOutputMatrix,
    SingularSystem,
    ValidationError,
)
from ..linalg import _frozen, as_vector, solve_linear
from .prices import SraffaSolution, numeraire_vector, price_residual
from .system import NumeraireSpec, PhysicalSystem

# smallest/largest singular value below this counts as singular for homogeneous solves
NULLSPACE_RTOL = 1e-9
BRACKET_RTOL = 1e-9


def _require_joint(ps: PhysicalSystem) -> np.ndarray:
    if ps.F is None:
        raise ValidationError("system has no joint output matrix F")
    return ps.F


def joint_tech_matrix(ps: PhysicalSystem) -> np.ndarray:
    """``C_T = S F^-1``; may have negative entries."""
    F = _require_joint(ps)
    try:
        return solve_linear(F.T, ps.S.T).T
    except SingularMatrix as exc:
        raise SingularOutputMatrix(f"output matrix F is singular: {exc}") from None


def pasinetti_matrix(ps: PhysicalSystem) -> np.ndarray:
    """``H = (F' - S')^-1 S'``.

    When a uniform maximum profit rate R exists, the wage-free prices
    satisfy ``H p = p / R``.
    """
    F = _require_joint(ps)
    try:
        return solve_linear(F.T - ps.S.T, ps.S.T)
    except SingularMatrix as exc:
        raise SingularNetOutput(f"F' - S' is singular: {exc}") from None


def critical_rates(ps: PhysicalSystem) -> list[float]:
    """Nonnegative real ``r`` at which ``F' - (1 + r) S'`` is singular, ascending."""
    out = ps.output_matrix
    mu = scipy.linalg.eigvals(out.T, ps.S.T)
    rates = []
    for m in mu:
        if not np.isfinite(m) or abs(m.imag) > 1e-9 * max(1.0, abs(m)):
            continue
        if m.real >= 1.0 - 1e-12:
            rates.append(max(float(m.real) - 1.0, 0.0))
    return sorted(rates)


def _null_vector(M: np.ndarray) -> np.ndarray:
    _, sigma, vt = np.linalg.svd(M)
    if sigma[-1] > NULLSPACE_RTOL * max(sigma[0], 1e-300):
        raise SingularSystem("expected a singular system but the matrix has full rank")
    return vt[-1]


def _scale_to_numeraire(p_raw: np.ndarray, c: np.ndarray) -> np.ndarray:
    value = float(c @ p_raw)
    if abs(value) <= 1e-12 * float(np.abs(c).sum() * np.abs(p_raw).max()):
        raise InvalidNumeraire("numeraire has zero value at these prices")
    return p_raw / value


def _wage_at(ps: PhysicalSystem, r: float, c: np.ndarray) -> tuple[float, np.ndarray]:
    M = ps.output_matrix.T - (1.0 + r) * ps.S.T
    try:
        p_tilde = solve_linear(M, ps.L)
    except SingularMatrix as exc:
        raise SingularSystem(f"price system singular at r = {float(r):g}: {exc}") from None
    value = float(c @ p_tilde)
    if value == 0:
        raise InvalidNumeraire("numeraire has zero value at these prices")
    return 1.0 / value, p_tilde / value


def joint_surplus_solve(
    ps: PhysicalSystem,
    r: float | None = None,
    w: float | None = None,
    numeraire: NumeraireSpec = NumeraireSpec(),
) -> SraffaSolution:
    """Solve ``(1 + r) S' p + w L = F' p`` given exactly one of ``r`` or ``w``.

    Single-product systems are accepted and treated as ``F = diag(q)``.
    """
    if (r is None) == (w is None):
        raise ValueError("give exactly one of r or w")
    out = ps.output_matrix
    c = numeraire_vector(ps, numeraire)
    labour = np.any(ps.L > 0)

    if r is not None:
        if not labour:
            raise NoLabor("wage rate is undetermined when no industry employs labour")
        w_val, p = _wage_at(ps, float(r), c)
        if w_val < 0:
            raise InfeasibleRate(f"profit rate {float(r):g} implies a negative wage")
        r_val = float(r)
    else:
        w = float(w)
        if w < 0:
            raise InfeasibleRate(f"wage {float(w):g} is negative")
        roots = critical_rates(ps)
        if w == 0:
            if not roots:
                raise InfeasibleRate("no nonnegative profit rate makes wages vanish")
            r_val = roots[0]
            p = _scale_to_numeraire(_null_vector(out.T - (1.0 + r_val) * ps.S.T), c)
            w_val = 0.0
        else:
            if not labour:
                raise NoLabor("a positive wage needs some labour input")
            if _wage_at(ps, 0.0, c)[0] < w:
                raise InfeasibleRate(f"wage {float(w):g} exceeds the wage at r = 0")
            # stay clear of the critical rate, where the system turns singular
            hi = roots[0] * (1.0 - BRACKET_RTOL) if roots else 1.0
            if not roots:
                while _wage_at(ps, hi, c)[0] >= w:
                    hi *= 2.0
                    if hi > 1e12:
                        raise InfeasibleRate(f"no profit rate yields wage {float(w):g}")
            if _wage_at(ps, hi, c)[0] >= w:
                r_val = hi
            else:
                r_val = float(brentq(lambda x: _wage_at(ps, x, c)[0] - w, 0.0, hi, xtol=1e-14, rtol=1e-14))
            w_val, p = _wage_at(ps, r_val, c)

    res = price_residual(ps.S, out, ps.L, p, r_val, w_val)
    return SraffaSolution(p, r_val, float(w_val), numeraire, res)


@dataclass(frozen=True)
class VariableRatesSolution:
    """Prices with industry-specific profit rates ``r`` and wages ``w``.

    ``w`` is the requested relative wage structure times ``wage_level``,
    the common factor fixed by the numeraire.
    """

    p: np.ndarray
    r: np.ndarray
    w: np.ndarray
    wage_level: float
    numeraire: NumeraireSpec
    residual: float

    def __post_init__(self):
        for a in (self.p, self.r, self.w):
            _frozen(a)


def variable_rates_solve(
    ps: PhysicalSystem,
    r_vec,
    w_vec,
    numeraire: NumeraireSpec = NumeraireSpec(),
) -> VariableRatesSolution:
    """Solve ``(I + diag(r)) S' p + diag(w) L = F' p`` (``F = diag(q)`` if single-product).

    ``w_vec`` gives relative wages; their common level follows from the
    numeraire. An all-zero wage bill leaves a homogeneous system that only
    has a nonzero solution when it is singular.
    """
    n = ps.n
    r_vec = as_vector(r_vec, "r_vec", n)
    w_vec = as_vector(w_vec, "w_vec", n)
    out = ps.output_matrix
    c = numeraire_vector(ps, numeraire)
    M = out.T - (1.0 + r_vec)[:, np.newaxis] * ps.S.T
    bill = w_vec * ps.L
    if np.any(bill != 0):
        try:
            p_tilde = solve_linear(M, bill)
        except SingularMatrix as exc:
            raise SingularSystem(f"price system is singular: {exc}") from None
        p = _scale_to_numeraire(p_tilde, c)
        level = 1.0 / float(c @ p_tilde)
    else:
        try:
            p = _scale_to_numeraire(_null_vector(M), c)
        except SingularSystem:
            raise NoLabor("zero wage bill and a nonsingular system admit only zero prices") from None
        level = 0.0
    w = level * w_vec
    res = price_residual(ps.S, out, ps.L, p, r_vec, w)
    return VariableRatesSolution(p, r_vec, w, level, numeraire, res)
