"""Leontief quantity and price models."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from .errors import NotProductive
from .linalg import _frozen, as_square, as_vector, frobenius_eigen, leading_principal_minors, solve_linear

# lam >= 1 - PRODUCTIVE_MARGIN is treated as not productive
PRODUCTIVE_MARGIN = 1e-12
# a leading minor is "positive" only above this fraction of its natural scale
MINOR_RTOL = 1e-12
UNIT_SNAP = 1e-10

Construction = Literal["open", "closed", "physical"]


@dataclass(frozen=True)
class LeontiefInverse:
    L: np.ndarray
    lambda_A: float

    def __post_init__(self):
        _frozen(self.L)


@dataclass(frozen=True)
class ProductivenessReport:
    lam: float
    R: float
    n: int
    construction: Construction = "open"


class HawkinsSimon(NamedTuple):
    holds: bool
    minors: np.ndarray


def _require_productive(A: np.ndarray) -> float:
    lam = frobenius_eigen(A).lam
    if lam >= 1.0 - PRODUCTIVE_MARGIN:
        raise NotProductive(lam)
    return lam


def leontief_inverse(A) -> LeontiefInverse:
    A = as_square(A, "A")
    lam = _require_productive(A)
    n = A.shape[0]
    L = solve_linear(np.eye(n) - A, np.eye(n))
    # exact result is nonnegative; clip rounding noise on structural zeros
    L[(L < 0) & (L > -1e-15)] = 0.0
    return LeontiefInverse(L, lam)


def quantity_model(A, f) -> np.ndarray:
    """Gross output needed to deliver final demand ``f``: solves ``(I - A) x = f``."""
    A = as_square(A, "A")
    f = as_vector(f, "f", A.shape[0])
    _require_productive(A)
    return solve_linear(np.eye(A.shape[0]) - A, f)


def price_model(A, v_c) -> np.ndarray:
    """Cost-push prices: solves ``p = A' p + v_c`` directly against the transpose."""
    A = as_square(A, "A")
    v_c = as_vector(v_c, "v_c", A.shape[0])
    _require_productive(A)
    return solve_linear(np.eye(A.shape[0]) - A.T, v_c)


def impact_analysis(A, delta_f) -> np.ndarray:
    return quantity_model(A, delta_f)


def hawkins_simon_check(A) -> HawkinsSimon:
    """Leading principal minors of ``I - A`` and whether all are positive.

    A minor whose magnitude is below ``MINOR_RTOL * ||block||^k`` is treated
    as zero, so a subsistence technology (``lam == 1``) reports ``False``
    despite rounding.
    """
    A = as_square(A, "A")
    M = np.eye(A.shape[0]) - A
    minors = leading_principal_minors(M)
    holds = True
    for k, minor in enumerate(minors, start=1):
        scale = max(1.0, float(np.abs(M[:k, :k]).sum(axis=1).max())) ** k
        if minor <= MINOR_RTOL * scale:
            holds = False
            break
    return HawkinsSimon(holds, minors)


def productiveness(lam: float, n: int = 1, construction: Construction = "open") -> ProductivenessReport:
    """``R = 1 / lam - 1``; infinite for a zero eigenvalue.

    An eigenvalue within ``UNIT_SNAP`` of 1 gives exactly ``R = 0``: the
    power iteration cannot resolve it any closer, and a self-replacing
    economy should not report a tiny negative rate.
    """
    lam = float(lam)
    if abs(lam - 1.0) <= UNIT_SNAP:
        R = 0.0
    else:
        R = np.inf if lam == 0 else 1.0 / lam - 1.0
    return ProductivenessReport(lam, R, n, construction)


def productiveness_from_A(A, construction: Construction = "open") -> ProductivenessReport:
    A = as_square(A, "A")
    return productiveness(frobenius_eigen(A).lam, A.shape[0], construction)
