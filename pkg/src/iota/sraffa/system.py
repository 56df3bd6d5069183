"""Physical production systems and their CSV format.

Layout (UTF-8, ``#`` comment lines ignored)::

    commodities,<name1>,...,<nameN>,q,L
    <name_i>,s_i1,...,s_iN,q_i,L_i     # one line per commodity
    joint_outputs                      # optional block
    <name_i>,f_i1,...,f_iN             # one line per commodity

``s_ij`` is the quantity of commodity i used by industry j, ``q_i`` the
total output of commodity i and ``L_i`` the labour employed by industry i.
In the optional joint block ``f_ij`` is the quantity of commodity i made by
industry j; its row sums must reproduce ``q``.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Literal, Sequence, TextIO

import numpy as np

from ..errors import DimensionMismatch, InvalidNumeraire, NegativeEntry, ParseError, ValidationError, ZeroOutput
from ..iot import _content_lines, _fields, _number, format_number
from ..linalg import _frozen, as_square, as_vector

FLOW_CONSISTENCY_TOL = 1e-9


@dataclass(frozen=True)
class PhysicalSystem:
    commodities: tuple[str, ...]
    S: np.ndarray
    q: np.ndarray
    L: np.ndarray
    F: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "commodities", tuple(self.commodities))
        n = len(self.commodities)
        S = as_square(self.S, "S")
        if S.shape[0] != n:
            raise DimensionMismatch(f"S is {S.shape[0]}x{S.shape[0]} but {n} commodities are named")
        object.__setattr__(self, "S", _frozen(S))
        object.__setattr__(self, "q", _frozen(as_vector(self.q, "q", n)))
        object.__setattr__(self, "L", _frozen(as_vector(self.L, "L", n)))
        if np.any(S < 0):
            raise NegativeEntry("S has negative entries")
        if np.any(self.L < 0):
            raise NegativeEntry("L has negative entries")
        for i in np.flatnonzero(self.q <= 0):
            raise ZeroOutput(self.commodities[i])
        if self.F is not None:
            F = as_square(self.F, "F")
            if F.shape[0] != n:
                raise DimensionMismatch(f"F is {F.shape[0]}x{F.shape[0]}, expected {n}x{n}")
            if np.any(F < 0):
                raise NegativeEntry("F has negative entries")
            gap = np.abs(F.sum(axis=1) - self.q) / self.q
            if gap.max() > FLOW_CONSISTENCY_TOL:
                i = int(np.argmax(gap))
                raise ValidationError(f"row sum of F for {self.commodities[i]!r} does not match q")
            object.__setattr__(self, "F", _frozen(F))

    @property
    def n(self) -> int:
        return len(self.commodities)

    @property
    def is_joint(self) -> bool:
        return self.F is not None

    @property
    def output_matrix(self) -> np.ndarray:
        """``F`` for joint systems, ``diag(q)`` otherwise."""
        return self.F if self.F is not None else np.diag(self.q)

    def as_joint(self) -> "PhysicalSystem":
        """The same system with an explicit diagonal output matrix."""
        return PhysicalSystem(self.commodities, self.S, self.q, self.L, np.diag(self.q))

    def net_product(self) -> np.ndarray:
        return self.q - self.S.sum(axis=1)


@dataclass(frozen=True)
class NumeraireSpec:
    """How the absolute price level is fixed.

    ``commodity``: ``p[index] = 1``. ``net``: the actual net product is
    worth 1. ``standard``: the standard net product is worth 1, which makes
    the wage a share of it.
    """

    kind: Literal["commodity", "net", "standard"] = "commodity"
    index: int = 0

    @classmethod
    def parse(cls, text: str, names: Sequence[str]) -> "NumeraireSpec":
        if text in ("net", "standard"):
            return cls(text)
        if text.startswith("commodity:"):
            name = text.split(":", 1)[1]
            if name not in names:
                raise InvalidNumeraire(f"unknown commodity {name!r}")
            return cls("commodity", list(names).index(name))
        raise InvalidNumeraire(f"numeraire must be commodity:<name>, net or standard, got {text!r}")

    def describe(self, names: Sequence[str]) -> str:
        if self.kind == "commodity":
            return f"commodity:{names[self.index]}"
        return self.kind


def parse_physical(source: TextIO | str) -> PhysicalSystem:
    lines = _content_lines(source)
    if not lines:
        raise ParseError(0, "empty input")
    lineno, header = lines[0]
    cells = [c.strip() for c in _fields(header)]
    if cells[0] != "commodities":
        raise ParseError(lineno, "first line must start with 'commodities'")
    names = cells[1:]
    if names[-2:] != ["q", "L"]:
        raise ParseError(lineno, "header must end with the columns q,L")
    names = names[:-2]
    if not names or any(not s for s in names) or len(set(names)) != len(names):
        raise ParseError(lineno, "commodity names must be non-empty and unique")
    n = len(names)

    def read_rows(block: list[tuple[int, str]], width: int) -> np.ndarray:
        rows = np.zeros((n, width))
        for i, (lineno, line) in enumerate(block):
            cells = _fields(line)
            if cells[0].strip() != names[i]:
                raise ParseError(lineno, f"expected row for {names[i]!r}, found {cells[0].strip()!r}")
            if len(cells) - 1 != width:
                raise ParseError(lineno, f"expected {width} values, found {len(cells) - 1}")
            rows[i] = [_number(tok.strip(), lineno) for tok in cells[1:]]
        return rows

    body = lines[1:]
    if len(body) < n:
        raise ParseError(body[-1][0] if body else lineno, f"expected {n} commodity rows")
    main = read_rows(body[:n], n + 2)
    F = None
    rest = body[n:]
    if rest:
        lineno, line = rest[0]
        if _fields(line)[0].strip() != "joint_outputs":
            raise ParseError(lineno, "expected 'joint_outputs' or end of file")
        if len(rest) != n + 1:
            raise ParseError(lineno, f"joint_outputs block must have exactly {n} rows")
        F = read_rows(rest[1:], n)
    return PhysicalSystem(names, main[:, :n], main[:, n], main[:, n + 1], F)


def write_physical(ps: PhysicalSystem, dest: TextIO | None = None) -> str:
    buf = io.StringIO()
    buf.write(",".join(["commodities", *ps.commodities, "q", "L"]) + "\n")
    for i, name in enumerate(ps.commodities):
        buf.write(",".join([name, *map(format_number, ps.S[i]), format_number(ps.q[i]), format_number(ps.L[i])]) + "\n")
    if ps.F is not None:
        buf.write("joint_outputs\n")
        for i, name in enumerate(ps.commodities):
            buf.write(",".join([name, *map(format_number, ps.F[i])]) + "\n")
    text = buf.getvalue()
    if dest is not None:
        dest.write(text)
    return text
