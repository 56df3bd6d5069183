"""Monetary input-output tables.

A table holds inter-industry flows ``Z``, final demand ``f``, value added
``v`` and total output ``x`` and must satisfy both accounting identities::

    x_i = sum_j Z[i, j] + f_i        (row / sales side)
    x_j = sum_i Z[i, j] + v_j        (column / outlay side)

IOT-CSV layout (UTF-8, ``#`` comment lines ignored)::

    sectors,<name1>,...,<nameN>
    <name_i>,z_i1,...,z_iN,f_i            # one line per sector
    value_added,v_1,...,v_N,
    total_output,x_1,...,x_N,             # optional
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import (
    BalanceViolation,
    DimensionMismatch,
    EmptyGroup,
    NegativeFlow,
    ParseError,
    ValidationError,
    ZeroCapital,
    ZeroOutput,
)
from .linalg import _frozen, as_square, as_vector

DEFAULT_BALANCE_TOL = 1e-6


@dataclass(frozen=True)
class MonetaryTable:
    sectors: tuple[str, ...]
    Z: np.ndarray
    f: np.ndarray
    v: np.ndarray
    x: np.ndarray
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "sectors", tuple(self.sectors))
        n = len(self.sectors)
        Z = as_square(self.Z, "Z")
        if Z.shape[0] != n:
            raise DimensionMismatch(f"Z is {Z.shape[0]}x{Z.shape[0]} but {n} sectors are named")
        object.__setattr__(self, "Z", _frozen(Z))
        for name in ("f", "v", "x"):
            object.__setattr__(self, name, _frozen(as_vector(getattr(self, name), name, n)))
        if np.any(self.Z < 0):
            i, j = np.argwhere(self.Z < 0)[0]
            raise NegativeFlow(f"Z[{self.sectors[i]!r}][{self.sectors[j]!r}] = {self.Z[i, j]!r}")
        for j in np.flatnonzero(self.x <= 0):
            raise ZeroOutput(self.sectors[j])

    @property
    def n(self) -> int:
        return len(self.sectors)

    @classmethod
    def from_flows(cls, sectors: Sequence[str], Z, f, v, x=None, tol: float = DEFAULT_BALANCE_TOL) -> "MonetaryTable":
        """Build and balance-check a table; ``x`` is derived from the rows when omitted."""
        Z = np.asarray(Z, dtype=float)
        f = np.asarray(f, dtype=float)
        notes: list[str] = []
        derived = Z.sum(axis=1) + f if Z.ndim == 2 and Z.shape[0] == f.shape[0] else None
        if x is None:
            if derived is None:
                raise DimensionMismatch("Z and f have inconsistent shapes")
            x = derived
        else:
            x = np.asarray(x, dtype=float)
            if derived is not None and derived.shape == x.shape and np.any(derived != x):
                gap = float(np.max(np.abs(derived - x) / np.abs(x)))
                if gap <= tol:
                    notes.append(f"declared total output kept; max relative gap to row sums {gap:.3e}")
        table = cls(sectors, Z, f, v, x, tuple(notes))
        table.check_balance(tol)
        return table

    def check_balance(self, tol: float = DEFAULT_BALANCE_TOL) -> None:
        row_gap = np.abs(self.Z.sum(axis=1) + self.f - self.x) / self.x
        col_gap = np.abs(self.Z.sum(axis=0) + self.v - self.x) / self.x
        for gaps, what in ((row_gap, "row balance"), (col_gap, "column balance")):
            worst = int(np.argmax(gaps))
            if gaps[worst] > tol:
                raise BalanceViolation(self.sectors[worst], float(gaps[worst]), what)
        total_gap = abs(self.f.sum() - self.v.sum()) / self.x.sum()
        if total_gap > tol:
            raise BalanceViolation("<total>", float(total_gap), "final demand = value added")


def _fields(line: str) -> list[str]:
    return next(csv.reader([line]))


def _number(token: str, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(lineno, f"not a number: {token!r}") from None
    if not np.isfinite(value):
        raise ParseError(lineno, f"non-finite number: {token!r}")
    return value


def _content_lines(source: TextIO | str) -> list[tuple[int, str]]:
    text = source if isinstance(source, str) else source.read()
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if stripped and not stripped.startswith("#"):
            out.append((lineno, stripped))
    return out


def _numeric_tail(cells: list[str], count: int, lineno: int, allow_trailing_blank: bool) -> list[float]:
    values = cells[1:]
    if allow_trailing_blank and len(values) == count + 1 and values[-1].strip() == "":
        values = values[:-1]
    if len(values) != count:
        raise ParseError(lineno, f"expected {count} values, found {len(values)}")
    return [_number(tok.strip(), lineno) for tok in values]


def parse_iot(source: TextIO | str, tol: float = DEFAULT_BALANCE_TOL) -> MonetaryTable:
    """Read a table in IOT-CSV format and check its accounting identities."""
    lines = _content_lines(source)
    if not lines:
        raise ParseError(0, "empty input")
    lineno, header = lines[0]
    cells = _fields(header)
    if cells[0].strip() != "sectors":
        raise ParseError(lineno, "first line must start with 'sectors'")
    sectors = [c.strip() for c in cells[1:]]
    if not sectors or any(not s for s in sectors):
        raise ParseError(lineno, "empty sector name")
    if len(set(sectors)) != len(sectors):
        raise ParseError(lineno, "duplicate sector names")
    n = len(sectors)

    if len(lines) < n + 2:
        raise ParseError(lines[-1][0], f"expected {n} flow rows and a value_added line")
    Z = np.zeros((n, n))
    f = np.zeros(n)
    for i in range(n):
        lineno, line = lines[1 + i]
        cells = _fields(line)
        if cells[0].strip() != sectors[i]:
            raise ParseError(lineno, f"expected row for {sectors[i]!r}, found {cells[0].strip()!r}")
        row = _numeric_tail(cells, n + 1, lineno, allow_trailing_blank=False)
        Z[i] = row[:n]
        f[i] = row[n]

    lineno, line = lines[n + 1]
    cells = _fields(line)
    if cells[0].strip() != "value_added":
        raise ParseError(lineno, "expected 'value_added' line")
    v = np.array(_numeric_tail(cells, n, lineno, allow_trailing_blank=True))

    x = None
    rest = lines[n + 2:]
    if rest:
        lineno, line = rest[0]
        cells = _fields(line)
        if cells[0].strip() != "total_output":
            raise ParseError(lineno, f"unexpected line {cells[0].strip()!r}")
        x = np.array(_numeric_tail(cells, n, lineno, allow_trailing_blank=True))
        if len(rest) > 1:
            raise ParseError(rest[1][0], "unexpected content after total_output")
    return MonetaryTable.from_flows(sectors, Z, f, v, x, tol=tol)


def format_number(value: float) -> str:
    """Shortest text that parses back to exactly ``value``."""
    value = float(value)
    if value.is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def write_iot(table: MonetaryTable, dest: TextIO | None = None, include_output: bool = True) -> str:
    """Serialise ``table`` to IOT-CSV; parsing the result reproduces it bit for bit."""
    buf = io.StringIO()
    buf.write(",".join(["sectors", *table.sectors]) + "\n")
    for i, name in enumerate(table.sectors):
        buf.write(",".join([name, *map(format_number, table.Z[i]), format_number(table.f[i])]) + "\n")
    buf.write(",".join(["value_added", *map(format_number, table.v)]) + ",\n")
    if include_output:
        buf.write(",".join(["total_output", *map(format_number, table.x)]) + ",\n")
    text = buf.getvalue()
    if dest is not None:
        dest.write(text)
    return text


def technical_coefficients(t: MonetaryTable) -> np.ndarray:
    """``A = Z diag(x)^-1``: input from sector i per unit of sector j's output."""
    if np.any(t.x == 0):
        raise ZeroOutput(t.sectors[int(np.flatnonzero(t.x == 0)[0])])
    return t.Z / t.x[np.newaxis, :]


def distribution_matrix(t: MonetaryTable) -> np.ndarray:
    """``D = diag(x)^-1 Z``: share of sector i's output sold to sector j.

    Rows sum to ``(x - f) / x``, hence to exactly 1 when there is no final demand.
    """
    if np.any(t.x == 0):
        raise ZeroOutput(t.sectors[int(np.flatnonzero(t.x == 0)[0])])
    return t.Z / t.x[:, np.newaxis]


def closed_table(t: MonetaryTable, household: str = "households") -> MonetaryTable:
    """Close the table with respect to households.

    Appends a household sector that sells value added (its row is ``v``),
    buys final demand (its column is ``f``) and produces ``sum(f)``.
    The result has no final demand and no value added of its own.
    """
    n = t.n
    Z = np.zeros((n + 1, n + 1))
    Z[:n, :n] = t.Z
    Z[:n, n] = t.f
    Z[n, :n] = t.v
    x = np.append(t.x, t.f.sum())
    return MonetaryTable((*t.sectors, household), Z, np.zeros(n + 1), np.zeros(n + 1), x, t.notes)


@dataclass(frozen=True)
class AggregationMap:
    assignment: tuple[int, ...]
    group_names: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(int(g) for g in self.assignment))
        object.__setattr__(self, "group_names", tuple(self.group_names))
        k = len(self.group_names)
        if any(g < 0 or g >= k for g in self.assignment):
            raise ValidationError("assignment refers to a group that does not exist")
        used = set(self.assignment)
        for g, name in enumerate(self.group_names):
            if g not in used:
                raise EmptyGroup(f"group {name!r} has no member sectors")

    @classmethod
    def from_pairs(cls, sectors: Sequence[str], pairs: Iterable[tuple[str, str]]) -> "AggregationMap":
        """Build from ``(source_sector, group_name)`` pairs; groups keep first-seen order."""
        index = {name: i for i, name in enumerate(sectors)}
        assignment: list[int | None] = [None] * len(sectors)
        groups: dict[str, int] = {}
        for source, group in pairs:
            if source not in index:
                raise ValidationError(f"unknown sector {source!r} in aggregation map")
            i = index[source]
            if assignment[i] is not None:
                raise ValidationError(f"sector {source!r} assigned twice")
            assignment[i] = groups.setdefault(group, len(groups))
        missing = [sectors[i] for i, g in enumerate(assignment) if g is None]
        if missing:
            raise ValidationError(f"sectors without a group: {', '.join(missing)}")
        return cls(tuple(assignment), tuple(groups))

    def indicator(self) -> np.ndarray:
        """Group-by-sector 0/1 matrix."""
        P = np.zeros((len(self.group_names), len(self.assignment)))
        P[list(self.assignment), range(len(self.assignment))] = 1.0
        return P


def aggregate(t: MonetaryTable, m: AggregationMap) -> MonetaryTable:
    if len(m.assignment) != t.n:
        raise DimensionMismatch(f"map covers {len(m.assignment)} sectors, table has {t.n}")
    P = m.indicator()
    return MonetaryTable(m.group_names, P @ t.Z @ P.T, P @ t.f, P @ t.v, P @ t.x, t.notes)


@dataclass(frozen=True)
class SurplusReport:
    Y: float
    K: float
    ratio: float


def surplus_ratio(t: MonetaryTable) -> SurplusReport:
    """GDP over circulating capital: ``sum(v) / sum(Z)``."""
    Y = float(t.v.sum())
    K = float(t.Z.sum())
    if K == 0:
        raise ZeroCapital("table has no intermediate flows")
    return SurplusReport(Y, K, Y / K)
