import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_irreducible
from iota.errors import (
    InfeasibleRate,
    InvalidNumeraire,
    NoLabor,
    NotSelfReplacing,
    ParseError,
    ReducibleSystem,
    ReducibleSystemWarning,
    ValidationError,
)
from iota.sraffa import (
    NumeraireSpec,
    PhysicalSystem,
    classify_basics,
    max_profit_rate,
    parse_physical,
    physical_tech_matrix,
    standard_system,
    subsistence_prices,
    surplus_solve,
    wage_profit_frontier,
    write_physical,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)
S_WI = np.array([[280.0, 120.0], [12.0, 8.0]])
L_WI = np.array([0.8, 0.2])
SUBSISTENCE = PhysicalSystem(["wheat", "iron"], S_WI, [400, 20], L_WI)
SURPLUS = PhysicalSystem(["wheat", "iron"], S_WI, [575, 20], L_WI)
STANDARD = NumeraireSpec("standard")


def eigen_2x2(C: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    """Frobenius root with right and left eigenvectors from the quadratic formula."""
    tr = C[0, 0] + C[1, 1]
    det = C[0, 0] * C[1, 1] - C[0, 1] * C[1, 0]
    lam = (tr + np.sqrt(tr * tr - 4 * det)) / 2
    right = np.array([C[0, 1], lam - C[0, 0]])
    left = np.array([C[1, 0], lam - C[0, 0]])
    return lam, right / right[0], left / left[0]


def bordered_prices(ps: PhysicalSystem, r: float, c: np.ndarray) -> tuple[np.ndarray, float]:
    """Unknowns (p, w) of ``(1 + r) S' p + w L = diag(q) p`` with ``c @ p = 1``, by one dense solve."""
    n = ps.n
    M = np.zeros((n + 1, n + 1))
    M[:n, :n] = np.diag(ps.q) - (1 + r) * ps.S.T
    M[:n, n] = -ps.L
    M[n, :n] = c
    sol = np.linalg.solve(M, np.append(np.zeros(n), 1.0))
    return sol[:n], sol[n]


def random_system(rng: np.random.Generator, n: int, surplus: float = 1.3) -> PhysicalSystem:
    S = random_irreducible(rng, n) * 10
    q = S.sum(axis=1) * rng.uniform(1.05, surplus, size=n)
    return PhysicalSystem([f"c{i}" for i in range(n)], S, q, rng.uniform(0.1, 1.0, size=n))


# -- the physical system and its file format --------------------------------------------

def test_physical_system_validation():
    with pytest.raises(ValidationError):
        PhysicalSystem(["a"], [[-1]], [1], [1])
    with pytest.raises(ValidationError):
        PhysicalSystem(["a"], [[1]], [0], [1])
    with pytest.raises(ValidationError):
        PhysicalSystem(["a"], [[1]], [1], [-1])
    with pytest.raises(ValidationError):
        PhysicalSystem(["a", "b"], np.eye(2), [1, 1], [1, 1], [[1, 0], [0, 2]])


def test_physical_round_trip(data_dir):
    for name in ("wheat_iron_subsistence.csv", "wheat_iron_surplus.csv", "joint_co2.csv"):
        ps = parse_physical((data_dir / name).read_text())
        back = parse_physical(write_physical(ps))
        assert np.array_equal(back.S, ps.S) and np.array_equal(back.q, ps.q) and np.array_equal(back.L, ps.L)
        assert (back.F is None) == (ps.F is None)


@pytest.mark.parametrize(
    "text",
    [
        "",
        "goods,a,q,L\na,1,2,1\n",
        "commodities,a,L\na,1,2\n",
        "commodities,a,q,L\nb,1,2,1\n",
        "commodities,a,q,L\na,1,2\n",
        "commodities,a,q,L\na,1,2,1\noutputs\na,2\n",
        "commodities,a,q,L\na,1,2,1\njoint_outputs\n",
    ],
)
def test_physical_parse_errors(text):
    with pytest.raises(ParseError):
        parse_physical(text)


def test_numeraire_parse():
    names = ["wheat", "iron"]
    assert NumeraireSpec.parse("commodity:iron", names) == NumeraireSpec("commodity", 1)
    assert NumeraireSpec.parse("net", names).kind == "net"
    assert NumeraireSpec.parse("standard", names).describe(names) == "standard"
    for bad in ("commodity:gold", "labour", ""):
        with pytest.raises(InvalidNumeraire):
            NumeraireSpec.parse(bad, names)


# -- technology matrix and maximum profit rate -------------------------------------------

def test_physical_tech_matrix_examples():
    assert np.allclose(physical_tech_matrix(SUBSISTENCE), [[0.7, 6], [0.03, 0.4]], atol=1e-15)
    assert np.allclose(physical_tech_matrix(SURPLUS), [[280 / 575, 6], [12 / 575, 0.4]], atol=1e-15)
    assert np.allclose(physical_tech_matrix(SURPLUS), [[0.48696, 6], [0.02087, 0.4]], atol=5e-6)
    zero = PhysicalSystem(["a", "b"], np.zeros((2, 2)), [1, 2], [1, 1])
    assert not physical_tech_matrix(zero).any()


def test_max_profit_rate_examples():
    rep = max_profit_rate(SUBSISTENCE)
    assert rep.lam == pytest.approx(1.0, abs=1e-10)
    assert rep.R == pytest.approx(0.0, abs=1e-10)
    lam, _, _ = eigen_2x2(physical_tech_matrix(SURPLUS))
    assert lam == pytest.approx(0.8, abs=1e-14)
    rep = max_profit_rate(SURPLUS)
    assert rep.lam == pytest.approx(lam, abs=1e-10)
    assert rep.R == pytest.approx(0.25, abs=1e-8)
    assert rep.construction == "physical"
    half = PhysicalSystem(["a"], [[1.0]], [2.0], [1.0])
    assert max_profit_rate(half).R == 1.0


# -- subsistence prices ---------------------------------------------------------------------

def test_subsistence_wheat_iron():
    sol = subsistence_prices(SUBSISTENCE)
    assert sol.p[0] == 1.0
    assert sol.p[1] / sol.p[0] == pytest.approx(10.0, rel=1e-9)
    assert sol.residual <= 1e-9
    C = physical_tech_matrix(SUBSISTENCE)
    assert np.abs(C.T @ sol.p - sol.p).max() <= 1e-9 * sol.p.max()


def test_subsistence_single_commodity():
    sol = subsistence_prices(PhysicalSystem(["corn"], [[5.0]], [5.0], [1.0]))
    assert np.array_equal(sol.p, [1.0])


def test_subsistence_scale_invariance():
    doubled = PhysicalSystem(["wheat", "iron"], 2 * S_WI, [800, 40], L_WI)
    assert np.allclose(subsistence_prices(doubled).p, [1, 10], rtol=1e-9)


def test_subsistence_numeraires():
    p_iron = subsistence_prices(SUBSISTENCE, NumeraireSpec("commodity", 1)).p
    assert p_iron[1] == 1.0 and p_iron[0] == pytest.approx(0.1, rel=1e-9)
    with pytest.raises(InvalidNumeraire):
        subsistence_prices(SUBSISTENCE, NumeraireSpec("net"))


def test_subsistence_rejects_surplus():
    with pytest.raises(NotSelfReplacing):
        subsistence_prices(SURPLUS)


def test_subsistence_reducible_warns():
    ps = PhysicalSystem(["a", "b"], [[1.0, 1.0], [0.0, 2.0]], [2.0, 2.0], [1.0, 1.0])
    with pytest.warns(ReducibleSystemWarning):
        sol = subsistence_prices(ps)
    assert sol.warnings


def test_subsistence_is_surplus_solve_at_zero():
    ps = PhysicalSystem(["wheat", "iron"], S_WI, [400, 20], [0.0, 0.0])
    assert np.allclose(surplus_solve(ps, r=0.0).p, subsistence_prices(ps).p, rtol=1e-9)


# -- surplus prices ------------------------------------------------------------------------------

def test_surplus_at_maximum_rate():
    sol = surplus_solve(SURPLUS, r=0.25)
    _, _, left = eigen_2x2(physical_tech_matrix(SURPLUS))
    assert sol.w == 0.0
    assert np.allclose(sol.p, left, rtol=1e-9)
    assert np.allclose(sol.p, [1, 15], rtol=1e-9)


def test_surplus_zero_wage_gives_maximum_rate():
    sol = surplus_solve(SURPLUS, w=0.0)
    assert sol.r == pytest.approx(0.25, abs=1e-8)
    assert sol.r == pytest.approx(max_profit_rate(SURPLUS).R, abs=1e-8)


@pytest.mark.parametrize("r", [0.0, 0.05, 0.1, 0.2, 0.2499])
def test_surplus_matches_bordered_solve(r):
    sol = surplus_solve(SURPLUS, r=r)
    p, w = bordered_prices(SURPLUS, r, np.array([1.0, 0.0]))
    assert np.allclose(sol.p, p, rtol=1e-9)
    assert sol.w == pytest.approx(w, rel=1e-9)
    assert sol.residual <= 1e-9


def test_surplus_given_wage_inverts_given_rate():
    for r in (0.02, 0.11, 0.2):
        w = surplus_solve(SURPLUS, r=r).w
        back = surplus_solve(SURPLUS, w=w)
        assert back.r == pytest.approx(r, abs=1e-9)
        assert back.w == pytest.approx(w, rel=1e-7)


def test_surplus_numeraires_are_honoured():
    net = surplus_solve(SURPLUS, r=0.1, numeraire=NumeraireSpec("net"))
    assert net.p @ SURPLUS.net_product() == pytest.approx(1.0, rel=1e-12)
    std = surplus_solve(SURPLUS, r=0.1, numeraire=STANDARD)
    assert std.p @ standard_system(SURPLUS).standard_net_product == pytest.approx(1.0, rel=1e-12)
    iron = surplus_solve(SURPLUS, r=0.1, numeraire=NumeraireSpec("commodity", 1))
    assert iron.p[1] == 1.0


def test_surplus_errors():
    with pytest.raises(InfeasibleRate):
        surplus_solve(SURPLUS, r=0.3)
    with pytest.raises(InfeasibleRate):
        surplus_solve(SURPLUS, r=-0.01)
    with pytest.raises(InfeasibleRate):
        surplus_solve(SURPLUS, w=-1.0)
    with pytest.raises(InfeasibleRate):
        surplus_solve(SURPLUS, w=1e9)
    with pytest.raises(ValueError):
        surplus_solve(SURPLUS)
    with pytest.raises(ValueError):
        surplus_solve(SURPLUS, r=0.1, w=1.0)
    no_labour = PhysicalSystem(["wheat", "iron"], S_WI, [575, 20], [0.0, 0.0])
    with pytest.raises(NoLabor):
        surplus_solve(no_labour, r=0.1)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(min_value=2, max_value=5))
def test_zero_wage_rate_matches_eigenvalue_route(seed, n):
    ps = random_system(np.random.default_rng(seed), n)
    R = max_profit_rate(ps).R
    assert surplus_solve(ps, w=0.0).r == pytest.approx(R, abs=1e-8)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(min_value=1, max_value=5), st.floats(min_value=0.0, max_value=0.99))
def test_surplus_residual_small(seed, n, share):
    ps = random_system(np.random.default_rng(seed), n)
    sol = surplus_solve(ps, r=share * max_profit_rate(ps).R)
    assert sol.residual <= 1e-9
    assert np.all(sol.p > 0)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(min_value=2, max_value=4), st.floats(min_value=0.1, max_value=10.0), st.data())
def test_prices_invariant_under_industry_scaling(seed, n, factor, data):
    ps = random_system(np.random.default_rng(seed), n)
    j = data.draw(st.integers(min_value=0, max_value=n - 1))
    S, q, L = ps.S.copy(), ps.q.copy(), ps.L.copy()
    S[:, j] *= factor
    # scaling industry j scales its output of commodity j; q_j is the industry's output
    q[j] *= factor
    L[j] *= factor
    scaled = PhysicalSystem(ps.commodities, S, q, L)
    r = 0.5 * max_profit_rate(ps).R
    assert np.allclose(surplus_solve(scaled, r=r).p, surplus_solve(ps, r=r).p, rtol=1e-9)


# -- wage-profit frontier -------------------------------------------------------------------------

def test_frontier_endpoints_and_monotone():
    points = wage_profit_frontier(SURPLUS, 11)
    assert len(points) == 11
    assert points[0].r == 0.0 and points[-1].w == 0.0
    ws = [pt.w for pt in points]
    assert all(a > b for a, b in zip(ws, ws[1:]))
    assert ws[0] == max(ws)


def test_frontier_standard_numeraire_is_linear():
    points = wage_profit_frontier(SURPLUS, 11, STANDARD)
    R = max_profit_rate(SURPLUS).R
    assert points[0].w == pytest.approx(1.0, abs=1e-12)
    assert max(abs(pt.r - R * (1 - pt.w)) for pt in points) <= 1e-8


@settings(max_examples=25, deadline=None)
@given(seeds, st.integers(min_value=2, max_value=5))
def test_frontier_standard_linear_on_random_systems(seed, n):
    ps = random_system(np.random.default_rng(seed), n)
    points = wage_profit_frontier(ps, 6, STANDARD)
    R = max_profit_rate(ps).R
    assert max(abs(pt.r - R * (1 - pt.w)) for pt in points) <= 1e-8


# -- standard system ---------------------------------------------------------------------------------

def test_standard_system_wheat_iron():
    std = standard_system(SURPLUS)
    _, right, _ = eigen_2x2(physical_tech_matrix(SURPLUS))
    q_star = std.multipliers * SURPLUS.q
    assert np.allclose(q_star / q_star[0], right, rtol=1e-9)
    assert np.allclose(q_star / q_star[0], [1, 6 / 115], rtol=1e-9)
    assert std.R == pytest.approx(0.25, abs=1e-8)
    assert np.allclose(std.standard_net_product, 0.25 * std.means_of_production, rtol=1e-9)
    assert std.normalization == "labor"
    assert std.multipliers @ SURPLUS.L == pytest.approx(1.0, rel=1e-12)


def test_standard_system_fixed_point():
    _, right, _ = eigen_2x2(physical_tech_matrix(SURPLUS))
    q = right * 115
    C = physical_tech_matrix(SURPLUS)
    ps = PhysicalSystem(["wheat", "iron"], C * q[np.newaxis, :], q, L_WI)
    m = standard_system(ps).multipliers
    assert m[0] == pytest.approx(m[1], rel=1e-9)


def test_standard_system_subsistence():
    std = standard_system(SUBSISTENCE)
    assert std.R == pytest.approx(0.0, abs=1e-10)
    assert np.abs(std.standard_net_product).max() <= 1e-9 * std.means_of_production.max()


def test_standard_system_requires_basics():
    diagonal = PhysicalSystem(["a", "b"], np.diag([1.0, 2.0]), [2.0, 3.0], [1.0, 1.0])
    with pytest.raises(ReducibleSystem):
        standard_system(diagonal)


def test_standard_system_ignores_non_basics():
    S = np.array([[10.0, 5.0, 2.0], [1.0, 1.0, 1.0], [0.0, 0.0, 3.0]])
    ps = PhysicalSystem(["a", "b", "luxury"], S, [20.0, 4.0, 5.0], [1.0, 1.0, 1.0])
    std = standard_system(ps)
    assert std.multipliers[2] == 0.0
    basic = PhysicalSystem(["a", "b"], S[:2, :2], [20.0, 4.0], [1.0, 1.0])
    assert std.R == pytest.approx(max_profit_rate(basic).R, rel=1e-9)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(min_value=2, max_value=5))
def test_standard_proportions_property(seed, n):
    ps = random_system(np.random.default_rng(seed), n)
    std = standard_system(ps)
    assert np.all(std.multipliers > 0)
    assert np.allclose(std.standard_net_product, std.R * std.means_of_production, rtol=1e-9, atol=1e-12)


# -- basics -------------------------------------------------------------------------------------------

def test_basics_examples():
    assert classify_basics(SURPLUS).basics == {0, 1}
    part = classify_basics(PhysicalSystem(["a", "b"], [[1, 1], [0, 1]], [3, 2], [1, 1]))
    assert part.basics == {0} and part.non_basics == {1}
    part = classify_basics(PhysicalSystem(["a", "b", "c"], np.eye(3), [2, 2, 2], [1, 1, 1]))
    assert part.basics == set() and part.non_basics == {0, 1, 2}


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(min_value=1, max_value=6))
def test_basics_depend_only_on_zero_pattern(seed, n):
    rng = np.random.default_rng(seed)
    S = rng.uniform(0, 5, size=(n, n)) * (rng.uniform(size=(n, n)) < 0.5)
    q = S.sum(axis=1) + 1
    rescaled = S * rng.uniform(0.01, 100, size=(n, n))
    a = classify_basics(PhysicalSystem([f"c{i}" for i in range(n)], S, q, np.ones(n)))
    b = classify_basics(PhysicalSystem([f"c{i}" for i in range(n)], rescaled, rescaled.sum(axis=1) + 1, np.ones(n)))
    assert a == b


def test_reducible_surplus_solve_still_works():
    S = np.array([[10.0, 5.0, 2.0], [1.0, 1.0, 1.0], [0.0, 0.0, 3.0]])
    ps = PhysicalSystem(["a", "b", "luxury"], S, [20.0, 4.0, 5.0], [1.0, 1.0, 1.0])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        sol = surplus_solve(ps, r=0.1)
    assert sol.residual <= 1e-9
