"""Sraffa-style physical production systems."""

from .joint import (
    VariableRatesSolution,
    critical_rates,
    joint_surplus_solve,
    joint_tech_matrix,
    pasinetti_matrix,
    variable_rates_solve,
)
from .prices import (
    BasicsPartition,
    FrontierPoint,
    SraffaSolution,
    StandardSystem,
    classify_basics,
    max_profit_rate,
    numeraire_vector,
    physical_tech_matrix,
    rate_for_wage,
    standard_system,
    subsistence_prices,
    surplus_solve,
    wage_profit_frontier,
)
from .system import NumeraireSpec, PhysicalSystem, parse_physical, write_physical

__all__ = [
    "BasicsPartition",
    "FrontierPoint",
    "NumeraireSpec",
    "PhysicalSystem",
    "SraffaSolution",
    "StandardSystem",
    "VariableRatesSolution",
    "classify_basics",
    "critical_rates",
    "joint_surplus_solve",
    "joint_tech_matrix",
    "max_profit_rate",
    "numeraire_vector",
    "parse_physical",
    "pasinetti_matrix",
    "physical_tech_matrix",
    "rate_for_wage",
    "standard_system",
    "subsistence_prices",
    "surplus_solve",
    "variable_rates_solve",
    "wage_profit_frontier",
    "write_physical",
]
