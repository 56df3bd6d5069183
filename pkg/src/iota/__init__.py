"""Leontief input-output analysis and Sraffian price systems."""

__version__ = "0.1.0"

from .errors import IotaError, NumericalError, ValidationError
from .iot import (
    AggregationMap,
    MonetaryTable,
    SurplusReport,
    aggregate,
    closed_table,
    distribution_matrix,
    parse_iot,
    surplus_ratio,
    technical_coefficients,
    write_iot,
)
from .leontief import (
    LeontiefInverse,
    ProductivenessReport,
    hawkins_simon_check,
    impact_analysis,
    leontief_inverse,
    price_model,
    productiveness,
    productiveness_from_A,
    quantity_model,
)
from .linalg import (
    EigenResult,
    frobenius_eigen,
    invert,
    is_irreducible,
    leading_principal_minors,
    solve_linear,
)
from .similarity import (
    GdpTable,
    VerificationReport,
    build_gdp_table,
    gdp_table_from_monetary,
    monetary_physical_bridge,
    verify_gdp_table,
)
