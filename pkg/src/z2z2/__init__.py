"""Exact-arithmetic workbench for minimal Z2xZ2-graded Lie algebras and
superalgebras."""
from .kernel import Field, GaussianRational, GradingKind, PowerSeries, parse_scalar
from .structure import (
    AlgebraConstants,
    SuperalgebraConstants,
    TableLabel,
    Z2Constants,
    apply_equivalence,
    normalize,
    table_entry,
    verify_tables,
)

__version__ = "0.1.0"

__all__ = [
    "Field", "GaussianRational", "GradingKind", "PowerSeries", "parse_scalar",
    "AlgebraConstants", "SuperalgebraConstants", "TableLabel", "Z2Constants",
    "apply_equivalence", "normalize", "table_entry", "verify_tables",
]
