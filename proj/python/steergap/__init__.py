"""Gap function of the steering inequality for two-qubit states."""

from ._core import (
    AnnealConfig,
    Direction,
    GapResult,
    LhsEnsemble,
    Quadrature,
    TwoQubitState,
    __version__,
    capacity_support,
    check_direction,
    gap,
    gap_pvm_analytic,
    load_lebedev,
    minimal_requirement_residual,
    normalize_direction,
    product_rule,
    quadrature_from_spec,
    werner,
)

__all__ = [
    "AnnealConfig",
    "Direction",
    "GapResult",
    "LhsEnsemble",
    "Quadrature",
    "TwoQubitState",
    "__version__",
    "capacity_support",
    "check_direction",
    "gap",
    "gap_pvm_analytic",
    "load_lebedev",
    "minimal_requirement_residual",
    "normalize_direction",
    "product_rule",
    "quadrature_from_spec",
    "werner",
]
