"""Binary64 checks of Nijenhuis tensors and Frobenius integrability on structure fields."""

from .families import FAMILIES, StructureField, UnknownFamilyError, get_family
from .numeric import (
    DEFAULT_H,
    TOLERANCES,
    GridSpec,
    NijenhuisResult,
    SweepSummary,
    frobenius_residual,
    frobenius_residuals,
    nijenhuis_field,
    nijenhuis_numeric,
    parse_config,
    richardson_ratio,
    sweep,
)

__all__ = [
    "FAMILIES",
    "StructureField",
    "UnknownFamilyError",
    "get_family",
    "DEFAULT_H",
    "TOLERANCES",
    "GridSpec",
    "NijenhuisResult",
    "SweepSummary",
    "frobenius_residual",
    "frobenius_residuals",
    "nijenhuis_field",
    "nijenhuis_numeric",
    "parse_config",
    "richardson_ratio",
    "sweep",
]
