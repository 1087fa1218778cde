"""Flat sections of integrable connections over truncated power series rings."""

from ._rational import BACKEND
from .cartier import (
    FlatFrame,
    InconsistencyError,
    IndependenceCertificate,
    flat_basis,
    idempotence_check,
    independence_certificate,
    kernel_check,
    nakayama_expand,
    project,
    project_scalar_rule_check,
    trivialize,
)
from .connection import (
    Connection,
    ModuleVector,
    NonIntegrableError,
    SeriesMatrix,
    apply_D,
    apply_DJ,
    apply_divided_D,
    curvature,
)
from .parser import ParseError, format_series, parse_series
from .series import DimensionMismatch, PrecisionError, TruncatedSeries

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Connection",
    "DimensionMismatch",
    "FlatFrame",
    "InconsistencyError",
    "IndependenceCertificate",
    "ModuleVector",
    "NonIntegrableError",
    "ParseError",
    "PrecisionError",
    "SeriesMatrix",
    "TruncatedSeries",
    "apply_D",
    "apply_DJ",
    "apply_divided_D",
    "curvature",
    "flat_basis",
    "format_series",
    "idempotence_check",
    "independence_certificate",
    "kernel_check",
    "nakayama_expand",
    "parse_series",
    "project",
    "project_scalar_rule_check",
    "trivialize",
]
