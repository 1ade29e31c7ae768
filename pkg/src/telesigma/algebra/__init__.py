"""Exact coefficient arithmetic: lambda-polynomials and truncated series."""

from .biseries import BiSeries
from .poly import (
    LambdaPolynomial,
    LambdaRing,
    format_rational,
    grading_audit,
    lp_mul,
    set_grading_audit,
    to_rational,
)
from .tseries import TSeries

__all__ = [
    "BiSeries",
    "LambdaPolynomial",
    "LambdaRing",
    "TSeries",
    "format_rational",
    "grading_audit",
    "lp_mul",
    "set_grading_audit",
    "to_rational",
]
