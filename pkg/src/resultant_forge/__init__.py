"""Exact multivariate polynomial arithmetic, Sylvester resultants and the
elimination pipelines built on them."""
from .polycore import Poly, VarTable, rational
from .polyparse import format_poly, parse, parse_source
from .resultant import common_factor_oracle, resultant

__version__ = "0.1.0"

__all__ = ["Poly", "VarTable", "rational", "parse", "parse_source", "format_poly",
           "resultant", "common_factor_oracle"]
