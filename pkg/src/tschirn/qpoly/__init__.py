"""Exact multivariate polynomial algebra over the rationals."""

from .elim import (
    DegenerateInput,
    InexactDivision,
    UnsupportedDegree,
    determinant,
    discriminant,
    divide_exact,
    divides,
    linear_roots,
    poly_square_root,
    rational_roots,
    resultant,
    sylvester_matrix,
)
from .ideal import (
    BudgetExceeded,
    HilbertSeries,
    HomogeneityError,
    Ideal,
    ShapeError,
    contains,
    default_budget,
    groebner,
    hilbert_series,
    initial_monomials,
    intersect,
    is_groebner,
    jacobian_ideal,
    krull_dimension,
    monomials_of_degree,
    normal_form,
    s_polynomial,
    same_ideal,
    standard_monomial_count,
)
from .poly import MultiPoly, PolyError, grevlex_key, lex_key, parse, variables

__all__ = [
    "BudgetExceeded",
    "DegenerateInput",
    "HilbertSeries",
    "HomogeneityError",
    "Ideal",
    "InexactDivision",
    "MultiPoly",
    "PolyError",
    "ShapeError",
    "UnsupportedDegree",
    "contains",
    "default_budget",
    "determinant",
    "discriminant",
    "divide_exact",
    "divides",
    "grevlex_key",
    "groebner",
    "hilbert_series",
    "initial_monomials",
    "intersect",
    "is_groebner",
    "jacobian_ideal",
    "krull_dimension",
    "lex_key",
    "linear_roots",
    "monomials_of_degree",
    "normal_form",
    "parse",
    "poly_square_root",
    "rational_roots",
    "resultant",
    "s_polynomial",
    "same_ideal",
    "sylvester_matrix",
    "standard_monomial_count",
    "variables",
]
