from app.linalg.rational import Rational, format_rational, parse_rational, to_rational
from app.linalg.matrix import RatMatrix, mat_is_nilpotent, null_space, rref
from app.linalg.poly import MultiPoly, parse_linear_expr, poly_arith

__all__ = [
    "Rational",
    "format_rational",
    "parse_rational",
    "to_rational",
    "RatMatrix",
    "mat_is_nilpotent",
    "null_space",
    "rref",
    "MultiPoly",
    "parse_linear_expr",
    "poly_arith",
]
