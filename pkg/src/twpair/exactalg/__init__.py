"""Exact coefficient rings and ring-generic linear algebra."""

from .domains import GF, QQ, ZZ, BaseDomain, parse_domain
from .linalg import (
    FlatKernel,
    associates,
    divides,
    elementary_divisors,
    flat_kernel,
    flat_rank,
    flatten_matrix,
    kernel_basis,
    laurent_divmod,
    normalize_unit,
    smith_normal_form,
    span_rank,
)
from .matrix import Matrix, berkowitz_adjugate, charpoly
from .parser import PolySyntaxError, parse_poly
from .ring import NotInvertible, Ring, RingElem, UnsupportedRing, Variable, laurent_ring


def involute(x):
    """Apply the ring involution to an element or a matrix."""
    return x.involute()


def det(m: Matrix):
    return m.det()


def adjugate(m: Matrix) -> Matrix:
    return m.adjugate()


__all__ = [
    "BaseDomain", "ZZ", "QQ", "GF", "parse_domain",
    "Ring", "RingElem", "Variable", "laurent_ring", "UnsupportedRing", "NotInvertible",
    "Matrix", "charpoly", "berkowitz_adjugate", "det", "adjugate", "involute",
    "parse_poly", "PolySyntaxError",
    "kernel_basis", "flat_kernel", "FlatKernel", "flat_rank", "span_rank", "flatten_matrix",
    "smith_normal_form", "elementary_divisors", "laurent_divmod", "divides",
    "normalize_unit", "associates",
]
