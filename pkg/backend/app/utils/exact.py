"""
Exact scalars and exact linear algebra.

Scalars are ``fractions.Fraction`` end to end; matrices are handed to sympy's
``DomainMatrix`` over QQ/ZZ and the results are converted back, so no
floating point ever enters the combinatorial modules.
"""
import logging
from fractions import Fraction
from math import gcd, lcm
from typing import List, Optional, Sequence, Tuple, Union

from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

logger = logging.getLogger(__name__)

RationalLike = Union[int, Fraction, str]
RatVector = Tuple[Fraction, ...]


def to_fraction(value: RationalLike, name: str = "value") -> Fraction:
    """
    Convert an exact rational input to Fraction.

    Accepts int, Fraction and strings such as "3", "-2/5" or "0.25".
    Floats are rejected: they would silently corrupt exact results.
    """
    if isinstance(value, bool):
        raise ValueError(f"{name} must be rational, got bool")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError(f"{name} is empty")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"{name} is not a rational number: {value!r}") from e
    if isinstance(value, float):
        raise ValueError(f"{name} must be exact (int or 'a/b' string); float given: {value!r}")
    raise ValueError(f"{name} must be int, Fraction or str, got {type(value).__name__}")


def format_fraction(value: Fraction) -> str:
    """Render as "a/b", or "a" for integers"""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def to_vector(values: Sequence[RationalLike], name: str = "point") -> RatVector:
    return tuple(to_fraction(v, name) for v in values)


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), 0)


def _qq(value) -> object:
    if isinstance(value, int):
        return QQ(value)
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def qq_matrix(rows: Sequence[Sequence], ncols: int) -> DomainMatrix:
    data = [[_qq(x) for x in row] for row in rows]
    return DomainMatrix(data, (len(data), ncols), QQ)


def zz_matrix(rows: Sequence[Sequence[int]], ncols: int) -> DomainMatrix:
    data = [[ZZ(int(x)) for x in row] for row in rows]
    return DomainMatrix(data, (len(data), ncols), ZZ)


def _rows_of(dm: DomainMatrix) -> List[List[Fraction]]:
    return [
        [Fraction(int(e.p), int(e.q)) for e in dm.to_Matrix().row(i)]
        for i in range(dm.shape[0])
    ]


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return qq_matrix(rows, len(rows[0])).rank()


def rref(rows: Sequence[Sequence], ncols: int) -> Tuple[List[List[Fraction]], Tuple[int, ...]]:
    """Reduced row echelon form with zero rows dropped, plus pivot columns"""
    if not rows:
        return [], ()
    reduced, pivots = qq_matrix(rows, ncols).rref()
    pivots = tuple(pivots)
    return _rows_of(reduced)[: len(pivots)], pivots


def nullspace(rows: Sequence[Sequence], ncols: int) -> List[RatVector]:
    """Basis of {x : rows·x = 0}, read off the reduced row echelon form"""
    reduced, pivots = rref(rows, ncols)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence, ncols: int) -> Optional[RatVector]:
    """Unique solution of rows·x = rhs, or None if inconsistent or underdetermined"""
    augmented = [list(row) + [b] for row, b in zip(rows, rhs)]
    reduced, pivots = rref(augmented, ncols + 1)
    if ncols in pivots or len(pivots) < ncols:
        return None
    return tuple(row[ncols] for row in reduced)


def determinant(rows: Sequence[Sequence]) -> Fraction:
    if not rows:
        return Fraction(1)
    value = qq_matrix(rows, len(rows)).det()
    return Fraction(int(value.numerator), int(value.denominator))


def integer_determinant(rows: Sequence[Sequence[int]]) -> int:
    if not rows:
        return 1
    return int(zz_matrix(rows, len(rows)).det())


def inverse(rows: Sequence[Sequence]) -> List[List[Fraction]]:
    return _rows_of(qq_matrix(rows, len(rows)).inv())


def integral_scaling(vector: Sequence[Fraction]) -> Tuple[int, ...]:
    """Smallest positive multiple of a rational vector with integer entries"""
    values = [Fraction(x) for x in vector]
    scale = lcm(*(x.denominator for x in values)) if values else 1
    ints = [int(x * scale) for x in values]
    g = gcd(*ints) if ints else 0
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)
