"""
Binomial equations of toric sets and their projective degrees.

Phases are kept as exact rational fractions of a full turn: a phase q
stands for the unit-modulus constant exp(2*pi*i*q).
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from app.exceptions import ToricError
from app.services.complexes import WeightedComplex
from app.services.lattice import (
    IntVector,
    LatticeBasis,
    columns_of,
    complete_to_unimodular,
    is_saturated,
    kernel_lattice,
)
from app.services.polyhedra import direction_lattice, relative_interior_point
from app.utils.exact import RatVector, dot, format_fraction, to_vector

logger = logging.getLogger(__name__)


def split_exponent(xi: Sequence[int]) -> Tuple[IntVector, IntVector]:
    """xi = plus - minus with nonnegative parts of disjoint support"""
    plus = tuple(max(int(x), 0) for x in xi)
    minus = tuple(max(-int(x), 0) for x in xi)
    return plus, minus


def _monomial(exponent: Sequence[int]) -> str:
    factors = [
        f"z{i + 1}" if e == 1 else f"z{i + 1}^{e}" for i, e in enumerate(exponent) if e
    ]
    return "*".join(factors) or "1"


@dataclass(frozen=True)
class Binomial:
    """z^plus - c * z^minus with c = exp(modulus + 2*pi*i*phase)"""

    plus: IntVector
    minus: IntVector
    phase: Fraction = Fraction(0)
    modulus: Optional[Fraction] = None

    @classmethod
    def from_exponent(cls, xi: Sequence[int], phase=0, modulus=None) -> "Binomial":
        plus, minus = split_exponent(xi)
        return cls(plus, minus, Fraction(phase) % 1, modulus)

    @property
    def exponent(self) -> IntVector:
        return tuple(a - b for a, b in zip(self.plus, self.minus))

    @property
    def degree(self) -> int:
        return max(sum(self.plus), sum(self.minus))

    def __str__(self) -> str:
        parts = []
        if self.modulus:
            parts.append(format_fraction(self.modulus))
        if self.phase:
            parts.append(f"2*pi*i*{format_fraction(self.phase)}")
        constant = f"exp({' + '.join(parts)})*" if parts else ""
        return f"{_monomial(self.plus)} - {constant}{_monomial(self.minus)}"


@dataclass(frozen=True)
class BinomialSystem:
    ambient: int
    binomials: Tuple[Binomial, ...]

    def __len__(self) -> int:
        return len(self.binomials)


def binomial_system(
    B: Union[LatticeBasis, Sequence[Sequence[int]]],
    phases: Optional[Sequence] = None,
    base: Optional[Sequence] = None,
    ambient: Optional[int] = None,
) -> BinomialSystem:
    """
    One binomial per generator xi of Ker B^T over Z. The completion columns
    U of B carry the phase angles: phi = U * theta, and the phase of the
    binomial for xi is <xi, phi> mod 1. With a base point a the real
    modulus exponent <xi, a> is recorded as well.

    Args:
        B: saturated basis of the lattice, as vectors or a LatticeBasis
        phases: angles theta, one per completion column
        base: real point a for the moduli
        ambient: dimension n when B is an empty list of vectors

    Returns:
        BinomialSystem with one binomial per kernel generator
    """
    if isinstance(B, LatticeBasis):
        n, vectors = B.ambient, [tuple(v) for v in B.vectors]
    else:
        vectors = [tuple(int(x) for x in v) for v in B]
        n = ambient if ambient is not None else (len(vectors[0]) if vectors else None)
        if n is None:
            raise ToricError("ambient dimension of an empty basis is unknown")
    if not is_saturated(vectors, n):
        raise ToricError("basis is not saturated")

    D = complete_to_unimodular(vectors, n)
    completion = columns_of(D)[len(vectors):]
    theta = to_vector(phases, "phase") if phases is not None else (Fraction(0),) * len(completion)
    if len(theta) != len(completion):
        raise ToricError(f"{len(theta)} phases given for {len(completion)} completion columns")
    phi = tuple(
        sum((t * u[i] for t, u in zip(theta, completion)), Fraction(0)) for i in range(n)
    )
    base = to_vector(base, "base point") if base is not None else None
    if base is not None and len(base) != n:
        raise ToricError(f"base point of length {len(base)} in ambient dimension {n}")

    binomials = []
    for xi in kernel_lattice(vectors, n).vectors:
        modulus = dot(xi, base) if base is not None else None
        binomials.append(Binomial.from_exponent(xi, dot(xi, phi), modulus))
    logger.debug("Binomial system built", extra={"ambient": n, "binomials": len(binomials)})
    return BinomialSystem(n, tuple(binomials))


def projective_degree(s: Union[Binomial, BinomialSystem]) -> int:
    """Degree of the closure in projective space: max of the two monomial degrees"""
    if isinstance(s, BinomialSystem):
        if len(s) != 1:
            raise ToricError(f"projective degree needs exactly one binomial, got {len(s)}")
        (s,) = s.binomials
    return s.degree


def cell_binomials(C: WeightedComplex) -> List[Tuple[int, BinomialSystem]]:
    """Toric system of every cell's affine span, based at a relative interior point"""
    systems = []
    for index, cell in enumerate(C.cells):
        P = cell.polyhedron
        base: RatVector = relative_interior_point(P)
        systems.append((index, binomial_system(direction_lattice(P), base=base)))
    return systems
