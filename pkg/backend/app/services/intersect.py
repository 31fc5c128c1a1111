"""
Monge-Ampere measures of tropical polynomials, mixed measures by
polarization, stable intersection numbers and their Bernstein counterpart.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import factorial
from typing import Dict, Sequence, Tuple

from app.exceptions import IntersectionError
from app.services.complexes import WeightedComplex
from app.services.lattice import minor
from app.services.polyhedra import (
    Polyhedron,
    direction_lattice,
    from_generators,
    in_relative_interior,
    intersection,
    minkowski_sum,
    volume,
)
from app.services.troppoly import (
    TropicalPolynomial,
    newton_polytope,
    tropical_product,
    vertices,
)
from app.utils.exact import RatVector, to_vector

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite sum of point masses; points distinct, masses nonzero"""

    atoms: Tuple[Tuple[RatVector, Fraction], ...] = ()

    @classmethod
    def from_masses(cls, masses: Dict[RatVector, Fraction]) -> "AtomicMeasure":
        return cls(tuple(sorted((x, Fraction(m)) for x, m in masses.items() if m != 0)))

    @property
    def total_mass(self) -> Fraction:
        return sum((m for _, m in self.atoms), Fraction(0))

    def shift(self, a: Sequence) -> "AtomicMeasure":
        a = to_vector(a, "shift")
        return AtomicMeasure.from_masses(
            {tuple(x + y for x, y in zip(point, a)): m for point, m in self.atoms}
        )

    def combine(self, other: "AtomicMeasure", factor=1) -> "AtomicMeasure":
        """self + factor * other"""
        masses = dict(self.atoms)
        for point, m in other.atoms:
            masses[point] = masses.get(point, Fraction(0)) + Fraction(factor) * m
        return AtomicMeasure.from_masses(masses)

    def scaled(self, factor) -> "AtomicMeasure":
        return AtomicMeasure.from_masses({x: Fraction(factor) * m for x, m in self.atoms})


def monge_ampere(p: TropicalPolynomial) -> AtomicMeasure:
    """Dirac mass at every vertex of the corner locus, weighted by the volume of its dual cell"""
    if newton_polytope(p).dim < p.n:
        return AtomicMeasure()
    masses = {x: volume(from_generators(list(cell), ambient=p.n)) for x, cell in vertices(p)}
    return AtomicMeasure.from_masses(masses)


def _check_system(ps: Sequence[TropicalPolynomial]) -> int:
    if not ps:
        raise IntersectionError("no polynomials given")
    n = ps[0].n
    if any(p.n != n for p in ps):
        raise IntersectionError("polynomials in different numbers of variables")
    if len(ps) != n:
        raise IntersectionError(f"{len(ps)} polynomials given in dimension {n}; need exactly {n}")
    return n


def mixed_monge_ampere(ps: Sequence[TropicalPolynomial]) -> AtomicMeasure:
    """
    Polarization of the Monge-Ampere operator:
    (1/n!) * sum over nonempty S of (-1)^(n-|S|) * MA(product of p_i, i in S).
    Normalized so that the diagonal gives MA(p) back.
    """
    n = _check_system(ps)
    result = AtomicMeasure()
    for size in range(1, n + 1):
        sign = (-1) ** (n - size)
        for subset in combinations(ps, size):
            result = result.combine(monge_ampere(reduce(tropical_product, subset)), sign)
    return result.scaled(Fraction(1, factorial(n)))


def stable_intersection_number(ps: Sequence[TropicalPolynomial]) -> Fraction:
    n = _check_system(ps)
    count = factorial(n) * mixed_monge_ampere(ps).total_mass
    logger.info("Stable intersection number computed", extra={"count": count})
    return count


def _edge_direction(P: Polyhedron) -> Tuple[int, ...]:
    (v,) = direction_lattice(P).vectors
    return v


def transversal_points(C1: WeightedComplex, C2: WeightedComplex) -> AtomicMeasure:
    """Crossings of two plane tropical curves with multiplicity m1 * m2 * |det(v1, v2)|"""
    for C in (C1, C2):
        if C.ambient != 2 or C.dim != 1:
            raise IntersectionError("transversal intersection is defined for plane curves only")

    masses: Dict[RatVector, Fraction] = {}
    for c1 in C1.cells:
        for c2 in C2.cells:
            meet = intersection(c1.polyhedron, c2.polyhedron)
            if meet is None:
                continue
            if meet.dim > 0:
                raise IntersectionError("edges overlap; perturb inputs")
            (x,) = meet.vertices
            if not (
                in_relative_interior(c1.polyhedron, x) and in_relative_interior(c2.polyhedron, x)
            ):
                raise IntersectionError("curves cross at a vertex; perturb inputs")
            det = minor([_edge_direction(c1.polyhedron), _edge_direction(c2.polyhedron)], (1, 2))
            masses[x] = masses.get(x, Fraction(0)) + c1.weight * c2.weight * abs(det)
    return AtomicMeasure.from_masses(masses)


def mixed_volume(polytopes: Sequence[Polyhedron]) -> Fraction:
    """Mixed volume normalized so that MV(P, ..., P) = Vol(P)"""
    if not polytopes:
        raise IntersectionError("no polytopes given")
    n = polytopes[0].ambient
    if len(polytopes) != n:
        raise IntersectionError(f"{len(polytopes)} polytopes given in dimension {n}; need exactly {n}")
    total = Fraction(0)
    for size in range(1, n + 1):
        sign = (-1) ** (n - size)
        for subset in combinations(polytopes, size):
            total += sign * volume(reduce(minkowski_sum, subset))
    return total / factorial(n)


def bernstein_number(ps: Sequence[TropicalPolynomial]) -> Fraction:
    """n! times the mixed volume of the Newton polytopes"""
    n = _check_system(ps)
    return factorial(n) * mixed_volume([newton_polytope(p) for p in ps])


def intersection_report(ps: Sequence[TropicalPolynomial]) -> Dict[str, object]:
    """
    Returns:
        {
            "measure": AtomicMeasure (mixed Monge-Ampere),
            "stable_intersection_number": Fraction,
            "bernstein_number": Fraction,
        }
    """
    measure = mixed_monge_ampere(ps)
    n = len(ps)
    return {
        "measure": measure,
        "stable_intersection_number": factorial(n) * measure.total_mass,
        "bernstein_number": bernstein_number(ps),
    }
