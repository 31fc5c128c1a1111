"""
Tropical polynomials x -> max{c_a + <a, x>} with rational coefficients, their
corner loci and dual subdivisions.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

from app.config import get_settings
from app.exceptions import PolynomialError
from app.services.complexes import WeightedComplex, build_complex
from app.services.lattice import IntVector
from app.services.polyhedra import (
    ConstraintKind,
    Halfspace,
    Polyhedron,
    from_generators,
    from_hrep,
    relative_interior_point,
)
from app.utils.exact import RatVector, dot, nullspace, rank, solve, to_fraction, to_vector

logger = logging.getLogger(__name__)

Terms = Union[Mapping[Sequence[int], object], Iterable[Tuple[Sequence[int], object]]]


@dataclass(frozen=True)
class TropicalPolynomial:
    n: int
    terms: Tuple[Tuple[IntVector, Fraction], ...]

    @classmethod
    def from_terms(cls, n: int, terms: Terms) -> "TropicalPolynomial":
        """Validate and sort terms given as {exponent: coefficient} or (exponent, coefficient) pairs"""
        items = list(terms.items()) if isinstance(terms, Mapping) else list(terms)
        if n < 1:
            raise PolynomialError("ambient dimension must be positive")
        if not items:
            raise PolynomialError("a tropical polynomial needs at least one term")
        seen: Dict[IntVector, Fraction] = {}
        for exponent, coefficient in items:
            alpha = tuple(int(a) for a in exponent)
            if len(alpha) != n:
                raise PolynomialError(f"exponent {alpha} does not have length {n}")
            if alpha in seen:
                raise PolynomialError(f"exponent {alpha} listed twice")
            try:
                seen[alpha] = to_fraction(coefficient, "coefficient")
            except ValueError as e:
                raise PolynomialError(str(e)) from e
        return cls(n, tuple(sorted(seen.items())))

    @property
    def exponents(self) -> Tuple[IntVector, ...]:
        return tuple(alpha for alpha, _ in self.terms)

    def coefficient(self, alpha: Sequence[int]) -> Fraction:
        return dict(self.terms)[tuple(alpha)]

    def __str__(self) -> str:
        parts = []
        for alpha, c in self.terms:
            linear = " + ".join(f"{a}*x{i + 1}" for i, a in enumerate(alpha) if a)
            parts.append(f"{c} + {linear}" if linear else str(c))
        return "max{" + ", ".join(parts) + "}"


@dataclass(frozen=True)
class DualSubdivision:
    """Cells of the regular subdivision of the Newton polytope, as exponent sets"""

    cells: Tuple[Tuple[IntVector, ...], ...]


def evaluate(p: TropicalPolynomial, x: Sequence) -> Tuple[Fraction, Tuple[IntVector, ...]]:
    """Value max{c_a + <a, x>} and every maximizing exponent"""
    x = to_vector(x, "point")
    if len(x) != p.n:
        raise PolynomialError(f"point of length {len(x)} for a polynomial in {p.n} variables")
    values = [(c + dot(alpha, x), alpha) for alpha, c in p.terms]
    best = max(v for v, _ in values)
    return best, tuple(alpha for v, alpha in values if v == best)


def tropical_sum(p: TropicalPolynomial, q: TropicalPolynomial) -> TropicalPolynomial:
    """p (+) q = max(p, q)"""
    if p.n != q.n:
        raise PolynomialError("polynomials in different numbers of variables")
    merged = dict(p.terms)
    for alpha, c in q.terms:
        merged[alpha] = max(c, merged.get(alpha, c))
    return TropicalPolynomial.from_terms(p.n, merged)


def tropical_product(p: TropicalPolynomial, q: TropicalPolynomial) -> TropicalPolynomial:
    """p (.) q = p + q, so the terms are sums of one term of each factor"""
    if p.n != q.n:
        raise PolynomialError("polynomials in different numbers of variables")
    product: Dict[IntVector, Fraction] = {}
    for alpha, a in p.terms:
        for beta, b in q.terms:
            gamma = tuple(x + y for x, y in zip(alpha, beta))
            product[gamma] = max(a + b, product.get(gamma, a + b))
    return TropicalPolynomial.from_terms(p.n, product)


def translate(p: TropicalPolynomial, a: Sequence) -> TropicalPolynomial:
    """x -> p(x - a)"""
    a = to_vector(a, "translation")
    return TropicalPolynomial.from_terms(p.n, {alpha: c - dot(alpha, a) for alpha, c in p.terms})


def newton_polytope(p: TropicalPolynomial) -> Polyhedron:
    return from_generators(list(p.exponents), ambient=p.n)


def _check_size(p: TropicalPolynomial) -> None:
    limit = get_settings().max_enumeration_terms
    if len(p.terms) > limit:
        raise PolynomialError(
            f"{len(p.terms)} terms exceed the enumeration limit of {limit}"
        )


def vertices(p: TropicalPolynomial) -> List[Tuple[RatVector, Tuple[IntVector, ...]]]:
    """
    Minimal cells of the domain decomposition of p, with their argmax sets.

    When the Newton polytope is full-dimensional these are the vertices of
    the corner locus, each dual to a maximal cell of the subdivision.
    Otherwise points are taken in the orthogonal complement of the lineality.
    """
    _check_size(p)
    exponents = p.exponents
    coefficients = dict(p.terms)
    first = exponents[0]
    differences = [[a - b for a, b in zip(alpha, first)] for alpha in exponents[1:]]
    d = rank(differences) if differences else 0
    # pins x inside the complement of the lineality space
    section = [list(u) for u in nullspace(differences, p.n)] if differences else [
        [Fraction(int(i == j)) for j in range(p.n)] for i in range(p.n)
    ]

    found: Dict[RatVector, Tuple[IntVector, ...]] = {}
    for subset in combinations(exponents, d + 1):
        alpha0 = subset[0]
        rows = [[a - b for a, b in zip(beta, alpha0)] for beta in subset[1:]]
        if rows and rank(rows) != d:
            continue
        rhs = [coefficients[alpha0] - coefficients[beta] for beta in subset[1:]]
        x = solve(rows + section, rhs + [Fraction(0)] * len(section), p.n)
        if x is None or x in found:
            continue
        _, argmax = evaluate(p, x)
        if set(subset) <= set(argmax):
            found[x] = argmax
    return sorted(found.items())


def dual_subdivision(p: TropicalPolynomial) -> DualSubdivision:
    """Maximal cells of the subdivision induced by lifting each exponent to its coefficient"""
    cells = sorted({tuple(sorted(argmax)) for _, argmax in vertices(p)})
    return DualSubdivision(tuple(cells))


def lattice_length(points: Sequence[IntVector]) -> int:
    """Lattice length of the segment spanned by collinear integer points"""
    best = 0
    for a, b in combinations(points, 2):
        best = max(best, gcd(*(x - y for x, y in zip(a, b))))
    return best


def _cell_order(P: Polyhedron):
    return (P.vertices, P.rays, P.lineality)


def hypersurface(p: TropicalPolynomial) -> WeightedComplex:
    """
    Corner locus of p, weighted by lattice lengths of the dual edges.
    Each top cell is the region where one pair of terms ties for the maximum.

    Args:
        p: tropical polynomial with at least two terms

    Returns:
        Effective (n-1)-dimensional WeightedComplex, balanced at every facet
    """
    if len(p.terms) < 2:
        raise PolynomialError("affine function; empty hypersurface")
    _check_size(p)

    cells: Dict[tuple, Tuple[Polyhedron, int]] = {}
    for (alpha, a), (beta, b) in combinations(p.terms, 2):
        constraints = [
            Halfspace.make(
                [x - y for x, y in zip(alpha, beta)], b - a, ConstraintKind.EQUATION
            )
        ]
        for gamma, c in p.terms:
            if gamma in (alpha, beta):
                continue
            constraints.append(Halfspace.make([x - y for x, y in zip(alpha, gamma)], c - a))
        region = from_hrep(constraints, p.n)
        if region is None or region.dim != p.n - 1 or region.key in cells:
            continue
        _, argmax = evaluate(p, relative_interior_point(region))
        cells[region.key] = (region, lattice_length(argmax))

    if not cells:
        raise PolynomialError("affine function; empty hypersurface")
    ordered = sorted(cells.values(), key=lambda cell: _cell_order(cell[0]))
    logger.info("Corner locus computed", extra={"terms": len(p.terms), "cells": len(ordered)})
    return build_complex(ordered, verify=False)
