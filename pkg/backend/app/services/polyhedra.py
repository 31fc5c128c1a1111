"""
Exact rational polyhedra in double description.

A Polyhedron keeps both its generators (vertices of the pointed part, extreme
rays, lineality basis) and its canonical H-representation. Constraints read
<normal, x> >= offset (inequality) or <normal, x> = offset (equation), with
primitive integer normals. The H-representation is canonical, so two
polyhedra are the same set iff their keys are equal.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from itertools import combinations
from math import factorial
from typing import Iterable, List, Optional, Sequence, Tuple

from app.exceptions import PolyhedronError
from app.services.lattice import IntVector, LatticeBasis, primitive, saturate
from app.utils.exact import (
    RatVector,
    determinant,
    dot,
    integral_scaling,
    nullspace,
    rank,
    rref,
    solve,
    to_vector,
)

logger = logging.getLogger(__name__)


class ConstraintKind(str, Enum):
    EQUATION = "equation"
    INEQUALITY = "inequality"


@dataclass(frozen=True, order=True)
class Halfspace:
    kind: ConstraintKind
    normal: IntVector
    offset: Fraction

    @classmethod
    def make(cls, normal: Sequence, offset, kind: ConstraintKind = ConstraintKind.INEQUALITY):
        """Scale a rational constraint so that its normal is a primitive integer vector"""
        normal = tuple(Fraction(x) for x in normal)
        offset = Fraction(offset)
        if not any(normal):
            return cls(kind, tuple(0 for _ in normal), offset)
        scaled = integral_scaling(normal)
        k = next(i for i, x in enumerate(normal) if x != 0)
        factor = Fraction(scaled[k]) / normal[k]
        return cls(kind, scaled, offset * factor)

    def slack(self, x: Sequence) -> Fraction:
        return dot(self.normal, x) - self.offset

    def holds(self, x: Sequence) -> bool:
        s = self.slack(x)
        return s == 0 if self.kind == ConstraintKind.EQUATION else s >= 0


@dataclass(frozen=True)
class Polyhedron:
    ambient: int
    vertices: Tuple[RatVector, ...]
    rays: Tuple[IntVector, ...]
    lineality: Tuple[IntVector, ...]
    hrep: Tuple[Halfspace, ...]
    dim: int

    @property
    def key(self) -> Tuple[int, Tuple[Halfspace, ...]]:
        return (self.ambient, self.hrep)

    @property
    def equations(self) -> Tuple[Halfspace, ...]:
        return tuple(h for h in self.hrep if h.kind == ConstraintKind.EQUATION)

    @property
    def inequalities(self) -> Tuple[Halfspace, ...]:
        return tuple(h for h in self.hrep if h.kind == ConstraintKind.INEQUALITY)

    @property
    def is_bounded(self) -> bool:
        return not self.rays and not self.lineality

    def __repr__(self) -> str:
        return (
            f"Polyhedron(dim={self.dim}, vertices={[tuple(map(str, v)) for v in self.vertices]}, "
            f"rays={list(self.rays)}, lineality={list(self.lineality)})"
        )


def _canonical_hrep(
    n: int,
    equations: List[Tuple[RatVector, Fraction]],
    inequalities: List[Tuple[RatVector, Fraction]],
) -> Tuple[Halfspace, ...]:
    reduced, pivots = rref([list(nu) + [a] for nu, a in equations], n + 1)
    if n in pivots:
        raise PolyhedronError("inconsistent equations in a generated polyhedron")

    result = set()
    for row in reduced:
        result.add(Halfspace.make(row[:n], row[n], ConstraintKind.EQUATION))

    for nu, a in inequalities:
        nu, a = list(nu), Fraction(a)
        # eliminate pivot coordinates so the normal is unique modulo the affine hull
        for row, p in zip(reduced, pivots):
            c = nu[p]
            if c:
                nu = [x - c * y for x, y in zip(nu, row[:n])]
                a -= c * row[n]
        if not any(nu):
            continue
        result.add(Halfspace.make(nu, a, ConstraintKind.INEQUALITY))
    return tuple(sorted(result))


def _v_to_h(
    n: int,
    vertices: Sequence[RatVector],
    rays: Sequence[IntVector],
    lineality: Sequence[IntVector],
) -> Tuple[Halfspace, ...]:
    """Facets and affine hull of conv(vertices) + cone(rays) + span(lineality)"""
    one = Fraction(1)
    generators = [tuple(v) + (one,) for v in vertices]
    generators += [tuple(Fraction(x) for x in r) + (Fraction(0),) for r in rays]
    for line in lineality:
        generators.append(tuple(Fraction(x) for x in line) + (Fraction(0),))
        generators.append(tuple(-Fraction(x) for x in line) + (Fraction(0),))

    # homogenized: (nu, -a) . (x, 1) >= 0
    hull = nullspace(generators, n + 1)
    equations = [(y[:n], -y[n]) for y in hull]
    d = n + 1 - len(hull)

    inequalities = []
    seen = set()
    for subset in combinations(generators, d - 1):
        subset = list(subset)
        if subset and rank(subset) != d - 1:
            continue
        candidates = nullspace(subset + [list(y) for y in hull], n + 1)
        if len(candidates) != 1:
            continue
        y = candidates[0]
        values = [dot(y, g) for g in generators]
        if all(v >= 0 for v in values):
            pass
        elif all(v <= 0 for v in values):
            y = tuple(-c for c in y)
        else:
            continue
        if y in seen:
            continue
        seen.add(y)
        inequalities.append((y[:n], -y[n]))

    return _canonical_hrep(n, equations, inequalities)


def _h_to_v(
    n: int, halfspaces: Sequence[Halfspace]
) -> Optional[Tuple[Tuple[RatVector, ...], Tuple[IntVector, ...], Tuple[IntVector, ...]]]:
    """Vertices, extreme rays and lineality basis of a constraint system; None if empty"""
    equations = [h for h in halfspaces if h.kind == ConstraintKind.EQUATION]
    inequalities = [h for h in halfspaces if h.kind == ConstraintKind.INEQUALITY]

    normals = [list(h.normal) for h in halfspaces]
    if normals:
        free = nullspace(normals, n)
    else:
        free = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    lineality = saturate([integral_scaling(v) for v in free], n) if free else LatticeBasis(n, ())

    # pointed part: intersect with the orthogonal complement of the lineality space
    eq_rows = [list(h.normal) for h in equations] + [list(v) for v in lineality.vectors]
    eq_rhs = [h.offset for h in equations] + [Fraction(0)] * lineality.rank
    eq_rank = rank(eq_rows)

    vertices = set()
    for subset in combinations(inequalities, n - eq_rank):
        rows = eq_rows + [list(h.normal) for h in subset]
        rhs = eq_rhs + [h.offset for h in subset]
        x = solve(rows, rhs, n)
        if x is None:
            continue
        if all(h.holds(x) for h in halfspaces):
            vertices.add(x)
    if not vertices:
        return None

    rays = set()
    if n - 1 - eq_rank >= 0:
        for subset in combinations(inequalities, n - 1 - eq_rank):
            rows = eq_rows + [list(h.normal) for h in subset]
            directions = nullspace(rows, n)
            if len(directions) != 1:
                continue
            d = directions[0]
            for candidate in (d, tuple(-c for c in d)):
                if all(dot(h.normal, candidate) >= 0 for h in inequalities):
                    rays.add(primitive(integral_scaling(candidate)))

    return tuple(sorted(vertices)), tuple(sorted(rays)), lineality.vectors


def _build(
    n: int,
    vertices: Iterable[RatVector],
    rays: Iterable[IntVector],
    lineality: Iterable[IntVector],
) -> Polyhedron:
    vertices, rays, lineality = list(vertices), list(rays), list(lineality)
    hrep = _v_to_h(n, vertices, rays, lineality)
    generators = _h_to_v(n, hrep)
    if generators is None:
        raise PolyhedronError("generated polyhedron is empty")
    dim = n - sum(1 for h in hrep if h.kind == ConstraintKind.EQUATION)
    return Polyhedron(n, generators[0], generators[1], generators[2], hrep, dim)


def from_generators(
    vertices: Sequence[Sequence], rays: Sequence[Sequence[int]] = (), ambient: int = None
) -> Polyhedron:
    """Polyhedron conv(vertices) + cone(rays), with canonical double description"""
    if not vertices:
        raise PolyhedronError("a polyhedron needs at least one vertex")
    points = [to_vector(v, "vertex") for v in vertices]
    n = ambient if ambient is not None else len(points[0])
    directions = [tuple(int(x) for x in r) for r in rays]
    for v in points:
        if len(v) != n:
            raise PolyhedronError(f"vertex of length {len(v)} in ambient dimension {n}")
    for r in directions:
        if len(r) != n:
            raise PolyhedronError(f"ray of length {len(r)} in ambient dimension {n}")
    directions = [primitive(r) for r in directions if any(r)]
    return _build(n, points, directions, ())


def from_hrep(halfspaces: Sequence[Halfspace], ambient: int) -> Optional[Polyhedron]:
    """Polyhedron cut out by the constraints, or None when they are infeasible"""
    generators = _h_to_v(ambient, list(halfspaces))
    if generators is None:
        return None
    return _build(ambient, *generators)


def lineality(P: Polyhedron) -> LatticeBasis:
    return LatticeBasis(P.ambient, P.lineality)


@lru_cache(maxsize=4096)
def _facets(P: Polyhedron) -> Tuple[Polyhedron, ...]:
    result = []
    for h in P.inequalities:
        tight_vertices = [v for v in P.vertices if h.slack(v) == 0]
        tight_rays = [r for r in P.rays if dot(h.normal, r) == 0]
        result.append(_build(P.ambient, tight_vertices, tight_rays, P.lineality))
    return tuple(result)


def faces(P: Polyhedron, k: int) -> List[Polyhedron]:
    """All k-dimensional faces of P, canonically ordered"""
    if k == P.dim:
        return [P]
    if k < 0 or k > P.dim:
        return []
    found = {}
    for F in _facets(P):
        for G in faces(F, k):
            found.setdefault(G.key, G)
    return [found[key] for key in sorted(found)]


def direction_lattice(P: Polyhedron) -> LatticeBasis:
    """Saturated basis of the linear span of P - P"""
    base = P.vertices[0]
    spanning = [integral_scaling([a - b for a, b in zip(v, base)]) for v in P.vertices[1:]]
    spanning += list(P.rays) + list(P.lineality)
    spanning = [v for v in spanning if any(v)]
    if not spanning:
        return LatticeBasis(P.ambient, ())
    return saturate(spanning, P.ambient)


def relative_interior_point(P: Polyhedron) -> RatVector:
    """Average of the vertices plus the sum of the extreme rays"""
    count = len(P.vertices)
    point = [sum((v[i] for v in P.vertices), Fraction(0)) / count for i in range(P.ambient)]
    for r in P.rays:
        point = [x + c for x, c in zip(point, r)]
    return tuple(point)


def contains(P: Polyhedron, x: Sequence) -> bool:
    return all(h.holds(x) for h in P.hrep)


def in_relative_interior(P: Polyhedron, x: Sequence) -> bool:
    return all(h.slack(x) == 0 for h in P.equations) and all(
        h.slack(x) > 0 for h in P.inequalities
    )


def intersection(P: Polyhedron, Q: Polyhedron) -> Optional[Polyhedron]:
    if P.ambient != Q.ambient:
        raise PolyhedronError("intersection of polyhedra in different ambient spaces")
    return from_hrep(P.hrep + Q.hrep, P.ambient)


def face_containing(P: Polyhedron, x: Sequence) -> Polyhedron:
    """Smallest face of P containing the point x"""
    if not contains(P, x):
        raise PolyhedronError(f"point {tuple(map(str, x))} is not in the polyhedron")
    tightened = [
        Halfspace(ConstraintKind.EQUATION, h.normal, h.offset) if h.slack(x) == 0 else h
        for h in P.hrep
    ]
    return from_hrep(tightened, P.ambient)


def is_face(F: Polyhedron, P: Polyhedron) -> bool:
    x = relative_interior_point(F)
    if not contains(P, x):
        return False
    return face_containing(P, x).key == F.key


def scale(P: Polyhedron, factor) -> Polyhedron:
    factor = Fraction(factor)
    if factor <= 0:
        raise PolyhedronError("scaling factor must be positive")
    vertices = [tuple(factor * x for x in v) for v in P.vertices]
    return _build(P.ambient, vertices, P.rays, P.lineality)


def translate(P: Polyhedron, a: Sequence) -> Polyhedron:
    a = to_vector(a, "translation")
    vertices = [tuple(x + y for x, y in zip(v, a)) for v in P.vertices]
    return _build(P.ambient, vertices, P.rays, P.lineality)


def minkowski_sum(P: Polyhedron, Q: Polyhedron) -> Polyhedron:
    if P.ambient != Q.ambient:
        raise PolyhedronError("Minkowski sum of polyhedra in different ambient spaces")
    vertices = {tuple(x + y for x, y in zip(v, w)) for v in P.vertices for w in Q.vertices}
    return _build(
        P.ambient,
        sorted(vertices),
        set(P.rays) | set(Q.rays),
        set(P.lineality) | set(Q.lineality),
    )


def triangulate(P: Polyhedron) -> List[Tuple[RatVector, ...]]:
    """
    Pulling triangulation of a bounded polytope from its first vertex.
    Returns simplices as tuples of dim + 1 vertices.
    """
    if not P.is_bounded:
        raise PolyhedronError("only bounded polytopes can be triangulated")
    if P.dim == 0:
        return [(P.vertices[0],)]
    apex = P.vertices[0]
    simplices = []
    for F in _facets(P):
        if contains(F, apex):
            continue
        for simplex in triangulate(F):
            simplices.append((apex,) + simplex)
    return simplices


def _angular_order(points: Sequence[RatVector]) -> List[RatVector]:
    cx = sum((p[0] for p in points), Fraction(0)) / len(points)
    cy = sum((p[1] for p in points), Fraction(0)) / len(points)

    def half(p):
        x, y = p[0] - cx, p[1] - cy
        return 0 if y > 0 or (y == 0 and x > 0) else 1

    def compare(p, q):
        hp, hq = half(p), half(q)
        if hp != hq:
            return hp - hq
        cross = (p[0] - cx) * (q[1] - cy) - (p[1] - cy) * (q[0] - cx)
        return -1 if cross > 0 else (1 if cross < 0 else 0)

    return sorted(points, key=cmp_to_key(compare))


def volume(P: Polyhedron) -> Fraction:
    """Exact n-dimensional volume; zero for lower-dimensional polytopes"""
    if not P.is_bounded:
        raise PolyhedronError("volume of an unbounded polyhedron")
    n = P.ambient
    if P.dim < n:
        return Fraction(0)
    if n == 1:
        xs = [v[0] for v in P.vertices]
        return max(xs) - min(xs)
    if n == 2:
        ordered = _angular_order(P.vertices)
        area = Fraction(0)
        for i, p in enumerate(ordered):
            q = ordered[(i + 1) % len(ordered)]
            area += p[0] * q[1] - q[0] * p[1]
        return abs(area) / 2

    total = Fraction(0)
    for simplex in triangulate(P):
        base = simplex[0]
        rows = [[a - b for a, b in zip(v, base)] for v in simplex[1:]]
        total += abs(determinant(rows))
    return total / factorial(n)
