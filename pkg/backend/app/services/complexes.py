"""
Weighted polyhedral complexes and the checks run on them: balancing at every
codimension-one face and strong extremality.
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from app.exceptions import ComplexError
from app.services.lattice import (
    IntMatrix,
    IntVector,
    complete_to_unimodular,
    int_matrix,
    integer_inverse,
    lattice_rank,
    minor,
)
from app.services.polyhedra import (
    Polyhedron,
    direction_lattice,
    faces,
    intersection,
    is_face,
    relative_interior_point,
    scale,
)
from app.utils.exact import RatVector, dot, solve

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightedCell:
    polyhedron: Polyhedron
    weight: int


@dataclass(frozen=True)
class WeightedComplex:
    ambient: int
    dim: int
    cells: Tuple[WeightedCell, ...]
    facets: Tuple[Polyhedron, ...]
    incidence: Tuple[Tuple[int, ...], ...]

    @property
    def weights(self) -> Tuple[int, ...]:
        return tuple(c.weight for c in self.cells)


@dataclass(frozen=True)
class Branch:
    cell: int
    weight: int
    direction: IntVector


@dataclass(frozen=True)
class FacetStar:
    """A codimension-one face with its lattice frame and inward branch vectors"""

    facet_index: int
    facet: Polyhedron
    base: RatVector
    frame: Tuple[IntVector, ...]
    branches: Tuple[Branch, ...]

    @property
    def ambient(self) -> int:
        return self.facet.ambient

    @property
    def dim(self) -> int:
        """Dimension p of the adjacent cells"""
        return len(self.frame) + 1

    @property
    def weighted_sum(self) -> IntVector:
        total = [0] * self.ambient
        for b in self.branches:
            total = [t + b.weight * x for t, x in zip(total, b.direction)]
        return tuple(total)


@dataclass
class FacetBalance:
    facet: int
    weighted_sum: IntVector
    defect: IntVector
    failing_minors: List[Tuple[int, ...]] = field(default_factory=list)

    @property
    def balanced(self) -> bool:
        return not any(self.defect)


@dataclass
class BalanceReport:
    balanced: bool
    facets: List[FacetBalance]

    @property
    def failing_minors(self) -> List[Tuple[int, Tuple[int, ...]]]:
        return [(f.facet, J) for f in self.facets for J in f.failing_minors]


@dataclass
class FacetExtremality:
    facet: int
    valency: int
    projected: List[IntVector]
    sub_independent: bool
    spans: bool


@dataclass
class ExtremalityReport:
    connected: bool
    components: int
    valency_ok: bool
    sub_independent: bool
    spans: bool
    balanced: bool
    facets: List[FacetExtremality]
    expected_valency: int

    @property
    def strongly_extremal(self) -> bool:
        return self.connected and self.valency_ok and self.sub_independent and self.spans


def build_complex(
    cells: Sequence[Tuple[Polyhedron, int]], verify: bool = True
) -> WeightedComplex:
    """
    Assemble a pure weighted complex. Facets are all (p-1)-faces of the cells,
    identified by their canonical H-representation.

    Args:
        cells: (polyhedron, weight) pairs of one dimension p, weights nonzero
        verify: check that distinct cells meet in common faces

    Returns:
        WeightedComplex with facets in canonical order and the cells around each

    Raises:
        ComplexError: empty, not pure, zero weight or not a complex
    """
    if not cells:
        raise ComplexError("complex has no cells")

    ambient = cells[0][0].ambient
    dims = {P.dim for P, _ in cells}
    if len(dims) != 1:
        raise ComplexError(f"not pure: cell dimensions {sorted(dims)}")
    (p,) = dims

    for P, weight in cells:
        if P.ambient != ambient:
            raise ComplexError("cells live in different ambient spaces")
        if int(weight) == 0:
            raise ComplexError("cell weights must be nonzero")

    if verify:
        keys = [P.key for P, _ in cells]
        if len(set(keys)) != len(keys):
            raise ComplexError("not a complex: a cell is listed twice")
        for (i, (P, _)), (j, (Q, _)) in combinations(enumerate(cells), 2):
            meet = intersection(P, Q)
            if meet is None:
                continue
            if not (is_face(meet, P) and is_face(meet, Q)):
                raise ComplexError(
                    f"not a complex: cells {i} and {j} meet outside a common face"
                )

    facet_cells: Dict[tuple, List[int]] = {}
    facet_polys: Dict[tuple, Polyhedron] = {}
    for index, (P, _) in enumerate(cells):
        for W in faces(P, p - 1):
            facet_polys.setdefault(W.key, W)
            facet_cells.setdefault(W.key, []).append(index)

    ordered = sorted(facet_polys)
    C = WeightedComplex(
        ambient=ambient,
        dim=p,
        cells=tuple(WeightedCell(P, int(w)) for P, w in cells),
        facets=tuple(facet_polys[k] for k in ordered),
        incidence=tuple(tuple(facet_cells[k]) for k in ordered),
    )
    logger.info(
        "Built weighted complex",
        extra={"ambient": ambient, "dim": p, "cells": len(C.cells), "facets": len(C.facets)},
    )
    return C


def _supporting_normal(P: Polyhedron, base: RatVector) -> IntVector:
    for h in P.inequalities:
        if h.slack(base) == 0:
            return h.normal
    raise ComplexError("facet is not on the boundary of an incident cell")


def _inward_vector(P: Polyhedron, base: RatVector, frame: Sequence[IntVector]) -> IntVector:
    lattice = direction_lattice(P)
    L = lattice.matrix
    rows = [list(r) for r in L]

    # frame in the coordinates of the cell lattice, then complete inside it
    coords = []
    for w in frame:
        c = solve(rows, list(w), lattice.rank)
        if c is None or any(x.denominator != 1 for x in c):
            raise ComplexError("facet direction is not inside the cell lattice")
        coords.append(tuple(int(x) for x in c))
    D = complete_to_unimodular(int_matrix(coords, lattice.rank))
    v = tuple(int(x) for x in L @ D[:, -1])

    if dot(_supporting_normal(P, base), v) < 0:
        v = tuple(-x for x in v)
    return v


def facet_star(C: WeightedComplex, facet_index: int) -> FacetStar:
    if not 0 <= facet_index < len(C.facets):
        raise ComplexError(f"facet index {facet_index} out of range")
    W = C.facets[facet_index]
    base = relative_interior_point(W)
    frame = direction_lattice(W).vectors
    branches = []
    for ci in C.incidence[facet_index]:
        cell = C.cells[ci]
        v = _inward_vector(cell.polyhedron, base, frame)
        branches.append(Branch(ci, cell.weight, v))
    return FacetStar(facet_index, W, base, frame, tuple(branches))


def projection_along(star: FacetStar) -> IntMatrix:
    """Integer (n-p+1) x n matrix whose kernel lattice is the direction lattice of the facet"""
    n = star.ambient
    D = complete_to_unimodular(int_matrix(star.frame, n))
    Dinv = integer_inverse(D)
    return Dinv[len(star.frame):, :]


def _project(H: IntMatrix, v: Sequence[int]) -> IntVector:
    return tuple(int(x) for x in H @ np.array(v, dtype=object))


def _one_based_subsets(n: int, p: int) -> List[Tuple[int, ...]]:
    return list(combinations(range(1, n + 1), p))


def is_balanced(C: WeightedComplex) -> BalanceReport:
    results = []
    for idx in range(len(C.facets)):
        star = facet_star(C, idx)
        total = star.weighted_sum
        defect = _project(projection_along(star), total)
        columns = list(star.frame) + [total]
        failing = [J for J in _one_based_subsets(C.ambient, star.dim) if minor(columns, J) != 0]
        results.append(FacetBalance(idx, total, defect, failing))
        logger.debug("Facet balance", extra={"facet": idx, "defect": defect})

    report = BalanceReport(all(f.balanced for f in results), results)
    logger.info("Balancing checked", extra={"balanced": report.balanced})
    return report


def _sub_independent(vectors: Sequence[IntVector]) -> bool:
    """Every proper subset is linearly independent"""
    s = len(vectors)
    if s <= 1:
        return True
    return all(
        lattice_rank(int_matrix(subset, len(vectors[0]))) == s - 1
        for subset in combinations(vectors, s - 1)
    )


def dual_graph(C: WeightedComplex) -> csr_matrix:
    """Adjacency of top cells sharing a facet"""
    k = len(C.cells)
    rows, cols = [], []
    for cells in C.incidence:
        for a, b in combinations(cells, 2):
            rows += [a, b]
            cols += [b, a]
    return csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(k, k))


def components(C: WeightedComplex) -> Tuple[int, np.ndarray]:
    count, labels = connected_components(dual_graph(C), directed=False)
    return int(count), labels


def is_strongly_extremal(C: WeightedComplex) -> ExtremalityReport:
    n, p = C.ambient, C.dim
    expected = n - p + 2
    balance = is_balanced(C)
    if not balance.balanced:
        logger.warning(
            "Strong extremality checked on an unbalanced complex",
            extra={"failing_facets": [f.facet for f in balance.facets if not f.balanced]},
        )

    count, _ = components(C)
    evidence = []
    for idx in range(len(C.facets)):
        star = facet_star(C, idx)
        H = projection_along(star)
        projected = [_project(H, b.direction) for b in star.branches]
        spans = lattice_rank(int_matrix(projected, n - p + 1)) == n - p + 1
        evidence.append(
            FacetExtremality(
                facet=idx,
                valency=len(star.branches),
                projected=projected,
                sub_independent=_sub_independent(projected),
                spans=spans,
            )
        )

    report = ExtremalityReport(
        connected=count == 1,
        components=count,
        valency_ok=all(e.valency == expected for e in evidence),
        sub_independent=all(e.sub_independent for e in evidence),
        spans=all(e.spans for e in evidence),
        balanced=balance.balanced,
        facets=evidence,
        expected_valency=expected,
    )
    logger.info("Strong extremality checked", extra={"result": report.strongly_extremal})
    return report


def scale_complex(C: WeightedComplex, factor) -> WeightedComplex:
    """Dilate every cell about the origin"""
    cells = [(scale(c.polyhedron, factor), c.weight) for c in C.cells]
    return build_complex(cells, verify=False)


def scale_weights(C: WeightedComplex, k: int) -> WeightedComplex:
    if k == 0:
        raise ComplexError("cell weights must be nonzero")
    return WeightedComplex(
        C.ambient,
        C.dim,
        tuple(WeightedCell(c.polyhedron, c.weight * k) for c in C.cells),
        C.facets,
        C.incidence,
    )


def is_effective(C: WeightedComplex) -> bool:
    return all(c.weight > 0 for c in C.cells)
