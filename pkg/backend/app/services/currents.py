"""
Tropical currents, handled through their already integrated scalar
equations: per-cell lattice frames, the boundary pairing against character
test forms, the closedness certificate and the rigidity system.

The constant attached to each (eta, K, W) test form is fixed to 1, so test
forms are indexed by the character frequency nu and the index set J only.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.config import get_settings
from app.exceptions import CurrentsError
from app.services.complexes import FacetStar, WeightedComplex, components, facet_star, is_balanced
from app.services.lattice import (
    IntMatrix,
    IntVector,
    LatticeBasis,
    columns_of,
    complete_to_unimodular,
    int_matrix,
    integer_inverse,
    minor,
)
from app.services.polyhedra import relative_interior_point
from app.utils.exact import RatVector, dot, integer_determinant, integral_scaling, nullspace

logger = logging.getLogger(__name__)

IndexSet = Tuple[int, ...]


@dataclass(frozen=True)
class CurrentFrame:
    """
    Lattice frame of one cell at a facet star. The completion columns are
    w_1..w_{p-1} (facet frame), v (inward branch vector), u_1..u_{n-p}.
    """

    cell: int
    base: RatVector
    basis: LatticeBasis
    completion: IntMatrix

    @property
    def branch_vector(self) -> IntVector:
        return self.basis.vectors[-1]

    @property
    def complement(self) -> List[IntVector]:
        return columns_of(self.completion)[self.basis.rank:]


@dataclass(frozen=True)
class PairingQuery:
    star: FacetStar
    nu: IntVector
    J: IndexSet


@dataclass
class RigiditySystem:
    star: FacetStar
    subsets: List[IndexSet]
    matrix: List[List[int]]
    dimension: int
    kernel: List[RatVector]

    @property
    def weights(self) -> IntVector:
        return tuple(b.weight for b in self.star.branches)

    @property
    def weights_in_kernel(self) -> bool:
        return all(dot(row, self.weights) == 0 for row in self.matrix)


@dataclass
class FacetClosedness:
    facet: int
    values: Dict[IndexSet, Fraction]

    @property
    def witnesses(self) -> List[Tuple[IndexSet, Fraction]]:
        return [(J, v) for J, v in self.values.items() if v != 0]

    @property
    def closed(self) -> bool:
        return not self.witnesses


@dataclass
class ClosednessReport:
    closed: bool
    balanced: bool
    facets: List[FacetClosedness]

    @property
    def agrees_with_balancing(self) -> bool:
        return self.closed == self.balanced

    @property
    def witnesses(self) -> List[Tuple[int, IndexSet, Fraction]]:
        return [(f.facet, J, v) for f in self.facets for J, v in f.witnesses]


@dataclass
class FourierCertificate:
    certified: bool
    frequencies: Dict[int, List[IntVector]]
    failures: List[Tuple[int, int, IntVector]] = field(default_factory=list)


@dataclass
class ExtremalityCertificate:
    """
    Per-facet rigidity kernels together with codimension-one connectivity.
    Gluing the per-facet proportionality constants into one global constant
    follows from connectivity and is not recomputed here.
    """

    certified: bool
    connected: bool
    components: int
    rigidity: List[RigiditySystem]
    fourier: FourierCertificate


def _check_star(C: WeightedComplex, star: FacetStar) -> None:
    if star.ambient != C.ambient or not 0 <= star.facet_index < len(C.facets):
        raise CurrentsError("facet star does not belong to the complex")


def build_frames(C: WeightedComplex, star: FacetStar) -> List[CurrentFrame]:
    """One unimodular frame (w | v | u) per branch of the star"""
    _check_star(C, star)
    n = C.ambient
    frames = []
    for branch in star.branches:
        columns = list(star.frame) + [branch.direction]
        D = complete_to_unimodular(int_matrix(columns, n))
        if abs(integer_determinant(D.tolist())) != 1:
            raise CurrentsError(f"completion of cell {branch.cell} is not unimodular")
        frames.append(
            CurrentFrame(
                cell=branch.cell,
                base=relative_interior_point(C.cells[branch.cell].polyhedron),
                basis=LatticeBasis(n, tuple(columns)),
                completion=D,
            )
        )
    return frames


def _kronecker(nu: Sequence[int], D: IntMatrix) -> int:
    return int(all(dot(nu, column) == 0 for column in columns_of(D)))


def boundary_pairing(
    q: PairingQuery, frames: Sequence[CurrentFrame], weights: Optional[Sequence[int]] = None
) -> Fraction:
    """
    Sum over branches P of m_P * delta(<nu, columns of D_P>) * Det_J(w_1..w_{p-1}, v_P)
    where delta is 1 when nu annihilates every column and 0 otherwise.
    """
    star = q.star
    if len(q.J) != star.dim:
        raise CurrentsError(
            f"index set {q.J} has size {len(q.J)}; need {star.dim}", invariant="|J| = p"
        )
    if len(q.nu) != star.ambient:
        raise CurrentsError(f"frequency of length {len(q.nu)} in ambient dimension {star.ambient}")
    if tuple(sorted(q.J)) != tuple(q.J) or not all(1 <= j <= star.ambient for j in q.J):
        raise CurrentsError(f"index set {q.J} must be sorted and inside 1..{star.ambient}")
    if len(frames) != len(star.branches):
        raise CurrentsError("frames were not built at this star")
    weights = weights if weights is not None else [b.weight for b in star.branches]

    total = Fraction(0)
    for frame, weight in zip(frames, weights):
        if not _kronecker(q.nu, frame.completion):
            continue
        total += weight * minor(list(star.frame) + [frame.branch_vector], q.J)
    return total


def _index_sets(n: int, p: int) -> List[IndexSet]:
    return list(combinations(range(1, n + 1), p))


def closedness_certificate(C: WeightedComplex) -> ClosednessReport:
    """Zero-frequency pairing at every facet star and every J with |J| = p"""
    facets = []
    for idx in range(len(C.facets)):
        star = facet_star(C, idx)
        frames = build_frames(C, star)
        zero = (0,) * C.ambient
        values = {
            J: boundary_pairing(PairingQuery(star, zero, J), frames)
            for J in _index_sets(C.ambient, C.dim)
        }
        facets.append(FacetClosedness(idx, values))

    report = ClosednessReport(
        closed=all(f.closed for f in facets),
        balanced=is_balanced(C).balanced,
        facets=facets,
    )
    if not report.agrees_with_balancing:
        logger.error(
            "Closedness and balancing disagree",
            extra={"closed": report.closed, "balanced": report.balanced},
        )
    logger.info("Closedness certified", extra={"closed": report.closed})
    return report


def _normalize(vector: Sequence[Fraction]) -> RatVector:
    scaled = integral_scaling(vector)
    first = next((x for x in scaled if x), 1)
    sign = 1 if first > 0 else -1
    return tuple(Fraction(sign * x) for x in scaled)


def rigidity_dimension(star: FacetStar) -> RigiditySystem:
    """Kernel of the matrix with rows J and columns Det_J(w_1..w_{p-1}, v_P)"""
    subsets = _index_sets(star.ambient, star.dim)
    matrix = [
        [minor(list(star.frame) + [b.direction], J) for b in star.branches] for J in subsets
    ]
    kernel = [_normalize(v) for v in nullspace(matrix, len(star.branches))]
    system = RigiditySystem(star, subsets, matrix, len(kernel), kernel)
    logger.debug(
        "Rigidity system solved",
        extra={"facet": star.facet_index, "dimension": system.dimension},
    )
    return system


def fourier_obstruction(
    star: FacetStar, frames: Sequence[CurrentFrame], ell: Sequence[int]
) -> List[bool]:
    """
    For each branch P solve <nu, w> = 0, <nu, v_P> = 0, <nu, u_j> = -l_j; the
    obstruction holds at P when some other branch P' has <nu, v_P'> != 0.
    """
    ell = tuple(int(x) for x in ell)
    codim = star.ambient - star.dim
    if len(ell) != codim:
        raise CurrentsError(f"frequency of length {len(ell)}; need {codim}")
    if not any(ell):
        raise CurrentsError("zero frequency handled by rigidity_dimension")

    result = []
    for frame in frames:
        rhs = [0] * frame.basis.rank + [-x for x in ell]
        # D is unimodular, so nu = D^-T rhs is integral and unique
        inverse = integer_inverse(frame.completion)
        nu = tuple(int(x) for x in inverse.T @ np.array(rhs, dtype=object))
        result.append(
            any(
                dot(nu, other.branch_vector) != 0
                for other in frames
                if other.cell != frame.cell
            )
        )
    return result


def default_frequencies(k: int, height: Optional[int] = None) -> List[IntVector]:
    """Nonzero l in Z^k with |l|_1 <= height, in lexicographic order"""
    height = height if height is not None else get_settings().fourier_height
    return [
        ell
        for ell in product(range(-height, height + 1), repeat=k)
        if any(ell) and sum(abs(x) for x in ell) <= height
    ]


def fourier_certificate(
    C: WeightedComplex, frequencies: Optional[Sequence[Sequence[int]]] = None
) -> FourierCertificate:
    checked: Dict[int, List[IntVector]] = {}
    failures = []
    for idx in range(len(C.facets)):
        star = facet_star(C, idx)
        frames = build_frames(C, star)
        codim = C.ambient - star.dim
        ells = (
            [tuple(int(x) for x in ell) for ell in frequencies]
            if frequencies is not None
            else default_frequencies(codim)
        )
        checked[idx] = ells
        for ell in ells:
            for frame, holds in zip(frames, fourier_obstruction(star, frames, ell)):
                if not holds:
                    failures.append((idx, frame.cell, ell))

    certificate = FourierCertificate(not failures, checked, failures)
    logger.info(
        "Higher frequencies checked",
        extra={"certified": certificate.certified, "failures": len(failures)},
    )
    return certificate


def extremality_certificate(C: WeightedComplex) -> ExtremalityCertificate:
    count, _ = components(C)
    systems = [rigidity_dimension(facet_star(C, idx)) for idx in range(len(C.facets))]
    fourier = fourier_certificate(C)
    certified = (
        count == 1
        and all(s.dimension == 1 and s.weights_in_kernel for s in systems)
        and fourier.certified
    )
    return ExtremalityCertificate(
        certified=certified,
        connected=count == 1,
        components=count,
        rigidity=systems,
        fourier=fourier,
    )
