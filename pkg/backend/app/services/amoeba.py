"""
Floating-point amoebas of plane curves.

Samples Log_t of the zero set of a Laurent polynomial in two variables by
fixing one coordinate on a (modulus, phase) grid and solving the other with
companion-matrix eigenvalues, then measures how far the sample sits from a
tropical curve.
"""
import logging
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import IO, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.config import get_settings
from app.exceptions import AmoebaError
from app.services.complexes import WeightedComplex, is_effective, scale_complex
from app.services.lattice import IntVector
from app.services.polyhedra import Polyhedron, direction_lattice, faces
from app.services.troppoly import TropicalPolynomial, hypersurface

logger = logging.getLogger(__name__)

Window = Tuple[float, float]

# |a_k| below this fraction of the magnitude of its terms counts as zero
_ZERO_TOLERANCE = 1e-12


@dataclass(frozen=True)
class LaurentPolynomial:
    n: int
    terms: Tuple[Tuple[IntVector, complex], ...]

    def __call__(self, z: np.ndarray) -> np.ndarray:
        """Evaluate at the rows of z"""
        z = np.atleast_2d(z)
        total = np.zeros(z.shape[0], dtype=complex)
        for alpha, c in self.terms:
            total += c * np.prod(z ** np.array(alpha), axis=1)
        return total

    def magnitude(self, z: np.ndarray) -> np.ndarray:
        """Sum of the moduli of the terms, the scale residuals are measured against"""
        z = np.atleast_2d(z)
        total = np.zeros(z.shape[0])
        for alpha, c in self.terms:
            total += abs(c) * np.prod(np.abs(z) ** np.array(alpha), axis=1)
        return total

    def __str__(self) -> str:
        parts = []
        for alpha, c in self.terms:
            monomial = "*".join(
                f"z{i + 1}" if a == 1 else f"z{i + 1}^{a}" for i, a in enumerate(alpha) if a
            )
            coefficient = f"{c.real:.6g}" if c.imag == 0 else f"({c:.6g})"
            parts.append(f"{coefficient}*{monomial}" if monomial else coefficient)
        return " + ".join(parts)


@dataclass
class AmoebaSample:
    """Log_t images of the torus points in roots; points = log|roots| / log t"""

    points: np.ndarray
    roots: np.ndarray
    t: float
    source: str
    rejected: int = 0
    degenerate: int = 0

    def __len__(self) -> int:
        return len(self.points)


@dataclass
class ApproximationReport:
    l: int
    m: int
    distance: float
    sample: AmoebaSample
    mass_normalization: str


def build_flm(p: TropicalPolynomial, l: int, m: int) -> LaurentPolynomial:
    """sum over the terms of p of exp(l * c_a) * z^(m * a)"""
    if len(p.terms) < 2:
        raise AmoebaError("a polynomial with a single term has an empty amoeba")
    if l < 1 or m < 1:
        raise AmoebaError(f"l and m must be positive integers, got l={l}, m={m}")
    terms = []
    for alpha, c in p.terms:
        try:
            coefficient = math.exp(l * float(c))
        except OverflowError as e:
            raise AmoebaError(f"coefficient exp({l} * {c}) overflows a double") from e
        terms.append((tuple(m * a for a in alpha), complex(coefficient)))
    return LaurentPolynomial(p.n, tuple(terms))


def _companion_roots(coefficients: np.ndarray) -> np.ndarray:
    """
    Roots of a batch of polynomials with nonzero leading coefficients.

    Args:
        coefficients: (rows, d + 1), highest degree first

    Returns:
        (rows, d) complex roots
    """
    rows, width = coefficients.shape
    d = width - 1
    companion = np.zeros((rows, d, d), dtype=complex)
    companion[:, 0, :] = -coefficients[:, 1:] / coefficients[:, :1]
    if d > 1:
        companion[:, 1:, :-1] = np.eye(d - 1)
    return np.linalg.eigvals(companion)


def _fiber_points(
    f: LaurentPolynomial, fixed: int, values: np.ndarray
) -> Tuple[List[np.ndarray], int]:
    """Points z with z[fixed] in values, solving f for the other coordinate"""
    solve = 1 - fixed
    powers = sorted({alpha[solve] for alpha, _ in f.terms})
    low, high = powers[0], powers[-1]
    width = high - low + 1

    # coefficient of z_solve^(k + low), ordered lowest first
    coefficient = np.zeros((len(values), width), dtype=complex)
    scale = np.zeros((len(values), width))
    for alpha, c in f.terms:
        k = alpha[solve] - low
        coefficient[:, k] += c * values ** alpha[fixed]
        scale[:, k] += abs(c) * np.abs(values) ** alpha[fixed]
    nonzero = np.abs(coefficient) > _ZERO_TOLERANCE * scale

    degenerate = 0
    groups: Dict[Tuple[int, int], List[int]] = {}
    for index in range(len(values)):
        support = np.flatnonzero(nonzero[index])
        if len(support) == 0:
            degenerate += 1
            continue
        bottom, top = int(support[0]), int(support[-1])
        if top > bottom:
            groups.setdefault((bottom, top), []).append(index)

    found = []
    for (bottom, top), indices in groups.items():
        block = coefficient[indices, bottom : top + 1][:, ::-1]
        roots = _companion_roots(block)
        for row, index in enumerate(indices):
            for r in roots[row]:
                z = np.empty(2, dtype=complex)
                z[fixed], z[solve] = values[index], r
                found.append((index, z))
    found.sort(key=lambda item: item[0])
    return [z for _, z in found], degenerate


def sample_amoeba(
    f: LaurentPolynomial,
    grid: Optional[int] = None,
    window: Optional[Window] = None,
    t: Optional[float] = None,
) -> AmoebaSample:
    """
    Log_t of points on f = 0 whose coordinates lie in the window. Each
    coordinate in turn is fixed on grid moduli by grid phases.

    Args:
        f: Laurent polynomial in two variables
        grid: moduli and phases per axis
        window: LO, HI for the Log_t coordinates
        t: base of Log_t, greater than 1

    Returns:
        AmoebaSample of the roots whose relative residual is within tolerance
    """
    settings = get_settings()
    grid = grid or settings.amoeba_grid
    lo, hi = window or settings.amoeba_window
    t = t or settings.amoeba_log_base
    if f.n != 2:
        raise AmoebaError(f"sampling is implemented for plane curves, got n={f.n}")
    if grid < 2 or not lo < hi or t <= 1:
        raise AmoebaError(f"invalid sampling parameters grid={grid}, window={lo}:{hi}, t={t}")

    log_t = math.log(t)
    moduli = np.exp(np.linspace(lo, hi, grid) * log_t)
    phases = np.exp(2j * np.pi * np.arange(grid) / grid)
    values = np.outer(moduli, phases).ravel()

    candidates, degenerate = [], 0
    for fixed in (0, 1):
        points, skipped = _fiber_points(f, fixed, values)
        candidates += points
        degenerate += skipped
    if degenerate:
        logger.warning("Skipped degenerate fibers", extra={"count": degenerate})

    if not candidates:
        empty = np.empty((0, 2))
        return AmoebaSample(empty, empty.astype(complex), t, str(f), 0, degenerate)

    z = np.array(candidates)
    with np.errstate(divide="ignore", invalid="ignore"):
        residual = np.abs(f(z)) / f.magnitude(z)
        logs = np.log(np.abs(z)) / log_t
    sound = np.isfinite(residual) & (residual <= settings.amoeba_residual_tolerance)
    inside = np.all(np.isfinite(logs) & (logs >= lo) & (logs <= hi), axis=1)
    keep = sound & inside

    sample = AmoebaSample(
        logs[keep], z[keep], t, str(f), int(np.sum(inside & ~sound)), degenerate
    )
    logger.info(
        "Amoeba sampled",
        extra={"points": len(sample), "rejected": sample.rejected, "grid": grid},
    )
    return sample


def rescale(sample: AmoebaSample, m: int) -> AmoebaSample:
    """Pull back along z -> z^m: Log points divide by m, t becomes t^m"""
    if m < 1:
        raise AmoebaError(f"rescaling factor must be a positive integer, got {m}")
    return replace(sample, points=sample.points / m, t=sample.t**m)


@dataclass
class _FaceProjector:
    base: np.ndarray
    projector: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray


def _projectors(P: Polyhedron) -> List[_FaceProjector]:
    result = []
    for k in range(P.dim + 1):
        for F in faces(P, k):
            base = np.array([float(x) for x in F.vertices[0]])
            A = direction_lattice(F).matrix.astype(float)
            projector = A @ np.linalg.pinv(A) if A.shape[1] else np.zeros((P.ambient, P.ambient))
            inequalities = F.inequalities
            normals = np.array([[float(x) for x in h.normal] for h in inequalities]).reshape(
                len(inequalities), P.ambient
            )
            offsets = np.array([float(h.offset) for h in inequalities])
            result.append(_FaceProjector(base, projector, normals, offsets))
    return result


def distance_to_cell(P: Polyhedron, points: np.ndarray) -> np.ndarray:
    """
    Euclidean distance from each row to P. The nearest point lies in the
    relative interior of some face F and is the projection onto aff(F).
    """
    points = np.atleast_2d(points)
    best = np.full(len(points), np.inf)
    for face in _projectors(P):
        projected = face.base + (points - face.base) @ face.projector.T
        slack = projected @ face.normals.T - face.offsets
        feasible = np.all(slack >= -1e-9 * (1 + np.abs(face.offsets)), axis=1)
        distance = np.linalg.norm(points - projected, axis=1)
        best = np.where(feasible, np.minimum(best, distance), best)
    return best


def one_sided_hausdorff(
    sample: AmoebaSample, C: WeightedComplex, window: Optional[Window] = None
) -> float:
    """Largest distance from a sample point inside the window to the support of C"""
    lo, hi = window or get_settings().amoeba_window
    if C.ambient != sample.points.shape[1]:
        raise AmoebaError(
            f"sample of dimension {sample.points.shape[1]} against a complex in R^{C.ambient}"
        )
    points = sample.points[np.all((sample.points >= lo) & (sample.points <= hi), axis=1)]
    if len(points) == 0:
        raise AmoebaError("empty sample")
    distances = np.min([distance_to_cell(c.polyhedron, points) for c in C.cells], axis=0)
    return float(np.max(distances))


def approximation_run(
    p: TropicalPolynomial,
    l: int,
    m: int,
    grid: Optional[int] = None,
    window: Optional[Window] = None,
) -> ApproximationReport:
    """
    Amoeba of f_{l,m} on the window against the tropical curve it approaches.

    The amoeba of f_{l,1} is sampled on the window dilated by m and pulled
    back along z -> z^m. The corner locus of max{l * c_a + <a, x>} is
    l * V_T(p), so the sample is measured against (l/m) * V_T(p).

    Args:
        p: plane tropical polynomial with at least two terms
        l: coefficient exponent scale
        m: monomial exponent scale
        grid: moduli and phases per axis, settings default when None
        window: LO, HI for the Log coordinates, settings default when None

    Returns:
        ApproximationReport with the one-sided distance and the sample
    """
    if p.n != 2:
        raise AmoebaError(f"approximation runs are implemented for plane curves, got n={p.n}")
    lo, hi = window or get_settings().amoeba_window
    f = build_flm(p, l, 1)
    sample = rescale(sample_amoeba(f, grid, (lo * m, hi * m)), m)
    target = hypersurface(p)
    if l != m:
        target = scale_complex(target, Fraction(l, m))
    if not is_effective(target):
        logger.warning("Tropical curve has negative weights", extra={"polynomial": str(p)})
    distance = one_sided_hausdorff(sample, target, (lo, hi))
    codim = p.n - 1
    report = ApproximationReport(l, m, distance, sample, f"1/{m}^{codim}")
    logger.info("Approximation run", extra={"l": l, "m": m, "distance": distance})
    return report


def write_csv(sample: AmoebaSample, target: Union[str, Path, IO]) -> None:
    """Header x1,...,xn then one point per line, 17 significant digits"""
    header = ",".join(f"x{i + 1}" for i in range(sample.points.shape[1]))
    np.savetxt(target, sample.points, fmt="%.17g", delimiter=",", header=header, comments="")


def write_gnuplot(sample: AmoebaSample, target: Union[str, Path, IO]) -> None:
    """Whitespace separated columns with a commented header, readable by `plot 'file'`"""
    header = f"amoeba of {sample.source}, t = {sample.t:.17g}\n" + " ".join(
        f"x{i + 1}" for i in range(sample.points.shape[1])
    )
    np.savetxt(target, sample.points, fmt="%.17g", delimiter=" ", header=header)


def distances_by_m(
    p: TropicalPolynomial,
    ms: Sequence[int],
    grid: Optional[int] = None,
    window: Optional[Window] = None,
) -> List[Tuple[int, float]]:
    """(m, distance) for the family f_{m,m}"""
    return [(m, approximation_run(p, m, m, grid, window).distance) for m in ms]
