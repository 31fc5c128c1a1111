"""
Unit tests for weighted complexes, balancing and strong extremality
"""
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from app.exceptions import ComplexError
from app.services.complexes import (
    _sub_independent,
    build_complex,
    components,
    facet_star,
    is_balanced,
    is_effective,
    is_strongly_extremal,
    projection_along,
    scale_complex,
    scale_weights,
)
from app.services.lattice import int_matrix, invariant_factors, lattice_rank, minor
from app.services.polyhedra import contains, from_generators, in_relative_interior

from tests.conftest import rays_complex


def inward_step_is_inside(cell, base, v):
    """base + eps*v is in the relative interior of the cell for a small exact eps"""
    eps = Fraction(1, 10**6)
    x = tuple(b + eps * c for b, c in zip(base, v))
    return in_relative_interior(cell, x)


class TestBuildComplex:
    def test_tropical_line(self, tropical_line):
        assert tropical_line.dim == 1
        assert len(tropical_line.facets) == 1
        assert tropical_line.incidence == ((0, 1, 2),)

    def test_segment(self):
        C = build_complex([(from_generators([(0, 0), (1, 0)]), 1)])
        assert len(C.facets) == 2
        assert C.incidence == ((0,), (0,))

    def test_not_a_complex(self):
        cells = [
            (from_generators([(0, 0)], [(1, 0)]), 1),
            (from_generators([(1, -1)], [(0, 1)]), 1),
        ]
        with pytest.raises(ComplexError, match="not a complex"):
            build_complex(cells)

    def test_not_pure(self):
        cells = [
            (from_generators([(0, 0)], [(1, 0)]), 1),
            (from_generators([(0, 0)], [(1, 0), (0, 1)]), 1),
        ]
        with pytest.raises(ComplexError, match="not pure"):
            build_complex(cells)

    def test_zero_weight(self):
        with pytest.raises(ComplexError):
            build_complex([(from_generators([(0, 0)], [(1, 0)]), 0)])

    def test_duplicate_cell(self):
        ray = from_generators([(0, 0)], [(1, 0)])
        with pytest.raises(ComplexError, match="not a complex"):
            build_complex([(ray, 1), (ray, 1)])


class TestFacetStar:
    def test_tropical_line(self, tropical_line):
        star = facet_star(tropical_line, 0)
        assert star.frame == ()
        assert star.base == (0, 0)
        assert [b.direction for b in star.branches] == [(1, 1), (-1, 0), (0, -1)]
        assert [b.weight for b in star.branches] == [1, 1, 1]

    def test_segment_endpoint(self):
        C = build_complex([(from_generators([(0, 0), (1, 0)]), 1)])
        index = next(i for i, W in enumerate(C.facets) if W.vertices == ((0, 0),))
        (branch,) = facet_star(C, index).branches
        assert branch.direction == (1, 0)

    def test_half_plane_along_z_axis(self):
        quadrant = from_generators([(0, 0, 0)], [(1, 0, 0), (0, 0, 1), (0, 0, -1)])
        C = build_complex([(quadrant, 1)])
        star = facet_star(C, 0)
        assert star.frame == ((0, 0, 1),)
        (branch,) = star.branches
        # unique up to adding multiples of the frame
        assert branch.direction[:2] == (1, 0)

    def test_branches_are_saturated_and_inward(self, balanced_two_cycle, tropical_line):
        for C in (balanced_two_cycle, tropical_line):
            for idx in range(len(C.facets)):
                star = facet_star(C, idx)
                for b in star.branches:
                    columns = list(star.frame) + [b.direction]
                    assert invariant_factors(int_matrix(columns, C.ambient)) == [1] * len(columns)
                    cell = C.cells[b.cell].polyhedron
                    assert inward_step_is_inside(cell, star.base, b.direction)

    def test_bad_index(self, tropical_line):
        with pytest.raises(ComplexError):
            facet_star(tropical_line, 3)


class TestBalancing:
    def test_tropical_line_balanced(self, tropical_line):
        report = is_balanced(tropical_line)
        assert report.balanced
        assert report.failing_minors == []

    def test_unbalanced_weights(self, unbalanced_line):
        report = is_balanced(unbalanced_line)
        assert not report.balanced
        assert report.facets[0].defect == (1, 1)
        assert report.failing_minors == [(0, (1,)), (0, (2,))]

    def test_parallel_lines_vacuously_balanced(self):
        lines = [
            (from_generators([(0, 0)], [(1, 0), (-1, 0)]), 1),
            (from_generators([(0, 1)], [(1, 0), (-1, 0)]), 3),
        ]
        C = build_complex(lines)
        assert C.facets == ()
        assert is_balanced(C).balanced

    def test_two_cycle(self, balanced_two_cycle):
        assert is_balanced(balanced_two_cycle).balanced

    def test_relabeling_invariance(self):
        pairs = [((1, 1), 2), ((-1, 0), 1), ((0, -1), 1)]
        for order in [(0, 1, 2), (2, 0, 1), (1, 2, 0)]:
            directions = [pairs[i][0] for i in order]
            weights = [pairs[i][1] for i in order]
            report = is_balanced(rays_complex((3, -2), directions, weights))
            assert not report.balanced
            assert report.facets[0].defect == (1, 1)

    def test_minor_and_projection_criteria_agree(self, rng):
        for _ in range(30):
            directions = []
            while len(directions) < 3:
                d = (rng.randint(-3, 3), rng.randint(-3, 3))
                # no two rays may point the same way
                same_way = any(
                    d[0] * e[1] == d[1] * e[0] and d[0] * e[0] + d[1] * e[1] > 0
                    for e in directions
                )
                if d != (0, 0) and not same_way:
                    directions.append(d)
            weights = [rng.choice([-2, -1, 1, 2, 3]) for _ in directions]
            C = build_complex(
                [(from_generators([(0, 0)], [d]), w) for d, w in zip(directions, weights)],
                verify=False,
            )
            for f in is_balanced(C).facets:
                assert (not any(f.defect)) == (not f.failing_minors)


class TestProjection:
    def test_point_facet(self, tropical_line):
        H = projection_along(facet_star(tropical_line, 0))
        assert H.tolist() == [[1, 0], [0, 1]]

    def test_frame_examples(self):
        half_plane = from_generators([(0, 0)], [(1, 0), (-1, 0), (0, 1)])
        C = build_complex([(half_plane, 1)])
        assert projection_along(facet_star(C, 0)).tolist() == [[0, 1]]

        diagonal = from_generators([(0, 0)], [(1, 1), (-1, -1), (0, 1)])
        C = build_complex([(diagonal, 1)])
        H = projection_along(facet_star(C, 0))
        assert (H @ np.array([1, 1], dtype=object)).tolist() == [0]
        assert lattice_rank(H) == 1


class TestStrongExtremality:
    def test_tropical_line(self, tropical_line):
        report = is_strongly_extremal(tropical_line)
        assert report.strongly_extremal
        assert report.expected_valency == 3

    def test_two_lines_valency(self, two_lines):
        report = is_strongly_extremal(two_lines)
        assert not report.strongly_extremal
        assert not report.valency_ok
        assert report.facets[0].valency == 4

    def test_disjoint_lines(self, two_disjoint_lines):
        report = is_strongly_extremal(two_disjoint_lines)
        assert not report.connected
        assert report.components == 2
        assert not report.strongly_extremal

    def test_two_cycle_in_r3(self, balanced_two_cycle):
        report = is_strongly_extremal(balanced_two_cycle)
        assert report.expected_valency == 3
        assert report.strongly_extremal

    def test_warns_on_unbalanced(self, unbalanced_line, mocker):
        warning = mocker.patch("app.services.complexes.logger.warning")
        is_strongly_extremal(unbalanced_line)
        warning.assert_called_once()

    def test_sub_independence_matches_brute_force(self, rng):
        for _ in range(30):
            vectors = [(rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(3)]
            if any(v == (0, 0) for v in vectors):
                continue
            brute = all(
                lattice_rank(int_matrix(list(s), 2)) == len(s)
                for k in range(1, 3)
                for s in combinations(vectors, k)
            )
            assert _sub_independent(vectors) == brute


class TestHelpers:
    def test_scale_complex(self, tropical_line):
        C = rays_complex((1, 1), [(1, 1), (-1, 0), (0, -1)])
        scaled = scale_complex(C, 2)
        assert scaled.facets[0].vertices == ((2, 2),)
        assert is_balanced(scaled).balanced

    def test_scale_weights_and_effective(self, tropical_line):
        assert is_effective(tropical_line)
        negated = scale_weights(tropical_line, -1)
        assert negated.weights == (-1, -1, -1)
        assert not is_effective(negated)
        assert is_balanced(negated).balanced

    def test_components(self, tropical_line):
        count, labels = components(tropical_line)
        assert count == 1
        assert list(labels) == [0, 0, 0]

    def test_minor_matches_two_cycle(self, balanced_two_cycle):
        star = facet_star(balanced_two_cycle, 0)
        total = star.weighted_sum
        for J in combinations(range(1, 4), 2):
            assert minor([star.frame[0], total], J) == 0
        assert contains(balanced_two_cycle.facets[0], (0, 0, 5))
