"""
Unit tests for amoeba sampling, rescaling and distances to tropical curves
"""
import logging
import math
from fractions import Fraction

import numpy as np
import pytest

from app.exceptions import AmoebaError
from app.services.amoeba import (
    AmoebaSample,
    LaurentPolynomial,
    _fiber_points,
    approximation_run,
    build_flm,
    distances_by_m,
    one_sided_hausdorff,
    rescale,
    sample_amoeba,
    write_csv,
    write_gnuplot,
)
from app.services.complexes import scale_complex, scale_weights

from tests.conftest import poly

LOG2 = math.log(2)


def line_polynomial():
    return LaurentPolynomial(2, (((0, 0), 1 + 0j), ((1, 0), 1 + 0j), ((0, 1), 1 + 0j)))


def manual_sample(points):
    points = np.array(points, dtype=float)
    return AmoebaSample(points, np.exp(points).astype(complex), math.e, "manual")


class TestBuildFlm:
    def test_tropical_line(self, line_poly):
        f = build_flm(line_poly, 1, 1)
        assert f.terms == (((0, 0), 1), ((0, 1), 1), ((1, 0), 1))

    def test_scaled_exponents(self, line_poly):
        f = build_flm(line_poly, 3, 3)
        assert [alpha for alpha, _ in f.terms] == [(0, 0), (0, 3), (3, 0)]
        assert all(c == 1 for _, c in f.terms)

    def test_coefficients(self):
        f = build_flm(poly(1, {(1,): 1, (0,): 0}), 2, 1)
        assert dict(f.terms) == {(0,): 1, (1,): pytest.approx(math.exp(2))}

    def test_single_term(self):
        with pytest.raises(AmoebaError):
            build_flm(poly(2, {(1, 0): 0}), 1, 1)

    def test_nonpositive_parameters(self, line_poly):
        with pytest.raises(AmoebaError):
            build_flm(line_poly, 0, 1)


class TestSampling:
    def test_residuals(self):
        f = line_polynomial()
        sample = sample_amoeba(f, grid=60, window=(-3, 3))
        assert len(sample) > 0
        assert np.all(np.abs(1 + sample.roots[:, 0] + sample.roots[:, 1]) <= 1e-6)
        assert np.all(np.abs(f(sample.roots)) <= 1e-6 * f.magnitude(sample.roots))
        assert np.allclose(sample.points, np.log(np.abs(sample.roots)))
        assert np.all((sample.points >= -3) & (sample.points <= 3))

    def test_unit_circle(self):
        f = LaurentPolynomial(2, (((1, 0), 1 + 0j), ((0, 0), -1 + 0j)))
        sample = sample_amoeba(f, grid=40, window=(-3, 3))
        assert len(sample) > 0
        assert np.all(np.abs(sample.points[:, 0]) <= 1e-9)

    def test_witness_point(self):
        sample = sample_amoeba(line_polynomial(), grid=200, window=(-3, 3))
        gaps = np.linalg.norm(sample.points - np.array([-LOG2, -LOG2]), axis=1)
        assert gaps.min() < 0.1

    def test_degenerate_fiber(self):
        f = LaurentPolynomial(2, (((1, 0), 1 + 0j), ((0, 0), -1 + 0j)))
        points, degenerate = _fiber_points(f, 0, np.array([1 + 0j, 2 + 0j]))
        assert degenerate == 1
        assert points == []

    def test_rejects_higher_dimensions(self):
        f = LaurentPolynomial(3, (((0, 0, 0), 1 + 0j), ((1, 1, 1), 1 + 0j)))
        with pytest.raises(AmoebaError):
            sample_amoeba(f, grid=10)

    def test_log_base(self):
        f = line_polynomial()
        natural = sample_amoeba(f, grid=30, window=(-2, 2))
        base_ten = sample_amoeba(f, grid=30, window=(-2, 2), t=10.0)
        assert base_ten.t == 10.0
        assert np.allclose(base_ten.points, np.log10(np.abs(base_ten.roots)))
        assert natural.t == pytest.approx(math.e)


class TestRescale:
    def test_identity(self):
        sample = manual_sample([[1.0, 2.0]])
        assert np.array_equal(rescale(sample, 1).points, sample.points)

    def test_halving(self):
        scaled = rescale(manual_sample([[2.0, -4.0]]), 2)
        assert scaled.points.tolist() == [[1.0, -2.0]]
        assert scaled.t == pytest.approx(math.e**2)

    def test_composition(self):
        sample = manual_sample([[1.5, -0.3], [2.0, 4.0]])
        twice = rescale(rescale(sample, 2), 3)
        once = rescale(sample, 6)
        assert np.allclose(twice.points, once.points)
        assert twice.t == pytest.approx(once.t)

    def test_invalid_factor(self):
        with pytest.raises(AmoebaError):
            rescale(manual_sample([[0.0, 0.0]]), 0)


class TestHausdorff:
    def test_points_on_the_curve(self, tropical_line):
        sample = manual_sample([[0, 0], [1, 1], [-2, 0], [0, -3], [0.5, 0.5]])
        assert one_sided_hausdorff(sample, tropical_line) == pytest.approx(0, abs=1e-12)

    def test_witness_distance(self, tropical_line):
        sample = manual_sample([[-LOG2, -LOG2]])
        assert one_sided_hausdorff(sample, tropical_line) == pytest.approx(LOG2)

    def test_distance_to_nearest_ray(self, tropical_line):
        # (0, -1) on the downward ray is closer than the apex
        sample = manual_sample([[1.0, -1.0]])
        assert one_sided_hausdorff(sample, tropical_line) == pytest.approx(1.0)

    def test_window_filters_points(self, tropical_line):
        sample = manual_sample([[0.0, 0.0], [-4.5, 3.0]])
        assert one_sided_hausdorff(sample, tropical_line, (-4, 4)) == pytest.approx(0)

    def test_empty_sample(self, tropical_line):
        with pytest.raises(AmoebaError, match="empty sample"):
            one_sided_hausdorff(manual_sample(np.empty((0, 2))), tropical_line)

    def test_dimension_mismatch(self, balanced_two_cycle):
        with pytest.raises(AmoebaError):
            one_sided_hausdorff(manual_sample([[0.0, 0.0]]), balanced_two_cycle)

    def test_equivariance(self, tropical_line):
        sample = sample_amoeba(line_polynomial(), grid=40, window=(-2, 2))
        d = one_sided_hausdorff(sample, tropical_line)
        for m in (2, 3):
            shrunk = scale_complex(tropical_line, Fraction(1, m))
            assert one_sided_hausdorff(rescale(sample, m), shrunk) == pytest.approx(
                d / m, abs=1e-12
            )


class TestApproximation:
    def test_report(self, line_poly):
        report = approximation_run(line_poly, 2, 2, grid=40, window=(-4, 4))
        assert report.m == 2
        assert report.mass_normalization == "1/2^1"
        assert report.sample.t == pytest.approx(math.e**2)
        assert 0 < report.distance <= 0.70 / 2 + 0.05

    def test_rejects_higher_dimensions(self):
        with pytest.raises(AmoebaError):
            approximation_run(poly(3, {(0, 0, 0): 0, (1, 0, 0): 0}), 1, 1)

    @pytest.mark.parametrize("l, m", [(3, 3), (1, 3), (6, 3)])
    def test_measured_against_dilated_curve(self, l, m):
        # corner locus of f_{l,1} is l * V_T(p), pulled back by m
        p = poly(2, {(0, 0): 0, (1, 0): 3, (0, 1): 0})
        report = approximation_run(p, l, m, grid=120, window=(-6, 6))
        assert report.distance < 0.3

    def test_warns_on_negative_weights(self, mocker, caplog, line_poly, tropical_line):
        mocker.patch(
            "app.services.amoeba.hypersurface",
            return_value=scale_weights(tropical_line, -1),
        )
        with caplog.at_level(logging.WARNING, logger="app.services.amoeba"):
            approximation_run(line_poly, 1, 1, grid=20, window=(-3, 3))
        assert "negative weights" in caplog.text

    @pytest.mark.slow
    def test_convergence(self, line_poly):
        distances = dict(distances_by_m(line_poly, range(1, 7), grid=200, window=(-4, 4)))
        assert distances[1] >= 0.60
        for m, d in distances.items():
            assert d <= 0.70 / m + 0.02
        for m in range(2, 7):
            assert distances[m] <= distances[m - 1] + 0.02


class TestWriters:
    def test_csv(self, tmp_path):
        sample = manual_sample([[0.1, -2.0], [1.0 / 3.0, 4.0]])
        target = tmp_path / "amoeba.csv"
        write_csv(sample, target)
        lines = target.read_text().splitlines()
        assert lines[0] == "x1,x2"
        assert [float(x) for x in lines[2].split(",")] == [1.0 / 3.0, 4.0]

    def test_gnuplot(self, tmp_path):
        target = tmp_path / "amoeba.dat"
        write_gnuplot(manual_sample([[0.5, 0.25]]), target)
        lines = target.read_text().splitlines()
        assert lines[0].startswith("# amoeba of manual")
        assert lines[-1].split() == ["0.5", "0.25"]
