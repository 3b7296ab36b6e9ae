"""Julia-set sampling, numeric symmetry checks, compactness and pole sets"""

import math

import numpy as np
import pytest

from core.green import GreenEvaluator
from core.groups import SymmetryElement, element_from_angles
from core.rational import RationalTurn
from core.sampling import (
    COMPACT, NONCOMPACT, compactness_check, pole_set_check, sample_julia_base, verify_symmetry_numeric,
)
from core.skew import centroids
from core.symmetry import symmetry_group
from ui.expression import parse_map

TOL = 1e-3
SAMPLES = 512


def setup(f, count=SAMPLES, seed=0):
    evaluator = GreenEvaluator(f.to_numeric())
    return evaluator, centroids(f), sample_julia_base(evaluator, count, seed)


class TestSampler:
    def test_unit_circle(self, maps):
        evaluator = GreenEvaluator(maps["torus"].to_numeric())
        points = sample_julia_base(evaluator, 100, seed=1)
        assert np.allclose(np.abs(points), 1.0, atol=1e-9)

    def test_basilica_points_do_not_escape(self, maps):
        evaluator = GreenEvaluator(maps["basilica_bundle"].to_numeric())
        points = sample_julia_base(evaluator, 100, seed=2)
        assert float(np.max(evaluator.green_base(points))) < 1e-8

    def test_seeded(self, maps):
        evaluator = GreenEvaluator(maps["basilica_bundle"].to_numeric())
        first = sample_julia_base(evaluator, 30, seed=4)
        again = sample_julia_base(evaluator, 30, seed=4)
        other = sample_julia_base(evaluator, 30, seed=5)
        assert np.array_equal(first, again)
        assert not np.array_equal(first, other)


class TestVerify:
    def test_circle_bundle_elements(self, maps):
        evaluator, cent, points = setup(maps["basilica_bundle"])
        element = SymmetryElement(RationalTurn(1, 2), np.exp(0.37j))
        result = verify_symmetry_numeric(evaluator, cent, element, points, TOL)
        assert result.passed
        assert result.distance <= TOL

    def test_quarter_turn_is_rejected(self, maps):
        evaluator, cent, points = setup(maps["basilica_bundle"])
        element = SymmetryElement(RationalTurn(1, 4), RationalTurn(0, 1))
        result = verify_symmetry_numeric(evaluator, cent, element, points, TOL)
        assert not result.passed
        assert result.distance >= 10 * TOL
        assert result.base_distance >= 10 * TOL

    @pytest.mark.parametrize("name", ["basilica_bundle", "rotated_family"])
    def test_group_samples_pass(self, maps, name):
        f = maps[name]
        evaluator, cent, points = setup(f)
        group = symmetry_group(f, samples=200).group
        for element in group.sample_elements(3, seed=7):
            assert group.contains_numeric(*element.as_complex())
            assert verify_symmetry_numeric(evaluator, cent, element, points, TOL).passed

    @pytest.mark.parametrize("name, angles", [
        # (mu, mu) lies in the group; nudge nu off it
        ("rotated_family", (0.9, 0.9 + 0.05)),
        # mu = -1 lies in the group; nudge mu off it
        ("basilica_bundle", (math.pi + 0.05, 0.37)),
    ])
    def test_perturbed_element_fails(self, maps, name, angles):
        evaluator, cent, points = setup(maps[name])
        result = verify_symmetry_numeric(evaluator, cent, element_from_angles(*angles), points, TOL)
        assert not result.passed
        assert result.distance >= 10 * TOL

    def test_finite_group_elements(self, maps):
        f = maps["finite_translated"]
        evaluator, cent, points = setup(f)
        group = symmetry_group(f, samples=200).group
        for mu, nu in group.elements():
            assert verify_symmetry_numeric(evaluator, cent, SymmetryElement(mu, nu), points, TOL).passed

    def test_result_json(self, maps):
        evaluator, cent, points = setup(maps["torus"], count=8)
        identity = RationalTurn(0, 1)
        data = verify_symmetry_numeric(evaluator, cent, SymmetryElement(identity, identity), points,
                                       TOL, seed=3).to_json()
        assert data["element"] == [[0, 1], [0, 1]]
        assert data["seed"] == 3 and data["samples"] == 8 and data["tol"] == TOL


class TestCompactness:
    def test_root_of_unity_on_circle(self, maps):
        evaluator, _, points = setup(maps["bounds"], count=200)
        result = compactness_check(maps["bounds"], evaluator, points, 0.02, 0.1)
        assert result.verdict == NONCOMPACT
        assert result.method == "exact_root_of_unity"

    def test_root_off_julia(self, maps):
        f = maps["compact_bundle"]
        evaluator, _, points = setup(f, count=200)
        result = compactness_check(f, evaluator, points, 0.02, 0.1)
        assert result.verdict == COMPACT
        assert result.min_distance == pytest.approx(2.0, abs=0.1)

    def test_nondegenerate_is_compact(self, maps):
        evaluator, _, points = setup(maps["product"], count=20)
        result = compactness_check(maps["product"], evaluator, points, 0.02, 0.1)
        assert result.verdict == COMPACT
        assert result.method == "constant_leading_coefficient"

    def test_root_on_basilica(self):
        # b_d vanishes at the repelling fixed point (1 + sqrt 5)/2 of z^2 - 1
        f = parse_map("(z^2 - 1, (z^2 - z - 1)*w^2)")
        evaluator, _, points = setup(f, count=2000)
        result = compactness_check(f, evaluator, points, 0.02, 0.1)
        assert result.verdict == NONCOMPACT


class TestPoleSets:
    def test_polynomial_centroid_has_no_poles(self, maps):
        _, cent, points = setup(maps["finite_translated"], count=16)
        identity = RationalTurn(0, 1)
        result = pole_set_check(cent, SymmetryElement(identity, identity), points, 0.02)
        assert result.permuted and result.poles_on_julia == []

    def test_pole_on_circle(self):
        f = parse_map("(z^2, (z - 1)*w^2 + w)")
        _, cent, points = setup(f, count=2000)
        identity = RationalTurn(0, 1)
        kept = pole_set_check(cent, SymmetryElement(identity, identity), points, 0.02)
        assert kept.permuted
        assert len(kept.poles_on_julia) == 1
        moved = pole_set_check(cent, SymmetryElement(RationalTurn(1, 2), identity), points, 0.02)
        assert not moved.permuted
