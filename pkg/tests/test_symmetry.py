"""Symmetry groups: Sigma_p, the condition lattice, bounds mode and the brute-force oracle"""

import random
from fractions import Fraction

import numpy as np
import pytest

from core.groups import (
    GroupKind, Justification, StatusKind, SymmetryElement, element_from_angles, level_exponent, turn_pairs,
)
from core.lattice import IntLattice2, annihilator, hnf_basis
from core.polynomials import Poly1, SkewPoly
from core.rational import ComplexRational, RationalTurn, turns_up_to_order
from core.skew import IterateBudgetError, SkewProduct, normalize
from core.symmetry import (
    MODE_BOUNDS, MODE_GENERAL, MODE_LATTICE, MODE_NON_LAURENT, NormalizationRequiredError,
    bd_gate_subgroup, brute_force_group, level_vectors, modulus_filter, oracle_agrees, sigma_group,
    sigma_order, symmetry_group,
)
from core.green import GreenEvaluator
from core.sampling import sample_julia_base
from ui.expression import parse_map

FAST = {"samples": 200}


class TestBaseSymmetry:
    def test_orders(self):
        assert sigma_order(Poly1.from_dict({2: 1, 0: -1})) == 2
        assert sigma_order(Poly1.from_dict({4: 1, 1: 1})) == 3
        assert sigma_order(Poly1.from_dict({6: 1, 2: 1, 0: 5})) == 2
        assert sigma_order(Poly1.monomial(3)) is None

    def test_requires_normal_form(self):
        with pytest.raises(NormalizationRequiredError):
            sigma_order(Poly1.from_dict({2: 1, 1: 1}))
        with pytest.raises(NormalizationRequiredError):
            sigma_order(Poly1.monomial(2, 2))

    def test_group_recentres(self):
        base = sigma_group(Poly1.from_dict({2: 1, 1: 2}))
        assert base.zeta == ComplexRational(-1, 0)
        assert base.is_infinite
        assert base.group.kind == GroupKind.FULL_TORUS

        base = sigma_group(Poly1.from_dict({3: 1, 0: 1}))
        assert base.order == 3
        assert base.rotations() == [RationalTurn(0, 3), RationalTurn(1, 3), RationalTurn(2, 3)]

    @pytest.mark.parametrize("seed", range(50))
    def test_order_matches_rotation_search(self, seed):
        rng = random.Random(seed)
        delta = rng.randint(2, 8)
        lower = rng.sample(range(delta - 1), rng.randint(0, min(3, delta - 1)))
        coeffs = {delta: 1}
        coeffs.update({j: rng.choice([-3, -2, -1, 1, 2, 3]) for j in lower})
        p = Poly1.from_dict(coeffs)
        order = sigma_order(p)

        points = np.array([0.3 + 0.4j, -0.7 + 0.1j, 0.2 - 0.9j, 1.1 + 0.5j])
        values = np.polyval(p.to_numpy(), points)
        for mu in turns_up_to_order(24):
            rotated = np.polyval(p.to_numpy(), mu.to_complex() * points)
            commutes = np.allclose(rotated, mu.to_complex() ** delta * values, atol=1e-9)
            expected = order is None or order % mu.order == 0
            assert commutes == expected, f"{p}: rotation {mu}"


class TestWorkedExamples:
    def test_finite_group(self, maps):
        result = symmetry_group(maps["finite"], **FAST)
        assert result.mode == MODE_LATTICE
        assert result.group.kind == GroupKind.FINITE
        assert result.group.order == 4
        assert result.group.describe() == "Z/2 x Z/2 (order 4)"
        assert result.group.lattice == hnf_basis([(2, 0), (0, 2)])
        assert result.status.kind == StatusKind.EXACT
        assert result.status.justification == Justification.MONOMIAL_BASE_AND_FIBER
        assert result.conditions.is_stable()

    def test_translated_example_realizes_affine_maps(self, maps):
        result = symmetry_group(maps["finite_translated"], **FAST)
        assert result.group.order == 4
        cent = result.normalized.centroids
        half = RationalTurn(1, 2)
        identity = RationalTurn(0, 1)

        flip_both = SymmetryElement(half, half).realize(cent)
        assert flip_both.base == Poly1.monomial(1, -1)
        assert flip_both.fiber == SkewPoly.from_dict({(0, 1): -1})

        flip_fiber = SymmetryElement(identity, half).realize(cent)
        assert flip_fiber.fiber == SkewPoly.from_dict({(0, 1): -1, (1, 0): -2})

        flip_base = SymmetryElement(half, identity).realize(cent)
        assert flip_base.fiber == SkewPoly.from_dict({(0, 1): 1, (1, 0): 2})
        z, w = flip_base(0.5 + 0.1j, 0.2j)
        assert z == pytest.approx(-0.5 - 0.1j)
        assert w == pytest.approx(0.2j + 1.0 + 0.2j)

    def test_level_maps_and_termwise_commutation(self, maps):
        result = symmetry_group(maps["finite"], **FAST)
        normalized = result.normalized
        identity = RationalTurn(0, 1)

        assert level_exponent(1, 3, 2, 1) == 1
        assert level_exponent(2, 3, 2, 1) == 5
        assert level_exponent(2, 2, 2, 1) == 4
        element = SymmetryElement(RationalTurn(1, 4), identity)
        assert element.level(1, 3, 2, 1) == SymmetryElement(RationalTurn(3, 4), RationalTurn(1, 4))

        assert SymmetryElement(RationalTurn(1, 2), RationalTurn(1, 2)).commutes_with(normalized)
        assert not SymmetryElement(identity, RationalTurn(1, 4)).commutes_with(normalized)
        assert element_from_angles(0.3, np.pi).commutes_with(normalized)
        # commutes with f but not with f^2, so the closure drops it
        assert element.commutes_with(normalized)
        assert not element.level(1, 3, 2, 1).commutes_with(normalized)
        assert not result.group.contains(element.mu, element.nu)

    def test_circle_bundle_family(self, maps):
        result = symmetry_group(maps["basilica_bundle"], **FAST)
        group = result.group
        assert group.kind == GroupKind.ONE_DIM_FAMILY
        assert group.character == (1, 0) and group.torsion == 2
        assert group.describe() == "{(mu, nu) : mu^2 = 1}"
        assert result.status.justification == Justification.LEADING_FIBER_MONOMIAL
        assert result.sigma.order == 2

    def test_rotated_family(self, maps):
        group = symmetry_group(maps["rotated_family"], **FAST).group
        assert group.lattice == hnf_basis([(2, -2)])
        assert group.character == (1, -1) and group.torsion == 2
        assert group.describe() == "{(mu, nu) : mu^2 = nu^2}"

    def test_inverse_family(self, maps):
        group = symmetry_group(maps["inverse_family"], **FAST).group
        assert group.character == (1, 1) and group.torsion == 1
        assert group.describe() == "{(mu, nu) : mu = nu^-1}"

    def test_torus_and_product(self, maps):
        torus = symmetry_group(maps["torus"], **FAST).group
        assert torus.kind == GroupKind.FULL_TORUS
        product = symmetry_group(maps["product"], **FAST).group
        assert product.describe() == "{(mu, nu) : nu^2 = 1}"

    def test_bounds_coincide(self, maps):
        result = symmetry_group(maps["bounds"], **FAST)
        assert result.mode == MODE_BOUNDS
        assert result.is_exact
        assert result.status.justification == Justification.BOUNDS_COINCIDE
        assert result.group.lattice == hnf_basis([(1, 0)])
        assert result.bounds.lower.same_as(result.bounds.upper)
        assert result.bounds.lower.is_subgroup_of(result.bounds.upper)
        assert result.group.is_subgroup_of(symmetry_group(maps["torus"], **FAST).group)
        assert not symmetry_group(maps["torus"], **FAST).group.is_subgroup_of(result.group)

    @pytest.mark.parametrize("l", [1, 2, 3])
    def test_leading_binomial_family(self, l):
        # |mu^l z^l - 1| = |z^l - 1| on the unit circle only when mu^l = 1
        result = symmetry_group(parse_map(f"(z^2, (z^{l} - 1)*w^2)"), **FAST)
        assert result.mode == MODE_BOUNDS
        assert result.is_exact
        assert result.status.justification == Justification.BOUNDS_COINCIDE
        assert result.group.lattice == hnf_basis([(l, 0)])
        assert result.bounds.upper.same_as(result.bounds.lower)
        assert all((mu ** l).is_identity() for mu, _ in result.group.elements_with_order_at_most(6))

    def test_general_mode_candidate(self):
        result = symmetry_group(parse_map("(z^2, (z + 1)*w^2 + z + 1)"), **FAST)
        assert result.mode == MODE_GENERAL
        assert result.status.kind == StatusKind.CANDIDATE_UPPER_BOUND
        assert result.group.order == 2
        assert result.notes

    def test_general_mode_trivial_content(self):
        result = symmetry_group(parse_map("(z^2, (z + 1)*w^2 + 1)"), **FAST)
        assert result.mode == MODE_GENERAL
        assert result.status.justification == Justification.FIBER_CONTENT_TRIVIAL
        assert result.group.order == 2

    def test_non_laurent_bounds(self):
        result = symmetry_group(parse_map("(z^2, (z - 1)*w^2 + w)"), **FAST)
        assert result.mode == MODE_NON_LAURENT
        assert result.status.kind == StatusKind.BOUNDS_PAIR
        assert result.group.order == 1
        assert not result.is_exact
        assert any("Gamma_f is finite" in note for note in result.notes)
        assert result.status.upper.same_as(result.sigma.group)


class TestBoundsPieces:
    def test_gate_subgroup(self):
        torus = annihilator(IntLattice2())
        b_d = {1: ComplexRational(1, 0), 0: ComplexRational(-1, 0)}
        gate = bd_gate_subgroup(b_d, 1, torus)
        assert gate.character == (1, 0) and gate.torsion == 1

    def test_filter_on_unit_circle(self, maps):
        f = maps["bounds"]
        points = sample_julia_base(GreenEvaluator(f.to_numeric()), 100, seed=3)
        assert modulus_filter(f, RationalTurn(0, 1), points, 1e-6).passed
        rejected = modulus_filter(f, RationalTurn(1, 2), points, 1e-6)
        assert not rejected.passed
        assert rejected.deviation > 0.1


class TestOracle:
    def test_finite_example(self, maps):
        result = symmetry_group(maps["finite"], **FAST)
        oracle = brute_force_group(maps["finite"], max_order=8, depth=3, max_workers=2)
        assert len(oracle) == 4
        assert oracle_agrees(result, oracle, 8)

    def test_inverse_family(self, maps):
        result = symmetry_group(maps["inverse_family"], **FAST)
        oracle = brute_force_group(maps["inverse_family"], max_order=6, depth=2, max_workers=2)
        assert len(oracle) == 12
        assert all(mu * nu == RationalTurn(0, 1) for mu, nu in oracle)
        assert oracle_agrees(result, oracle, 6)

    def test_level_vectors_include_closure_images(self, maps):
        vectors = level_vectors(maps["finite"], 2)
        assert (0, -2) in vectors
        assert hnf_basis(vectors) == hnf_basis([(2, 0), (0, 2)])

    @pytest.mark.parametrize("family", [MODE_LATTICE, MODE_GENERAL, MODE_BOUNDS])
    @pytest.mark.parametrize("seed", range(8))
    def test_random_conjugated_maps_agree(self, family, seed):
        rng = random.Random(1000 + 10 * seed)
        normal = _random_normal_form(rng, family)
        f = _conjugate(normal, rng)
        assert normalize(normal).is_identity

        result = symmetry_group(f, **FAST)
        assert result.mode == family
        translated = result.normalized.map
        assert translated.p.support() == normal.p.support()
        assert translated.q.support() == normal.q.support()

        oracle = brute_force_group(normal, max_order=12, depth=2, max_workers=2)
        assert (RationalTurn(0, 1), RationalTurn(0, 1)) in oracle
        if family == MODE_BOUNDS:
            lower = result.bounds.lower.elements_with_order_at_most(12)
            assert sorted(lower) == oracle, f"{f}: {result.bounds.lower.describe()}"
            upper = set(result.bounds.upper.elements_with_order_at_most(12))
            assert upper.issuperset(oracle)
        assert oracle_agrees(result, oracle, 12), f"{f}: {result.group.describe()}"

    @pytest.mark.parametrize("seed", range(4))
    def test_depth_four_matches_depth_two(self, seed):
        rng = random.Random(500 + seed)
        normal = _random_normal_form(rng, rng.choice([MODE_LATTICE, MODE_GENERAL]), max_degree=2, max_lead=1)
        f = _conjugate(normal, rng)
        deep = brute_force_group(f, max_order=12, depth=4, max_workers=2)
        assert deep == brute_force_group(normal, max_order=12, depth=2, max_workers=2)
        assert oracle_agrees(symmetry_group(f, **FAST), deep, 12)

    def test_oracle_checks_each_term(self):
        # w^2 + z: level 1 forces mu = nu^2 and level 2 (w^4 + 2z w^2 + 2z^2) adds nothing new
        f = parse_map("(z^2, w^2 + z)")
        oracle = brute_force_group(f, max_order=6, depth=3, max_workers=1)
        assert all(mu == nu * nu for mu, nu in oracle)
        assert sorted(nu for _, nu in oracle) == sorted(turns_up_to_order(6))
        assert (RationalTurn(1, 3), RationalTurn(2, 3)) in oracle

    def test_identity_only_prunes_deeper_levels(self):
        # nu^2 = nu^3 = 1 and mu = nu^3 already at level 1
        f = parse_map("(z^2 + 1, w^3 + w + z + 1)")
        assert brute_force_group(f, max_order=12, depth=4, budget=50, max_workers=1) == [
            (RationalTurn(0, 1), RationalTurn(0, 1))]
        with pytest.raises(IterateBudgetError):
            level_vectors(f, 4, budget=50)

    def test_turn_pairs_cover_oracle_range(self):
        pairs = list(turn_pairs(4))
        assert len(pairs) == 36
        assert (RationalTurn(1, 4), RationalTurn(1, 2)) in pairs



def _random_normal_form(rng: random.Random, family: str, max_degree: int = 4, max_lead: int = 3) -> SkewProduct:
    """
    Normal-form map with monic p~ and a b~_d(z) w^d term whose top coefficient is 1
    lattice: b~_d monomial; general: b~_d binomial plus lower w-terms; bounds: q~ = b~_d(z) w^d
    """
    delta = rng.randint(2, max_degree)
    d = rng.randint(2, max_degree)
    l = rng.randint(1, max_lead)

    p = {delta: 1}
    for j in rng.sample(range(delta - 1), rng.randint(0, min(2, delta - 1))):
        p[j] = Fraction(rng.randint(1, 5), rng.choice([1, 2]))

    q = {(l, d): 1}
    if family != MODE_LATTICE:
        q[(rng.randint(0, l - 1), d)] = Fraction(rng.choice([-2, -1, 1, 3]), rng.choice([1, 2]))
    if family != MODE_BOUNDS:
        for _ in range(rng.randint(1, 2)):
            q[(rng.randint(0, 3), rng.randint(0, d - 2))] = Fraction(rng.randint(1, 5), rng.choice([1, 3]))
    return SkewProduct(Poly1.from_dict(p), SkewPoly.from_dict(q))


def _conjugate(normal: SkewProduct, rng: random.Random) -> SkewProduct:
    """H f~ H^-1 with H(u, v) = (lam u + zeta, kappa (v + t(u))), all exact over Q(i)"""
    lam = rng.choice([1, 2])
    kappa = rng.choice([1, 2])
    zeta = ComplexRational(rng.choice([0, 1, -1, Fraction(1, 2)]), rng.choice([0, 0, 1]))
    t = Poly1.from_dict({rng.randint(0, 1): rng.choice([0, 1, Fraction(-1, 2)])})

    u = Poly1.from_dict({1: Fraction(1, lam), 0: -zeta / lam})
    base_image = normal.p.compose(u)
    p = base_image.scale(lam) + Poly1.constant(zeta)
    v = SkewPoly.from_dict({(0, 1): Fraction(1, kappa)}) - SkewPoly.from_z(t.compose(u))
    q = (normal.q.substitute(u, v) + SkewPoly.from_z(t.compose(base_image))).scale(kappa)
    return SkewProduct(p, q)
