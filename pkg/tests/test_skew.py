"""Skew product validation, normalization and symbolic iterates"""

import pytest

from core.polynomials import Poly1, SkewPoly
from core.rational import ComplexRational
from core.skew import (
    IterateBudgetError, SkewProduct, SkewProductError, centroids, is_normal_form, iterate_symbolic, normalize,
)
from ui.expression import parse_map


def test_degrees(maps):
    f = maps["inverse_family"]
    assert (f.delta, f.d, f.l) == (2, 5, 3)
    assert f.leading_is_monomial()
    assert not f.nondegenerate
    assert maps["torus"].nondegenerate


def test_validation_errors():
    with pytest.raises(SkewProductError, match="depend only on z"):
        parse_map("(z + w, w^2)")
    with pytest.raises(SkewProductError, match="degree of p"):
        parse_map("(z, w^2)")
    with pytest.raises(SkewProductError, match="w-degree"):
        parse_map("(z^2, z*w)")
    with pytest.raises(SkewProductError, match="identically zero"):
        parse_map("(z^2, w - w)")


def test_laurent_input_needs_opt_in():
    text = "(z^2, z^(-1)*w^2 + w^2)"
    with pytest.raises(SkewProductError):
        parse_map(text)
    f = parse_map(text, allow_laurent=True)
    assert not f.is_polynomial


def test_centroids_of_translated_example(maps):
    cent = centroids(maps["finite_translated"])
    assert cent.zeta.is_zero()
    assert cent.zeta_z.num == Poly1.monomial(1, -1)
    assert cent.zeta_z.den == Poly1.constant(1)
    assert cent.zeta_z.evaluate(2.0) == pytest.approx(-2.0)


def test_normalize_removes_translation(maps):
    normalized = normalize(maps["finite_translated"])
    assert normalized.laurent_ok
    assert normalized.scaled_exactly
    assert str(normalized.map.p) == "z^3"
    assert str(normalized.map.q) == "z*w^2 + z"
    assert is_normal_form(normalized.map)


def test_normalize_scales_exactly():
    normalized = normalize(parse_map("(2*z^2, w^2)"))
    assert normalized.scaled_exactly
    assert normalized.map.p == Poly1.monomial(2)
    c1, c2 = normalized.scale.exact()
    assert c1 == 2 and c2 == 1
    r1, r2 = normalized.scale.residuals()
    assert r1 < 1e-20 and r2 < 1e-20


def test_irrational_scale_keeps_translation_form():
    normalized = normalize(parse_map("(2*z^3, w^2)"))
    assert normalized.laurent_ok
    assert not normalized.scaled_exactly
    c1, _ = normalized.scale.numeric()
    assert abs(c1 ** 2 - 2) < 1e-12
    # the float normal form is monic in z
    numeric = normalized.numeric_map()
    assert numeric.p[0] == pytest.approx(1.0)


def test_non_laurent_normalization():
    # b_1 / b_2 = 1 / (z - 1) leaves a non-monomial denominator
    normalized = normalize(parse_map("(z^2, (z - 1)*w^2 + w)"))
    assert not normalized.laurent_ok
    assert normalized.map is None
    with pytest.raises(SkewProductError):
        normalized.numeric_map()


def test_normal_form_check(maps):
    assert is_normal_form(maps["finite"])
    assert not is_normal_form(maps["finite_translated"])
    assert not is_normal_form(parse_map("(z^2 + z, w^2)"))


def test_iterate_symbolic():
    f = parse_map("(z^2, z*w^2)")
    p2, q2 = iterate_symbolic(f, 2)
    assert p2 == Poly1.monomial(4)
    assert q2 == SkewPoly.from_dict({(4, 4): 1})


def test_iterate_matches_float_composition(maps):
    f = maps["rotated_family"]
    p3, q3 = iterate_symbolic(f, 3)
    z, w = 0.7 + 0.2j, 0.3 - 0.4j
    z1, w1 = f(z, w)
    z2, w2 = f(z1, w1)
    z3, w3 = f(z2, w2)
    assert p3.evaluate(z) == pytest.approx(z3)
    assert q3.evaluate(z, w) == pytest.approx(w3)


def test_iterate_budget():
    f = parse_map("(z^2 + 1, w^3 + z*w + 1)")
    with pytest.raises(IterateBudgetError):
        iterate_symbolic(f, 4, budget=50)


def test_exact_evaluation():
    f = parse_map("(z^2 - 1, z^2*w^2)")
    z, w = f(ComplexRational(1, 1), ComplexRational(0, 1))
    assert z == ComplexRational(-1, 2)
    assert w == ComplexRational(0, -2)


def test_to_json(maps):
    data = maps["finite"].to_json()
    assert data == {"p": "z^3", "q": "z*w^2 + z", "delta": 3, "d": 2, "l": 1, "nondegenerate": False}
    assert isinstance(maps["finite"], SkewProduct)
