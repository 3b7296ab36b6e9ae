"""Map expression tokenizer, parser, printer and evaluation"""

import random
from fractions import Fraction

import pytest

from core.polynomials import Poly1, SkewPoly
from core.rational import I, ComplexRational
from ui.expression import (
    BinOp, ExpressionError, MapExpression, Neg, Num, Pow, Var, evaluate_node, format_map, parse_expression,
    parse_map, read_map_source, tokenize,
)


def test_tokens():
    kinds = [(t.kind, t.text) for t in tokenize("2zw^3 - 1/3i")]
    assert kinds == [
        ("number", "2"), ("ident", "z"), ("ident", "w"), ("op", "^"), ("number", "3"),
        ("op", "-"), ("number", "1"), ("op", "/"), ("number", "3i"), ("end", ""),
    ]


def test_juxtaposition_multiplies():
    expr = parse_expression("(z^2, 2zw)")
    assert expr.second == BinOp("*", BinOp("*", Num(ComplexRational(2, 0)), Var("z")), Var("w"))
    assert parse_map("(z^2, zw^2)").q == SkewPoly.from_dict({(1, 2): 1})
    assert parse_map("(z^2, z(w + 1)^2)").q == SkewPoly.from_dict({(1, 2): 1, (1, 1): 2, (1, 0): 1})


def test_numbers():
    f = parse_map("(z^2 - 1/4, (1/2)*w^2 + 0.5i*z + i)")
    assert f.p == Poly1.from_dict({2: 1, 0: Fraction(-1, 4)})
    assert f.q == SkewPoly.from_dict({(0, 2): Fraction(1, 2), (1, 0): ComplexRational(0, Fraction(1, 2)), (0, 0): I})


def test_division_by_constant():
    assert parse_map("(z^2, w^2/3)").q == SkewPoly.from_dict({(0, 2): Fraction(1, 3)})
    assert parse_map("(z^2, w^2 / 3 + z/2)").q == SkewPoly.from_dict({(0, 2): Fraction(1, 3), (1, 0): Fraction(1, 2)})
    expr = parse_expression("(z^2, w^2/3)")
    assert expr.second == BinOp("/", Pow(Var("w"), 2), Num(ComplexRational(3, 0)))


def test_rational_literals():
    expr = parse_expression("(z^2 + 1/2+1/3i, w^2)")
    assert expr.first.left.right == Num(ComplexRational(Fraction(1, 2), 0))
    assert expr.first.right == Num(ComplexRational(0, Fraction(1, 3)))
    # a spaced slash is division, so 1 / 3i is -i/3
    spaced = parse_expression("(z^2 + 1 / 3i, w^2)")
    assert spaced.first.right == BinOp("/", Num(ComplexRational(1, 0)), Num(ComplexRational(0, 3)))
    assert parse_map("(z^2 + 1 / 3i, w^2)").p == Poly1.from_dict({2: 1, 0: ComplexRational(0, Fraction(-1, 3))})
    with pytest.raises(ExpressionError, match="division by zero"):
        parse_expression("(z^2 + 1/0, w^2)")


def test_negative_exponent():
    expr = parse_expression("(z^2, z^(-1)*w^2)")
    assert expr.second.left == Pow(Var("z"), -1)
    f = parse_map("(z^2, z^-2*w^2 + w^2)", allow_laurent=True)
    assert f.q == SkewPoly.from_dict({(-2, 2): 1, (0, 2): 1})


@pytest.mark.parametrize("text, message, position", [
    ("(z^2, w^(2/3))", "non-integer exponent", 9),
    ("(z^2, w^2.5)", "non-integer exponent", 8),
    ("(z^2, w^2", r"expected '\)'", 9),
    ("(z^2, w^2 $ 1)", r"unexpected character '\$'", 10),
    ("(z^2, x*w^2)", "unknown symbol 'x'", 6),
    ("(z^2, w^2) w", "after the map", 11),
    ("   ", "empty map expression", 0),
])
def test_syntax_errors(text, message, position):
    with pytest.raises(ExpressionError, match=message) as caught:
        parse_expression(text)
    assert caught.value.position == position
    assert f"at position {position}" in str(caught.value)


def test_evaluation_errors():
    with pytest.raises(ExpressionError, match="division only by a nonzero constant"):
        parse_map("(z^2, w^2/z)")
    with pytest.raises(ExpressionError, match="single monomial"):
        parse_map("(z^2, (z + 1)^(-1)*w^2)")


@pytest.mark.parametrize("text", [
    "(z^2 - 1, z^2*w^2)",
    "(z^3, z*w^2 + 2*z^2*w + z)",
    "(-z^2 + 1/2, (z - 1)*w^2 - w/3)",
    "(z^2, z^(-1)*w^2 + 3i*w^2)",
])
def test_printer_round_trip(text):
    expr = parse_expression(text)
    assert parse_expression(format_map(expr)) == expr


def test_printer_output():
    assert format_map(parse_expression("(z^2, 2zw - (w + 1)^2)")) == "(z^2, 2*z*w - (w + 1)^2)"
    assert format_map(parse_expression("(z^2, -(z + 1)*w^2)")) == "(z^2, -(z + 1)*w^2)"


def test_evaluate_node():
    expr = parse_expression("(z^2, (z + w)^2)")
    assert evaluate_node(expr.second) == SkewPoly.from_dict({(2, 0): 1, (1, 1): 2, (0, 2): 1})


def test_read_map_source(tmp_path):
    path = tmp_path / "map.txt"
    path.write_text("(z^3, z*w^2 + z)\n")
    assert read_map_source(str(path)) == "(z^3, z*w^2 + z)"
    assert read_map_source("(z^2, w^2)") == "(z^2, w^2)"


_LEAVES = [
    Num(ComplexRational(0, 0)), Num(ComplexRational(2, 0)), Num(ComplexRational(Fraction(1, 2), 0)),
    Num(ComplexRational(Fraction(3, 4), 0)), Num(I), Num(ComplexRational(0, 2)),
    Num(ComplexRational(0, Fraction(1, 3))), Var("z"), Var("w"),
]


def _random_node(rng, depth):
    if depth == 0 or rng.random() < 0.25:
        return rng.choice(_LEAVES)
    kind = rng.choice(["binop", "binop", "neg", "pow"])
    if kind == "neg":
        return Neg(_random_node(rng, depth - 1))
    if kind == "pow":
        return Pow(_random_node(rng, depth - 1), rng.randint(-2, 3))
    return BinOp(rng.choice("+-*/"), _random_node(rng, depth - 1), _random_node(rng, depth - 1))


@pytest.mark.parametrize("seed", range(40))
def test_random_trees_round_trip(seed):
    rng = random.Random(seed)
    expr = MapExpression(_random_node(rng, 4), _random_node(rng, 4))
    text = format_map(expr)
    assert parse_expression(text) == expr, text


def test_spaced_division_round_trips():
    expr = parse_expression("(z^2 + 1 / 2, w^2)")
    assert expr.first.right == BinOp("/", Num(ComplexRational(1, 0)), Num(ComplexRational(2, 0)))
    assert format_map(expr) == "(z^2 + 1 / 2, w^2)"
    assert parse_expression(format_map(expr)) == expr
    assert format_map(parse_expression("(z^2, (1/2)^2*w^2 - 1/3i)")) == "(z^2, (1/2)^2*w^2 - 1/3i)"
