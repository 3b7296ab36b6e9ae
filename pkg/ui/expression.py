"""
Map expressions
Tokenizer, recursive-descent parser and printer for "(P, Q)" skew-product input

Grammar:
    map     := "(" expr "," expr ")"
    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/")? unary)*        juxtaposition multiplies
    unary   := ("+" | "-") unary | power
    power   := atom ("^" exponent)?
    exponent:= ["-"] INTEGER | "(" ["-" | "+"] INTEGER ")"
    atom    := NUMBER | "z" | "w" | "i" | "(" expr ")"

NUMBER covers 3, 0.5 and imaginary forms such as 3i. A rational literal is
NUMBER "/" NUMBER written without spaces ("1/2", "1/3i" is i/3) and is folded
into a single Num by the parser; a spaced "/" is always division.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Union

from core.polynomials import SkewPoly
from core.rational import I, ComplexRational
from core.skew import SkewProduct, validate
from utils.logging import get_logger

logger = get_logger(__name__)

_NUMBER = re.compile(r"\d+(?:\.\d+)?i?")
_IDENT = re.compile(r"[A-Za-z]")
_OPERATORS = set("+-*/^(),")
VARIABLES = ("z", "w")


class ExpressionError(Exception):
    """Custom expression syntax error"""

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


@dataclass(frozen=True)
class Token:
    kind: str       # number, ident, op, end
    text: str
    position: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        match = _NUMBER.match(text, pos)
        if match:
            tokens.append(Token("number", match.group(), pos))
            pos = match.end()
            continue
        match = _IDENT.match(text, pos)
        if match:
            tokens.append(Token("ident", match.group(), pos))
            pos = match.end()
            continue
        if ch in _OPERATORS:
            tokens.append(Token("op", ch, pos))
            pos += 1
            continue
        raise ExpressionError(f"unexpected character {ch!r}", pos)
    tokens.append(Token("end", "", len(text)))
    return tokens


# AST

@dataclass(frozen=True)
class Num:
    value: ComplexRational


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class MapExpression:
    first: "Node"
    second: "Node"
    source: str = ""

    def __eq__(self, other) -> bool:
        return isinstance(other, MapExpression) and (self.first, self.second) == (other.first, other.second)

    def __hash__(self) -> int:
        return hash((self.first, self.second))


Node = Union[Num, Var, Neg, BinOp, Pow]


def _number_value(text: str) -> ComplexRational:
    imaginary = text.endswith("i")
    value = Fraction(text[:-1] if imaginary else text)
    return ComplexRational(0, value) if imaginary else ComplexRational(value, 0)


def _adjacent(left: Token, right: Token) -> bool:
    return left.position + len(left.text) == right.position


class Parser:
    """Recursive-descent parser over the token list"""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _expect(self, text: str) -> Token:
        token = self.current
        if token.kind != "op" or token.text != text:
            found = token.text or "end of input"
            raise ExpressionError(f"expected {text!r}, found {found!r}", token.position)
        return self._advance()

    def _at_op(self, *ops: str) -> bool:
        return self.current.kind == "op" and self.current.text in ops

    def _starts_atom(self) -> bool:
        token = self.current
        return token.kind in ("number", "ident") or (token.kind == "op" and token.text == "(")

    def parse_map(self) -> MapExpression:
        self._expect("(")
        first = self.parse_expr()
        self._expect(",")
        second = self.parse_expr()
        self._expect(")")
        if self.current.kind != "end":
            raise ExpressionError(f"unexpected {self.current.text!r} after the map", self.current.position)
        return MapExpression(first, second, self.text)

    def parse_expr(self) -> Node:
        node = self.parse_term()
        while self._at_op("+", "-"):
            op = self._advance().text
            node = BinOp(op, node, self.parse_term())
        return node

    def parse_term(self) -> Node:
        node = self.parse_unary()
        while True:
            if self._at_op("*", "/"):
                op = self._advance().text
                node = BinOp(op, node, self.parse_unary())
            elif self._starts_atom():
                node = BinOp("*", node, self.parse_unary())
            else:
                return node

    def parse_unary(self) -> Node:
        if self._at_op("-"):
            self._advance()
            return Neg(self.parse_unary())
        if self._at_op("+"):
            self._advance()
            return self.parse_unary()
        return self.parse_power()

    def parse_power(self) -> Node:
        base = self.parse_atom()
        if self._at_op("^"):
            self._advance()
            return Pow(base, self.parse_exponent())
        return base

    def parse_exponent(self) -> int:
        wrapped = self._at_op("(")
        if wrapped:
            self._advance()
        sign = 1
        if self._at_op("-", "+"):
            sign = -1 if self._advance().text == "-" else 1
        token = self.current
        if token.kind != "number" or not token.text.isdigit():
            raise ExpressionError(f"non-integer exponent {token.text or 'end of input'!r}", token.position)
        self._advance()
        if wrapped:
            if self._at_op("/"):
                raise ExpressionError("non-integer exponent: fractions are not allowed", token.position)
            self._expect(")")
        return sign * int(token.text)

    def parse_number(self) -> Num:
        """NUMBER, or the rational literal NUMBER/NUMBER[i] when written without spaces"""
        token = self._advance()
        if self.index + 1 >= len(self.tokens):
            return Num(_number_value(token.text))
        slash, denominator = self.tokens[self.index], self.tokens[self.index + 1]
        if (slash.kind == "op" and slash.text == "/" and denominator.kind == "number"
                and not token.text.endswith("i") and _adjacent(token, slash) and _adjacent(slash, denominator)):
            self.index += 2
            den = _number_value(denominator.text)
            magnitude = den.re + den.im
            if magnitude == 0:
                raise ExpressionError("division by zero", slash.position)
            value = Fraction(token.text) / magnitude
            return Num(ComplexRational(0, value) if den.im else ComplexRational(value, 0))
        return Num(_number_value(token.text))

    def parse_atom(self) -> Node:
        token = self.current
        if token.kind == "number":
            return self.parse_number()
        if token.kind == "ident":
            self._advance()
            if token.text in VARIABLES:
                return Var(token.text)
            if token.text == "i":
                return Num(I)
            raise ExpressionError(f"unknown symbol {token.text!r}", token.position)
        if self._at_op("("):
            self._advance()
            node = self.parse_expr()
            self._expect(")")
            return node
        found = token.text or "end of input"
        raise ExpressionError(f"unexpected {found!r}", token.position)


def parse_expression(text: str) -> MapExpression:
    if not text or not text.strip():
        raise ExpressionError("empty map expression", 0)
    return Parser(text).parse_map()


# Printer

_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}
NEG_PRECEDENCE = 3
POW_PRECEDENCE = 4
ATOM_PRECEDENCE = 5


def _precedence(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PRECEDENCE[node.op]
    if isinstance(node, Neg):
        return NEG_PRECEDENCE
    if isinstance(node, Pow):
        return POW_PRECEDENCE
    if isinstance(node, Num) and "/" in format_node(node):
        return _PRECEDENCE["/"]
    return ATOM_PRECEDENCE


def _fraction_text(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def _wrap(node: Node, needs: bool) -> str:
    text = format_node(node)
    return f"({text})" if needs else text


def format_node(node: Node) -> str:
    if isinstance(node, Num):
        value = node.value
        if value.im == 0:
            return _fraction_text(value.re)
        if value.re == 0:
            return "i" if value.im == 1 else f"{_fraction_text(value.im)}i"
        return f"({_fraction_text(value.re)} + {_fraction_text(value.im)}i)"
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, _precedence(node.operand) < POW_PRECEDENCE)
    if isinstance(node, Pow):
        exponent = str(node.exponent) if node.exponent >= 0 else f"({node.exponent})"
        return f"{_wrap(node.base, _precedence(node.base) < ATOM_PRECEDENCE)}^{exponent}"
    prec = _PRECEDENCE[node.op]
    left = _wrap(node.left, _precedence(node.left) < prec)
    right = _wrap(node.right, _precedence(node.right) <= prec)
    separator = node.op if node.op == "*" else f" {node.op} "
    return f"{left}{separator}{right}"


def format_map(expr: MapExpression) -> str:
    return f"({format_node(expr.first)}, {format_node(expr.second)})"


# Evaluation

def evaluate_node(node: Node) -> SkewPoly:
    """Exact value of an AST node as a Laurent polynomial in z, polynomial in w"""
    if isinstance(node, Num):
        return SkewPoly.constant(node.value)
    if isinstance(node, Var):
        return SkewPoly.from_dict({(1, 0) if node.name == "z" else (0, 1): 1})
    if isinstance(node, Neg):
        return -evaluate_node(node.operand)
    if isinstance(node, Pow):
        base = evaluate_node(node.base)
        if node.exponent >= 0:
            return base ** node.exponent
        if len(base) != 1 or base.depends_on_w():
            raise ExpressionError("negative exponent needs a single monomial in z")
        ((n, _), c), = base.terms
        return SkewPoly.from_dict({(n * node.exponent, 0): c ** node.exponent})

    left, right = evaluate_node(node.left), evaluate_node(node.right)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    if len(right) != 1 or right.depends_on_w() or right.depends_on_z():
        raise ExpressionError("division only by a nonzero constant")
    (_, divisor), = right.terms
    return left.scale(divisor.inverse())


def read_map_source(value: str) -> str:
    """--map takes either an expression or a path to a file holding one"""
    candidate = Path(value)
    if not value.lstrip().startswith("(") and candidate.is_file():
        logger.debug(f"Reading map expression from {candidate}")
        return candidate.read_text().strip()
    return value


def parse_map(text: str, allow_laurent: bool = False) -> SkewProduct:
    """Parse "(P, Q)" into a validated skew product with exact coefficients"""
    expr = parse_expression(text)
    p_raw = evaluate_node(expr.first)
    q_raw = evaluate_node(expr.second)
    f = validate(p_raw, q_raw, allow_laurent=allow_laurent)
    logger.debug(f"Parsed {text!r} as {f}")
    return f
