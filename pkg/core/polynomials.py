"""
Sparse exact polynomials
Poly1 is univariate with nonnegative exponents; SkewPoly is bivariate in (z, w),
Laurent in z and polynomial in w. RationalFunction is a reduced quotient of Poly1s.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

import numpy as np
from sympy import Poly, Symbol
from sympy.polys.domains import QQ, QQ_I

from core.rational import ONE, ZERO, AlgebraError, ComplexRational, Scalar
from utils.logging import get_logger

logger = get_logger(__name__)

Point = Union[ComplexRational, complex, int]
_SYMBOL = Symbol("z")


class NonMonomialDenominatorError(AlgebraError):
    """Division by something other than a monomial in z"""
    pass


class TermBudgetExceeded(AlgebraError):
    """Intermediate result grew beyond the allowed number of terms"""
    pass


def _clean(terms: Mapping) -> Tuple:
    return tuple(sorted((k, ComplexRational.of(c)) for k, c in terms.items() if ComplexRational.of(c)))


def _to_gaussian(c: ComplexRational):
    return QQ_I(QQ(c.re.numerator, c.re.denominator), QQ(c.im.numerator, c.im.denominator))


def _from_gaussian(c) -> ComplexRational:
    return ComplexRational(Fraction(int(c.x.numerator), int(c.x.denominator)),
                           Fraction(int(c.y.numerator), int(c.y.denominator)))


def _evaluate_scalar(value: Point):
    """Exact points stay exact, everything else becomes a Python complex"""
    if isinstance(value, (ComplexRational, int)):
        return ComplexRational.of(value)
    return complex(value)


def _format_coefficient(coeff: ComplexRational, is_constant: bool) -> Tuple[str, str]:
    """Return (sign, body) so terms join as 'a + b - c'"""
    if coeff.is_real():
        sign = "-" if coeff.re < 0 else "+"
        magnitude = abs(coeff.re)
        if magnitude == 1 and not is_constant:
            return sign, ""
        text = str(magnitude)
        if magnitude.denominator != 1 and not is_constant:
            text = f"({text})"
        return sign, text
    return "+", f"({coeff})"


def _join_terms(pieces: List[Tuple[str, str]]) -> str:
    if not pieces:
        return "0"
    out = []
    for i, (sign, body) in enumerate(pieces):
        if i == 0:
            out.append(f"-{body}" if sign == "-" else body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


@dataclass(frozen=True)
class Poly1:
    """Sparse univariate polynomial; no zero coefficients are stored"""

    terms: Tuple[Tuple[int, ComplexRational], ...] = ()

    @staticmethod
    def from_dict(coeffs: Mapping[int, Scalar]) -> "Poly1":
        for k in coeffs:
            if k < 0:
                raise AlgebraError(f"Poly1 exponent must be nonnegative (got {k})")
        return Poly1(_clean(coeffs))

    @staticmethod
    def constant(value: Scalar) -> "Poly1":
        return Poly1.from_dict({0: value})

    @staticmethod
    def monomial(exponent: int, coeff: Scalar = 1) -> "Poly1":
        return Poly1.from_dict({exponent: coeff})

    @property
    def coeffs(self) -> Dict[int, ComplexRational]:
        return dict(self.terms)

    @property
    def degree(self) -> int:
        return self.terms[-1][0] if self.terms else -1

    @property
    def leading(self) -> ComplexRational:
        return self.terms[-1][1] if self.terms else ZERO

    def coefficient(self, exponent: int) -> ComplexRational:
        return self.coeffs.get(exponent, ZERO)

    def support(self) -> List[int]:
        return [k for k, _ in self.terms]

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return self.degree <= 0

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_monic(self) -> bool:
        return bool(self.terms) and self.leading == 1

    # Arithmetic

    def __add__(self, other: "Poly1") -> "Poly1":
        out = self.coeffs
        for k, c in other.terms:
            out[k] = out.get(k, ZERO) + c
        return Poly1(_clean(out))

    def __neg__(self) -> "Poly1":
        return Poly1(tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other: "Poly1") -> "Poly1":
        return self + (-other)

    def __mul__(self, other: Union["Poly1", Scalar]) -> "Poly1":
        if not isinstance(other, Poly1):
            return self.scale(other)
        out: Dict[int, ComplexRational] = {}
        for i, a in self.terms:
            for j, b in other.terms:
                out[i + j] = out.get(i + j, ZERO) + a * b
        return Poly1(_clean(out))

    def __rmul__(self, other: Scalar) -> "Poly1":
        return self.scale(other)

    def scale(self, factor: Scalar) -> "Poly1":
        factor = ComplexRational.of(factor)
        return Poly1(_clean({k: c * factor for k, c in self.terms}))

    def __pow__(self, exponent: int) -> "Poly1":
        if exponent < 0:
            raise AlgebraError("Poly1 powers must be nonnegative")
        result, base = Poly1.constant(1), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def compose(self, inner: "Poly1") -> "Poly1":
        """self(inner(z)) by Horner's rule"""
        if self.is_zero():
            return self
        result = Poly1()
        previous = self.degree
        for k, c in reversed(self.terms):
            result = result * (inner ** (previous - k)) + Poly1.constant(c)
            previous = k
        return result * (inner ** previous)

    def shift(self, t: Scalar) -> "Poly1":
        """self(z + t)"""
        t = ComplexRational.of(t)
        if t.is_zero():
            return self
        return self.compose(Poly1.from_dict({1: 1, 0: t}))

    def monic(self) -> "Poly1":
        if self.is_zero():
            return self
        return self.scale(self.leading.inverse())

    def divmod(self, divisor: "Poly1") -> Tuple["Poly1", "Poly1"]:
        """Euclidean division over Q(i)"""
        if divisor.is_zero():
            raise ZeroDivisionError("Poly1 division by zero")
        quotient, remainder = self.to_sympy().div(divisor.to_sympy())
        return Poly1.from_sympy(quotient), Poly1.from_sympy(remainder)

    def exact_div(self, divisor: "Poly1") -> "Poly1":
        quotient, remainder = self.divmod(divisor)
        if not remainder.is_zero():
            raise AlgebraError(f"{divisor} does not divide {self}")
        return quotient

    # Evaluation

    def evaluate(self, point: Point):
        x = _evaluate_scalar(point)
        if isinstance(x, ComplexRational):
            result = ZERO
            previous = self.degree
            for k, c in reversed(self.terms):
                result = result * (x ** (previous - k)) + c
                previous = k
            return result * (x ** max(previous, 0)) if self.terms else ZERO
        return complex(np.polyval(self.to_numpy(), x)) if self.terms else 0j

    def to_numpy(self) -> np.ndarray:
        """Dense complex coefficients, highest degree first (numpy.polyval order)"""
        if not self.terms:
            return np.zeros(1, dtype=np.complex128)
        dense = np.zeros(self.degree + 1, dtype=np.complex128)
        for k, c in self.terms:
            dense[self.degree - k] = complex(c)
        return dense

    def __str__(self) -> str:
        return self.to_text()

    def to_text(self, var: str = "z") -> str:
        pieces = []
        for k, c in reversed(self.terms):
            sign, body = _format_coefficient(c, k == 0)
            power = "" if k == 0 else var if k == 1 else f"{var}^{k}"
            if body and power:
                body = f"{body}*{power}"
            else:
                body = body or power
            pieces.append((sign, body))
        return _join_terms(pieces)

    def __repr__(self) -> str:
        return f"Poly1({self})"

    def to_sympy(self) -> Poly:
        """sympy Poly in z over the Gaussian rationals QQ_I"""
        return Poly.from_dict({(k,): _to_gaussian(c) for k, c in self.terms}, _SYMBOL, domain=QQ_I)

    @staticmethod
    def from_sympy(poly: Poly) -> "Poly1":
        return Poly1(_clean({k: _from_gaussian(c) for (k,), c in poly.rep.to_dict().items()}))

    def to_json(self) -> List:
        return [[k, c.to_json()] for k, c in self.terms]


def poly_gcd(a: Poly1, b: Poly1) -> Poly1:
    """Monic gcd over Q(i)"""
    return Poly1.from_sympy(a.to_sympy().gcd(b.to_sympy())).monic()


def poly_gcd_many(polys: Iterable[Poly1]) -> Poly1:
    polys = [p.to_sympy() for p in polys if not p.is_zero()]
    if not polys:
        return Poly1()
    return Poly1.from_sympy(reduce(lambda a, b: a.gcd(b), polys)).monic()


@dataclass(frozen=True)
class RationalFunction:
    """Reduced quotient num/den of univariate polynomials with den monic"""

    num: Poly1
    den: Poly1

    @staticmethod
    def make(num: Poly1, den: Poly1) -> "RationalFunction":
        if den.is_zero():
            raise ZeroDivisionError("RationalFunction with zero denominator")
        if num.is_zero():
            return RationalFunction(Poly1(), Poly1.constant(1))
        g = poly_gcd(num, den)
        num, den = num.exact_div(g), den.exact_div(g)
        lead = den.leading.inverse()
        return RationalFunction(num.scale(lead), den.scale(lead))

    @staticmethod
    def polynomial(num: Poly1) -> "RationalFunction":
        return RationalFunction.make(num, Poly1.constant(1))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction.make(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction.make(self.num * other.num, self.den * other.den)

    def compose(self, inner: Poly1) -> "RationalFunction":
        return RationalFunction.make(self.num.compose(inner), self.den.compose(inner))

    def as_laurent(self) -> Optional[Dict[int, ComplexRational]]:
        """Laurent coefficients when the denominator is a monomial, else None"""
        if not self.den.is_monomial():
            return None
        k, c = self.den.terms[0]
        inv = c.inverse()
        return {e - k: v * inv for e, v in self.num.terms}

    def evaluate(self, point: Point):
        den = self.den.evaluate(point)
        if isinstance(den, ComplexRational):
            if den.is_zero():
                raise ZeroDivisionError("RationalFunction pole")
            return self.num.evaluate(point) / den
        return self.num.evaluate(point) / den

    def __str__(self) -> str:
        if self.den.is_constant():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def to_json(self) -> Dict:
        return {"num": str(self.num), "den": str(self.den)}


@dataclass(frozen=True)
class SkewPoly:
    """Sparse polynomial in (z, w): Laurent in z, polynomial in w"""

    terms: Tuple[Tuple[Tuple[int, int], ComplexRational], ...] = ()

    @staticmethod
    def from_dict(coeffs: Mapping[Tuple[int, int], Scalar]) -> "SkewPoly":
        for (_, m) in coeffs:
            if m < 0:
                raise AlgebraError(f"w-exponent must be nonnegative (got {m})")
        return SkewPoly(_clean(coeffs))

    @staticmethod
    def from_z(poly: Poly1) -> "SkewPoly":
        return SkewPoly(tuple(((k, 0), c) for k, c in poly.terms))

    @staticmethod
    def from_w_coefficients(coefficients: Mapping[int, Mapping[int, Scalar]]) -> "SkewPoly":
        """Build sum_j B_j(z) w^j from Laurent coefficient maps B_j"""
        out = {}
        for m, laurent in coefficients.items():
            for n, c in laurent.items():
                out[(n, m)] = c
        return SkewPoly.from_dict(out)

    @staticmethod
    def w() -> "SkewPoly":
        return SkewPoly.from_dict({(0, 1): 1})

    @staticmethod
    def constant(value: Scalar) -> "SkewPoly":
        return SkewPoly.from_dict({(0, 0): value})

    @property
    def coeffs(self) -> Dict[Tuple[int, int], ComplexRational]:
        return dict(self.terms)

    def support(self) -> frozenset:
        return frozenset(k for k, _ in self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def w_degree(self) -> int:
        return max((m for (_, m), _ in self.terms), default=-1)

    def is_polynomial(self) -> bool:
        return all(n >= 0 for (n, _), _ in self.terms)

    def depends_on_w(self) -> bool:
        return any(m > 0 for (_, m), _ in self.terms)

    def depends_on_z(self) -> bool:
        return any(n != 0 for (n, _), _ in self.terms)

    def w_coefficient(self, j: int) -> Dict[int, ComplexRational]:
        """Laurent coefficient map of w^j"""
        return {n: c for (n, m), c in self.terms if m == j}

    def w_coefficient_poly(self, j: int) -> Poly1:
        laurent = self.w_coefficient(j)
        if any(n < 0 for n in laurent):
            raise NonMonomialDenominatorError(f"w^{j} coefficient has negative z-exponents")
        return Poly1.from_dict(laurent)

    # Arithmetic

    def __add__(self, other: "SkewPoly") -> "SkewPoly":
        out = self.coeffs
        for k, c in other.terms:
            out[k] = out.get(k, ZERO) + c
        return SkewPoly(_clean(out))

    def __neg__(self) -> "SkewPoly":
        return SkewPoly(tuple((k, -c) for k, c in self.terms))

    def __sub__(self, other: "SkewPoly") -> "SkewPoly":
        return self + (-other)

    def __mul__(self, other: Union["SkewPoly", Scalar]) -> "SkewPoly":
        if not isinstance(other, SkewPoly):
            return self.scale(other)
        out: Dict[Tuple[int, int], ComplexRational] = {}
        for (n1, m1), a in self.terms:
            for (n2, m2), b in other.terms:
                key = (n1 + n2, m1 + m2)
                out[key] = out.get(key, ZERO) + a * b
        return SkewPoly(_clean(out))

    def __rmul__(self, other: Scalar) -> "SkewPoly":
        return self.scale(other)

    def scale(self, factor: Scalar) -> "SkewPoly":
        factor = ComplexRational.of(factor)
        return SkewPoly(_clean({k: c * factor for k, c in self.terms}))

    def __pow__(self, exponent: int) -> "SkewPoly":
        if exponent < 0:
            raise AlgebraError("SkewPoly powers must be nonnegative")
        result, base = SkewPoly.constant(1), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def substitute(self, z_sub: Poly1, w_sub: "SkewPoly", budget: Optional[int] = None) -> "SkewPoly":
        """
        self(z_sub(z), w_sub(z, w))
        Negative z-exponents need z_sub to be a monomial.
        """
        z_powers: Dict[int, SkewPoly] = {}
        w_powers: Dict[int, SkewPoly] = {0: SkewPoly.constant(1)}

        def z_power(n: int) -> SkewPoly:
            if n not in z_powers:
                if n >= 0:
                    z_powers[n] = SkewPoly.from_z(z_sub ** n)
                else:
                    if not z_sub.is_monomial():
                        raise NonMonomialDenominatorError(
                            f"non-monomial denominator: cannot substitute {z_sub} into z^{n}")
                    e, c = z_sub.terms[0]
                    z_powers[n] = SkewPoly.from_dict({(e * n, 0): c ** n})
            return z_powers[n]

        def w_power(m: int) -> SkewPoly:
            if m not in w_powers:
                w_powers[m] = w_power(m - 1) * w_sub
                if budget is not None and len(w_powers[m]) > budget:
                    raise TermBudgetExceeded(f"{len(w_powers[m])} terms exceed budget {budget}")
            return w_powers[m]

        out: Dict[Tuple[int, int], ComplexRational] = {}
        for (n, m), c in self.terms:
            term = z_power(n) * w_power(m)
            for key, v in term.terms:
                out[key] = out.get(key, ZERO) + v * c
            if budget is not None and len(out) > budget:
                raise TermBudgetExceeded(f"{len(out)} terms exceed budget {budget}")
        return SkewPoly(_clean(out))

    def translate_w(self, t: "SkewPoly") -> "SkewPoly":
        """self(z, w + t(z)) for a Laurent polynomial t in z alone"""
        if t.depends_on_w():
            raise AlgebraError("translate_w needs a shift independent of w")
        return self.substitute(Poly1.monomial(1), SkewPoly.w() + t)

    def monomial_substitute(self, r: int, s: int) -> "SkewPoly":
        """self(z^r, z^s w): each term c z^n w^m becomes c z^(rn + sm) w^m"""
        out: Dict[Tuple[int, int], ComplexRational] = {}
        for (n, m), c in self.terms:
            key = (r * n + s * m, m)
            out[key] = out.get(key, ZERO) + c
        return SkewPoly(_clean(out))

    def at_z_one(self) -> Poly1:
        """self(1, w) as a polynomial in w"""
        out: Dict[int, ComplexRational] = {}
        for (_, m), c in self.terms:
            out[m] = out.get(m, ZERO) + c
        return Poly1(_clean(out))

    def z_content(self) -> Poly1:
        """Monic gcd of the w-coefficients with powers of z removed (z is a unit for Laurent maps)"""
        parts = []
        for j in sorted({m for (_, m), _ in self.terms}):
            laurent = self.w_coefficient(j)
            low = min(laurent)
            parts.append(Poly1.from_dict({n - low: c for n, c in laurent.items()}))
        return poly_gcd_many(parts)

    # Evaluation

    def evaluate(self, z: Point, w: Point):
        zx, wx = _evaluate_scalar(z), _evaluate_scalar(w)
        if isinstance(zx, ComplexRational) and isinstance(wx, ComplexRational):
            total = ZERO
            for (n, m), c in self.terms:
                total = total + c * (zx ** n) * (wx ** m)
            return total
        zx, wx = complex(zx), complex(wx)
        return sum((complex(c) * zx ** n * wx ** m for (n, m), c in self.terms), 0j)

    def fiber_coefficients(self, z: complex) -> np.ndarray:
        """Dense float coefficients of q_z(w), highest w-power first"""
        d = max(self.w_degree, 0)
        dense = np.zeros(d + 1, dtype=np.complex128)
        for (n, m), c in self.terms:
            dense[d - m] += complex(c) * complex(z) ** n
        return dense

    def __str__(self) -> str:
        pieces = []
        ordered = sorted(self.terms, key=lambda t: (-t[0][1], -t[0][0]))
        for (n, m), c in ordered:
            sign, body = _format_coefficient(c, n == 0 and m == 0)
            factors = []
            if n:
                factors.append("z" if n == 1 else f"z^{n}" if n > 0 else f"z^({n})")
            if m:
                factors.append("w" if m == 1 else f"w^{m}")
            power = "*".join(factors)
            if body and power:
                body = f"{body}*{power}"
            else:
                body = body or power
            pieces.append((sign, body))
        return _join_terms(pieces)

    def __repr__(self) -> str:
        return f"SkewPoly({self})"

    def to_json(self) -> List:
        return [[n, m, c.to_json()] for (n, m), c in self.terms]


def compose_fiber(q: SkewPoly, z_sub: Poly1, inner: SkewPoly, budget: Optional[int] = None) -> SkewPoly:
    """q_{z'}(inner) with z' = z_sub(z): the fiber composition behind Q_z^{n+1} = q_{p^n(z)} o Q_z^n"""
    return q.substitute(z_sub, inner, budget=budget)
