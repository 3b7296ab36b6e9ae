"""
Exact scalars: Gaussian rationals and roots of unity as rational turns
"""

import cmath
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Tuple, Union

from utils.logging import get_logger

logger = get_logger(__name__)

Scalar = Union[int, Fraction, "ComplexRational"]

_LITERAL = re.compile(r"^\s*([+-]?\d+(?:/\d+)?)?\s*(?:([+-])\s*(\d+(?:/\d+)?)?\s*i)?\s*$")


class AlgebraError(Exception):
    """Custom exact-arithmetic error"""
    pass


@dataclass(frozen=True)
class ComplexRational:
    """Element re + im*i of Q(i); Fraction keeps both parts reduced"""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def of(value: Scalar) -> "ComplexRational":
        """Coerce an int, Fraction or ComplexRational"""
        if isinstance(value, ComplexRational):
            return value
        if isinstance(value, (int, Fraction)):
            return ComplexRational(Fraction(value), Fraction(0))
        raise AlgebraError(f"Cannot coerce {value!r} to ComplexRational")

    @staticmethod
    def parse(text: str) -> "ComplexRational":
        """Parse literals like '3', '-1/2', '1/2+1/3i', 'i', '-2i'"""
        compact = text.replace(" ", "")
        if compact in ("i", "+i"):
            return I
        if compact == "-i":
            return -I
        if compact.endswith("i") and "+" not in compact[1:] and "-" not in compact[1:]:
            # pure imaginary like '2i' or '-3/4i'
            return ComplexRational(0, Fraction(compact[:-1]))
        match = _LITERAL.match(compact)
        if not match or compact == "":
            raise AlgebraError(f"Invalid complex rational literal: {text!r}")
        re_part = Fraction(match.group(1)) if match.group(1) else Fraction(0)
        im_part = Fraction(0)
        if match.group(2):
            im_part = Fraction(match.group(3)) if match.group(3) else Fraction(1)
            if match.group(2) == "-":
                im_part = -im_part
        return ComplexRational(re_part, im_part)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other: Scalar) -> "ComplexRational":
        other = ComplexRational.of(other)
        return ComplexRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> "ComplexRational":
        return ComplexRational(-self.re, -self.im)

    def __sub__(self, other: Scalar) -> "ComplexRational":
        return self + (-ComplexRational.of(other))

    def __rsub__(self, other: Scalar) -> "ComplexRational":
        return ComplexRational.of(other) - self

    def __mul__(self, other: Scalar) -> "ComplexRational":
        other = ComplexRational.of(other)
        return ComplexRational(self.re * other.re - self.im * other.im,
                               self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def conjugate(self) -> "ComplexRational":
        return ComplexRational(self.re, -self.im)

    def norm(self) -> Fraction:
        """Squared modulus re^2 + im^2"""
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "ComplexRational":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("ComplexRational division by zero")
        return ComplexRational(self.re / n, -self.im / n)

    def __truediv__(self, other: Scalar) -> "ComplexRational":
        return self * ComplexRational.of(other).inverse()

    def __rtruediv__(self, other: Scalar) -> "ComplexRational":
        return ComplexRational.of(other) * self.inverse()

    def __pow__(self, exponent: int) -> "ComplexRational":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = ONE, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        if isinstance(other, ComplexRational):
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.re, self.im))

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def is_real(self) -> bool:
        return self.im == 0

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return "i" if self.im == 1 else "-i" if self.im == -1 else f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        magnitude = abs(self.im)
        im_text = "" if magnitude == 1 else str(magnitude)
        return f"{self.re}{sign}{im_text}i"

    def __repr__(self) -> str:
        return f"ComplexRational({self})"

    def to_json(self) -> List[str]:
        return [str(self.re), str(self.im)]


ZERO = ComplexRational(0, 0)
ONE = ComplexRational(1, 0)
I = ComplexRational(0, 1)


def rationalize(value: complex, max_denominator: int) -> ComplexRational:
    """Closest ComplexRational with bounded denominators"""
    return ComplexRational(Fraction(value.real).limit_denominator(max_denominator),
                           Fraction(value.imag).limit_denominator(max_denominator))


@dataclass(frozen=True, order=True)
class RationalTurn:
    """The root of unity exp(2*pi*i*k/m), stored with 0 <= k < m and gcd(k, m) = 1"""

    k: int
    m: int

    def __post_init__(self):
        if self.m <= 0:
            raise AlgebraError(f"Turn denominator must be positive (got {self.m})")
        g = math.gcd(self.k, self.m)
        m = self.m // g
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "k", (self.k // g) % m)

    @staticmethod
    def from_fraction(value: Fraction) -> "RationalTurn":
        value = Fraction(value)
        return RationalTurn(value.numerator, value.denominator)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.k, self.m)

    @property
    def order(self) -> int:
        return self.m

    def is_identity(self) -> bool:
        return self.k == 0

    def __mul__(self, other: "RationalTurn") -> "RationalTurn":
        return RationalTurn.from_fraction(self.fraction + other.fraction)

    def __pow__(self, exponent: int) -> "RationalTurn":
        return RationalTurn.from_fraction(self.fraction * exponent)

    def inverse(self) -> "RationalTurn":
        return RationalTurn(-self.k, self.m)

    def to_complex(self) -> complex:
        return cmath.exp(2j * math.pi * self.k / self.m)

    def angle(self) -> float:
        return 2 * math.pi * self.k / self.m

    def to_complex_rational(self) -> Optional[ComplexRational]:
        """Exact value when the turn lies in Q(i), i.e. order 1, 2 or 4"""
        exact = {
            (0, 1): ONE,
            (1, 2): -ONE,
            (1, 4): I,
            (3, 4): -I,
        }
        return exact.get((self.k, self.m))

    def __str__(self) -> str:
        return f"{self.k}/{self.m}"

    def to_json(self) -> List[int]:
        return [self.k, self.m]



def character(vector: Tuple[int, int], mu: RationalTurn, nu: RationalTurn) -> RationalTurn:
    """Evaluate the torus character chi_(a,b)(mu, nu) = mu^a nu^b"""
    a, b = vector
    return mu ** a * nu ** b


def turns_up_to_order(max_order: int) -> Iterator[RationalTurn]:
    """All roots of unity of order at most max_order, grouped by order"""
    for m in range(1, max_order + 1):
        for k in range(m):
            if math.gcd(k, m) == 1:
                yield RationalTurn(k, m)
