"""
Polynomial skew products f(z, w) = (p(z), q(z, w))
Validation, centroids, symbolic iteration and normalization to centred monic form
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

import mpmath
import numpy as np

from config.settings import ITERATE_BUDGET, RATIONALIZE_DENOMINATOR, SCALE_PRECISION
from core.polynomials import (
    Poly1, RationalFunction, SkewPoly, TermBudgetExceeded, compose_fiber,
)
from core.rational import ComplexRational, rationalize
from utils.logging import get_logger

logger = get_logger(__name__)


class SkewProductError(Exception):
    """Custom skew product error"""
    pass


class IterateBudgetError(Exception):
    """Custom iterate size error"""
    pass


@dataclass(frozen=True, eq=False)
class NumericSkew:
    """Float copy of a skew product for the numeric engine"""

    p: np.ndarray            # base coefficients, highest degree first
    q_n: np.ndarray          # z-exponents of the fiber terms
    q_m: np.ndarray          # w-exponents of the fiber terms
    q_c: np.ndarray          # fiber coefficients
    delta: int
    d: int
    l: int

    def base(self, z):
        return np.polyval(self.p, z)

    def fiber(self, z, w):
        """q(z, w) with numpy broadcasting over z and w"""
        z = np.asarray(z, dtype=np.complex128)
        w = np.asarray(w, dtype=np.complex128)
        total = np.zeros(np.broadcast(z, w).shape, dtype=np.complex128)
        for n, m, c in zip(self.q_n, self.q_m, self.q_c):
            total = total + c * z ** int(n) * w ** int(m)
        return total

    def leading(self, z):
        """b_d(z)"""
        z = np.asarray(z, dtype=np.complex128)
        total = np.zeros(z.shape, dtype=np.complex128)
        for n, m, c in zip(self.q_n, self.q_m, self.q_c):
            if m == self.d:
                total = total + c * z ** int(n)
        return total

    def fiber_coefficients(self, j: int, z):
        """b_j(z)"""
        z = np.asarray(z, dtype=np.complex128)
        total = np.zeros(z.shape, dtype=np.complex128)
        for n, m, c in zip(self.q_n, self.q_m, self.q_c):
            if m == j:
                total = total + c * z ** int(n)
        return total

    def leading_coefficient(self) -> complex:
        """Coefficient of z^l w^d"""
        return complex(sum(c for n, m, c in zip(self.q_n, self.q_m, self.q_c)
                           if m == self.d and n == self.l))


def _numeric(p: Poly1, q: SkewPoly, delta: int, d: int, l: int,
             c1: complex = 1.0, c2: complex = 1.0) -> NumericSkew:
    """Float copy, optionally conjugated by (z, w) -> (c1 z, c2 w)"""
    p_coeffs = np.zeros(p.degree + 1, dtype=np.complex128)
    for j, a in p.terms:
        p_coeffs[p.degree - j] = complex(a) * c1 ** (1 - j)
    ns = np.array([n for (n, _), _ in q.terms], dtype=np.int64)
    ms = np.array([m for (_, m), _ in q.terms], dtype=np.int64)
    cs = np.array([complex(c) * c2 ** (1 - m) * c1 ** (-n) for (n, m), c in q.terms],
                  dtype=np.complex128)
    return NumericSkew(p_coeffs, ns, ms, cs, delta, d, l)


@dataclass(frozen=True)
class SkewProduct:
    """f(z, w) = (p(z), q(z, w)) with exact Q(i) coefficients"""

    p: Poly1
    q: SkewPoly

    @property
    def delta(self) -> int:
        return self.p.degree

    @property
    def d(self) -> int:
        return self.q.w_degree

    @property
    def leading_fiber(self) -> Dict[int, ComplexRational]:
        """b_d as a Laurent coefficient map"""
        return self.q.w_coefficient(self.d)

    @property
    def l(self) -> int:
        return max(self.leading_fiber)

    @property
    def b(self) -> List[Poly1]:
        """w-coefficients b_0..b_d (polynomial maps only)"""
        return [self.q.w_coefficient_poly(j) for j in range(self.d + 1)]

    def fiber_coefficient(self, j: int) -> RationalFunction:
        """b_j as a reduced rational function (Laurent terms become z^-k denominators)"""
        laurent = self.q.w_coefficient(j)
        if not laurent:
            return RationalFunction.polynomial(Poly1())
        low = min(min(laurent), 0)
        num = Poly1.from_dict({n - low: c for n, c in laurent.items()})
        return RationalFunction.make(num, Poly1.monomial(-low))

    @property
    def nondegenerate(self) -> bool:
        """b_d is a nonzero constant"""
        lead = self.leading_fiber
        return len(lead) == 1 and 0 in lead

    @property
    def is_polynomial(self) -> bool:
        return self.q.is_polynomial()

    def leading_is_monomial(self) -> bool:
        return len(self.leading_fiber) == 1

    def to_numeric(self) -> NumericSkew:
        return _numeric(self.p, self.q, self.delta, self.d, self.l)

    def __call__(self, z, w):
        """Exact (ComplexRational) or float evaluation of f"""
        return self.p.evaluate(z), self.q.evaluate(z, w)

    def __str__(self) -> str:
        return f"({self.p}, {self.q})"

    def to_json(self) -> Dict:
        return {"p": str(self.p), "q": str(self.q),
                "delta": self.delta, "d": self.d, "l": self.l,
                "nondegenerate": self.nondegenerate}


def validate(p_raw: SkewPoly, q_raw: SkewPoly, allow_laurent: bool = False) -> SkewProduct:
    """Check the skew-product shape and degree constraints"""
    if p_raw.depends_on_w():
        raise SkewProductError("first component must depend only on z")

    if not p_raw.is_polynomial():
        raise SkewProductError("first component must be a polynomial (no negative powers of z)")

    if not allow_laurent and not q_raw.is_polynomial():
        raise SkewProductError("second component must be a polynomial (no negative powers of z)")

    p = Poly1.from_dict({n: c for (n, _), c in p_raw.terms})
    if p.degree < 2:
        raise SkewProductError(f"degree of p must be at least 2 (got {p.degree})")

    if q_raw.is_zero():
        raise SkewProductError("leading fiber coefficient b_d is identically zero")

    if q_raw.w_degree < 2:
        raise SkewProductError(f"w-degree of q must be at least 2 (got {q_raw.w_degree})")

    f = SkewProduct(p, q_raw)
    logger.debug(f"Validated {f}: delta={f.delta}, d={f.d}, l={f.l}, "
                 f"{'nondegenerate' if f.nondegenerate else 'degenerate'}")
    return f


@dataclass(frozen=True)
class CentroidData:
    """zeta = -a_(delta-1) / (delta a_delta) and zeta_z = -b_(d-1)(z) / (d b_d(z))"""

    zeta: ComplexRational
    zeta_z: RationalFunction

    @property
    def numerator(self) -> Poly1:
        return self.zeta_z.num

    @property
    def denominator(self) -> Poly1:
        return self.zeta_z.den

    def is_trivial(self) -> bool:
        return self.zeta.is_zero() and self.zeta_z.is_zero()

    def to_json(self) -> Dict:
        return {"zeta": str(self.zeta), "zeta_z": self.zeta_z.to_json()}


def centroids(f: SkewProduct) -> CentroidData:
    zeta = -f.p.coefficient(f.delta - 1) / (f.p.leading * f.delta)
    sub = f.fiber_coefficient(f.d - 1)
    lead = f.fiber_coefficient(f.d)
    zeta_z = RationalFunction.make(-sub.num * lead.den, (sub.den * lead.num).scale(f.d))
    return CentroidData(zeta, zeta_z)


def iterates(f: SkewProduct, depth: int, budget: int = ITERATE_BUDGET) -> Iterator[Tuple[int, Poly1, SkewPoly]]:
    """Yield (n, p^n, Q_z^n) for n = 1..depth, each level built from the previous one"""
    p_n, q_n = f.p, f.q
    yield 1, p_n, q_n
    for n in range(2, depth + 1):
        try:
            q_n = compose_fiber(f.q, p_n, q_n, budget=budget)
            p_n = f.p.compose(p_n)
            if len(q_n) > budget:
                raise TermBudgetExceeded(f"{len(q_n)} terms")
        except TermBudgetExceeded as e:
            raise IterateBudgetError(f"iterate {n} too large: {e}")
        yield n, p_n, q_n


def iterate_symbolic(f: SkewProduct, n: int, budget: int = ITERATE_BUDGET) -> Tuple[Poly1, SkewPoly]:
    """(p^n, Q_z^n) with Q_z^(k+1) = q_(p^k(z)) o Q_z^k"""
    if n < 1:
        raise SkewProductError(f"iterate count must be positive (got {n})")

    for _, p_n, q_n in iterates(f, n, budget):
        pass
    return p_n, q_n


@dataclass(frozen=True)
class ScaleSpec:
    """c1^(delta-1) = a_delta and c1^l c2^(d-1) = lead(b_d), kept exactly"""

    delta: int
    d: int
    l: int
    a_lead: ComplexRational
    b_lead: ComplexRational
    precision: int = SCALE_PRECISION

    def numeric(self) -> Tuple[complex, complex]:
        """Principal-branch c1, c2 at the configured precision"""
        with mpmath.workdps(self.precision):
            c1 = mpmath.root(_mpc(self.a_lead), self.delta - 1)
            c2 = mpmath.root(_mpc(self.b_lead) / c1 ** self.l, self.d - 1)
            return complex(c1), complex(c2)

    def residuals(self) -> Tuple[float, float]:
        """Relative errors of the defining equations at the numeric values"""
        with mpmath.workdps(self.precision):
            a = _mpc(self.a_lead)
            b = _mpc(self.b_lead)
            c1 = mpmath.root(a, self.delta - 1)
            c2 = mpmath.root(b / c1 ** self.l, self.d - 1)
            r1 = abs(c1 ** (self.delta - 1) - a) / abs(a)
            r2 = abs(c1 ** self.l * c2 ** (self.d - 1) - b) / abs(b)
            return float(r1), float(r2)

    def exact(self) -> Optional[Tuple[ComplexRational, ComplexRational]]:
        """Exact Q(i) solutions, if any branch of the roots is Gaussian rational"""
        c1 = _exact_root(self.a_lead, self.delta - 1, self.precision)
        if c1 is None:
            return None
        c2 = _exact_root(self.b_lead / c1 ** self.l, self.d - 1, self.precision)
        if c2 is None:
            return None
        return c1, c2

    def to_json(self) -> Dict:
        c1, c2 = self.numeric()
        exact = self.exact()
        return {
            "equations": [f"c1^{self.delta - 1} = {self.a_lead}",
                          f"c1^{self.l} c2^{self.d - 1} = {self.b_lead}"],
            "c1": [c1.real, c1.imag],
            "c2": [c2.real, c2.imag],
            "exact": [str(exact[0]), str(exact[1])] if exact else None,
            "precision": self.precision,
        }


def _mpc(value: ComplexRational) -> mpmath.mpc:
    """Full-precision mpmath copy of an exact scalar"""
    return mpmath.mpc(mpmath.mpf(value.re.numerator) / value.re.denominator,
                      mpmath.mpf(value.im.numerator) / value.im.denominator)


def _exact_root(value: ComplexRational, n: int, precision: int) -> Optional[ComplexRational]:
    if n == 1:
        return value
    with mpmath.workdps(precision):
        target = _mpc(value)
        for k in range(n):
            candidate = rationalize(complex(mpmath.root(target, n, k)), RATIONALIZE_DENOMINATOR)
            if candidate ** n == value:
                return candidate
    return None


@dataclass(frozen=True)
class NormalizedSkew:
    """
    Result of conjugating f by h(z, w) = (c1 (z - zeta), c2 (w - zeta_z))
    `map` is the exact normalized map when laurent_ok; it is fully scaled only
    when scaled_exactly, otherwise translation-normalized with the same support.
    """

    source: SkewProduct
    base: Poly1
    fiber: Tuple[Tuple[int, RationalFunction], ...]
    centroids: CentroidData
    scale: ScaleSpec
    laurent_ok: bool
    scaled_exactly: bool
    map: Optional[SkewProduct] = None
    translated: Optional[SkewProduct] = field(default=None, compare=False)

    @property
    def is_identity(self) -> bool:
        return self.centroids.is_trivial() and self.scale.a_lead == 1 and self.scale.b_lead == 1

    def numeric_map(self) -> NumericSkew:
        """Fully scaled normalized map in floating point"""
        if self.translated is None:
            raise SkewProductError("normalized fiber is not Laurent; no numeric normal form")
        c1, c2 = self.scale.numeric()
        t = self.translated
        return _numeric(t.p, t.q, t.delta, t.d, t.l, c1, c2)

    def conjugation_json(self) -> Dict:
        return {
            "zeta": str(self.centroids.zeta),
            "zeta_z": self.centroids.zeta_z.to_json(),
            "scale": self.scale.to_json(),
            "scaled_exactly": self.scaled_exactly,
            "identity": self.is_identity,
        }

    def to_json(self) -> Dict:
        data = {
            "laurent_ok": self.laurent_ok,
            "conjugation": self.conjugation_json(),
            "base": str(self.base),
            "fiber_coefficients": {str(j): str(rf) for j, rf in self.fiber},
        }
        if self.map is not None:
            data["map"] = self.map.to_json()
        return data


def _binomial_sum(coefficients: Dict[int, RationalFunction], shift: RationalFunction,
                  d: int) -> Dict[int, RationalFunction]:
    """W^k coefficients of sum_j B_j (W + shift)^j"""
    out = {}
    powers = [RationalFunction.polynomial(Poly1.constant(1))]
    for _ in range(d):
        powers.append(powers[-1] * shift)
    for k in range(d + 1):
        total = RationalFunction.polynomial(Poly1())
        for j in range(k, d + 1):
            b_j = coefficients.get(j)
            if b_j is None or b_j.is_zero():
                continue
            binom = RationalFunction.polynomial(Poly1.constant(math.comb(j, k)))
            total = total + b_j * binom * powers[j - k]
        out[k] = total
    return out


def normalize(f: SkewProduct, precision: int = SCALE_PRECISION) -> NormalizedSkew:
    """Conjugate f to centred form exactly, then scale exactly when the roots allow it"""
    cent = centroids(f)
    zeta = cent.zeta

    # translation: p'(Z) = p(Z + zeta) - zeta
    p_t = f.p.shift(zeta) - Poly1.constant(zeta)
    z_shift = Poly1.from_dict({1: 1, 0: zeta})

    shifted = {j: f.fiber_coefficient(j).compose(z_shift) for j in range(f.d + 1)}
    shift_w = cent.zeta_z.compose(z_shift)
    coefficients = _binomial_sum(shifted, shift_w, f.d)
    # subtract zeta at the image point p(Z + zeta)
    coefficients[0] = coefficients[0] - cent.zeta_z.compose(f.p.compose(z_shift))

    laurent = {}
    laurent_ok = True
    for k, rf in coefficients.items():
        if rf.is_zero():
            continue
        terms = rf.as_laurent()
        if terms is None:
            laurent_ok = False
            break
        laurent[k] = terms

    a_lead = p_t.leading
    b_lead = f.q.w_coefficient(f.d)[f.l]
    scale = ScaleSpec(f.delta, f.d, f.l, a_lead, b_lead, precision)
    fiber = tuple(sorted((k, rf) for k, rf in coefficients.items() if not rf.is_zero()))

    if not laurent_ok:
        logger.info("Normalized fiber has a non-monomial denominator; exact pipeline unavailable")
        return NormalizedSkew(f, p_t, fiber, cent, scale, laurent_ok=False, scaled_exactly=False)

    q_t = SkewPoly.from_w_coefficients(laurent)
    translated = SkewProduct(p_t, q_t)

    exact = scale.exact()
    if exact is None:
        logger.debug("Scaling constants are irrational; keeping the translation-normalized map")
        return NormalizedSkew(f, p_t, fiber, cent, scale, laurent_ok=True, scaled_exactly=False,
                              map=translated, translated=translated)

    c1, c2 = exact
    p_s = Poly1.from_dict({j: a * c1 ** (1 - j) for j, a in p_t.terms})
    q_s = SkewPoly.from_dict({(n, m): c * c2 ** (1 - m) * c1 ** (-n) for (n, m), c in q_t.terms})
    scaled = SkewProduct(p_s, q_s)
    logger.debug(f"Normalized {f} to {scaled} (c1={c1}, c2={c2})")
    return NormalizedSkew(f, p_s, fiber, cent, scale, laurent_ok=True, scaled_exactly=True,
                          map=scaled, translated=translated)


def is_normal_form(f: SkewProduct) -> bool:
    """p and b_d monic, a_(delta-1) = 0 and b_(d-1) identically 0"""
    lead = f.leading_fiber
    return (f.p.leading == 1
            and f.p.coefficient(f.delta - 1).is_zero()
            and lead[f.l] == 1
            and not f.q.w_coefficient(f.d - 1))
