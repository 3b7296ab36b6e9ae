"""
Symmetry groups as closed subgroups of the 2-torus
Each group is the annihilator of an integer condition lattice; elements are
pairs of rotations (mu, nu) acting as (z, w) -> (mu z, nu w) in normal coordinates.
"""

import cmath
import itertools
import math
import random
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Dict, Iterator, List, Optional, Tuple, Union

from core.lattice import IntLattice2, Vector
from core.polynomials import Poly1, RationalFunction, SkewPoly
from core.rational import RationalTurn, turns_up_to_order
from utils.logging import get_logger

logger = get_logger(__name__)

Rotation = Union[RationalTurn, complex]


class SymmetryError(Exception):
    """Custom symmetry group error"""
    pass


class GroupKind(Enum):
    FULL_TORUS = "full_torus"
    ONE_DIM_FAMILY = "one_dim_family"
    FINITE = "finite"


class StatusKind(Enum):
    EXACT = "exact"
    CANDIDATE_UPPER_BOUND = "candidate_upper_bound"
    BOUNDS_PAIR = "bounds_pair"


class Justification(Enum):
    """Which sufficient hypothesis made a group exact"""
    FIBER_CONTENT_TRIVIAL = "fiber_content_trivial"        # q~ divisible by no nonconstant polynomial in z
    LEADING_FIBER_MONOMIAL = "leading_fiber_monomial"      # b~_d = z^l
    MONOMIAL_BASE_AND_FIBER = "monomial_base_and_fiber"    # p~ = z^delta and b~_d = z^l
    BOUNDS_COINCIDE = "bounds_coincide"                    # lower and upper bound agree


def level_exponent(n: int, delta: int, d: int, l: int) -> int:
    """l_n = l (delta^n - d^n) / (delta - d), or l n delta^(n-1) when delta = d"""
    if delta == d:
        return l * n * delta ** (n - 1)
    return l * (delta ** n - d ** n) // (delta - d)


def turn_satisfies(vector: Vector, mu: RationalTurn, nu: RationalTurn) -> bool:
    """mu^a nu^b == 1, checked on integers: a k1/m1 + b k2/m2 in Z"""
    a, b = vector
    return (a * mu.k * nu.m + b * nu.k * mu.m) % (mu.m * nu.m) == 0


@dataclass(frozen=True)
class Status:
    kind: StatusKind
    justification: Optional[Justification] = None
    lower: Optional["SymmetryGroup"] = None
    upper: Optional["SymmetryGroup"] = None

    @staticmethod
    def exact(justification: Justification) -> "Status":
        return Status(StatusKind.EXACT, justification)

    @staticmethod
    def candidate() -> "Status":
        return Status(StatusKind.CANDIDATE_UPPER_BOUND)

    @staticmethod
    def bounds(lower: "SymmetryGroup", upper: "SymmetryGroup") -> "Status":
        return Status(StatusKind.BOUNDS_PAIR, lower=lower, upper=upper)

    @property
    def is_exact(self) -> bool:
        return self.kind == StatusKind.EXACT

    def __str__(self) -> str:
        if self.justification:
            return f"{self.kind.value} ({self.justification.value})"
        return self.kind.value

    def to_json(self) -> Dict:
        data = {"kind": self.kind.value,
                "justification": self.justification.value if self.justification else None}
        if self.kind == StatusKind.BOUNDS_PAIR:
            data["lower"] = self.lower.to_json(include_status=False)
            data["upper"] = self.upper.to_json(include_status=False)
        return data


@dataclass(frozen=True)
class SymmetryGroup:
    """Annihilator of `lattice` in S^1 x S^1"""

    kind: GroupKind
    lattice: IntLattice2
    character: Optional[Vector] = None
    torsion: Optional[int] = None
    invariants: Optional[Tuple[int, int]] = None
    generators: Tuple[Tuple[RationalTurn, RationalTurn], ...] = ()
    status: Optional[Status] = field(default=None, compare=False)

    def with_status(self, status: Status) -> "SymmetryGroup":
        return replace(self, status=status)

    @property
    def is_finite(self) -> bool:
        return self.kind == GroupKind.FINITE

    @property
    def order(self) -> Optional[int]:
        if not self.is_finite:
            return None
        d1, d2 = self.invariants
        return d1 * d2

    def contains(self, mu: RationalTurn, nu: RationalTurn) -> bool:
        return all(turn_satisfies(v, mu, nu) for v in self.lattice.basis)

    def contains_numeric(self, mu: complex, nu: complex, tol: float = 1e-9) -> bool:
        """Membership for float rotations: every lattice character within tol of 1"""
        for a, b in self.lattice.basis:
            if abs(mu ** a * nu ** b - 1) > tol:
                return False
        return True

    def is_subgroup_of(self, other: "SymmetryGroup") -> bool:
        return self.lattice.contains_lattice(other.lattice)

    def same_as(self, other: "SymmetryGroup") -> bool:
        return self.lattice == other.lattice

    def elements_with_order_at_most(self, max_order: int) -> List[Tuple[RationalTurn, RationalTurn]]:
        turns = list(turns_up_to_order(max_order))
        return [(mu, nu) for mu in turns for nu in turns if self.contains(mu, nu)]

    def elements(self) -> List[Tuple[RationalTurn, RationalTurn]]:
        """All elements of a finite group, generated from the Smith generators"""
        if not self.is_finite:
            raise SymmetryError(f"{self.kind.value} group has infinitely many elements")
        identity = RationalTurn(0, 1)
        seen = {(identity, identity)}
        frontier = [(identity, identity)]
        while frontier:
            mu, nu = frontier.pop()
            for gmu, gnu in self.generators:
                element = (mu * gmu, nu * gnu)
                if element not in seen:
                    seen.add(element)
                    frontier.append(element)
        return sorted(seen)

    def sample_elements(self, count: int, seed: int = 0) -> List["SymmetryElement"]:
        """Identity and generators for finite groups; seeded float points on a continuous group"""
        identity = SymmetryElement(RationalTurn(0, 1), RationalTurn(0, 1))
        if self.is_finite:
            return [identity] + [SymmetryElement(mu, nu) for mu, nu in self.generators]

        rng = random.Random(seed)
        out = [identity]
        for _ in range(count):
            theta = rng.uniform(0, 2 * math.pi)
            if self.kind == GroupKind.FULL_TORUS:
                out.append(element_from_angles(rng.uniform(0, 2 * math.pi), theta))
                continue
            a, b = self.character
            k = rng.randrange(self.torsion)
            # a t_mu + b t_nu = 2 pi k / e
            if a == 0:
                out.append(element_from_angles(theta, 2 * math.pi * k / (self.torsion * b)))
            else:
                out.append(element_from_angles((2 * math.pi * k / self.torsion - b * theta) / a, theta))
        return out

    def describe(self) -> str:
        if self.kind == GroupKind.FULL_TORUS:
            return "S^1 x S^1"
        if self.kind == GroupKind.ONE_DIM_FAMILY:
            a, b = self.character
            e = self.torsion
            if b == 0:
                return f"{{(mu, nu) : {_monomial_text(a * e, 'mu')} = 1}}"
            if a == 0:
                return f"{{(mu, nu) : {_monomial_text(b * e, 'nu')} = 1}}"
            return f"{{(mu, nu) : {_monomial_text(a * e, 'mu')} = {_monomial_text(-b * e, 'nu')}}}"
        d1, d2 = self.invariants
        return f"Z/{d1} x Z/{d2} (order {d1 * d2})"

    def to_json(self, include_status: bool = True) -> Dict:
        data = {
            "kind": self.kind.value,
            "lattice": self.lattice.to_json(),
            "character": list(self.character) if self.character else None,
            "torsion": self.torsion,
            "invariants": list(self.invariants) if self.invariants else None,
            "generators": [[mu.to_json(), nu.to_json()] for mu, nu in self.generators],
            "order": self.order,
        }
        if include_status:
            data["status"] = self.status.to_json() if self.status else None
        return data


def _monomial_text(exponent: int, name: str) -> str:
    if exponent == 0:
        return "1"
    return name if exponent == 1 else f"{name}^{exponent}"


def _rotation_complex(value: Rotation) -> complex:
    return value.to_complex() if isinstance(value, RationalTurn) else complex(value)


@dataclass(frozen=True)
class RealizedSymmetry:
    """An affine fibered map (z, w) -> (sigma(z), nu w + c(z)); exact parts are None when unavailable"""

    base: Optional[Poly1]
    fiber: Optional[SkewPoly]
    evaluate: Callable[[complex, complex], Tuple[complex, complex]] = field(compare=False)

    @property
    def is_exact(self) -> bool:
        return self.base is not None and self.fiber is not None

    def __call__(self, z: complex, w: complex) -> Tuple[complex, complex]:
        return self.evaluate(z, w)


@dataclass(frozen=True)
class SymmetryElement:
    mu: Rotation
    nu: Rotation

    def is_exact(self) -> bool:
        return isinstance(self.mu, RationalTurn) and isinstance(self.nu, RationalTurn)

    def level(self, n: int, delta: int, d: int, l: int) -> "SymmetryElement":
        """gamma_n with f^n gamma = gamma_n f^n: (mu^(delta^n), mu^(l_n) nu^(d^n))"""
        ln = level_exponent(n, delta, d, l)
        if self.is_exact():
            return SymmetryElement(self.mu ** (delta ** n), self.mu ** ln * self.nu ** (d ** n))
        mu, nu = _rotation_complex(self.mu), _rotation_complex(self.nu)
        return SymmetryElement(mu ** (delta ** n), mu ** ln * nu ** (d ** n))

    def commutes_with(self, normalized, tol: float = 1e-9) -> bool:
        """f~ o gamma == gamma_1 o f~ in normal coordinates, term by term"""
        skew = normalized.map
        vectors = [(skew.delta - j, 0) for j in skew.p.support() if j != skew.delta]
        vectors += [(n - skew.l, m - skew.d) for (n, m) in skew.q.support()]
        if self.is_exact():
            return all(turn_satisfies(v, self.mu, self.nu) for v in vectors)
        mu, nu = _rotation_complex(self.mu), _rotation_complex(self.nu)
        return all(abs(mu ** a * nu ** b - 1) <= tol for a, b in vectors)

    def realize(self, centroids) -> RealizedSymmetry:
        """gamma(z, w) = (mu (z - zeta) + zeta, nu (w - zeta_z) + zeta_sigma(z)) in original coordinates"""
        zeta = centroids.zeta
        zeta_z = centroids.zeta_z
        mu_c, nu_c = _rotation_complex(self.mu), _rotation_complex(self.nu)
        zeta_c = complex(zeta)

        def evaluate(z: complex, w: complex) -> Tuple[complex, complex]:
            sz = mu_c * (z - zeta_c) + zeta_c
            return sz, nu_c * (w - zeta_z.evaluate(complex(z))) + zeta_z.evaluate(sz)

        mu_x = self.mu.to_complex_rational() if isinstance(self.mu, RationalTurn) else None
        nu_x = self.nu.to_complex_rational() if isinstance(self.nu, RationalTurn) else None
        if mu_x is None or nu_x is None:
            return RealizedSymmetry(None, None, evaluate)

        sigma = Poly1.from_dict({1: mu_x, 0: zeta * (1 - mu_x)})
        shift = zeta_z.compose(sigma) - RationalFunction.make(zeta_z.num.scale(nu_x), zeta_z.den)
        if not shift.is_polynomial():
            return RealizedSymmetry(sigma, None, evaluate)

        fiber = SkewPoly.from_dict({(0, 1): nu_x}) + SkewPoly.from_z(shift.num)
        return RealizedSymmetry(sigma, fiber, evaluate)

    def as_complex(self) -> Tuple[complex, complex]:
        return _rotation_complex(self.mu), _rotation_complex(self.nu)

    def __str__(self) -> str:
        return f"({self.mu}, {self.nu})"

    def to_json(self) -> List:
        if self.is_exact():
            return [self.mu.to_json(), self.nu.to_json()]
        mu, nu = _rotation_complex(self.mu), _rotation_complex(self.nu)
        return [[mu.real, mu.imag], [nu.real, nu.imag]]


def element_from_angles(theta_mu: float, theta_nu: float) -> SymmetryElement:
    """Float element exp(i theta_mu), exp(i theta_nu)"""
    return SymmetryElement(cmath.exp(1j * theta_mu), cmath.exp(1j * theta_nu))


def turn_pairs(max_order: int) -> Iterator[Tuple[RationalTurn, RationalTurn]]:
    turns = list(turns_up_to_order(max_order))
    return itertools.product(turns, turns)
