"""
Symmetry groups of one-variable polynomials and of skew products
Condition vectors, M*-closure of the condition lattice, torus annihilators,
bounds mode for q~ = b~_d(z) w^d and the brute-force oracle
"""

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from config.settings import CONFIG, IRRATIONAL_CANDIDATES, SCALE_PRECISION
from core.green import GreenEvaluator
from core.groups import (
    Justification, Status, SymmetryError, SymmetryGroup, level_exponent, turn_satisfies,
)
from core.lattice import IntLattice2, Vector, annihilator, hnf_basis
from core.polynomials import NonMonomialDenominatorError, Poly1, SkewPoly, poly_gcd_many
from core.rational import ComplexRational, RationalTurn, turns_up_to_order
from core.sampling import sample_julia_base
from core.skew import NormalizedSkew, SkewProduct, iterates, normalize
from utils.logging import get_logger
from utils.parallel import map_parallel

logger = get_logger(__name__)

MODE_LATTICE = "lattice"
MODE_BOUNDS = "bounds"
MODE_GENERAL = "general"
MODE_NON_LAURENT = "non_laurent"


class NormalizationRequiredError(SymmetryError):
    """Custom error for inputs that must be normalized first"""
    pass


class BoundsModeRequiredError(SymmetryError):
    """Custom error for a non-monomial leading fiber coefficient"""
    pass


# One variable

def support_order(p: Poly1) -> Optional[int]:
    """gcd{delta - j : a_j != 0, j < delta}; None when p is a single monomial"""
    delta = p.degree
    order = 0
    for j in p.support():
        if j != delta:
            order = math.gcd(order, delta - j)
    return order or None


def sigma_order(p: Poly1) -> Optional[int]:
    """|Sigma_p| for p in normal form; None means infinite (p = z^delta)"""
    if p.degree < 2:
        raise SymmetryError(f"degree of p must be at least 2 (got {p.degree})")
    if not p.is_monic() or not p.coefficient(p.degree - 1).is_zero():
        raise NormalizationRequiredError("normalize first")
    return support_order(p)


def base_condition_vectors(p: Poly1) -> List[Vector]:
    """(delta - j, 0) for every nonzero lower coefficient of p~"""
    delta = p.degree
    return [(delta - j, 0) for j in p.support() if j != delta]


@dataclass(frozen=True)
class BaseSymmetry:
    """Sigma_p as rotations about the centroid, housed as Sigma_p x S^1"""

    group: SymmetryGroup
    zeta: ComplexRational
    order: Optional[int]
    centred_base: Poly1

    @property
    def is_infinite(self) -> bool:
        return self.order is None

    def rotations(self) -> List[RationalTurn]:
        if self.order is None:
            raise SymmetryError("Sigma_p is the whole circle")
        return [RationalTurn(k, self.order) for k in range(self.order)]

    def describe(self) -> str:
        if self.order is None:
            return f"S^1 (all rotations about {self.zeta})"
        if self.order == 1:
            return "trivial"
        return f"Z/{self.order} (rotations by {self.order}-th roots of unity about {self.zeta})"

    def to_json(self) -> Dict:
        return {"zeta": str(self.zeta), "order": self.order, "infinite": self.is_infinite,
                "centred_form": str(self.centred_base), "group": self.group.to_json()}


def sigma_group(p: Poly1) -> BaseSymmetry:
    if p.degree < 2:
        raise SymmetryError(f"degree of p must be at least 2 (got {p.degree})")
    zeta = -p.coefficient(p.degree - 1) / (p.leading * p.degree)
    p_t = p.shift(zeta) - Poly1.constant(zeta)
    order = support_order(p_t)
    group = annihilator(hnf_basis(base_condition_vectors(p_t)))
    logger.debug(f"Sigma_p for {p}: order {order if order else 'infinite'} about {zeta}")
    return BaseSymmetry(group, zeta, order, p_t)


# Condition lattice

def fiber_condition_vectors(q: SkewPoly) -> List[Vector]:
    """(n - l, m - d) per term of q~ other than the leading z^l w^d"""
    d = q.w_degree
    lead = q.w_coefficient(d)
    if len(lead) != 1:
        raise BoundsModeRequiredError("bounds mode required")
    l = next(iter(lead))
    return [(n - l, m - d) for (n, m) in sorted(q.support()) if (n, m) != (l, d)]


def all_fiber_vectors(f: SkewProduct) -> List[Vector]:
    """(n - l, m - d) over every term of q~, the b_d row included"""
    return [(n - f.l, m - f.d) for (n, m) in sorted(f.q.support()) if (n, m) != (f.l, f.d)]


def mstar_matrix(delta: int, d: int, l: int) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    return ((delta, l), (0, d))


def mstar_closure(initial: Union[IntLattice2, Sequence[Vector]], delta: int, d: int, l: int) -> IntLattice2:
    """Smallest lattice containing `initial` and stable under (a, b) -> (delta a + l b, d b)"""
    lattice = initial if isinstance(initial, IntLattice2) else hnf_basis(initial)
    matrix = mstar_matrix(delta, d, l)
    rounds = 0
    while True:
        images = lattice.image(matrix)
        if all(lattice.contains(v) for v in images):
            break
        lattice = lattice.join(images)
        rounds += 1
    logger.debug(f"M*-closure stable after {rounds} rounds: {lattice}")
    return lattice


@dataclass(frozen=True)
class ConditionSet:
    base_vectors: Tuple[Vector, ...]
    fiber_vectors: Tuple[Vector, ...]
    initial: IntLattice2
    lattice: IntLattice2
    mstar: Tuple[Tuple[int, int], Tuple[int, int]]

    def closure_certificate(self) -> List[Dict]:
        """M* v for each basis vector v, with its exact membership"""
        images = self.lattice.image(self.mstar)
        return [{"vector": list(v), "image": list(img), "contained": self.lattice.contains(img)}
                for v, img in zip(self.lattice.basis, images)]

    def is_stable(self) -> bool:
        return all(entry["contained"] for entry in self.closure_certificate())

    def to_json(self) -> Dict:
        return {
            "base_vectors": [list(v) for v in self.base_vectors],
            "fiber_vectors": [list(v) for v in self.fiber_vectors],
            "initial": self.initial.to_json(),
            "lattice": self.lattice.to_json(),
            "mstar": [list(row) for row in self.mstar],
            "closure_certificate": self.closure_certificate(),
        }


def build_conditions(f: SkewProduct, base: List[Vector], fiber: List[Vector]) -> ConditionSet:
    initial = hnf_basis(base + fiber)
    lattice = mstar_closure(initial, f.delta, f.d, f.l)
    return ConditionSet(tuple(base), tuple(fiber), initial, lattice, mstar_matrix(f.delta, f.d, f.l))


# Bounds mode

def bd_gate_subgroup(b_d: Dict[int, ComplexRational], l: int, sigma: SymmetryGroup) -> SymmetryGroup:
    """Sigma_p intersected with {mu^(l - j) = 1 per nonzero coefficient of b_d}, times S^1"""
    gates = [(l - j, 0) for j in sorted(b_d) if j != l]
    return annihilator(sigma.lattice.join(gates))


@dataclass(frozen=True)
class FilterResult:
    mu: Union[RationalTurn, complex]
    passed: bool
    deviation: float

    def to_json(self) -> Dict:
        mu = self.mu.to_json() if isinstance(self.mu, RationalTurn) else [self.mu.real, self.mu.imag]
        return {"mu": mu, "passed": self.passed, "deviation": self.deviation}


def modulus_filter(f: SkewProduct, mu: Union[RationalTurn, complex], samples: np.ndarray,
                   tol: float) -> FilterResult:
    """
    Necessary condition |b_d(mu z)| = |b_d(z)| on J_p for a rotation about 0
    f must be centred (translation-normalized); samples lie on J_p.
    """
    mu_c = mu.to_complex() if isinstance(mu, RationalTurn) else complex(mu)
    numeric = f.to_numeric()
    with np.errstate(divide="ignore", invalid="ignore"):
        deviation = np.abs(np.abs(numeric.leading(mu_c * samples)) - np.abs(numeric.leading(samples)))
    worst = float(np.nanmax(deviation)) if len(samples) else 0.0
    return FilterResult(mu, worst <= tol, worst)


def _irrational_angles(count: int, seed: int) -> List[complex]:
    rng = np.random.default_rng(np.random.SeedSequence([seed, count]))
    return [complex(np.exp(2j * math.pi * t)) for t in rng.random(count)]


@dataclass(frozen=True)
class BoundsReport:
    lower: SymmetryGroup
    upper: SymmetryGroup
    tested: int
    passing: Tuple[FilterResult, ...]
    tol: float
    seed: int
    samples: int

    def to_json(self) -> Dict:
        return {
            "lower": self.lower.to_json(include_status=False),
            "upper": self.upper.to_json(include_status=False),
            "candidates_tested": self.tested,
            "passing": [r.to_json() for r in self.passing],
            "tol": self.tol,
            "seed": self.seed,
            "samples": self.samples,
        }


def leading_fiber_bounds(f: SkewProduct, sigma: SymmetryGroup, base_order: Optional[int],
                         samples: int, tol: float, candidate_max_order: int, seed: int) -> BoundsReport:
    """Lower bound from the b_d gate, upper bound from the |b_d| filter on J_p"""
    lower = bd_gate_subgroup(f.leading_fiber, f.l, sigma)

    evaluator = GreenEvaluator(f.to_numeric())
    points = sample_julia_base(evaluator, samples, seed)

    if base_order is not None:
        candidates: List[Union[RationalTurn, complex]] = [RationalTurn(k, base_order) for k in range(base_order)]
    else:
        candidates = list(turns_up_to_order(candidate_max_order))
        candidates += _irrational_angles(IRRATIONAL_CANDIDATES, seed)

    results = [modulus_filter(f, mu, points, tol) for mu in candidates]
    passing = tuple(r for r in results if r.passed)

    if any(not isinstance(r.mu, RationalTurn) for r in passing):
        upper = sigma
    else:
        period = reduce(lambda a, b: a * b // math.gcd(a, b), (r.mu.order for r in passing), 1)
        upper = annihilator(sigma.lattice.join([(period, 0)]))

    logger.info(f"Leading-fiber bounds: lower {lower.describe()}, upper {upper.describe()} "
                f"({len(passing)}/{len(candidates)} candidates pass at tol {tol:g})")
    return BoundsReport(lower, upper, len(candidates), passing, tol, seed, samples)


# Skew product

def _content_is_trivial(q: SkewPoly) -> bool:
    """q is divisible by no nonconstant polynomial in z (z itself is a unit for Laurent q)"""
    if not q.is_polynomial():
        return q.z_content().is_constant()
    parts = [q.w_coefficient_poly(j) for j in sorted({m for (_, m) in q.support()})]
    return poly_gcd_many(parts).is_constant()


@dataclass(frozen=True)
class SymmetryResult:
    group: SymmetryGroup
    normalized: NormalizedSkew
    sigma: BaseSymmetry
    mode: str
    conditions: Optional[ConditionSet] = None
    bounds: Optional[BoundsReport] = None
    notes: Tuple[str, ...] = field(default=())

    @property
    def status(self) -> Status:
        return self.group.status

    @property
    def is_exact(self) -> bool:
        return self.group.status is not None and self.group.status.is_exact

    @property
    def base_order(self) -> Optional[int]:
        return self.sigma.order

    def to_json(self) -> Dict:
        return {
            "group": self.group.to_json(),
            "description": self.group.describe(),
            "mode": self.mode,
            "sigma_p": self.sigma.to_json(),
            "conditions": self.conditions.to_json() if self.conditions else None,
            "bounds": self.bounds.to_json() if self.bounds else None,
            "notes": list(self.notes),
        }


def symmetry_group(f: SkewProduct, samples: int = CONFIG["samples"], filter_tol: float = CONFIG["filter_tol"],
                   candidate_max_order: int = CONFIG["candidate_max_order"], seed: int = CONFIG["seed"],
                   precision: int = SCALE_PRECISION) -> SymmetryResult:
    """Gamma_f as the annihilator of the M*-closed condition lattice, with its exactness status"""
    normalized = normalize(f, precision)
    sigma = sigma_group(f.p)

    if not normalized.laurent_ok:
        trivial = annihilator(hnf_basis([(1, 0), (0, 1)]))
        group = trivial.with_status(Status.bounds(trivial, sigma.group))
        logger.info("Normalized map is not Laurent; Gamma_f is finite, reporting trivial and Sigma_p x S^1 "
                    "as bounds")
        return SymmetryResult(group, normalized, sigma, MODE_NON_LAURENT, notes=(
            "zeta_z has a non-monomial denominator after translation",
            "Gamma_f is finite; only the bounds {identity} and Sigma_p x S^1 are reported",
        ))

    g = normalized.map
    base = base_condition_vectors(g.p)

    if g.leading_is_monomial():
        conditions = build_conditions(g, base, fiber_condition_vectors(g.q))
        if g.p.is_monomial():
            justification = Justification.MONOMIAL_BASE_AND_FIBER
        else:
            justification = Justification.LEADING_FIBER_MONOMIAL
        group = annihilator(conditions.lattice).with_status(Status.exact(justification))
        logger.info(f"Gamma_f = {group.describe()} (exact, {justification.value})")
        return SymmetryResult(group, normalized, sigma, MODE_LATTICE, conditions)

    if all(m == g.d for (_, m) in g.q.support()):
        bounds = leading_fiber_bounds(g, sigma.group, sigma.order, samples, filter_tol,
                                      candidate_max_order, seed)
        if bounds.lower.same_as(bounds.upper):
            group = bounds.lower.with_status(Status.exact(Justification.BOUNDS_COINCIDE))
        else:
            group = bounds.lower.with_status(Status.bounds(bounds.lower, bounds.upper))
        logger.info(f"Gamma_f = {group.describe()} ({group.status})")
        return SymmetryResult(group, normalized, sigma, MODE_BOUNDS, bounds=bounds)

    conditions = build_conditions(g, base, all_fiber_vectors(g))
    group = annihilator(conditions.lattice)
    if _content_is_trivial(g.q):
        group = group.with_status(Status.exact(Justification.FIBER_CONTENT_TRIVIAL))
        notes: Tuple[str, ...] = ()
    else:
        group = group.with_status(Status.candidate())
        notes = ("candidate upper bound; confirm elements with the numeric verifier",)
    logger.info(f"Gamma_f = {group.describe()} ({group.status})")
    return SymmetryResult(group, normalized, sigma, MODE_GENERAL, conditions, notes=notes)


# Oracle

def level_equations(f: SkewProduct, depth: int,
                    budget: int = CONFIG["iterate_budget"]) -> Iterator[Tuple[int, List[Vector]]]:
    """
    Per level n = 1..depth, the character exponents that f^n gamma = gamma_n f^n
    forces to vanish: one vector per term of p^n and Q_z^n against the leading one
    """
    delta, d, l = f.delta, f.d, f.l
    try:
        for n, p_n, q_n in iterates(f, depth, budget):
            top = delta ** n
            l_n, d_n = level_exponent(n, delta, d, l), d ** n
            vectors = {(j - top, 0) for j in p_n.support() if j != top}
            vectors.update((a - l_n, b - d_n) for (a, b) in q_n.support() if (a, b) != (l_n, d_n))
            yield n, sorted(vectors)
    except NonMonomialDenominatorError as e:
        raise SymmetryError(f"iterate leaves Laurent form: {e}")


def level_vectors(f: SkewProduct, depth: int, budget: int = CONFIG["iterate_budget"]) -> List[Vector]:
    """Union of the level equations for n = 1..depth"""
    vectors = set()
    for _, level in level_equations(f, depth, budget):
        vectors.update(level)
    return sorted(vectors)


def brute_force_group(f: SkewProduct, max_order: int = CONFIG["max_order"], depth: int = CONFIG["depth"],
                      budget: int = CONFIG["iterate_budget"],
                      max_workers: int = CONFIG["max_workers"]) -> List[Tuple[RationalTurn, RationalTurn]]:
    """
    All (mu, nu) of order <= max_order satisfying the level-n equations of f~ for n <= depth

    Every candidate pair is plugged into every term equation of every level; no
    lattice reduction is involved. Candidates are pruned level by level and the
    deeper iterates are skipped once only the identity is left.
    """
    normalized = normalize(f)
    if not normalized.laurent_ok:
        raise SymmetryError("brute force oracle needs a Laurent normal form")

    turns = list(turns_up_to_order(max_order))
    identity = (RationalTurn(0, 1), RationalTurn(0, 1))
    rows = [[(mu, nu) for nu in turns] for mu in turns]
    equations = 0

    for n, vectors in level_equations(normalized.map, depth, budget):
        equations += len(vectors)

        def survivors(row: List[Tuple[RationalTurn, RationalTurn]]) -> List[Tuple[RationalTurn, RationalTurn]]:
            return [(mu, nu) for mu, nu in row if all(turn_satisfies(v, mu, nu) for v in vectors)]

        rows = [row for row in map_parallel(survivors, rows, max_workers, label=f"oracle rows at level {n}") if row]
        if rows == [[identity]]:
            logger.debug(f"Only the identity survives level {n}; skipping deeper iterates")
            break

    elements = sorted(pair for row in rows for pair in row)
    logger.info(f"Oracle (order <= {max_order}, depth {depth}): {len(elements)} elements "
                f"from {equations} term equations")
    return elements


def oracle_agrees(result: SymmetryResult, oracle: List[Tuple[RationalTurn, RationalTurn]],
                  max_order: int) -> bool:
    return sorted(result.group.elements_with_order_at_most(max_order)) == sorted(oracle)

