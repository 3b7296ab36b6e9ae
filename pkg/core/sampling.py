"""
Julia set sampling and numeric checks over J_p
Inverse-iteration sampler, numeric symmetry verification, compactness and pole-set checks
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

import numpy as np

from config.settings import (
    BURN_IN, OFF_JULIA_GREEN, UNIT_CIRCLE_TOL, VERIFY_FIBER_POINTS, VERIFY_FIBER_RADIUS,
)
from core.green import GreenEvaluator, NumericsError
from core.groups import SymmetryElement
from core.polynomials import Poly1, poly_gcd
from core.roots import aberth_roots, roots_or_raise
from core.skew import CentroidData, SkewProduct
from utils.logging import get_logger

logger = get_logger(__name__)

SAMPLE_GREEN_TOL = 1e-8

COMPACT = "compact"
NONCOMPACT = "noncompact"
UNCERTAIN = "uncertain"


class SamplerError(NumericsError):
    """Custom Julia set sampling error"""
    pass


class BaseSampler:
    """Inverse iteration on p from an escaping seed point"""

    def __init__(self, evaluator: GreenEvaluator, seed: int = 0, burn_in: int = BURN_IN,
                 tol: float = SAMPLE_GREEN_TOL):
        self.evaluator = evaluator
        self.p = evaluator.f.p
        self.seed = seed
        self.burn_in = burn_in
        self.tol = tol

    def sample(self, count: int) -> np.ndarray:
        rng = np.random.default_rng(self.seed)
        delta = self.p.size - 1

        # any point outside the escape radius has a backward orbit accumulating on J_p
        point = 2.0 * self.evaluator.escape_radius * np.exp(2j * np.pi * rng.random())
        out = np.empty(count, dtype=np.complex128)
        for step in range(self.burn_in + count):
            shifted = self.p.copy()
            shifted[-1] -= point
            preimages = np.roots(shifted)
            if preimages.size != delta or not np.all(np.isfinite(preimages)):
                raise SamplerError(f"inverse iteration lost its preimages at step {step}")
            point = preimages[rng.integers(delta)]
            if step >= self.burn_in:
                out[step - self.burn_in] = point

        worst = float(np.max(self.evaluator.green_base(out))) if count else 0.0
        if worst >= self.tol:
            raise SamplerError(f"sampler failure: sampled points escape (max G_p = {worst:.3g})")

        logger.debug(f"Sampled {count} points of J_p (seed {self.seed}, burn-in {self.burn_in})")
        return out


def sample_julia_base(evaluator: GreenEvaluator, count: int, seed: int = 0,
                      burn_in: int = BURN_IN) -> np.ndarray:
    return BaseSampler(evaluator, seed, burn_in).sample(count)


@dataclass(frozen=True)
class VerificationResult:
    element: SymmetryElement
    passed: bool
    distance: float
    base_distance: float
    fiber_distance: float
    tol: float
    seed: int
    samples: int
    skipped: int

    def to_json(self) -> Dict:
        return {
            "element": self.element.to_json(),
            "passed": self.passed,
            "distance": self.distance,
            "base_distance": self.base_distance,
            "fiber_distance": self.fiber_distance,
            "tol": self.tol,
            "seed": self.seed,
            "samples": self.samples,
            "skipped": self.skipped,
        }


def verify_symmetry_numeric(evaluator: GreenEvaluator, cent: CentroidData, element: SymmetryElement,
                            samples: np.ndarray, tol: float, seed: int = 0) -> VerificationResult:
    """
    Green-level test of gamma(J_f) = J_f over sampled fibers
    Discrepancy is max(G_p(sigma(z)), |G_sigma(z)(gamma_z(w)) - G_z(w)|) over z in the
    samples and w in a disk around the fiber centroid.
    """
    realized = element.realize(cent)
    rng = np.random.default_rng(seed)
    base_worst, fiber_worst = 0.0, 0.0
    skipped = 0

    for z in samples:
        radius = VERIFY_FIBER_RADIUS * np.sqrt(rng.random(VERIFY_FIBER_POINTS))
        angles = 2 * np.pi * rng.random(VERIFY_FIBER_POINTS)
        if not evaluator.phi_sum(z).finite:
            skipped += 1
            continue
        try:
            center = cent.zeta_z.evaluate(complex(z))
        except ZeroDivisionError:
            skipped += 1
            continue
        w = center + radius * np.exp(1j * angles)

        sz, gw = realized(complex(z), w)
        base_dev = float(evaluator.green_base(sz))
        base_worst = max(base_worst, base_dev)
        if base_dev > tol:
            continue

        try:
            before = evaluator.green_fiber(z, w)
            after = evaluator.green_fiber(sz, gw)
        except (NumericsError, ZeroDivisionError):
            skipped += 1
            continue
        fiber_worst = max(fiber_worst, float(np.max(np.abs(after - before))))

    distance = max(base_worst, fiber_worst)
    passed = distance <= tol
    logger.info(f"Numeric check of {element}: discrepancy {distance:.3g} "
                f"({'pass' if passed else 'fail'} at tol {tol:g}, {skipped} skipped)")
    return VerificationResult(element, passed, distance, base_worst, fiber_worst,
                              tol, seed, len(samples), skipped)


@dataclass(frozen=True)
class CompactnessResult:
    verdict: str
    method: str
    min_distance: Optional[float] = None
    roots: List[complex] = field(default_factory=list)

    def to_json(self) -> Dict:
        return {
            "verdict": self.verdict,
            "method": self.method,
            "min_distance": self.min_distance,
            "roots": [[r.real, r.imag] for r in self.roots],
        }


def _root_of_unity_on_leading(b_d: Poly1, root: complex) -> bool:
    """Exact test that b_d vanishes at a root of unity near the numeric root"""
    turn = Fraction(math.atan2(root.imag, root.real) / (2 * math.pi)).limit_denominator(1000)
    m = turn.denominator
    cyclotomic_multiple = Poly1.from_dict({m: 1, 0: -1})
    return poly_gcd(b_d, cyclotomic_multiple).degree >= 1


def compactness_check(f: SkewProduct, evaluator: GreenEvaluator, samples: np.ndarray,
                      eps_near: float, eps_far: float) -> CompactnessResult:
    """J_f is compact iff b_d has no zero on J_p"""
    if f.nondegenerate:
        return CompactnessResult(COMPACT, "constant_leading_coefficient")

    b_d = f.q.w_coefficient_poly(f.d)
    roots, converged = aberth_roots(b_d.to_numpy())
    if not converged:
        return CompactnessResult(UNCERTAIN, "root_finder_not_converged", roots=list(roots))

    # J_p is the unit circle exactly when p = z^delta
    if f.p.is_monomial() and f.p.leading == 1:
        on_circle = [r for r in roots if abs(abs(r) - 1.0) < UNIT_CIRCLE_TOL]
        if any(_root_of_unity_on_leading(b_d, complex(r)) for r in on_circle):
            return CompactnessResult(NONCOMPACT, "exact_root_of_unity", 0.0, list(roots))

    verdicts = []
    min_distance = math.inf
    for r in roots:
        distance = float(np.min(np.abs(samples - r))) if len(samples) else math.inf
        min_distance = min(min_distance, distance)
        outside = evaluator.green_base(complex(r)) > OFF_JULIA_GREEN
        if distance > eps_far or outside:
            verdicts.append(COMPACT)
        elif distance < eps_near:
            verdicts.append(NONCOMPACT)
        else:
            verdicts.append(UNCERTAIN)

    if NONCOMPACT in verdicts:
        verdict = NONCOMPACT
    elif all(v == COMPACT for v in verdicts):
        verdict = COMPACT
    else:
        verdict = UNCERTAIN
    logger.debug(f"Compactness: {verdict} (min root distance to J_p samples {min_distance:.3g})")
    return CompactnessResult(verdict, "sample_distance", min_distance, list(roots))


@dataclass(frozen=True)
class PoleSetResult:
    poles_on_julia: List[complex]
    permuted: bool
    max_mismatch: float

    def to_json(self) -> Dict:
        return {"poles_on_julia": [[p.real, p.imag] for p in self.poles_on_julia],
                "permuted": self.permuted, "max_mismatch": self.max_mismatch}


def pole_set_check(cent: CentroidData, element: SymmetryElement, samples: np.ndarray,
                   eps_near: float) -> PoleSetResult:
    """sigma must permute the poles of zeta_z lying on J_p"""
    if cent.zeta_z.den.is_constant():
        return PoleSetResult([], True, 0.0)

    poles = roots_or_raise(cent.zeta_z.den.to_numpy())
    on_julia = [complex(p) for p in poles
                if len(samples) and float(np.min(np.abs(samples - p))) < eps_near]
    if not on_julia:
        return PoleSetResult([], True, 0.0)

    zeta = complex(cent.zeta)
    mu, _ = element.as_complex()
    images = [mu * (p - zeta) + zeta for p in on_julia]
    mismatch = max(min(abs(img - p) for p in on_julia) for img in images)
    return PoleSetResult(on_julia, mismatch < eps_near, float(mismatch))
