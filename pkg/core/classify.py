"""
Classification of skew products with infinite symmetry groups
Types I-IV of the normalized map, semiconjugacy witnesses and Julia-shape descriptors
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional

import numpy as np

from config.settings import CONFIG
from core.green import GreenEvaluator
from core.groups import GroupKind, SymmetryGroup
from core.polynomials import Poly1, SkewPoly
from core.skew import SkewProduct
from core.symmetry import SymmetryResult, support_order, symmetry_group
from utils.logging import get_logger

logger = get_logger(__name__)

# circle sample used to test whether the circles C_z agree over J_p = S^1
CIRCLE_POINTS = 64
CIRCLE_SPREAD_TOL = 1e-6


class ClassificationError(Exception):
    """Custom classification error"""
    pass


class TypeTag(Enum):
    TORUS = "I"
    PRODUCT = "II"
    CIRCLE_BUNDLE = "III"
    SEMICONJUGATE = "IV"
    FINITE_SYM = "FiniteSym"


@dataclass(frozen=True)
class Semiconjugacy:
    """pi(z, w) = (z^r, z^s w) carries f0 = (z^delta, base(w)) to f~"""

    r: int
    s: int
    base: Poly1
    delta: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.s, self.r)

    def to_json(self) -> Dict:
        return {"r": self.r, "s": self.s, "base": self.base.to_text("w"),
                "pi": [[self.r, 0], [self.s, 1]],
                "f0": f"(z^{self.delta}, {self.base.to_text('w')})"}


def detect_semiconjugacy(q: SkewPoly, delta: int, d: int, l: int) -> Optional[Semiconjugacy]:
    """(r, s) with q(z^r, z^s w) = z^(s delta) q(1, w), found from the term ratios (n - l)/(d - m)"""
    lead = q.w_coefficient(d)
    if len(lead) != 1:
        return None

    ratios = {Fraction(n - l, d - m) for (n, m) in q.support() if m != d}
    if len(ratios) != 1:
        return None

    ratio = ratios.pop()
    r, s = ratio.denominator, ratio.numerator
    if s == 0:
        return None
    if r * l + s * (d - delta) != 0:
        logger.debug(f"Term ratio {ratio} fails r l + s (d - delta) = 0")
        return None
    if l == 0 and s < 0:
        return None

    base = q.at_z_one()
    target = SkewPoly.from_dict({(s * delta, j): c for j, c in base.terms})
    if q.monomial_substitute(r, s) != target:
        logger.debug(f"Substitution identity fails for (r, s) = ({r}, {s})")
        return None

    return Semiconjugacy(r, s, base, delta)


def semiconjugacy_holds(f: SkewProduct, witness: Semiconjugacy) -> bool:
    """pi o f0 = f o pi as an exact Laurent identity"""
    # pi(f0(z, w)) = (z^(r delta), z^(s delta) base(w)); f(pi(z, w)) = (z^(r delta), q(z^r, z^s w))
    lhs = SkewPoly.from_dict({(witness.s * witness.delta, j): c for j, c in witness.base.terms})
    return f.p.is_monomial() and f.q.monomial_substitute(witness.r, witness.s) == lhs


@dataclass(frozen=True)
class ClassificationReport:
    gamma: SymmetryGroup
    type_tag: TypeTag
    infinite: bool
    witness: Optional[Semiconjugacy] = None
    sigma_factor: Optional[int] = None
    torsion_consistent: Optional[bool] = None
    rational_normal_form: bool = False
    uncertain: bool = False
    compactness: Optional[str] = None
    notes: List[str] = field(default_factory=list)
    normal_map: Optional[SkewProduct] = None
    elements: Optional[List] = None

    def to_json(self) -> Dict:
        return {
            "type": self.type_tag.value,
            "infinite": self.infinite,
            "group": self.gamma.to_json(),
            "description": self.gamma.describe(),
            "witness": self.witness.to_json() if self.witness else None,
            "sigma_factor": self.sigma_factor,
            "torsion_consistent": self.torsion_consistent,
            "rational_normal_form": self.rational_normal_form,
            "uncertain": self.uncertain,
            "compactness": self.compactness,
            "julia_shape": julia_shape(self),
            "elements": [[mu.to_json(), nu.to_json()] for mu, nu in self.elements] if self.elements else None,
            "notes": self.notes,
        }


def _circles_constant(g: SkewProduct) -> bool:
    """Phi constant over S^1, i.e. the circles C_z all agree"""
    evaluator = GreenEvaluator(g.to_numeric())
    angles = 2 * np.pi * (np.arange(CIRCLE_POINTS) + 0.5) / CIRCLE_POINTS
    values = [evaluator.phi_sum(complex(np.exp(1j * t))) for t in angles]
    if not all(v.finite for v in values):
        return False
    spread = max(v.value for v in values) - min(v.value for v in values)
    return spread < CIRCLE_SPREAD_TOL


def _expected_kind(tag: TypeTag) -> GroupKind:
    return GroupKind.FULL_TORUS if tag == TypeTag.TORUS else GroupKind.ONE_DIM_FAMILY


def classify(f: SkewProduct, result: Optional[SymmetryResult] = None,
             compactness: Optional[str] = None,
             listing_limit: int = CONFIG["elements_listing_limit"]) -> ClassificationReport:
    """Type of f from its normalized form; anything outside types I-IV has a finite group"""
    result = result or symmetry_group(f)
    gamma = result.group
    notes: List[str] = []

    if not result.normalized.laurent_ok:
        notes.append("normalized map is not Laurent; Gamma_f is finite")
        return _finite_report(gamma, compactness, notes, None, listing_limit)

    g = result.normalized.map
    p_monomial = g.p.is_monomial()
    single_w_power = all(m == g.d for (_, m) in g.q.support())

    witness = None
    sigma_factor = None
    if p_monomial and len(g.q) == 1:
        tag = TypeTag.TORUS
    elif p_monomial and not g.q.depends_on_z():
        tag = TypeTag.PRODUCT
        sigma_factor = support_order(g.q.at_z_one())
    elif single_w_power:
        tag = TypeTag.CIRCLE_BUNDLE
        sigma_factor = result.sigma.order
        if p_monomial and _circles_constant(g):
            notes.append("circles C_z agree over J_p = S^1 (numeric)")
    else:
        witness = detect_semiconjugacy(g.q, g.delta, g.d, g.l) if p_monomial and g.leading_is_monomial() else None
        tag = TypeTag.SEMICONJUGATE if witness else TypeTag.FINITE_SYM

    if tag == TypeTag.FINITE_SYM:
        if not gamma.is_finite:
            # lattice says infinite but no structural form matched
            notes.append("lattice group is infinite but no structural type matched")
            logger.warning(f"No structural type for {f} although {gamma.describe()} is infinite")
            return _finite_report(gamma, compactness, notes, g, listing_limit, uncertain=True)
        return _finite_report(gamma, compactness, notes, g, listing_limit)

    uncertain = not result.is_exact
    if gamma.kind != _expected_kind(tag) and result.is_exact:
        notes.append(f"group kind {gamma.kind.value} disagrees with type {tag.value}")
        uncertain = True

    torsion_consistent = None
    if witness is not None:
        if not semiconjugacy_holds(g, witness):
            raise ClassificationError(f"semiconjugacy identity failed for {g}")
        if gamma.kind == GroupKind.ONE_DIM_FAMILY:
            base_order = support_order(witness.base)
            a = gamma.torsion
            torsion_consistent = base_order is not None and base_order == abs(a * witness.r)

    report = ClassificationReport(
        gamma=gamma,
        type_tag=tag,
        infinite=True,
        witness=witness,
        sigma_factor=sigma_factor,
        torsion_consistent=torsion_consistent,
        rational_normal_form=not g.is_polynomial,
        uncertain=uncertain,
        compactness=compactness,
        notes=notes,
        normal_map=g,
    )
    logger.info(f"Classified {f} as type {tag.value}: {gamma.describe()}")
    return report


def _finite_report(gamma: SymmetryGroup, compactness: Optional[str], notes: List[str],
                   g: Optional[SkewProduct], listing_limit: int, uncertain: bool = False) -> ClassificationReport:
    elements = None
    if gamma.is_finite and gamma.order <= listing_limit:
        elements = gamma.elements()
    logger.info(f"Classified as FiniteSym: {gamma.describe()}")
    return ClassificationReport(gamma=gamma, type_tag=TypeTag.FINITE_SYM, infinite=False,
                                uncertain=uncertain, compactness=compactness, notes=notes,
                                normal_map=g, elements=elements)


def julia_shape(report: ClassificationReport) -> Optional[Dict]:
    """Machine-readable description of J_f for the structural types; None for a finite group"""
    tag = report.type_tag
    g = report.normal_map
    if tag == TypeTag.TORUS:
        return {"shape": "torus"}
    if tag == TypeTag.PRODUCT:
        return {"shape": "product", "base": "S^1", "fiber_julia": g.q.at_z_one().to_text("w")}
    if tag == TypeTag.CIRCLE_BUNDLE:
        return {"shape": "circle_bundle", "base_julia": str(g.p), "radius": "exp(-Phi(z))",
                "leading": str(g.fiber_coefficient(g.d))}
    if tag == TypeTag.SEMICONJUGATE:
        w = report.witness
        return {"shape": "rotated_family", "base": "S^1", "exponent": str(w.ratio),
                "fiber_julia": w.base.to_text("w")}
    return None
