"""
Analysis orchestrator
Runs normalization, symmetry, classification and the numeric checks as named
steps with progress reporting and uniform error wrapping
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from config.settings import CONFIG
from core.classify import ClassificationReport, classify
from core.green import GreenEvaluator
from core.groups import SymmetryElement
from core.render import JuliaSlice, render_slice
from core.sampling import (
    UNCERTAIN, CompactnessResult, PoleSetResult, VerificationResult, compactness_check,
    pole_set_check, sample_julia_base, verify_symmetry_numeric,
)
from core.skew import NormalizedSkew, SkewProduct, normalize
from core.symmetry import SymmetryResult, brute_force_group, oracle_agrees, symmetry_group
from utils.logging import get_logger

logger = get_logger(__name__)

# continuous groups are checked at this many seeded elements besides the identity
CONTINUOUS_VERIFY_ELEMENTS = 3


class AnalysisError(Exception):
    """Custom analysis error"""
    pass


@dataclass
class AnalysisResult:
    f: SkewProduct
    source: str
    normalized: Optional[NormalizedSkew] = None
    symmetry: Optional[SymmetryResult] = None
    classification: Optional[ClassificationReport] = None
    verifications: List[VerificationResult] = field(default_factory=list)
    pole_sets: List[PoleSetResult] = field(default_factory=list)
    compactness: Optional[CompactnessResult] = None
    oracle: Optional[Dict] = None
    render: Optional[JuliaSlice] = None

    @property
    def uncertain(self) -> bool:
        """True when some part of the answer could not be settled"""
        if self.classification is not None and self.classification.uncertain:
            return True
        if self.symmetry is not None and not self.symmetry.is_exact and self.classification is None:
            return True
        if self.compactness is not None and self.compactness.verdict == UNCERTAIN:
            return True
        if self.oracle is not None and not self.oracle["agrees"]:
            return True
        return any(not v.passed for v in self.verifications)


class SkewAnalyzer:
    """Main analysis orchestrator"""

    def __init__(self, config: Optional[Dict] = None,
                 progress_callback: Optional[Callable[[str, int], None]] = None):
        self.config = dict(CONFIG)
        self.config.update(config or {})
        self.progress_callback = progress_callback

    def _update_progress(self, message: str, percentage: int):
        """Update progress if callback is provided"""
        if self.progress_callback:
            self.progress_callback(message, percentage)
        logger.info(f"Analysis Progress {percentage}%: {message}")

    def evaluator(self, f: SkewProduct) -> GreenEvaluator:
        cfg = self.config
        return GreenEvaluator(f.to_numeric(), bailout=cfg["bailout"], n_max=cfg["n_max"],
                              n_max_limit=cfg["n_max_limit"], tol=cfg["green_tol"])

    # Steps

    def run_normalize(self, result: AnalysisResult) -> NormalizedSkew:
        try:
            self._update_progress("Normalizing...", 10)
            result.normalized = normalize(result.f, self.config["precision"])
            return result.normalized
        except Exception as e:
            raise AnalysisError(f"Normalization failed: {e}")

    def run_symmetries(self, result: AnalysisResult) -> SymmetryResult:
        try:
            self._update_progress("Computing the symmetry group...", 30)
            cfg = self.config
            result.symmetry = symmetry_group(result.f, samples=cfg["samples"], filter_tol=cfg["filter_tol"],
                                             candidate_max_order=cfg["candidate_max_order"],
                                             seed=cfg["seed"], precision=cfg["precision"])
            result.normalized = result.symmetry.normalized
            return result.symmetry
        except Exception as e:
            raise AnalysisError(f"Symmetry computation failed: {e}")

    def run_classify(self, result: AnalysisResult) -> ClassificationReport:
        try:
            self._update_progress("Classifying...", 50)
            verdict = result.compactness.verdict if result.compactness else None
            result.classification = classify(result.f, result.symmetry, verdict,
                                             self.config["elements_listing_limit"])
            return result.classification
        except Exception as e:
            raise AnalysisError(f"Classification failed: {e}")

    def run_verify(self, result: AnalysisResult,
                   elements: Optional[List[SymmetryElement]] = None) -> List[VerificationResult]:
        try:
            self._update_progress("Verifying symmetries numerically...", 70)
            cfg = self.config
            if elements is None:
                elements = result.symmetry.group.sample_elements(CONTINUOUS_VERIFY_ELEMENTS, cfg["seed"])

            evaluator = self.evaluator(result.f)
            samples = sample_julia_base(evaluator, cfg["verify_samples"], cfg["seed"], cfg["burn_in"])
            cent = result.normalized.centroids

            result.verifications = [
                verify_symmetry_numeric(evaluator, cent, element, samples, cfg["tol"], cfg["seed"])
                for element in elements
            ]
            if not cent.zeta_z.den.is_constant():
                result.pole_sets = [pole_set_check(cent, element, samples, cfg["eps_near"])
                                    for element in elements]
            return result.verifications
        except Exception as e:
            raise AnalysisError(f"Numeric verification failed: {e}")

    def run_compactness(self, result: AnalysisResult) -> CompactnessResult:
        try:
            self._update_progress("Checking compactness of J_f...", 85)
            cfg = self.config
            evaluator = self.evaluator(result.f)
            samples = sample_julia_base(evaluator, cfg["samples"], cfg["seed"], cfg["burn_in"])
            result.compactness = compactness_check(result.f, evaluator, samples,
                                                   cfg["eps_near"], cfg["eps_far"])
            return result.compactness
        except Exception as e:
            raise AnalysisError(f"Compactness check failed: {e}")

    def run_oracle(self, result: AnalysisResult) -> Dict:
        try:
            self._update_progress("Cross-checking against the brute-force oracle...", 95)
            cfg = self.config
            oracle = brute_force_group(result.f, cfg["max_order"], cfg["depth"], cfg["iterate_budget"],
                                       cfg["max_workers"])
            result.oracle = {
                "max_order": cfg["max_order"],
                "depth": cfg["depth"],
                "elements": len(oracle),
                "agrees": oracle_agrees(result.symmetry, oracle, cfg["max_order"]),
            }
            return result.oracle
        except Exception as e:
            raise AnalysisError(f"Oracle cross-check failed: {e}")

    def run_render(self, result: AnalysisResult, z: complex, center: complex = 0j,
                   width: Optional[float] = None) -> JuliaSlice:
        try:
            self._update_progress(f"Rendering the fiber over z={z}...", 60)
            cfg = self.config
            result.render = render_slice(self.evaluator(result.f), z, center,
                                         width or cfg["window_width"], cfg["resolution"],
                                         cfg["band_tol"], cfg["max_workers"])
            return result.render
        except Exception as e:
            raise AnalysisError(f"Rendering failed: {e}")

    # Full runs

    def analyze(self, f: SkewProduct, source: str = "", numeric: bool = True,
                oracle: bool = False) -> AnalysisResult:
        """Run every stage in order; numeric stages are optional"""
        result = AnalysisResult(f, source or str(f))
        try:
            logger.info(f"Starting analysis of {result.source}")
            self._update_progress("Starting analysis...", 0)

            self.run_normalize(result)
            self.run_symmetries(result)
            if numeric:
                self.run_compactness(result)
            self.run_classify(result)
            if numeric:
                self.run_verify(result)
            if oracle and result.normalized.laurent_ok:
                self.run_oracle(result)

            self._update_progress("Analysis completed", 100)
            return result

        except AnalysisError as e:
            logger.error(f"Analysis failed: {e}")
            self._update_progress(f"Analysis failed: {e}", -1)
            raise

    def get_analysis_summary(self, result: AnalysisResult) -> Dict:
        """Short summary of a finished analysis"""
        summary = {"map": result.source, "uncertain": result.uncertain}
        if result.symmetry:
            summary["group"] = result.symmetry.group.describe()
            summary["status"] = str(result.symmetry.status)
        if result.classification:
            summary["type"] = result.classification.type_tag.value
        if result.verifications:
            summary["verified"] = f"{sum(v.passed for v in result.verifications)}/{len(result.verifications)}"
            summary["max_discrepancy"] = float(np.max([v.distance for v in result.verifications]))
        if result.compactness:
            summary["compactness"] = result.compactness.verdict
        return summary
