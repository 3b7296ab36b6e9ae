"""
Input validation utilities
"""

import math
import re
from fractions import Fraction
from typing import Any, Tuple

from config.settings import VALIDATION
from utils.logging import get_logger

logger = get_logger(__name__)

TURN_PATTERN = r"^\s*(-?\d+)\s*/\s*(\d+)\s*$"


def validate_tolerance(value: float) -> Tuple[bool, str]:
    """Validate a tolerance lies strictly between 0 and 1"""
    if not isinstance(value, (int, float)) or math.isnan(value):
        return False, "Tolerance must be a number"

    if value <= 0 or value >= 1:
        return False, f"Tolerance out of range: {value} (must be in (0, 1))"

    return True, "Valid tolerance"


def validate_positive_int(value: int, name: str = "value") -> Tuple[bool, str]:
    """Validate a strictly positive integer, honouring per-key bounds"""
    if not isinstance(value, int) or isinstance(value, bool):
        return False, f"{name} must be an integer"

    if value < 1:
        return False, f"{name} must be positive (got {value})"

    if name in VALIDATION:
        low, high = VALIDATION[name]
        if not low <= value <= high:
            return False, f"{name} out of range: {value} (allowed {low}..{high})"

    return True, f"Valid {name}"


def validate_seed(seed: int) -> Tuple[bool, str]:
    """Validate an RNG seed"""
    if not isinstance(seed, int) or isinstance(seed, bool):
        return False, "Seed must be an integer"

    if seed < 0:
        return False, "Seed cannot be negative"

    return True, "Valid seed"


def validate_positive_float(value: float, name: str = "value") -> Tuple[bool, str]:
    """Validate a finite positive float"""
    if not isinstance(value, (int, float)) or not math.isfinite(value):
        return False, f"{name} must be a finite number"

    if value <= 0:
        return False, f"{name} must be positive (got {value})"

    return True, f"Valid {name}"


def validate_window(center: complex, width: float) -> Tuple[bool, str]:
    """Validate a rendering window"""
    if not (math.isfinite(center.real) and math.isfinite(center.imag)):
        return False, "Window center must be finite"

    return validate_positive_float(width, "window width")


def validate_eps_pair(eps_near: float, eps_far: float) -> Tuple[bool, str]:
    """Validate the compactness thresholds ordering"""
    if not 0 < eps_near < eps_far:
        return False, f"Need 0 < eps_near < eps_far (got {eps_near}, {eps_far})"

    return True, "Valid thresholds"


def parse_turn(text: str) -> Tuple[bool, str, Fraction]:
    """Parse a rational turn 'k/m' (exp(2*pi*i*k/m))"""
    match = re.match(TURN_PATTERN, text or "")
    if not match:
        return False, f"Invalid turn: {text!r} (expected k/m)", Fraction(0)

    k, m = int(match.group(1)), int(match.group(2))
    if m == 0:
        return False, "Turn denominator cannot be zero", Fraction(0)

    return True, "Valid turn", Fraction(k, m)


def validate_setting(key: str, value: Any) -> Tuple[bool, str]:
    """Validate one configuration entry by key"""
    if key in ("tol", "filter_tol", "green_tol", "band_tol"):
        return validate_tolerance(value)

    if key == "seed":
        return validate_seed(value)

    if key in ("samples", "verify_samples", "max_order", "depth", "candidate_max_order",
               "iterate_budget", "precision", "elements_listing_limit", "n_max",
               "n_max_limit", "burn_in", "resolution", "max_workers"):
        return validate_positive_int(value, key)

    if key in ("bailout", "eps_near", "eps_far", "window_width"):
        return validate_positive_float(value, key)

    if key in ("strict", "timestamp"):
        if not isinstance(value, bool):
            return False, f"{key} must be a boolean"
        return True, f"Valid {key}"

    logger.debug(f"No validator registered for {key}")
    return False, f"Unknown setting: {key}"
