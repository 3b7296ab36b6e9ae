"""
Simultaneous polynomial root finding (Aberth-Ehrlich iteration)
"""

import math
from typing import Tuple

import numpy as np

from config.settings import ROOT_MAX_ITER, ROOT_TOL
from core.green import NumericsError
from utils.logging import get_logger

logger = get_logger(__name__)


class RootFindingError(NumericsError):
    """Custom root finding error"""
    pass


def _trim(coeffs: np.ndarray) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    nonzero = np.flatnonzero(coeffs)
    if nonzero.size == 0:
        raise RootFindingError("zero polynomial has no roots")
    return coeffs[nonzero[0]:]


def aberth_roots(coeffs: np.ndarray, tol: float = ROOT_TOL,
                 max_iter: int = ROOT_MAX_ITER) -> Tuple[np.ndarray, bool]:
    """
    All complex roots of a polynomial given highest-degree-first
    Returns (roots, converged); residuals are relative to the coefficient scale.
    """
    coeffs = _trim(coeffs)
    n = coeffs.size - 1
    if n == 0:
        return np.zeros(0, dtype=np.complex128), True

    # roots at the origin are split off exactly
    zero_count = 0
    while coeffs[-1] == 0:
        coeffs = coeffs[:-1]
        zero_count += 1
    n = coeffs.size - 1
    zeros = np.zeros(zero_count, dtype=np.complex128)
    if n == 0:
        return zeros, True

    deriv = coeffs[:-1] * np.arange(n, 0, -1)

    # Cauchy bound for the initial circle, offset angle breaks symmetric stalls
    radius = 1.0 + np.max(np.abs(coeffs[1:] / coeffs[0]))
    angles = 2 * math.pi * np.arange(n) / n + 0.4
    x = radius * np.exp(1j * angles)

    scale = np.sum(np.abs(coeffs))
    converged = False
    for iteration in range(max_iter):
        pv = np.polyval(coeffs, x)
        dpv = np.polyval(deriv, x)
        diff = x[:, None] - x[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        ratio = pv / dpv
        step = ratio / (1.0 - ratio * inv.sum(axis=1))
        x = x - step
        residual = np.max(np.abs(np.polyval(coeffs, x))) / scale
        if np.max(np.abs(step)) < tol * max(1.0, np.max(np.abs(x))) or residual < tol:
            converged = True
            break

    if not converged:
        logger.warning(f"Aberth iteration did not converge in {max_iter} steps (degree {n})")
    else:
        logger.debug(f"Aberth converged after {iteration + 1} steps (degree {n})")

    return np.concatenate([zeros, x]), converged


def roots_or_raise(coeffs: np.ndarray, tol: float = ROOT_TOL,
                   max_iter: int = ROOT_MAX_ITER) -> np.ndarray:
    roots, converged = aberth_roots(coeffs, tol, max_iter)
    if not converged:
        raise RootFindingError(f"root finder did not converge to {tol}")
    return roots
