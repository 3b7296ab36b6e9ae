"""
Floating-point potential theory for skew products
Green functions of the base and of the fibers, the Phi series and Bottcher coordinates
"""

import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from config.settings import (
    BAILOUT_RADIUS, GREEN_TOL, N_MAX, N_MAX_LIMIT, PHI_DEGENERATE_EPS,
)
from core.skew import NumericSkew
from utils.logging import get_logger

logger = get_logger(__name__)

PHI_CONVERGED = "converged"
PHI_DEGENERATE = "degenerate"
PHI_TRUNCATED = "truncated"
PHI_DIVERGENT = "divergent"

# |W| beyond which the Bottcher product has no visible terms left
BOTTCHER_STOP = 1e150
BRANCH_LIMIT = 0.5
LOG_FLOOR = np.finfo(float).tiny


class NumericsError(Exception):
    """Custom numerics error"""
    pass


class BranchInstabilityError(NumericsError):
    """Custom Bottcher branch error"""
    pass


@dataclass(frozen=True)
class PhiResult:
    value: float
    status: str
    terms: int
    tail_bound: float

    @property
    def finite(self) -> bool:
        return self.status in (PHI_CONVERGED, PHI_TRUNCATED) and math.isfinite(self.value)

    def to_json(self) -> dict:
        return {"value": self.value if math.isfinite(self.value) else str(self.value),
                "status": self.status, "terms": self.terms, "tail_bound": self.tail_bound}


class GreenEvaluator:
    """Green functions G_p, G_z, Phi and phi_z for one float skew product"""

    def __init__(self, f: NumericSkew, bailout: float = BAILOUT_RADIUS, n_max: int = N_MAX,
                 n_max_limit: int = N_MAX_LIMIT, tol: float = GREEN_TOL):
        self.f = f
        self.bailout = bailout
        self.n_max = n_max
        self.n_max_limit = max(n_max, n_max_limit)
        self.tol = tol

        lead = abs(f.p[0])
        self.base_constant = math.log(lead) / (f.delta - 1)
        self.escape_radius = max(2.0, (1.0 + float(np.sum(np.abs(f.p[1:])))) / lead)
        if self.bailout <= self.escape_radius:
            raise NumericsError(f"bailout {bailout:g} is inside the escape radius {self.escape_radius:g}")
        self.fiber_escape_radius = self._fiber_escape_radius()
        if self.bailout <= self.fiber_escape_radius:
            raise NumericsError(f"bailout {bailout:g} is inside the fiber escape radius "
                                f"{self.fiber_escape_radius:g}")

        logger.debug(f"GreenEvaluator: delta={f.delta}, d={f.d}, R_p={self.escape_radius:.3g}, "
                     f"R_w={self.fiber_escape_radius:.3g}, bailout={bailout:g}, n_max={n_max}")

    def _fiber_escape_radius(self, rings: int = 32, spokes: int = 64) -> float:
        """
        Largest (2 + sum_(j<d) |b_j(z)|) / |b_d(z)| over a polar grid of 0 < |z| <= R_p
        Past it |q_z(w)| > 2|w|; grid points with b_d(z) ~ 0 are left to the phi-degenerate checks.
        """
        radii = np.linspace(self.escape_radius / rings, self.escape_radius, rings)
        z = np.outer(radii, np.exp(2j * np.pi * np.arange(spokes) / spokes)).ravel()
        with np.errstate(all="ignore"):
            lead = np.abs(self.f.leading(z))
            rest = sum(np.abs(self.f.fiber_coefficients(j, z)) for j in range(self.f.d))
            ratio = (2.0 + rest) / lead
        usable = (lead >= PHI_DEGENERATE_EPS) & np.isfinite(ratio)
        return float(max(2.0, np.max(ratio[usable]))) if usable.any() else 2.0

    def _iterations_for(self, degree: int, offset: float) -> int:
        """Smallest cap with degree^-n (log bailout + offset) < tol, doubled from n_max"""
        target = (math.log(self.bailout) + abs(offset)) / self.tol
        n = self.n_max
        while degree ** n < target and n < self.n_max_limit:
            n *= 2
        return min(n, self.n_max_limit)

    # Base

    def green_base(self, z):
        """G_p(z) = lim delta^-n log+|p^n(z)|, vectorized"""
        z = np.array(z, dtype=np.complex128, copy=True)
        scalar = z.ndim == 0
        z = np.atleast_1d(z)
        delta = self.f.delta
        steps = self._iterations_for(delta, self.base_constant)

        result = np.zeros(z.shape)
        active = np.ones(z.shape, dtype=bool)
        for k in range(steps):
            escaped = active & (np.abs(z) > self.bailout)
            if escaped.any():
                result[escaped] = (np.log(np.abs(z[escaped])) + self.base_constant) / delta ** k
                active &= ~escaped
            if not active.any():
                break
            z[active] = self.f.base(z[active])

        result = np.maximum(result, 0.0)
        return float(result[0]) if scalar else result

    def _escape_level(self, point: complex, n: int) -> float:
        """G_p of the orbit start read off at step n, once p^n(z) is past the bailout"""
        return (math.log(abs(point)) + self.base_constant) / self.f.delta ** n

    def base_orbit(self, z: complex, steps: int) -> np.ndarray:
        """
        z, p(z), ..., p^steps(z), cut short where rounding pushes an orbit of K_p past the bailout
        Raises when z itself lies outside K_p.
        """
        orbit = [complex(z)]
        for n in range(steps + 1):
            point = orbit[-1]
            if abs(point) > self.bailout:
                if self._escape_level(point, n) > self.tol:
                    raise NumericsError(f"base orbit of {z} escapes; fiber Green function needs z in K_p")
                orbit.pop()
                break
            if n < steps:
                orbit.append(complex(self.f.base(point)))
        return np.array(orbit, dtype=np.complex128)

    # Phi

    def _phi_terms(self, orbit: np.ndarray) -> np.ndarray:
        """log|b_d| along the orbit, floored so an exact zero far down the orbit stays finite"""
        leading = np.abs(self.f.leading(orbit))
        return np.log(np.maximum(leading, LOG_FLOOR))

    def phi_sum(self, z: complex, n_max: Optional[int] = None) -> PhiResult:
        """Phi(z) = sum_n d^-(n+1) log|b_d(p^n(z))| with a geometric tail bound"""
        d = self.f.d
        cap = n_max or self.n_max
        limit = max(cap, self.n_max_limit)
        point = complex(z)
        total, biggest = 0.0, 0.0
        near_zero = False
        n = 0
        while True:
            if abs(point) > self.bailout:
                if self._escape_level(point, n) <= self.tol:
                    # rounding drift off J_p; the remaining terms are below the tail scale
                    return PhiResult(total, PHI_TRUNCATED, n, biggest / (d ** n * (d - 1)))
                return self._phi_escaping(point, n, total)
            lead = abs(complex(self.f.leading(point)))
            if lead == 0.0:
                return PhiResult(-math.inf, PHI_DEGENERATE, n + 1, 0.0)
            near_zero = near_zero or lead < PHI_DEGENERATE_EPS
            term = math.log(lead)
            total += term / d ** (n + 1)
            biggest = max(biggest, abs(term))
            n += 1
            tail = biggest / (d ** n * (d - 1))
            if tail < self.tol and n >= min(cap, 8):
                status = PHI_DEGENERATE if near_zero else PHI_CONVERGED
                return PhiResult(total, status, n, tail)
            if n >= cap:
                if cap >= limit:
                    return PhiResult(total, PHI_TRUNCATED, n, tail)
                cap *= 2
            point = complex(self.f.base(point))

    def _phi_escaping(self, point: complex, n: int, partial: float) -> PhiResult:
        """Close the series in closed form once p^n(z) is past the bailout"""
        f = self.f
        d, delta, l = f.d, f.delta, f.l
        if l > 0 and delta >= d:
            return PhiResult(math.inf, PHI_DIVERGENT, n, math.inf)
        # log|p^k(z_n)| ~ delta^k (log|z_n| + c) - c, log|b_d| ~ log|lead| + l log|.|
        scale = d ** -(n + 1)
        value = partial + scale * (math.log(abs(f.leading_coefficient())) - l * self.base_constant) * d / (d - 1)
        if l > 0:
            growth = math.log(abs(point)) + self.base_constant
            value += scale * l * growth / (1 - delta / d)
        return PhiResult(value, PHI_CONVERGED, n, 0.0)

    def _phi_along(self, orbit: np.ndarray) -> np.ndarray:
        """Phi(z_k) for every orbit point by the recurrence Phi(z) = (log|b_d(z)| + Phi(p(z))) / d"""
        terms = self._phi_terms(orbit)
        d = self.f.d
        phis = np.zeros(orbit.size)
        for k in range(orbit.size - 2, -1, -1):
            phis[k] = (terms[k] + phis[k + 1]) / d
        return phis

    # Fibers

    def green_fiber(self, z: complex, w):
        """G_z(w) = d^-k (log|Q_z^k(w)| + Phi(p^k(z))) at the first k past the bailout"""
        w = np.array(w, dtype=np.complex128, copy=True)
        scalar = w.ndim == 0
        w = np.atleast_1d(w)
        d = self.f.d

        head = self.phi_sum(z)
        if head.status == PHI_DIVERGENT:
            result = np.full(w.shape, math.inf)
            return float(result[0]) if scalar else result

        steps = self._iterations_for(d, head.value if head.finite else 0.0)
        # extra tail so Phi at the last needed point has converged too
        orbit = self.base_orbit(z, steps + max(head.terms, 8) + 1)
        phis = self._phi_along(orbit)
        if head.status == PHI_DEGENERATE:
            logger.warning(f"phi-degenerate orbit: p^n({complex(z):.6g}) comes within "
                           f"{PHI_DEGENERATE_EPS:g} of a zero of b_d")

        result = np.zeros(w.shape)
        active = np.ones(w.shape, dtype=bool)
        for k in range(min(steps, orbit.size)):
            with np.errstate(over="ignore", invalid="ignore"):
                escaped = active & (np.abs(w) > self.bailout)
            if escaped.any():
                result[escaped] = (np.log(np.abs(w[escaped])) + phis[k]) / d ** k
                active &= ~escaped
            if not active.any():
                break
            w[active] = self.f.fiber(orbit[k], w[active])

        result = np.nan_to_num(np.maximum(result, 0.0), nan=0.0)
        return float(result[0]) if scalar else result

    def is_phi_degenerate(self, z: complex) -> bool:
        return self.phi_sum(z).status == PHI_DEGENERATE

    def bottcher_fiber(self, z: complex, w: complex) -> complex:
        """
        phi_z(w) = w prod_n (1 + eps_n)^(1/d^(n+1)) with principal branches,
        eps_n = sum_(j<d) (b_j/b_d)(z_n) W_n^(j-d)
        """
        d = self.f.d
        z_n, w_n = complex(z), complex(w)
        log_phi = np.log(w_n)
        for n in range(self.n_max_limit):
            lead = complex(self.f.leading(z_n))
            if abs(lead) < PHI_DEGENERATE_EPS:
                raise NumericsError(f"phi-degenerate orbit at step {n}")
            t = 1.0 / w_n
            eps = sum(complex(self.f.fiber_coefficients(j, z_n)) / lead * t ** (d - j)
                      for j in range(d))
            if abs(eps) >= BRANCH_LIMIT:
                raise BranchInstabilityError(
                    f"Bottcher factor too far from 1 at step {n} (|eps|={abs(eps):.3g}); "
                    f"shrink to larger |w|")
            log_phi += np.log1p(eps) / d ** (n + 1)
            if abs(eps) < 1e-17 or abs(w_n) > BOTTCHER_STOP:
                break
            w_n = complex(self.f.fiber(z_n, w_n))
            z_n = complex(self.f.base(z_n))
        return complex(np.exp(log_phi))

    def bottcher_residual(self, z: complex, w: complex) -> float:
        """Relative residual of phi_p(z)(q_z(w)) = b_d(z) phi_z(w)^d"""
        lhs = self.bottcher_fiber(self.f.base(z), self.f.fiber(z, w))
        rhs = complex(self.f.leading(z)) * self.bottcher_fiber(z, w) ** self.f.d
        return abs(lhs - rhs) / abs(rhs)

    def homogeneity_residuals(self, points: List[Tuple[complex, complex]]) -> np.ndarray:
        """|G_p(z)(q_z(w)) - d G_z(w)| per point, one vectorized pass per distinct z"""
        zs = np.array([z for z, _ in points], dtype=np.complex128)
        ws = np.array([w for _, w in points], dtype=np.complex128)
        out = np.zeros(len(points))
        for z in np.unique(zs):
            mask = zs == z
            w = ws[mask]
            image = self.green_fiber(complex(self.f.base(z)), self.f.fiber(z, w))
            out[mask] = np.abs(image - self.f.d * self.green_fiber(complex(z), w))
        return out
