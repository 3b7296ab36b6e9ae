"""
Fiber Julia set rendering
Green-value grids over a square window, boundary bands, binary PGM output and
discrete Hausdorff comparisons in pixel units
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Sequence

import numpy as np
from scipy.spatial.distance import directed_hausdorff

from config.settings import BAND_TOL, MAX_WORKERS
from core.green import GreenEvaluator
from core.polynomials import Poly1, SkewPoly
from core.skew import SkewProduct
from utils.logging import get_logger
from utils.parallel import chunked, map_parallel

logger = get_logger(__name__)

PIXEL_ESCAPE = 255
PIXEL_BAND = 0
PIXEL_INTERIOR = 96


class RenderError(Exception):
    """Custom rendering error"""
    pass


@dataclass(frozen=True, eq=False)
class JuliaSlice:
    """G_z sampled on a resolution x resolution grid, row 0 at the top"""

    z: complex
    center: complex
    width: float
    resolution: int
    band_tol: float
    green_values: np.ndarray
    pixels: np.ndarray
    boundary_points: np.ndarray
    flags: Dict[str, bool] = field(default_factory=dict)

    @property
    def pixel_size(self) -> float:
        return self.width / self.resolution

    def band_pixels(self) -> np.ndarray:
        """(row, col) indices of the boundary band"""
        return np.argwhere(self.pixels == PIXEL_BAND)

    def to_pixels(self, points: Sequence[complex]) -> np.ndarray:
        """Continuous (row, col) coordinates of complex points"""
        points = np.asarray(points, dtype=np.complex128)
        half = self.width / 2
        col = (points.real - (self.center.real - half)) / self.pixel_size - 0.5
        row = ((self.center.imag + half) - points.imag) / self.pixel_size - 0.5
        return np.column_stack([row, col])

    def stats(self) -> Dict:
        total = self.pixels.size
        return {
            "interior_fraction": float(np.count_nonzero(self.pixels == PIXEL_INTERIOR)) / total,
            "band_pixels": int(np.count_nonzero(self.pixels == PIXEL_BAND)),
            "escape_fraction": float(np.count_nonzero(self.pixels == PIXEL_ESCAPE)) / total,
            "max_green": float(np.max(self.green_values)) if total else 0.0,
        }

    def to_json(self) -> Dict:
        return {
            "fiber": [self.z.real, self.z.imag],
            "window": {"center": [self.center.real, self.center.imag], "width": self.width},
            "resolution": [self.resolution, self.resolution],
            "band_tol": self.band_tol,
            "flags": dict(self.flags),
            "stats": self.stats(),
        }


def _grid(center: complex, width: float, resolution: int) -> np.ndarray:
    step = width / resolution
    offsets = (np.arange(resolution) + 0.5) * step - width / 2
    re = center.real + offsets
    im = center.imag - offsets
    return re[None, :] + 1j * im[:, None]


def render_slice(evaluator: GreenEvaluator, z: complex, center: complex = 0j, width: float = 4.0,
                 resolution: int = 512, band_tol: float = BAND_TOL,
                 max_workers: int = MAX_WORKERS) -> JuliaSlice:
    """G_z over the window; the band 0 < G_z < band_tol stands in for the boundary of K_z"""
    if resolution < 1:
        raise RenderError(f"resolution must be positive (got {resolution})")
    if width <= 0:
        raise RenderError(f"window width must be positive (got {width})")

    grid = _grid(complex(center), width, resolution)
    rows = chunked(list(range(resolution)), max(1, max_workers))

    def render_rows(indices):
        block = grid[indices[0]:indices[-1] + 1]
        return evaluator.green_fiber(z, block.ravel()).reshape(block.shape)

    blocks = map_parallel(render_rows, rows, max_workers, label="row blocks")
    green = np.vstack(blocks)

    interior = green == 0.0
    band = (green > 0.0) & (green < band_tol)
    pixels = np.full(green.shape, PIXEL_ESCAPE, dtype=np.uint8)
    pixels[band] = PIXEL_BAND
    pixels[interior] = PIXEL_INTERIOR

    flags = {
        "all_escaping": bool(not interior.any()),
        "all_bounded": bool(interior.all()),
        "phi_degenerate": evaluator.is_phi_degenerate(z),
    }
    if flags["all_bounded"]:
        logger.warning(f"No pixel escapes in the slice over z={z}; K_z may be the whole plane")
    if flags["all_escaping"]:
        logger.warning(f"Every pixel escapes in the slice over z={z}")

    logger.info(f"Rendered fiber over z={z}: {resolution}x{resolution}, {int(band.sum())} band pixels")
    return JuliaSlice(complex(z), complex(center), float(width), resolution, band_tol,
                      green, pixels, grid[band], flags)


def render_base_julia(base: Poly1, center: complex = 0j, width: float = 4.0, resolution: int = 512,
                      band_tol: float = BAND_TOL, max_workers: int = MAX_WORKERS) -> JuliaSlice:
    """Filled Julia set of a one-variable polynomial, as the fiber of (z^2, base(w)) over z = 1"""
    f0 = SkewProduct(Poly1.monomial(2), SkewPoly.from_dict({(0, j): c for j, c in base.terms}))
    return render_slice(GreenEvaluator(f0.to_numeric()), 1.0 + 0j, center, width, resolution,
                        band_tol, max_workers)


def hausdorff_pixels(first: JuliaSlice, second: JuliaSlice) -> float:
    """Symmetric discrete Hausdorff distance between two band sets on the same window"""
    if (first.resolution, first.width, first.center) != (second.resolution, second.width, second.center):
        raise RenderError("slices must share window and resolution")
    a, b = first.band_pixels(), second.band_pixels()
    if not len(a) or not len(b):
        return float("inf")
    return max(directed_hausdorff(a, b)[0], directed_hausdorff(b, a)[0])


def hausdorff_to_points(view: JuliaSlice, points: Sequence[complex]) -> float:
    """Symmetric Hausdorff distance in pixels between the band and reference points"""
    a = view.band_pixels().astype(float)
    b = view.to_pixels(points)
    if not len(a) or not len(b):
        return float("inf")
    return max(directed_hausdorff(a, b)[0], directed_hausdorff(b, a)[0])


def write_pgm(path: Path, pixels: np.ndarray) -> Path:
    """Binary PGM (P5), maxval 255, row-major from the top-left pixel"""
    pixels = np.ascontiguousarray(pixels, dtype=np.uint8)
    height, width = pixels.shape
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as handle:
        handle.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        handle.write(pixels.tobytes())
    logger.debug(f"Wrote {width}x{height} PGM to {path}")
    return path


def read_pgm(path: Path) -> np.ndarray:
    data = Path(path).read_bytes()
    tokens = []
    pos = 0
    while len(tokens) < 4:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        tokens.append(data[start:pos])
    if tokens[0] != b"P5":
        raise RenderError(f"{path} is not a binary PGM")
    width, height, maxval = int(tokens[1]), int(tokens[2]), int(tokens[3])
    if maxval != 255:
        raise RenderError(f"unsupported maxval {maxval}")
    # exactly one whitespace byte separates the header from the raster
    return np.frombuffer(data, dtype=np.uint8, count=width * height, offset=pos + 1).reshape(height, width)


def write_sidecar(path: Path, view: JuliaSlice, evaluator: GreenEvaluator,
                  seed: Optional[int] = None, extra: Optional[Dict] = None) -> Path:
    data = view.to_json()
    data["seed"] = seed
    data["iteration"] = {"n_max": evaluator.n_max, "n_max_limit": evaluator.n_max_limit,
                         "bailout": evaluator.bailout, "tol": evaluator.tol}
    if extra:
        data.update(extra)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    return path
