"""
Shared fixtures: the worked example maps and a low-cost analysis config
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import pytest

from core.pipeline import SkewAnalyzer
from ui.expression import parse_map

EXAMPLE_MAPS = {
    "finite": "(z^3, z*w^2 + z)",
    "finite_translated": "(z^3, z*w^2 + 2*z^2*w + z)",
    "basilica_bundle": "(z^2 - 1, z^2*w^2)",
    "rotated_family": "(z^3, z*w^2 + z^3)",
    "inverse_family": "(z^2, z^3*w^5 + z*w^3 + w^2)",
    "bounds": "(z^2, (z - 1)*w^2)",
    "torus": "(z^2, w^2)",
    "product": "(z^2, w^2 - 1)",
    "compact_bundle": "(z^2, (z - 3)*w^2)",
}

# small sample counts keep the numeric stages quick
FAST_CONFIG = {
    "samples": 200,
    "verify_samples": 48,
    "resolution": 64,
    "max_workers": 2,
    "timestamp": False,
}


@pytest.fixture
def maps():
    return {name: parse_map(text) for name, text in EXAMPLE_MAPS.items()}


@pytest.fixture
def analyzer():
    return SkewAnalyzer(FAST_CONFIG)
