"""Aberth-Ehrlich root finder"""

import numpy as np
import pytest

from core.roots import RootFindingError, aberth_roots, roots_or_raise


def _sorted(values):
    return np.array(sorted(values, key=lambda c: (round(c.real, 6), round(c.imag, 6))))


def test_known_roots():
    expected = np.array([1.0, 2.0, -3j, 0.5 + 0.5j])
    roots, converged = aberth_roots(np.poly(expected))
    assert converged
    assert np.allclose(_sorted(roots), _sorted(expected), atol=1e-9)


def test_roots_at_origin_split_off():
    # z^3 (z - 2)
    roots, converged = aberth_roots(np.array([1, -2, 0, 0, 0]))
    assert converged
    assert np.count_nonzero(roots == 0) == 3
    assert np.allclose(roots[roots != 0], [2.0])


def test_leading_zeros_trimmed():
    roots, _ = aberth_roots(np.array([0, 0, 1, -1]))
    assert np.allclose(roots, [1.0])


def test_roots_of_unity():
    roots = roots_or_raise(np.array([1, 0, 0, 0, 0, 0, -1]))
    assert np.allclose(np.abs(roots), 1.0, atol=1e-10)
    assert np.allclose(roots ** 6, 1.0, atol=1e-9)


def test_constant_has_no_roots():
    roots, converged = aberth_roots(np.array([5.0]))
    assert converged and roots.size == 0


def test_failures():
    with pytest.raises(RootFindingError):
        aberth_roots(np.zeros(3))
    with pytest.raises(RootFindingError):
        roots_or_raise(np.array([1, 0, 0, 0, 0, 0, 0, 0, -3]), max_iter=1)
