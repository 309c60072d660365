from __future__ import annotations

import pytest

from helpers import complex_system, float_system, frac_vec, rational_system


@pytest.fixture
def parabola():
    """X = {y - x^2 = 0} over the rationals."""
    return rational_system(2, "y - x^2")


@pytest.fixture
def parabola_real():
    return float_system(2, "y - x^2")


@pytest.fixture
def surface():
    """X = {z^2 - x^3*y^3 = 0} over the rationals."""
    return rational_system(3, "z^2 - x^3*y^3")


@pytest.fixture
def surface_real():
    return float_system(3, "z^2 - x^3*y^3")


@pytest.fixture
def surface_complex():
    return complex_system(3, "z^2 - x^3*y^3")


@pytest.fixture
def quadric_cone():
    """Homogeneous cone x*y - z^2 = 0."""
    return rational_system(3, "x*y - z^2")


@pytest.fixture
def smooth_ci():
    """Smooth complete intersection {x3 = x1^2, x4 = x1*x2} in K^4."""
    return rational_system(4, "x3 - x1^2", "x4 - x1*x2")


@pytest.fixture
def e1():
    return frac_vec(1, 0)
