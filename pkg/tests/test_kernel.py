import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dunklkit.foundation import GroupConfig, QuadratureError
from dunklkit.kernel import (
    kernel_1d,
    kernel_1d_integral,
    kernel_eigen_check,
    kernel_product,
    kernel_values,
)

# frozen after series, Gauss-Jacobi and adaptive quadrature agreed to < 1e-11
GOLDEN_K_AT_ONE = {0.3: 2.0506249011862, 1.0: math.cosh(1.0), 2.5: 1.2633287575309614}

reals = st.floats(min_value=-6, max_value=6)


def k1_closed_form(x, z):
    # k = 1: the two Bessel terms reduce to sinh u / u + (u cosh u - sinh u) / u^2
    u = x * z
    return np.sinh(u) / u + (u * np.cosh(u) - np.sinh(u)) / u ** 2


def test_kernel_at_zero_is_one():
    rng = np.random.default_rng(1)
    x = rng.uniform(-10, 10, 50)
    assert np.all(kernel_1d(0.7, x, 0.0).value == 1.0)
    assert kernel_1d_integral(0.7, 2.5, 0.0).value == pytest.approx(1.0, abs=1e-15)


@settings(max_examples=50)
@given(reals, reals, st.floats(min_value=0.1, max_value=3))
def test_kernel_symmetric(x, z, k):
    assert kernel_1d(k, x, z).value == pytest.approx(kernel_1d(k, z, x).value, rel=1e-13, abs=1e-13)


@settings(max_examples=50)
@given(reals, reals, st.floats(min_value=0.1, max_value=3))
def test_kernel_imaginary_bound(x, y, k):
    assert abs(kernel_1d(k, x, 1j * y).value) <= 1 + 1e-10


def test_closed_form_for_unit_multiplicity():
    x = np.linspace(0.1, 4, 30)
    assert np.allclose(kernel_1d(1.0, x, 1.7).value, k1_closed_form(x, 1.7), rtol=1e-13)
    assert np.allclose(kernel_1d(1.0, x, 2.0j).value, k1_closed_form(x, 2.0j), rtol=1e-12)


@pytest.mark.parametrize("k", sorted(GOLDEN_K_AT_ONE))
def test_golden_values(k):
    assert kernel_1d(k, 1.0, 1.0).value.real == pytest.approx(GOLDEN_K_AT_ONE[k], rel=1e-12)
    assert kernel_1d_integral(k, 1.0, 1.0).value.real == pytest.approx(GOLDEN_K_AT_ONE[k], rel=1e-11)


def test_dual_route_single_point():
    a = kernel_1d(1.0, 0.7, 1.3).value
    b = kernel_1d_integral(1.0, 0.7, 1.3).value
    assert abs(a - b) < 1e-9


def test_integral_route_rejects_large_argument():
    with pytest.raises(ValueError):
        kernel_1d_integral(1.0, 1.0, 80.0)


def test_integral_route_reports_nonconvergence():
    with pytest.raises(QuadratureError):
        kernel_1d_integral(1.0, 40.0, 45j, n_max=48)


def test_zero_multiplicity_reduces_to_exponential():
    cfg = GroupConfig.product([0.0, 1.0])
    x = np.array([1.3, 0.0])
    z = np.array([0.4 + 1j, 0.0])
    assert kernel_values(cfg, x, z) == pytest.approx(np.exp(x @ z), rel=1e-13)


def test_product_route_and_error_estimate():
    cfg = GroupConfig.product([0.5, 2.0])
    kv = kernel_product(cfg, [1.0, -0.5], [0.3j, 2.0])
    assert kv.route == "Product"
    expected = kernel_1d(0.5, 1.0, 0.3j).value * kernel_1d(2.0, -0.5, 2.0).value
    assert kv.value == pytest.approx(expected, rel=1e-14)
    assert 0 <= kv.est_error < 1e-12


def test_large_arguments_follow_scipy_branch():
    # far outside the series disc the kernel still solves the eigen-equation
    cfg = GroupConfig.rank1(0.8)
    res = kernel_eigen_check(cfg, np.array([25.0j]), np.array([1.7]), h=1e-4, richardson=True)
    assert res[0] < 1e-6


def test_eigen_check_validates_step():
    with pytest.raises(ValueError):
        kernel_eigen_check(GroupConfig.rank1(1.0), [1.0], [1.0], h=1.0)


def test_eigen_check_at_reflection_hyperplane():
    cfg = GroupConfig.product([1.0, 0.5])
    res = kernel_eigen_check(cfg, np.array([0.7 + 0.2j, -1.1]), np.array([0.0, 0.4]))
    assert np.all(res < 1e-5)
