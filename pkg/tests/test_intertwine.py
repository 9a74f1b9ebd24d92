from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from dunklkit.foundation import GroupConfig, jacobi_type_prefactor, weighted_line_rule
from dunklkit.functions import gaussian
from dunklkit.intertwine import (
    MomentTable,
    moment,
    tvk_function_1d,
    vk_function,
    vk_inverse_poly,
    vk_poly,
    vk_transmutation_solver,
)
from dunklkit.kernel import kernel_values
from dunklkit.polyalg import DegreeCapError, MultiPoly, RationalK, dunkl_apply, eval_poly, parse_poly

rational_k = st.fractions(min_value=F(1, 6), max_value=3, max_denominator=6)


def polys(d, max_exp=5):
    exps = st.tuples(*[st.integers(0, max_exp)] * d)
    coef = st.fractions(min_value=-4, max_value=4, max_denominator=5)
    return st.dictionaries(exps, coef, max_size=5).map(lambda t: MultiPoly(t, d))


@pytest.mark.parametrize("k", [0.3, 1.0, 2.5])
def test_moments_match_numeric_integral(k):
    c = jacobi_type_prefactor(k)
    for n in range(9):
        ref = c * integrate.quad(lambda t: t ** n * (1 + t), -1, 1, weight="alg", wvar=(k - 1, k - 1))[0]
        assert moment(k, n) == pytest.approx(ref, rel=1e-10, abs=1e-14)


@given(rational_k)
def test_moments_rational_and_bounded(k):
    table = MomentTable.build(RationalK((k,)), cap=12)
    assert table(0, 0) == 1
    for n in range(13):
        m = table(0, n)
        assert isinstance(m, F) and 0 < m <= 1
    with pytest.raises(DegreeCapError):
        table(0, 13)


def test_low_degree_images():
    k = F(3, 4)
    kq = RationalK((k,))
    x = MultiPoly.variable(0, 1)
    assert vk_poly(kq, MultiPoly.constant(1, 1)) == 1
    assert vk_poly(kq, x) == x * (1 / (2 * k + 1))
    assert vk_poly(kq, x ** 2) == x ** 2 * (1 / (2 * k + 1))
    assert vk_transmutation_solver(kq, MultiPoly.constant(1, 1)) == 1


def test_zero_multiplicity_is_identity():
    kq = RationalK((F(0), F(0)))
    p = parse_poly("x1^3 x2 - 2 x2^4 + 7", 2)
    assert vk_poly(kq, p) == p
    assert vk_transmutation_solver(kq, p) == p


@settings(max_examples=30, deadline=None)
@given(st.tuples(rational_k, rational_k).map(RationalK), polys(2))
def test_two_routes_agree_exactly(kq, p):
    assert vk_poly(kq, p) == vk_transmutation_solver(kq, p)


@settings(max_examples=30, deadline=None)
@given(st.tuples(rational_k, rational_k).map(RationalK), polys(2))
def test_transmutation_relation(kq, p):
    q = vk_poly(kq, p)
    for j in range(2):
        assert dunkl_apply(kq, j, q) == vk_poly(kq, p.diff(j))


@settings(max_examples=30, deadline=None)
@given(st.tuples(rational_k, rational_k).map(RationalK), polys(2))
def test_inverse_round_trip_and_degree(kq, p):
    q = vk_poly(kq, p)
    assert vk_inverse_poly(kq, q) == p
    for n in range(max(p.degree, 0) + 1):
        assert vk_poly(kq, p.homogeneous_part(n)) == q.homogeneous_part(n)


def test_function_route_constant_and_polynomial():
    cfg = GroupConfig.product([0.5, 1.5])
    x = np.array([[0.3, -1.2], [2.0, 0.7]])
    assert np.allclose(vk_function(cfg, lambda t: np.ones(t.shape[:-1]), x), 1.0, atol=1e-14)
    p = parse_poly("x1^3 x2^2 - 2 x1 x2 + x2^5", 2)
    q = vk_poly(RationalK.from_config(cfg), p)
    got = vk_function(cfg, lambda t: eval_poly(p, t), x)
    assert np.allclose(got, eval_poly(q, x), atol=1e-10)


def test_function_route_reproduces_kernel():
    cfg = GroupConfig.product([1.0, 0.4])
    rng = np.random.default_rng(7)
    for _ in range(5):
        x = rng.uniform(-2, 2, 2)
        z = rng.uniform(-2, 2, 2) + 1j * rng.uniform(-2, 2, 2)
        v = vk_function(cfg, lambda t: np.exp(t @ z), x)
        assert abs(v - kernel_values(cfg, x, z)) < 1e-8


@settings(max_examples=20, deadline=None)
@given(st.floats(-4, 4), st.floats(0.1, 3.0))
def test_positivity(x, k):
    cfg = GroupConfig.rank1(k)
    v = vk_function(cfg, lambda t: (t[..., 0] - 0.3) ** 2 * np.exp(-t[..., 0] ** 2), np.array([x]))
    assert v >= -1e-12


def test_dual_pairing():
    k = 0.7
    cfg = GroupConfig.rank1(k)
    f = gaussian(1, 0.5, center=[0.4])

    def g(t):
        return np.exp(-(t[..., 0] - 0.3) ** 2) * (1 + t[..., 0])

    # outer integral over y with a plain Gauss-Legendre rule on [-12, 12]
    t, w = np.polynomial.legendre.leggauss(200)
    ys, wy = 12 * t, 12 * w
    lhs = np.sum(tvk_function_1d(k, f, ys) * g(ys[:, None]) * wy)
    r = weighted_line_rule(k, 12.0, 80)
    rhs = np.sum(r.weights * vk_function(cfg, g, r.nodes[:, None]) * f(r.nodes[:, None]))
    assert lhs == pytest.approx(rhs, abs=1e-6)


def test_dual_at_origin_matches_direct_quadrature():
    k = 1.3
    f = gaussian(1, 0.5, center=[0.5])
    c = jacobi_type_prefactor(k)
    # at y = 0 the dual density times omega_k is c |x|^(2k-1)
    ref = c * integrate.quad(lambda s: s ** (2 * k - 1) * (np.exp(-(s - 0.5) ** 2 / 2) + np.exp(-(s + 0.5) ** 2 / 2)), 0, 12)[0]
    assert tvk_function_1d(k, f, 0.0) == pytest.approx(ref, rel=1e-10)


def test_dual_intertwines_dunkl_operator_and_derivative():
    k = 0.8
    cfg = GroupConfig.rank1(k)
    f = gaussian(1, 0.5, center=[0.4])

    def tf(x):
        # T f, with f(x) = exp(-(x - c)^2 / 2)
        s = x[..., 0]
        fx = np.exp(-(s - 0.4) ** 2 / 2)
        fm = np.exp(-(s + 0.4) ** 2 / 2)
        return -(s - 0.4) * fx + k * (fx - fm) / s

    y = np.array([-1.1, 0.35, 1.6])
    h = 1e-4
    deriv = (tvk_function_1d(k, f, y + h) - tvk_function_1d(k, f, y - h)) / (2 * h)
    got = tvk_function_1d(k, tf, y, half_width=12.0)
    assert np.max(np.abs(got - deriv)) < 1e-5


def test_dual_requires_box_for_plain_callables():
    with pytest.raises(ValueError):
        tvk_function_1d(1.0, lambda x: x[..., 0], 0.5)
