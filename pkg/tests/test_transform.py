import math

import numpy as np
import pytest

from dunklkit.foundation import GroupConfig, QuadratureError, mehta_constant
from dunklkit.functions import SampledFunction, gaussian, hermite_gaussian, make_function
from dunklkit.intertwine import tvk_function_1d
from dunklkit.transform import (
    TailBoundError,
    dunkl_transform,
    dunkl_transform_grid,
    fourier_1d,
    inverse_dunkl_transform,
    plancherel_defect,
    radial_transform,
    transformed_function,
    weighted_l1,
)

C1 = GroupConfig.rank1(1.0)
C2 = GroupConfig.product([0.5, 0.5])


def gaussian_image(config, y):
    # the unit Gaussian is an eigenfunction: F_D exp(-|x|^2/2) = 2^(gamma+d/2)/c_k exp(-|y|^2/2)
    y = np.atleast_2d(y)
    g, d = config.gamma, config.dimension
    return 2 ** (g + d / 2) / mehta_constant(config) * np.exp(-np.sum(y * y, axis=-1) / 2)


def test_zero_function():
    z = make_function("zero", C1)
    assert np.all(dunkl_transform(C1, z, [0.0, 1.5]).values == 0)
    assert plancherel_defect(C1, z) == 0.0


def test_unit_gaussian_at_origin():
    # int x^2 exp(-x^2/2) dx = sqrt(2 pi)
    v = dunkl_transform(C1, gaussian(1), 0.0).values
    assert v.real == pytest.approx(math.sqrt(2 * math.pi), rel=1e-12)


@pytest.mark.parametrize("config", [GroupConfig.rank1(0.3), C1, C2, GroupConfig.product([1.0, 0.0, 2.0])])
def test_gaussian_closed_form(config):
    rng = np.random.default_rng(3)
    y = rng.uniform(-3, 3, (6, config.dimension))
    res = dunkl_transform(config, gaussian(config.dimension), y)
    assert np.allclose(res.values, gaussian_image(config, y), atol=1e-9)
    assert res.meta["est_error"] < 1e-8
    assert res.meta["route"]


def test_uniform_bound_by_weighted_l1():
    f = gaussian(1, 0.5, center=[0.7])
    v = dunkl_transform(C1, f, np.linspace(-6, 6, 25)).values
    assert np.max(np.abs(v)) <= weighted_l1(C1, f) * (1 + 1e-10)


def test_parity_symmetries():
    k = GroupConfig.rank1(0.7)
    ys = np.array([0.4, 1.3, 2.2])
    even = dunkl_transform(k, gaussian(1), ys).values
    assert np.max(np.abs(even.imag)) < 1e-13
    odd = dunkl_transform(k, hermite_gaussian(1), ys).values
    assert np.max(np.abs(odd.real)) < 1e-13
    assert np.allclose(dunkl_transform(k, hermite_gaussian(1), -ys).values, -odd, atol=1e-13)


def test_dilation():
    lam = 1.7
    cfg = GroupConfig.rank1(0.8)
    ys = np.array([0.2, 0.9, 1.8])
    f = gaussian(1, 0.5, center=[0.3])
    scaled = SampledFunction(lambda x: f(lam * x), 1, "gaussian", rate=f.rate * lam ** 2, amplitude=f.amplitude)
    lhs = dunkl_transform(cfg, scaled, ys).values
    rhs = lam ** -(2 * cfg.gamma + 1) * dunkl_transform(cfg, f, ys / lam).values
    assert np.allclose(lhs, rhs, atol=1e-10)


def test_shifted_gaussian_spectrum_box():
    # the envelope of a shifted Gaussian is looser than its spectral decay
    f = gaussian(1, 0.5, center=[1.0])
    h = transformed_function(GroupConfig.rank1(0.7), f)
    assert h.rate == pytest.approx(0.45)
    tail = abs(dunkl_transform(GroupConfig.rank1(0.7), f, h.box_halfwidth).values)
    assert tail < 1e-12


def test_round_trip_one_dimension():
    f = gaussian(1, 0.5, center=[0.4])
    cfg = GroupConfig.rank1(0.7)
    h = transformed_function(cfg, f)
    xs = np.linspace(-3, 3, 25)
    back = inverse_dunkl_transform(cfg, h, xs).values
    assert np.max(np.abs(back - f(xs[:, None]))) < 1e-7


def test_round_trip_two_dimensions():
    f = gaussian(2)
    h = transformed_function(C2, f)
    axis = np.linspace(-3, 3, 7)
    xs = np.stack(np.meshgrid(axis, axis, indexing="ij"), axis=-1).reshape(-1, 2)
    back = inverse_dunkl_transform(C2, h, xs).values
    assert np.max(np.abs(back - f(xs))) < 1e-6


def test_grid_route_matches_point_route():
    f = gaussian(2, 0.5, center=[0.3, -0.2])
    ax = [np.array([-1.0, 0.0, 2.0]), np.array([0.5, 1.5])]
    grid = dunkl_transform_grid(C2, f, ax).values
    pts = np.stack(np.meshgrid(*ax, indexing="ij"), axis=-1).reshape(-1, 2)
    assert np.allclose(grid.ravel(), dunkl_transform(C2, f, pts).values, atol=1e-12)


def test_radial_matches_full_transform():
    rho = np.linspace(0, 5, 10)
    u = np.array([0.6, 0.8])
    full = dunkl_transform(C2, gaussian(2), rho[:, None] * u).values
    assert np.max(np.abs(radial_transform(C2, gaussian(2), rho) - full)) < 1e-9
    # the radial route does not depend on direction
    full2 = dunkl_transform(C2, gaussian(2), rho[:, None] * np.array([-1.0, 0.0])).values
    assert np.max(np.abs(full2 - full)) < 1e-9


def test_radial_transform_at_origin_is_mass():
    cfg = GroupConfig.product([1.0, 0.5])
    f = gaussian(2, 0.8)
    assert radial_transform(cfg, f, [0.0])[0] == pytest.approx(weighted_l1(cfg, f), rel=1e-10)


@pytest.mark.parametrize("k", [0.7, 1.0])
def test_plancherel_one_dimension(k):
    cfg = GroupConfig.rank1(k)
    assert plancherel_defect(cfg, gaussian(1)) < 1e-10
    assert plancherel_defect(cfg, hermite_gaussian(1)) < 1e-10
    assert plancherel_defect(cfg, gaussian(1, 0.6, center=[0.5])) < 1e-8


def test_plancherel_two_dimensions():
    assert plancherel_defect(C2, gaussian(2)) < 1e-8


def test_factorization_through_dual_intertwiner():
    # F_D f is the unnormalized classical Fourier transform of tV_k f
    k = 0.7
    cfg = GroupConfig.rank1(k)
    f = gaussian(1, 0.5, center=[0.5])
    ys = np.linspace(-4, 4, 9)
    a = dunkl_transform(cfg, f, ys).values
    b = fourier_1d(lambda s: tvk_function_1d(k, f, s, n=32), ys, f.box_halfwidth, n=200)
    assert np.max(np.abs(a - b)) < 1e-8


def test_riemann_lebesgue():
    f = gaussian(1, 0.5, center=[0.2])
    assert abs(dunkl_transform(C1, f, 20.0).values) < 1e-8


def test_tail_guard_raises():
    g = gaussian(1, 0.5)
    narrow_box = SampledFunction(g.evaluator, 1, "gaussian", rate=0.5, box_halfwidth=4.0)
    with pytest.raises(TailBoundError):
        dunkl_transform(C1, narrow_box, 0.0)
    assert issubclass(TailBoundError, QuadratureError)


def test_tolerance_floor_and_no_decay():
    with pytest.raises(ValueError):
        dunkl_transform(C1, gaussian(1), [0.0], tol=1e-14)
    with pytest.raises((ValueError, QuadratureError)):
        dunkl_transform(C1, make_function("exp:z=1", C1), [0.0])
