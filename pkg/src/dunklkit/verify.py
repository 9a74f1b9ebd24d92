"""Invariant suites behind ``dunklkit verify``. Each check returns
(check, measured defect, tolerance, passed, suite)."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from .foundation import GroupConfig
from .functions import gaussian, hermite_gaussian


def _row(suite, name, measured, tol):
    return (name, float(measured), float(tol), bool(measured <= tol), suite)


def suite_kernel(config: GroupConfig, rng, tol=None):
    from .kernel import kernel_1d_integral, kernel_eigen_check, kernel_values

    rows = []
    lattice = np.linspace(-5, 5, 9)
    X, Z = np.meshgrid(lattice, lattice, indexing="ij")
    for j, k in enumerate(config.multiplicities):
        if k == 0:
            continue
        g1 = GroupConfig.rank1(k)
        worst = 0.0
        for zz in (Z, 1j * Z):
            a = kernel_values(g1, X, zz)
            b = kernel_1d_integral(k, X, zz).value
            worst = max(worst, float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a)))))
        rows.append(_row("kernel", f"dual_route_k{j + 1}", worst, tol or 1e-8))
    d = config.dimension
    x = rng.uniform(-3, 3, (200, d))
    y = rng.uniform(-3, 3, (200, d))
    rows.append(_row("kernel", "bound_imaginary", max(0.0, float(np.max(np.abs(kernel_values(config, x, 1j * y)))) - 1), tol or 1e-10))
    zc = rng.uniform(-2, 2, (200, d)) + 1j * rng.uniform(-2, 2, (200, d))
    bound = np.exp(np.linalg.norm(x, axis=-1) * np.linalg.norm(zc.real, axis=-1))
    excess = float(np.max(np.abs(kernel_values(config, x, zc)) / bound)) - 1
    rows.append(_row("kernel", "bound_exponential", max(0.0, excess), tol or 1e-10))
    worst = 0.0
    for _ in range(20):
        xp = rng.uniform(-2, 2, d)
        zp = rng.uniform(-2, 2, d) + 1j * rng.uniform(-2, 2, d)
        worst = max(worst, float(np.max(kernel_eigen_check(config, zp, xp, richardson=True))))
    rows.append(_row("kernel", "eigen_residual", worst, tol or 1e-5))
    return rows


def suite_intertwine(config: GroupConfig, rng, tol=None):
    from .intertwine import vk_function, vk_poly, vk_transmutation_solver
    from .kernel import kernel_values
    from .polyalg import MultiPoly, RationalK, dunkl_apply

    d = config.dimension
    kq = RationalK(tuple(Fraction(v).limit_denominator(1000) for v in config.multiplicities))
    mismatches = 0
    trans = 0
    for _ in range(10):
        terms = {}
        for _ in range(4):
            e = tuple(int(v) for v in rng.integers(0, 4, d))
            terms[e] = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 5)))
        p = MultiPoly(terms, d)
        q = vk_poly(kq, p)
        mismatches += q != vk_transmutation_solver(kq, p)
        for j in range(d):
            trans += dunkl_apply(kq, j, q) != vk_poly(kq, p.diff(j))
    rows = [_row("intertwine", "routes_mismatch_count", mismatches, 0), _row("intertwine", "transmutation_failures", trans, 0)]
    x = rng.uniform(-2, 2, (10, d))
    z = rng.uniform(-2, 2, (10, d)) + 1j * rng.uniform(-2, 2, (10, d))
    worst = 0.0
    for xp, zp in zip(x, z):
        v = vk_function(config, lambda t, zp=zp: np.exp(t @ zp), xp)
        worst = max(worst, abs(v - kernel_values(config, xp, zp)))
    rows.append(_row("intertwine", "vk_kernel_identity", worst, tol or 1e-8))
    return rows


def suite_plancherel(config: GroupConfig, rng, tol=None):
    from .transform import plancherel_defect

    d = config.dimension
    budget = tol or (1e-6 if d == 1 else 1e-4)
    rows = [_row("plancherel", "gaussian", plancherel_defect(config, gaussian(d)), budget)]
    if d <= 2:
        rows.append(_row("plancherel", "hermite1*gaussian", plancherel_defect(config, hermite_gaussian(d)), budget))
    return rows


def suite_inversion(config: GroupConfig, rng, tol=None):
    from .transform import inverse_dunkl_transform, transformed_function

    d = config.dimension
    f = gaussian(d)
    h = transformed_function(config, f)
    axis = np.linspace(-3, 3, 13 if d == 1 else 5)
    mesh = np.meshgrid(*([axis] * d), indexing="ij")
    xs = np.stack([m.ravel() for m in mesh], axis=-1)
    back = inverse_dunkl_transform(config, h, xs).values
    err = float(np.max(np.abs(back - f(xs))))
    return [_row("inversion", "round_trip_sup", err, tol or (1e-5 if d == 1 else 1e-4))]


def suite_radial(config: GroupConfig, rng, tol=None):
    from .transform import dunkl_transform, radial_transform

    d = config.dimension
    f = gaussian(d)
    rho = np.linspace(0.0, 5.0, 10)
    u = rng.standard_normal(d)
    u /= np.linalg.norm(u)
    full = dunkl_transform(config, f, rho[:, None] * u).values
    rad = radial_transform(config, f, rho)
    return [_row("radial", "radial_vs_full", float(np.max(np.abs(full - rad))), tol or 1e-6)]


def suite_convolve(config: GroupConfig, rng, tol=None):
    from .convolve import dunkl_convolve, translate_1d, translate_radial
    from .kernel import kernel_values

    d = config.dimension
    rows = []
    if d == 1:
        k = config.multiplicities[0]
        worst = 0.0
        grid = np.linspace(-2, 2, 5)
        for z in (1.1, 0.7j):
            def kf(p, z=z):
                return kernel_values(config, p[..., 0], z)
            for x in grid:
                v = translate_1d(k, grid, kf, x)
                worst = max(worst, float(np.max(np.abs(v - kernel_values(config, x, z) * kernel_values(config, grid, z)))))
        rows.append(_row("convolve", "product_formula", worst, tol or 1e-7))
        f = gaussian(1, 0.5, center=[0.3])
        g = gaussian(1, 0.8)
        xs = rng.uniform(-2, 2, 3)
        comm = float(np.max(np.abs(dunkl_convolve(config, f, g, xs) - dunkl_convolve(config, g, f, xs))))
        rows.append(_row("convolve", "commutativity", comm, tol or 1e-6))
    else:
        f = gaussian(d)
        x = rng.uniform(-1, 1, d)
        v = translate_radial(config, np.zeros(d), f, x)
        rows.append(_row("convolve", "translate_at_zero", abs(v - f(x)), tol or 1e-10))
    return rows


def suite_hypo(config: GroupConfig, rng, tol=None):
    from .hypo import laplacian_operator, verdict

    rep = verdict(config, laplacian_operator(config.dimension), seed=int(rng.integers(0, 2**31)))
    return [_row("hypo", "laplacian_hypoelliptic", 0.0 if rep.verdict == "Hypoelliptic" else 1.0, 0.0)]


SUITES = {
    "kernel": suite_kernel,
    "intertwine": suite_intertwine,
    "plancherel": suite_plancherel,
    "inversion": suite_inversion,
    "radial": suite_radial,
    "convolve": suite_convolve,
    "hypo": suite_hypo,
}


def run_suite(name: str, config: GroupConfig, seed: int = 0, tol_override: float | None = None):
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    rng = np.random.default_rng([seed, list(SUITES).index(name)])
    return SUITES[name](config, rng, tol_override)
