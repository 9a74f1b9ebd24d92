"""Dunkl translations (d = 1 and radial), Dunkl convolution and the
approximate identity built from a mass-normalized bump."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .foundation import (
    GroupConfig,
    QuadratureError,
    box_rules,
    gauss_rule,
    intertwiner_rule,
    power_rule,
    sphere_weight_mass,
    tensor_grid,
)
from .functions import SampledFunction, as_points, bump_profile
from .intertwine import vk_function


class UnsupportedTranslation(ValueError):
    """No explicit translation formula is available for this function class."""


def _radial_mass(config: GroupConfig, profile, radius: float, n: int = 48) -> float:
    """int profile(|x|) omega_k(x) dx over the ball, by panels on [0, radius]."""
    expo = 2 * config.gamma + config.dimension - 1
    half = 0.5 * radius
    head = power_rule(expo, 0.0, half, n)
    total = np.sum(head.weights * profile(head.nodes))
    # the bump is flat at the rim; geometric panels toward it keep Gauss rules sharp
    edges = radius - half * 0.5 ** np.arange(0, 40)
    edges = np.append(edges, radius)
    for lo, hi in zip(edges[:-1], edges[1:]):
        g = gauss_rule(n, (lo, hi))
        total += np.sum(g.weights * g.nodes ** expo * profile(g.nodes))
    return float(sphere_weight_mass(config) * total)


@dataclass(frozen=True)
class BumpFunction:
    """Radial bump exp(-1 / (1 - |x/a|^2)) on the ball of radius a.

    ``normalization`` is ``"mass"`` (int phi omega_k = 1) or ``"peak"``
    (phi(0) = 1).
    """

    config: GroupConfig
    radius: float = 1.0
    normalization: str = "mass"
    scale: float = field(init=False, default=1.0)

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("bump radius must be positive")
        if self.normalization == "mass":
            scale = 1.0 / _radial_mass(self.config, self.prototype, self.radius)
        elif self.normalization == "peak":
            scale = math.e
        else:
            raise ValueError("normalization must be 'mass' or 'peak'")
        object.__setattr__(self, "scale", scale)

    def prototype(self, r):
        return bump_profile(r, self.radius)

    def profile(self, r):
        return self.scale * bump_profile(r, self.radius)

    def mass(self) -> float:
        return _radial_mass(self.config, self.profile, self.radius)

    def __call__(self, x):
        x = as_points(np.asarray(x, dtype=float), self.config.dimension)
        return self.profile(np.linalg.norm(x, axis=-1))

    def as_function(self) -> SampledFunction:
        return SampledFunction(
            self.__call__, self.config.dimension, "compact", radius=self.radius,
            radial_profile=self.profile, name=f"bump:a={self.radius}",
            meta={"normalization": self.normalization},
        )


def approx_identity(config: GroupConfig, eps: float, base: BumpFunction | None = None) -> SampledFunction:
    """phi_eps(x) = eps^-(2 gamma + d) phi(|x| / eps), same omega_k-mass as phi."""
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    phi = base or BumpFunction(config, 1.0)
    power = 2 * config.gamma + config.dimension

    def profile(r):
        return eps ** -power * phi.profile(np.asarray(r, dtype=float) / eps)

    def evaluator(x):
        return profile(np.linalg.norm(x, axis=-1))

    return SampledFunction(
        evaluator, config.dimension, "compact", radius=eps * phi.radius,
        radial_profile=profile, name=f"approx:eps={eps}", meta={"eps": eps},
    )


def _even_odd(f, s):
    pts = s[..., None]
    fp, fm = np.asarray(f(pts)), np.asarray(f(-pts))
    return 0.5 * (fp + fm), 0.5 * (fp - fm)


ODD_FLOOR = 1e-6


def _translate_once(k, f, x, y, order):
    rule = intertwiner_rule(k, order)
    t = rule.nodes
    xx, yy = x[..., None], y[..., None]
    s = np.sqrt(np.maximum(xx * xx + yy * yy + 2 * xx * yy * t, 0.0))
    fe, _ = _even_odd(f, s)
    # f_o(s) / s is even in s and bounded; below ODD_FLOOR use its value at ODD_FLOOR
    sq = np.maximum(s, ODD_FLOOR)
    _, fo = _even_odd(f, sq)
    integrand = fe + (xx + yy) * fo / sq
    return np.sum(integrand * rule.weights, axis=-1)


def translate_1d(k: float, y, f, x, tol: float = 1e-10, n: int = 32, n_max: int = 512):
    """tau_y f(x) in d = 1, for any continuous f.

    tau_y f(x) = int [f_e(s) + (x + y) f_o(s) / s] Phi_k(t) dt with
    s = sqrt(x^2 + y^2 + 2xyt), f_e and f_o the even and odd parts of f and
    Phi_k the unit-mass intertwiner density. ``x`` and ``y`` broadcast.
    """
    if not k > 0:
        raise ValueError("translation needs k > 0")
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    prev = _translate_once(k, f, x, y, n)
    while True:
        n = n + n // 2
        cur = _translate_once(k, f, x, y, n)
        gap = np.abs(cur - prev)
        if np.all(gap <= tol * np.maximum(1.0, np.abs(cur))):
            break
        if n >= n_max:
            raise QuadratureError("translation quadrature did not converge", achieved=float(np.max(gap)))
        prev = cur
    return cur[()] if cur.ndim == 0 else cur


def _profile(f):
    if isinstance(f, SampledFunction):
        return f.radial_profile
    if isinstance(f, BumpFunction):
        return f.profile
    return None


def translate_radial(config: GroupConfig, y, f0, x, tol: float = 1e-10):
    """tau_y f(x) for radial f(x) = f0(|x|): V_k applied in the y variable to
    u -> f0(sqrt(|x|^2 + |y|^2 + 2 <x, u>)).

    ``y`` may be a batch of points (..., d); ``x`` is a single point.
    """
    d = config.dimension
    if isinstance(f0, (SampledFunction, BumpFunction)):
        prof = _profile(f0)
        if prof is None:
            raise UnsupportedTranslation("function carries no radial profile")
        f0 = prof
    x = np.asarray(x, dtype=float).reshape(d)
    y = as_points(np.asarray(y, dtype=float), d)
    base = float(x @ x) + np.sum(y * y, axis=-1)
    base = base[..., None]
    scale = 1.0 + np.max(base) if base.size else 1.0

    def g(u):
        rad = base + 2.0 * (u @ x)
        if np.min(rad) < -1e-12 * scale:
            raise ArithmeticError("negative radicand in radial translation")
        return f0(np.sqrt(np.maximum(rad, 0.0)))

    return vk_function(config, g, y, tol=tol)


def _y_rules(config, g, n):
    if isinstance(g, SampledFunction) and g.decay == "compact":
        return box_rules(config, g.radius, n)
    L = g.box_halfwidth if isinstance(g, SampledFunction) else None
    if L is None:
        raise ValueError("the integrated function needs a box half-width")
    return box_rules(config, L, n)


def dunkl_convolve(config: GroupConfig, f, g, x, tol: float = 1e-8, n: int = 64, swap_ok: bool = True):
    """f *_D g(x) = int tau_x f(-y) g(y) omega_k(y) dy.

    d = 1 accepts any continuous f; for d >= 2 f must be radial (if only g
    is, the arguments are swapped, the convolution being commutative).
    ``x`` may be a batch of points.
    """
    d = config.dimension
    if isinstance(g, SampledFunction) and g.decay in ("gaussian", "poly_gaussian"):
        tail = g.tail_bound(config.multiplicities)
        if tail > tol:
            raise QuadratureError(f"tail bound {tail:.3g} exceeds tol", achieved=tail)
    if d >= 2 and _profile(f) is None:
        if swap_ok and _profile(g) is not None:
            return dunkl_convolve(config, g, f, x, tol=tol, n=n, swap_ok=False)
        raise UnsupportedTranslation("d >= 2 needs a radial function to translate")
    xs = as_points(np.asarray(x, dtype=float), d)
    flat = xs.reshape(-1, d)

    def once(order):
        rules = _y_rules(config, g, order)
        ypts, w = tensor_grid(rules)
        gw = np.asarray(g(ypts)) * w
        out = np.empty(len(flat))
        for i, xp in enumerate(flat):
            if d == 1:
                tf = translate_1d(config.multiplicities[0], xp[0], f, -ypts[:, 0], tol=min(tol, 1e-10))
            else:
                tf = translate_radial(config, -ypts, f, xp, tol=min(tol, 1e-10))
            out[i] = np.sum(tf * gw)
        return out

    v1 = once(n)
    v2 = once(n + n // 2)
    gap = float(np.max(np.abs(v2 - v1)))
    if gap > tol * max(1.0, float(np.max(np.abs(v2)))):
        raise QuadratureError(f"convolution quadrature did not converge (delta {gap:.3g})", achieved=gap)
    out = v2.reshape(xs.shape[:-1])
    return out[()] if out.ndim == 0 else out


def convolution_function(config: GroupConfig, f, g, rate: float, amplitude: float, degree: int = 0,
                         tol: float = 1e-8, half_width: float | None = None) -> SampledFunction:
    """f *_D g as a SampledFunction with a caller-declared Gaussian envelope."""
    return SampledFunction(
        lambda x: dunkl_convolve(config, f, g, x, tol=tol), config.dimension,
        "poly_gaussian" if degree else "gaussian", rate=rate, degree=degree, amplitude=amplitude,
        box_halfwidth=half_width, name=f"({getattr(f, 'name', 'f')})*({getattr(g, 'name', 'g')})",
    )
