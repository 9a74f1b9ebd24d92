"""Group configuration, weight, Mehta constant, normalized Bessel function
and the quadrature rules used everywhere else."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import special

from . import _accel

SERIES_RADIUS = 30.0
# series is used only while exp(|u| - |Im u|) * eps stays small (cancellation)
SERIES_CANCELLATION = 10.0


class QuadratureError(RuntimeError):
    """A quadrature did not reach its tolerance within the refinement budget."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


@dataclass(frozen=True)
class GroupConfig:
    """Reflection group Z2 (``rank1``) or Z2^d (``product``) with multiplicities."""

    variant: str
    multiplicities: tuple

    def __post_init__(self):
        ks = tuple(float(k) for k in self.multiplicities)
        object.__setattr__(self, "multiplicities", ks)
        if self.variant not in ("rank1", "product"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if not ks:
            raise ValueError("at least one multiplicity is required")
        if self.variant == "rank1" and len(ks) != 1:
            raise ValueError("rank1 variant takes exactly one multiplicity")
        if any(not math.isfinite(k) or k < 0 for k in ks):
            raise ValueError("multiplicities must be finite and nonnegative")
        if not sum(ks) > 0:
            raise ValueError("index gamma = sum(k) must be positive")

    @classmethod
    def rank1(cls, k: float) -> "GroupConfig":
        return cls("rank1", (k,))

    @classmethod
    def product(cls, ks: Sequence[float]) -> "GroupConfig":
        return cls("product", tuple(ks))

    @property
    def dimension(self) -> int:
        return len(self.multiplicities)

    @property
    def gamma(self) -> float:
        return math.fsum(self.multiplicities)

    @property
    def k(self) -> np.ndarray:
        return np.array(self.multiplicities)

    def to_dict(self) -> dict:
        return {"variant": self.variant, "k": list(self.multiplicities)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "GroupConfig":
        try:
            variant = data["variant"]
            ks = data["k"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"config needs 'variant' and 'k': {exc}") from None
        if isinstance(ks, (int, float)):
            ks = [ks]
        return cls(variant, tuple(ks))

    @classmethod
    def from_json(cls, text: str) -> "GroupConfig":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class QuadRule:
    """1-D nodes and weights. Weights may already carry a weight function."""

    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple
    exactness_degree: int
    meta: dict = field(default_factory=dict, compare=False)

    def integrate(self, f):
        return np.sum(self.weights * f(self.nodes), axis=-1)

    def __len__(self):
        return len(self.nodes)


def weight(config: GroupConfig, x) -> np.ndarray:
    """omega_k(x) = prod_j |x_j|^(2 k_j); ``x`` has shape (..., d)."""
    x = np.asarray(x, dtype=float)
    if config.dimension == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        x = x[..., None]
    return np.prod(np.abs(x) ** (2.0 * config.k), axis=-1)


def mehta_constant(config: GroupConfig) -> float:
    # int_R exp(-t^2) |t|^(2k) dt = Gamma(k + 1/2), and Z2^d factorizes
    return math.prod(1.0 / math.gamma(k + 0.5) for k in config.multiplicities)


def sphere_weight_mass(config: GroupConfig) -> float:
    """Integral of omega_k over the unit sphere, 2 / (c_k Gamma(gamma + d/2))."""
    return 2.0 / (mehta_constant(config) * math.gamma(config.gamma + config.dimension / 2))


def normalized_bessel(alpha: float, u, with_error: bool = False):
    """j_alpha(u) = Gamma(alpha+1) sum (-1)^n (u/2)^(2n) / (n! Gamma(n+alpha+1)).

    Power series (compensated) inside the switching region, Bessel J from
    scipy outside it. Accepts scalars or arrays, real or complex.
    """
    if alpha < -0.5:
        raise ValueError("alpha must be >= -1/2")
    u_in = np.asarray(u)
    u = u_in.astype(np.complex128)
    # even function: fold onto Re u >= 0 so the scipy branch cut is avoided
    u = np.where(u.real < 0, -u, u)
    mod = np.abs(u)
    use_series = (mod <= SERIES_RADIUS) & (mod - np.abs(u.imag) <= SERIES_CANCELLATION)
    out = np.empty(u.shape, dtype=np.complex128)
    err = np.empty(u.shape)
    if use_series.any():
        vals, scale = _accel.bessel_series(alpha, u[use_series])
        out[use_series] = vals
        err[use_series] = 4 * np.finfo(float).eps * scale
    far = ~use_series
    if far.any():
        uf = u[far]
        vals = math.gamma(alpha + 1) * (2.0 / uf) ** alpha * special.jv(alpha, uf)
        out[far] = vals
        err[far] = 1e-14 * np.maximum(np.abs(vals), 1e-300) + 1e-15
    if not np.iscomplexobj(u_in) and u_in.dtype.kind in "fiu":
        result = out.real
    else:
        result = out
    if result.ndim == 0:
        result = result[()]
        err = err[()]
    return (result, err) if with_error else result


def gauss_rule(n: int, interval=(-1.0, 1.0)) -> QuadRule:
    if n < 1:
        raise ValueError("gauss_rule needs n >= 1")
    a, b = map(float, interval)
    t, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (b - a)
    return QuadRule(a + half * (t + 1.0), half * w, (a, b), 2 * n - 1)


def jacobi_type_rule(gamma_param: float, n: int) -> QuadRule:
    """Gauss rule for f(t) (1 - t^2)^(gamma-1) (1 + t) on [-1, 1]."""
    if not gamma_param > 0:
        raise ValueError("gamma_param must be positive")
    if n < 1:
        raise ValueError("jacobi_type_rule needs n >= 1")
    # Jacobi weight (1-t)^a (1+t)^b with a = gamma-1, b = gamma
    t, w = special.roots_jacobi(n, gamma_param - 1.0, gamma_param)
    return QuadRule(t, w, (-1.0, 1.0), 2 * n - 1, {"gamma": gamma_param})


def jacobi_type_prefactor(gamma_param: float) -> float:
    return math.gamma(gamma_param + 0.5) / (math.sqrt(math.pi) * math.gamma(gamma_param))


def intertwiner_rule(k: float, n: int) -> QuadRule:
    """Unit-mass rule for the one-coordinate intertwiner measure.

    For k = 0 the measure is the point mass at t = 1.
    """
    if k == 0:
        return QuadRule(np.array([1.0]), np.array([1.0]), (-1.0, 1.0), 10**9)
    rule = jacobi_type_rule(k, n)
    w = rule.weights * jacobi_type_prefactor(k)
    return QuadRule(rule.nodes, w, rule.interval, rule.exactness_degree, rule.meta)


def power_rule(expo: float, a: float, b: float, n: int) -> QuadRule:
    """Gauss rule on [a, b] for the weight (x - a)^expo."""
    if expo == 0:
        return gauss_rule(n, (a, b))
    t, w = special.roots_jacobi(n, 0.0, expo)
    half = 0.5 * (b - a)
    return QuadRule(a + half * (t + 1.0), w * half ** (expo + 1.0), (a, b), 2 * n - 1)


def weighted_line_rule(k: float, half_width: float, n: int) -> QuadRule:
    """Rule on [-L, L] whose weights include |x|^(2k); ``n`` nodes per half."""
    pos = power_rule(2.0 * k, 0.0, half_width, n)
    nodes = np.concatenate([-pos.nodes[::-1], pos.nodes])
    weights = np.concatenate([pos.weights[::-1], pos.weights])
    return QuadRule(nodes, weights, (-half_width, half_width), 2 * n - 1, {"k": k})


def box_rules(config: GroupConfig, half_width: float, n: int) -> list:
    return [weighted_line_rule(k, half_width, n) for k in config.multiplicities]


def tensor_grid(rules) -> tuple:
    """Points (N, d) and weights (N,) of a tensor rule, C-order."""
    mesh = np.meshgrid(*[r.nodes for r in rules], indexing="ij")
    wmesh = np.meshgrid(*[r.weights for r in rules], indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    w = np.prod(np.stack([m.ravel() for m in wmesh], axis=-1), axis=-1)
    return pts, w


def graded_panels(a: float, b: float, ratio: float = 2.0, max_len: float = 1.0):
    """Split [a, b] (a > 0) into panels growing geometrically from a."""
    edges = [a]
    while edges[-1] < b:
        step = min(edges[-1] * (ratio - 1.0), max_len)
        edges.append(min(edges[-1] + step, b))
    return list(zip(edges[:-1], edges[1:]))
