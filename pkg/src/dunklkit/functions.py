"""Sampled test functions with declared decay, plus the named registry used
by the CLI (``gaussian``, ``bump:a=1``, ``hermite1*gaussian``, ...)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special

DEFAULT_GAUSSIAN_BOX = 12.0
DECAYS = ("gaussian", "poly_gaussian", "compact", "none")


def as_points(x, dimension: int) -> np.ndarray:
    x = np.asarray(x)
    if dimension == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        x = x[..., None]
    if x.shape[-1] != dimension:
        raise ValueError(f"expected points with trailing dimension {dimension}")
    return x


@dataclass(frozen=True)
class SampledFunction:
    """A function on R^d with a declared envelope.

    Envelopes: ``gaussian`` and ``poly_gaussian`` mean
    |f(x)| <= amplitude * (1 + |x|)^degree * exp(-rate |x|^2);
    ``compact`` means f vanishes outside the ball of radius ``radius``.
    ``radial_profile``, when given, is f0 with f(x) = f0(|x|).
    ``noise_floor`` is the absolute error of a numerically computed evaluator;
    the envelope spot-check allows for it. ``grid_evaluator``, when given,
    maps per-coordinate axes to values on their tensor grid (C-order).
    """

    evaluator: Callable
    dimension: int
    decay: str = "gaussian"
    rate: float = 0.5
    degree: int = 0
    amplitude: float = 1.0
    radius: float | None = None
    box_halfwidth: float | None = None
    radial_profile: Callable | None = None
    name: str = "f"
    noise_floor: float = 0.0
    grid_evaluator: Callable | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.decay not in DECAYS:
            raise ValueError(f"decay must be one of {DECAYS}")
        if self.decay == "compact" and not (self.radius and self.radius > 0):
            raise ValueError("compact decay needs a positive radius")
        if self.decay in ("gaussian", "poly_gaussian") and not self.rate > 0:
            raise ValueError("gaussian decay needs a positive rate")
        if self.box_halfwidth is None:
            object.__setattr__(self, "box_halfwidth", self._default_box())
        self._spot_check()

    def _default_box(self) -> float:
        if self.decay == "compact":
            return float(self.radius)
        if self.decay in ("gaussian", "poly_gaussian"):
            return DEFAULT_GAUSSIAN_BOX * math.sqrt(0.5 / self.rate)
        return DEFAULT_GAUSSIAN_BOX

    def envelope(self, x) -> np.ndarray:
        r = np.linalg.norm(as_points(x, self.dimension), axis=-1)
        if self.decay == "compact":
            return np.where(r <= self.radius, np.inf, 0.0)
        if self.decay == "none":
            return np.full(r.shape, np.inf)
        return self.amplitude * (1 + r) ** self.degree * np.exp(-self.rate * r * r)

    def _spot_check(self, probes: int = 32):
        if self.decay == "none":
            return
        rng = np.random.default_rng(12345)
        span = 1.5 * self.box_halfwidth
        pts = rng.uniform(-span, span, size=(probes, self.dimension))
        vals = np.abs(self(pts))
        env = self.envelope(pts)
        bad = vals > env * (1 + 1e-9) + self.noise_floor + 1e-300
        if np.any(bad):
            raise ValueError(f"{self.name}: values exceed the declared {self.decay} envelope")

    def __call__(self, x):
        return self.evaluator(as_points(x, self.dimension))

    def tail_bound(self, multiplicities, half_width: float | None = None) -> float:
        """Bound on the integral of |f| omega_k outside the box [-L, L]^d."""
        L = self.box_halfwidth if half_width is None else half_width
        if self.decay == "compact":
            return 0.0 if self.radius <= L * (1 + 1e-12) else math.inf
        if self.decay == "none":
            return math.inf
        a = self.rate
        m = self.degree
        # (1+|x|)^m <= 2^m max(1, |x|^m) <= 2^m (1 + sum_j |x_j|^m d^{m/2}) ; crude
        poly = 2.0 ** m * max(1.0, self.dimension ** (m / 2.0))
        total = 0.0
        for j, kj in enumerate(multiplicities):
            tail_j = _gauss_tail(a, 2 * kj + m, L) + _gauss_tail(a, 2 * kj, L)
            others = 1.0
            for i, ki in enumerate(multiplicities):
                if i != j:
                    others *= _gauss_full(a, 2 * ki + m) + _gauss_full(a, 2 * ki)
            total += 2 * tail_j * others
        return self.amplitude * poly * total


def _gauss_full(a, p):
    # int_0^inf exp(-a t^2) t^p dt
    s = (p + 1) / 2.0
    return math.gamma(s) / (2 * a ** s)


def _gauss_tail(a, p, L):
    s = (p + 1) / 2.0
    return special.gammaincc(s, a * L * L) * math.gamma(s) / (2 * a ** s)


def gaussian(dimension: int, rate: float = 0.5, center=None, amplitude: float = 1.0) -> SampledFunction:
    """amplitude * exp(-rate |x - center|^2)."""
    if center is None:
        profile = lambda r: amplitude * np.exp(-rate * np.asarray(r) ** 2)  # noqa: E731
        return SampledFunction(
            lambda x: amplitude * np.exp(-rate * np.sum(x * x, axis=-1)),
            dimension, "gaussian", rate=rate, amplitude=abs(amplitude),
            radial_profile=profile, name=f"gaussian:a={rate}",
        )
    c = np.asarray(center, dtype=float).reshape(dimension)
    # exp(-a|x-c|^2) <= exp(a|c|^2) exp(-(a/2)|x|^2)
    env_amp = abs(amplitude) * math.exp(rate * float(c @ c))
    return SampledFunction(
        lambda x: amplitude * np.exp(-rate * np.sum((x - c) ** 2, axis=-1)),
        dimension, "gaussian", rate=rate / 2, amplitude=env_amp,
        name=f"gaussian:a={rate},c={list(c)}", meta={"spectral_rate": 1.0 / (4.0 * rate)},
    )


def hermite_gaussian(dimension: int, coordinate: int = 0, rate: float = 0.5) -> SampledFunction:
    """x_j exp(-rate |x|^2), odd in x_j."""
    return SampledFunction(
        lambda x: x[..., coordinate] * np.exp(-rate * np.sum(x * x, axis=-1)),
        dimension, "poly_gaussian", rate=rate, degree=1, name=f"hermite{coordinate + 1}*gaussian",
    )


def exponential(z) -> SampledFunction:
    """exp(<x, z>), no decay; only meaningful for intertwiner evaluation."""
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    return SampledFunction(lambda x: np.exp(x @ z), len(z), "none", name=f"exp:z={list(z)}")


def bump_profile(r, radius: float = 1.0):
    """exp(-1 / (1 - (r/a)^2)) inside the ball, 0 outside."""
    s = np.asarray(r, dtype=float) / radius
    out = np.zeros_like(s)
    inside = np.abs(s) < 1
    out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
    return out


def _parse_params(text: str) -> dict:
    params = {}
    if not text:
        return params
    for chunk in text.split(";") if ";" in text else _split_top(text):
        if not chunk.strip():
            continue
        key, _, val = chunk.partition("=")
        params[key.strip()] = val.strip()
    return params


def _split_top(text):
    # "a=1,z=1,2" -> ["a=1", "z=1,2"]: a comma starts a new key only if followed by key=
    parts = []
    for piece in text.split(","):
        if "=" in piece or not parts:
            parts.append(piece)
        else:
            parts[-1] += "," + piece
    return parts


def _floats(val: str):
    return [float(v) for v in val.replace(" ", "").split(",") if v]


def make_function(spec: str, config) -> SampledFunction:
    """Build a registered test function from a spec string."""
    d = config.dimension
    name, _, rest = spec.strip().replace("×", "*").partition(":")
    params = _parse_params(rest)
    name = name.lower()
    if name == "zero":
        return SampledFunction(lambda x: np.zeros(x.shape[:-1]), d, "gaussian", name="zero")
    if name == "gaussian":
        rate = float(params.get("a", 0.5))
        center = _floats(params["c"]) if "c" in params else None
        return gaussian(d, rate=rate, center=center)
    if name.startswith("hermite") and name.endswith("*gaussian"):
        idx = int(name[len("hermite"):-len("*gaussian")] or 1) - 1
        if not 0 <= idx < d:
            raise ValueError(f"hermite index out of range for dimension {d}")
        return hermite_gaussian(d, idx, rate=float(params.get("a", 0.5)))
    if name == "bump":
        from .convolve import BumpFunction

        return BumpFunction(config, float(params.get("a", 1.0))).as_function()
    if name == "approx":
        from .convolve import approx_identity

        return approx_identity(config, float(params.get("eps", 0.1)))
    if name == "exp":
        z = _floats(params.get("z", "1"))
        if len(z) == 1 and d > 1:
            z = z * d
        if len(z) != d:
            raise ValueError(f"exp:z needs {d} components")
        return exponential(z)
    raise ValueError(f"unknown function spec {spec!r}")
