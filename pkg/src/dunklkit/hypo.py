"""Symbols of operators P(T) acting on delta, the two H-property checks,
the hypoellipticity verdict and the lower-bound check for
x -> int |K(ix, t)|^2 phi(t) omega_k(t) dt."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np
from scipy import optimize

from .foundation import GroupConfig, QuadRule, QuadratureError, gauss_rule, power_rule, tensor_grid
from .intertwine import moment
from .kernel import kernel_values
from .polyalg import MultiPoly, RationalK, dunkl_compose, eval_poly, parse_poly

DEFAULT_RADII = (1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0)
DEFAULT_LADDER = (10.0, 1e2, 1e3, 1e4)


@dataclass(frozen=True)
class Symbol:
    """p(z) = P(z): each T_j becomes z_j, so Delta_k has symbol sum z_j^2."""

    p: MultiPoly
    source_operator: MultiPoly

    @property
    def dimension(self) -> int:
        return self.p.dimension

    def __call__(self, z):
        return eval_poly(self.p, z)

    def __mul__(self, other: "Symbol") -> "Symbol":
        return Symbol(self.p * other.p, self.source_operator * other.source_operator)

    def is_constant(self) -> bool:
        return self.p.degree <= 0


def symbol_of(config: GroupConfig, P) -> Symbol:
    """Symbol of P(T) delta. ``P`` is a MultiPoly or a literal in T1..Td."""
    if isinstance(P, str):
        P = parse_poly(P, config.dimension, var="T")
    if P.dimension != config.dimension:
        raise ValueError("operator dimension does not match the configuration")
    return Symbol(MultiPoly(P.terms, P.dimension), P)


def laplacian_operator(d: int) -> MultiPoly:
    return sum((MultiPoly.variable(j, d) ** 2 for j in range(d)), MultiPoly({}, d))


def kernel_taylor(kq, w, degree: int) -> MultiPoly:
    """Exact Taylor polynomial of x -> K(x, w) up to ``degree`` for rational w."""
    kq = kq if isinstance(kq, RationalK) else RationalK.from_config(kq)
    d = kq.dimension
    out = MultiPoly.constant(1, d)
    for j, (k, wj) in enumerate(zip(kq.values, w)):
        wj = Fraction(wj)
        factor = MultiPoly({(0,) * d: 1}, d)
        for n in range(1, degree + 1):
            e = [0] * d
            e[j] = n
            factor = factor + MultiPoly({tuple(e): moment(k, n) * wj ** n / math.factorial(n)}, d)
        out = out * factor
        # drop terms above the degree to keep products small
        out = MultiPoly({e: c for e, c in out.terms.items() if sum(e) <= degree}, d)
    return out


def symbol_direct(config: GroupConfig, P: MultiPoly, w) -> Fraction:
    """[P(T) K(., w)](0) in exact arithmetic, an independent route to P(w)."""
    kq = RationalK.from_config(config)
    taylor = kernel_taylor(kq, w, max(P.degree, 0))
    total = Fraction(0)
    for mu, c in P.terms.items():
        image = dunkl_compose(kq, mu, taylor)
        total += c * image.terms.get((0,) * P.dimension, Fraction(0))
    return total


# ---------------------------------------------------------------- growth


@dataclass
class GrowthReport:
    A: float | None
    M: float | None
    min_abs_per_sphere: dict
    passed: bool
    samples_per_sphere: int


def _sphere_directions(d, samples, rng):
    if d == 2:
        th = np.linspace(0.0, 2 * math.pi, samples, endpoint=False)
        return np.stack([np.cos(th), np.sin(th)], axis=-1)
    v = rng.standard_normal((samples, d))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _sphere_min(symbol: Symbol, r: float, samples: int, rng) -> float:
    d = symbol.dimension
    if d == 1:
        return float(np.min(np.abs(symbol(np.array([[r], [-r]])))))
    dirs = _sphere_directions(d, samples, rng)
    vals = np.real(symbol(r * dirs))
    # the sphere is connected for d >= 2: a sign change forces a zero on it
    if np.min(vals) <= 0.0 <= np.max(vals):
        return 0.0
    absvals = np.abs(vals)
    best = absvals.min()
    for idx in np.argsort(absvals)[:4]:
        def obj(v):
            u = v / np.linalg.norm(v)
            return float(abs(np.real(symbol(r * u[None, :]))[0]))
        res = optimize.minimize(obj, dirs[idx], method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-14})
        best = min(best, res.fun)
    return float(best)


def check_growth(symbol: Symbol, radii=DEFAULT_RADII, samples_per_sphere: int = 720, A_max: float = 50.0,
                 seed: int = 0) -> GrowthReport:
    """Least A with min_{|x|=r} |p(x)| >= r^-A for all ladder radii r >= M.

    M is the smallest ladder radius from which the bound holds on every later
    radius; the check passes when such an M exists within the first half of
    the ladder and A <= A_max. A is reported as max(0, needed exponent).
    """
    radii = [float(r) for r in radii]
    if any(r < 1 for r in radii) or sorted(radii) != radii:
        raise ValueError("radii must be increasing and >= 1")
    rng = np.random.default_rng(seed)
    mins = {r: _sphere_min(symbol, r, samples_per_sphere, rng) for r in radii}
    needed = {}
    for r, m in mins.items():
        if m <= 1e-12:
            needed[r] = math.inf
        elif r == 1.0:
            # r^-A = 1 here for every A; allow roundoff in the sampled minimum
            needed[r] = 0.0 if m >= 1.0 - 1e-12 else math.inf
        else:
            needed[r] = max(0.0, -math.log(m) / math.log(r))
    M = None
    A = None
    for i, r in enumerate(radii):
        tail = [needed[s] for s in radii[i:]]
        if all(math.isfinite(t) for t in tail):
            M, A = r, max(tail)
            break
    passed = M is not None and radii.index(M) <= len(radii) // 2 and A <= A_max
    return GrowthReport(A, M, {str(r): m for r, m in mins.items()}, bool(passed), samples_per_sphere)


# ---------------------------------------------------------------- zero set


@dataclass
class ZeroSetReport:
    samples: list
    ratio_table: dict
    trend: float | None
    passed: bool | None
    unknown_rungs: list
    infinite_zero_set: bool | None
    note: str = ""


def _line_roots(symbol: Symbol, a, b, rho, deg):
    """Roots in t of q(t) = p(a + t b), coefficients by sampling on |t| = rho."""
    N = max(2 * (deg + 1), 16)
    t = rho * np.exp(2j * math.pi * np.arange(N) / N)
    vals = symbol(a[None, :] + t[:, None] * b[None, :])
    coef = np.fft.fft(vals) / N / rho ** np.arange(N)
    coef = coef[: deg + 1]
    top = np.max(np.abs(coef))
    if top == 0:
        return np.array([])
    while len(coef) > 1 and abs(coef[-1]) < 1e-13 * top:
        coef = coef[:-1]
    if len(coef) < 2:
        return np.array([])
    roots = np.roots(coef[::-1])
    out = []
    for r in roots:
        for _ in range(20):
            z = a + r * b
            h = 1e-7 * max(1.0, abs(r))
            q = symbol(z[None, :])[0]
            dq = (symbol((a + (r + h) * b)[None, :])[0] - symbol((a + (r - h) * b)[None, :])[0]) / (2 * h)
            if dq == 0:
                break
            step = q / dq
            r = r - step
            if abs(step) <= 1e-15 * max(1.0, abs(r)):
                break
        out.append(r)
    return np.array(out)


def _ratio(z):
    norm = float(np.linalg.norm(z))
    return float(np.linalg.norm(np.imag(z))) / math.log(norm)


def check_zero_growth(symbol: Symbol, radius_ladder=DEFAULT_LADDER, budget: int = 64, seed: int = 0,
                      max_unknown: int = 1) -> ZeroSetReport:
    """Samples the complex zero set near each |z| in the ladder (within 10%)
    and tracks min |Im z| / log |z|.

    Pass: the per-rung minimum ratio at least doubles from rung to rung and
    is >= 5 on the last rung. Rungs beyond a finite zero set are vacuous.
    A rung where the sampler finds no zero is unknown; more than
    ``max_unknown`` of them gives no decision (passed = None).
    """
    ladder = [float(r) for r in radius_ladder]
    if symbol.is_constant():
        return ZeroSetReport([], {str(r): math.inf for r in ladder}, None, True, [], False,
                             "constant symbol: empty zero set")
    d = symbol.dimension
    deg = symbol.p.degree
    rng = np.random.default_rng(seed)
    samples = []
    table = {}
    unknown = []
    if d == 1:
        coef = [complex(symbol.p.terms.get((n,), 0)) for n in range(deg, -1, -1)]
        roots = np.roots(coef)
        for R in ladder:
            near = [z for z in roots if abs(abs(z) - R) <= 0.1 * R]
            if near:
                table[str(R)] = min(_ratio(np.array([z])) for z in near)
                samples.extend([[complex(z)] for z in near])
            elif np.max(np.abs(roots)) < 0.9 * R:
                table[str(R)] = math.inf
            else:
                table[str(R)] = None
                unknown.append(R)
        infinite = False
    else:
        counts = []
        for R in ladder:
            found = []
            for i in range(budget):
                # every fourth line is real, so zeros near the real subspace get sampled too
                a = R * _unit_complex(rng, d, real=i % 4 == 3)
                b = _unit_complex(rng, d, real=i % 4 == 3)
                for t in _line_roots(symbol, a, b, R, deg):
                    z = a + t * b
                    if abs(np.linalg.norm(z) - R) <= 0.1 * R and abs(symbol(z[None, :])[0]) <= 1e-10 * max(1.0, R ** deg):
                        found.append(z)
            counts.append(len(found))
            if found:
                table[str(R)] = min(_ratio(z) for z in found)
                samples.extend([[complex(c) for c in z] for z in found[:4]])
            else:
                table[str(R)] = None
                unknown.append(R)
        infinite = all(c >= 2 for c in counts)
    known = [(float(r), v) for r, v in table.items() if v is not None]
    if len(unknown) > max_unknown or not known:
        return ZeroSetReport(samples, table, None, None, unknown, infinite, "too many rungs without zeros")
    vals = [v for _, v in known]
    ok = all(b >= 2 * a for a, b in zip(vals, vals[1:])) and vals[-1] >= 5
    finite_vals = [(r, v) for r, v in known if math.isfinite(v) and v > 0]
    trend = None
    if len(finite_vals) >= 2:
        lr = np.log([r for r, _ in finite_vals])
        lv = np.log([v for _, v in finite_vals])
        trend = float(np.polyfit(lr, lv, 1)[0])
    return ZeroSetReport(samples, table, trend, bool(ok), unknown, infinite)


def _unit_complex(rng, d, real=False):
    v = rng.standard_normal(d) + (0j if real else 1j * rng.standard_normal(d))
    return v / np.linalg.norm(v)


# ---------------------------------------------------------------- verdict


@dataclass
class HReport:
    symbol: str
    growth: GrowthReport
    zeroset: ZeroSetReport
    verdict: str
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["zeroset"]["samples"] = [[[c.real, c.imag] for c in z] for z in self.zeroset.samples]
        return out


def verdict(config: GroupConfig, P, seed: int = 0, radii=DEFAULT_RADII, ladder=DEFAULT_LADDER,
            samples_per_sphere: int = 720, budget: int = 64) -> HReport:
    """Hypoelliptic iff both H-property checks pass."""
    sym = symbol_of(config, P)
    growth = check_growth(sym, radii, samples_per_sphere, seed=seed)
    zeros = check_zero_growth(sym, ladder, budget, seed=seed)
    if growth.passed and zeros.passed:
        result = "Hypoelliptic"
    elif not growth.passed or zeros.passed is False:
        result = "NotHypoelliptic"
    else:
        result = "Inconclusive"
    notes = []
    if result == "Hypoelliptic":
        notes.append("H-property holds on the sampled ladders; a parametrix (V, psi) exists but is not constructed")
    if zeros.infinite_zero_set is False:
        notes.append("fewer than 2 zeros found per rung: the infinite-zero-set hypothesis is not confirmed")
    return HReport(sym.p.to_string("z"), growth, zeros, result, notes)


# ---------------------------------------------------------------- lower bound


@dataclass
class EnergyBoundReport:
    rows: list
    slope: float
    exponent: float
    passed: bool
    positive: bool


def _ball_line_rule(k, a, freq, n=24):
    """Rule on [-a, a] with |t|^(2k) folded in, panelled for oscillation and the flat rim."""
    panels = max(2, int(math.ceil(freq * a / 2.0)) + 2)
    edges = list(np.linspace(0.0, 0.5 * a, panels // 2 + 1))
    rim = a - 0.5 * a * 0.5 ** np.arange(0, 30)
    inner = np.linspace(0.5 * a, rim[1], panels // 2 + 1)[1:]
    edges = edges + list(inner) + list(rim[2:]) + [a]
    nodes, weights = [], []
    for i, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
        if i == 0:
            r = power_rule(2 * k, lo, hi, n)
            nodes.append(r.nodes)
            weights.append(r.weights)
        else:
            r = gauss_rule(n, (lo, hi))
            nodes.append(r.nodes)
            weights.append(r.weights * r.nodes ** (2 * k))
    pos_n, pos_w = np.concatenate(nodes), np.concatenate(weights)
    return QuadRule(np.concatenate([-pos_n[::-1], pos_n]), np.concatenate([pos_w[::-1], pos_w]), (-a, a), 2 * n - 1)


def kernel_energy(config: GroupConfig, bump, x, n: int = 24) -> float:
    """int |K(ix, t)|^2 phi(t) omega_k(t) dt over the support of phi."""
    x = np.asarray(x, dtype=float).reshape(config.dimension)
    a = bump.radius
    freq = float(np.max(np.abs(x))) if x.size else 0.0

    def once(order):
        rules = [_ball_line_rule(k, a, freq, order) for k in config.multiplicities]
        t, w = tensor_grid(rules)
        kv = kernel_values(config, t, 1j * x[None, :])
        return float(np.sum(np.abs(kv) ** 2 * bump(t) * w))

    v1, v2 = once(n), once(n + n // 2)
    if abs(v2 - v1) > 1e-9 * max(abs(v2), 1e-300):
        raise QuadratureError("kernel energy quadrature did not converge", achieved=abs(v2 - v1))
    return v2


def energy_bound_check(config: GroupConfig, bump, xs, slack: float = 0.1) -> EnergyBoundReport:
    """Fits the log-log slope of the kernel energy over the points ``xs`` and
    compares it with -(2 gamma + d) - slack. ``bump`` should satisfy phi(0) = 1."""
    xs = np.asarray(xs, dtype=float)
    if config.dimension == 1:
        xs = xs.reshape(-1, 1)
    norms = np.linalg.norm(xs, axis=-1)
    vals = np.array([kernel_energy(config, bump, x) for x in xs])
    exponent = 2 * config.gamma + config.dimension
    positive = bool(np.all(vals > 0))
    big = norms > 0
    slope = float(np.polyfit(np.log(norms[big]), np.log(vals[big]), 1)[0]) if big.sum() >= 2 else float("nan")
    C = float(np.min(vals[big] * norms[big] ** exponent)) if big.any() else float("nan")
    rows = [(float(r), float(v), C / r ** exponent if r > 0 else float("inf")) for r, v in zip(norms, vals)]
    return EnergyBoundReport(rows, slope, exponent, bool(positive and slope >= -exponent - slack), positive)
