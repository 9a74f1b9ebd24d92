"""The intertwining operator V_k and its dual, on polynomials and on functions."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np

from .foundation import (
    GroupConfig,
    QuadratureError,
    gauss_rule,
    graded_panels,
    intertwiner_rule,
    jacobi_type_prefactor,
    power_rule,
    tensor_grid,
)
from .functions import as_points
from .polyalg import MAX_DEGREE, DegreeCapError, MultiPoly, RationalK, _as_rational_k, dunkl_apply


def moment(k, n: int):
    """Normalized moment m_n(k) of the intertwiner measure on [-1, 1].

    m_{2j} = prod_{i<j} (2i+1)/(2k+2i+1) and m_{2j-1} = m_{2j}: the odd
    moment picks up only the (1+t) factor's t term. Exact for Fraction k.
    """
    if n < 0:
        raise ValueError("moment order must be nonnegative")
    j = (n + 1) // 2
    one = Fraction(1) if isinstance(k, Fraction) else 1.0
    out = one
    for i in range(j):
        out = out * (2 * i + 1) / (2 * k + 2 * i + 1)
    return out


@dataclass(frozen=True)
class MomentTable:
    multiplicities: tuple
    cap: int
    table: tuple

    @classmethod
    def build(cls, kq, cap: int = MAX_DEGREE) -> "MomentTable":
        ks = _as_rational_k(kq).values if not isinstance(kq, GroupConfig) else kq.multiplicities
        table = tuple(tuple(moment(k, n) for n in range(cap + 1)) for k in ks)
        return cls(tuple(ks), cap, table)

    def __call__(self, j: int, n: int):
        if n > self.cap:
            raise DegreeCapError(f"degree {n} above moment cap {self.cap}")
        return self.table[j][n]


@lru_cache(maxsize=64)
def _cached_table(ks: tuple, cap: int) -> MomentTable:
    return MomentTable.build(RationalK(ks), cap)


def vk_poly(kq, p: MultiPoly, cap: int = MAX_DEGREE) -> MultiPoly:
    """V_k p, acting diagonally on monomials: x^a -> prod_j m_{a_j}(k_j) x^a."""
    kq = _as_rational_k(kq)
    if p.degree > cap:
        raise DegreeCapError(f"degree {p.degree} above cap {cap}")
    table = _cached_table(kq.values, max(p.degree, 0))

    def scale(e, c):
        for j, a in enumerate(e):
            c = c * table(j, a)
        return c

    return p.map_coefficients(scale)


def vk_inverse_poly(kq, p: MultiPoly) -> MultiPoly:
    kq = _as_rational_k(kq)
    table = _cached_table(kq.values, max(p.degree, 0))

    def scale(e, c):
        for j, a in enumerate(e):
            m = table(j, a)
            if m == 0:
                raise ZeroDivisionError("vanishing moment; V_k not invertible here")
            c = c / m
        return c

    return p.map_coefficients(scale)


def _monomials(d: int, n: int):
    out = []
    for combo in combinations_with_replacement(range(d), n):
        e = [0] * d
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


def _solve_exact(rows, rhs, n_unknowns):
    """Gauss-Jordan over Q for a consistent, possibly overdetermined system."""
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    row = 0
    for col in range(n_unknowns):
        piv = next((r for r in range(row, len(m)) if m[r][col] != 0), None)
        if piv is None:
            continue
        m[row], m[piv] = m[piv], m[row]
        inv = 1 / m[row][col]
        m[row] = [v * inv for v in m[row]]
        for r in range(len(m)):
            if r != row and m[r][col] != 0:
                f = m[r][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[row])]
        pivots.append(col)
        row += 1
    for r in range(row, len(m)):
        if m[r][-1] != 0:
            raise ArithmeticError("transmutation system is inconsistent")
    if len(pivots) != n_unknowns:
        raise ArithmeticError("transmutation system is underdetermined")
    sol = [Fraction(0)] * n_unknowns
    for r, col in enumerate(pivots):
        sol[col] = m[r][-1]
    return sol


def vk_transmutation_solver(kq, p: MultiPoly) -> MultiPoly:
    """V_k p from T_j V_k = V_k d_j and V_k 1 = 1, solved degree by degree.

    For each homogeneous degree n >= 1 the unknown q = V_k(x^a) in P_n must
    satisfy T_j q = V_k(d_j x^a) for every j; the system is solved exactly
    with no assumption on the shape of q.
    """
    kq = _as_rational_k(kq)
    d = p.dimension
    if kq.dimension != d:
        raise ValueError("dimension mismatch")
    cache: dict = {(0,) * d: MultiPoly.constant(1, d)}

    def image(a):
        if a in cache:
            return cache[a]
        mono = MultiPoly.monomial(a)
        n = sum(a)
        basis = _monomials(d, n)
        index = {e: i for i, e in enumerate(basis)}
        lower = _monomials(d, n - 1)
        lower_index = {e: i for i, e in enumerate(lower)}
        rows, rhs = [], []
        for j in range(d):
            target = MultiPoly({}, d)
            for e, c in mono.diff(j).terms.items():
                target = target + image(e) * c
            # T_j applied to each basis monomial, written in the lower basis
            block = [[Fraction(0)] * len(basis) for _ in lower]
            for e in basis:
                for e2, c2 in dunkl_apply(kq, j, MultiPoly.monomial(e)).terms.items():
                    block[lower_index[e2]][index[e]] += c2
            for r, e2 in enumerate(lower):
                rows.append(block[r])
                rhs.append(target.terms.get(e2, Fraction(0)))
        sol = _solve_exact(rows, rhs, len(basis))
        q = MultiPoly({e: c for e, c in zip(basis, sol)}, d)
        cache[a] = q
        return q

    out = MultiPoly({}, d)
    for e, c in p.terms.items():
        out = out + image(e) * c
    return out


def vk_function(config: GroupConfig, f, x, n: int = 32, tol: float = 1e-9, n_max: int = 512, with_error: bool = False):
    """V_k f(x) = int f(t_1 x_1, ..., t_d x_d) prod_j Phi_{k_j}(t_j) dt.

    ``x`` is a point or an array of points (..., d). The tensor rule order
    grows by 3/2 until two successive orders agree to ``tol`` (relative);
    QuadratureError past ``n_max``.
    """
    pts = as_points(np.asarray(x, dtype=float), config.dimension)

    def once(order):
        rules = [intertwiner_rule(k, order) for k in config.multiplicities]
        t, w = tensor_grid(rules)
        vals = f(pts[..., None, :] * t)
        return np.sum(vals * w, axis=-1)

    prev = once(n)
    while True:
        n = n + n // 2
        cur = once(n)
        gap = np.abs(cur - prev)
        scale = np.maximum(1.0, np.abs(cur))
        if np.all(gap <= tol * scale):
            break
        if n >= n_max:
            raise QuadratureError("V_k quadrature did not converge", achieved=float(np.max(gap / scale)))
        prev = cur
    if np.ndim(cur) == 0:
        cur, gap = cur[()], gap[()]
    return (cur, gap) if with_error else cur


def _tvk_one(k, fpair, y, L, n):
    c = jacobi_type_prefactor(k)
    a = abs(y)
    if a >= L:
        return 0.0

    def integrand_part(s):
        fe, fo = fpair(s)
        return s * fe + y * fo

    if a == 0.0:
        head = min(1.0, L)
        rule = power_rule(2 * k - 1, 0.0, head, n)
        total = np.sum(rule.weights * fpair(rule.nodes)[0])
        if head < L:
            for lo, hi in graded_panels(head, L, ratio=2.0, max_len=1.0):
                g = gauss_rule(n, (lo, hi))
                total += np.sum(g.weights * g.nodes ** (2 * k - 1) * fpair(g.nodes)[0])
        return c * total
    # (s - a)^(k-1) is the only singular factor; it goes into the rule weight
    first_end = min(a + min(a, 1.0), L)
    rule = power_rule(k - 1.0, a, first_end, n)
    s = rule.nodes
    total = np.sum(rule.weights * (s + a) ** (k - 1.0) * integrand_part(s))
    if first_end < L:
        for lo, hi in graded_panels(first_end - a, L - a, ratio=2.0, max_len=1.0):
            g = gauss_rule(n, (lo + a, hi + a))
            s = g.nodes
            total += np.sum(g.weights * (s * s - a * a) ** (k - 1.0) * integrand_part(s))
    return c * total


def tvk_function_1d(k: float, f, y, n: int = 24, half_width: float | None = None):
    """Dual intertwiner in d = 1.

    tV_k f(y) = c_k int_{s > |y|} (s^2 - y^2)^(k-1) [s (f(s) + f(-s)) + y (f(s) - f(-s))] ds,
    which is f integrated against the density of V_k's dual measure times omega_k.
    """
    if not k > 0:
        raise ValueError("dual intertwiner needs k > 0")
    L = half_width if half_width is not None else getattr(f, "box_halfwidth", None)
    if L is None:
        raise ValueError("a box half-width is required for plain callables")

    def fpair(s):
        s = np.asarray(s, dtype=float)
        fp, fm = f(s[:, None]), f(-s[:, None])
        return fp + fm, fp - fm

    ys = np.atleast_1d(np.asarray(y, dtype=float))
    out = np.array([_tvk_one(k, fpair, yy, L, n) for yy in ys.ravel()]).reshape(ys.shape)
    return out[0] if np.ndim(y) == 0 else out
