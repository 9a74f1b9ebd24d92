"""Exact multivariate polynomials over Q and the Z2^d Dunkl operators on them."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

MAX_DEGREE = 64


class DegreeCapError(ValueError):
    pass


def _frac(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, str):
        return Fraction(c.strip())
    return Fraction(c)


class MultiPoly:
    """Polynomial in d variables, stored as {exponent tuple: Fraction}.

    Instances are immutable by convention; all operations return new objects.
    """

    __slots__ = ("terms", "dimension")

    def __init__(self, terms: Mapping | None = None, dimension: int = 1):
        self.dimension = int(dimension)
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.dimension or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent {exp} for dimension {self.dimension}")
            c = _frac(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean
        if self.degree > MAX_DEGREE:
            raise DegreeCapError(f"total degree {self.degree} exceeds cap {MAX_DEGREE}")

    @classmethod
    def constant(cls, c, dimension: int) -> "MultiPoly":
        return cls({(0,) * dimension: c}, dimension)

    @classmethod
    def monomial(cls, exp, c=1) -> "MultiPoly":
        return cls({tuple(exp): c}, len(exp))

    @classmethod
    def variable(cls, j: int, dimension: int) -> "MultiPoly":
        exp = [0] * dimension
        exp[j] = 1
        return cls({tuple(exp): 1}, dimension)

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def homogeneous_part(self, n: int) -> "MultiPoly":
        return MultiPoly({e: c for e, c in self.terms.items() if sum(e) == n}, self.dimension)

    def _check(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(other, self.dimension)
        if other.dimension != self.dimension:
            raise ValueError("dimension mismatch")
        return other

    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return MultiPoly(out, self.dimension)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly({e: -c for e, c in self.terms.items()}, self.dimension)

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = _frac(other)
            return MultiPoly({e: c * v for e, v in self.terms.items()}, self.dimension)
        other = self._check(other)
        if self.degree + other.degree > MAX_DEGREE:
            raise DegreeCapError("product exceeds degree cap")
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return MultiPoly(out, self.dimension)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = MultiPoly.constant(1, self.dimension)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            if isinstance(other, (int, Fraction)):
                other = MultiPoly.constant(other, self.dimension)
            else:
                return NotImplemented
        return self.dimension == other.dimension and self.terms == other.terms

    def __hash__(self):
        return hash((self.dimension, frozenset(self.terms.items())))

    def reflect(self, j: int) -> "MultiPoly":
        """p o sigma_j, sigma_j flipping the sign of coordinate j."""
        return MultiPoly(
            {e: (-c if e[j] % 2 else c) for e, c in self.terms.items()}, self.dimension
        )

    def diff(self, j: int) -> "MultiPoly":
        out = {}
        for e, c in self.terms.items():
            if e[j]:
                ne = list(e)
                ne[j] -= 1
                out[tuple(ne)] = c * e[j]
        return MultiPoly(out, self.dimension)

    def map_coefficients(self, fn) -> "MultiPoly":
        return MultiPoly({e: fn(e, c) for e, c in self.terms.items()}, self.dimension)

    def to_string(self, var: str = "x") -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), tuple(-v for v in e))):
            c = self.terms[e]
            mono = " ".join(
                f"{var}{i + 1}" + (f"^{p}" if p > 1 else "") for i, p in enumerate(e) if p
            )
            parts.append(f"{c} * {mono}" if mono else f"{c}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"MultiPoly({self.to_string()!r}, d={self.dimension})"


@dataclass(frozen=True)
class RationalK:
    """Exact multiplicities, parallel to GroupConfig.multiplicities."""

    values: tuple

    def __post_init__(self):
        vals = tuple(_frac(v) for v in self.values)
        if any(v < 0 for v in vals):
            raise ValueError("multiplicities must be nonnegative")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_config(cls, config) -> "RationalK":
        # exact binary value of each float multiplicity
        return cls(tuple(Fraction(k) for k in config.multiplicities))

    @property
    def dimension(self) -> int:
        return len(self.values)

    def as_floats(self) -> np.ndarray:
        return np.array([float(v) for v in self.values])


def _as_rational_k(kq) -> RationalK:
    if isinstance(kq, RationalK):
        return kq
    if hasattr(kq, "multiplicities"):
        return RationalK.from_config(kq)
    return RationalK(tuple(kq))


def dunkl_apply(kq, j: int, p: MultiPoly) -> MultiPoly:
    """T_j p = d_j p + k_j (p - p o sigma_j) / x_j, exactly (0-based ``j``).

    On a monomial x^a this is (a_j + 2 k_j [a_j odd]) x^(a - e_j).
    """
    kq = _as_rational_k(kq)
    if not 0 <= j < p.dimension or kq.dimension != p.dimension:
        raise ValueError("coordinate index or dimension mismatch")
    kj = kq.values[j]
    out = {}
    for e, c in p.terms.items():
        a = e[j]
        if a == 0:
            continue
        factor = a + (2 * kj if a % 2 else 0)
        ne = list(e)
        ne[j] -= 1
        out[tuple(ne)] = c * factor
    return MultiPoly(out, p.dimension)


def dunkl_compose(kq, mu, p: MultiPoly) -> MultiPoly:
    """T^mu = T_1^mu_1 o ... o T_d^mu_d (rightmost factor applied first)."""
    if len(mu) != p.dimension or any(m < 0 for m in mu):
        raise ValueError("invalid multi-index")
    out = p
    for j in reversed(range(p.dimension)):
        for _ in range(mu[j]):
            out = dunkl_apply(kq, j, out)
    return out


def dunkl_laplacian(kq, p: MultiPoly) -> MultiPoly:
    out = MultiPoly({}, p.dimension)
    for j in range(p.dimension):
        out = out + dunkl_apply(kq, j, dunkl_apply(kq, j, p))
    return out


def eval_poly(p: MultiPoly, x):
    """Evaluate at points of shape (..., d) via nested Horner in the last variable."""
    x = np.asarray(x)
    if p.dimension == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        x = x[..., None]
    if x.shape[-1] != p.dimension:
        raise ValueError("point dimension mismatch")
    dtype = np.complex128 if np.iscomplexobj(x) else np.float64
    return _horner(p.terms, x.astype(dtype), p.dimension, 0)


def _horner(terms: dict, x, d: int, axis: int):
    if axis == d:
        return sum((float(c) for c in terms.values()), 0.0) * np.ones(x.shape[:-1])
    groups: dict = {}
    for e, c in terms.items():
        groups.setdefault(e[axis], {})[e] = c
    if not groups:
        return np.zeros(x.shape[:-1], dtype=x.dtype)
    xa = x[..., axis]
    acc = np.zeros(x.shape[:-1], dtype=x.dtype)
    for power in range(max(groups), -1, -1):
        acc = acc * xa
        if power in groups:
            acc = acc + _horner(groups[power], x, d, axis + 1)
    return acc


_TERM_RE = re.compile(r"^([A-Za-z]+)(\d+)(?:\^(\d+))?$")


def parse_poly(text: str, dimension: int, var: str = "x") -> MultiPoly:
    """Parse literals like ``"3/2 * x1^2 x2 - x2 + 1"``.

    Terms are separated by + or -; a term is an optional rational coefficient
    followed by factors ``<var><index>[^power]`` separated by spaces or ``*``.
    """
    src = text.replace("**", "^").strip()
    if not src:
        raise ValueError("empty polynomial literal")
    pieces = re.split(r"(?<![\^/eE])\s*([+-])\s*", src)
    if pieces[0] == "":
        pieces = pieces[1:]
    else:
        pieces = ["+"] + pieces
    out = MultiPoly({}, dimension)
    for sign, body in zip(pieces[0::2], pieces[1::2]):
        coef = Fraction(1)
        exp = [0] * dimension
        tokens = [t for t in re.split(r"[\s*]+", body.strip()) if t]
        if not tokens:
            raise ValueError(f"empty term in {text!r}")
        for tok in tokens:
            m = _TERM_RE.match(tok)
            if m:
                name, idx, power = m.groups()
                if name.lower() != var.lower():
                    raise ValueError(f"unknown variable {name}{idx} (expected {var}1..{var}{dimension})")
                i = int(idx) - 1
                if not 0 <= i < dimension:
                    raise ValueError(f"variable {tok} out of range for dimension {dimension}")
                exp[i] += int(power) if power else 1
            else:
                try:
                    coef *= Fraction(tok)
                except ValueError:
                    raise ValueError(f"cannot parse token {tok!r}") from None
        if sign == "-":
            coef = -coef
        out = out + MultiPoly({tuple(exp): coef}, dimension)
    return out
