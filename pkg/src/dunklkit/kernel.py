"""Dunkl kernel K(x, z) for Z2 and Z2^d, by a Bessel route and an integral route."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .foundation import (
    GroupConfig,
    QuadratureError,
    jacobi_type_prefactor,
    jacobi_type_rule,
    normalized_bessel,
)

INTEGRAL_Z_LIMIT = 50.0


@dataclass(frozen=True)
class KernelValue:
    value: complex | np.ndarray
    route: str
    est_error: float | np.ndarray


def kernel_1d_values(k: float, x, z, with_error: bool = False):
    """Vectorized K_k(x, z) = j_{k-1/2}(ixz) + xz/(2k+1) j_{k+1/2}(ixz)."""
    x = np.asarray(x)
    z = np.asarray(z)
    u = np.asarray(x * z, dtype=np.complex128)
    j0, e0 = normalized_bessel(k - 0.5, 1j * u, with_error=True)
    j1, e1 = normalized_bessel(k + 0.5, 1j * u, with_error=True)
    val = j0 + u / (2 * k + 1) * j1
    if with_error:
        return val, e0 + np.abs(u) / (2 * k + 1) * e1
    return val


def kernel_1d(k: float, x, z) -> KernelValue:
    if not k > 0:
        raise ValueError("rank-one kernel needs k > 0")
    val, err = kernel_1d_values(k, x, z, with_error=True)
    return KernelValue(val[()] if np.ndim(val) == 0 else val, "Series", err[()] if np.ndim(err) == 0 else err)


def _integral_once(k, x, z, n):
    rule = jacobi_type_rule(k, n)
    xz = np.asarray(x * z, dtype=np.complex128)[..., None]
    return jacobi_type_prefactor(k) * np.sum(rule.weights * np.exp(rule.nodes * xz), axis=-1)


def kernel_1d_integral(k: float, x, z, tol: float = 1e-11, n0: int = 24, n_max: int = 768) -> KernelValue:
    """Laplace-type integral K(x,z) = c_k int e^{txz} (1-t^2)^{k-1} (1+t) dt.

    Doubles the Gauss-Jacobi order until successive values agree to ``tol``
    (relative); ``est_error`` is the last difference.
    """
    if not k > 0:
        raise ValueError("rank-one kernel needs k > 0")
    if np.max(np.abs(z)) > INTEGRAL_Z_LIMIT:
        raise ValueError(f"integral route accepts |z| <= {INTEGRAL_Z_LIMIT}")
    n = n0
    prev = _integral_once(k, x, z, n)
    while True:
        n *= 2
        cur = _integral_once(k, x, z, n)
        delta = np.abs(cur - prev)
        scale = np.maximum(1.0, np.abs(cur))
        if np.all(delta <= tol * scale):
            break
        if n >= n_max:
            raise QuadratureError("kernel integral did not converge; reduce |xz|", achieved=float(np.max(delta / scale)))
        prev = cur
    if np.ndim(cur) == 0:
        return KernelValue(cur[()], "IntegralRep", float(delta))
    return KernelValue(cur, "IntegralRep", delta)


def _split_points(config: GroupConfig, x, z):
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=np.complex128)
    d = config.dimension
    if d == 1:
        if x.ndim == 0 or x.shape[-1] != 1:
            x = x[..., None]
        if z.ndim == 0 or z.shape[-1] != 1:
            z = z[..., None]
    if x.shape[-1] != d or z.shape[-1] != d:
        raise ValueError(f"points must have trailing dimension {d}")
    return x, z


def kernel_values(config: GroupConfig, x, z, with_error: bool = False):
    """Product kernel prod_j K_{k_j}(x_j, z_j), broadcasting x (..., d) with z (..., d)."""
    x, z = _split_points(config, x, z)
    val = None
    err = None
    for j, k in enumerate(config.multiplicities):
        vj, ej = kernel_1d_values(k, x[..., j], z[..., j], with_error=True)
        if val is None:
            val, err = vj, ej
        else:
            err = np.abs(val) * ej + np.abs(vj) * err + err * ej
            val = val * vj
    return (val, err) if with_error else val


def kernel_product(config: GroupConfig, x, z) -> KernelValue:
    val, err = kernel_values(config, x, z, with_error=True)
    if np.ndim(val) == 0:
        return KernelValue(val[()], "Product", float(err))
    return KernelValue(val, "Product", err)


def kernel_matrix_1d(k: float, x, y, sign: int = -1) -> np.ndarray:
    """Matrix K_k(x_i, sign * i * y_m) for transform contractions."""
    x = np.asarray(x, dtype=float)[:, None]
    y = np.asarray(y, dtype=float)[None, :]
    return kernel_1d_values(k, x, sign * 1j * y)


def dunkl_operator_fd(config: GroupConfig, fn, x, j: int, h: float = 1e-4, richardson: bool = False):
    """T_j fn at x: central difference for the derivative, exact reflection term.

    ``fn`` maps points (..., d) to values. Near x_j = 0 the reflection
    quotient uses its limit 2 * d_j(odd part), by a second difference.
    """
    x = np.array(x, dtype=float).reshape(-1)
    e = np.zeros_like(x)
    e[j] = 1.0

    def deriv(step):
        return (fn(x + step * e) - fn(x - step * e)) / (2 * step)

    d1 = deriv(h)
    if richardson:
        d1 = (4 * deriv(h / 2) - d1) / 3
    k = config.multiplicities[j]
    if k == 0:
        return d1
    xs = x.copy()
    xs[j] = -xs[j]
    if abs(x[j]) < 1e-8:
        base = x.copy()
        base[j] = 0.0
        refl = (fn(base + h * e) - fn(base - h * e)) / h
    else:
        refl = (fn(x) - fn(xs)) / x[j]
    return d1 + k * refl


def kernel_eigen_check(config: GroupConfig, z, x, h: float = 1e-4, richardson: bool = False) -> np.ndarray:
    """|T_j K(., z)(x) - z_j K(x, z)| for each coordinate j."""
    if not 1e-6 <= h <= 1e-2:
        raise ValueError("step h must lie in [1e-6, 1e-2]")
    x = np.array(x, dtype=float).reshape(-1)
    z = np.array(z, dtype=np.complex128).reshape(-1)

    def fn(pt):
        return kernel_values(config, pt, z)

    base = fn(x)
    out = np.empty(config.dimension)
    for j in range(config.dimension):
        tj = dunkl_operator_fd(config, fn, x, j, h=h, richardson=richardson)
        out[j] = abs(tj - z[j] * base)
    return out
