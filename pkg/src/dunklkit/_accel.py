"""Hot numeric loops, with a numba path and a pure-numpy path.

The numba path is used when numba imports cleanly and ``DUNKLKIT_NUMBA`` is
not set to ``0``. Both paths produce the same values to rounding; the
numpy path is the reference used by the benchmark.
"""
import os

import numpy as np

SERIES_MAX_TERMS = 500

try:
    if os.environ.get("DUNKLKIT_NUMBA", "1") == "0":
        raise ImportError("numba disabled by DUNKLKIT_NUMBA=0")
    import numba

    if "NUMBA_THREADING_LAYER" not in os.environ:
        # skip straight past TBB, which warns when the installed version is old
        numba.config.THREADING_LAYER_PRIORITY = ["omp", "tbb", "workqueue"]
    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False


def _apply_thread_cap():
    cap = os.environ.get("DUNKLKIT_THREADS")
    if not (HAVE_NUMBA and cap):
        return
    try:
        numba.set_num_threads(max(1, min(int(cap), numba.config.NUMBA_NUM_THREADS)))
    except ValueError:
        pass


def _bessel_series_numpy(alpha, u, max_terms=SERIES_MAX_TERMS):
    """Series of the normalized Bessel function, vectorized over ``u``.

    Returns ``(value, abs_sum)`` where ``abs_sum`` is the sum of term moduli,
    a scale for the rounding error caused by cancellation.
    """
    u = np.asarray(u, dtype=np.complex128)
    q = -(u * u) / 4.0
    term = np.ones_like(u)
    total = np.ones_like(u)
    comp = np.zeros_like(u)
    abs_sum = np.ones(u.shape)
    active = np.ones(u.shape, dtype=bool)
    half_mod = np.abs(u) / 2.0
    for n in range(1, max_terms + 1):
        term = term * q / (n * (n + alpha))
        # Kahan step on the still-active entries only
        y = np.where(active, term - comp, 0.0)
        t = total + y
        comp = np.where(active, (t - total) - y, comp)
        total = np.where(active, t, total)
        mag = np.abs(term)
        abs_sum = np.where(active, abs_sum + mag, abs_sum)
        done = (mag <= 1e-17 * np.abs(total)) & (n > half_mod)
        active &= ~done
        if not active.any():
            break
    return total, abs_sum


if HAVE_NUMBA:

    @numba.njit(cache=True)
    def _series_scalar(alpha, u, max_terms):
        q = -(u * u) / 4.0
        term = 1.0 + 0.0j
        total = 1.0 + 0.0j
        comp = 0.0 + 0.0j
        abs_sum = 1.0
        half_mod = abs(u) / 2.0
        for n in range(1, max_terms + 1):
            term = term * q / (n * (n + alpha))
            y = term - comp
            t = total + y
            comp = (t - total) - y
            total = t
            mag = abs(term)
            abs_sum += mag
            if mag <= 1e-17 * abs(total) and n > half_mod:
                break
        return total, abs_sum

    @numba.njit(parallel=True, cache=True)
    def _bessel_series_flat(alpha, u, max_terms):
        out = np.empty(u.size, dtype=np.complex128)
        scale = np.empty(u.size, dtype=np.float64)
        for i in numba.prange(u.size):
            out[i], scale[i] = _series_scalar(alpha, u[i], max_terms)
        return out, scale

    def _bessel_series_numba(alpha, u, max_terms=SERIES_MAX_TERMS):
        u = np.asarray(u, dtype=np.complex128)
        flat = np.ascontiguousarray(u.ravel())
        out, scale = _bessel_series_flat(float(alpha), flat, max_terms)
        return out.reshape(u.shape), scale.reshape(u.shape)

    bessel_series = _bessel_series_numba
    _apply_thread_cap()
else:
    bessel_series = _bessel_series_numpy

bessel_series_numpy = _bessel_series_numpy
