import os
import subprocess
import sys

import numpy as np
import pytest

from dunklkit import _accel


def test_numpy_series_matches_scipy():
    from scipy import special
    import math

    u = np.linspace(0.1, 25, 50)
    val, _ = _accel.bessel_series_numpy(0.5, u)
    ref = math.gamma(1.5) * (2 / u) ** 0.5 * special.jv(0.5, u)
    assert np.allclose(val, ref, atol=1e-12)


@pytest.mark.skipif(not _accel.HAVE_NUMBA, reason="numba not installed")
def test_backends_agree():
    rng = np.random.default_rng(0)
    u = rng.uniform(-10, 10, 2000) + 1j * rng.uniform(-30, 30, 2000)
    for alpha in (-0.5, 0.2, 1.5):
        a, sa = _accel.bessel_series_numpy(alpha, u)
        b, sb = _accel.bessel_series(alpha, u)
        assert np.max(np.abs(a - b) / np.maximum(1.0, sa)) < 1e-13


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, DUNKLKIT_NUMBA="0")
    code = "from dunklkit import _accel; print(_accel.HAVE_NUMBA, _accel.bessel_series is _accel.bessel_series_numpy)"
    proc = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
    assert proc.stdout.split() == ["False", "True"]
