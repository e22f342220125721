import os
import subprocess
import sys

import numpy as np
import pytest

from airy2cov import _kernels_py as pure

try:
    from airy2cov import _kernels as compiled
except ImportError:  # pragma: no cover - extension not built
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled extension not built")


@needs_compiled
def test_airy_arrays_agree():
    xs = np.concatenate([np.linspace(-60, 30, 4001), [0.0, 4.5, -4.5, 8.0, -8.0]])
    a1, b1 = compiled.airy_array(xs)
    a2, b2 = pure.airy_array(xs)
    neg = xs <= 0
    # absolute on the oscillatory side (relative error is meaningless at zeros)
    np.testing.assert_allclose(a1[neg], a2[neg], rtol=0, atol=5e-14)
    np.testing.assert_allclose(b1[neg], b2[neg], rtol=0, atol=5e-14 * 60**0.5)
    np.testing.assert_allclose(a1[~neg], a2[~neg], rtol=1e-13)
    np.testing.assert_allclose(b1[~neg], b2[~neg], rtol=1e-13)


@needs_compiled
def test_airy_scalar_agrees():
    for x in (-33.0, -4.0, 0.0, 1.0, 6.0, 19.0):
        c = compiled.airy_scalar(x)
        p = pure.airy_scalar(x)
        assert c == pytest.approx(p, rel=1e-13, abs=1e-16)


@needs_compiled
def test_barycentric_agrees():
    from airy2cov.numerics import _chebyshev_bary_weights, chebyshev_points

    x = chebyshev_points(64, -3, 5)
    w = _chebyshev_bary_weights(64)
    v = np.sin(x) * np.exp(-0.1 * x)
    t = np.concatenate([np.linspace(-3, 5, 999), x[:5]])
    np.testing.assert_allclose(compiled.barycentric_eval(x, w, v, t), pure.barycentric_eval(x, w, v, t), rtol=1e-14, atol=1e-15)


def test_pure_python_switch_in_fresh_interpreter():
    env = dict(os.environ, AIRY2COV_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import airy2cov; print(airy2cov.BACKEND, airy2cov.airy_ai(1.0))"],
        env=env, capture_output=True, text=True, check=True,
    ).stdout.split()
    assert out[0] == "python"
    assert abs(float(out[1]) - 0.1352924163128814) < 1e-15
