import os
import subprocess
import sys

import mpmath as mp
import numpy as np
import pytest

from wall_limits import _kernels_py, kernels

BACKENDS = [pytest.param(_kernels_py, id="python")]
try:
    from wall_limits import _kernels
except ImportError:  # pragma: no cover
    _kernels = None
else:
    BACKENDS.append(pytest.param(_kernels, id="compiled"))


@pytest.mark.parametrize("mod", BACKENDS)
def test_kummer_series_against_mpmath(mod):
    mu, nu = 0.5 + 0.3j, 1.0 + 0.6j
    z = np.array([0.0, 0.2, 1.5 - 0.5j, 6.0])
    vals, nterms = mod.kummer_series(mu, nu, z, 1e-15, 10000)
    ref = [complex(mp.hyp1f1(mu, nu, zz)) for zz in z]
    np.testing.assert_allclose(vals, ref, rtol=1e-13)
    assert np.all(nterms > 0)


@pytest.mark.parametrize("mod", BACKENDS)
def test_kummer_series_reports_max_terms(mod):
    _, nterms = mod.kummer_series(0.5, 1.5, np.array([40.0]), 1e-15, 3)
    assert nterms[0] == -1


@pytest.mark.parametrize("mod", BACKENDS)
def test_numerov_free_sine(mod):
    h = 1e-3
    x = np.arange(0, 10, h)
    f = -np.ones_like(x)  # psi'' = -psi
    psi, renorm = mod.numerov_march(f, h, 0.0, np.sin(h))
    assert renorm == 0
    assert np.max(np.abs(psi - np.sin(x))) < 1e-9


@pytest.mark.parametrize("mod", BACKENDS)
def test_numerov_renormalizes_growth(mod):
    h = 1e-2
    x = np.arange(0, 400, h)
    psi, renorm = mod.numerov_march(np.ones_like(x), h, 1.0, np.exp(h), big=1e100)
    assert renorm >= 1
    assert np.all(np.isfinite(psi))
    # ratio of neighbours is unaffected by rescaling
    np.testing.assert_allclose(psi[-1] / psi[-2], np.exp(h), rtol=1e-8)


@pytest.mark.skipif(_kernels is None, reason="compiled extension not built")
def test_backends_agree():
    rng = np.random.default_rng(4)
    z = rng.uniform(0, 4, 50) + 1j * rng.uniform(-1, 1, 50)
    a, _ = _kernels.kummer_series(0.3 - 0.2j, 1.4 + 0.7j, z, 1e-14, 10000)
    b, _ = _kernels_py.kummer_series(0.3 - 0.2j, 1.4 + 0.7j, z, 1e-14, 10000)
    np.testing.assert_allclose(a, b, rtol=1e-13)
    f = -4.0 + np.sin(np.linspace(0, 3, 3000))
    pa, _ = _kernels.numerov_march(f, 1e-3, 0.0, 1e-3)
    pb, _ = _kernels_py.numerov_march(f, 1e-3, 0.0, 1e-3)
    np.testing.assert_allclose(pa, pb, rtol=1e-12, atol=1e-15)


def test_environment_forces_fallback():
    env = dict(os.environ, WALL_LIMITS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import wall_limits as w; print(w.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_default_backend_is_reported():
    assert kernels.BACKEND in ("compiled", "python")
    if _kernels is not None and os.environ.get("WALL_LIMITS_PURE_PYTHON") != "1":
        assert kernels.BACKEND == "compiled"
