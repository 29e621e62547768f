import math

import numpy as np
import pytest
from scipy.integrate import quad

from udw.quadrature import QuadratureSpec, gauss_legendre_rule, integrate


def test_polynomial_exact():
    res = integrate(lambda x: x ** 5 - 3 * x, [0.0, 2.0])
    assert res.converged
    assert res.value[0] == pytest.approx(64 / 6 - 6, rel=1e-14)


def test_vector_components_share_panels():
    spec = QuadratureSpec(rel_tol=1e-12)
    f = lambda x: np.stack([np.cos(50 * x), np.exp(-x) * np.sin(3 * x)], axis=1)
    res = integrate(f, [0.0, 2.0], spec, max_width=spec.max_width(50))
    assert res.value[0] == pytest.approx(math.sin(100) / 50, rel=1e-12)
    ref = quad(lambda x: math.exp(-x) * math.sin(3 * x), 0, 2, epsabs=0, epsrel=1e-13)[0]
    assert res.value[1] == pytest.approx(ref, rel=1e-12)


def test_oscillatory_complex():
    w = 400.0
    spec = QuadratureSpec(rel_tol=1e-10)
    res = integrate(lambda t: np.exp(-1j * w * t) * t, [0.0, 3.0], spec, max_width=spec.max_width(w))
    exact = (np.exp(-1j * w * 3) * (1 + 1j * w * 3) - 1) / w ** 2
    assert abs(res.value[0] - exact) < 1e-10 * abs(exact)


def test_adaptive_refinement_handles_peak():
    f = lambda x: 1 / (1e-4 + x ** 2)
    res = integrate(f, [-1.0, 1.0], QuadratureSpec(rel_tol=1e-10))
    assert res.converged
    assert res.value[0] == pytest.approx(2 * math.atan(100) / 1e-2, rel=1e-10)


def test_per_interval_values_sum_to_total():
    edges = [0.0, 0.3, 0.31, 1.2, 2.0]
    res = integrate(lambda x: np.cos(x), edges, per_interval=True)
    assert res.interval_values.shape == (4, 1)
    expected = np.diff(np.sin(edges))
    assert np.allclose(res.interval_values[:, 0], expected, rtol=1e-12)


def test_empty_interval():
    res = integrate(lambda x: x, [1.0, 1.0])
    assert res.value[0] == 0
    assert res.converged


def test_budget_exhaustion_reported():
    spec = QuadratureSpec(rel_tol=1e-14, abs_tol=1e-300, max_subdivisions=3)
    res = integrate(lambda x: np.sqrt(np.abs(x - 0.3)), [0.0, 1.0], spec)
    assert not res.converged


def test_guard_width():
    spec = QuadratureSpec(panels_per_period=8)
    assert spec.max_width(2 * math.pi) == pytest.approx(1 / 8)
    assert spec.max_width(0) == math.inf
    with pytest.raises(ValueError):
        QuadratureSpec(rel_tol=0)


def test_gauss_legendre_rule():
    x, w = gauss_legendre_rule(0.0, 2.0, 0.25, 8)
    assert x.size == 64
    assert w.sum() == pytest.approx(2.0, rel=1e-14)
    assert np.dot(w, np.cos(x)) == pytest.approx(math.sin(2.0), rel=1e-13)
