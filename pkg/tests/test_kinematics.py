import math

import numpy as np
import pytest

from udw import kinematics as kin
from udw.errors import DomainError, RigidityError, UsageError
from udw.kinematics import Anchor, LabPoint, RindlerPoint, ScenarioConfig


def test_accel_trajectory_origin_and_unit_time():
    assert kin.accel_trajectory(1.0, 0.0) == (0.0, 0.0)
    t, x = kin.accel_trajectory(1.0, 1.0)
    assert t == pytest.approx(1.1752011936438014, rel=1e-14)
    assert x == pytest.approx(0.5430806348152437, rel=1e-14)


@pytest.mark.parametrize("a", [1e-3, 0.3, 1.0, 7.0])
def test_accel_trajectory_lies_on_hyperbola(a):
    tau = np.linspace(-3, 3, 41) / a
    t, x = kin.accel_trajectory(a, tau)
    assert np.allclose((x + 1 / a) ** 2 - t ** 2, 1 / a ** 2, rtol=1e-12, atol=0)


def test_accel_trajectory_rejects_nonpositive_a():
    with pytest.raises(DomainError):
        kin.accel_trajectory(0.0, 1.0)


def test_traversal_time_detector():
    assert kin.traversal_time_detector(1, 1) == pytest.approx(1.3169578969248166, rel=1e-14)
    assert kin.traversal_time_detector(1, 1, Anchor.MIDPOINT) == pytest.approx(
        0.9624236501192069, rel=1e-14)
    a = 1e-4
    assert kin.traversal_time_detector(a, 1) / math.sqrt(2 / a) == pytest.approx(1, rel=1e-2)


def test_conformal_cavity_length():
    assert kin.conformal_cavity_length(1, 1) == pytest.approx(math.log(2), rel=1e-14)
    assert kin.conformal_cavity_length(1e-6, 1) == pytest.approx(1, rel=1e-6)
    a, L = 0.37, 2.3
    Lp = kin.conformal_cavity_length(a, L)
    assert math.expm1(a * Lp) / a == pytest.approx(L, rel=1e-12)


def test_conformal_cavity_length_midpoint():
    a, L = 0.8, 1.0
    walls = kin.conformal_walls(a, L, Anchor.MIDPOINT)
    assert walls[1] - walls[0] == pytest.approx(kin.conformal_cavity_length(a, L, Anchor.MIDPOINT))
    assert kin.conformal_cavity_length(a, L, Anchor.MIDPOINT) == pytest.approx(
        math.log((2 + a * L) / (2 - a * L)) / a, rel=1e-13)


def test_traversal_time_cavity():
    assert kin.traversal_time_cavity(1, 1) == pytest.approx(math.sqrt(3), rel=1e-14)
    assert kin.traversal_time_cavity(1, 1, Anchor.MIDPOINT) == pytest.approx(math.sqrt(0.75), rel=1e-14)
    assert kin.traversal_time_cavity(1, 1e-12) == pytest.approx(0, abs=1e-5)


def test_rigidity_bound():
    with pytest.raises(RigidityError, match="rigidity"):
        kin.traversal_time_cavity(3, 1, Anchor.MIDPOINT)
    with pytest.raises(RigidityError):
        ScenarioConfig("accelerating_cavity", 2.0, 1.0, anchor="midpoint")
    # the full-traversal cavity has its rear wall on the a-hyperbola: no bound
    assert kin.traversal_time_cavity(30, 1) > 0


def test_config_validation():
    with pytest.raises(DomainError):
        ScenarioConfig("accelerating_detector", 0.0, 1.0)
    with pytest.raises(DomainError):
        ScenarioConfig("accelerating_detector", -1.0, 1.0)
    with pytest.raises(DomainError):
        ScenarioConfig("accelerating_detector", 1.0, 0.0)
    with pytest.raises(DomainError):
        ScenarioConfig("accelerating_detector", 1.0, 1.0, m=float("nan"))
    cfg = ScenarioConfig("accelerating_detector", 0.0, 1.0, anchor="midpoint")
    assert cfg.static
    assert cfg.replace(a=0.5).a == 0.5


def test_lab_rindler_examples():
    assert tuple(map(float, kin.lab_to_rindler(LabPoint(0.0, 1.0)))) == (0.0, 1.0)
    t, x = kin.rindler_to_lab(RindlerPoint(1.0, 2.0))
    assert t == pytest.approx(2.3504023872876028, rel=1e-14)
    assert x == pytest.approx(3.0861612696304874, rel=1e-14)


def test_lab_rindler_roundtrip():
    rng = np.random.default_rng(4)
    x = rng.uniform(0.1, 5, 200)
    t = x * rng.uniform(-0.95, 0.95, 200)
    back = kin.rindler_to_lab(kin.lab_to_rindler(LabPoint(t, x)))
    assert np.allclose(back.t, t, rtol=1e-12, atol=1e-13)
    assert np.allclose(back.x, x, rtol=1e-12)


def test_outside_wedge_rejected():
    with pytest.raises(DomainError):
        kin.lab_to_rindler(LabPoint(2.0, 1.0))
    with pytest.raises(DomainError):
        kin.lab_to_conformal(1.0, LabPoint(-1.0, 1.0))


def test_conformal_chart():
    assert tuple(map(float, kin.lab_to_conformal(1.0, LabPoint(0.0, 1.0)))) == (0.0, 0.0)
    assert float(kin.lab_to_conformal(1.0, LabPoint(0.0, 2.0)).zeta) == pytest.approx(math.log(2))
    rng = np.random.default_rng(5)
    a = 0.7
    x = rng.uniform(0.1, 5, 100)
    t = x * rng.uniform(-0.9, 0.9, 100)
    c = kin.lab_to_conformal(a, LabPoint(t, x))
    r = kin.lab_to_rindler(LabPoint(t, x))
    assert np.allclose(r.xi, np.exp(a * c.zeta) / a, rtol=1e-12)
    back = kin.conformal_to_lab(a, c)
    assert np.allclose(back.x, x, rtol=1e-12)


def test_static_detector_path_full_traversal():
    cfg = ScenarioConfig("accelerating_cavity", 1.0, 1.0)
    path = kin.static_detector_path(cfg)
    assert float(path.position(0.0)) == pytest.approx(2.0)
    assert float(path.time(0.0)) == 0.0
    assert float(path.position(path.tau_max)) == pytest.approx(1.0, rel=1e-12)
    tau = np.linspace(0, path.tau_max, 200)[1:-1]
    assert np.all(np.diff(path.position(tau)) < 0)


def test_static_detector_path_rates_match_finite_differences():
    cfg = ScenarioConfig("accelerating_cavity", 0.6, 1.0)
    for chart in ("rindler", "conformal"):
        path = kin.static_detector_path(cfg, chart)
        tau = np.linspace(0.1, path.tau_max - 0.1, 7)
        h = 1e-6
        assert np.allclose((path.time(tau + h) - path.time(tau - h)) / (2 * h),
                           path.time_rate(tau), rtol=1e-7)
        assert np.allclose((path.position(tau + h) - path.position(tau - h)) / (2 * h),
                           path.position_rate(tau), rtol=1e-6, atol=1e-9)


def test_static_detector_sits_at_centre_for_midpoint():
    a, L = 0.5, 1.0
    cfg = ScenarioConfig("accelerating_cavity", a, L, anchor="midpoint")
    path = kin.static_detector_path(cfg)
    xi1, xi2 = kin.rindler_walls(a, L, Anchor.MIDPOINT)
    assert float(path.position(0.0)) == pytest.approx(0.5 * (xi1 + xi2))
    # it reaches the rear wall exactly at the stated traversal time
    assert float(path.position(path.tau_max)) == pytest.approx(xi1, rel=1e-12)


def test_detector_trajectory_wrong_kind():
    with pytest.raises(UsageError):
        kin.detector_trajectory(ScenarioConfig("accelerating_cavity", 1.0, 1.0))
    with pytest.raises(UsageError):
        kin.static_detector_path(ScenarioConfig("accelerating_detector", 1.0, 1.0))


def test_detector_trajectory_reaches_far_wall():
    cfg = ScenarioConfig("accelerating_detector", 0.4, 1.3)
    traj = kin.detector_trajectory(cfg)
    assert float(traj.position(traj.tau_max)) == pytest.approx(1.3, rel=1e-12)
    mid = kin.detector_trajectory(cfg.replace(anchor="midpoint"))
    assert float(mid.position(mid.tau_max)) == pytest.approx(0.65, rel=1e-12)


def test_proper_accel_profile():
    assert kin.proper_accel_profile(2, 0.0, 0.0) == 2
    assert kin.proper_accel_profile(1, 1.0, 0.0) == pytest.approx(0.5)
    assert kin.proper_accel_profile(1e6, 0.5, 0.0) == pytest.approx(2, abs=1e-5)
    with pytest.raises(DomainError):
        kin.proper_accel_profile(1, -1.0, 0.0)
