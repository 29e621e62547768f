"""Coordinate charts, worldlines and cavity geometry in (1+1)-dimensional flat spacetime.

Three charts are used throughout (units c = hbar = 1):

* lab frame ``(t, x)``;
* standard Rindler chart ``(eta, xi)`` with ``t = xi sinh(eta)``, ``x = xi cosh(eta)``;
* conformal (Lass / radar) Rindler chart ``(varsigma, zeta)`` with
  ``t = exp(a zeta)/a sinh(a varsigma)``, ``x = exp(a zeta)/a cosh(a varsigma)``.

Both Rindler charts cover only the right wedge ``x > |t|``; anything else is a
:class:`~udw.errors.DomainError`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError, RigidityError, UsageError


class LabPoint(NamedTuple):
    t: float
    x: float


class RindlerPoint(NamedTuple):
    eta: float
    xi: float


class ConformalRindlerPoint(NamedTuple):
    varsigma: float
    zeta: float


class ScenarioKind(str, enum.Enum):
    ACCELERATING_DETECTOR = "accelerating_detector"
    ACCELERATING_CAVITY = "accelerating_cavity"


class Anchor(str, enum.Enum):
    FULL_TRAVERSAL = "full"
    MIDPOINT = "midpoint"


@dataclass(frozen=True)
class ScenarioConfig:
    """Geometry of one experiment.

    ``a`` is the proper acceleration of the detector (accelerating detector), of
    the rear wall (accelerating cavity, full traversal) or of the cavity centre
    (accelerating cavity, midpoint).  ``L`` is the lab-frame cavity length at
    ``t = 0`` and ``m`` the field mass.
    """

    kind: ScenarioKind
    a: float
    L: float = 1.0
    m: float = 0.0
    anchor: Anchor = Anchor.FULL_TRAVERSAL

    def __post_init__(self):
        object.__setattr__(self, "kind", ScenarioKind(self.kind))
        object.__setattr__(self, "anchor", Anchor(self.anchor))
        for name in ("a", "L", "m"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value}")
        if self.a < 0:
            raise DomainError(f"acceleration must be >= 0, got a={self.a}")
        if self.L <= 0:
            raise DomainError(f"cavity length must be > 0, got L={self.L}")
        if self.m < 0:
            raise DomainError(f"field mass must be >= 0, got m={self.m}")
        if self.a == 0 and self.anchor is Anchor.FULL_TRAVERSAL:
            raise DomainError(
                "a = 0 needs the midpoint anchor: a detector resting on the wall "
                "sees a vanishing field"
            )
        if (
            self.kind is ScenarioKind.ACCELERATING_CAVITY
            and self.anchor is Anchor.MIDPOINT
            and self.a * self.L >= 2
        ):
            raise RigidityError(
                f"rigidity bound violated: a*L = {self.a * self.L:g} >= 2, the rear "
                "wall would cross the future Rindler horizon"
            )

    @property
    def static(self) -> bool:
        return self.a == 0

    def replace(self, **changes) -> "ScenarioConfig":
        fields = dict(kind=self.kind, a=self.a, L=self.L, m=self.m, anchor=self.anchor)
        fields.update(changes)
        return ScenarioConfig(**fields)


@dataclass(frozen=True)
class Trajectory:
    """Detector worldline, parameterized by proper time.

    ``time`` and ``position`` give the worldline in the chart named by ``chart``
    (the chart in which the cavity modes are separable).  The ``*_rate``
    callables are the proper-time derivatives of those coordinates; they feed
    the oscillation guard of the quadrature.
    """

    chart: str
    tau_max: float
    lab: Callable[[np.ndarray], LabPoint]
    time: Callable[[np.ndarray], np.ndarray]
    position: Callable[[np.ndarray], np.ndarray]
    time_rate: Callable[[np.ndarray], np.ndarray]
    position_rate: Callable[[np.ndarray], np.ndarray]

    def max_rates(self, tau0: float, tau1: float, samples: int = 257):
        """Upper estimates of ``|dT/dtau|`` and ``|dX/dtau|`` on ``[tau0, tau1]``."""
        tau = np.linspace(tau0, tau1, samples)
        return (
            1.05 * float(np.max(np.abs(self.time_rate(tau)))),
            1.05 * float(np.max(np.abs(self.position_rate(tau)))),
        )


def _require_positive_a(a):
    if not a > 0:
        raise DomainError(f"acceleration must be > 0, got a={a}")


def accel_trajectory(a, tau) -> LabPoint:
    """Uniformly accelerated worldline through the origin at ``tau = 0``."""
    _require_positive_a(a)
    tau = np.asarray(tau, dtype=float)
    return LabPoint(np.sinh(a * tau) / a, _cosh_m1(a * tau) / a)


def _cosh_m1(u):
    # cosh(u) - 1 without cancellation for small u
    return 2.0 * np.sinh(0.5 * u) ** 2


def traversal_time_detector(a, L, anchor=Anchor.FULL_TRAVERSAL) -> float:
    """Proper time an accelerating detector needs to cross the static cavity.

    Starting at a wall the detector crosses the full length ``L``; starting at the
    midpoint it reaches the far wall after ``L/2``.
    """
    _require_positive_a(a)
    if L <= 0:
        raise DomainError(f"cavity length must be > 0, got L={L}")
    distance = L if Anchor(anchor) is Anchor.FULL_TRAVERSAL else L / 2
    # arccosh(1 + u) = log1p(u + sqrt(u (u + 2))), accurate for small u
    u = a * distance
    return math.log1p(u + math.sqrt(u * (u + 2))) / a


def _check_cavity(a, L, anchor):
    _require_positive_a(a)
    if L <= 0:
        raise DomainError(f"cavity length must be > 0, got L={L}")
    if Anchor(anchor) is Anchor.MIDPOINT and a * L >= 2:
        raise RigidityError(
            f"rigidity bound violated: a*L = {a * L:g} >= 2, the rear wall would "
            "cross the future Rindler horizon"
        )


def conformal_cavity_length(a, L, anchor=Anchor.FULL_TRAVERSAL) -> float:
    """Cavity length ``L'`` in the conformal Rindler coordinate ``zeta``."""
    _check_cavity(a, L, anchor)
    if Anchor(anchor) is Anchor.FULL_TRAVERSAL:
        return math.log1p(a * L) / a
    return (math.log1p(a * L / 2) - math.log1p(-a * L / 2)) / a


def traversal_time_cavity(a, L, anchor=Anchor.FULL_TRAVERSAL) -> float:
    """Lab time the inertial detector spends inside the accelerating cavity."""
    _check_cavity(a, L, anchor)
    if Anchor(anchor) is Anchor.FULL_TRAVERSAL:
        return math.sqrt(2 * L / a + L * L)
    return math.sqrt(L / a - L * L / 4)


def rindler_walls(a, L, anchor=Anchor.FULL_TRAVERSAL):
    """Wall positions ``(xi1, xi2)`` of the rigid cavity in the Rindler chart."""
    _check_cavity(a, L, anchor)
    if Anchor(anchor) is Anchor.FULL_TRAVERSAL:
        return 1 / a, 1 / a + L
    return 1 / a - L / 2, 1 / a + L / 2


def conformal_walls(a, L, anchor=Anchor.FULL_TRAVERSAL):
    """Wall positions ``(zeta1, zeta2)`` in the conformal chart."""
    _check_cavity(a, L, anchor)
    if Anchor(anchor) is Anchor.FULL_TRAVERSAL:
        return 0.0, math.log1p(a * L) / a
    return math.log1p(-a * L / 2) / a, math.log1p(a * L / 2) / a


def static_detector_x(a, L, anchor=Anchor.FULL_TRAVERSAL) -> float:
    """Lab position ``x_d`` of the inertial detector in the accelerating-cavity scenario.

    Full traversal: the detector sits on the front wall at ``t = 0``.  Midpoint:
    it sits at the cavity centre, the point with proper acceleration ``a``.
    """
    _check_cavity(a, L, anchor)
    if Anchor(anchor) is Anchor.FULL_TRAVERSAL:
        return 1 / a + L
    return 1 / a


def lab_to_rindler(p: LabPoint) -> RindlerPoint:
    t = np.asarray(p.t, dtype=float)
    x = np.asarray(p.x, dtype=float)
    if np.any(x <= np.abs(t)):
        raise DomainError("point lies outside the right Rindler wedge x > |t|")
    return RindlerPoint(np.arctanh(t / x), np.sqrt((x - t) * (x + t)))


def rindler_to_lab(p: RindlerPoint) -> LabPoint:
    eta = np.asarray(p.eta, dtype=float)
    xi = np.asarray(p.xi, dtype=float)
    if np.any(xi <= 0):
        raise DomainError("Rindler radius xi must be > 0")
    return LabPoint(xi * np.sinh(eta), xi * np.cosh(eta))


def lab_to_conformal(a, p: LabPoint) -> ConformalRindlerPoint:
    _require_positive_a(a)
    eta, xi = lab_to_rindler(p)
    return ConformalRindlerPoint(eta / a, np.log(a * xi) / a)


def conformal_to_lab(a, p: ConformalRindlerPoint) -> LabPoint:
    _require_positive_a(a)
    varsigma = np.asarray(p.varsigma, dtype=float)
    zeta = np.asarray(p.zeta, dtype=float)
    return rindler_to_lab(RindlerPoint(a * varsigma, np.exp(a * zeta) / a))


def detector_trajectory(config: ScenarioConfig) -> Trajectory:
    """Worldline of the detector in the lab chart of a static cavity.

    Used for the accelerating-detector scenario and for the fully static case
    ``a = 0`` (either scenario), where the detector rests at the cavity centre.
    """
    a = config.a
    if config.static:
        def lab(tau):
            tau = np.asarray(tau, dtype=float)
            return LabPoint(tau, np.zeros_like(tau))

        return Trajectory(
            chart="lab",
            tau_max=math.inf,
            lab=lab,
            time=lambda tau: np.asarray(tau, dtype=float),
            position=lambda tau: np.zeros_like(np.asarray(tau, dtype=float)),
            time_rate=lambda tau: np.ones_like(np.asarray(tau, dtype=float)),
            position_rate=lambda tau: np.zeros_like(np.asarray(tau, dtype=float)),
        )
    if config.kind is not ScenarioKind.ACCELERATING_DETECTOR:
        raise UsageError("detector_trajectory needs an accelerating-detector (or static) config")

    def lab(tau):
        return accel_trajectory(a, tau)

    return Trajectory(
        chart="lab",
        tau_max=traversal_time_detector(a, config.L, config.anchor),
        lab=lab,
        time=lambda tau: lab(tau).t,
        position=lambda tau: lab(tau).x,
        time_rate=lambda tau: np.cosh(a * np.asarray(tau, dtype=float)),
        position_rate=lambda tau: np.sinh(a * np.asarray(tau, dtype=float)),
    )


def static_detector_path(config: ScenarioConfig, chart: str = "rindler") -> Trajectory:
    """Worldline ``x = x_d`` of the inertial detector in the accelerating-cavity scenario.

    ``chart`` selects the comoving chart: ``"rindler"`` returns ``(eta, xi)``,
    ``"conformal"`` returns ``(varsigma, zeta)``.  Proper time equals lab time.
    """
    if config.kind is not ScenarioKind.ACCELERATING_CAVITY or config.static:
        raise UsageError("static_detector_path needs an accelerating-cavity config with a > 0")
    if chart not in ("rindler", "conformal"):
        raise UsageError(f"unknown chart {chart!r}")
    a = config.a
    x_d = static_detector_x(a, config.L, config.anchor)

    def lab(tau):
        tau = np.asarray(tau, dtype=float)
        return LabPoint(tau, np.full_like(tau, x_d))

    def eta(tau):
        return np.arctanh(np.asarray(tau, dtype=float) / x_d)

    def xi(tau):
        tau = np.asarray(tau, dtype=float)
        return np.sqrt((x_d - tau) * (x_d + tau))

    def eta_rate(tau):
        tau = np.asarray(tau, dtype=float)
        return x_d / ((x_d - tau) * (x_d + tau))

    def xi_rate(tau):
        tau = np.asarray(tau, dtype=float)
        return -tau / xi(tau)

    if chart == "rindler":
        time, position, time_rate, position_rate = eta, xi, eta_rate, xi_rate
    else:
        def time(tau):
            return eta(tau) / a

        def position(tau):
            # log(a xi) / a with a xi = sqrt((a x_d)^2 - (a t)^2)
            tau = np.asarray(tau, dtype=float)
            return 0.5 * np.log((a * x_d - a * tau) * (a * x_d + a * tau)) / a

        def time_rate(tau):
            return eta_rate(tau) / a

        def position_rate(tau):
            tau = np.asarray(tau, dtype=float)
            return -tau / (a * (x_d - tau) * (x_d + tau))

    return Trajectory(
        chart=chart,
        tau_max=traversal_time_cavity(a, config.L, config.anchor),
        lab=lab,
        time=time,
        position=position,
        time_rate=time_rate,
        position_rate=position_rate,
    )


def proper_accel_profile(a1, x, x1):
    """Proper acceleration at lab position ``x`` of a rigid body whose rear point
    ``x1`` accelerates with ``a1``."""
    if not a1 > 0:
        raise DomainError(f"rear-wall acceleration must be > 0, got a1={a1}")
    x = np.asarray(x, dtype=float)
    if np.any(x < x1):
        raise DomainError("position lies behind the rear wall")
    denom = 1 + a1 * (x - x1)
    if np.any(denom <= 0):
        raise DomainError("position lies beyond the Rindler horizon")
    out = a1 / denom
    return float(out) if out.ndim == 0 else out
