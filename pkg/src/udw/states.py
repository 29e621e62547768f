"""Field states and their Wightman functions pulled back to the detector worldline.

A :class:`Pullback` pairs a mode family with the detector trajectory written
in the family's chart, so that ``pullback.modes(tau, ns)`` returns
``u_n(x(tau))`` including the time phase ``exp(-i omega_n T(tau))``.

Every state is described to the response code as a vacuum mode sum plus a
short list of *excess components* ``(weight, g)``: the excess Wightman
function is ``sum_j weight_j g_j(tau) conj(g_j(tau'))``.  For a Fock state the
two components are ``u_k`` and ``conj(u_k)`` with weight ``n_k``; for a
coherent state the single component is ``2 Re J`` with weight 1.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import kinematics as kin
from .errors import DomainError, UsageError
from .kinematics import Anchor, ScenarioConfig, ScenarioKind
from .modes import (ConformalFamily, ModeFamily, RindlerMassiveFamily,
                    RindlerMasslessFamily, StaticFamily)

MASSLESS_BASES = ("conformal", "direct")


@dataclass(frozen=True)
class Vacuum:
    pass


@dataclass(frozen=True)
class Fock:
    """``n_k`` quanta in mode ``k``, vacuum elsewhere."""

    k: int
    n_k: int

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise DomainError("Fock mode index must be an integer >= 1")
        if int(self.n_k) != self.n_k or self.n_k < 1:
            raise DomainError("Fock occupation must be an integer >= 1 (use Vacuum for 0)")


@dataclass(frozen=True)
class Coherent:
    """Single-mode coherent state with amplitude ``alpha`` in mode ``k``."""

    k: int
    alpha: complex

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise DomainError("coherent mode index must be an integer >= 1")
        if not np.isfinite(complex(self.alpha)):
            raise DomainError("coherent amplitude must be finite")

    def amplitudes(self):
        """Mode amplitudes as ``{index: alpha}`` (single mode)."""
        return {int(self.k): complex(self.alpha)}


FieldState = Union[Vacuum, Fock, Coherent]


@dataclass(frozen=True)
class Pullback:
    family: ModeFamily
    trajectory: kin.Trajectory

    def modes(self, tau, ns):
        """``u_n(x(tau))`` for ``n`` in ``ns``, shape ``(len(tau), len(ns))``."""
        tau = np.atleast_1d(np.asarray(tau, dtype=float))
        T = self.trajectory.time(tau)
        X = self.trajectory.position(tau)
        prof = self.family.profiles(X, ns)
        om = self.family.omegas(ns)
        return prof * np.exp(-1j * np.outer(T, om))

    def phase_rate(self, ns, tau0, tau1):
        """Bound on the phase advance rate of ``u_n`` along the window, ``n`` in ``ns``."""
        if tau1 <= tau0:
            return 0.0
        time_rate, position_rate = self.trajectory.max_rates(tau0, tau1)
        om = float(np.max(self.family.omegas(ns)))
        return om * time_rate + self.family.spatial_rate(ns) * position_rate


@functools.lru_cache(maxsize=64)
def _family(tag, *params):
    return {
        "static": StaticFamily,
        "conformal": ConformalFamily,
        "rindler_massless": RindlerMasslessFamily,
        "rindler_massive": RindlerMassiveFamily,
    }[tag](*params)


def family_for(config: ScenarioConfig, massless_basis="conformal") -> ModeFamily:
    """Mode family appropriate to a scenario; families are shared across calls."""
    if massless_basis not in MASSLESS_BASES:
        raise UsageError(f"massless basis must be one of {MASSLESS_BASES}")
    a, L, m = config.a, config.L, config.m
    if config.static or config.kind is ScenarioKind.ACCELERATING_DETECTOR:
        x1 = 0.0 if config.anchor is Anchor.FULL_TRAVERSAL else -0.5 * L
        return _family("static", L, x1, m)
    xi1, xi2 = kin.rindler_walls(a, L, config.anchor)
    if m > 0:
        return _family("rindler_massive", m, xi1, xi2)
    if massless_basis == "direct":
        return _family("rindler_massless", xi1, xi2)
    zeta1, zeta2 = kin.conformal_walls(a, L, config.anchor)
    return _family("conformal", zeta2 - zeta1, zeta1)


def build_pullback(config: ScenarioConfig, massless_basis="conformal") -> Pullback:
    family = family_for(config, massless_basis)
    if config.static or config.kind is ScenarioKind.ACCELERATING_DETECTOR:
        traj = kin.detector_trajectory(config)
    else:
        traj = kin.static_detector_path(config, family.chart)
    return Pullback(family, traj)


def excess_components(state: FieldState, pullback: Pullback):
    """Excess Wightman function as ``[(weight, g), ...]`` with ``g: tau -> complex array``."""
    if isinstance(state, Vacuum):
        return []
    if isinstance(state, Fock):
        k = [state.k]
        u = lambda tau: pullback.modes(tau, k)[:, 0]
        return [(float(state.n_k), u), (float(state.n_k), lambda tau: np.conj(u(tau)))]
    if isinstance(state, Coherent):
        return [(1.0, lambda tau: 2 * one_point_J(state, tau, pullback).real + 0j)]
    raise UsageError(f"unknown field state {state!r}")


def _pair(tauA, tauB):
    tauA, tauB = np.broadcast_arrays(np.asarray(tauA, dtype=float), np.asarray(tauB, dtype=float))
    return tauA, tauB


def _evaluate(f, tau):
    tau = np.asarray(tau, dtype=float)
    return f(tau.ravel()).reshape(tau.shape + (-1,))


def wightman_vacuum(tauA, tauB, pullback: Pullback, N):
    """Truncated vacuum mode sum ``sum_{n<=N} u_n(tauA) conj(u_n(tauB))``."""
    if N < 1:
        raise DomainError("need N >= 1")
    ns = np.arange(1, int(N) + 1)
    tauA, tauB = _pair(tauA, tauB)
    uA = _evaluate(lambda t: pullback.modes(t, ns), tauA)
    uB = _evaluate(lambda t: pullback.modes(t, ns), tauB)
    out = np.sum(uA * np.conj(uB), axis=-1)
    return out[()] if out.ndim == 0 else out


def wightman_fock_excess(k, n_k, tauA, tauB, pullback: Pullback):
    """``n_k (u_k(tauA) conj(u_k(tauB)) + conj(u_k(tauA)) u_k(tauB))``."""
    tauA, tauB = _pair(tauA, tauB)
    if n_k == 0:
        return np.zeros(tauA.shape, dtype=complex)[()]
    uA = _evaluate(lambda t: pullback.modes(t, [k]), tauA)[..., 0]
    uB = _evaluate(lambda t: pullback.modes(t, [k]), tauB)[..., 0]
    out = n_k * (uA * np.conj(uB) + np.conj(uA) * uB)
    return out[()]


def one_point_J(state: Coherent, tau, pullback: Pullback):
    """Coherent-state one-point function ``J = sum_n alpha_n u_n(x(tau))``."""
    if not isinstance(state, Coherent):
        raise UsageError("one_point_J needs a coherent state")
    tau = np.asarray(tau, dtype=float)
    amps = state.amplitudes()
    ns = sorted(amps)
    alpha = np.array([amps[n] for n in ns])
    u = _evaluate(lambda t: pullback.modes(t, ns), tau)
    out = u @ alpha
    return out[()]


def wightman_coherent_excess(state: Coherent, tauA, tauB, pullback: Pullback):
    """``4 Re J(tauA) Re J(tauB)``."""
    tauA, tauB = _pair(tauA, tauB)
    out = 4 * one_point_J(state, tauA, pullback).real * one_point_J(state, tauB, pullback).real
    return out[()] if np.ndim(out) == 0 else out


def wightman(state: FieldState, tauA, tauB, pullback: Pullback, N):
    """Full truncated Wightman function of ``state`` (vacuum part plus excess)."""
    w = wightman_vacuum(tauA, tauB, pullback, N)
    if isinstance(state, Fock):
        w = w + wightman_fock_excess(state.k, state.n_k, tauA, tauB, pullback)
    elif isinstance(state, Coherent):
        w = w + wightman_coherent_excess(state, tauA, tauB, pullback)
    return w
