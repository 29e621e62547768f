"""Leading-order detector response: transition probability, rate and resonance scans.

The production path is factorized.  With the Wightman function written as a
sum of separable terms ``sum_j w_j g_j(tau) conj(g_j(tau'))`` (vacuum modes
plus the state's excess components), the top-hat probability is

    P / lambda^2 = sum_j w_j |int_{tau0}^{tau1} exp(-i Omega tau) g_j(tau) dtau|^2

so only one-dimensional oscillatory integrals are needed.  The double integral
over the Wightman function (:func:`transition_probability_direct`) and the
``s``-integral form of the rate (:func:`transition_rate_direct`) are kept as
independent oracles.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks, peak_widths

from . import quadrature
from .errors import AccuracyError, DomainError, PerturbativeWarning, UDWError, UsageError
from .kinematics import ScenarioConfig, ScenarioKind
from .quadrature import QuadratureSpec
from .states import (Coherent, FieldState, Fock, Pullback, Vacuum, build_pullback,
                     excess_components, wightman)

PERTURBATIVE_LIMIT = 0.1
_MODE_CHUNK = 16


@dataclass(frozen=True)
class DetectorParams:
    """Gap ``omega``, coupling ``lam`` and top-hat window ``(tau0, tau1)``.

    ``window=None`` means ``[0, tau_max]`` of the scenario, which must then be
    finite (the static case ``a = 0`` needs an explicit window).
    """

    omega: float
    lam: float = 1.0
    window: tuple | None = None

    def __post_init__(self):
        if not math.isfinite(self.omega) or not math.isfinite(self.lam):
            raise DomainError("gap and coupling must be finite")
        if self.window is not None:
            t0, t1 = map(float, self.window)
            if not (math.isfinite(t0) and math.isfinite(t1)) or t1 < t0:
                raise DomainError(f"switching window must satisfy tau0 <= tau1, got {self.window}")
            object.__setattr__(self, "window", (t0, t1))

    def resolve_window(self, tau_max):
        if self.window is not None:
            return self.window
        if not math.isfinite(tau_max):
            raise UsageError("the static case needs an explicit switching window")
        return 0.0, float(tau_max)


@dataclass
class ResponseResult:
    """Transition probability divided by ``lambda^2``.

    ``per_mode`` holds the vacuum contributions of modes ``1..N``; ``excess``
    is the state-dependent addition (zero for the vacuum).
    """

    probability_over_lambda2: float
    per_mode: np.ndarray
    excess: float
    N_used: int
    err_est: float
    breakdown: dict = field(default_factory=dict)

    @property
    def vacuum(self):
        return float(np.sum(self.per_mode))


@dataclass
class RateResult:
    tau: np.ndarray
    rate: np.ndarray
    tau0: float
    err_est: float = 0.0


@dataclass
class Peak:
    omega: float
    height: float
    width: float


@dataclass
class ScanResult:
    omega: np.ndarray
    probability: np.ndarray
    peaks: list
    errors: dict


def _check_N(N):
    if int(N) != N or N < 1:
        raise DomainError(f"mode truncation N must be an integer >= 1, got {N}")
    return int(N)


def _window_integrals(g, rate, tau0, tau1, quad, edges=None):
    """``int exp(-i Omega tau) g`` over the window; ``g`` already includes the gap phase."""
    if edges is None:
        edges = [tau0, tau1]
    res = quadrature.integrate(g, edges, quad, max_width=quad.max_width(rate),
                               per_interval=len(edges) > 2)
    if not res.converged:
        raise AccuracyError(
            "window integral did not reach the requested tolerance",
            abs_err_est=float(np.max(res.error)),
            value=res.value,
        )
    return res


def _components(pullback, state, N, Omega, tau0, tau1):
    """Separable pieces of the state's Wightman function as ``(weights, g, rate)`` chunks."""
    chunks = []
    for start in range(1, N + 1, _MODE_CHUNK):
        ns = np.arange(start, min(N, start + _MODE_CHUNK - 1) + 1)

        def g(tau, ns=ns):
            return np.exp(-1j * Omega * tau)[:, None] * pullback.modes(tau, ns)

        rate = abs(Omega) + pullback.phase_rate(ns, tau0, tau1)
        chunks.append(("vacuum", np.ones(ns.size), g, rate))
    excess = excess_components(state, pullback)
    if excess:
        k = [state.k]
        weights = np.array([w for w, _ in excess])
        funcs = [f for _, f in excess]

        def g(tau, funcs=funcs):
            phase = np.exp(-1j * Omega * tau)
            return np.stack([phase * f(tau) for f in funcs], axis=1)

        rate = abs(Omega) + pullback.phase_rate(k, tau0, tau1)
        chunks.append(("excess", weights, g, rate))
    return chunks


def _warn_perturbative(P, lam):
    if P * lam * lam > PERTURBATIVE_LIMIT:
        warnings.warn(
            f"P = {P * lam * lam:.3g} exceeds {PERTURBATIVE_LIMIT}: the leading-order "
            "result (linear in the occupation number) is not trustworthy here",
            PerturbativeWarning,
            stacklevel=3,
        )


def _prepare(config, detector, massless_basis, pullback):
    if pullback is None:
        pullback = build_pullback(config, massless_basis)
    tau0, tau1 = detector.resolve_window(pullback.trajectory.tau_max)
    return pullback, tau0, tau1


def transition_probability(config: ScenarioConfig, state: FieldState, detector: DetectorParams,
                           N=15, quad: QuadratureSpec = QuadratureSpec(),
                           massless_basis="conformal", pullback: Pullback | None = None
                           ) -> ResponseResult:
    """Leading-order excitation probability ``P / lambda^2`` (factorized mode sum).

    Parameters
    ----------
    config : ScenarioConfig
        Scenario geometry.  The accelerating cavity with ``m > 0`` uses the
        massive Rindler modes; with ``m = 0`` the conformal (default) or the
        direct Rindler basis.
    state : Vacuum, Fock or Coherent
    detector : DetectorParams
    N : int
        Vacuum mode truncation.  Excess terms are exact.
    quad : QuadratureSpec
        Tolerances for every window integral.

    Returns
    -------
    ResponseResult
    """
    N = _check_N(N)
    pullback, tau0, tau1 = _prepare(config, detector, massless_basis, pullback)
    per_mode = []
    excess = 0.0
    err = 0.0
    for kind, weights, g, rate in _components(pullback, state, N, detector.omega, tau0, tau1):
        res = _window_integrals(g, rate, tau0, tau1, quad)
        contrib = weights * np.abs(res.value) ** 2
        err += float(np.sum(weights * (2 * np.abs(res.value) * res.error + res.error ** 2)))
        if kind == "vacuum":
            per_mode.append(contrib)
        else:
            excess = float(np.sum(contrib))
    per_mode = np.concatenate(per_mode)
    P = float(np.sum(per_mode)) + excess
    _warn_perturbative(P, detector.lam)
    return ResponseResult(P, per_mode, excess, N, err,
                          {"vacuum": float(np.sum(per_mode)), "excess": excess})


def _double_integral(pullback, state, N, Omega, tau0, tau1, width, order, include_vacuum):
    nodes, weights = quadrature.gauss_legendre_rule(tau0, tau1, width, order)
    if nodes.size == 0:
        return 0.0
    tA, tB = nodes[:, None], nodes[None, :]
    W = wightman(state, tA, tB, pullback, N)
    if not include_vacuum:
        W = W - wightman(Vacuum(), tA, tB, pullback, N)
    v = weights * np.exp(-1j * Omega * nodes)
    return float(np.real(v @ W @ np.conj(v)))


def transition_probability_direct(config: ScenarioConfig, state: FieldState,
                                  detector: DetectorParams, N=5,
                                  quad: QuadratureSpec = QuadratureSpec(),
                                  massless_basis="conformal", order=16,
                                  include_vacuum=True) -> ResponseResult:
    """Oracle: tensor Gauss-Legendre evaluation of the Wightman double integral.

    The double sum is done at two resolutions; the difference is the error
    estimate.  Intended for small ``N``.  With ``include_vacuum=False`` only the
    state's excess Wightman function is integrated.
    """
    N = _check_N(N)
    pullback, tau0, tau1 = _prepare(config, detector, massless_basis, None)
    ns = np.arange(1, max(N, getattr(state, "k", 1)) + 1)
    rate = abs(detector.omega) + pullback.phase_rate(ns, tau0, tau1)
    width = 2 * math.pi / rate / 2 if rate > 0 else math.inf
    args = (pullback, state, N, detector.omega, tau0, tau1)
    coarse = _double_integral(*args, width, order, include_vacuum)
    fine = _double_integral(*args, width / 2, order, include_vacuum)
    return ResponseResult(fine, np.array([]), float("nan"), N, abs(fine - coarse),
                          {"coarse": coarse})


def transition_rate(config: ScenarioConfig, state: FieldState, detector: DetectorParams, tau,
                    N=15, quad: QuadratureSpec = QuadratureSpec(), tau0=None,
                    massless_basis="conformal") -> RateResult:
    """Instantaneous transition rate ``dF/dtau / lambda^2`` of a detector switched on at ``tau0``.

    Computed as ``sum_j w_j 2 Re[f_j(tau) conj(int_{tau0}^{tau} f_j)]`` with
    ``f_j = exp(-i Omega tau) g_j``; the cumulative integrals share one panel set.
    """
    N = _check_N(N)
    pullback, w0, w1 = _prepare(config, detector, massless_basis, None)
    tau0 = w0 if tau0 is None else float(tau0)
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    if np.any(tau < tau0):
        raise DomainError("rate requested before the switch-on time")
    order = np.argsort(tau, kind="stable")
    sorted_tau = tau[order]
    edges = np.concatenate([[tau0], sorted_tau])
    hi = float(edges[-1])
    rate = np.zeros(tau.size)
    err = 0.0
    for _, weights, g, phase_rate in _components(pullback, state, N, detector.omega, tau0, max(hi, w1)):
        if hi > tau0:
            res = _window_integrals(g, phase_rate, tau0, hi, quad, edges=edges)
            cumulative = np.cumsum(res.interval_values, axis=0) if edges.size > 2 else res.value[None, :]
            err += float(np.sum(weights * 2 * np.abs(g(sorted_tau)).max(axis=0) * res.error))
        else:
            cumulative = np.zeros((tau.size, weights.size), dtype=complex)
        contrib = 2 * np.real(g(sorted_tau) * np.conj(cumulative)) @ weights
        # exactly zero at the switch-on time
        contrib[sorted_tau == tau0] = 0.0
        rate[order] += contrib
    return RateResult(tau, rate, tau0, err)


def transition_rate_direct(config: ScenarioConfig, state: FieldState, detector: DetectorParams,
                           tau, N=15, quad: QuadratureSpec = QuadratureSpec(), tau0=None,
                           massless_basis="conformal") -> RateResult:
    """Oracle: ``2 Re int_0^{tau - tau0} exp(-i Omega s) W(tau, tau - s) ds`` per ``tau``."""
    N = _check_N(N)
    pullback, w0, w1 = _prepare(config, detector, massless_basis, None)
    tau0 = w0 if tau0 is None else float(tau0)
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    ns = np.arange(1, max(N, getattr(state, "k", 1)) + 1)
    out = np.zeros(tau.size)
    for i, t in enumerate(tau):
        if t <= tau0:
            continue
        rate = abs(detector.omega) + 2 * pullback.phase_rate(ns, tau0, t)
        f = lambda s, t=t: np.exp(-1j * detector.omega * s) * wightman(state, t, t - s, pullback, N)
        res = quadrature.integrate(f, [0.0, t - tau0], quad, max_width=quad.max_width(rate))
        out[i] = 2 * float(np.real(res.value[0]))
    return RateResult(tau, out, tau0)


def find_resonance_peaks(omega, probability, prominence=0.05):
    """Local maxima with prominence at least ``prominence * max(P)``."""
    omega = np.asarray(omega, dtype=float)
    P = np.asarray(probability, dtype=float)
    good = np.isfinite(P)
    if not np.any(good):
        return []
    Pg, og = P[good], omega[good]
    idx, _ = find_peaks(Pg, prominence=prominence * float(np.max(Pg)))
    if idx.size == 0:
        return []
    widths = peak_widths(Pg, idx, rel_height=0.5)[0]
    spacing = np.gradient(og)[idx]
    return [Peak(float(og[i]), float(Pg[i]), float(w * s)) for i, w, s in zip(idx, widths, spacing)]


def resonance_scan(config: ScenarioConfig, state: FieldState, detector: DetectorParams,
                   omega_grid, N=15, quad: QuadratureSpec = QuadratureSpec(),
                   massless_basis="conformal", prominence=0.05) -> ScanResult:
    """``P(Omega) / lambda^2`` over a gap grid plus a peak report.

    Failures at individual grid points are recorded in ``errors`` (keyed by
    grid index) and leave ``nan`` in the probability array.
    """
    omega_grid = np.asarray(omega_grid, dtype=float)
    if omega_grid.size == 0 or not np.all(np.isfinite(omega_grid)):
        raise DomainError("gap grid must be nonempty and finite")
    pullback = build_pullback(config, massless_basis)
    P = np.full(omega_grid.size, np.nan)
    errors = {}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PerturbativeWarning)
        for i, om in enumerate(omega_grid):
            det = DetectorParams(float(om), detector.lam, detector.window)
            try:
                P[i] = transition_probability(config, state, det, N, quad, pullback=pullback
                                              ).probability_over_lambda2
            except UDWError as exc:
                errors[i] = str(exc)
    if np.any(P * detector.lam ** 2 > PERTURBATIVE_LIMIT):
        _warn_perturbative(float(np.nanmax(P)), detector.lam)
    return ScanResult(omega_grid, P, find_resonance_peaks(omega_grid, P, prominence), errors)


def scenario_difference(config_pair, state: FieldState, detector: DetectorParams, N=15,
                        quad: QuadratureSpec = QuadratureSpec(), massless_basis="conformal"):
    """``|P_1 - P_2| / lambda^2`` for two configurations at the same truncation.

    ``config_pair`` may also be a single config, in which case it is compared
    with the same geometry in the other scenario kind.
    """
    if isinstance(config_pair, ScenarioConfig):
        other = (ScenarioKind.ACCELERATING_CAVITY
                 if config_pair.kind is ScenarioKind.ACCELERATING_DETECTOR
                 else ScenarioKind.ACCELERATING_DETECTOR)
        config_pair = (config_pair, config_pair.replace(kind=other))
    first, second = config_pair
    if (first.a, first.L, first.m) != (second.a, second.L, second.m):
        raise UsageError("scenario_difference needs matched a, L and m")
    p1 = transition_probability(first, state, detector, N, quad, massless_basis)
    p2 = transition_probability(second, state, detector, N, quad, massless_basis)
    return abs(p1.probability_over_lambda2 - p2.probability_over_lambda2)


__all__ = [
    "Coherent", "DetectorParams", "Fock", "Peak", "QuadratureSpec", "RateResult",
    "ResponseResult", "ScanResult", "Vacuum", "find_resonance_peaks", "resonance_scan",
    "scenario_difference", "transition_probability", "transition_probability_direct",
    "transition_rate", "transition_rate_direct",
]
