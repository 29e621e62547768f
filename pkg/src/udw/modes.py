"""Dirichlet cavity eigenmodes and their Klein-Gordon normalization.

Every family exposes the same small surface used by the response code:
``omegas(ns)`` (frequencies conjugate to the family's chart time),
``profiles(pos, ns)`` (normalized spatial factors, zero outside the walls),
and ``spatial_rate(ns)`` (largest spatial wavenumber, for the oscillation
guard).  Mode indices ``n`` start at 1.

Families
--------
StaticFamily
    static lab cavity ``[x1, x1 + L]``, any mass; chart time ``t``.
ConformalFamily
    massless field in the conformal Rindler chart, walls ``[zeta1, zeta1 + L']``;
    chart time ``varsigma``.
RindlerMasslessFamily
    massless field in the standard Rindler chart, walls ``[xi1, xi2]``,
    spectrum exact, normalization by numerical quadrature; chart time ``eta``.
RindlerMassiveFamily
    massive field in the standard Rindler chart; spectrum from the roots of the
    imaginary-order Bessel cross product, normalization numerical.
"""

from __future__ import annotations

import hashlib
import math
import os
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from . import quadrature
from .errors import DomainError, SpectrumError, UsageError
from .specfun import bessel_cross

DEFAULT_N_MAX = 200
_NORM_SPEC = quadrature.QuadratureSpec(rel_tol=1e-12, abs_tol=1e-300, max_subdivisions=20000)


@dataclass(frozen=True)
class Mode:
    n: int
    omega: float
    norm: float
    family: str
    profile: Callable[[np.ndarray], np.ndarray]


def _indices(ns):
    ns = np.atleast_1d(np.asarray(ns))
    if ns.size and (np.any(ns < 1) or not np.issubdtype(ns.dtype, np.integer)):
        raise DomainError("mode indices must be integers >= 1")
    return ns.astype(int)


class ModeFamily:
    """Common interface; see the module docstring."""

    tag = "abstract"
    chart = "lab"

    @property
    def walls(self):
        raise NotImplementedError

    def omegas(self, ns):
        raise NotImplementedError

    def norms(self, ns):
        raise NotImplementedError

    def _raw_profiles(self, pos, ns):
        raise NotImplementedError

    def spatial_rate(self, ns):
        raise NotImplementedError

    def kg_weight(self, pos):
        return np.ones_like(pos)

    def profiles(self, pos, ns):
        """Normalized spatial factors, shape ``(len(pos), len(ns))``."""
        pos = np.atleast_1d(np.asarray(pos, dtype=float))
        ns = _indices(ns)
        lo, hi = self.walls
        inside = (pos >= lo) & (pos <= hi)
        out = np.zeros((pos.size, ns.size))
        if np.any(inside) and ns.size:
            out[inside] = self._raw_profiles(pos[inside], ns) * self.norms(ns)[None, :]
        return out

    def mode(self, n) -> Mode:
        n = int(_indices([n])[0])
        return Mode(
            n=n,
            omega=float(self.omegas([n])[0]),
            norm=float(self.norms([n])[0]),
            family=self.tag,
            profile=lambda pos, n=n: self.profiles(pos, [n])[:, 0],
        )

    def geometry_key(self):
        return (self.tag,) + tuple(self.walls)


class StaticFamily(ModeFamily):
    """Standing waves ``sin(n pi (x - x1)/L) / sqrt(L omega_n)`` of a static cavity."""

    tag = "static"
    chart = "lab"

    def __init__(self, L, x1=0.0, m=0.0):
        if L <= 0 or m < 0:
            raise DomainError("static cavity needs L > 0 and m >= 0")
        self.L = float(L)
        self.x1 = float(x1)
        self.m = float(m)

    @property
    def walls(self):
        return self.x1, self.x1 + self.L

    def omegas(self, ns):
        k = _indices(ns) * math.pi / self.L
        return np.sqrt(k * k + self.m * self.m)

    def norms(self, ns):
        return 1 / np.sqrt(self.L * self.omegas(ns))

    def _raw_profiles(self, pos, ns):
        return np.sin(np.outer(pos - self.x1, ns * math.pi / self.L))

    def spatial_rate(self, ns):
        return float(np.max(_indices(ns))) * math.pi / self.L

    def geometry_key(self):
        return (self.tag, self.L, self.x1, self.m)


class ConformalFamily(ModeFamily):
    """Massless modes ``sin(n pi (zeta - zeta1)/L') / sqrt(n pi)`` in the conformal chart."""

    tag = "conformal"
    chart = "conformal"

    def __init__(self, Lp, zeta1=0.0):
        if Lp <= 0:
            raise DomainError("conformal cavity length must be > 0")
        self.Lp = float(Lp)
        self.zeta1 = float(zeta1)

    @property
    def walls(self):
        return self.zeta1, self.zeta1 + self.Lp

    def omegas(self, ns):
        return _indices(ns) * math.pi / self.Lp

    def norms(self, ns):
        return 1 / np.sqrt(_indices(ns) * math.pi)

    def _raw_profiles(self, pos, ns):
        return np.sin(np.outer(pos - self.zeta1, ns * math.pi / self.Lp))

    def spatial_rate(self, ns):
        return float(np.max(_indices(ns))) * math.pi / self.Lp


class _RindlerFamily(ModeFamily):
    chart = "rindler"

    def __init__(self, xi1, xi2):
        if not 0 < xi1 < xi2:
            raise DomainError("Rindler cavity needs 0 < xi1 < xi2")
        self.xi1 = float(xi1)
        self.xi2 = float(xi2)
        self.log_ratio = math.log(self.xi2 / self.xi1)
        self._norm_cache = {}
        self._lock = threading.Lock()

    @property
    def walls(self):
        return self.xi1, self.xi2

    def kg_weight(self, pos):
        return 1 / pos

    def spatial_rate(self, ns):
        return float(np.max(self.omegas(ns))) / self.xi1

    def _unnormalized(self, s, ns):
        """Raw profile as a function of ``s = log(xi / xi1)``."""
        return self._raw_profiles(self.xi1 * np.exp(s), ns)

    def norms(self, ns):
        ns = _indices(ns)
        missing = [int(n) for n in ns if int(n) not in self._norm_cache]
        if missing:
            with self._lock:
                missing = [n for n in missing if n not in self._norm_cache]
                if missing:
                    self._norm_cache.update(zip(missing, self._compute_norms(np.array(missing))))
        return np.array([self._norm_cache[int(n)] for n in ns])

    def _compute_norms(self, ns):
        # 1 = 2 omega A^2 int ds v(s)^2 with xi = xi1 e^s (weight dxi/xi = ds)
        omegas = self.omegas(ns)
        width = _NORM_SPEC.max_width(2 * float(np.max(omegas)))
        res = quadrature.integrate(
            lambda s: self._unnormalized(s, ns) ** 2,
            [0.0, self.log_ratio],
            _NORM_SPEC,
            max_width=width,
        )
        if not res.converged:
            raise SpectrumError("normalization integral did not converge")
        return 1 / np.sqrt(2 * omegas * res.value)


class RindlerMasslessFamily(_RindlerFamily):
    """Massless Rindler modes ``sin(omega_n log(xi/xi1))`` with ``omega_n = n pi / log(xi2/xi1)``."""

    tag = "rindler_massless"

    def omegas(self, ns):
        return _indices(ns) * math.pi / self.log_ratio

    def _raw_profiles(self, pos, ns):
        # tan-free form of sin(w log xi) - tan(w log xi1) cos(w log xi)
        return np.sin(np.outer(np.log(pos / self.xi1), self.omegas(ns)))


def _cache_path(key):
    root = os.environ.get("UDW_CACHE_DIR")
    if not root:
        return None
    digest = hashlib.sha256(",".join(f"{v:.17g}" for v in key).encode()).hexdigest()[:20]
    return Path(root) / f"spectrum-{digest}.csv"


def load_spectrum_cache(key):
    """Read ``(omegas, norms)`` for a massive Rindler geometry from ``UDW_CACHE_DIR``."""
    path = _cache_path(key)
    if path is None or not path.exists():
        return None
    omegas, norms = [], []
    for line in path.read_text().splitlines():
        if not line or line.startswith("#") or line.startswith("n,"):
            continue
        _, om, nm = line.split(",")
        omegas.append(float(om))
        norms.append(float(nm))
    return np.array(omegas), np.array(norms)


def store_spectrum_cache(key, omegas, norms):
    path = _cache_path(key)
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [
        "# massive Rindler spectrum",
        "# geometry: m={:.17g}, xi1={:.17g}, xi2={:.17g}".format(*key),
        "n,omega,norm",
    ]
    lines += [f"{i + 1},{om:.17g},{nm:.17g}" for i, (om, nm) in enumerate(zip(omegas, norms))]
    tmp = path.with_suffix(".tmp")
    tmp.write_text("\n".join(lines) + "\n")
    tmp.replace(path)


def rindler_massive_spectrum(m, xi1, xi2, N):
    """First ``N`` eigenfrequencies of the massive field in a Rindler cavity.

    The roots of ``D(w) = Re I_iw(m xi1) K_iw(m xi2) - Re I_iw(m xi2) K_iw(m xi1)``
    are bracketed on a grid of step at most a quarter of the asymptotic spacing
    ``pi / log(xi2/xi1)`` and refined with Brent's method.
    """
    if not m > 0:
        raise DomainError("massive spectrum needs m > 0")
    if not 0 < xi1 < xi2:
        raise DomainError("Rindler cavity needs 0 < xi1 < xi2")
    if N < 1:
        raise DomainError("need N >= 1")
    log_ratio = math.log(xi2 / xi1)
    spacing = math.pi / log_ratio
    x1, x2 = m * xi1, m * xi2
    step = 0.25 * spacing * min(1.0, spacing / x2)
    lower = lambda n: math.sqrt((n * spacing) ** 2 + x1 * x1)
    upper = lambda n: math.sqrt((n * spacing) ** 2 + x2 * x2)

    def D(w):
        return float(bessel_cross(w, x1, x2))

    roots = []
    grid_lo = lower(1) - 0.5 * step
    prev_w, prev_d = None, None
    while len(roots) < N:
        grid = grid_lo + step * np.arange(512)
        grid_lo = grid[-1] + step
        vals = bessel_cross(grid, x1, x2)
        for w, d in zip(grid, vals):
            if d == 0:
                roots.append(float(w))
            elif prev_d is not None and prev_d * d < 0:
                roots.append(brentq(D, prev_w, w, xtol=1e-10, rtol=4 * np.finfo(float).eps, maxiter=500))
            prev_w, prev_d = w, d
            if len(roots) >= N:
                break
        if grid_lo > upper(N) + 4 * step and len(roots) < N:
            raise SpectrumError(f"found only {len(roots)} of {N} roots below the comparison bound")
    roots = np.array(roots[:N])
    _check_spectrum(roots, spacing, lower, upper)
    return roots


def _check_spectrum(roots, spacing, lower, upper):
    if np.any(np.diff(roots) <= 0) or roots[0] <= 0:
        raise SpectrumError("spectrum is not strictly increasing")
    for n, w in enumerate(roots, start=1):
        # Sturm comparison with the constant potentials m^2 xi1^2 and m^2 xi2^2
        if not lower(n) * (1 - 1e-9) <= w <= upper(n) * (1 + 1e-9):
            raise SpectrumError(f"root {n} = {w:g} outside its comparison bracket")
    n_est = roots[-1] / spacing
    if abs(n_est - roots.size) > 1 + (upper(roots.size) - lower(roots.size)) / spacing:
        raise SpectrumError("root count disagrees with the asymptotic density")


class RindlerMassiveFamily(_RindlerFamily):
    """Massive Rindler modes ``|A_n| (Re I(m xi1) K(m xi) - Re I(m xi) K(m xi1))``.

    The spectrum is computed lazily, grown on demand and cached per geometry
    (in memory, and on disk when ``UDW_CACHE_DIR`` is set).
    """

    tag = "rindler_massive"

    def __init__(self, m, xi1, xi2, n_max=DEFAULT_N_MAX):
        super().__init__(xi1, xi2)
        if not m > 0:
            raise DomainError("massive family needs m > 0")
        self.m = float(m)
        self.n_max = int(n_max)
        self._omegas = np.empty(0)
        cached = load_spectrum_cache(self.geometry_key()[1:])
        if cached is not None:
            self._omegas = cached[0]
            self._norm_cache.update({i + 1: v for i, v in enumerate(cached[1])})

    def geometry_key(self):
        return (self.tag, self.m, self.xi1, self.xi2)

    def ensure(self, N):
        if N <= self._omegas.size:
            return
        with self._lock:
            if N > self._omegas.size:
                target = max(N, min(self.n_max, 2 * N))
                self._omegas = rindler_massive_spectrum(self.m, self.xi1, self.xi2, target)
        ns = np.arange(1, self._omegas.size + 1)
        norms = self.norms(ns)
        store_spectrum_cache(self.geometry_key()[1:], self._omegas, norms)

    def omegas(self, ns):
        ns = _indices(ns)
        if ns.size:
            self.ensure(int(ns.max()))
        return self._omegas[ns - 1]

    def _raw_profiles(self, pos, ns):
        nu = self.omegas(ns)[None, :]
        return bessel_cross(nu, self.m * self.xi1, self.m * pos[:, None])


def static_mode(n, L, x1=0.0, m=0.0) -> Mode:
    return StaticFamily(L, x1, m).mode(n)


def conformal_mode(n, Lp, zeta1=0.0) -> Mode:
    return ConformalFamily(Lp, zeta1).mode(n)


def rindler_massless_mode_direct(n, a, L) -> Mode:
    """Massless Rindler mode for walls at ``xi = 1/a`` and ``xi = 1/a + L``."""
    if not (a > 0 and L > 0):
        raise DomainError("need a > 0 and L > 0")
    return RindlerMasslessFamily(1 / a, 1 / a + L).mode(n)


def rindler_massive_mode(n, family: RindlerMassiveFamily) -> Mode:
    return family.mode(n)


def _position_integral(family, integrand, n_top):
    lo, hi = family.walls
    rate = 2 * family.spatial_rate([n_top])
    if isinstance(family, _RindlerFamily):
        # xi = xi1 e^s turns the dxi/xi weight into ds
        f = lambda s: integrand(family.xi1 * np.exp(s))
        edges = [0.0, family.log_ratio]
        rate *= family.xi1
    else:
        f = integrand
        edges = [lo, hi]
    res = quadrature.integrate(f, edges, _NORM_SPEC, max_width=_NORM_SPEC.max_width(rate))
    return res.value


def kg_inner_product(mode_a: Mode, mode_b: Mode, family: ModeFamily) -> complex:
    """Klein-Gordon product of two positive-frequency modes on the slice of zero chart time.

    For ``u = f(X) exp(-i w T)`` this is ``(w_a + w_b) int f_a f_b dX`` with
    ``dX`` the chart measure (``dxi / xi`` in the Rindler chart).
    """
    if mode_a.family != family.tag or mode_b.family != family.tag:
        raise UsageError("modes do not belong to this family")
    integrand = lambda pos: (mode_a.profile(pos) * mode_b.profile(pos))[:, None]
    value = _position_integral(family, integrand, max(mode_a.n, mode_b.n))
    return complex((mode_a.omega + mode_b.omega) * value[0])


def gram_matrix(family: ModeFamily, N) -> np.ndarray:
    """KG Gram matrix of the first ``N`` modes (identity for an orthonormal family)."""
    ns = np.arange(1, N + 1)
    om = family.omegas(ns)

    def integrand(pos):
        p = family.profiles(pos, ns)
        return (p[:, :, None] * p[:, None, :]).reshape(pos.size, -1)

    value = _position_integral(family, integrand, N).reshape(N, N)
    return (om[:, None] + om[None, :]) * value
