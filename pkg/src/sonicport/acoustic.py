"""Acoustic geometry of a radial transonic flow.

A fluid with constant sound speed ``c`` and background flow ``(rho0, v0)``
carries sound along the null curves of the metric

    ds^2 = (rho0/c) [ (c^2 - v0^2) dtau^2 - c^2/(c^2 - v0^2) dr^2 ]

(angular sector omitted).  The sonic horizon sits where ``|v0| = c`` and the
surface gravity ``alpha = |d|v0|/dr|`` there fixes the Hawking temperature
``hbar alpha / (2 pi k_B)``.
"""

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import (
    AtHorizon,
    GridTooSmall,
    NoHorizon,
    NonPositiveAlpha,
    NonTransonic,
    OutOfDomain,
    ZeroAmplitude,
)
from .units import NATURAL, UnitSystem

KINDS = ("linear", "powerlaw", "tabulated")

# |c^2 - v^2| below this fraction of c^2 counts as sitting on the horizon.
HORIZON_FLAG_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FlowProfile:
    """Radial background flow sampled on a strictly increasing grid.

    Use the :meth:`linear`, :meth:`powerlaw` and :meth:`tabulated`
    constructors rather than building one by hand.  Negative velocities are
    infalling.
    """

    grid: np.ndarray
    density: np.ndarray
    velocity: np.ndarray
    sound_speed: float
    kind: str = "tabulated"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        density = np.asarray(self.density, dtype=float)
        velocity = np.asarray(self.velocity, dtype=float)
        if self.kind not in KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}")
        if grid.ndim != 1 or grid.size < 2:
            raise GridTooSmall("profile grid needs at least two points")
        if density.shape != grid.shape or velocity.shape != grid.shape:
            raise ValueError("grid, density and velocity must have the same length")
        if np.any(grid <= 0):
            raise ValueError("radial grid must be strictly positive")
        if np.any(np.diff(grid) <= 0):
            raise ValueError("radial grid must be strictly increasing")
        if np.any(density <= 0):
            raise ValueError("density must be strictly positive")
        if not self.sound_speed > 0:
            raise ValueError("sound speed must be strictly positive")
        for name, arr in (("grid", grid), ("density", density), ("velocity", velocity)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "sound_speed", float(self.sound_speed))

    @classmethod
    def linear(cls, c, R, alpha, rho0=1.0, grid=None, num=2001):
        """Near-horizon expansion ``v0 = -c + alpha (r - R)`` with constant density.

        The default grid stays within ``v0 <= 0`` so that the outflowing
        branch ``v0 = +c`` at ``r = R + 2c/alpha`` is not picked up.
        """
        if not alpha > 0:
            raise NonPositiveAlpha("alpha must be positive")
        if grid is None:
            half = min(0.9 * c / alpha, 0.5 * R)
            grid = np.linspace(R - half, R + half, num)
        grid = np.asarray(grid, dtype=float)
        params = {"R": float(R), "alpha": float(alpha), "rho0": float(rho0)}
        velocity = -c + alpha * (grid - R)
        return cls(grid, np.full_like(grid, rho0), velocity, c, "linear", params)

    @classmethod
    def powerlaw(cls, c, R, exponent=2.0, rho0=1.0, grid=None, num=2001):
        """Accelerating inflow ``v0 = -c (R/r)^exponent`` with constant density.

        ``exponent = 2`` is the exact steady continuity solution.
        """
        if not exponent > 0:
            raise ValueError("exponent must be positive")
        if grid is None:
            grid = np.linspace(0.5 * R, 2.0 * R, num)
        grid = np.asarray(grid, dtype=float)
        params = {"R": float(R), "exponent": float(exponent), "rho0": float(rho0)}
        velocity = -c * (R / grid) ** exponent
        return cls(grid, np.full_like(grid, rho0), velocity, c, "powerlaw", params)

    @classmethod
    def tabulated(cls, grid, density, velocity, c):
        return cls(grid, density, velocity, c, "tabulated", {})

    @property
    def domain(self):
        return float(self.grid[0]), float(self.grid[-1])

    @cached_property
    def _velocity_spline(self):
        return CubicSpline(self.grid, self.velocity)

    @cached_property
    def _density_spline(self):
        return CubicSpline(self.grid, self.density)

    @cached_property
    def _velocity_slope_spline(self):
        return CubicSpline(self.grid, _derivative_samples(self.grid, self.velocity))

    def velocity_at(self, r):
        c = self.sound_speed
        p = self.params
        if self.kind == "linear":
            return -c + p["alpha"] * (np.asarray(r, dtype=float) - p["R"])
        if self.kind == "powerlaw":
            return -c * (p["R"] / np.asarray(r, dtype=float)) ** p["exponent"]
        return self._velocity_spline(r)

    def density_at(self, r):
        if self.kind == "tabulated":
            return self._density_spline(r)
        return np.full_like(np.asarray(r, dtype=float), self.params["rho0"])

    def velocity_slope_at(self, r):
        """dv0/dr; analytic for analytic kinds, 4-point central differences otherwise."""
        p = self.params
        if self.kind == "linear":
            return np.full_like(np.asarray(r, dtype=float), p["alpha"])
        if self.kind == "powerlaw":
            n = p["exponent"]
            return self.sound_speed * n * p["R"] ** n / np.asarray(r, dtype=float) ** (n + 1)
        return self._velocity_slope_spline(r)

    def _check_domain(self, r):
        if self.kind == "tabulated":
            lo, hi = self.domain
            if not lo <= r <= hi:
                raise OutOfDomain(f"r = {r} outside tabulated domain [{lo}, {hi}]")
        elif not r > 0:
            raise OutOfDomain(f"r = {r} must be positive")


def _derivative_samples(x, y):
    """Derivative samples, 4-point central stencil on uniform grids.

    The stencil (f[i-2] - 8 f[i-1] + 8 f[i+1] - f[i+2]) / 12h is fourth
    order; the two nodes at each end fall back to second-order one-sided
    differences.  Non-uniform grids use the cubic-spline derivative.
    """
    h = np.diff(x)
    if x.size < 5 or np.ptp(h) > 1e-9 * abs(h.mean()):
        return CubicSpline(x, y)(x, 1)
    h = h.mean()
    d = np.gradient(y, h, edge_order=2)
    d[2:-2] = (y[:-4] - 8 * y[1:-3] + 8 * y[3:-1] - y[4:]) / (12 * h)
    return d


@dataclass(frozen=True)
class MetricComponents:
    """(tau, r) block of the acoustic metric at one radius.

    ``g_rr`` is ``None`` with ``at_horizon`` set where ``c^2 - v0^2``
    vanishes; no infinities are returned.
    """

    radius: float
    g_tt: float
    g_rr: float | None
    conformal_factor: float
    at_horizon: bool = False
    form: str = "exact"


@dataclass(frozen=True)
class HorizonData:
    r_H: float
    alpha: float
    temperature: float
    density: float
    sound_speed: float
    units: UnitSystem = NATURAL
    is_event_horizon: bool = True

    def as_record(self):
        return {
            "r_H": self.r_H,
            "alpha": self.alpha,
            "temperature": self.temperature,
            "density": self.density,
            "sound_speed": self.sound_speed,
            "event_horizon": self.is_event_horizon,
        }


@dataclass(frozen=True, eq=False)
class FlowResidual:
    """Normalized steady-continuity residual ``|d/dr (r^2 rho0 v0)|``."""

    residual: float
    pointwise: np.ndarray
    tolerance: float
    passed: bool
    advisory: bool


def madelung_decompose(psi, grid, units=NATURAL, floor=1e-12):
    """Split sampled wavefunction values into fluid density and velocity.

    Parameters
    ----------
    psi : array_like of complex
        Wavefunction samples on ``grid``.
    grid : array_like of float
        Strictly increasing sample positions.
    units : UnitSystem
        Supplies ``hbar`` and the particle mass.
    floor : float
        Smallest amplitude for which the phase is considered defined.

    Returns
    -------
    density, velocity : ndarray
        ``|psi|^2`` and ``(hbar/m) dS/dx`` where ``S`` is the unwrapped phase.
        Differences are central in the interior, second-order one-sided at
        the ends.
    """
    psi = np.asarray(psi, dtype=complex)
    grid = np.asarray(grid, dtype=float)
    if psi.size < 3 or grid.size != psi.size:
        raise GridTooSmall("need at least 3 matching samples of psi and grid")
    amplitude = np.abs(psi)
    if np.any(amplitude < floor):
        i = int(np.argmin(amplitude))
        raise ZeroAmplitude(f"|psi| = {amplitude[i]:.3g} at x = {grid[i]} is below {floor}")
    phase = np.unwrap(np.angle(psi))
    if np.max(np.abs(np.diff(phase))) > np.pi / 2:
        warnings.warn(
            "phase advances by more than pi/2 between samples; unwrapping may be ambiguous",
            RuntimeWarning,
            stacklevel=2,
        )
    velocity = units.hbar / units.mass * np.gradient(phase, grid, edge_order=2)
    return amplitude**2, velocity


def validate_stationary_flow(profile, tolerance=1e-6):
    """Report how far a profile is from steady spherical continuity.

    Only power-law profiles are held to ``tolerance``; the linear
    near-horizon expansion and tabulated data get an advisory verdict.
    """
    flux = profile.grid**2 * profile.density * profile.velocity
    scale = np.max(np.abs(flux))
    pointwise = np.abs(np.gradient(flux, profile.grid, edge_order=2))
    pointwise = pointwise / scale if scale > 0 else pointwise
    residual = float(pointwise.max())
    return FlowResidual(
        residual=residual,
        pointwise=pointwise,
        tolerance=tolerance,
        passed=residual <= tolerance,
        advisory=profile.kind != "powerlaw",
    )


def acoustic_metric_at(profile, r):
    r = float(r)
    profile._check_domain(r)
    c = profile.sound_speed
    rho = float(profile.density_at(r))
    v = float(profile.velocity_at(r))
    conformal = rho / c
    gap = c * c - v * v
    if abs(gap) <= HORIZON_FLAG_TOL * c * c:
        return MetricComponents(r, 0.0, None, conformal, at_horizon=True)
    return MetricComponents(r, conformal * gap, -conformal * c * c / gap, conformal)


def near_horizon_metric(h, rho0, c, r):
    """Schwarzschild-like linearization about the horizon ``h``.

    ``rho0`` is the density evaluated at the horizon; it is held fixed over
    the near-horizon region.
    """
    r = float(r)
    delta = r - h.r_H
    if delta == 0:
        raise AtHorizon("g_rr is undefined exactly at the horizon")
    if abs(delta) > 0.1 * abs(h.r_H) * (1 + 1e-12):
        warnings.warn(
            f"|r - r_H| = {abs(delta):.3g} exceeds 10% of r_H; linearization is unreliable",
            RuntimeWarning,
            stacklevel=2,
        )
    conformal = rho0 / c
    return MetricComponents(
        r,
        conformal * 2 * c * h.alpha * delta,
        -conformal * c / (2 * h.alpha * delta),
        conformal,
        form="near-horizon",
    )


def find_horizons(profile, units=NATURAL):
    """Every sonic horizon on the profile grid, sorted by radius.

    The outermost one carries ``is_event_horizon = True``.
    """
    c = profile.sound_speed
    grid = profile.grid

    def excess(r):
        return abs(float(profile.velocity_at(r))) - c

    f = np.abs(np.asarray(profile.velocity_at(grid), dtype=float)) - c
    roots = []
    touched = False
    for i in range(grid.size):
        if f[i] != 0:
            continue
        left = f[i - 1] if i > 0 else None
        right = f[i + 1] if i + 1 < grid.size else None
        if left is not None and right is not None and left * right < 0:
            roots.append(float(grid[i]))
        elif left is None or right is None:
            # endpoint exactly sonic: accept only if the flow crosses just inside
            roots.append(float(grid[i]))
        else:
            touched = True
    for i in np.flatnonzero(f[:-1] * f[1:] < 0):
        a, b = float(grid[i]), float(grid[i + 1])
        roots.append(brentq(excess, a, b, xtol=1e-15 * max(abs(a), 1.0), rtol=1e-15, maxiter=200))
    if not roots:
        if touched or np.min(np.abs(f)) <= 1e-10 * c:
            raise NonTransonic("flow touches the sound speed without crossing it")
        raise NoHorizon(f"|v0| - c never changes sign on [{grid[0]}, {grid[-1]}]")
    roots.sort()
    horizons = []
    for j, r_h in enumerate(roots):
        v = float(profile.velocity_at(r_h))
        miss = abs(abs(v) - c)
        if miss > 1e-10 * c:
            raise NonTransonic(f"root refinement stalled at r = {r_h} (||v0| - c| = {miss:.3g})")
        alpha = abs(float(profile.velocity_slope_at(r_h)))
        if alpha == 0:
            raise NonTransonic(f"flow is tangent to the sound speed at r = {r_h}")
        horizons.append(
            HorizonData(
                r_H=r_h,
                alpha=alpha,
                temperature=hawking_temperature(alpha, units),
                density=float(profile.density_at(r_h)),
                sound_speed=c,
                units=units,
                is_event_horizon=j == len(roots) - 1,
            )
        )
    return horizons


def find_horizon(profile, units=NATURAL):
    """The outermost (event) horizon of ``profile``."""
    return find_horizons(profile, units)[-1]


def hawking_temperature(alpha, units=NATURAL):
    if not alpha > 0:
        raise NonPositiveAlpha(f"surface gravity must be positive, got {alpha}")
    return units.hbar * alpha / (2 * math.pi * units.boltzmann)


def alpha_for_temperature(temperature, units=NATURAL):
    if not temperature > 0:
        raise NonPositiveAlpha(f"temperature must be positive, got {temperature}")
    return 2 * math.pi * units.boltzmann * temperature / units.hbar


def load_profile(path, sound_speed):
    """Read a tabulated profile: columns ``r, rho0, v0``, ``#`` comments."""
    data = np.loadtxt(path, comments="#", ndmin=2)
    if data.shape[1] != 3:
        raise ValueError(f"{path}: expected 3 columns (r, rho0, v0), found {data.shape[1]}")
    return FlowProfile.tabulated(data[:, 0], data[:, 1], data[:, 2], sound_speed)
