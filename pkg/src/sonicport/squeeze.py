"""Squeeze parameter of the horizon mode pair.

A mode of angular frequency ``omega`` emitted by a horizon of surface
gravity ``alpha`` is two-mode squeezed with ``tanh r = exp(-pi omega/alpha)``.
This is the convention under which ``sinh^2 r`` equals the Planck
occupation ``1/(exp(2 pi omega/alpha) - 1)``.  The mixing prefactor
``[2 sinh(2 pi omega/alpha)]^(-1/2) exp(+-pi omega/alpha)`` that is
sometimes written for the Bogoliubov transformation instead implies
``tanh r = exp(-2 pi omega/alpha)`` and is not used here.
"""

import math
from dataclasses import dataclass

from .errors import NonPositiveAlpha, NonPositiveFrequency


@dataclass(frozen=True)
class SqueezeSpec:
    omega: float
    alpha: float
    r: float

    @property
    def tanh_r(self):
        return math.exp(-math.pi * self.omega / self.alpha)

    @property
    def cosh_r(self):
        return (-math.expm1(-2 * math.pi * self.omega / self.alpha)) ** -0.5

    @property
    def nbar(self):
        return mean_occupation(self.omega, self.alpha)

    def as_record(self):
        return {
            "omega": self.omega,
            "alpha": self.alpha,
            "r": self.r,
            "tanh_r": self.tanh_r,
            "cosh_r": math.cosh(self.r),
            "sinh_r": math.sinh(self.r),
            "nbar": self.nbar,
        }


def _check(omega, alpha):
    if not omega > 0:
        raise NonPositiveFrequency(f"mode frequency must be positive, got {omega}")
    if not alpha > 0:
        raise NonPositiveAlpha(f"surface gravity must be positive, got {alpha}")


def squeeze_parameter(omega, alpha, naive=False):
    """Squeeze parameter ``r = atanh(exp(-pi omega/alpha))``.

    For ``exp(-pi omega/alpha) > 1/2`` the argument of ``atanh`` is close to
    one and the equivalent ``-log(tanh(pi omega/(2 alpha)))/2`` is used
    instead.  ``naive=True`` forces the direct form (for cross-checks).
    """
    _check(omega, alpha)
    x = math.pi * omega / alpha
    t = math.exp(-x)
    if naive or t < 0.5:
        r = math.atanh(t)
    else:
        r = -0.5 * math.log(math.tanh(0.5 * x))
    return SqueezeSpec(float(omega), float(alpha), r)


def bogoliubov_pair(spec):
    """Coefficients ``(u, v) = (cosh r, sinh r)`` mixing ``d`` and ``d~^dagger``.

    The check on ``u^2 - v^2 = 1`` is relative to ``u^2``: rounding ``cosh r``
    alone leaves an absolute residual of order ``u^2`` ulps.
    """
    u, v = math.cosh(spec.r), math.sinh(spec.r)
    if abs(u * u - v * v - 1) > 1e-12 * max(1.0, u * u):
        raise ArithmeticError(f"u^2 - v^2 = {u * u - v * v!r} for r = {spec.r}")
    return u, v


def mean_occupation(omega, alpha):
    """Thermal occupation ``1/(exp(2 pi omega/alpha) - 1)`` of one horizon mode."""
    _check(omega, alpha)
    x = 2 * math.pi * omega / alpha
    nbar = math.exp(-x) / -math.expm1(-x)
    via_squeeze = math.sinh(squeeze_parameter(omega, alpha).r) ** 2
    if abs(nbar - via_squeeze) > 1e-12 * nbar:
        raise ArithmeticError(f"nbar {nbar!r} disagrees with sinh^2 r {via_squeeze!r}")
    return nbar
