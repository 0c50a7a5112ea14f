"""Teleportation over the horizon's two-mode squeezed vacuum.

Two protocols are simulated on truncated number bases:

* the unitary-measurement form, where Alice applies ``S1 (x) S2`` to the
  target and her half of the resource and Bob's state becomes
  ``X_j ~ sum_l tanh(r)^l (S2^T S1)_{jl} phi_l``;
* the number-difference protocol, where Alice measures the difference
  ``d = n_T - n_I`` and Bob shifts his mode by ``d``.  Outcomes are labelled
  by ``k`` and a sign with ``d = +-2k``; ``k`` runs over half-integers so
  that every integer difference is reachable.

For a coherent target and ``d = 0`` the second protocol has the closed form
fidelity ``exp(-|z|^2 (1 - tanh r)^2)``.
"""

import math
from dataclasses import dataclass

import numpy as np

from .acoustic import alpha_for_temperature, hawking_temperature
from .errors import CutoffTooSmall, NegativeSqueeze, NonUnitaryMeasurement, NotNormalized, ShiftOutOfRange
from .fock import DEFAULT_EPS, CoherentSpec, FockVector, coherent_cutoff, coherent_state, fidelity_pure, squeezed_cutoff
from .squeeze import mean_occupation, squeeze_parameter
from .units import NATURAL


@dataclass(frozen=True, eq=False)
class MeasurementSpec:
    """Alice's unitary ``U = S1 (x) S2`` on (target, mode I)."""

    S1: np.ndarray
    S2: np.ndarray

    def __post_init__(self):
        for name in ("S1", "S2"):
            m = np.array(getattr(self, name), dtype=complex)
            if m.ndim != 2 or m.shape[0] != m.shape[1]:
                raise NonUnitaryMeasurement(f"{name} must be a square matrix")
            err = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
            if err > 1e-10:
                raise NonUnitaryMeasurement(f"{name} deviates from unitarity by {err:.3g}")
            m.setflags(write=False)
            object.__setattr__(self, name, m)
        if self.S1.shape != self.S2.shape:
            raise NonUnitaryMeasurement("S1 and S2 must act on spaces of the same dimension")

    @property
    def cutoff(self):
        return self.S1.shape[0] - 1

    @classmethod
    def identity(cls, cutoff):
        return cls(np.eye(cutoff + 1), np.eye(cutoff + 1))

    @classmethod
    def random(cls, cutoff, seed):
        """Haar-random pair from QR of complex Gaussian matrices."""
        rng = np.random.default_rng(seed)
        return cls(_haar_unitary(cutoff + 1, rng), _haar_unitary(cutoff + 1, rng))


def _haar_unitary(dim, rng):
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


@dataclass(frozen=True, eq=False)
class TeleportOutcome:
    """Bob's normalized output and its fidelity with the target.

    ``probability`` is the outcome probability for conditional protocols and
    ``None`` for the unitary-measurement form.  ``raw`` holds Bob's state
    before his number-shift correction, when there is one.
    """

    output: FockVector
    fidelity: float
    probability: float | None = None
    label: str = "general"
    k: float | None = None
    sign: str | None = None
    raw: FockVector | None = None

    def as_record(self):
        rec = {
            "label": self.label,
            "k": self.k,
            "sign": self.sign,
            "probability": self.probability,
            "fidelity": self.fidelity,
        }
        rec["output"] = self.output.to_dict()
        return rec


def _target_amplitudes(target, cutoff, eps):
    if not target.is_normalized():
        raise NotNormalized(f"target has squared norm {target.norm_squared!r}")
    lost = float(np.sum(np.abs(target.amplitudes[cutoff + 1:]) ** 2))
    if lost >= eps:
        raise CutoffTooSmall(f"target weight {lost:.3g} lies beyond cutoff {cutoff}")
    return target.padded(cutoff)


def _resource_ratio(r):
    if r < 0:
        raise NegativeSqueeze(f"squeeze parameter must be non-negative, got {r}")
    return math.tanh(r)


def teleport_general(target, r, meas, cutoff=None, eps=DEFAULT_EPS):
    """Bob's state after Alice measures with ``meas`` on a squeezed resource.

    The normalization constant absorbs both ``1/cosh r`` and the projection
    norm, so only the relative weights ``tanh(r)^l`` matter.  Index sums
    start from the vacuum.
    """
    if cutoff is None:
        cutoff = meas.cutoff
    if meas.cutoff != cutoff:
        raise ValueError(f"measurement acts on cutoff {meas.cutoff}, expected {cutoff}")
    lam = _resource_ratio(r)
    phi = _target_amplitudes(target, cutoff, eps)
    weights = lam ** np.arange(cutoff + 1)
    x = (meas.S2.T @ meas.S1) @ (weights * phi)
    output = FockVector.normalized(x)
    return TeleportOutcome(output=output, fidelity=fidelity_pure(output, FockVector(phi)))


def _difference(k, sign, cutoff):
    shift = 2 * k
    if shift < 0 or abs(shift - round(shift)) > 1e-12:
        raise ValueError(f"k must be a non-negative multiple of 1/2, got {k}")
    shift = int(round(shift))
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    if shift > cutoff:
        raise ShiftOutOfRange(f"number difference 2k = {shift} exceeds cutoff {cutoff}")
    return shift if sign == "+" else -shift


def mb_probability(target, r, k, sign, cutoff, eps=DEFAULT_EPS):
    """Probability ``(1 - tanh^2 r) sum_n tanh^(2n) r |c_(n+d)|^2`` of difference ``d = +-2k``."""
    lam = _resource_ratio(r)
    phi = _target_amplitudes(target, cutoff, eps)
    return _probability(phi, lam, _difference(k, sign, cutoff))


def _probability(phi, lam, d):
    m = np.arange(max(d, 0), phi.size)
    return float((1 - lam * lam) * np.sum(lam ** (2 * (m - d)) * np.abs(phi[m]) ** 2))


def mb_outcome_probabilities(target, r, cutoff, eps=DEFAULT_EPS):
    """All outcome probabilities keyed by ``(k, sign)``; ``k = 0`` appears once, as ``'+'``."""
    lam = _resource_ratio(r)
    phi = _target_amplitudes(target, cutoff, eps)
    out = {(0.0, "+"): _probability(phi, lam, 0)}
    for shift in range(1, cutoff + 1):
        out[(shift / 2, "+")] = _probability(phi, lam, shift)
        out[(shift / 2, "-")] = _probability(phi, lam, -shift)
    return out


def mb_conditional(target, r, k=0, sign="+", cutoff=None, eps=DEFAULT_EPS):
    """Number-difference teleportation conditioned on outcome ``d = +-2k``.

    Before correction Bob holds ``sum_n tanh(r)^n c_(n+d) |n>`` (``raw``);
    shifting his mode by ``d`` gives the output, proportional to
    ``tanh(r)^m c_m`` on ``|m>`` for ``m >= max(d, 0)``.
    """
    if cutoff is None:
        cutoff = target.cutoff
    lam = _resource_ratio(r)
    phi = _target_amplitudes(target, cutoff, eps)
    d = _difference(k, sign, cutoff)
    probability = _probability(phi, lam, d)
    if probability == 0:
        raise ShiftOutOfRange(f"outcome d = {d} has zero probability for this target")

    m = np.arange(max(d, 0), cutoff + 1)
    corrected = np.zeros(cutoff + 1, dtype=complex)
    corrected[m] = lam ** (m - max(d, 0)) * phi[m]
    raw = np.zeros(max(cutoff - d, 1) + 1, dtype=complex)
    raw[m - d] = corrected[m]

    output = FockVector.normalized(corrected)
    return TeleportOutcome(
        output=output,
        fidelity=fidelity_pure(output, FockVector(phi)),
        probability=probability,
        label="number-difference",
        k=abs(d) / 2,
        sign=sign,
        raw=FockVector.normalized(raw),
    )


def analytic_infidelity_zero(amplitude, r):
    """``1 - F`` for the zero-difference outcome, free of cancellation."""
    if r < 0:
        raise NegativeSqueeze(f"squeeze parameter must be non-negative, got {r}")
    e = math.exp(-2 * r)
    gap = 2 * e / (1 + e)  # 1 - tanh r
    return -math.expm1(-abs(amplitude) ** 2 * gap * gap)


def analytic_fidelity_zero(amplitude, r):
    """Closed-form fidelity ``exp(-|z|^2 (1 - tanh r)^2)`` for a coherent target."""
    return 1.0 - analytic_infidelity_zero(amplitude, r)


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    temperature: float
    r: float
    nbar: float
    F_analytic: float
    F_simulated: float
    P0: float

    FIELDS = ("alpha", "temperature", "r", "nbar", "F_analytic", "F_simulated", "P0")

    def as_record(self):
        return {name: getattr(self, name) for name in self.FIELDS}


def resolve_cutoff(amplitude, r, eps=DEFAULT_EPS):
    """Smallest cutoff meeting both the resource and the coherent tail bounds."""
    return max(squeezed_cutoff(r, eps), coherent_cutoff(amplitude, eps))


def fidelity_temperature_sweep(amplitude, omega, alphas=None, temperatures=None,
                               units=NATURAL, cutoff="auto", eps=DEFAULT_EPS):
    """Zero-difference fidelity along a grid of surface gravities or temperatures.

    Exactly one of ``alphas`` and ``temperatures`` is given.  Each row pairs
    the closed-form fidelity with the brute-force simulated one.
    """
    if (alphas is None) == (temperatures is None):
        raise ValueError("give exactly one of alphas and temperatures")
    if alphas is None:
        alphas = [alpha_for_temperature(float(T), units) for T in temperatures]
    alphas = [float(a) for a in alphas]
    if not alphas:
        raise ValueError("sweep grid is empty")

    def row(alpha):
        spec = squeeze_parameter(omega, alpha)
        n = resolve_cutoff(amplitude, spec.r, eps) if cutoff == "auto" else int(cutoff)
        target = coherent_state(CoherentSpec(amplitude, n, eps))
        outcome = mb_conditional(target, spec.r, 0, "+", n, eps)
        return SweepRow(
            alpha=alpha,
            temperature=hawking_temperature(alpha, units),
            r=spec.r,
            nbar=mean_occupation(omega, alpha),
            F_analytic=analytic_fidelity_zero(amplitude, spec.r),
            F_simulated=outcome.fidelity,
            P0=outcome.probability,
        )

    return [row(a) for a in alphas]
