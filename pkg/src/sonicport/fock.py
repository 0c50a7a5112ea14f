"""Truncated number-basis states.

Single-mode states are amplitude vectors over ``|0>, ..., |N>`` and
two-mode states are amplitude matrices ``c[m, n]`` over ``|m>_I |n>_II``.
Truncation losses are reported, never silently renormalized away (the
coherent state constructor is the one exception and says so).
"""

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc

from .errors import CutoffTooSmall, NegativeEigenvalue, NegativeSqueeze, NotNormalized

DEFAULT_EPS = 1e-12
MAX_CUTOFF = 500


def _frozen(a, dtype=complex):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FockVector:
    """Single-mode state ``sum_n amplitudes[n] |n>``.

    ``renormalization`` is the norm the amplitudes had before they were
    rescaled to unit norm (1.0 if they never were).
    """

    amplitudes: np.ndarray
    renormalization: float = 1.0

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 1 or amps.size < 2:
            raise ValueError("a FockVector needs amplitudes for at least |0> and |1>")
        norm2 = float(np.vdot(amps, amps).real)
        if not 0 < norm2 <= 1 + 1e-12:
            raise ValueError(f"squared norm {norm2!r} outside (0, 1]")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, n, cutoff):
        amps = np.zeros(cutoff + 1, dtype=complex)
        amps[n] = 1.0
        return cls(amps)

    @classmethod
    def normalized(cls, amplitudes):
        amps = np.asarray(amplitudes, dtype=complex)
        norm = float(np.linalg.norm(amps))
        return cls(amps / norm, renormalization=norm)

    @property
    def cutoff(self):
        return self.amplitudes.size - 1

    @property
    def norm_squared(self):
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def is_normalized(self, tol=1e-10):
        return abs(self.norm_squared - 1) <= tol

    @property
    def mean_number(self):
        return float(np.arange(self.amplitudes.size) @ np.abs(self.amplitudes) ** 2)

    def padded(self, cutoff):
        """Amplitudes on ``|0>..|cutoff>``, zero-filled or cut as needed."""
        out = np.zeros(cutoff + 1, dtype=complex)
        m = min(cutoff, self.cutoff) + 1
        out[:m] = self.amplitudes[:m]
        return out

    def to_dict(self):
        return {
            "cutoff": self.cutoff,
            "amplitudes": [[float(z.real), float(z.imag)] for z in self.amplitudes],
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d):
        amps = np.array([complex(re, im) for re, im in d["amplitudes"]])
        if amps.size != d["cutoff"] + 1:
            raise ValueError("cutoff does not match the number of amplitudes")
        return cls(amps)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class TwoModeState:
    """Two-mode state ``sum_{m,n} amplitudes[m, n] |m>_I |n>_II``.

    ``norm_deficit`` is the known probability weight lost to truncation.
    """

    amplitudes: np.ndarray
    norm_deficit: float = 0.0

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 2 or amps.shape[0] != amps.shape[1] or amps.shape[0] < 2:
            raise ValueError("two-mode amplitudes must be a square matrix of side >= 2")
        if np.linalg.norm(amps) > 1 + 1e-12:
            raise ValueError("two-mode state has norm above 1")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def cutoff(self):
        return self.amplitudes.shape[0] - 1

    @property
    def norm_squared(self):
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def to_dict(self):
        return {
            "cutoff": self.cutoff,
            "norm_deficit": self.norm_deficit,
            "amplitudes": [[[float(z.real), float(z.imag)] for z in row] for row in self.amplitudes],
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d):
        amps = np.array([[complex(re, im) for re, im in row] for row in d["amplitudes"]])
        if amps.shape[0] != d["cutoff"] + 1:
            raise ValueError("cutoff does not match the amplitude matrix")
        return cls(amps, d.get("norm_deficit", 0.0))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        if not np.allclose(m, m.conj().T, rtol=0, atol=1e-12):
            raise ValueError("density matrix is not Hermitian")
        object.__setattr__(self, "matrix", m)

    @property
    def trace(self):
        return float(np.trace(self.matrix).real)

    @property
    def trace_deficit(self):
        return 1.0 - self.trace

    @property
    def populations(self):
        return np.diag(self.matrix).real.copy()

    @property
    def mean_number(self):
        return float(np.arange(self.matrix.shape[0]) @ self.populations)

    def eigenvalues(self):
        return np.linalg.eigvalsh(self.matrix)


@dataclass(frozen=True)
class CoherentSpec:
    amplitude: complex
    cutoff: int
    eps: float = DEFAULT_EPS

    @property
    def tail(self):
        """Poisson weight beyond the cutoff, ``P(n > N)`` for mean ``|amplitude|^2``."""
        x = abs(self.amplitude) ** 2
        if x == 0:
            return 0.0
        return float(gammainc(self.cutoff + 1, x))


def coherent_cutoff(amplitude, eps=DEFAULT_EPS, max_cutoff=MAX_CUTOFF):
    """Smallest cutoff whose Poisson tail is below ``eps``."""
    for n in range(1, max_cutoff + 1):
        if CoherentSpec(amplitude, n).tail < eps:
            return n
    raise CutoffTooSmall(f"coherent amplitude {amplitude} needs a cutoff above {max_cutoff}")


def squeezed_cutoff(r, eps=DEFAULT_EPS, max_cutoff=MAX_CUTOFF):
    """Smallest cutoff with ``tanh(r)^(2(N+1)) < eps``."""
    if r < 0:
        raise NegativeSqueeze(f"squeeze parameter must be non-negative, got {r}")
    t = math.tanh(r)
    if t == 0:
        return 1
    if t >= 1:
        raise CutoffTooSmall("tanh r = 1 has no finite cutoff")
    n = max(1, math.ceil(math.log(eps) / (2 * math.log(t))) - 1)
    while t ** (2 * (n + 1)) >= eps:
        n += 1
    while n > 1 and t ** (2 * n) < eps:
        n -= 1
    if n > max_cutoff:
        raise CutoffTooSmall(f"squeeze r = {r} needs cutoff {n} > {max_cutoff}")
    return n


def coherent_state(spec):
    """Coherent state truncated at ``spec.cutoff`` and rescaled to unit norm.

    The returned vector's ``renormalization`` holds the pre-rescaling norm.
    """
    tail = spec.tail
    if tail >= spec.eps:
        raise CutoffTooSmall(
            f"coherent tail {tail:.3g} beyond cutoff {spec.cutoff} is not below {spec.eps}"
        )
    z = complex(spec.amplitude)
    amps = np.empty(spec.cutoff + 1, dtype=complex)
    amps[0] = math.exp(-abs(z) ** 2 / 2)
    for n in range(spec.cutoff):
        amps[n + 1] = amps[n] * z / math.sqrt(n + 1)
    return FockVector.normalized(amps)


def two_mode_squeezed_vacuum(r, cutoff):
    """``(1/cosh r) sum_n tanh(r)^n |n>|n>`` up to ``n = cutoff``."""
    if r < 0:
        raise NegativeSqueeze(f"squeeze parameter must be non-negative, got {r}")
    t = math.tanh(r)
    diag = t ** np.arange(cutoff + 1) / math.cosh(r)
    return TwoModeState(np.diag(diag).astype(complex), norm_deficit=t ** (2 * (cutoff + 1)))


def squeezed_vacuum_exponential(r, cutoff):
    """Same state built as ``Z exp(tanh r a^dagger b^dagger) |0,0>``.

    The exponential series is summed term by term with truncated creation
    operators, and ``Z = sqrt(1 - tanh^2 r)`` is fixed by the geometric
    series of the untruncated norm.
    """
    if r < 0:
        raise NegativeSqueeze(f"squeeze parameter must be non-negative, got {r}")
    t = math.tanh(r)
    create = np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), -1)
    term = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    term[0, 0] = 1.0
    total = term.copy()
    for n in range(1, cutoff + 1):
        # (a^dagger (x) b^dagger) acts on c[m, n] as A c A^T
        term = (t / n) * (create @ term @ create.T)
        total += term
    return TwoModeState(math.sqrt(1 - t * t) * total, norm_deficit=t ** (2 * (cutoff + 1)))


def reduced_state(state, which="I"):
    c = state.amplitudes
    if which == "I":
        rho = c @ c.conj().T
    elif which == "II":
        rho = c.T @ c.conj()
    else:
        raise ValueError(f"mode must be 'I' or 'II', got {which!r}")
    return DensityOperator(0.5 * (rho + rho.conj().T))


def schmidt_spectrum(state):
    """Schmidt weights of a two-mode pure state, largest first."""
    s = np.linalg.svd(state.amplitudes, compute_uv=False)
    return s**2


def entanglement_entropy(state):
    """Von Neumann entropy (nats) of either reduced state."""
    total = state.norm_squared + state.norm_deficit
    if abs(total - 1) > 1e-8:
        raise NotNormalized(f"state norm^2 + truncation deficit = {total!r}, not 1")
    p = reduced_state(state).eigenvalues()
    if p.min() < -1e-10:
        raise NegativeEigenvalue(f"reduced state has eigenvalue {p.min():.3g}")
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def fidelity_pure(a, b, tol=1e-10):
    """Overlap fidelity ``|<a|b>|^2`` of two normalized single-mode states."""
    for name, v in (("first", a), ("second", b)):
        if not v.is_normalized(tol):
            raise NotNormalized(f"{name} state has squared norm {v.norm_squared!r}")
    n = max(a.cutoff, b.cutoff)
    return float(min(1.0, abs(np.vdot(a.padded(n), b.padded(n))) ** 2))
