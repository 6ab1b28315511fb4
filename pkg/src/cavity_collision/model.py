"""Physical parameters, the two-atom/two-mode basis, and reduced atomic states.

Basis convention
----------------
Each atom is a two-level system with ``e`` (index 0) and ``g`` (index 1).
Both cavity modes are truncated at ``n_fock`` photons, so a state lives on
``4 * (n_fock + 1)**2`` amplitudes with flat index::

    k = ((s1 * 2 + s2) * (n_fock + 1) + na) * (n_fock + 1) + nb

The reduced atomic density matrix uses the order ``ee, eg, ge, gg``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import scipy.constants as sc

E, G = 0, 1
ATOM_LABELS = ("ee", "eg", "ge", "gg")


class InvalidParameterError(ValueError):
    """Raised when a physical or numerical parameter is out of its domain."""


@dataclass(frozen=True)
class PhysicalConstants:
    """SI constants. ``a0`` is the rounded Bohr radius used throughout."""

    hbar: float = sc.hbar
    c: float = sc.c
    q: float = sc.e
    epsilon0: float = sc.epsilon_0
    a0: float = 0.53e-10

    @property
    def alpha(self) -> float:
        return self.q**2 / (4 * math.pi * self.epsilon0 * self.hbar * self.c)


@dataclass(frozen=True)
class PhysicalSetup:
    """Fixed atom and cavity parameters.

    Angular frequencies are in rad/s. The mode damping times are recorded
    for reference only; cavity relaxation is not part of the dynamics.
    """

    n_principal: int = 51
    omega: float = 2 * math.pi * 51.1e9
    L: float = 0.0275
    w: float = 0.006
    Delta: float = 2 * math.pi * 128e3
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)
    damping_time_a: float = 1e-3
    damping_time_b: float = 0.9e-3

    def __post_init__(self):
        if self.n_principal < 1:
            raise InvalidParameterError("n_principal must be >= 1")
        for name in ("omega", "L", "w"):
            if not getattr(self, name) > 0:
                raise InvalidParameterError(f"{name} must be positive")
        if self.Delta < 0:
            raise InvalidParameterError("Delta must be non-negative")

    @property
    def D_eg(self) -> float:
        """Dipole matrix element between e and g (C m)."""
        k = self.constants
        return k.q * k.a0 * self.n_principal**2 / 2

    @property
    def E0(self) -> float:
        """Vacuum r.m.s. field at the cavity center (V/m)."""
        k = self.constants
        return math.sqrt(2 * k.hbar * self.omega / (math.pi * k.epsilon0 * self.L * self.w**2))

    @property
    def Omega(self) -> float:
        """Vacuum Rabi angular frequency at the cavity center (rad/s)."""
        return 2 * self.D_eg * self.E0 / self.constants.hbar

    @property
    def b_c(self) -> float:
        """Effective cavity impact parameter (m)."""
        return math.sqrt(self.L * self.w / math.sqrt(2 * math.pi))


@dataclass(frozen=True)
class CollisionScenario:
    """Per-run parameters of a two-atom crossing.

    ``t_span=None`` selects the window ``4 w / min(v1, v2)`` at propagation
    time. ``coupled=False`` switches the atom-field coupling off entirely,
    which is the zero-collision reference (atoms crossing far from the mode).
    """

    v1: float = 300.0
    v2: float = 243.0
    delta_a: float = 2 * math.pi * 470e3
    nbar: float = 0.25
    n_fock_mix: int = 3
    n_fock_dyn: int = 5
    t_span: float | None = None
    dt: float = 2e-9
    coupled: bool = True

    def __post_init__(self):
        if not (self.v1 > self.v2 > 0):
            raise InvalidParameterError(f"need v1 > v2 > 0, got v1={self.v1}, v2={self.v2}")
        if not self.delta_a > 0:
            raise InvalidParameterError("delta_a must be positive")
        if self.nbar < 0:
            raise InvalidParameterError("nbar must be non-negative")
        if self.n_fock_mix < 0:
            raise InvalidParameterError("n_fock_mix must be non-negative")
        if self.n_fock_dyn < self.n_fock_mix + 2:
            raise InvalidParameterError(
                f"n_fock_dyn={self.n_fock_dyn} leaves no room above n_fock_mix={self.n_fock_mix}; "
                "need n_fock_dyn >= n_fock_mix + 2"
            )
        if not self.dt > 0:
            raise InvalidParameterError("dt must be positive")
        if self.t_span is not None and not self.t_span > 0:
            raise InvalidParameterError("t_span must be positive")

    def delta_b(self, setup: PhysicalSetup) -> float:
        return self.delta_a + setup.Delta


def v0_effective(v1: float, v2: float) -> float:
    """Quadratic-mean velocity of the two atoms."""
    if not (v1 > 0 and v2 > 0):
        raise InvalidParameterError("velocities must be positive")
    return math.sqrt((v1 * v1 + v2 * v2) / 2)


def dimension(n_fock: int) -> int:
    return 4 * (n_fock + 1) ** 2


def flat_index(s1: int, s2: int, na: int, nb: int, n_fock: int) -> int:
    m = n_fock + 1
    return ((s1 * 2 + s2) * m + na) * m + nb


def decode_index(k: int, n_fock: int) -> tuple[int, int, int, int]:
    m = n_fock + 1
    rest, nb = divmod(k, m)
    atoms, na = divmod(rest, m)
    s1, s2 = divmod(atoms, 2)
    return s1, s2, na, nb


def excitation_numbers(n_fock: int) -> np.ndarray:
    """Total excitation number (excited atoms plus photons) of every basis state."""
    m = n_fock + 1
    s1, s2, na, nb = np.meshgrid(np.arange(2), np.arange(2), np.arange(m), np.arange(m), indexing="ij")
    return ((s1 == E).astype(int) + (s2 == E) + na + nb).ravel()


@dataclass(frozen=True)
class StateVector:
    """Amplitudes on the ``(s1, s2, na, nb)`` basis."""

    amplitudes: np.ndarray
    n_fock: int

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (dimension(self.n_fock),):
            raise InvalidParameterError(
                f"expected {dimension(self.n_fock)} amplitudes for n_fock={self.n_fock}, got shape {amps.shape}"
            )
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, s1: int, s2: int, na: int, nb: int, n_fock: int) -> StateVector:
        if max(na, nb) > n_fock:
            raise InvalidParameterError(f"Fock state ({na}, {nb}) exceeds truncation {n_fock}")
        amps = np.zeros(dimension(n_fock), dtype=np.complex128)
        amps[flat_index(s1, s2, na, nb, n_fock)] = 1.0
        return cls(amps, n_fock)

    @classmethod
    def superposition(cls, terms, n_fock: int) -> StateVector:
        """Normalized sum of ``(coefficient, (s1, s2, na, nb))`` terms."""
        amps = np.zeros(dimension(n_fock), dtype=np.complex128)
        for coef, (s1, s2, na, nb) in terms:
            amps[flat_index(s1, s2, na, nb, n_fock)] += coef
        return cls(amps / np.linalg.norm(amps), n_fock)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to ``(2, 2, n_fock + 1, n_fock + 1)``."""
        m = self.n_fock + 1
        return self.amplitudes.reshape(2, 2, m, m)


@dataclass(frozen=True)
class AtomPairDensity:
    """Reduced 4x4 density matrix of the two atoms (order ee, eg, ge, gg)."""

    rho: np.ndarray

    def __post_init__(self):
        rho = np.array(self.rho, dtype=np.complex128)
        if rho.shape != (4, 4):
            raise InvalidParameterError(f"expected a 4x4 matrix, got {rho.shape}")
        rho.flags.writeable = False
        object.__setattr__(self, "rho", rho)

    @classmethod
    def from_pure(cls, amplitudes) -> AtomPairDensity:
        psi = np.asarray(amplitudes, dtype=np.complex128)
        return cls(np.outer(psi, psi.conj()))

    @property
    def trace(self) -> float:
        return float(np.trace(self.rho).real)

    def check(self, atol: float = 1e-9) -> None:
        """Raise if the matrix is not a valid density matrix within ``atol``."""
        if not np.allclose(self.rho, self.rho.conj().T, atol=max(atol * 0.1, 1e-12)):
            raise InvalidParameterError("density matrix is not Hermitian")
        if abs(self.trace - 1) > atol:
            raise InvalidParameterError(f"trace {self.trace} differs from 1")
        if np.linalg.eigvalsh(self.rho).min() < -atol:
            raise InvalidParameterError("density matrix has negative eigenvalues")


class JointProbabilities(NamedTuple):
    p_ee: float
    p_eg: float
    p_ge: float
    p_gg: float

    @property
    def total(self) -> float:
        return self.p_ee + self.p_eg + self.p_ge + self.p_gg


def entangled_pair(theta: float, phase: float = 0.0) -> AtomPairDensity:
    """``cos(theta)|e1 g2> + exp(i phase) sin(theta)|g1 e2>`` as a density matrix."""
    return AtomPairDensity.from_pure([0, math.cos(theta), np.exp(1j * phase) * math.sin(theta), 0])


def partial_trace_field(state: StateVector) -> AtomPairDensity:
    """Trace both cavity modes out of a joint atom-field state."""
    m = state.amplitudes.reshape(4, -1)
    return AtomPairDensity(m @ m.conj().T)


def joint_probabilities(rho: AtomPairDensity) -> JointProbabilities:
    d = np.real(np.diag(rho.rho))
    return JointProbabilities(*(float(x) for x in d))
