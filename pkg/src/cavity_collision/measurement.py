"""Analysis pulses, Bell correlator and detection errors."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .model import AtomPairDensity, InvalidParameterError, JointProbabilities, joint_probabilities

_SX = np.array([[0, 1], [1, 0]], dtype=complex)
_SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
_PARITY = np.array([1.0, -1.0, -1.0, 1.0])  # ee, eg, ge, gg


@dataclass(frozen=True)
class RamseyPulse:
    """Resonant rotation ``exp(-i (tip/2) (cos(phase) sx + sin(phase) sy))``.

    With ``tip_angle = pi/2`` this is the analysis pulse: detecting ``e``
    afterwards selects the +1 eigenstate of the transverse Pauli operator
    along azimuth ``phase + pi/2``. The constant quarter-turn only moves the
    phase offset of a Bell curve.
    """

    tip_angle: float = math.pi / 2
    phase: float = 0.0

    def unitary(self) -> np.ndarray:
        axis = math.cos(self.phase) * _SX + math.sin(self.phase) * _SY
        half = self.tip_angle / 2
        return math.cos(half) * np.eye(2) - 1j * math.sin(half) * axis


def apply_ramsey(rho: AtomPairDensity, pulse1: RamseyPulse, pulse2: RamseyPulse) -> AtomPairDensity:
    u = np.kron(pulse1.unitary(), pulse2.unitary())
    return AtomPairDensity(u @ rho.rho @ u.conj().T)


def parity(p: JointProbabilities) -> float:
    """``p_ee + p_gg - p_eg - p_ge``."""
    return float(np.dot(_PARITY, p))


def bell_correlator(rho_after_pulses: AtomPairDensity) -> float:
    """Energy-basis correlator, read with ``e -> +1`` and ``g -> -1`` on both atoms."""
    return parity(joint_probabilities(rho_after_pulses))


@dataclass(frozen=True)
class DetectionModel:
    """Imperfect state-selective detection.

    ``scale`` mode multiplies the two exchange channels ``p_eg`` and ``p_ge``
    by ``scale`` and leaves the sum below one. ``matrix`` mode misassigns
    each atom's state independently with probability ``misassign``.
    """

    mode: Literal["scale", "matrix"] = "scale"
    scale: float = 0.89
    misassign: float = 0.05

    def __post_init__(self):
        if self.mode not in ("scale", "matrix"):
            raise InvalidParameterError(f"unknown detection mode {self.mode!r}")
        if not 0 <= self.scale <= 1:
            raise InvalidParameterError("scale must lie in [0, 1]")
        if not 0 <= self.misassign <= 1:
            raise InvalidParameterError("misassign must lie in [0, 1]")

    @classmethod
    def identity(cls) -> DetectionModel:
        return cls("scale", scale=1.0)

    @classmethod
    def confusion(cls, misassign: float = 0.05) -> DetectionModel:
        return cls("matrix", misassign=misassign)

    @property
    def confusion_matrix(self) -> np.ndarray:
        """Per-atom ``M[true, detected]`` with states ordered e, g."""
        eps = self.misassign
        return np.array([[1 - eps, eps], [eps, 1 - eps]])


def apply_detection(p: JointProbabilities, model: DetectionModel) -> JointProbabilities:
    if model.mode == "scale":
        return JointProbabilities(p.p_ee, model.scale * p.p_eg, model.scale * p.p_ge, p.p_gg)
    m = model.confusion_matrix
    detected = m.T @ np.reshape(p, (2, 2)) @ m
    return JointProbabilities(*(float(x) for x in detected.ravel()))


@dataclass(frozen=True)
class BellCurve:
    phases: np.ndarray
    values: np.ndarray
    contrast: float
    offset_phase: float
    mean: float
    degenerate: bool = False

    def fitted(self, phases=None) -> np.ndarray:
        phi = self.phases if phases is None else np.asarray(phases)
        return self.mean + self.contrast * np.cos(phi - self.offset_phase)


def fit_cosine(phases, values) -> tuple[float, float, float, bool]:
    """Least-squares ``mean + contrast cos(phi - offset)``; returns ``(contrast, offset, mean, degenerate)``."""
    phi = np.asarray(phases, dtype=float)
    y = np.asarray(values, dtype=float)
    design = np.column_stack([np.cos(phi), np.sin(phi), np.ones_like(phi)])
    coef, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < 3:
        return 0.0, 0.0, float(y.mean()), True
    a, b, mean = coef
    contrast = math.hypot(a, b)
    if contrast < 1e-12:
        return 0.0, 0.0, float(mean), True
    return contrast, math.atan2(b, a), float(mean), False


def bell_scan(
    rho_collision: AtomPairDensity,
    phases,
    detection: DetectionModel | None = None,
    atom1_phase: float = 0.0,
) -> BellCurve:
    """Correlator versus the phase of the second atom's analysis pulse.

    The first atom's pulse phase is held at ``atom1_phase`` and defines the
    reference axis. A constant curve gives ``contrast = 0`` with
    ``degenerate=True``.
    """
    phases = np.asarray(phases, dtype=float)
    if phases.size == 0:
        raise InvalidParameterError("phase grid is empty")
    detection = detection or DetectionModel.identity()
    first = RamseyPulse(math.pi / 2, atom1_phase)
    values = np.empty(phases.size)
    for i, phi in enumerate(phases):
        rotated = apply_ramsey(rho_collision, first, RamseyPulse(math.pi / 2, phi))
        p = apply_detection(joint_probabilities(rotated), detection)
        values[i] = parity(p)
    contrast, offset, mean, degenerate = fit_cosine(phases, values)
    return BellCurve(phases, values, contrast, offset, mean, degenerate)
