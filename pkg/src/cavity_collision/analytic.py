"""Closed-form mixing angles and the dispersive (second-order) prediction.

All angles are plain floats in radians. The free-space estimate is an
order-of-magnitude formula; the cavity-assisted angle is the exact
second-order result valid for ``delta_a >> Omega``.
"""
from __future__ import annotations

import math
from typing import NamedTuple

from .model import InvalidParameterError, JointProbabilities, PhysicalConstants, PhysicalSetup

# sqrt(pi) / (4 sqrt(2)): time integral of the product of two Gaussian couplings,
# expressed through the quadratic-mean velocity
_OVERLAP = math.sqrt(math.pi) / (4 * math.sqrt(2))


class DetuningPoint(NamedTuple):
    delta_a: float
    delta_b: float
    eta: float


def free_space_angle(n: int, v_rel: float, b0: float, constants: PhysicalConstants | None = None) -> float:
    """Van der Waals mixing angle estimate for impact parameter ``b0`` (m).

    ``alpha * (c / v_rel) * (a0 n^2 / b0)^2``. Only an order-of-magnitude
    estimate: the angular structure of the dipole-dipole coupling is ignored.
    """
    if not (v_rel > 0 and b0 > 0):
        raise InvalidParameterError("v_rel and b0 must be positive")
    k = constants or PhysicalConstants()
    return k.alpha * (k.c / v_rel) * (k.a0 * n**2 / b0) ** 2


def cavity_angle(setup: PhysicalSetup, delta_a: float, v0: float) -> float:
    """Cavity-assisted mixing angle from the vacuum Rabi frequency and detunings."""
    delta_b = delta_a + setup.Delta
    if not (delta_a > 0 and delta_b > 0):
        raise InvalidParameterError("detunings must be positive")
    if not v0 > 0:
        raise InvalidParameterError("v0 must be positive")
    return setup.Omega**2 * (1 / delta_a + 1 / delta_b) * _OVERLAP * setup.w / v0


def angle_per_eta(setup: PhysicalSetup, v0: float) -> float:
    """Mixing angle per unit ``eta``: the free-space angle at impact parameter ``b_c``."""
    if not v0 > 0:
        raise InvalidParameterError("v0 must be positive")
    k = setup.constants
    return k.alpha * (k.c / v0) * (k.a0 * setup.n_principal**2 / setup.b_c) ** 2


def cavity_angle_from_eta(setup: PhysicalSetup, eta: float, v0: float) -> float:
    """Cavity-assisted mixing angle written with ``eta`` and atom/cavity parameters only."""
    if eta < 0:
        raise InvalidParameterError("eta must be non-negative")
    return eta * angle_per_eta(setup, v0)


def eta_for_angle(setup: PhysicalSetup, theta: float, v0: float) -> float:
    """Invert :func:`cavity_angle_from_eta` for the ``eta`` giving ``theta``."""
    if theta < 0:
        raise InvalidParameterError("theta must be non-negative")
    return theta / angle_per_eta(setup, v0)


def eta_from_delta(delta_a: float, setup: PhysicalSetup) -> DetuningPoint:
    if not delta_a > 0:
        raise InvalidParameterError("delta_a must be positive")
    delta_b = delta_a + setup.Delta
    return DetuningPoint(delta_a, delta_b, setup.omega / delta_a + setup.omega / delta_b)


def delta_from_eta(eta: float, setup: PhysicalSetup) -> DetuningPoint:
    """Positive detuning root of ``eta d (d + Delta) = omega (2 d + Delta)``."""
    if not eta > 0:
        raise InvalidParameterError("eta must be positive; eta = 0 is the uncoupled reference")
    om, dd = setup.omega, setup.Delta
    # eta d^2 + (eta Delta - 2 omega) d - omega Delta = 0
    b = eta * dd - 2 * om
    disc = math.sqrt(b * b + 4 * eta * om * dd)
    # cancellation-free form of the positive root
    delta_a = (disc - b) / (2 * eta) if b <= 0 else 2 * om * dd / (b + disc)
    return DetuningPoint(delta_a, delta_a + dd, eta)


def perturbative_probabilities(theta_c: float, detection_scale: float = 1.0) -> JointProbabilities:
    """Populations of the ideal mixed pair, with the exchange channels scaled."""
    if not 0 <= detection_scale <= 1:
        raise InvalidParameterError("detection_scale must lie in [0, 1]")
    c2 = math.cos(theta_c) ** 2
    return JointProbabilities(0.0, detection_scale * c2, detection_scale * (1 - c2), 0.0)
