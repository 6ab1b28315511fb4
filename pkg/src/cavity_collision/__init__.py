"""Cavity-assisted collision of two Rydberg atoms crossing a two-mode microwave cavity."""
from .analytic import (
    DetuningPoint,
    cavity_angle,
    cavity_angle_from_eta,
    delta_from_eta,
    eta_for_angle,
    eta_from_delta,
    free_space_angle,
    perturbative_probabilities,
)
from .config import ConfigError, RunConfig
from .dynamics import (
    CouplingProfile,
    HamiltonianSpec,
    IntegrationAccuracyError,
    PropagationResult,
    build_hamiltonian,
    collide,
    collide_thermal,
    coupling_at,
    propagate,
    run_thermal_collision,
    thermal_weight,
)
from .measurement import BellCurve, DetectionModel, RamseyPulse, apply_detection, apply_ramsey, bell_correlator, bell_scan
from .model import (
    AtomPairDensity,
    CollisionScenario,
    InvalidParameterError,
    JointProbabilities,
    PhysicalConstants,
    PhysicalSetup,
    StateVector,
    entangled_pair,
    joint_probabilities,
    partial_trace_field,
    v0_effective,
)

__version__ = "0.1.0"
