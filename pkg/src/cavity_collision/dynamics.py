"""Exact two-atom / two-mode dynamics of a cavity crossing.

Frame: rotating at the atomic frequency, rotating-wave approximation, so::

    H(t)/hbar = delta_a a'a + delta_b b'b
                + sum_i sum_mu (g_i(t)/2) (sigma_i+ mu + mu' sigma_i-)

with ``g_i(t) = Omega exp(-v_i^2 t^2 / w^2)``. The factor 1/2 makes the
resonant ``|e,0> <-> |g,1>`` oscillation run at angular frequency Omega.
Both modes couple with the same peak Omega. Everything here is in units of
rad/s (i.e. ``H/hbar``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from ._rk4 import rk4_gaussian
from .model import (
    E,
    G,
    AtomPairDensity,
    CollisionScenario,
    InvalidParameterError,
    PhysicalSetup,
    StateVector,
    excitation_numbers,
    partial_trace_field,
)

NORM_DRIFT_LIMIT = 1e-6
WINDOW_WAISTS = 4.0


class IntegrationAccuracyError(RuntimeError):
    """The integrator lost more norm than tolerated; retry with a smaller step."""

    def __init__(self, norm_drift: float, dt: float):
        self.norm_drift = norm_drift
        self.suggested_dt = dt / 2
        super().__init__(
            f"norm drift {norm_drift:.3e} exceeds {NORM_DRIFT_LIMIT:.0e}; retry with dt <= {self.suggested_dt:.3e} s"
        )


@dataclass(frozen=True)
class CouplingProfile:
    """Gaussian transit coupling ``Omega exp(-v^2 t^2 / w^2)``; ``v = 0`` is constant."""

    Omega: float
    v: float
    w: float

    @property
    def rate(self) -> float:
        return (self.v / self.w) ** 2

    def __call__(self, t):
        return self.Omega * np.exp(-self.rate * np.square(t))


def coupling_at(profile: CouplingProfile, t: float) -> float:
    return float(profile(t))


# -- operators ---------------------------------------------------------------

_SIGMA_PLUS = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))  # |e><g| with e = 0, g = 1
_ID2 = sp.identity(2, format="csr")


def _annihilation(n_fock: int) -> sp.csr_matrix:
    return sp.diags(np.sqrt(np.arange(1, n_fock + 1, dtype=float)), 1, format="csr")


def _embed(atom1, atom2, mode_a, mode_b) -> sp.csr_matrix:
    return sp.kron(sp.kron(sp.kron(atom1, atom2), mode_a), mode_b, format="csr")


@lru_cache(maxsize=None)
def coupling_operator(atom: int, mode: str, n_fock: int) -> sp.csr_matrix:
    """``(sigma_atom+ mu + mu' sigma_atom-) / 2`` for atom 1 or 2 and mode ``'a'`` or ``'b'``."""
    if atom not in (1, 2) or mode not in ("a", "b"):
        raise InvalidParameterError("atom must be 1 or 2 and mode 'a' or 'b'")
    a = _annihilation(n_fock)
    idf = sp.identity(n_fock + 1, format="csr")
    field_op = (a, idf) if mode == "a" else (idf, a)
    atoms = (_SIGMA_PLUS, _ID2) if atom == 1 else (_ID2, _SIGMA_PLUS)
    absorb = _embed(*atoms, *field_op)
    op = 0.5 * (absorb + absorb.T)
    op.sort_indices()
    return op


@lru_cache(maxsize=None)
def photon_numbers(n_fock: int) -> tuple[np.ndarray, np.ndarray]:
    m = n_fock + 1
    na, nb = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    return np.tile(na.ravel(), 4).astype(float), np.tile(nb.ravel(), 4).astype(float)


@lru_cache(maxsize=None)
def _atom_coupling(atom: int, n_fock: int) -> sp.csr_matrix:
    op = (coupling_operator(atom, "a", n_fock) + coupling_operator(atom, "b", n_fock)).tocsr()
    op.sort_indices()
    return op


@dataclass(frozen=True)
class HamiltonianSpec:
    setup: PhysicalSetup
    scenario: CollisionScenario
    frame: str = "atomic"

    def __post_init__(self):
        if self.frame != "atomic":
            raise InvalidParameterError("only the frame rotating at the atomic frequency is supported")

    @property
    def n_fock(self) -> int:
        return self.scenario.n_fock_dyn

    @property
    def detunings(self) -> tuple[float, float]:
        return self.scenario.delta_a, self.scenario.delta_b(self.setup)

    @property
    def profiles(self) -> tuple[CouplingProfile, CouplingProfile]:
        om = self.setup.Omega if self.scenario.coupled else 0.0
        w = self.setup.w
        return CouplingProfile(om, self.scenario.v1, w), CouplingProfile(om, self.scenario.v2, w)

    @property
    def t_span(self) -> float:
        s = self.scenario
        return s.t_span if s.t_span is not None else WINDOW_WAISTS * self.setup.w / min(s.v1, s.v2)

    def free_diagonal(self) -> np.ndarray:
        na, nb = photon_numbers(self.n_fock)
        da, db = self.detunings
        return da * na + db * nb


def build_hamiltonian(spec: HamiltonianSpec, t: float) -> np.ndarray:
    """Dense ``H(t)/hbar`` (rad/s) on the full truncated space."""
    g1, g2 = (p(t) for p in spec.profiles)
    h = g1 * _atom_coupling(1, spec.n_fock) + g2 * _atom_coupling(2, spec.n_fock)
    return h.toarray().astype(np.complex128) + np.diag(spec.free_diagonal())


def excitation_operator(n_fock: int) -> np.ndarray:
    return np.diag(excitation_numbers(n_fock).astype(float))


# -- integration -------------------------------------------------------------


def _csr_parts(m: sp.csr_matrix):
    return m.indptr.astype(np.int64), m.indices.astype(np.int64), m.data.astype(np.complex128)


def integrate(
    diag: np.ndarray,
    couplings: tuple[sp.csr_matrix, sp.csr_matrix],
    profiles: tuple[CouplingProfile, CouplingProfile],
    psi0: np.ndarray,
    t_start: float,
    t_stop: float,
    n_steps: int,
) -> np.ndarray:
    """Classical RK4 for ``i dpsi/dt = (diag + g1(t) C1 + g2(t) C2) psi``.

    Runs ``n_steps`` equal steps from ``t_start`` to ``t_stop`` (which may be
    earlier than ``t_start``). No renormalization is applied.
    """
    if n_steps < 1:
        raise InvalidParameterError("n_steps must be >= 1")
    h = (t_stop - t_start) / n_steps
    c1, c2 = (sp.csr_matrix(c) for c in couplings)
    p1, p2 = profiles
    return rk4_gaussian(
        np.ascontiguousarray(psi0, dtype=np.complex128),
        np.ascontiguousarray(diag, dtype=np.complex128),
        *_csr_parts(c1),
        *_csr_parts(c2),
        float(p1.Omega), float(p1.rate), float(p2.Omega), float(p2.rate),
        float(t_start), float(h), int(n_steps),
    )


@lru_cache(maxsize=256)
def _block(n_fock: int, blocks: frozenset):
    idx = np.flatnonzero(np.isin(excitation_numbers(n_fock), sorted(blocks)))
    c1 = _atom_coupling(1, n_fock)[idx][:, idx].tocsr()
    c2 = _atom_coupling(2, n_fock)[idx][:, idx].tocsr()
    c1.sort_indices()
    c2.sort_indices()
    return idx, c1, c2


class PropagationResult(NamedTuple):
    final_state: StateVector
    norm_drift: float
    n_steps: int


def n_steps_for(spec: HamiltonianSpec) -> int:
    return max(1, math.ceil(round(2 * spec.t_span / spec.scenario.dt, 9)))


def propagate(spec: HamiltonianSpec, initial: StateVector, *, restrict: bool = True) -> PropagationResult:
    """Integrate from ``-t_span`` to ``+t_span`` with fixed-step RK4.

    The Hamiltonian conserves the excitation number, so two exact
    simplifications are made. By default only the excitation blocks occupied
    by ``initial`` are integrated (amplitudes elsewhere stay zero;
    ``restrict=False`` integrates the full space). Within each block the
    population-weighted mean of the free energy is subtracted from the
    diagonal and restored afterwards as an exact phase, so the step only has
    to resolve detuning differences and not ``delta * n``.
    """
    if initial.n_fock != spec.n_fock:
        raise InvalidParameterError("initial state truncation does not match the scenario")
    s = spec.scenario
    t_min = WINDOW_WAISTS * spec.setup.w / min(s.v1, s.v2)
    if spec.t_span < t_min * (1 - 1e-12):
        raise InvalidParameterError(f"t_span {spec.t_span:.3e} s is shorter than 4 w / v_min = {t_min:.3e} s")
    n_steps = n_steps_for(spec)
    psi0 = initial.amplitudes
    exc = excitation_numbers(spec.n_fock)
    diag = spec.free_diagonal()
    pop = np.abs(psi0) ** 2
    offset = np.zeros_like(diag)
    for n in np.unique(exc[pop > 0]):
        in_block = exc == n
        offset[in_block] = np.dot(pop[in_block], diag[in_block]) / pop[in_block].sum()
    if restrict:
        idx, c1, c2 = _block(spec.n_fock, frozenset(np.unique(exc[pop > 0]).tolist()))
    else:
        idx = np.arange(psi0.size)
        c1, c2 = _atom_coupling(1, spec.n_fock), _atom_coupling(2, spec.n_fock)
    t0, t1 = -spec.t_span, spec.t_span
    sub = integrate(diag[idx] - offset[idx], (c1, c2), spec.profiles, psi0[idx], t0, t1, n_steps)
    out = np.zeros_like(psi0)
    out[idx] = sub * np.exp(-1j * offset[idx] * (t1 - t0))
    final = StateVector(out, spec.n_fock)
    drift = final.norm**2 - initial.norm**2
    if not abs(drift) <= NORM_DRIFT_LIMIT:  # also catches overflow to nan
        raise IntegrationAccuracyError(drift, s.dt)
    return PropagationResult(final, drift, n_steps)


# -- collisions --------------------------------------------------------------


class CollisionRun(NamedTuple):
    rho: AtomPairDensity
    norm_drift: float
    included_weight: float


def _collide(scenario: CollisionScenario, setup: PhysicalSetup, field_fock: tuple[int, int]):
    na, nb = field_fock
    if max(na, nb) > scenario.n_fock_mix or min(na, nb) < 0:
        raise InvalidParameterError(f"field Fock state {field_fock} outside 0..{scenario.n_fock_mix}")
    spec = HamiltonianSpec(setup, scenario)
    initial = StateVector.basis(E, G, na, nb, scenario.n_fock_dyn)
    result = propagate(spec, initial)
    return partial_trace_field(result.final_state), result


def collide(scenario: CollisionScenario, setup: PhysicalSetup, field_fock: tuple[int, int] = (0, 0)) -> AtomPairDensity:
    """Atom pair after a crossing that starts in ``|e1, g2; na, nb>``."""
    return _collide(scenario, setup, field_fock)[0]


def thermal_weight(n: int, nbar: float) -> float:
    """Bose-Einstein probability of ``n`` photons at mean occupation ``nbar``."""
    if n < 0 or nbar < 0:
        raise InvalidParameterError("n and nbar must be non-negative")
    return nbar**n / (1 + nbar) ** (n + 1)


def run_thermal_collision(scenario: CollisionScenario, setup: PhysicalSetup) -> CollisionRun:
    """Thermal-mixture average of Fock-seeded collisions, with diagnostics.

    Seeds are summed in fixed ``(na, nb)`` order and the result is divided by
    the included weight mass.
    """
    weights = [thermal_weight(n, scenario.nbar) for n in range(scenario.n_fock_mix + 1)]
    rho = np.zeros((4, 4), dtype=np.complex128)
    total = 0.0
    drift = 0.0
    for na, wa in enumerate(weights):
        for nb, wb in enumerate(weights):
            p = wa * wb
            if p == 0:
                continue
            r, res = _collide(scenario, setup, (na, nb))
            rho += p * r.rho
            total += p
            drift = max(drift, abs(res.norm_drift))
    return CollisionRun(AtomPairDensity(rho / total), drift, total)


def collide_thermal(scenario: CollisionScenario, setup: PhysicalSetup) -> AtomPairDensity:
    return run_thermal_collision(scenario, setup).rho
