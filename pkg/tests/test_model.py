import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cavity_collision.model import (
    E,
    G,
    AtomPairDensity,
    CollisionScenario,
    InvalidParameterError,
    PhysicalConstants,
    PhysicalSetup,
    StateVector,
    decode_index,
    dimension,
    entangled_pair,
    excitation_numbers,
    flat_index,
    joint_probabilities,
    partial_trace_field,
    v0_effective,
)


def test_alpha_matches_rounded_value():
    k = PhysicalConstants()
    assert k.alpha == pytest.approx(1 / 137, rel=1e-3)


def test_derived_chain():
    s = PhysicalSetup()
    k = s.constants
    assert s.D_eg == pytest.approx(k.q * 0.53e-10 * 51**2 / 2)
    assert s.E0 == pytest.approx(1.57e-3, rel=0.01)
    assert 49e3 <= s.Omega / (2 * math.pi) <= 53e3
    # hand-evaluated chain: D_eg = 1.10432e-26 C m, E0 = 1.56815e-3 V/m
    assert s.D_eg == pytest.approx(1.10432e-26, rel=1e-5)
    assert s.E0 == pytest.approx(1.56815e-3, rel=1e-5)
    assert s.Omega / (2 * math.pi) == pytest.approx(52270.6, rel=1e-5)


@pytest.mark.parametrize(
    "v1, v2, expected",
    [
        # sqrt((300^2 + 243^2) / 2) = sqrt(74524.5)
        (300.0, 243.0, 272.99176),
        (500.0, 319.0, 419.38109),
        (250.0, 250.0, 250.0),
    ],
)
def test_v0_effective(v1, v2, expected):
    assert v0_effective(v1, v2) == pytest.approx(expected, rel=1e-7)


@pytest.mark.parametrize("v1, v2", [(0, 100), (100, -1)])
def test_v0_rejects_non_positive(v1, v2):
    with pytest.raises(InvalidParameterError):
        v0_effective(v1, v2)


def test_scenario_invariants():
    with pytest.raises(InvalidParameterError):
        CollisionScenario(v1=200, v2=300)
    with pytest.raises(InvalidParameterError):
        CollisionScenario(delta_a=-1.0)
    with pytest.raises(InvalidParameterError):
        CollisionScenario(n_fock_mix=3, n_fock_dyn=4)
    s = CollisionScenario()
    assert s.delta_b(PhysicalSetup()) == pytest.approx(2 * math.pi * (470e3 + 128e3))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 6), st.data())
def test_flat_index_round_trip(n_fock, data):
    k = data.draw(st.integers(0, dimension(n_fock) - 1))
    assert flat_index(*decode_index(k, n_fock), n_fock) == k


def test_flat_index_layout():
    assert flat_index(E, E, 0, 0, 5) == 0
    assert flat_index(E, G, 0, 0, 5) == 36
    assert flat_index(G, G, 5, 5, 5) == 143
    assert flat_index(E, G, 1, 2, 5) == 36 + 6 + 2
    exc = excitation_numbers(5)
    assert exc[flat_index(E, E, 2, 3, 5)] == 7
    assert exc[flat_index(G, G, 0, 0, 5)] == 0


def test_partial_trace_product_state():
    rho = partial_trace_field(StateVector.basis(E, G, 0, 0, 3))
    np.testing.assert_allclose(rho.rho, np.diag([0, 1, 0, 0]), atol=1e-15)


def test_partial_trace_bell_state_empty_field():
    psi = StateVector.superposition([(1, (E, G, 0, 0)), (1, (G, E, 0, 0))], 3)
    rho = partial_trace_field(psi)
    assert rho.rho[1, 2] == pytest.approx(0.5)
    assert np.linalg.matrix_rank(rho.rho, tol=1e-10) == 1


def test_orthogonal_field_records_destroy_coherence():
    psi = StateVector.superposition([(1, (E, G, 0, 0)), (1, (G, E, 1, 0))], 3)
    rho = partial_trace_field(psi)
    np.testing.assert_allclose(rho.rho, np.diag([0, 0.5, 0.5, 0]), atol=1e-15)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_partial_trace_preserves_trace(seed):
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=dimension(3)) + 1j * rng.normal(size=dimension(3))
    psi = StateVector(amps / np.linalg.norm(amps), 3)
    rho = partial_trace_field(psi)
    assert rho.trace == pytest.approx(psi.norm**2, abs=1e-12)
    rho.check()


@pytest.mark.parametrize(
    "theta, expected",
    [(0.0, (0, 1, 0, 0)), (math.pi / 4, (0, 0.5, 0.5, 0)), (math.pi / 2, (0, 0, 1, 0))],
)
def test_joint_probabilities_of_mixed_pair(theta, expected):
    np.testing.assert_allclose(joint_probabilities(entangled_pair(theta)), expected, atol=1e-15)


@given(st.floats(0, math.pi), st.floats(-math.pi, math.pi))
def test_populations_do_not_depend_on_phase(theta, phase):
    a = joint_probabilities(entangled_pair(theta, phase))
    b = joint_probabilities(entangled_pair(theta, 0.0))
    np.testing.assert_allclose(a, b, atol=1e-14)


def test_density_check_rejects_bad_matrices():
    with pytest.raises(InvalidParameterError):
        AtomPairDensity(np.diag([0.5, 0.5, 0.5, 0])).check()
    with pytest.raises(InvalidParameterError):
        AtomPairDensity(np.diag([1.5, -0.5, 0, 0])).check()
    with pytest.raises(InvalidParameterError):
        AtomPairDensity(np.eye(3))


def test_state_vector_is_immutable():
    psi = StateVector.basis(E, G, 0, 0, 2)
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 1
