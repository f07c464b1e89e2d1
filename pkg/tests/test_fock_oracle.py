from __future__ import annotations

import math

import numpy as np
import pytest

from ramsey_lgi.decoherence import BathParams, cat_wigner, decayed_closed_form, measurement_window_expectation
from ramsey_lgi.errors import ArgumentError, CapacityError, TruncationError
from ramsey_lgi.fock_oracle import (
    FockDensity,
    adequate_dim,
    annihilation,
    build_displacement,
    coherent_vector,
    conditional_amplitudes,
    density_from_state,
    evolve_sequence,
    half_pi_pulse,
    kraus_completeness_error,
    kraus_measure,
    lindblad_propagate,
    number,
    oracle_correlate_kicks,
    oracle_correlation,
    request_dimension,
    window_expectation_lindblad,
    wigner_displaced_parity,
)
from ramsey_lgi.output import GridSpec
from ramsey_lgi.phase_space import Cat, Coherent, Ground, Thermal
from ramsey_lgi.pulses import PulseSchedule, Segment, SystemParams, resonant_train, resonant_train_amplitude
from ramsey_lgi.ramsey import (
    CorrelationRequest,
    MeasurementSpec,
    correlation,
    kick_for,
    outcome_probabilities,
    static_kick,
)

DIM = 40


def test_ladder_operators():
    a = annihilation(6)
    assert np.allclose((a.conj().T @ a), number(6))
    assert np.allclose((a @ a.conj().T - a.conj().T @ a)[:5, :5], np.eye(5))
    with pytest.raises(ArgumentError):
        annihilation(1)


def test_adequate_dimension():
    assert adequate_dim(0.0) == 20
    assert adequate_dim(1.0) == 31
    assert adequate_dim(-2.5) == 52


def test_displacement_builds_coherent_states():
    alpha = 1.0 + 0.5j
    displacement = build_displacement(DIM, alpha)
    vacuum = np.zeros(DIM, dtype=complex)
    vacuum[0] = 1.0
    assert np.max(np.abs(displacement.matrix @ vacuum - coherent_vector(alpha, DIM))) < 1e-10
    assert displacement.unitarity_error() < 1e-10
    with pytest.raises(TruncationError) as excinfo:
        build_displacement(20, alpha)
    assert excinfo.value.required_dim == adequate_dim(abs(alpha))


def test_thermal_density_needs_enough_levels():
    rho = density_from_state(Thermal(1.0), DIM)
    assert rho.trace == pytest.approx(1.0)
    assert rho.mean_number == pytest.approx(1.0, abs=1e-8)
    assert rho.validate() is rho
    with pytest.raises(TruncationError):
        density_from_state(Thermal(1.0), 20)


def test_pure_states_have_unit_purity():
    cat = Cat.normalized([(1.0, 0j), (-1.0, 1.2j)])
    for state in (Ground(), Coherent(0.7 - 0.2j), cat):
        assert density_from_state(state, DIM).purity == pytest.approx(1.0)


def test_validate_rejects_non_hermitian():
    matrix = np.diag([1.0, 0.0]).astype(complex)
    matrix[0, 1] = 0.2
    with pytest.raises(ArgumentError):
        FockDensity(matrix).validate()
    with pytest.raises(ArgumentError):
        FockDensity(np.zeros((2, 3)))


def test_kraus_operators_are_complete(params, static_spec):
    assert kraus_completeness_error(static_spec(phi=0.4), params, DIM) < 1e-10


def test_kraus_probabilities_match_analytic(params, static_spec):
    spec = static_spec(phi=0.4)
    state = Thermal(0.5)
    outcome = kraus_measure(density_from_state(state, DIM), spec, params)
    p_plus, p_minus = outcome_probabilities(state, spec, params)
    assert outcome.p_plus == pytest.approx(p_plus, abs=1e-9)
    assert outcome.p_minus == pytest.approx(p_minus, abs=1e-9)
    assert outcome.rho_plus.trace == pytest.approx(1.0)


def test_physical_sequence_reproduces_kraus(params, static_spec):
    spec = static_spec(phi=1.3)
    rho = density_from_state(Ground(), DIM)
    joint = evolve_sequence(rho, spec, params)
    assert joint.probability(excited=True) == pytest.approx(kraus_measure(rho, spec, params).p_plus, abs=1e-9)
    assert joint.probability(True) + joint.probability(False) == pytest.approx(1.0)


def test_physical_sequence_reproduces_kraus_on_detuned_schedules(rng):
    params = SystemParams(1.0, 0.3)
    rho = density_from_state(Coherent(0.4 - 0.2j), DIM)
    for _ in range(5):
        segments = []
        for _ in range(4):
            fe = int(rng.integers(0, 2))
            segments.append(Segment(float(rng.uniform(0.2, 1.5)), fe, 1 - fe, float(rng.uniform(-0.5, 0.5))))
        schedule = PulseSchedule(tuple(segments))
        spec = MeasurementSpec.from_schedule(float(rng.uniform(0.0, 2.0 * math.pi)), schedule.duration, schedule)
        joint = evolve_sequence(rho, spec, params)
        outcome = kraus_measure(rho, spec, params)
        assert joint.probability(excited=True) == pytest.approx(outcome.p_plus, abs=1e-9)
        assert joint.probability(excited=False) == pytest.approx(outcome.p_minus, abs=1e-9)


def test_half_pi_pulse_is_unitary():
    pulse = half_pi_pulse(0.7)
    assert np.allclose(pulse.conj().T @ pulse, np.eye(2))


@pytest.mark.parametrize("state", [Ground(), Thermal(0.5), Coherent(0.3 + 0.4j)])
def test_oracle_agrees_with_analytic_two_time(params, static_spec, state):
    request = CorrelationRequest((static_spec(phi=0.3), static_spec(phi=-1.0, t_end=2.5 * math.pi)), state)
    assert oracle_correlation(request, params, dim=DIM) == pytest.approx(correlation(request, params), abs=1e-8)


def test_oracle_agrees_with_analytic_three_time(static_spec):
    params = SystemParams(1.0, 0.4)
    specs = (static_spec(phi=0.2), static_spec(phi=1.0, t_end=7.0), static_spec(phi=-0.6, t_end=11.3))
    request = CorrelationRequest(specs, Thermal(0.3))
    assert oracle_correlation(request, params, dim=DIM) == pytest.approx(correlation(request, params), abs=1e-8)


def test_oracle_capacity(params, static_spec):
    specs = tuple(static_spec(t_end=(2 * k + 1) * math.pi) for k in range(5))
    with pytest.raises(CapacityError):
        oracle_correlation(CorrelationRequest(specs, Ground()), params, dim=DIM)


def test_request_dimension(params, static_spec):
    request = CorrelationRequest((static_spec(), static_spec(t_end=3 * math.pi)), Ground())
    reach = sum(abs(kick_for(s, params).alpha) for s in request.specs) + 4.0
    assert request_dimension(request, params) == adequate_dim(reach)
    assert request_dimension(request, params, BathParams(0.1, 1.0)) > adequate_dim(reach)


@pytest.mark.parametrize("state", [Ground(), Thermal(0.5), Coherent(0.6 - 0.3j)])
def test_oracle_converges_when_the_dimension_doubles(params, state):
    schedule = PulseSchedule((Segment(0.9, 1, 0, 0.2), Segment(1.3, 0, 1)))
    specs = (MeasurementSpec.from_schedule(0.4, schedule.duration, schedule),
             MeasurementSpec.from_schedule(-1.1, 2.0 * schedule.duration + 0.5, schedule))
    request = CorrelationRequest(specs, state)
    dim = request_dimension(request, params)
    adaptive = oracle_correlation(request, params)
    doubled = oracle_correlation(request, params, dim=2 * dim)
    assert adaptive == pytest.approx(doubled, abs=1e-8)
    assert doubled == pytest.approx(correlation(request, params), abs=1e-8)


def test_amplification_by_evolution():
    params = SystemParams(1.0, 0.1)
    schedule = resonant_train(params, 2)
    amp_e, amp_g = conditional_amplitudes(params, schedule, 60)
    assert abs((amp_e - amp_g) - resonant_train_amplitude(params, 2)) < 1e-6


def test_thermal_state_is_stationary_under_damping():
    rho = density_from_state(Thermal(1.0), DIM)
    out = lindblad_propagate(rho, 2.0, SystemParams(1.0, 0.0), BathParams(0.05, 1.0))
    assert np.max(np.abs(out.matrix - rho.matrix)) < 1e-8


def test_coherent_amplitude_decays():
    params = SystemParams(1.0, 0.0)
    bath = BathParams(0.1, 0.0)
    rho = density_from_state(Coherent(1.5), DIM)
    a = annihilation(DIM)
    rotating = lindblad_propagate(rho, 3.0, params, bath, rotating_frame=True)
    assert rotating.expect(a) == pytest.approx(1.5 * math.exp(-0.15), abs=1e-7)
    lab = lindblad_propagate(rho, 3.0, params, bath)
    assert lab.expect(a) == pytest.approx(1.5 * math.exp(-0.15) * np.exp(-3j), abs=1e-7)
    with pytest.raises(ArgumentError):
        lindblad_propagate(rho, -1.0, params, bath)


def test_damped_kicks_match_closed_form():
    alpha1, alpha2 = 0.5 + 0.5j, 0.7j
    bath = BathParams(0.05, 0.5)
    rho = density_from_state(Ground(), DIM)
    kicks = [static_kick(alpha1, 0.3), static_kick(alpha2, -0.2)]
    oracle = oracle_correlate_kicks(kicks, rho, SystemParams(1.0, 0.0), bath, [2.0])
    analytic = decayed_closed_form(alpha1, alpha2, 0.3, -0.2, Ground(), 2.0, bath)
    assert oracle == pytest.approx(analytic, abs=1e-6)
    with pytest.raises(ArgumentError):
        oracle_correlate_kicks(kicks, rho, bath=bath)


@pytest.mark.slow
def test_window_decoherence_matches_master_equation(params, static_spec):
    spec = static_spec(phi=0.3)
    bath = BathParams(0.02, 0.5)
    analytic = measurement_window_expectation(spec, params, bath, Thermal(0.5))
    assert window_expectation_lindblad(spec, params, bath, DIM) == pytest.approx(analytic, abs=1e-6)


def test_vacuum_wigner_function():
    grid = (GridSpec(-1.0, 1.0, 5), GridSpec(-1.0, 1.0, 5))
    wigner = wigner_displaced_parity(density_from_state(Ground(), DIM), grid)
    x, p = np.meshgrid(wigner.x, wigner.p)
    assert np.max(np.abs(wigner.values - 2.0 / math.pi * np.exp(-2.0 * (x ** 2 + p ** 2)))) < 1e-8
    assert wigner.meta["engine"] == "oracle"


def test_cat_wigner_matches_displaced_parity():
    alpha1 = 1.0 + 1.0j
    grid = (GridSpec(-1.5, 2.5, 5), GridSpec(-1.5, 2.5, 5))
    rho = density_from_state(Cat.normalized([(1.0, 0j), (1.0, alpha1)]), 80)
    oracle = wigner_displaced_parity(rho, grid)
    analytic = cat_wigner(alpha1, 0.0, None, 0.0, BathParams(0.0, 0.0), grid)
    assert np.max(np.abs(oracle.values - analytic.values)) < 1e-6
