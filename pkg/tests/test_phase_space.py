from __future__ import annotations

import cmath
import math

import numpy as np
import pytest

from ramsey_lgi.errors import ArgumentError
from ramsey_lgi.phase_space import (
    Cat,
    Coherent,
    Ground,
    Thermal,
    as_amp,
    characteristic,
    coherent_overlap,
    compose_displacements,
    expect_displacement,
    is_hermitian_family,
    modular_variable_expectation,
    state_from_dict,
    superposition_norm,
)


def test_compose_two_displacements_picks_up_commutator_phase():
    a, b = 0.4 - 0.3j, -1.2 + 0.7j
    product = compose_displacements([a, b])
    assert product.total_amp == pytest.approx(a + b)
    assert product.accumulated_phase == pytest.approx((b * a.conjugate()).imag)


def test_compose_is_a_left_fold():
    amps = [0.3 + 0.1j, -0.5j, 1.0, 0.2 - 0.9j]
    product = compose_displacements(amps)
    total, phase = amps[0], 0.0
    for amp in amps[1:]:
        phase += (amp * total.conjugate()).imag
        total += amp
    assert product.total_amp == pytest.approx(total)
    assert product.accumulated_phase == pytest.approx(phase)


def test_compose_single_and_empty():
    product = compose_displacements([1 + 1j])
    assert product.total_amp == 1 + 1j
    assert product.accumulated_phase == 0.0
    with pytest.raises(ArgumentError):
        compose_displacements([])


def test_ground_and_thermal_characteristic():
    assert expect_displacement(Ground(), 1.0) == pytest.approx(math.exp(-0.5))
    assert expect_displacement(Thermal(1.0), 1.0) == pytest.approx(math.exp(-1.5))
    assert expect_displacement(Thermal(0.0), 0.7j) == pytest.approx(expect_displacement(Ground(), 0.7j))


def test_coherent_characteristic_carries_a_phase():
    value = expect_displacement(Coherent(1j), 1.0)
    assert value == pytest.approx(math.exp(-0.5) * cmath.exp(-2j))


def test_single_component_cat_matches_coherent():
    amp = 0.8 - 0.4j
    cat = Cat.normalized([(1.0, amp)])
    betas = np.array([0.0, 0.5 + 0.5j, -1.3 + 0.2j])
    assert characteristic(cat, betas) == pytest.approx(characteristic(Coherent(amp), betas))


def test_characteristic_is_vectorized_over_shape():
    betas = np.linspace(-1, 1, 6).reshape(2, 3) + 0.5j
    values = characteristic(Thermal(0.5), betas)
    assert values.shape == (2, 3)
    assert values[1, 2] == pytest.approx(expect_displacement(Thermal(0.5), betas[1, 2]))


def test_cat_normalization():
    cat = Cat.normalized([(1.0, 0j), (1j, 2.0 + 1.0j)])
    assert superposition_norm(cat.weights, cat.amps) == pytest.approx(1.0)
    with pytest.raises(ArgumentError):
        Cat(((1.0, 0j), (1.0, 3.0)))
    with pytest.raises(ArgumentError):
        Cat.normalized([(1.0, 0.5), (-1.0, 0.5)])


def test_coherent_overlap_modulus():
    a, b = 0.3 + 1.1j, -0.7 + 0.2j
    assert abs(coherent_overlap(a, b)) ** 2 == pytest.approx(math.exp(-abs(a - b) ** 2))


def test_modular_variable_on_vacuum():
    assert modular_variable_expectation(Ground(), 0.9, 1.5j) == pytest.approx(
        math.cos(0.9) * math.exp(-0.5 * 2.25)
    )


def test_state_dict_round_trip():
    cat = Cat.normalized([(1.0, 0j), (cmath.exp(0.3j), 1.0 - 2.0j)])
    restored = state_from_dict(cat.to_dict())
    assert restored.amps == pytest.approx(cat.amps)
    assert restored.weights == pytest.approx(cat.weights)
    assert state_from_dict(Thermal(0.25).to_dict()) == Thermal(0.25)
    with pytest.raises(ArgumentError):
        state_from_dict({"kind": "squeezed"})


def test_amplitude_coercion():
    assert as_amp([1.0, -2.0]) == 1 - 2j
    with pytest.raises(ArgumentError):
        as_amp(complex(math.inf, 0))
    with pytest.raises(ArgumentError):
        Thermal(-0.1)


def test_hermitian_family():
    assert is_hermitian_family(Ground())
    assert is_hermitian_family(Thermal(2.0))
    assert not is_hermitian_family(Coherent(0.5))


def test_characteristic_conjugate_symmetry(rng):
    states = [Ground(), Thermal(0.6), Thermal(3.0), Coherent(0.7 - 0.2j),
              Cat.normalized([(1.0, 1.0 + 0.5j), (1.0, -1.0 - 0.5j)])]
    betas = rng.normal(size=100) + 1j * rng.normal(size=100)
    for state in states:
        forward = characteristic(state, betas)
        backward = characteristic(state, -betas)
        assert np.allclose(backward, np.conj(forward), atol=1e-12)
        if is_hermitian_family(state):
            for beta in betas[:10]:
                value = expect_displacement(state, complex(beta))
                assert expect_displacement(state, -complex(beta)) == pytest.approx(value.conjugate(), abs=1e-12)
                assert abs(value.imag) < 1e-12
