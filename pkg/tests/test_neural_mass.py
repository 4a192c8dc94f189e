"""Neural mass plant, observer field and diagnostics"""

import numpy as np
import pytest

from src.models.scenario import GainsSpec, ModelSpec, Scenario
from src.services.diagnostics import contraction_check, pe_diagnostic
from src.services.neural_mass import NeuralMassModel

P_TRUE = np.array([5.0, 25.0])


@pytest.fixture
def model():
    return NeuralMassModel()


@pytest.fixture
def state():
    return np.array([0.02, -0.3, 1.4, 0.7, -0.9, 0.2])


class TestSigmoid:
    def test_midpoint(self, model):
        assert model.sigmoid(6.0) == 2.5

    def test_saturation(self, model):
        assert model.sigmoid(100.0) > 4.999
        assert model.sigmoid(-100.0) < 1e-6

    def test_monotone(self, model):
        values = model.sigmoid(np.linspace(-20.0, 30.0, 500))
        assert np.all(np.diff(values) >= 0)

    def test_steepest_at_threshold(self, model):
        h = 1e-6

        def slope(v):
            return (model.sigmoid(v + h) - model.sigmoid(v - h)) / (2 * h)

        assert slope(6.0) == pytest.approx(0.7, rel=1e-6)
        assert slope(5.0) < slope(6.0)
        assert slope(7.0) < slope(6.0)


def test_output_is_x21_minus_x31(model, state):
    assert model.output(state) == pytest.approx(1.4 + 0.9)


def test_field_matches_state_space_matrices(model, state):
    u, y = 3.0, 0.7
    m = model.matrices(P_TRUE)
    fire = model.sigmoid(m["H"] @ state)
    phi = np.array([model.sigmoid(y), u])
    expected = m["A"] @ state + m["G"] @ fire + m["B"] @ phi
    actual = model.observer_field(state, P_TRUE, u, y, GainsSpec())
    np.testing.assert_allclose(actual, expected, rtol=1e-12, atol=1e-9)


def test_output_injection_enters_linearly(model, state):
    gains = GainsSpec(L=[1.0, 2.0, 3.0, 4.0, 5.0, 6.0], K=[0.0, 0.0])
    y = model.output(state) + 0.5
    with_gain = model.observer_field(state, P_TRUE, 0.0, y, gains)
    without = model.observer_field(state, P_TRUE, 0.0, y, GainsSpec())
    np.testing.assert_allclose(
        with_gain - without, 0.5 * np.array(gains.L), rtol=1e-9
    )


def test_matched_observer_equals_plant(model, state):
    gains = GainsSpec(L=[1.0] * 6, K=[0.3, -0.2])
    y = model.output(state)
    np.testing.assert_array_equal(
        model.observer_field(state, P_TRUE, 2.0, y, gains),
        model.plant_field(state, P_TRUE, 2.0),
    )


def test_zero_gain_observer_uses_measured_output(model, state):
    y = 0.25
    observer = model.observer_field(state, P_TRUE, 1.0, y, GainsSpec())
    plant = model.plant_field(state, P_TRUE, 1.0)
    feedback_shift = P_TRUE[0] * model.a * (
        model.sigmoid(y) - model.sigmoid(model.output(state))
    )
    assert observer[1] - plant[1] == pytest.approx(feedback_shift)
    np.testing.assert_array_equal(np.delete(observer, 1), np.delete(plant, 1))


def test_bank_row_matching_plant_is_exact(model, state):
    params = np.vstack([P_TRUE, P_TRUE, [3.0, 23.0]])
    field = model.bank_vector_field(params, GainsSpec())
    z = np.vstack([state, state, state * 0.5])
    dz = field(z, 0.0, 7.0)
    np.testing.assert_array_equal(dz[1], dz[0])
    assert not np.array_equal(dz[2], dz[0])


def test_input_entry_switch():
    default = NeuralMassModel().matrices([4.0, 24.0])["B"]
    switched = NeuralMassModel(ModelSpec(b_row4_uses_p2=True)).matrices(
        [4.0, 24.0]
    )["B"]
    assert default[3, 1] == 4.0 * 100.0
    assert switched[3, 1] == 24.0 * 100.0


def test_matched_observer_contracts():
    report = contraction_check(Scenario())
    assert report.settled
    assert not report.bound_flagged
    assert report.final_error <= 1e-3 * report.initial_error


def test_pe_energy_separates_mismatched_parameters():
    rows = pe_diagnostic(
        Scenario(),
        mismatches=[[0.0, 0.0], [2.0, 0.0], [0.0, 2.0]],
        window=0.5,
        horizon=1.0,
    )
    assert rows[0].min_energy == 0.0
    assert rows[1].min_energy > 1e-6
    assert rows[2].min_energy > 1e-6
    assert rows[1].mismatch_norm == 2.0
