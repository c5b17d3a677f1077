import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bellsel import quantum
from bellsel.errors import InvalidStateError
from bellsel.quantum import InitialLabel, StateVector, correlation_e, make_state, outcome_distribution

angles = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)


@pytest.mark.parametrize("label", list(InitialLabel))
def test_states_are_normalized(label):
    assert make_state(label).is_normalized()


def test_label_parsing():
    assert InitialLabel.parse("I1") is InitialLabel.I1
    assert InitialLabel.parse("2") is InitialLabel.I2
    assert InitialLabel.parse(1) is InitialLabel.I1
    with pytest.raises(ValueError):
        InitialLabel.parse("I3")


def test_projectors_are_complete_and_idempotent():
    for alpha in (0.0, 1.0, 2 * math.pi / 3):
        p0 = quantum.measurement_projector(alpha, 0)
        p1 = quantum.measurement_projector(alpha, 1)
        np.testing.assert_allclose(p0 + p1, np.eye(2), atol=1e-15)
        np.testing.assert_allclose(p0 @ p0, p0, atol=1e-15)


def test_equal_settings_limits():
    # I1 always agrees at equal settings, the singlet always disagrees
    p1 = outcome_distribution(make_state("I1"), 0.7, 0.7)
    p2 = outcome_distribution(make_state("I2"), 0.7, 0.7)
    assert p1[0, 0] + p1[1, 1] == pytest.approx(1.0, abs=1e-12)
    assert p2[0, 1] + p2[1, 0] == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(angles, angles)
def test_correlation_matches_cosine(alpha, beta):
    assert correlation_e(make_state("I1"), alpha, beta) == pytest.approx(math.cos(alpha - beta), abs=1e-12)
    assert correlation_e(make_state("I2"), alpha, beta) == pytest.approx(-math.cos(alpha - beta), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(angles, angles)
def test_marginals_are_fair(alpha, beta):
    for label in InitialLabel:
        p = outcome_distribution(make_state(label), alpha, beta)
        assert p.sum() == pytest.approx(1.0, abs=1e-12)
        np.testing.assert_allclose(p.sum(axis=0), [0.5, 0.5], atol=1e-12)
        np.testing.assert_allclose(p.sum(axis=1), [0.5, 0.5], atol=1e-12)


def test_unnormalized_state_rejected():
    with pytest.raises(InvalidStateError):
        quantum.joint_outcome_probability(StateVector((1, 1, 0, 0)), 0.0, 0.0, 0, 0)


def test_bad_amplitude_count_and_outcome():
    with pytest.raises(InvalidStateError):
        StateVector((1, 0, 0))
    with pytest.raises(ValueError):
        quantum.joint_outcome_probability(make_state("I1"), 0.0, 0.0, 2, 0)


def test_direction_wraps():
    assert quantum.MeasurementDirection(2 * math.pi + 0.5).azimuth == pytest.approx(0.5)
