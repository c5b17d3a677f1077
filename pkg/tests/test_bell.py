import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bellsel import bell
from bellsel.errors import (
    DatasetFormatError, DegeneratePosteriorError, EmptyDatasetError, EmptySelectionError, InvalidPolicyError,
    PreconditionError,
)
from bellsel.quantum import InitialLabel


@pytest.mark.parametrize("kind,eq,ne", [("v1", 1.0, 0.25), ("v2", 0.0, 0.75), ("bigv", 0.5, 0.5)])
def test_closed_form_rates(kind, eq, ne):
    rates = bell.same_outcome_rates(bell.closed_form_table(kind))
    assert rates["P(A=B|a=b)"] == pytest.approx(eq, abs=1e-12)
    assert rates["P(A=B|a!=b)"] == pytest.approx(ne, abs=1e-12)


@pytest.mark.parametrize("label,kind", [("I1", "v1"), ("I2", "v2")])
def test_kernel_agrees_with_closed_form(label, kind):
    assert bell.kernel_table(label).max_abs_diff(bell.closed_form_table(kind)) < 1e-12


def test_kernel_follows_nonuniform_policy():
    pol = np.arange(1, 10, dtype=float).reshape(3, 3) / 45
    assert bell.kernel_table("I2", policy=pol).max_abs_diff(bell.closed_form_table("v2", pol)) < 1e-12


@pytest.mark.parametrize("policy", [np.ones((2, 2)) / 4, np.zeros((3, 3)), np.full((3, 3), 0.2)])
def test_invalid_policies(policy):
    with pytest.raises(InvalidPolicyError):
        bell.setting_policy(policy)


def test_experiment_kind_parse():
    assert bell.ExperimentKind.parse("BIG-V") is bell.ExperimentKind.BIGV
    with pytest.raises(ValueError):
        bell.ExperimentKind.parse("v3")


def test_posteriors_and_locked_table():
    bigv = bell.closed_form_table("bigv")
    assert bell.posterior_initial(bigv, "unequal", "equal") == pytest.approx((0.25, 0.75), abs=1e-12)
    with pytest.raises(DegeneratePosteriorError):
        bell.posterior_initial(bell.closed_form_table("v1"), "equal", "equal")
    with pytest.raises(ValueError):
        bell.posterior_initial(bigv, "same", "equal")


def test_preselect_table_metadata():
    sel = bell.preselect(bell.closed_form_table("bigv"), "I2")
    assert sel.metadata["locked"] == "I2"
    assert sel.metadata["preselection"]["retained_mass"] == pytest.approx(0.5)
    assert sel.metadata["preselection"]["renormalization_factor"] == pytest.approx(2.0)
    with pytest.raises(EmptySelectionError):
        bell.preselect(bell.closed_form_table("v1"), "I2")


def test_preselect_dataset():
    data = bell.sample_trials("bigv", 2000, 1)
    sel = bell.preselect(data, InitialLabel.I1)
    assert np.all(sel.I == 1) and 0 < len(sel) < len(data)
    with pytest.raises(PreconditionError):
        bell.preselect(data.masked(), "I1")


def test_sampling_is_seeded_and_worker_independent():
    a = bell.sample_trials("bigv", 140_000, 3, workers=1)
    b = bell.sample_trials("bigv", 140_000, 3, workers=3)
    c = bell.sample_trials("bigv", 140_000, 4)
    assert a == b
    assert not a == c


def test_sampling_never_produces_impossible_trials():
    data = bell.sample_trials("v1", 50_000, 9)
    eq = data.a == data.b
    assert np.all(data.A[eq] == data.B[eq])


def test_sampling_requires_trials():
    with pytest.raises(EmptyDatasetError):
        bell.sample_trials("v1", 0, 1)


def test_csv_round_trip_and_masking(tmp_path):
    data = bell.sample_trials("bigv", 500, 2)
    path = tmp_path / "d.csv"
    data.to_csv(path)
    assert bell.read_csv(path) == data
    masked = bell.read_csv(io.StringIO(data.masked().to_csv_text()))
    assert not masked.has_initial and len(masked) == 500


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("a,b\n", 1),
    ("trial,a,b,A,B,I\n0,0,0,0,0,1\n1,0,0,0\n", 3),
    ("trial,a,b,A,B,I\n0,0,x,0,0,1\n", 2),
    ("trial,a,b,A,B,I\n0,0,0,0,0,1\n5,0,0,0,0,1\n", 3),
    ("trial,a,b,A,B,I\n0,3,0,0,0,1\n", 2),
    ("trial,a,b,A,B,I\n0,0,0,0,0,1\n1,0,0,0,0,\n", 3),
    ("trial,a,b,A,B,I\n0,0,0,0,0,7\n", 2),
])
def test_csv_errors_carry_line_numbers(text, line):
    with pytest.raises(DatasetFormatError) as info:
        bell.read_csv(io.StringIO(text))
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_records_iteration():
    data = bell.sample_trials("v2", 10, 5)
    recs = data.records
    assert recs[3].trial == 3 and recs[3].i is InitialLabel.I2


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(min_value=0.05, max_value=1.0), min_size=9, max_size=9))
def test_bigv_stays_pairwise_independent_for_product_policies(weights):
    # a product policy keeps the settings independent, so every pair stays independent
    pa = np.array(weights[:3]) / sum(weights[:3])
    pb = np.array(weights[3:6]) / sum(weights[3:6])
    pol = np.outer(pa, pb)
    pol = pol / pol.sum()
    t = bell.closed_form_table("bigv", pol)
    for x, y in [("a", "A"), ("a", "B"), ("b", "A"), ("b", "B"), ("A", "B"), ("a", "b")]:
        assert t.mutual_information(x, y) < 1e-12
