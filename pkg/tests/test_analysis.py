import math

import numpy as np
import pytest

from bellsel import analysis, bell, scm
from bellsel.errors import ArgumentError, ConstraintTargetError, PreconditionError, UnknownVariableError
from bellsel.quantum import InitialLabel


def test_g2_detects_bell_dependence_and_accepts_independence():
    data = bell.sample_trials("bigv", 100_000, 7)
    assert analysis.g2_ci_test(data, "a", "B").verdict == "independent"
    v1 = bell.preselect(data, "I1")
    res = analysis.g2_ci_test(v1, "A", "B", ("a", "b"))
    assert res.dependent and res.dof == 9


def test_g2_reduced_dof_on_degenerate_strata():
    # a V1 dataset never visits the I=2 stratum
    data = bell.sample_trials("v1", 20_000, 2)
    res = analysis.g2_ci_test(data, "a", "A", ("I",))
    assert res.reduced_dof and res.dof == 2


def test_g2_argument_checks():
    data = bell.sample_trials("v1", 100, 2)
    with pytest.raises(ArgumentError):
        analysis.g2_ci_test(data, "a", "a")
    with pytest.raises(ArgumentError):
        analysis.g2_ci_test(data, "a", "b", alpha=1.5)
    d = analysis.g2_ci_test(data, "a", "b").to_dict()
    assert set(d) >= {"x", "y", "given", "statistic", "dof", "p", "verdict"}


def test_no_signalling_flags_a_signalling_table():
    probs = np.zeros((3, 3, 2, 2, 2))
    for a in range(3):
        for b in range(3):
            probs[a, b, 0, int(b == 0), 0] = 1 / 9  # Alice's outcome copies Bob's setting
    t = bell.JointTable(bell.BELL_VARIABLES, bell.BELL_DOMAINS, probs)
    res = analysis.no_signalling_check(t)
    assert not res.passed and res.deviation == pytest.approx(1.0)


def test_si_check_on_models():
    locked = scm.build_bigv_retro_scm("locked_compatible")
    demo = scm.build_bigv_retro_scm("unlocked_demo", 0.2)
    assert analysis.si_check(locked, "I", "a").passed
    res = analysis.si_check(demo, "I", "a")
    assert not res.passed and res.deviation == pytest.approx(8 * 0.2 / 9, abs=1e-12)
    cscm = scm.constrain_collider(locked, "I", 2)
    with pytest.raises(ConstraintTargetError):
        analysis.si_check(cscm, "I", "a")


def test_lhv_enumeration():
    strategies = analysis.deterministic_strategies()
    assert len(strategies) == 64
    assert analysis.lhv_same_outcome_bound() == pytest.approx(1 / 3, abs=1e-12)
    assert analysis.lhv_same_outcome_bound(perfect_agreement=False) == 0.0


def test_quantum_rate_and_chsh():
    assert analysis.quantum_same_outcome_rate() == pytest.approx(0.25, abs=1e-12)
    s = analysis.chsh_value(InitialLabel.I2, (0, math.pi / 2), (math.pi / 4, 3 * math.pi / 4))
    assert s == pytest.approx(2 * math.sqrt(2), abs=1e-10)
    # aligned settings give no violation
    assert analysis.chsh_value(InitialLabel.I2, (0, 0), (0, 0)) == pytest.approx(2.0, abs=1e-12)


def test_faithfulness_reports():
    rep = analysis.faithfulness_report(scm.build_bigv_retro_scm())
    assert analysis.ci("a", "I") in rep.unfaithful and analysis.ci("I", "b") in rep.unfaithful
    assert not rep.faithful_violations
    assert all("L" not in (s.x, s.y, *s.given) for s in rep.actual)
    fig4 = analysis.faithfulness_report(scm.build_fig4_scm())
    assert analysis.ci("a", "B", ["b"]) in fig4.unfaithful
    doc = rep.to_dict()
    assert {"implied", "actual", "unfaithful"} <= set(doc)


def test_ci_statement_is_symmetric():
    assert analysis.ci("x", "y", ["z"]) == analysis.ci("y", "x", ("z",))


def test_fine_tuning_sweep():
    retro = scm.build_bigv_retro_scm()
    assert analysis.fine_tuning_sweep(retro, ("a", "I"), 0.05, 20, seed=1).surviving_fraction == 0.0
    assert analysis.fine_tuning_sweep(retro, ("a", "b"), 0.05, 20, seed=1).surviving_fraction == 1.0
    with pytest.raises(PreconditionError):
        analysis.fine_tuning_sweep(scm.build_bigv_retro_scm("unlocked_demo"), ("a", "I"), 0.05, 5, seed=1)


def test_sweep_is_seeded():
    model = scm.random_scm(np.random.default_rng(1), max_nodes=4, min_nodes=4, edge_prob=0.0)
    a = analysis.fine_tuning_sweep(model, ("a", "b"), 0.1, 10, seed=5)
    b = analysis.fine_tuning_sweep(model, ("a", "b"), 0.1, 10, seed=5)
    assert a == b


@pytest.mark.parametrize("scenario,constrained,corr,movement,label", [
    ("damascus", False, -1.0, 0.0, "selection artefact"),
    ("damascus", True, 1.0, 1.0, "CCC"),
    ("bigv-retro", True, -1.0, 0.75, "CCC"),
])
def test_support_reports(scenario, constrained, corr, movement, label):
    rep = analysis.counterfactual_support_report(scenario, constrained)
    assert rep["selection_corr"] == pytest.approx(corr, abs=1e-12)
    assert rep["far_side_movement"] == pytest.approx(movement, abs=1e-12)
    assert rep["classification"] == label
    assert rep["schema_version"] == analysis.SCHEMA_VERSION


def test_unconstrained_bigv_has_no_far_side_movement():
    rep = analysis.counterfactual_support_report("bigv", False)
    assert rep["far_side_movement"] < 1e-12
    assert rep["classification"] == "selection artefact"


def test_unknown_scenario():
    with pytest.raises((UnknownVariableError, ValueError)):
        analysis.counterfactual_support_report("atlantis", False)
