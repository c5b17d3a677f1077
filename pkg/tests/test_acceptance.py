"""One test per acceptance criterion, each at its stated tolerance."""
import json
import math

import pytest

from bellsel import claims, cli, quantum
from bellsel.quantum import StateVector

TOL = 1e-12


def _check(acceptance_line, result, criterion, detail):
    acceptance_line(criterion, result.passed, f"{detail} | measured {json.dumps(claims._jsonable(result.measured))}")
    assert result.error is None, result.error


def test_criterion_01_v1_table(acceptance_line):
    r = claims.claim_v1()
    _check(acceptance_line, r, 1, "V1 same-outcome rates 1 and 0.25")
    m = r.measured
    assert abs(m["analytic"]["P(A=B|a=b)"] - 1.0) <= TOL
    assert abs(m["analytic"]["P(A=B|a!=b)"] - 0.25) <= TOL
    assert m["kernel_oracle_gap"] <= TOL
    assert m["sampled"]["P(A=B|a=b)"] == 1.0
    assert abs(m["sampled"]["P(A=B|a!=b)"] - 0.25) <= 3 * math.sqrt(0.25 * 0.75 / m["n_unequal"])
    assert m["analytic_seconds"] < 1.0 and m["sampled_seconds"] < 5.0
    assert r.passed


def test_criterion_02_v2_table(acceptance_line):
    r = claims.claim_v2()
    _check(acceptance_line, r, 2, "V2 same-outcome rates 0 and 0.75")
    m = r.measured
    assert abs(m["analytic"]["P(A=B|a=b)"]) <= TOL
    assert abs(m["analytic"]["P(A=B|a!=b)"] - 0.75) <= TOL
    assert m["kernel_oracle_gap"] <= TOL
    assert m["sampled"]["P(A=B|a=b)"] == 0.0
    assert abs(m["sampled"]["P(A=B|a!=b)"] - 0.75) <= 3 * math.sqrt(0.25 * 0.75 / m["n_unequal"])
    assert m["analytic_seconds"] < 1.0 and m["sampled_seconds"] < 5.0
    assert r.passed


def test_criterion_03_posteriors(acceptance_line):
    r = claims.claim_posteriors()
    _check(acceptance_line, r, 3, "eight BIG-V posteriors of the initial label")
    post = r.measured
    assert post["settings equal, outcomes equal"] == pytest.approx((1.0, 0.0), abs=TOL)
    assert post["settings unequal, outcomes equal"] == pytest.approx((0.25, 0.75), abs=TOL)
    assert post["settings unequal, outcomes unequal"] == pytest.approx((0.75, 0.25), abs=TOL)
    assert post["settings equal, outcomes unequal"] == pytest.approx((0.0, 1.0), abs=TOL)
    assert r.passed


@pytest.mark.slow
def test_criterion_04_pairwise_independence(acceptance_line):
    r = claims.claim_pairwise()
    _check(acceptance_line, r, 4, "BIG-V pairwise independence, exact MI and 100-seed G2")
    assert all(v < TOL for v in r.measured["mutual_information"].values())
    assert all(v >= 95 for v in r.measured["g2_accepts_of_100"].values())
    assert r.passed


def test_criterion_05_preselection(acceptance_line):
    r = claims.claim_preselection()
    _check(acceptance_line, r, 5, "preselect(BIG-V, I1) = V1 and preselect(BIG-V, I2) = V2")
    assert max(r.measured.values()) <= TOL
    assert r.passed


def test_criterion_06_bell_gap(acceptance_line):
    r = claims.claim_bell_gap()
    _check(acceptance_line, r, 6, "classical minimum 1/3 versus quantum 0.25")
    m = r.measured
    assert abs(m["classical_min"] - 1 / 3) <= TOL and abs(m["quantum"] - 0.25) <= TOL
    assert m["classical_min"] - m["quantum"] > 0.08 and m["seconds"] < 1.0
    assert r.passed


def test_criterion_07_no_signalling(acceptance_line):
    r = claims.claim_no_signalling()
    _check(acceptance_line, r, 7, "no-signalling on V1, V2, BIG-V and 100 random angle pairs per state")
    assert max(r.measured["tables"].values()) < 1e-10
    assert max(r.measured["random_angles_max"].values()) < 1e-10
    assert r.passed


def test_criterion_08_chsh(acceptance_line):
    r = claims.claim_chsh()
    _check(acceptance_line, r, 8, "CHSH 2*sqrt(2) at the optimum, never above it")
    assert abs(r.measured["optimal_S"] - 2 * math.sqrt(2)) <= 1e-10
    assert r.measured["max_random_S"] <= 2 * math.sqrt(2) + 1e-9
    assert r.passed


def test_criterion_09_damascus(acceptance_line):
    r = claims.claim_damascus()
    _check(acceptance_line, r, 9, "survivor selection versus locked meeting")
    assert r.measured["unconstrained"]["selection_corr"] == -1.0
    assert r.measured["unconstrained"]["far_side_movement"] == 0.0
    assert r.measured["constrained"]["far_side_movement"] == 1.0
    assert r.passed


def test_criterion_10_faithfulness(acceptance_line):
    r = claims.claim_faithfulness()
    _check(acceptance_line, r, 10, "unfaithful independencies and fine-tuning sweeps")
    assert all(r.measured["flagged"].values())
    assert r.measured["fine_tuned_survival"] == 0.0
    assert r.measured["structural_survival"] == 1.0
    assert r.measured["seconds"] < 30.0
    assert r.passed


@pytest.mark.slow
def test_criterion_11_properties(acceptance_line):
    r = claims.claim_properties()
    _check(acceptance_line, r, 11, "d-separation soundness, counterfactual consistency, byte determinism")
    assert r.measured["faithful_violations"] == 0
    assert r.measured["consistency_gap"] <= TOL
    assert r.measured["byte_identical"]
    assert r.passed


@pytest.mark.slow
def test_reproduce_exits_zero(tmp_path, capsys):
    out = tmp_path / "report.json"
    assert cli.main(["reproduce", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["passed"] and len(doc["claims"]) == 11
    gap = next(c for c in doc["claims"] if c["id"] == "6")
    assert gap["measured"]["classical_min"] == pytest.approx(1 / 3)


def test_mis_signed_kernel_fails_reproduce(tmp_path, capsys, monkeypatch):
    h = 1 / math.sqrt(2)
    swapped = {1: StateVector((0, h, -h, 0)), 2: StateVector((0, h, h, 0))}
    monkeypatch.setattr(quantum, "make_state", lambda label: swapped[int(quantum.InitialLabel.parse(label))])
    out = tmp_path / "report.json"
    code = cli.main(["reproduce", "--only", "1,2,6", "--out", str(out)])
    err = capsys.readouterr().err
    assert code == 3
    assert "[FAIL] claim 1" in err and "[FAIL] claim 6" in err
    doc = json.loads(out.read_text())
    assert not doc["passed"]
