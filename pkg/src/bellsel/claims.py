"""
Executable checks for every quantitative claim, collected into one report.

Each check returns a :class:`ClaimResult`; :func:`run_all` runs them in
order and never stops at the first failure, so a broken kernel still yields
a complete report naming what failed.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import analysis, bell, quantum, scm
from .graphs import Dag
from .quantum import InitialLabel

TOL = 1e-12
N_SAMPLE = 100_000
SAMPLE_SEED = 7


@dataclass
class ClaimResult:
    id: str
    claim: str
    passed: bool
    measured: dict = field(default_factory=dict)
    error: str | None = None

    def to_dict(self) -> dict:
        out = {"id": self.id, "claim": self.claim, "passed": bool(self.passed), "measured": _jsonable(self.measured)}
        if self.error:
            out["error"] = self.error
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _within_sigma(emp: float, p: float, n: int, k: float = 3.0) -> bool:
    if p in (0.0, 1.0):
        return emp == p
    return abs(emp - p) <= k * math.sqrt(p * (1 - p) / n)


def _table_claim(kind: str, targets: dict) -> tuple[bool, dict]:
    t0 = time.perf_counter()
    table = bell.closed_form_table(kind)
    rates = bell.same_outcome_rates(table)
    label = {"v1": InitialLabel.I1, "v2": InitialLabel.I2}[kind]
    oracle_gap = table.max_abs_diff(bell.kernel_table(label))
    analytic_s = time.perf_counter() - t0
    t0 = time.perf_counter()
    data = bell.sample_trials(kind, N_SAMPLE, SAMPLE_SEED)
    emp = bell.same_outcome_rates(data)
    eq = data.a == data.b
    n_eq, n_ne = int(eq.sum()), int((~eq).sum())
    sampled_s = time.perf_counter() - t0
    ok = oracle_gap <= TOL and analytic_s < 1.0 and sampled_s < 5.0
    ok &= abs(rates["P(A=B|a=b)"] - targets["eq"]) <= TOL and abs(rates["P(A=B|a!=b)"] - targets["ne"]) <= TOL
    ok &= _within_sigma(emp["P(A=B|a=b)"], targets["eq"], n_eq) and _within_sigma(emp["P(A=B|a!=b)"], targets["ne"], n_ne)
    return ok, {"analytic": rates, "kernel_oracle_gap": oracle_gap, "sampled": emp,
                "n_equal": n_eq, "n_unequal": n_ne, "analytic_seconds": analytic_s, "sampled_seconds": sampled_s}


def claim_v1() -> ClaimResult:
    ok, m = _table_claim("v1", {"eq": 1.0, "ne": 0.25})
    return ClaimResult("1", "V1: P(A=B|a=b)=1, P(A=B|a!=b)=0.25", ok, m)


def claim_v2() -> ClaimResult:
    ok, m = _table_claim("v2", {"eq": 0.0, "ne": 0.75})
    return ClaimResult("2", "V2: P(A=B|a=b)=0, P(A=B|a!=b)=0.75", ok, m)


POSTERIOR_TARGETS = {
    ("equal", "equal"): (1.0, 0.0),
    ("equal", "unequal"): (0.0, 1.0),
    ("unequal", "equal"): (0.25, 0.75),
    ("unequal", "unequal"): (0.75, 0.25),
}


def claim_posteriors() -> ClaimResult:
    table = bell.closed_form_table("bigv")
    measured, ok = {}, True
    for (s, o), target in POSTERIOR_TARGETS.items():
        post = bell.posterior_initial(table, s, o)
        measured[f"settings {s}, outcomes {o}"] = post
        ok &= all(abs(p - q) <= TOL for p, q in zip(post, target))
    return ClaimResult("3", "BIG-V posteriors of I1/I2 given settings and outcome relations", ok, measured)


PAIRS = (("a", "b"), ("a", "A"), ("a", "B"), ("b", "A"), ("b", "B"), ("A", "B"))


def claim_pairwise(seeds: int = 100, n: int = N_SAMPLE, alpha: float = 0.01) -> ClaimResult:
    table = bell.closed_form_table("bigv")
    mi = {f"{x},{y}": table.mutual_information(x, y) for x, y in PAIRS}
    accepted = {f"{x},{y}": 0 for x, y in PAIRS}
    for seed in range(seeds):
        data = bell.sample_trials("bigv", n, seed)
        for x, y in PAIRS:
            accepted[f"{x},{y}"] += not analysis.g2_ci_test(data, x, y, (), alpha).dependent
    ok = all(v < TOL for v in mi.values()) and all(v >= 0.95 * seeds for v in accepted.values())
    return ClaimResult("4", "BIG-V pairwise independence of a, b, A, B", ok,
                       {"mutual_information": mi, "g2_accepts_of_%d" % seeds: accepted})


def claim_preselection() -> ClaimResult:
    bigv = bell.closed_form_table("bigv")
    gaps = {
        "I1->V1": bell.preselect(bigv, "I1").max_abs_diff(bell.closed_form_table("v1")),
        "I2->V2": bell.preselect(bigv, "I2").max_abs_diff(bell.closed_form_table("v2")),
    }
    return ClaimResult("5", "Preselecting BIG-V on I recovers V1 and V2", all(g <= TOL for g in gaps.values()), gaps)


def claim_bell_gap() -> ClaimResult:
    t0 = time.perf_counter()
    classical = analysis.lhv_same_outcome_bound()
    seconds = time.perf_counter() - t0
    q = analysis.quantum_same_outcome_rate(InitialLabel.I1)
    ok = abs(classical - 1 / 3) <= TOL and abs(q - 0.25) <= TOL and classical - q > 0.08 and seconds < 1.0
    return ClaimResult("6", "Local strategies need P(A=B|a!=b) >= 1/3; quantum gives 0.25", ok,
                       {"classical_min": classical, "quantum": q, "gap": classical - q, "seconds": seconds})


def claim_no_signalling(seed: int = 11, pairs: int = 100) -> ClaimResult:
    devs = {k: analysis.no_signalling_check(bell.closed_form_table(k)).deviation for k in ("v1", "v2", "bigv")}
    gen = np.random.default_rng(seed)
    worst = {}
    for label in InitialLabel:
        worst[label.name] = 0.0
        for _ in range(pairs):
            alphas, betas = gen.uniform(0, 2 * math.pi, 2), gen.uniform(0, 2 * math.pi, 2)
            table = bell.kernel_table(label, alphas, betas)
            worst[label.name] = max(worst[label.name], analysis.no_signalling_check(table).deviation)
    ok = all(d < 1e-10 for d in devs.values()) and all(d < 1e-10 for d in worst.values())
    return ClaimResult("7", "No-signalling on V1, V2, BIG-V and random kernel angles", ok,
                       {"tables": devs, "random_angles_max": worst})


def claim_chsh(seed: int = 12, draws: int = 1000) -> ClaimResult:
    s_opt = analysis.chsh_value(InitialLabel.I2, (0.0, math.pi / 2), (math.pi / 4, 3 * math.pi / 4))
    gen = np.random.default_rng(seed)
    worst = 0.0
    for label in InitialLabel:
        for _ in range(draws):
            angles = gen.uniform(0, 2 * math.pi, 4)
            worst = max(worst, analysis.chsh_value(label, angles[:2], angles[2:]))
    ok = abs(s_opt - 2 * math.sqrt(2)) <= 1e-10 and worst <= 2 * math.sqrt(2) + 1e-9
    return ClaimResult("8", "CHSH reaches 2*sqrt(2) for the singlet and never exceeds it", ok,
                       {"optimal_S": s_opt, "max_random_S": worst})


def claim_damascus() -> ClaimResult:
    free = analysis.counterfactual_support_report("damascus", False)
    locked = analysis.counterfactual_support_report("damascus", True)
    ok = (free["selection_corr"] == -1.0 and free["far_side_movement"] == 0.0
          and locked["far_side_movement"] == 1.0)
    return ClaimResult("9", "Survivor selection does not support counterfactuals; a locked collider does", ok, {
        "unconstrained": {k: free[k] for k in ("selection_corr", "far_side_movement", "classification")},
        "constrained": {k: locked[k] for k in ("selection_corr", "far_side_movement", "classification")},
    })


def claim_faithfulness() -> ClaimResult:
    t0 = time.perf_counter()
    retro = scm.build_bigv_retro_scm("locked_compatible")
    rep = analysis.faithfulness_report(retro)
    fig4 = analysis.faithfulness_report(scm.build_fig4_scm())
    sweep = analysis.fine_tuning_sweep(retro, ("a", "I"), 0.05, 200, seed=2024)
    collider = scm.Scm(
        Dag(("a", "b", "I"), [("a", "I"), ("b", "I")]),
        {"a": (0, 1, 2), "b": (0, 1, 2), "I": (1, 2)},
        {"a": np.full(3, 1 / 3), "b": np.full(3, 1 / 3), "I": np.full((3, 3, 2), 0.5)},
    )
    control = analysis.fine_tuning_sweep(collider, ("a", "b"), 0.05, 200, seed=2024)
    seconds = time.perf_counter() - t0
    flagged = {
        "a _||_ I": analysis.ci("a", "I") in rep.unfaithful,
        "b _||_ I": analysis.ci("b", "I") in rep.unfaithful,
        "a _||_ B | b (fig4)": analysis.ci("a", "B", ["b"]) in fig4.unfaithful,
    }
    ok = all(flagged.values()) and sweep.surviving_fraction == 0.0 and control.surviving_fraction == 1.0
    ok &= not rep.faithful_violations and not fig4.faithful_violations and seconds < 30.0
    return ClaimResult("10", "Setting independence of I is unfaithful and fine-tuned; a structural one is not", ok, {
        "flagged": flagged, "fine_tuned_survival": sweep.surviving_fraction,
        "structural_survival": control.surviving_fraction, "seconds": seconds,
    })


def claim_properties(models: int = 200, seed: int = 99) -> ClaimResult:
    gen = np.random.default_rng(seed)
    violations = 0
    for _ in range(models):
        violations += len(analysis.faithfulness_report(scm.random_scm(gen), max_given=4).faithful_violations)
    consistency = max_consistency_gap()
    det = determinism_check()
    ok = violations == 0 and consistency <= TOL and det
    return ClaimResult("11", "d-separation soundness, counterfactual consistency, pipeline determinism", ok,
                       {"faithful_violations": violations, "consistency_gap": consistency, "byte_identical": det})


def bundled_scms() -> dict:
    return {
        "damascus": scm.build_damascus_scm(False),
        "bigv-retro/locked_compatible": scm.build_bigv_retro_scm("locked_compatible"),
        "bigv-retro/unlocked_demo": scm.build_bigv_retro_scm("unlocked_demo"),
        "bigv-fig4": scm.build_fig4_scm(),
    }


def max_consistency_gap() -> float:
    """Largest deviation from the consistency axiom over bundled models.

    For every full observable assignment with positive probability, the
    intervention that restates one evidence value must return the factual
    conditional of every other node.
    """
    worst = 0.0
    for model in bundled_scms().values():
        joint = scm.exact_joint(model).marginal(model.observable)
        for assignment, p in joint.entries():
            if p <= 0:
                continue
            for node, value in assignment.items():
                factual = joint.condition(assignment)[0]
                for query in model.observable:
                    cf = scm.counterfactual_query(model, assignment, {node: value}, query)
                    fact = factual.marginal(query).probs
                    worst = max(worst, max(abs(cf[v] - f) for v, f in zip(model.domains[query], fact)))
                break
    return worst


def determinism_check(n: int = 150_000, seed: int = 4242) -> bool:
    texts = []
    for workers in (1, 4):
        for _ in range(2):
            texts.append(bell.sample_trials("bigv", n, seed, workers=workers).to_csv_text())
    return all(t == texts[0] for t in texts)


CLAIMS: tuple[Callable[[], ClaimResult], ...] = (
    claim_v1, claim_v2, claim_posteriors, claim_pairwise, claim_preselection, claim_bell_gap,
    claim_no_signalling, claim_chsh, claim_damascus, claim_faithfulness, claim_properties,
)


def run_all(selected=CLAIMS) -> list[ClaimResult]:
    results = []
    for fn in selected:
        try:
            results.append(fn())
        except Exception as exc:  # report, keep going
            results.append(ClaimResult(fn.__name__, fn.__doc__ or fn.__name__, False, {}, repr(exc)))
    return results
