"""
Statistical and structural diagnostics.

Covers exact and sampled conditional-independence tests, the no-signalling
and setting-independence checks, the deterministic local-strategy bound for
trine settings, CHSH, and graph-versus-distribution (Faithfulness) reports
with fine-tuning sweeps.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Optional

import numpy as np
from scipy import stats

from . import quantum
from .errors import ArgumentError, PreconditionError, UnknownVariableError
from .quantum import InitialLabel
from .scm import (ConstrainedScm, Cpt, Scm, ccc_counterfactual, constrain_collider,
                  counterfactual_query, build_bigv_retro_scm, build_damascus_scm, exact_joint,
                  Constraint, DAMASCUS_CITIES)
from .tables import JointTable

CI_TOL = 1e-10
SCHEMA_VERSION = 1


def _names(group) -> tuple:
    if group is None:
        return ()
    if isinstance(group, str):
        return (group,)
    return tuple(group)


class CheckResult(NamedTuple):
    passed: bool
    deviation: float


# -- conditional independence -------------------------------------------------


def exact_ci(joint: JointTable, x, y, z=(), tol: float = CI_TOL) -> bool:
    """Exact conditional independence of ``x`` and ``y`` given ``z`` in a table."""
    return joint.independence_gap(_names(x), _names(y), _names(z)) < tol


@dataclass(frozen=True)
class CiTestResult:
    x: tuple
    y: tuple
    given: tuple
    statistic: float
    dof: int
    p_value: float
    alpha: float
    reduced_dof: bool = False

    @property
    def dependent(self) -> bool:
        return self.p_value < self.alpha

    @property
    def verdict(self) -> str:
        return "dependent" if self.dependent else "independent"

    def to_dict(self) -> dict:
        return {
            "x": list(self.x), "y": list(self.y), "given": list(self.given),
            "statistic": self.statistic, "dof": self.dof, "p": self.p_value,
            "alpha": self.alpha, "verdict": self.verdict, "reduced_dof": self.reduced_dof,
        }


def _group_codes(columns: Mapping, domains: Mapping, names: tuple, n: int):
    """Joint integer code and level count for a group of columns."""
    if not names:
        return np.zeros(n, dtype=np.int64), 1
    codes, cards = [], []
    for name in names:
        if name not in columns:
            raise UnknownVariableError(f"data has no column {name!r}")
        domain = tuple(domains[name])
        col = np.asarray(columns[name])
        if domain == tuple(range(len(domain))):
            code = col.astype(np.int64)
        else:
            lookup = {v: i for i, v in enumerate(domain)}
            code = np.fromiter((lookup[v.item() if hasattr(v, "item") else v] for v in col),
                               dtype=np.int64, count=len(col))
        codes.append(code)
        cards.append(len(domain))
    return np.ravel_multi_index(codes, cards), int(np.prod(cards))


def g2_ci_test(data, x, y, z=(), alpha: float = 0.01) -> CiTestResult:
    """G-squared likelihood-ratio test of ``x`` independent of ``y`` given ``z``.

    ``data`` is any object with ``columns()`` and ``domains`` (a Bell
    :class:`~bellsel.bell.Dataset` or an SCM sample). Strata that are empty,
    or that miss some levels of ``x`` or ``y``, contribute reduced degrees of
    freedom and set ``reduced_dof``.
    """
    if not 0.0 < alpha < 1.0:
        raise ArgumentError(f"alpha must lie in (0, 1), got {alpha}")
    x, y, z = _names(x), _names(y), _names(z)
    if set(x) & set(y) or set(x) & set(z) or set(y) & set(z):
        raise ArgumentError("X, Y and Z must be disjoint")
    if not x or not y:
        raise ArgumentError("X and Y must be non-empty")
    columns = data.columns()
    n = len(data)
    if n < 1:
        raise ArgumentError("cannot test an empty dataset")
    domains = data.domains
    cx, kx = _group_codes(columns, domains, x, n)
    cy, ky = _group_codes(columns, domains, y, n)
    cz, kz = _group_codes(columns, domains, z, n)
    counts = np.bincount((cz * kx + cx) * ky + cy, minlength=kz * kx * ky).reshape(kz, kx, ky).astype(float)
    n_z = counts.sum(axis=(1, 2))
    rows = counts.sum(axis=2)
    cols = counts.sum(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        expected = rows[:, :, None] * cols[:, None, :] / n_z[:, None, None]
        terms = np.where(counts > 0, counts * np.log(counts / expected), 0.0)
    statistic = max(0.0, 2.0 * float(terms.sum()))
    full_dof = kz * (kx - 1) * (ky - 1)
    live_rows = (rows > 0).sum(axis=1)
    live_cols = (cols > 0).sum(axis=1)
    stratum_dof = np.where(n_z > 0, np.maximum(live_rows - 1, 0) * np.maximum(live_cols - 1, 0), 0)
    dof = int(stratum_dof.sum())
    reduced = dof != full_dof
    if dof < 1:
        dof = 1
    p_value = float(stats.chi2.sf(statistic, dof)) if statistic > 0 else 1.0
    return CiTestResult(x, y, z, statistic, dof, p_value, alpha, reduced)


# -- no-signalling & setting independence ------------------------------------------


def _setting_spread(cond: np.ndarray, live: np.ndarray) -> float:
    """max over (own setting, outcome) of the spread across remote settings."""
    worst = 0.0
    for own in range(cond.shape[0]):
        mask = live[own]
        if mask.sum() < 2:
            continue
        vals = cond[own][mask]
        worst = max(worst, float(np.max(vals.max(axis=0) - vals.min(axis=0))))
    return worst


def no_signalling_check(joint: JointTable, tol: float = CI_TOL) -> CheckResult:
    """Each wing's outcome marginal must not depend on the remote setting."""
    for v in ("a", "b", "A", "B"):
        if v not in joint:
            raise UnknownVariableError(f"table lacks variable {v!r}")
    t = joint.marginal(("a", "b", "A", "B")).probs
    pab = t.sum(axis=(2, 3))
    live = pab > 0
    with np.errstate(invalid="ignore", divide="ignore"):
        p_A = np.where(live[..., None], t.sum(axis=3) / pab[..., None], 0.0)  # (a, b, A)
        p_B = np.where(live[..., None], t.sum(axis=2) / pab[..., None], 0.0)  # (a, b, B)
    dev_alice = _setting_spread(p_A, live)
    dev_bob = _setting_spread(np.transpose(p_B, (1, 0, 2)), live.T)
    dev = max(dev_alice, dev_bob)
    return CheckResult(dev < tol, dev)


def _model_joint(model) -> JointTable:
    if isinstance(model, JointTable):
        return model
    if isinstance(model, ConstrainedScm):
        return model.joint
    if isinstance(model, Scm):
        return exact_joint(model)
    raise ArgumentError(f"expected a JointTable, Scm or ConstrainedScm, got {type(model).__name__}")


def si_check(model, hidden: str, setting: str, tol: float = CI_TOL) -> CheckResult:
    """Statistical independence of a hidden variable from a setting.

    Passing ``hidden="I"`` checks the prepared-state version of the condition.
    Deviation is max |P(h | s) - P(h)| over values, for s with P(s) > 0.
    """
    if isinstance(model, ConstrainedScm):
        model._guard([hidden, setting])
    joint = _model_joint(model)
    pair = joint.marginal((setting, hidden)).probs
    ps = pair.sum(axis=1)
    ph = pair.sum(axis=0)
    live = ps > 0
    cond = pair[live] / ps[live][:, None]
    dev = float(np.max(np.abs(cond - ph[None, :])))
    return CheckResult(dev < tol, dev)


# -- local deterministic strategies ---------------------------------------------------


@dataclass(frozen=True)
class DeterministicStrategy:
    """Outcome each wing returns for each of the three settings."""

    alice_map: tuple
    bob_map: tuple

    def agrees_on_equal_settings(self) -> bool:
        return all(self.alice_map[s] == self.bob_map[s] for s in range(3))

    def same_outcome_rate(self, pairs) -> float:
        pairs = list(pairs)
        return sum(self.alice_map[a] == self.bob_map[b] for a, b in pairs) / len(pairs)


UNEQUAL_PAIRS = tuple((a, b) for a in range(3) for b in range(3) if a != b)


def deterministic_strategies() -> list:
    """All 64 pairs of maps from three settings to binary outcomes."""
    maps = list(itertools.product((0, 1), repeat=3))
    return [DeterministicStrategy(fa, fb) for fa in maps for fb in maps]


def lhv_same_outcome_bound(perfect_agreement: bool = True, strategies=None) -> float:
    """Minimum P(A=B | a != b) over deterministic strategies, uniform on unequal pairs.

    With ``perfect_agreement`` only strategies that always agree at equal
    settings are allowed. Mixtures cannot go below the best pure strategy,
    so this is the bound for any local hidden-variable model.
    """
    pool = deterministic_strategies() if strategies is None else list(strategies)
    if perfect_agreement:
        pool = [s for s in pool if s.agrees_on_equal_settings()]
    return min(s.same_outcome_rate(UNEQUAL_PAIRS) for s in pool)


def quantum_same_outcome_rate(label=InitialLabel.I1) -> float:
    """P(A=B | a != b) at the trine angles, straight from the state-vector kernel."""
    state = quantum.make_state(label)
    trine = [2 * math.pi * k / 3 for k in range(3)]
    total = 0.0
    for a, b in UNEQUAL_PAIRS:
        total += sum(quantum.joint_outcome_probability(state, trine[a], trine[b], o, o) for o in (0, 1))
    return total / len(UNEQUAL_PAIRS)


# -- CHSH ------------------------------------------------------------------------------------


def chsh_terms(label, alphas, betas) -> np.ndarray:
    """2x2 matrix of correlations E(alpha_i, beta_j) from the kernel."""
    state = quantum.make_state(label)
    return np.array([[quantum.correlation_e(state, a, b) for b in betas] for a in alphas])


def chsh_value(label, alphas, betas) -> float:
    """CHSH statistic for two settings per wing.

    The minus sign may sit on any of the four terms (these are the four
    equivalent CHSH inequalities); the largest of the four magnitudes is
    returned.
    """
    if len(alphas) != 2 or len(betas) != 2:
        raise ArgumentError("CHSH needs exactly two azimuths per wing")
    e = chsh_terms(label, alphas, betas).ravel()
    return float(max(abs(e.sum() - 2 * e[k]) for k in range(4)))


# -- Faithfulness --------------------------------------------------------------------------


@dataclass(frozen=True)
class CIStatement:
    """``x`` independent of ``y`` given ``given``; the pair is unordered."""

    x: str
    y: str
    given: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        x, y = sorted((self.x, self.y))
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "given", frozenset(self.given))

    def __str__(self):
        given = ", ".join(sorted(self.given)) or "{}"
        return f"{self.x} _||_ {self.y} | {given}"

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "given": sorted(self.given)}


def ci(x: str, y: str, given=()) -> CIStatement:
    return CIStatement(x, y, frozenset(_names(given)))


@dataclass
class FaithfulnessReport:
    implied: list
    actual: list
    unfaithful: list
    faithful_violations: list

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "implied": [s.to_dict() for s in self.implied],
            "actual": [s.to_dict() for s in self.actual],
            "unfaithful": [s.to_dict() for s in self.unfaithful],
            "faithful_violations": [s.to_dict() for s in self.faithful_violations],
        }


def ci_statements(variables, max_given: int = 3):
    variables = tuple(variables)
    for i, x in enumerate(variables):
        for y in variables[i + 1:]:
            rest = [v for v in variables if v not in (x, y)]
            for k in range(min(max_given, len(rest)) + 1):
                for given in itertools.combinations(rest, k):
                    yield CIStatement(x, y, frozenset(given))


def faithfulness_report(scm: Scm, max_given: int = 3, tol: float = CI_TOL) -> FaithfulnessReport:
    """Compare d-separation in the graph with independence in the exact joint.

    Statements range over pairs of non-internal variables and conditioning
    sets of up to ``max_given`` further non-internal variables. Internal
    nodes stay in the graph (as latents) but never appear in a statement.
    """
    joint = exact_joint(scm).marginal(scm.observable)
    implied, actual = [], []
    for stmt in ci_statements(scm.observable, max_given):
        if scm.dag.d_separated({stmt.x}, {stmt.y}, set(stmt.given)):
            implied.append(stmt)
        if exact_ci(joint, stmt.x, stmt.y, tuple(sorted(stmt.given)), tol):
            actual.append(stmt)
    implied_set, actual_set = set(implied), set(actual)
    return FaithfulnessReport(
        implied=implied,
        actual=actual,
        unfaithful=[s for s in actual if s not in implied_set],
        faithful_violations=[s for s in implied if s not in actual_set],
    )


# -- fine tuning -----------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepResult:
    target: CIStatement
    epsilon: float
    trials: int
    surviving_fraction: float

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "target": self.target.to_dict(), "epsilon": self.epsilon,
                "trials": self.trials, "surviving_fraction": self.surviving_fraction}


def perturb_cpts(scm: Scm, epsilon: float, gen: np.random.Generator) -> Scm:
    """Shift every CPT entry by U(-epsilon, epsilon), clip to [0, 1], renormalize rows."""
    cpts = {}
    for node in scm.nodes:
        cpt = scm.cpts[node]
        noisy = np.clip(cpt.probs + gen.uniform(-epsilon, epsilon, cpt.probs.shape), 0.0, 1.0)
        sums = noisy.sum(axis=-1, keepdims=True)
        noisy = np.where(sums > 0, noisy / np.where(sums > 0, sums, 1.0), cpt.probs)
        cpts[node] = Cpt(node, cpt.parents, noisy)
    return scm.with_cpts(cpts)


def _target(target) -> CIStatement:
    if isinstance(target, CIStatement):
        return target
    x, y, *rest = target
    return ci(x, y, rest[0] if rest else ())


def fine_tuning_sweep(scm: Scm, target, epsilon: float, trials: int, seed: int,
                      tol: float = CI_TOL) -> SweepResult:
    """Fraction of randomly perturbed models in which ``target`` still holds.

    Near 0 means the independence depends on fine-tuned parameters; 1 means
    the graph guarantees it.
    """
    stmt = _target(target)
    given = tuple(sorted(stmt.given))
    if not exact_ci(exact_joint(scm), stmt.x, stmt.y, given, tol):
        raise PreconditionError(f"{stmt} does not hold in the unperturbed model")
    gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))
    survived = 0
    for _ in range(int(trials)):
        model = perturb_cpts(scm, float(epsilon), gen)
        survived += exact_ci(exact_joint(model), stmt.x, stmt.y, given, tol)
    return SweepResult(stmt, float(epsilon), int(trials), survived / int(trials))


# -- selection artefact vs connection across a locked collider ---------------------------


def _tv(p: Mapping, q: Mapping) -> float:
    return 0.5 * sum(abs(p[k] - q.get(k, 0.0)) for k in p)


def _dist(table: JointTable) -> dict:
    var = table.variables[0]
    return {v: float(p) for v, p in zip(table.domains[var], table.probs)}


def counterfactual_support_report(scenario: str, constrained: bool, lock=InitialLabel.I2) -> dict:
    """Pair a selection correlation with the far-side counterfactual movement.

    The movement is the largest total-variation distance, over evidence
    contexts, between the far-side variable's factual distribution and its
    distribution after flipping the near-side choice. Unconstrained models use
    :func:`counterfactual_query`; constrained ones :func:`ccc_counterfactual`.
    """
    scenario = str(scenario).lower().replace("_", "-")
    if scenario == "damascus":
        report = _damascus_support(constrained)
    elif scenario in ("bigv", "bigv-retro"):
        report = _bigv_support(constrained, InitialLabel.parse(lock))
    else:
        raise ArgumentError(f"unknown scenario {scenario!r}; expected damascus or bigv")
    movement = report["far_side_movement"]
    if movement <= 1e-12:
        label = "selection artefact"
    elif constrained:
        label = "CCC"
    else:
        label = "counterfactual dependence"
    return {"schema_version": SCHEMA_VERSION, "scenario": scenario, "constrained": bool(constrained),
            **report, "classification": label}


def _damascus_support(constrained: bool) -> dict:
    coding = {"you": {c: i for i, c in enumerate(DAMASCUS_CITIES)},
              "death": {c: i for i, c in enumerate(DAMASCUS_CITIES)}}
    other = {DAMASCUS_CITIES[0]: DAMASCUS_CITIES[1], DAMASCUS_CITIES[1]: DAMASCUS_CITIES[0]}
    contexts = []
    if not constrained:
        scm = build_damascus_scm(False)
        joint = exact_joint(scm)
        survivors, _ = joint.condition({"M": 0})
        corr = survivors.correlation("you", "death", coding)
        for you in DAMASCUS_CITIES:
            for death in DAMASCUS_CITIES:
                evidence = {"you": you, "death": death, "M": 0}
                if joint.prob(evidence) <= 0:
                    continue
                cf = counterfactual_query(scm, evidence, {"you": other[you]}, "death")
                contexts.append({"evidence": evidence, "intervention": {"you": other[you]},
                                 "movement": _tv({death: 1.0}, cf)})
        selection = {"M": 0}
    else:
        cscm = build_damascus_scm(True)
        corr = cscm.joint.correlation("you", "death", coding)
        for you in DAMASCUS_CITIES:
            evidence = {"you": you}
            factual = _dist(cscm.query("death", evidence))
            cf = ccc_counterfactual(cscm, evidence, {"you": other[you]}, "death")
            contexts.append({"evidence": evidence, "intervention": {"you": other[you]},
                             "movement": _tv(factual, cf)})
        selection = {"M": 1, "locked": True}
    return {"selection": selection, "selection_corr": corr, "far_side": "death",
            "far_side_movement": max(c["movement"] for c in contexts), "contexts": contexts}


def _bigv_support(constrained: bool, lock: InitialLabel) -> dict:
    scm = build_bigv_retro_scm("locked_compatible")
    contexts = []
    if constrained:
        cscm = constrain_collider(scm, Constraint("I", int(lock)))
        joint = cscm.observable_joint()
    else:
        joint = exact_joint(scm).marginal(scm.observable)
    same_setting, _ = joint.condition({"a": 0, "b": 0})
    corr = same_setting.correlation("A", "B")
    for a in range(3):
        for b in range(3):
            for A in (0, 1):
                evidence = {"a": a, "b": b, "A": A}
                if joint.prob(evidence) <= 0:
                    continue
                factual = _dist(joint.conditional("B", evidence))
                for a2 in range(3):
                    if a2 == a:
                        continue
                    if constrained:
                        cf = ccc_counterfactual(cscm, evidence, {"a": a2}, "B")
                    else:
                        cf = counterfactual_query(scm, evidence, {"a": a2}, "B")
                    contexts.append({"evidence": evidence, "intervention": {"a": a2},
                                     "movement": _tv(factual, cf)})
    selection = {"I": int(lock), "locked": True} if constrained else {}
    return {"selection": selection, "selection_context": {"a": 0, "b": 0}, "selection_corr": corr,
            "far_side": "B", "far_side_movement": max(c["movement"] for c in contexts),
            "contexts": contexts}
