"""
Discrete structural causal models with canonical uniform noise.

Every node ``v`` owns one exogenous ``U_v ~ Uniform[0, 1)``; its value is the
inverse CDF of the CPT row selected by its parents, evaluated at ``U_v``.
Counterfactuals share these noises between the factual and the intervened
world (a twin network), which makes them unique and reproducible.

Locking a collider conditions on its value and then removes it from the
model: the result is a :class:`ConstrainedScm`, which has no variable for
the locked node at all.
"""
from __future__ import annotations

import itertools
import json
import string
from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from . import rng as _rng
from .bell import BELL_DOMAINS, Setting, quantum_outcome_table
from .errors import (ArgumentError, ConditioningError, ConstraintTargetError, EmptyDatasetError,
                     InfeasibleCounterfactualError, ParameterError, StateSpaceError,
                     UnknownVariableError)
from .graphs import Dag, figure_graph
from .quantum import InitialLabel
from .tables import JointTable

__all__ = [
    "Cpt", "Scm", "Constraint", "ConstrainedScm", "ScmSample", "exact_joint", "sample_scm",
    "do_intervene", "counterfactual_query", "constrain_collider", "ccc_counterfactual",
    "build_bigv_retro_scm", "build_damascus_scm", "build_fig4_scm", "random_scm",
    "MAX_STATES", "DAMASCUS_CITIES",
]

MAX_STATES = 10 ** 6
MAX_TWIN_STATES = 10 ** 7
ROW_TOL = 1e-12
DAMASCUS_CITIES = ("Damascus", "Aleppo")


def _expand(arr: np.ndarray, axes, ndim: int) -> np.ndarray:
    """View of ``arr`` (whose dims correspond to ``axes``) broadcastable to ``ndim`` dims."""
    order = np.argsort(axes)
    arr = np.transpose(arr, order)
    shape = [1] * ndim
    for ax, size in zip(sorted(axes), arr.shape):
        shape[ax] = size
    return arr.reshape(shape)


@dataclass(frozen=True)
class Cpt:
    """Conditional table ``probs[*parent_codes, value]`` for one node."""

    node: str
    parents: tuple
    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float)
        object.__setattr__(self, "parents", tuple(self.parents))
        if probs.ndim != len(self.parents) + 1:
            raise ArgumentError(f"CPT of {self.node!r} needs {len(self.parents) + 1} dims, got {probs.ndim}")
        if np.any(probs < 0):
            raise ArgumentError(f"CPT of {self.node!r} has negative entries")
        sums = probs.sum(axis=-1)
        if np.any(np.abs(sums - 1.0) > ROW_TOL):
            raise ArgumentError(f"CPT rows of {self.node!r} do not sum to 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @property
    def card(self) -> int:
        return self.probs.shape[-1]

    def rows(self) -> np.ndarray:
        return self.probs.reshape(-1, self.card)

    def cdf(self) -> np.ndarray:
        return _rng.safe_cdf(self.rows())

    def response_cells(self):
        """Partition of noise space into cells of constant response.

        Returns ``(widths, responses)``; ``responses[c, r]`` is the value
        produced for parent row ``r`` by any noise in cell ``c``.
        """
        cdf = self.cdf()
        cuts = np.unique(np.concatenate([[0.0, 1.0], cdf[:, :-1].ravel()]))
        cuts = cuts[(cuts >= 0.0) & (cuts <= 1.0)]
        widths = np.diff(cuts)
        live = widths > 0
        mids = 0.5 * (cuts[:-1] + cuts[1:])[live]
        responses = np.stack([_rng.inverse_cdf(cdf, np.full(len(cdf), u)) for u in mids])
        return widths[live], responses


class Scm:
    """DAG plus one CPT per node and the canonical noise mechanism.

    ``domains`` maps each node to its ordered value labels. ``internal``
    names scaffold nodes that diagnostics should treat as latent.
    """

    def __init__(self, dag: Dag, domains: Mapping, cpts: Mapping, internal=(), name: Optional[str] = None,
                 metadata: Optional[dict] = None):
        self.dag = dag
        self.domains = {n: tuple(domains[n]) for n in dag.nodes}
        self.internal = frozenset(internal)
        self.name = name
        self.metadata = dict(metadata or {})
        self.cpts = {}
        for node in dag.nodes:
            if node not in cpts:
                raise ArgumentError(f"missing CPT for node {node!r}")
            cpt = cpts[node]
            if not isinstance(cpt, Cpt):
                cpt = Cpt(node, dag.parents(node), cpt)
            if set(cpt.parents) != set(dag.parents(node)) or len(cpt.parents) != len(dag.parents(node)):
                raise ArgumentError(f"CPT parents of {node!r} {cpt.parents} differ from graph {dag.parents(node)}")
            expected = tuple(len(self.domains[p]) for p in cpt.parents) + (len(self.domains[node]),)
            if cpt.probs.shape != expected:
                raise ArgumentError(f"CPT of {node!r} has shape {cpt.probs.shape}, expected {expected}")
            self.cpts[node] = cpt
        extra = set(cpts) - set(dag.nodes)
        if extra:
            raise ArgumentError(f"CPTs given for unknown nodes {sorted(extra)}")
        for node in self.internal:
            if node not in self.dag:
                raise UnknownVariableError(f"internal node {node!r} not in graph")

    def __repr__(self):
        return f"Scm({self.name or 'unnamed'}: {self.dag!r})"

    @property
    def nodes(self) -> tuple:
        return self.dag.nodes

    @property
    def observable(self) -> tuple:
        return tuple(n for n in self.nodes if n not in self.internal)

    def state_space(self) -> int:
        return int(np.prod([len(self.domains[n]) for n in self.nodes], dtype=object))

    def index(self, node, value) -> int:
        if node not in self.domains:
            raise UnknownVariableError(f"model has no node {node!r}")
        try:
            return self.domains[node].index(value)
        except ValueError:
            raise UnknownVariableError(f"{value!r} is not a value of {node!r}: {self.domains[node]}") from None

    def mechanism(self, node, parent_codes, u) -> np.ndarray:
        """Deterministic structural equation: value codes from parent codes and noise."""
        cpt = self.cpts[node]
        u = np.atleast_1d(np.asarray(u, dtype=float))
        if cpt.parents:
            shape = cpt.probs.shape[:-1]
            row = np.ravel_multi_index([np.broadcast_to(parent_codes[p], u.shape) for p in cpt.parents], shape)
        else:
            row = np.zeros(u.shape, dtype=int)
        return _rng.inverse_cdf(cpt.cdf()[row], u)

    def with_cpts(self, cpts: Mapping) -> "Scm":
        merged = {**self.cpts, **cpts}
        return Scm(self.dag, self.domains, merged, self.internal, self.name, self.metadata)

    def joint(self) -> JointTable:
        return exact_joint(self)

    def observable_joint(self) -> JointTable:
        return exact_joint(self).marginal(self.observable)

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        cpts = {}
        for node in self.nodes:
            cpt = self.cpts[node]
            rows = []
            for combo in itertools.product(*(range(len(self.domains[p])) for p in cpt.parents)):
                rows.append({
                    "parents": [self.domains[p][i] for p, i in zip(cpt.parents, combo)],
                    "p": cpt.probs[combo].tolist(),
                })
            cpts[node] = {"parents": list(cpt.parents), "rows": rows}
        return {
            "name": self.name,
            "dag": self.dag.to_dict(),
            "domains": {n: list(self.domains[n]) for n in self.nodes},
            "internal": sorted(self.internal),
            "cpts": cpts,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data) -> "Scm":
        dag = Dag.from_dict(data["dag"])
        domains = {n: tuple(v) for n, v in data["domains"].items()}
        cpts = {}
        for node, entry in data["cpts"].items():
            parents = tuple(entry["parents"])
            shape = tuple(len(domains[p]) for p in parents) + (len(domains[node]),)
            probs = np.full(shape, np.nan)
            for row in entry["rows"]:
                idx = tuple(domains[p].index(v) for p, v in zip(parents, row["parents"]))
                probs[idx] = row["p"]
            if np.isnan(probs).any():
                raise ArgumentError(f"CPT of {node!r} is missing parent rows")
            cpts[node] = Cpt(node, parents, probs)
        return cls(dag, domains, cpts, data.get("internal", ()), data.get("name"))

    @classmethod
    def from_json(cls, text: str) -> "Scm":
        return cls.from_dict(json.loads(text))


# -- exact joint & sampling -------------------------------------------------


def exact_joint(scm: Scm, max_states: int = MAX_STATES) -> JointTable:
    """Chain-rule product of the CPTs over a topological order."""
    size = scm.state_space()
    if size > max_states:
        raise StateSpaceError(f"state space of {size} configurations exceeds {max_states}")
    nodes = scm.nodes
    shape = tuple(len(scm.domains[n]) for n in nodes)
    probs = np.ones(shape)
    for node in scm.dag.topological_order():
        cpt = scm.cpts[node]
        axes = [nodes.index(p) for p in cpt.parents] + [nodes.index(node)]
        probs = probs * _expand(cpt.probs, axes, len(nodes))
    return JointTable(nodes, scm.domains, probs, {"model": scm.name})


class ScmSample:
    """Ancestral samples; columns hold value labels."""

    def __init__(self, codes: Mapping, domains: Mapping, seed=None, model=None):
        self.codes = {k: np.asarray(v) for k, v in codes.items()}
        self.domains = {k: tuple(domains[k]) for k in self.codes}
        self.seed = seed
        self.model = model

    def __len__(self) -> int:
        return len(next(iter(self.codes.values()))) if self.codes else 0

    def __eq__(self, other):
        if not isinstance(other, ScmSample):
            return NotImplemented
        return self.codes.keys() == other.codes.keys() and all(
            np.array_equal(self.codes[k], other.codes[k]) for k in self.codes)

    def columns(self) -> dict:
        return {k: np.asarray(self.domains[k], dtype=object)[v] if not _is_range(self.domains[k]) else v
                for k, v in self.codes.items()}

    def column(self, name) -> np.ndarray:
        return self.columns()[name]


def _is_range(domain) -> bool:
    return tuple(domain) == tuple(range(len(domain)))


def sample_scm(scm: Scm, n: int, seed: int, workers: int = 1, chunk_size: int = _rng.CHUNK_SIZE) -> ScmSample:
    """Ancestral sampling through the noise mechanisms.

    Within a chunk, noises are drawn node by node in topological order.
    """
    n = int(n)
    if n < 1:
        raise EmptyDatasetError("n must be at least 1")
    order = scm.dag.topological_order()

    def draw(gen, size):
        codes = {}
        for node in order:
            codes[node] = scm.mechanism(node, codes, gen.random(size))
        return codes

    chunks = _rng.map_chunks(draw, seed, n, workers, chunk_size)
    codes = {node: np.concatenate([c[node] for c in chunks]) for node in scm.nodes}
    return ScmSample(codes, scm.domains, seed=seed, model=scm.name)


# -- interventions & counterfactuals ---------------------------------------


def _normalize_assignment(scm: Scm, assignment) -> dict:
    assignment = dict(assignment or {})
    for node, value in assignment.items():
        scm.index(node, value)
    return assignment


def do_intervene(scm: Scm, node, value=None) -> Scm:
    """``do(node := value)``; ``node`` may also be a mapping of several assignments."""
    assignment = dict(node) if isinstance(node, Mapping) else {node: value}
    assignment = _normalize_assignment(scm, assignment)
    dag = scm.dag
    cpts = dict(scm.cpts)
    for target, val in assignment.items():
        dag = dag.without_incoming(target)
        point = np.zeros(len(scm.domains[target]))
        point[scm.index(target, val)] = 1.0
        cpts[target] = Cpt(target, (), point)
    meta = dict(scm.metadata)
    meta["interventions"] = {**meta.get("interventions", {}), **{k: v for k, v in assignment.items()}}
    return Scm(dag, scm.domains, cpts, scm.internal, scm.name, meta)


def twin_joint(scm: Scm, intervention: Mapping, max_states: int = MAX_TWIN_STATES) -> np.ndarray:
    """Exact joint over (factual world, intervened world) with shared noise.

    Axes ``0..n-1`` are the factual nodes in ``scm.nodes`` order, axes
    ``n..2n-1`` the same nodes in the counterfactual world.
    """
    intervention = _normalize_assignment(scm, intervention)
    nodes = scm.nodes
    n = len(nodes)
    cards = [len(scm.domains[v]) for v in nodes]
    size = int(np.prod(cards, dtype=object)) ** 2
    if size > max_states:
        raise StateSpaceError(f"twin network has {size} configurations, limit {max_states}")
    probs = np.ones(cards + cards)
    for node in scm.dag.topological_order():
        cpt = scm.cpts[node]
        i = nodes.index(node)
        pidx = [nodes.index(p) for p in cpt.parents]
        pshape = cpt.probs.shape[:-1]
        card = cpt.card
        if node in intervention:
            # counterfactual copy pinned; factual copy follows its own CPT
            pin = np.zeros(card)
            pin[scm.index(node, intervention[node])] = 1.0
            factor = cpt.probs[..., :, None] * pin
            axes = pidx + [i, n + i]
        else:
            widths, resp = cpt.response_cells()
            onehot = np.eye(card)[resp]  # (cells, rows, card)
            flat = np.einsum("c,cfv,cgw->fgvw", widths, onehot, onehot)
            factor = flat.reshape(pshape + pshape + (card, card))
            axes = pidx + [n + j for j in pidx] + [i, n + i]
        probs = probs * _expand(factor, axes, 2 * n)
    return probs


def counterfactual_query(scm: Scm, evidence: Mapping, intervention: Mapping, query) -> dict:
    """Abduction, action, prediction over the shared exogenous noise.

    Returns ``{value: probability}`` for ``query`` in the world where
    ``intervention`` is applied, given ``evidence`` observed in the actual one.
    """
    evidence = _normalize_assignment(scm, evidence)
    if query not in scm.domains:
        raise UnknownVariableError(f"model has no node {query!r}")
    probs = twin_joint(scm, intervention)
    nodes = scm.nodes
    n = len(nodes)
    sel = [slice(None)] * (2 * n)
    for node, value in evidence.items():
        sel[nodes.index(node)] = slice(scm.index(node, value), scm.index(node, value) + 1)
    kept = probs[tuple(sel)]
    mass = kept.sum()
    if mass <= 0:
        raise ConditioningError(f"evidence {evidence} has probability zero")
    q = n + nodes.index(query)
    dist = kept.sum(axis=tuple(ax for ax in range(2 * n) if ax != q)) / mass
    return {v: float(p) for v, p in zip(scm.domains[query], dist)}


# -- constrained colliders --------------------------------------------------


@dataclass(frozen=True)
class Constraint:
    node: str
    locked_value: object


class ConstrainedScm:
    """A base model whose collider is locked to one value.

    ``joint`` is the base joint conditioned on the lock and renormalized,
    with the locked node removed; ``prior_mass`` is the probability the
    base model gave the locked value.
    """

    def __init__(self, base: Scm, constraint: Constraint, joint: JointTable, prior_mass: float):
        self.base = base
        self.constraint = constraint
        self.joint = joint
        self.prior_mass = prior_mass

    def __repr__(self):
        c = self.constraint
        return f"ConstrainedScm({self.base.name or 'unnamed'}, {c.node}={c.locked_value!r})"

    @property
    def variables(self) -> tuple:
        return self.joint.variables

    @property
    def observable(self) -> tuple:
        return tuple(v for v in self.variables if v not in self.base.internal)

    def observable_joint(self) -> JointTable:
        return self.joint.marginal(self.observable)

    def _guard(self, names):
        if self.constraint.node in set(names):
            raise ConstraintTargetError(f"{self.constraint.node!r} is locked and is not a variable of this model")

    def query(self, targets, given: Optional[Mapping] = None) -> JointTable:
        targets = (targets,) if isinstance(targets, str) else tuple(targets)
        given = dict(given or {})
        self._guard(list(targets) + list(given))
        if not given:
            return self.joint.marginal(targets)
        return self.joint.conditional(targets, given)

    def intervene(self, node, value=None):
        assignment = dict(node) if isinstance(node, Mapping) else {node: value}
        self._guard(assignment)
        return constrain_collider(do_intervene(self.base, assignment), self.constraint, require_collider=False)


def constrain_collider(scm: Scm, constraint, value=None, require_collider: bool = True) -> ConstrainedScm:
    """Lock a collider: condition the joint on it, then drop it from the model."""
    if not isinstance(constraint, Constraint):
        constraint = Constraint(constraint, value)
    node = constraint.node
    if node not in scm.dag:
        raise UnknownVariableError(f"model has no node {node!r}")
    if require_collider and not scm.dag.is_collider(node):
        raise ConstraintTargetError(f"{node!r} has {scm.dag.in_degree(node)} parents; only colliders can be locked")
    scm.index(node, constraint.locked_value)
    joint = exact_joint(scm)
    mass = joint.prob({node: constraint.locked_value})
    if mass <= 0:
        raise ConditioningError(f"{node}={constraint.locked_value!r} has zero prior probability")
    conditioned, _ = joint.condition({node: constraint.locked_value}, drop=True)
    conditioned.metadata["locked"] = {"node": node, "value": constraint.locked_value}
    return ConstrainedScm(scm, constraint, conditioned, mass)


def ccc_counterfactual(cscm: ConstrainedScm, evidence: Mapping, intervention: Mapping, query) -> dict:
    """Counterfactual across a locked collider: intervene, then re-impose the lock.

    The intervention is applied to the base model, the lock is re-imposed by
    conditioning, and the evidence on non-intervened nodes is conditioned
    on; the query's distribution is returned as ``{value: probability}``.
    """
    evidence = dict(evidence or {})
    intervention = dict(intervention or {})
    cscm._guard(list(evidence) + list(intervention) + [query])
    base = cscm.base
    _normalize_assignment(base, evidence)
    _normalize_assignment(base, intervention)
    if query not in base.domains:
        raise UnknownVariableError(f"model has no node {query!r}")
    if evidence and cscm.joint.prob(evidence) <= 0:
        raise ConditioningError(f"evidence {evidence} is impossible under the lock")
    joint = exact_joint(do_intervene(base, intervention)) if intervention else exact_joint(base)
    lock = {cscm.constraint.node: cscm.constraint.locked_value}
    surviving = {k: v for k, v in evidence.items() if k not in intervention}
    try:
        locked, _ = joint.condition(lock)
        world, _ = locked.condition(surviving) if surviving else (locked, 1.0)
    except ConditioningError as exc:
        raise InfeasibleCounterfactualError(
            f"intervention {intervention} is incompatible with the lock {lock} and evidence {surviving}") from exc
    dist = world.marginal(query).probs
    return {v: float(p) for v, p in zip(base.domains[query], dist)}


# -- scenario builders --------------------------------------------------------

LOCKED_COMPATIBLE = "locked_compatible"
UNLOCKED_DEMO = "unlocked_demo"


def _parse_mode(mode: str) -> str:
    text = str(mode).strip().lower().replace("-", "_")
    if text not in (LOCKED_COMPATIBLE, UNLOCKED_DEMO):
        raise ParameterError(f"unknown mode {mode!r}; expected locked_compatible or unlocked_demo")
    return text


def demo_pattern(a: int, b: int) -> int:
    """Fixed +-1 pattern used by the unlocked demo: +1 when either setting is 0."""
    return 1 if (a == 0 or b == 0) else -1


def _pair_latent_cpts():
    """CPTs realizing the quantum pair (A, B) through a 4-valued latent L.

    ``L = 2A + B`` is drawn from the quantum outcome table for its parents
    (a, b, I); A and B read their bit of L deterministically.
    """
    pair = np.zeros((3, 3, 2, 4))
    for a in Setting:
        for b in Setting:
            for label in InitialLabel:
                pair[a, b, label - 1] = quantum_outcome_table(label, a.azimuth - b.azimuth).ravel()
    bit_a = np.array([[1, 0], [1, 0], [0, 1], [0, 1]], dtype=float)
    bit_b = np.array([[1, 0], [0, 1], [1, 0], [0, 1]], dtype=float)
    return pair, bit_a, bit_b


def build_bigv_retro_scm(mode: str = LOCKED_COMPATIBLE, epsilon: float = 0.2) -> Scm:
    """BIG-V with Initial Control turned off: ``I`` is a collider of ``a`` and ``b``.

    ``locked_compatible`` keeps the edges ``a -> I <- b`` but gives every row
    of ``P(I | a, b)`` the value (1/2, 1/2). ``unlocked_demo`` uses
    ``P(I1 | a, b) = 1/2 + epsilon * demo_pattern(a, b)`` instead.

    The internal node ``L`` (parents a, b, I) carries the outcome pair; its
    children A and B copy their bit. A latent with only ``I`` as parent
    cannot reproduce the trine statistics, since it would be a local
    hidden-variable model.
    """
    mode = _parse_mode(mode)
    if not -0.5 < epsilon < 0.5:
        raise ParameterError(f"epsilon must lie in (-1/2, 1/2), got {epsilon}")
    fig3 = figure_graph("fig3")
    dag = Dag(("a", "b", "I", "L", "A", "B"),
              list(fig3.edges) + [("a", "L"), ("b", "L"), ("I", "L"), ("L", "A"), ("L", "B")])
    p_i = np.full((3, 3, 2), 0.5)
    if mode == UNLOCKED_DEMO:
        for a in range(3):
            for b in range(3):
                p1 = 0.5 + epsilon * demo_pattern(a, b)
                p_i[a, b] = (p1, 1.0 - p1)
    pair, bit_a, bit_b = _pair_latent_cpts()
    cpts = {
        "a": Cpt("a", (), np.full(3, 1 / 3)),
        "b": Cpt("b", (), np.full(3, 1 / 3)),
        "I": Cpt("I", ("a", "b"), p_i),
        "L": Cpt("L", ("a", "b", "I"), pair),
        "A": Cpt("A", ("a", "I", "L"), np.broadcast_to(bit_a, (3, 2, 4, 2))),
        "B": Cpt("B", ("b", "I", "L"), np.broadcast_to(bit_b, (3, 2, 4, 2))),
    }
    domains = {**BELL_DOMAINS, "L": (0, 1, 2, 3)}
    meta = {"mode": mode}
    if mode == UNLOCKED_DEMO:
        meta.update(epsilon=epsilon, demo_only=True)
    return Scm(dag, domains, cpts, internal=("L",), name=f"bigv-retro/{mode}", metadata=meta)


def build_fig4_scm() -> Scm:
    """BIG-V drawn with direct cross-wing arrows a -> B and b -> A.

    ``I`` is an exogenous fair coin; the pair again comes from the latent L,
    here with parents (I, a, b).
    """
    fig4 = figure_graph("fig4")
    dag = Dag(("I", "a", "b", "L", "A", "B"),
              list(fig4.edges) + [("I", "L"), ("a", "L"), ("b", "L"), ("L", "A"), ("L", "B")])
    pair, bit_a, bit_b = _pair_latent_cpts()
    cpts = {
        "I": Cpt("I", (), np.array([0.5, 0.5])),
        "a": Cpt("a", (), np.full(3, 1 / 3)),
        "b": Cpt("b", (), np.full(3, 1 / 3)),
        "L": Cpt("L", ("a", "b", "I"), pair),
        "A": Cpt("A", ("I", "a", "b", "L"), np.broadcast_to(bit_a, (2, 3, 3, 4, 2))),
        "B": Cpt("B", ("I", "a", "b", "L"), np.broadcast_to(bit_b, (2, 3, 3, 4, 2))),
    }
    domains = {**BELL_DOMAINS, "L": (0, 1, 2, 3)}
    return Scm(dag, domains, cpts, internal=("L",), name="bigv-fig4")


def build_damascus_scm(constrained: bool = False):
    """You and Death each pick a city uniformly; ``M`` is 1 iff you meet.

    With ``constrained`` the meeting is locked at ``M = 1``.
    """
    dag = figure_graph("fig5")
    meet = np.zeros((2, 2, 2))
    for i in range(2):
        for j in range(2):
            meet[i, j, int(i == j)] = 1.0
    cpts = {
        "you": Cpt("you", (), np.array([0.5, 0.5])),
        "death": Cpt("death", (), np.array([0.5, 0.5])),
        "M": Cpt("M", ("you", "death"), meet),
    }
    domains = {"you": DAMASCUS_CITIES, "death": DAMASCUS_CITIES, "M": (0, 1)}
    scm = Scm(dag, domains, cpts, name="damascus")
    if constrained:
        return constrain_collider(scm, Constraint("M", 1))
    return scm


def random_scm(rng: np.random.Generator, max_nodes: int = 6, edge_prob: float = 0.5,
               min_nodes: int = 2, concentration: float = 1.0) -> Scm:
    """Random binary SCM with Dirichlet-distributed CPT rows."""
    k = int(rng.integers(min_nodes, max_nodes + 1))
    names = list(string.ascii_lowercase[:k])
    edges = [(names[i], names[j]) for i in range(k) for j in range(i + 1, k) if rng.random() < edge_prob]
    dag = Dag(names, edges)
    cpts = {}
    for node in names:
        parents = dag.parents(node)
        shape = (2,) * len(parents)
        rows = rng.dirichlet([concentration, concentration], size=int(np.prod(shape, dtype=int)))
        cpts[node] = Cpt(node, parents, rows.reshape(shape + (2,)))
    return Scm(dag, {n: (0, 1) for n in names}, cpts, name="random")
