"""
Directed acyclic graphs, d-separation, and the figure graphs of the
Bell-experiment scenarios.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import ArgumentError, CycleError, UnknownVariableError
from .quantum import InitialLabel

__all__ = [
    "Dag", "build_dag", "is_collider", "d_separated", "Claim", "DependencyClaimSet",
    "LockedStructure", "figure_graph", "FIGURE_IDS",
]


class Dag:
    """Immutable DAG over named nodes.

    Node order is kept as given and used as the tie-break in
    :meth:`topological_order`, so all iteration is deterministic.
    """

    def __init__(self, nodes: Iterable[str], edges: Iterable = ()):
        self.nodes = tuple(dict.fromkeys(nodes))
        known = set(self.nodes)
        seen = []
        for edge in edges:
            u, v = edge
            for n in (u, v):
                if n not in known:
                    raise UnknownVariableError(f"edge {u}->{v} references undeclared node {n!r}")
            if u == v:
                raise CycleError((u, u))
            if (u, v) in seen:
                raise ArgumentError(f"duplicate edge {u}->{v}")
            seen.append((u, v))
        self.edges = frozenset(seen)
        self._parents = {n: tuple(p for p in self.nodes if (p, n) in self.edges) for n in self.nodes}
        self._children = {n: tuple(c for c in self.nodes if (n, c) in self.edges) for n in self.nodes}
        self._order = self._toposort()

    def _toposort(self) -> tuple:
        indeg = {n: len(self._parents[n]) for n in self.nodes}
        ready = [n for n in self.nodes if indeg[n] == 0]
        order = []
        while ready:
            n = ready.pop(0)
            order.append(n)
            for c in self._children[n]:
                indeg[c] -= 1
                if indeg[c] == 0:
                    ready.append(c)
            ready.sort(key=self.nodes.index)
        if len(order) != len(self.nodes):
            raise CycleError(self._find_cycle(set(self.nodes) - set(order)))
        return tuple(order)

    def _find_cycle(self, remaining: set) -> list:
        # every node left after Kahn's algorithm lies on or downstream of a cycle;
        # walking parents inside the remainder must revisit a node
        node = next(n for n in self.nodes if n in remaining)
        path = [node]
        while True:
            node = next(p for p in self._parents[node] if p in remaining)
            if node in path:
                cycle = path[path.index(node):]
                return list(reversed(cycle)) + [cycle[-1]]
            path.append(node)

    # -- basic structure -------------------------------------------------

    def _check(self, node):
        if node not in self._parents:
            raise UnknownVariableError(f"graph has no node {node!r}")

    def __contains__(self, node) -> bool:
        return node in self._parents

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dag):
            return NotImplemented
        return set(self.nodes) == set(other.nodes) and self.edges == other.edges

    def __hash__(self):
        return hash((frozenset(self.nodes), self.edges))

    def __repr__(self):
        arcs = ", ".join(f"{u}->{v}" for u, v in sorted(self.edges, key=lambda e: (self.nodes.index(e[0]), self.nodes.index(e[1]))))
        return f"Dag(nodes={list(self.nodes)}, edges=[{arcs}])"

    def parents(self, node) -> tuple:
        self._check(node)
        return self._parents[node]

    def children(self, node) -> tuple:
        self._check(node)
        return self._children[node]

    def in_degree(self, node) -> int:
        return len(self.parents(node))

    def topological_order(self) -> tuple:
        return self._order

    def ancestors(self, nodes) -> set:
        """Strict ancestors of a node or node set."""
        nodes = {nodes} if isinstance(nodes, str) else set(nodes)
        for n in nodes:
            self._check(n)
        out, stack = set(), list(nodes)
        while stack:
            for p in self._parents[stack.pop()]:
                if p not in out:
                    out.add(p)
                    stack.append(p)
        return out

    def descendants(self, nodes) -> set:
        nodes = {nodes} if isinstance(nodes, str) else set(nodes)
        for n in nodes:
            self._check(n)
        out, stack = set(), list(nodes)
        while stack:
            for c in self._children[stack.pop()]:
                if c not in out:
                    out.add(c)
                    stack.append(c)
        return out

    def is_collider(self, node) -> bool:
        return self.in_degree(node) >= 2

    def without_incoming(self, node) -> "Dag":
        self._check(node)
        return Dag(self.nodes, [e for e in self.edges if e[1] != node])

    def with_edges(self, edges) -> "Dag":
        return Dag(self.nodes, list(self.edges) + list(edges))

    def with_nodes(self, nodes, edges=()) -> "Dag":
        return Dag(self.nodes + tuple(nodes), list(self.edges) + list(edges))

    def induced(self, nodes) -> "Dag":
        keep = [n for n in self.nodes if n in set(nodes)]
        return Dag(keep, [e for e in self.edges if e[0] in keep and e[1] in keep])

    # -- d-separation ----------------------------------------------------

    def d_separated(self, x, y, z=()) -> bool:
        """True iff every path between ``x`` and ``y`` is blocked by ``z``.

        Reachability search over (node, direction) states; a collider passes
        the search only when it is in ``z`` or has a descendant in ``z``.
        """
        x, y, z = (_as_set(s) for s in (x, y, z))
        for n in x | y | z:
            self._check(n)
        if x & y or x & z or y & z:
            raise ArgumentError("X, Y and Z must be disjoint")
        if not x or not y:
            return True
        opened = z | self.ancestors(z)
        visited = set()
        queue = deque((n, "up") for n in x)
        while queue:
            node, direction = queue.popleft()
            if (node, direction) in visited:
                continue
            visited.add((node, direction))
            if node in y:
                return False
            if direction == "up":
                if node in z:
                    continue
                queue.extend((p, "up") for p in self._parents[node])
                queue.extend((c, "down") for c in self._children[node])
            else:
                if node not in z:
                    queue.extend((c, "down") for c in self._children[node])
                if node in opened:
                    queue.extend((p, "up") for p in self._parents[node])
        return True

    # -- serialization ---------------------------------------------------

    def to_dict(self) -> dict:
        edges = sorted(self.edges, key=lambda e: (self.nodes.index(e[0]), self.nodes.index(e[1])))
        return {"nodes": list(self.nodes), "edges": [list(e) for e in edges]}

    @classmethod
    def from_dict(cls, data) -> "Dag":
        return cls(data["nodes"], [tuple(e) for e in data["edges"]])


def _as_set(nodes) -> set:
    if nodes is None:
        return set()
    if isinstance(nodes, str):
        return {nodes}
    return set(nodes)


def build_dag(nodes, edges) -> Dag:
    return Dag(nodes, edges)


def is_collider(dag: Dag, node) -> bool:
    return dag.is_collider(node)


def d_separated(dag: Dag, x, y, z=()) -> bool:
    return dag.d_separated(x, y, z)


# -- distribution-level claims --------------------------------------------


@dataclass(frozen=True)
class Claim:
    x: str
    y: str
    given: frozenset = field(default_factory=frozenset)
    dependent: bool = True

    def __post_init__(self):
        object.__setattr__(self, "given", frozenset(self.given))

    def holds_in(self, table, tol: float = 1e-10) -> bool:
        independent = table.independence_gap(self.x, self.y, sorted(self.given)) < tol
        return independent != self.dependent

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "given": sorted(self.given), "dependent": self.dependent}


class DependencyClaimSet:
    """Probabilistic (not causal) dependence assertions between variables."""

    def __init__(self, variables, claims):
        self.variables = tuple(variables)
        self.claims = tuple(claims)
        declared = set(self.variables)
        for c in self.claims:
            for v in (c.x, c.y, *c.given):
                if v not in declared:
                    raise UnknownVariableError(f"claim references undeclared variable {v!r}")

    def __iter__(self):
        return iter(self.claims)

    def __len__(self):
        return len(self.claims)

    def verify(self, table, tol: float = 1e-10) -> list:
        """``[(claim, holds)]`` against an exact joint table."""
        return [(c, c.holds_in(table, tol)) for c in self.claims]

    def to_list(self) -> list:
        return [c.to_dict() for c in self.claims]


@dataclass(frozen=True)
class LockedStructure:
    """A DAG whose collider ``node`` is fixed to ``value`` from outside the model."""

    dag: Dag
    node: str
    value: object

    def to_dict(self) -> dict:
        return {**self.dag.to_dict(), "lock": {"node": self.node, "value": self.value}}


# -- figures ----------------------------------------------------------------

FIGURE_IDS = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6")
_OPERATIONAL = ("a", "b", "I", "A", "B")


def figure_graph(figure_id: str, lock_value: Optional[InitialLabel] = InitialLabel.I2):
    """Executable version of one of the scenario figures.

    fig1 is a claim set (its arrows are probabilistic, not causal); fig6 is
    the fig3 graph with a lock marker on ``I``.
    """
    fid = str(figure_id).lower()
    if fid == "fig1":
        others = ("a", "b", "A", "B")
        claims = [Claim(v, "I", frozenset(set(others) - {v}), True) for v in others]
        return DependencyClaimSet(_OPERATIONAL, claims)
    if fid == "fig2":
        return Dag(_OPERATIONAL, [("a", "I"), ("b", "I")])
    if fid == "fig3":
        return Dag(_OPERATIONAL, [("a", "I"), ("b", "I"), ("I", "A"), ("I", "B"), ("a", "A"), ("b", "B")])
    if fid == "fig4":
        return Dag(_OPERATIONAL, [("I", "A"), ("I", "B"), ("a", "A"), ("b", "B"), ("a", "B"), ("b", "A")])
    if fid == "fig5":
        return Dag(("you", "death", "M"), [("you", "M"), ("death", "M")])
    if fid == "fig6":
        return LockedStructure(figure_graph("fig3"), "I", InitialLabel.parse(lock_value))
    raise UnknownVariableError(f"unknown figure {figure_id!r}; expected one of {FIGURE_IDS}")


def bigv_pairwise_claims() -> DependencyClaimSet:
    """The six unconditional independencies among settings and outcomes."""
    names = ("a", "b", "A", "B")
    claims = [Claim(x, y, frozenset(), False) for i, x in enumerate(names) for y in names[i + 1:]]
    return DependencyClaimSet(_OPERATIONAL, claims)
