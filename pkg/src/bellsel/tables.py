"""Exact joint distributions over named discrete variables."""
from __future__ import annotations

import itertools
import json
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import ArgumentError, ConditioningError, UnknownVariableError

SUM_TOL = 1e-12


def _as_names(names) -> tuple:
    if names is None:
        return ()
    if isinstance(names, str):
        return (names,)
    return tuple(names)


class JointTable:
    """Probability array with one axis per named variable.

    Values on each axis are labelled by ``domains[var]``; assignments passed
    to the query methods use these labels, not axis positions.
    """

    def __init__(self, variables: Sequence[str], domains: Mapping[str, Sequence], probs, metadata=None):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ArgumentError(f"duplicate variable names in {self.variables}")
        self.domains = {v: tuple(domains[v]) for v in self.variables}
        probs = np.asarray(probs, dtype=float)
        shape = tuple(len(self.domains[v]) for v in self.variables)
        if probs.shape != shape:
            raise ArgumentError(f"probability array has shape {probs.shape}, expected {shape}")
        if np.any(probs < -SUM_TOL):
            raise ArgumentError("negative probability in table")
        total = probs.sum()
        if abs(total - 1.0) > SUM_TOL:
            raise ArgumentError(f"table sums to {total!r}, expected 1")
        probs = np.clip(probs, 0.0, None)
        probs.setflags(write=False)
        self.probs = probs
        self.metadata = dict(metadata or {})

    # -- lookup helpers -------------------------------------------------

    def axis(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise UnknownVariableError(f"table has no variable {var!r}") from None

    def index(self, var: str, value) -> int:
        domain = self.domains[self.variables[self.axis(var)]]
        try:
            return domain.index(value)
        except ValueError:
            raise UnknownVariableError(f"{value!r} is not in the domain of {var!r}: {domain}") from None

    def _selector(self, assignment: Mapping) -> tuple:
        sel = [slice(None)] * len(self.variables)
        for var, value in assignment.items():
            sel[self.axis(var)] = self.index(var, value)
        return tuple(sel)

    def __contains__(self, var) -> bool:
        return var in self.variables

    def __repr__(self):
        return f"JointTable({', '.join(self.variables)}; {self.probs.size} cells)"

    # -- queries --------------------------------------------------------

    def prob(self, assignment: Mapping | None = None, **kwargs) -> float:
        """Probability of a partial assignment, summing out the rest."""
        assignment = {**(assignment or {}), **kwargs}
        return float(self.probs[self._selector(assignment)].sum())

    def entries(self) -> Iterator[tuple[dict, float]]:
        for idx in itertools.product(*(range(len(self.domains[v])) for v in self.variables)):
            yield {v: self.domains[v][i] for v, i in zip(self.variables, idx)}, float(self.probs[idx])

    def marginal(self, variables: Iterable[str]) -> "JointTable":
        keep = _as_names(variables)
        axes = [self.axis(v) for v in keep]
        drop = tuple(i for i in range(len(self.variables)) if i not in axes)
        arr = self.probs.sum(axis=drop) if drop else self.probs
        # remaining axes are in table order; permute into requested order
        order = sorted(axes)
        arr = np.transpose(arr, [order.index(a) for a in axes])
        meta = dict(self.metadata)
        marginalized = set(meta.get("marginalized", [])) | {self.variables[i] for i in drop}
        if marginalized:
            meta["marginalized"] = sorted(marginalized)
        return JointTable(keep, self.domains, arr, meta)

    def condition(self, assignment: Mapping, drop: bool = False) -> tuple["JointTable", float]:
        """Restrict to ``assignment`` and renormalize.

        Returns the conditioned table and the probability mass of the event.
        With ``drop`` the conditioned variables are removed from the result.
        """
        sel = self._selector(assignment)
        mask = np.zeros_like(self.probs)
        mask[sel] = 1.0
        kept = self.probs * mask
        mass = float(kept.sum())
        if mass <= 0.0:
            raise ConditioningError(f"event {dict(assignment)} has probability zero")
        table = JointTable(self.variables, self.domains, kept / mass, self.metadata)
        if drop:
            rest = [v for v in self.variables if v not in assignment]
            table = JointTable(rest, self.domains, table.probs[sel], self.metadata)
        return table, mass

    def conditional(self, targets, given: Mapping) -> "JointTable":
        """Distribution of ``targets`` given an assignment of other variables."""
        table, _ = self.condition(given)
        return table.marginal(targets)

    def mutual_information(self, x, y) -> float:
        """Exact mutual information in nats between variable groups."""
        x, y = _as_names(x), _as_names(y)
        pxy = self.marginal(x + y).probs
        px = pxy.sum(axis=tuple(range(len(x), len(x) + len(y))), keepdims=True)
        py = pxy.sum(axis=tuple(range(len(x))), keepdims=True)
        denom = px * py
        nz = pxy > 0
        return float(np.sum(pxy[nz] * np.log(pxy[nz] / np.broadcast_to(denom, pxy.shape)[nz])))

    def correlation(self, x: str, y: str, coding: Mapping | None = None) -> float:
        """Pearson correlation of two variables under a numeric coding of labels."""
        coding = coding or {}
        pxy = self.marginal((x, y)).probs

        def values(var):
            codes = coding.get(var, {})
            return np.array([codes.get(v, i) for i, v in enumerate(self.domains[var])], float)

        vx, vy = values(x), values(y)
        ex = float(pxy.sum(1) @ vx)
        ey = float(pxy.sum(0) @ vy)
        cov = float(vx @ pxy @ vy) - ex * ey
        var_x = float(pxy.sum(1) @ vx ** 2) - ex ** 2
        var_y = float(pxy.sum(0) @ vy ** 2) - ey ** 2
        if var_x <= 1e-15 or var_y <= 1e-15:
            return 0.0
        return cov / np.sqrt(var_x * var_y)

    def independence_gap(self, x, y, given=()) -> float:
        """max |P(x,y|z) - P(x|z)P(y|z)| over all values, for z with P(z) > 0."""
        x, y, z = _as_names(x), _as_names(y), _as_names(given)
        if set(x) & set(y) or set(x) & set(z) or set(y) & set(z):
            raise ArgumentError("variable groups must be disjoint")
        if not x or not y:
            for v in x + y + z:
                self.axis(v)
            return 0.0
        sizes = [int(np.prod([len(self.domains[v]) for v in grp])) for grp in (x, y, z)]
        arr = self.marginal(x + y + z).probs.reshape(sizes)
        pz = arr.sum(axis=(0, 1))
        live = pz > 0
        if not live.any():
            return 0.0
        cond = arr[:, :, live] / pz[live]
        px = cond.sum(axis=1, keepdims=True)
        py = cond.sum(axis=0, keepdims=True)
        return float(np.max(np.abs(cond - px * py)))

    def max_abs_diff(self, other: "JointTable") -> float:
        """Largest entrywise difference after aligning variables by name."""
        if set(self.variables) != set(other.variables):
            raise ArgumentError(f"variable sets differ: {self.variables} vs {other.variables}")
        for v in self.variables:
            if set(self.domains[v]) != set(other.domains[v]):
                raise ArgumentError(f"domains of {v!r} differ")
        aligned = other.marginal(self.variables)
        perm = []
        for v in self.variables:
            perm.append([aligned.domains[v].index(val) for val in self.domains[v]])
        arr = aligned.probs[np.ix_(*perm)]
        return float(np.max(np.abs(self.probs - arr)))

    def allclose(self, other: "JointTable", atol: float = 1e-12) -> bool:
        return self.max_abs_diff(other) <= atol

    # -- serialization --------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variables),
            "domains": {v: list(self.domains[v]) for v in self.variables},
            "entries": [{**a, "p": p} for a, p in self.entries()],
            "metadata": self.metadata,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: Mapping) -> "JointTable":
        variables = tuple(data["variables"])
        domains = {v: tuple(data["domains"][v]) for v in variables}
        probs = np.zeros(tuple(len(domains[v]) for v in variables))
        for entry in data["entries"]:
            idx = tuple(domains[v].index(entry[v]) for v in variables)
            probs[idx] += float(entry["p"])
        return cls(variables, domains, probs, data.get("metadata"))

    @classmethod
    def from_json(cls, text: str) -> "JointTable":
        return cls.from_dict(json.loads(text))
