"""
The three trine Bell experiments and operations on their tables and samples.

V1 prepares I1 (equal outcomes at equal settings), V2 prepares the singlet I2
(opposite outcomes at equal settings), and BIGV mixes the two with a fair
per-trial coin. Settings index the trine azimuths 0, 2pi/3, 4pi/3.
"""
from __future__ import annotations

import csv
import enum
import io
import math
import os
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from . import quantum
from . import rng as _rng
from .errors import (DatasetFormatError, DegeneratePosteriorError, EmptyDatasetError,
                     EmptySelectionError, InvalidPolicyError, PreconditionError)
from .quantum import InitialLabel
from .tables import JointTable

__all__ = [
    "Setting", "InitialLabel", "ExperimentKind", "TrialRecord", "Dataset",
    "BELL_VARIABLES", "BELL_DOMAINS", "uniform_policy", "setting_policy",
    "closed_form_table", "quantum_outcome_table", "kernel_table", "sample_trials",
    "posterior_initial", "preselect", "same_outcome_rates", "read_csv",
]

BELL_VARIABLES = ("a", "b", "I", "A", "B")
BELL_DOMAINS = {"a": (0, 1, 2), "b": (0, 1, 2), "I": (1, 2), "A": (0, 1), "B": (0, 1)}
CSV_HEADER = ("trial", "a", "b", "A", "B", "I")


class Setting(enum.IntEnum):
    S0 = 0
    S1 = 1
    S2 = 2

    @property
    def azimuth(self) -> float:
        return 2.0 * math.pi * int(self) / 3.0


class ExperimentKind(enum.Enum):
    V1 = "v1"
    V2 = "v2"
    BIGV = "bigv"

    @classmethod
    def parse(cls, value) -> "ExperimentKind":
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower().replace("-", "").replace("_", "")
        for kind in cls:
            if kind.value == text:
                return kind
        raise ValueError(f"unknown experiment {value!r}; expected v1, v2 or bigv")

    @property
    def label_weights(self) -> dict:
        if self is ExperimentKind.V1:
            return {InitialLabel.I1: 1.0, InitialLabel.I2: 0.0}
        if self is ExperimentKind.V2:
            return {InitialLabel.I1: 0.0, InitialLabel.I2: 1.0}
        return {InitialLabel.I1: 0.5, InitialLabel.I2: 0.5}


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    a: int
    b: int
    A: int
    B: int
    i: Optional[InitialLabel] = None


def uniform_policy() -> np.ndarray:
    return np.full((3, 3), 1.0 / 9.0)


def setting_policy(policy=None) -> np.ndarray:
    """Validate a distribution over the nine ``(a, b)`` pairs.

    ``None`` or ``"uniform"`` gives independent uniform choices. Every pair
    must have positive probability, otherwise the conditionals used by the
    posteriors are undefined.
    """
    if policy is None or (isinstance(policy, str) and policy == "uniform"):
        return uniform_policy()
    arr = np.asarray(policy, dtype=float)
    if arr.shape != (3, 3):
        raise InvalidPolicyError(f"setting policy must be 3x3, got shape {arr.shape}")
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0):
        raise InvalidPolicyError("setting policy must give every (a, b) pair positive probability")
    if abs(arr.sum() - 1.0) > 1e-12:
        raise InvalidPolicyError(f"setting policy sums to {arr.sum()!r}")
    return arr


def quantum_outcome_table(label, delta: float) -> np.ndarray:
    """Closed-form ``p[A, B]`` for azimuth difference ``delta``.

    I1 has correlation +cos(delta), the singlet -cos(delta); both marginals
    are fair.
    """
    label = InitialLabel.parse(label)
    corr = math.cos(delta) if label is InitialLabel.I1 else -math.cos(delta)
    sign = np.array([[1.0, -1.0], [-1.0, 1.0]])
    return 0.25 * (1.0 + sign * corr)


def closed_form_table(kind, policy=None) -> JointTable:
    """Exact joint over ``(a, b, I, A, B)`` for one of the named experiments."""
    kind = ExperimentKind.parse(kind)
    pol = setting_policy(policy)
    probs = np.zeros((3, 3, 2, 2, 2))
    for a in Setting:
        for b in Setting:
            delta = a.azimuth - b.azimuth
            for label, weight in kind.label_weights.items():
                if weight == 0.0:
                    continue
                probs[a, b, label - 1] = pol[a, b] * weight * quantum_outcome_table(label, delta)
    locked = {ExperimentKind.V1: "I1", ExperimentKind.V2: "I2"}.get(kind)
    meta = {"kind": kind.value, "locked": locked, "setting_policy": pol.tolist()}
    return JointTable(BELL_VARIABLES, BELL_DOMAINS, probs, meta)


def kernel_table(label, alphas=None, betas=None, policy=None) -> JointTable:
    """Joint over ``(a, b, I, A, B)`` computed from the state-vector kernel.

    Defaults to the trine azimuths on both wings; arbitrary azimuth lists
    give tables whose setting axes index those lists. ``policy`` must match
    their sizes (uniform by default).
    """
    label = InitialLabel.parse(label)
    trine = [s.azimuth for s in Setting]
    alphas = trine if alphas is None else list(alphas)
    betas = trine if betas is None else list(betas)
    if policy is None:
        policy = np.full((len(alphas), len(betas)), 1.0 / (len(alphas) * len(betas)))
    policy = np.asarray(policy, dtype=float)
    state = quantum.make_state(label)
    probs = np.zeros((len(alphas), len(betas), 2, 2, 2))
    for i, alpha in enumerate(alphas):
        for j, beta in enumerate(betas):
            probs[i, j, label - 1] = policy[i, j] * quantum.outcome_distribution(state, alpha, beta)
    domains = {**BELL_DOMAINS, "a": tuple(range(len(alphas))), "b": tuple(range(len(betas)))}
    meta = {"source": "kernel", "locked": label.name, "alphas": alphas, "betas": betas}
    return JointTable(BELL_VARIABLES, domains, probs, meta)


class Dataset:
    """Column-oriented collection of Bell trials.

    ``I`` holds the true initial label (1 or 2) per trial, or is ``None``
    once masked.
    """

    def __init__(self, a, b, A, B, I=None, seed=None, kind=None, setting_policy=None):
        self.a = np.asarray(a, dtype=np.int8)
        self.b = np.asarray(b, dtype=np.int8)
        self.A = np.asarray(A, dtype=np.int8)
        self.B = np.asarray(B, dtype=np.int8)
        self.I = None if I is None else np.asarray(I, dtype=np.int8)
        n = len(self.a)
        if any(len(col) != n for col in self.columns().values()):
            raise ValueError("dataset columns have different lengths")
        self.seed = seed
        self.kind = None if kind is None else ExperimentKind.parse(kind)
        self.setting_policy = None if setting_policy is None else np.asarray(setting_policy)

    def __len__(self) -> int:
        return len(self.a)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        mine, theirs = self.columns(), other.columns()
        return mine.keys() == theirs.keys() and all(np.array_equal(mine[k], theirs[k]) for k in mine)

    def columns(self) -> dict:
        cols = {"a": self.a, "b": self.b, "A": self.A, "B": self.B}
        if self.I is not None:
            cols["I"] = self.I
        return cols

    @property
    def domains(self) -> dict:
        return {k: BELL_DOMAINS[k] for k in self.columns()}

    @property
    def has_initial(self) -> bool:
        return self.I is not None

    def __iter__(self) -> Iterator[TrialRecord]:
        for t in range(len(self)):
            label = None if self.I is None else InitialLabel(int(self.I[t]))
            yield TrialRecord(t, int(self.a[t]), int(self.b[t]), int(self.A[t]), int(self.B[t]), label)

    @property
    def records(self) -> list:
        return list(self)

    def masked(self) -> "Dataset":
        return Dataset(self.a, self.b, self.A, self.B, None, self.seed, self.kind, self.setting_policy)

    def subset(self, mask) -> "Dataset":
        mask = np.asarray(mask, dtype=bool)
        I = None if self.I is None else self.I[mask]
        return Dataset(self.a[mask], self.b[mask], self.A[mask], self.B[mask], I,
                       self.seed, self.kind, self.setting_policy)

    def empirical_table(self) -> JointTable:
        """Relative frequencies as a :class:`JointTable`."""
        if len(self) == 0:
            raise EmptyDatasetError("no records")
        cols = self.columns()
        variables = [v for v in BELL_VARIABLES if v in cols]
        shape = tuple(len(BELL_DOMAINS[v]) for v in variables)
        idx = [cols[v] - (1 if v == "I" else 0) for v in variables]
        flat = np.ravel_multi_index(idx, shape)
        counts = np.bincount(flat, minlength=int(np.prod(shape))).reshape(shape)
        return JointTable(variables, BELL_DOMAINS, counts / len(self), {"empirical": True, "n": len(self)})

    # -- CSV --------------------------------------------------------------

    def to_csv(self, target) -> None:
        """Write ``trial,a,b,A,B,I``; ``I`` is empty when masked."""
        if isinstance(target, (str, os.PathLike)):
            with open(target, "w", newline="") as fh:
                self.to_csv(fh)
            return
        target.write(self.to_csv_text())

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(CSV_HEADER) + "\n")
        I = self.I
        for t in range(len(self)):
            tag = "" if I is None else str(int(I[t]))
            buf.write(f"{t},{self.a[t]},{self.b[t]},{self.A[t]},{self.B[t]},{tag}\n")
        return buf.getvalue()


def read_csv(source) -> Dataset:
    """Parse a dataset CSV, raising :class:`DatasetFormatError` with the line number."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, newline="") as fh:
            return read_csv(fh)
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise DatasetFormatError("empty file", line=1) from None
    if tuple(h.strip() for h in header) != CSV_HEADER:
        raise DatasetFormatError(f"expected header {','.join(CSV_HEADER)}", line=1)
    a, b, A, B, I = [], [], [], [], []
    masked = None
    for row in reader:
        line = reader.line_num
        if not row:
            continue
        if len(row) != len(CSV_HEADER):
            raise DatasetFormatError(f"expected {len(CSV_HEADER)} fields, got {len(row)}", line=line)
        try:
            t, va, vb, vA, vB = (int(x) for x in row[:5])
        except ValueError:
            raise DatasetFormatError("non-integer field", line=line) from None
        if t != len(a):
            raise DatasetFormatError(f"trial index {t} out of sequence", line=line)
        if va not in (0, 1, 2) or vb not in (0, 1, 2) or vA not in (0, 1) or vB not in (0, 1):
            raise DatasetFormatError("value out of range", line=line)
        tag = row[5].strip()
        row_masked = tag == ""
        if masked is None:
            masked = row_masked
        elif masked != row_masked:
            raise DatasetFormatError("I column is masked on some rows only", line=line)
        if not row_masked:
            if tag not in ("1", "2"):
                raise DatasetFormatError(f"I must be 1, 2 or empty, got {tag!r}", line=line)
            I.append(int(tag))
        a.append(va)
        b.append(vb)
        A.append(vA)
        B.append(vB)
    return Dataset(a, b, A, B, None if masked or masked is None else I)


def sample_trials(kind, n: int, seed: int, policy=None, workers: int = 1,
                  chunk_size: int = _rng.CHUNK_SIZE) -> Dataset:
    """Draw ``n`` i.i.d. trials from :func:`closed_form_table`.

    Each trial uses one uniform variate, inverted through the cumulative
    distribution of the flattened ``(a, b, I, A, B)`` table.
    """
    n = int(n)
    if n < 1:
        raise EmptyDatasetError("n must be at least 1")
    kind = ExperimentKind.parse(kind)
    table = closed_form_table(kind, policy)
    shape = table.probs.shape
    cdf = _rng.safe_cdf(table.probs.ravel())[None, :]

    def draw(gen, size):
        return _rng.inverse_cdf(np.broadcast_to(cdf, (size, cdf.shape[1])), gen.random(size))

    flat = np.concatenate(_rng.map_chunks(draw, seed, n, workers, chunk_size))
    a, b, i, A, B = np.unravel_index(flat, shape)
    return Dataset(a, b, A, B, i + 1, seed=seed, kind=kind, setting_policy=table.metadata["setting_policy"])


def _relation_mask(table: JointTable, settings_relation: str, outcomes_relation: str) -> np.ndarray:
    for rel in (settings_relation, outcomes_relation):
        if rel not in ("equal", "unequal"):
            raise ValueError(f"relation must be 'equal' or 'unequal', got {rel!r}")
    a = np.arange(3)[:, None, None, None, None]
    b = np.arange(3)[None, :, None, None, None]
    A = np.arange(2)[None, None, None, :, None]
    B = np.arange(2)[None, None, None, None, :]
    settings = (a == b) if settings_relation == "equal" else (a != b)
    outcomes = (A == B) if outcomes_relation == "equal" else (A != B)
    return np.broadcast_to(settings & outcomes, table.probs.shape)


def _bell_view(table: JointTable) -> JointTable:
    missing = [v for v in BELL_VARIABLES if v not in table]
    if missing:
        raise PreconditionError(f"table lacks variables {missing}")
    return table.marginal(BELL_VARIABLES)


def posterior_initial(table: JointTable, settings_relation: str, outcomes_relation: str) -> tuple:
    """``(P(I1 | .), P(I2 | .))`` given the settings and outcomes relations."""
    table = _bell_view(table)
    prior = table.marginal("I").probs
    if np.any(prior <= 0):
        raise DegeneratePosteriorError("initial-state label is locked in this table")
    mask = _relation_mask(table, settings_relation, outcomes_relation)
    joint = np.where(mask, table.probs, 0.0).sum(axis=(0, 1, 3, 4))
    total = joint.sum()
    if total <= 0:
        raise DegeneratePosteriorError("conditioning event has probability zero")
    post = joint / total
    return float(post[0]), float(post[1])


def same_outcome_rates(source) -> dict:
    """P(A=B) overall and split by equal/unequal settings.

    Works on a :class:`JointTable` or, empirically, on a :class:`Dataset`.
    """
    if isinstance(source, Dataset):
        eq = source.a == source.b
        same = source.A == source.B
        out = {"P(A=B)": float(same.mean())}
        out["P(A=B|a=b)"] = float(same[eq].mean()) if eq.any() else float("nan")
        out["P(A=B|a!=b)"] = float(same[~eq].mean()) if (~eq).any() else float("nan")
        return out
    t = source.marginal(("a", "b", "A", "B")).probs
    a = np.arange(3)[:, None, None, None]
    b = np.arange(3)[None, :, None, None]
    same = (np.arange(2)[:, None] == np.arange(2)[None, :])[None, None]
    eq = np.broadcast_to(a == b, t.shape)
    same = np.broadcast_to(same, t.shape)
    return {
        "P(A=B)": float(t[same].sum()),
        "P(A=B|a=b)": float(t[same & eq].sum() / t[eq].sum()),
        "P(A=B|a!=b)": float(t[same & ~eq].sum() / t[~eq].sum()),
    }


def preselect(data, label):
    """Keep only trials (or probability mass) prepared in ``label``.

    Tables are renormalized and keep their ``I`` axis; the retained mass and
    the renormalization factor are recorded under ``metadata["preselection"]``.
    Datasets are filtered row-wise.
    """
    label = InitialLabel.parse(label)
    if isinstance(data, Dataset):
        if not data.has_initial:
            raise PreconditionError("dataset has no initial-state column")
        mask = data.I == int(label)
        if not mask.any():
            raise EmptySelectionError(f"no trials with I={label.name}")
        return data.subset(mask)
    if "I" not in data:
        raise PreconditionError("table has no initial-state variable")
    mass = data.prob(I=int(label))
    if mass <= 0:
        raise EmptySelectionError(f"no probability mass at I={label.name}")
    selected, _ = data.condition({"I": int(label)})
    selected.metadata.update(
        locked=label.name,
        preselection={"label": label.name, "retained_mass": mass, "renormalization_factor": 1.0 / mass},
    )
    return selected
