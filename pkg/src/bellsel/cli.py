"""
Command-line front end: ``bellsel {simulate, analyze, scenario, reproduce}``.

Exit codes: 0 success, 1 usage or configuration error, 2 I/O or parse error,
3 acceptance failure.
"""
from __future__ import annotations

import argparse
import enum
import io
import json
import os
import sys
from dataclasses import dataclass, fields
from typing import Optional

import numpy as np

from . import analysis, bell, claims, scm
from .errors import BellSelError, DatasetFormatError
from .quantum import InitialLabel
from .rng import check_seed

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_ACCEPTANCE = 0, 1, 2, 3
SEED_ENV = "BELLSEL_SEED"
SCHEMA_VERSION = analysis.SCHEMA_VERSION


class UsageError(Exception):
    """Bad flags, config values or analysis names (exit 1)."""


class InputError(Exception):
    """Unreadable or malformed input, unwritable output (exit 2)."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- JSON helpers ---------------------------------------------------------------------


def _default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer, np.floating, np.bool_)):
        return obj.item()
    if isinstance(obj, enum.Enum):
        return obj.name
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False, default=_default) + "\n"


def _emit(doc, path: Optional[str]) -> None:
    text = dumps(doc)
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    _write_text(path, text)


def _write_text(path, text: str) -> None:
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror or exc}") from exc


# -- simulate ---------------------------------------------------------------------------


@dataclass
class RunConfig:
    """Everything that determines a simulation's outputs."""

    experiment: str = "bigv"
    n: int = 100_000
    seed: int = 0
    policy: object = "uniform"
    out: Optional[str] = None
    summary: Optional[str] = None
    format: str = "csv"
    workers: int = 1

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def validate(self) -> "RunConfig":
        try:
            self.experiment = bell.ExperimentKind.parse(self.experiment).value
            if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
                raise UsageError(f"n must be a positive integer, got {self.n!r}")
            self.n = int(self.n)
            self.seed = check_seed(self.seed)
            bell.setting_policy(None if self.policy == "uniform" else self.policy)
        except (ValueError, TypeError) as exc:
            raise UsageError(str(exc)) from exc
        if self.format not in ("csv", "json"):
            raise UsageError(f"format must be csv or json, got {self.format!r}")
        if int(self.workers) < 1:
            raise UsageError("workers must be at least 1")
        return self

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _load_config(path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config {path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"config {path}: top level must be an object")
    return data


def _parse_policy(text: str):
    if text == "uniform":
        return text
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--policy must be 'uniform' or a JSON 3x3 array: {exc.msg}") from exc


def _resolve_config(args) -> RunConfig:
    data = _load_config(args.config) if args.config else {}
    if "seed" not in data and os.environ.get(SEED_ENV):
        try:
            data["seed"] = int(os.environ[SEED_ENV])
        except ValueError as exc:
            raise UsageError(f"{SEED_ENV} must be an integer, got {os.environ[SEED_ENV]!r}") from exc
    for name in ("experiment", "n", "seed", "out", "summary", "format", "workers"):
        value = getattr(args, name)
        if value is not None:
            data[name] = value
    if args.policy is not None:
        data["policy"] = _parse_policy(args.policy)
    return RunConfig.from_dict(data).validate()


def dataset_to_json(data: bell.Dataset) -> dict:
    return {"schema_version": SCHEMA_VERSION, "columns": {k: v.tolist() for k, v in data.columns().items()}}


def dataset_from_json(text: str) -> bell.Dataset:
    try:
        doc = json.loads(text)
        cols = doc["columns"]
        return bell.Dataset(cols["a"], cols["b"], cols["A"], cols["B"], cols.get("I"))
    except json.JSONDecodeError as exc:
        raise DatasetFormatError(exc.msg, exc.lineno) from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise DatasetFormatError(f"bad dataset document: {exc}", 1) from exc


def empirical_summary(data: bell.Dataset, cfg: Optional[RunConfig] = None) -> dict:
    """Empirical same-outcome rates overall, by setting relation and per setting pair."""
    same = data.A == data.B
    by_pair = [[None] * 3 for _ in range(3)]
    counts = [[0] * 3 for _ in range(3)]
    for a in range(3):
        for b in range(3):
            mask = (data.a == a) & (data.b == b)
            counts[a][b] = int(mask.sum())
            by_pair[a][b] = float(same[mask].mean()) if mask.any() else None
    doc = {"schema_version": SCHEMA_VERSION}
    if cfg is not None:
        doc["config"] = cfg.to_dict()
    doc.update(n=len(data), rates=bell.same_outcome_rates(data),
               same_outcome_by_setting=by_pair, setting_counts=counts)
    if data.has_initial:
        doc["label_counts"] = {lab.name: int((data.I == int(lab)).sum()) for lab in InitialLabel}
    return doc


def cmd_simulate(args) -> int:
    cfg = _resolve_config(args)
    policy = None if cfg.policy == "uniform" else cfg.policy
    data = bell.sample_trials(cfg.experiment, cfg.n, cfg.seed, policy=policy, workers=int(cfg.workers))
    if cfg.out:
        text = data.to_csv_text() if cfg.format == "csv" else dumps(dataset_to_json(data))
        _write_text(cfg.out, text)
    summary = empirical_summary(data, cfg)
    _emit(summary, cfg.summary)
    return EXIT_OK


# -- analyze ---------------------------------------------------------------------------

ANALYSES = ("rates", "no-signalling", "posteriors")


def _read_dataset(path) -> bell.Dataset:
    try:
        with open(path, newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    if str(path).endswith(".json") or text.lstrip().startswith("{"):
        return dataset_from_json(text)
    return bell.read_csv(io.StringIO(text))


def parse_ci_arg(text: str, variables) -> tuple:
    """``X:Y`` or ``X:Y:Z1,Z2`` into ``(x, y, given)``."""
    parts = text.split(":")
    if len(parts) not in (2, 3) or not parts[0] or not parts[1]:
        raise UsageError(f"--ci expects X:Y or X:Y:Z1,Z2, got {text!r}")
    given = tuple(z for z in parts[2].split(",") if z) if len(parts) == 3 else ()
    for v in (parts[0], parts[1], *given):
        if v not in variables:
            raise UsageError(f"--ci {text!r}: unknown variable {v!r}; dataset has {sorted(variables)}")
    return parts[0], parts[1], given


def cmd_analyze(args) -> int:
    data = _read_dataset(args.dataset)
    requested = list(args.run or [])
    if args.no_signalling:
        requested.append("no-signalling")
    if args.posteriors:
        requested.append("posteriors")
    for name in requested:
        if name not in ANALYSES:
            raise UsageError(f"unknown analysis {name!r}; expected one of {ANALYSES}")
    report = {"schema_version": SCHEMA_VERSION, "dataset": str(args.dataset), "n": len(data)}
    # posteriors of I need both labels, so they always use the full dataset
    full = data
    if args.preselect:
        try:
            label = InitialLabel.parse(args.preselect)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        data = bell.preselect(data, label)
        report["preselect"] = {"label": label.name, "n_retained": len(data)}
    ci_args = [parse_ci_arg(s, data.columns()) for s in args.ci or []]
    report["rates"] = bell.same_outcome_rates(data)
    if "no-signalling" in requested:
        res = analysis.no_signalling_check(data.empirical_table())
        report["no_signalling"] = {"max_deviation": res.deviation}
    if "posteriors" in requested:
        table = full.empirical_table()
        post = {}
        for s in ("equal", "unequal"):
            for o in ("equal", "unequal"):
                p1, p2 = bell.posterior_initial(table, s, o)
                post[f"settings {s}, outcomes {o}"] = {"I1": p1, "I2": p2}
        report["posteriors"] = post
    if ci_args:
        report["ci"] = [analysis.g2_ci_test(data, x, y, z, args.alpha).to_dict() for x, y, z in ci_args]
    _emit(report, args.out)
    return EXIT_OK


# -- scenario ---------------------------------------------------------------------------


def cmd_scenario(args) -> int:
    try:
        lock = InitialLabel.parse(args.lock)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.name == "damascus":
        report = {"support": analysis.counterfactual_support_report("damascus", args.constrained)}
    else:
        model = scm.build_bigv_retro_scm(args.mode, args.epsilon)
        report = {
            "mode": model.metadata["mode"],
            "support": analysis.counterfactual_support_report("bigv-retro", args.constrained, lock),
            "faithfulness": analysis.faithfulness_report(model).to_dict(),
            "setting_independence": {
                s: analysis.si_check(model, "I", s).deviation for s in ("a", "b")
            },
        }
        target = analysis.ci("a", "I")
        try:
            sweep = analysis.fine_tuning_sweep(model, target, args.sweep_epsilon, args.trials, args.seed)
            report["sweep"] = sweep.to_dict()
        except BellSelError as exc:
            report["sweep"] = {"skipped": str(exc), "target": target.to_dict()}
    report = {"schema_version": SCHEMA_VERSION, "scenario": args.name, **report}
    _emit(report, args.out)
    return EXIT_OK


# -- reproduce ---------------------------------------------------------------------------


def cmd_reproduce(args) -> int:
    selected = claims.CLAIMS
    if args.only:
        wanted = {s.strip() for s in args.only.split(",") if s.strip()}
        ids = {str(i + 1): fn for i, fn in enumerate(claims.CLAIMS)}
        unknown = wanted - set(ids)
        if unknown:
            raise UsageError(f"--only: unknown claim ids {sorted(unknown)}")
        selected = tuple(fn for i, fn in ids.items() if i in wanted)
    results = claims.run_all(selected)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "passed": all(r.passed for r in results),
        "claims": [r.to_dict() for r in results],
    }
    _emit(doc, args.out)
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] claim {r.id}: {r.claim}", file=sys.stderr)
    return EXIT_OK if doc["passed"] else EXIT_ACCEPTANCE


# -- entry point -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bellsel", description="Bell-experiment selection models and diagnostics.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="sample a Bell experiment and summarize it")
    p.add_argument("--experiment", help="v1, v2 or bigv (default bigv)")
    p.add_argument("--n", type=int, help="number of trials (default 100000)")
    p.add_argument("--seed", type=int, help=f"64-bit seed (default ${SEED_ENV}, else 0)")
    p.add_argument("--policy", help="'uniform' or a JSON 3x3 array of setting-pair probabilities")
    p.add_argument("--out", help="dataset output path")
    p.add_argument("--summary", help="summary JSON path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), help="dataset format (default csv)")
    p.add_argument("--workers", type=int, help="sampling threads; output does not depend on it")
    p.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="run tests on a dataset file")
    p.add_argument("dataset")
    p.add_argument("--ci", action="append", metavar="X:Y[:Z1,Z2]", help="G2 conditional-independence test")
    p.add_argument("--run", action="append", metavar="NAME", help=f"extra analysis, one of {ANALYSES}")
    p.add_argument("--no-signalling", action="store_true")
    p.add_argument("--posteriors", action="store_true")
    p.add_argument("--preselect", metavar="LABEL", help="keep only trials with this initial label first")
    p.add_argument("--alpha", type=float, default=0.01)
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("scenario", help="counterfactual and faithfulness reports for a bundled model")
    p.add_argument("name", choices=("damascus", "bigv-retro"))
    p.add_argument("--constrained", action="store_true", help="lock the collider")
    p.add_argument("--mode", default="locked-compatible", choices=("locked-compatible", "unlocked-demo"))
    p.add_argument("--epsilon", type=float, default=0.2, help="setting dependence of the unlocked demo")
    p.add_argument("--lock", default="I2", help="locked initial label for bigv-retro")
    p.add_argument("--seed", type=int, default=0, help="seed of the fine-tuning sweep")
    p.add_argument("--sweep-epsilon", type=float, default=0.05)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--out")
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("reproduce", help="run every acceptance check")
    p.add_argument("--out")
    p.add_argument("--only", help="comma-separated claim ids")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, DatasetFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (BellSelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
