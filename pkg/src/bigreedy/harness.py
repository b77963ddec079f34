"""Brute-force grid oracle and the repeated-trial experiment runner."""
from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from joblib import Parallel, delayed

from . import strong, weak
from .exceptions import BudgetExceededError, ValidationFailure
from .objective import generate, validate_submodularity
from .results import TrialReport

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
GRID_BUDGET = 10**8
FAMILIES = ("nqp-strong", "nqp-weak", "softmax")
ALGORITHMS = ("game", "binary")
CSV_COLUMNS = ("family", "n", "trial", "algorithm", "value", "oracle_calls")
_ORACLE_CHUNK = 1 << 16


def grid_oracle(obj, resolution: int):
    """Exhaustive maximum over {0, 1/k, ..., 1}^n.

    Points are scanned in lexicographic order and only a strictly larger
    value replaces the incumbent, so ties resolve to the lexicographically
    smallest point.
    """
    k = int(resolution)
    if k < 1:
        raise ValueError("resolution must be a positive integer")
    n = obj.n
    total = (k + 1) ** n
    if total > GRID_BUDGET:
        raise BudgetExceededError(
            f"grid of (k+1)^n = {total} points exceeds {GRID_BUDGET}; use a smaller n or k"
        )
    levels = np.arange(k + 1) / k
    best_v, best_idx = -np.inf, 0
    for start in range(0, total, _ORACLE_CHUNK):
        flat = np.arange(start, min(start + _ORACLE_CHUNK, total))
        idx = np.stack(np.unravel_index(flat, (k + 1,) * n), axis=1)
        vals = obj.eval_many(levels[idx])
        j = int(np.argmax(vals))
        if vals[j] > best_v:
            best_v, best_idx = float(vals[j]), int(flat[j])
    point = levels[np.array(np.unravel_index(best_idx, (k + 1,) * n))]
    return point, best_v


def summarize(values) -> dict:
    v = np.asarray(values, dtype=np.float64)
    q1, median, q3 = np.percentile(v, [25, 50, 75])
    return {
        "mean": float(v.mean()),
        "min": float(v.min()),
        "q1": float(q1),
        "median": float(median),
        "q3": float(q3),
        "max": float(v.max()),
    }


@dataclass
class ExperimentSummary:
    family: str
    n: int
    trials: int
    epsilon: float
    master_seed: int
    stats: dict = field(default_factory=dict)
    reports: list = field(default_factory=list)

    def to_dict(self, include_timing: bool = True) -> dict:
        rows = []
        for t, r in self.reports:
            row = {"trial": t, **r.to_dict()}
            if not include_timing:
                row.pop("elapsed_ms")
            rows.append(row)
        return {
            "schema": SCHEMA_VERSION,
            "family": self.family,
            "n": self.n,
            "trials": self.trials,
            "epsilon": self.epsilon,
            "master_seed": self.master_seed,
            "summary": self.stats,
            "runs": rows,
        }

    def write_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for t, r in self.reports:
                writer.writerow([self.family, self.n, t, r.algorithm,
                                 repr(r.objective_value), r.oracle_calls])


def _variant_for(family: str) -> str:
    return "weak" if family == "nqp-weak" else "strong"


def run_trial(family: str, n: int, trial: int, master_seed: int, epsilon: float,
              algorithms, order: str = "random", validate: bool = True,
              probes: int = 1) -> list[TrialReport]:
    """One instance (seed = master_seed + trial), every requested algorithm."""
    seed = master_seed + trial
    obj = generate(family, n, seed)
    if validate:
        variant = _variant_for(family)
        check = validate_submodularity(obj, variant, probes=probes, seed=seed)
        if not check.passed:
            raise ValidationFailure(
                f"{family} instance with seed {seed} failed the {variant} validator "
                f"(worst Hessian entry {check.worst_violation:.3g})",
                seed=seed,
            )
    reports = []
    for algo in algorithms:
        if algo == "game":
            result = weak.run(obj, weak.RunConfig(epsilon, order, seed))
        elif algo == "binary":
            result = strong.run(obj, epsilon, order=order, seed=seed)
        else:
            raise ValueError(f"unknown algorithm {algo!r}")
        reports.append(result.report)
    return reports


def run_experiment(family: str, n: int, trials: int, master_seed: int = 0,
                   epsilon: float = 0.01, algorithms=ALGORITHMS, *, order: str = "random",
                   validate: bool = True, n_jobs: int = 1) -> ExperimentSummary:
    """Repeat both algorithms over ``trials`` freshly generated instances."""
    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    algorithms = tuple(algorithms)
    if family == "nqp-weak" and "binary" in algorithms:
        logger.info("binary search has no guarantee on weak-only instances; running anyway")
    per_trial = Parallel(n_jobs=n_jobs)(
        delayed(run_trial)(family, n, t, master_seed, epsilon, algorithms, order, validate)
        for t in range(trials)
    )
    reports = [(t, r) for t, rs in enumerate(per_trial) for r in rs]
    stats = {
        algo: summarize([r.objective_value for _, r in reports if r.algorithm == algo])
        for algo in algorithms
    }
    return ExperimentSummary(family, n, trials, float(epsilon), master_seed, stats, reports)
