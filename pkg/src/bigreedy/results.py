"""Per-run records shared by both algorithms and the benchmark harness."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np


@dataclass
class TrialReport:
    instance_seed: int | None
    algorithm: str
    objective_value: float
    oracle_calls: int
    elapsed_ms: float

    def __post_init__(self):
        if not np.isfinite(self.objective_value):
            raise ValueError("objective_value must be finite")
        if self.oracle_calls <= 0:
            raise ValueError("oracle_calls must be positive")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class RunResult:
    """Output of one algorithm run: the point, its report and the trace."""

    solution: np.ndarray
    report: TrialReport
    order: list = field(default_factory=list)
    trace: list = field(default_factory=list)

    def __iter__(self):
        # allows ``z, report = run(...)``
        yield self.solution
        yield self.report
