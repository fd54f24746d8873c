"""Batch sweep of the random family: solve, test, recover, tally.

One row per dimension; each instance lands in exactly one bucket:

* ``gap_or_infeasible`` -- the exactness test held, no point exists at
  the relaxation value;
* ``recovered`` -- the test failed and the verified optimizer came out
  (by the dichotomy these two exhaust every successfully analyzed
  instance, so ``test_failed`` always equals ``recovered``);
* ``solver_failures`` -- the relaxation solve missed its accuracy target
  or a recovery construction detected an accuracy mismatch; never aborts
  the sweep.

Identical (field, dimensions, count, seed, eps) reproduce the summary
bit for bit; instances are independent of one another, so the tallying
order carries no information.
"""
from __future__ import annotations

from dataclasses import dataclass

from .generator import GenerationError, GeneratorConfig, generate_instance
from .ipm import SdpSolverError
from .sdp import DEFAULT_EPS1, DEFAULT_EPS2
from .tightness import RecoveryError, solve_and_diagnose


@dataclass(frozen=True)
class ExperimentRow:
    """Tallies for one dimension."""

    n: int
    total: int
    test_failed: int
    recovered: int
    gap_or_infeasible: int
    solver_failures: int


@dataclass(frozen=True)
class ExperimentSummary:
    field: str
    count: int
    seed: int
    eps1: float
    eps2: float
    per_n: tuple


def run_experiment(field: str, dimensions, count: int, seed: int,
                   eps1: float = DEFAULT_EPS1, eps2: float = DEFAULT_EPS2,
                   source=None) -> ExperimentSummary:
    """Sweep the random family over the given dimensions.

    ``source(n, index)`` overrides where instances come from (fixture
    injection in tests); the default draws from the seeded generator.
    """
    rows = []
    for n in sorted({int(d) for d in dimensions}):
        cfg = GeneratorConfig(field=field, n=int(n), seed=seed, count=count)
        failed = recovered = gap = errors = 0
        for index in range(count):
            try:
                inst = (generate_instance(cfg, index) if source is None
                        else source(int(n), index))
                _, verdict = solve_and_diagnose(inst, eps1, eps2)
            except (SdpSolverError, RecoveryError, GenerationError):
                errors += 1
                continue
            if verdict.recovered:
                failed += 1
                recovered += 1
            else:
                gap += 1
        rows.append(ExperimentRow(int(n), count, failed, recovered, gap,
                                  errors))
    return ExperimentSummary(field, count, seed, eps1, eps2, tuple(rows))


def markdown_table(summary: ExperimentSummary) -> str:
    """Two markdown tables: the headline n/k layout, then the full tallies."""
    ns = " | ".join(str(r.n) for r in summary.per_n)
    ks = " | ".join(str(r.test_failed) for r in summary.per_n)
    sep = " | ".join("---" for _ in summary.per_n)
    lines = [
        f"Instances whose exactness test fails "
        f"(field={summary.field}, count={summary.count} per n, "
        f"seed={summary.seed}):",
        "",
        f"| n | {ns} |",
        f"| --- | {sep} |",
        f"| k | {ks} |",
        "",
        "| n | total | test failed | recovered | gap or infeasible "
        "| solver failures |",
        "| --- | --- | --- | --- | --- | --- |",
    ]
    for r in summary.per_n:
        lines.append(f"| {r.n} | {r.total} | {r.test_failed} | {r.recovered} "
                     f"| {r.gap_or_infeasible} | {r.solver_failures} |")
    return "\n".join(lines) + "\n"
