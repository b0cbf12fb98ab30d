"""Benchmark harness: one result row per (algorithm, VM count, seed).

A cell rebuilds its workload and fleet from the cell seed (three
sub-streams split off with ``numpy.random.SeedSequence``: workload, fleet,
optimizer), so every algorithm sees identical inputs for the same seed and
the whole sweep is reproducible. Rows are always written sorted by
(algorithm, num_vms, seed) no matter how cells were executed, and all
floats are serialized with full round-trip precision, so the results CSV
is byte-identical across runs and worker counts once ``no_timing`` zeroes
the wall-clock column.
"""

from __future__ import annotations

import csv
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .baselines import LJF_MODES, fcfs_schedule, ljf_schedule
from .evaluator import ScheduleSimulator
from .lca import LcaParams, optimize
from .problem import MetricWeights, assignment_domain, decode_random_key, make_objective
from .workload import (
    DEFAULT_LEN_MAX,
    DEFAULT_LEN_MIN,
    DEFAULT_SPEED_CHOICES,
    FleetSpec,
    WorkloadSpec,
    generate_fleet,
    generate_workload,
    read_jobs_csv,
)

__all__ = [
    "ALGORITHMS",
    "DEFAULT_VM_COUNTS",
    "RESULTS_CSV_HEADER",
    "SUMMARY_CSV_HEADER",
    "ExperimentConfig",
    "ResultRow",
    "SummaryRow",
    "run_cell",
    "run_sweep",
    "summarize",
    "write_results_csv",
    "write_summary_csv",
    "summary_path_for",
]

ALGORITHMS = ("lca", "fcfs", "ljf")
DEFAULT_VM_COUNTS = (10, 30, 50, 70, 90, 110, 130)

RESULTS_CSV_HEADER = (
    "algorithm",
    "num_vms",
    "seed",
    "makespan",
    "avg_completion",
    "avg_response",
    "objective_value",
    "evaluations",
    "wall_ms",
)

SUMMARY_CSV_HEADER = (
    "algorithm",
    "num_vms",
    "mean_makespan",
    "std_makespan",
    "mean_avg_completion",
    "std_avg_completion",
    "mean_avg_response",
    "std_avg_response",
    "mean_objective_value",
    "std_objective_value",
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one sweep.

    Jobs come either from ``jobs_file`` or from a generated workload of
    ``num_jobs`` jobs; repetition seeds run from ``base_seed`` through
    ``base_seed + reps - 1``.
    """

    jobs_file: str | None = None
    num_jobs: int = 500
    len_min: int = DEFAULT_LEN_MIN
    len_max: int = DEFAULT_LEN_MAX
    arrival_rate: float | None = None
    vm_speeds: tuple[float, ...] = DEFAULT_SPEED_CHOICES
    vm_speed_mode: str = "cycle"
    vm_counts: tuple[int, ...] = DEFAULT_VM_COUNTS
    algorithms: tuple[str, ...] = ALGORITHMS
    reps: int = 10
    base_seed: int = 1
    lca: LcaParams = LcaParams()
    weights: MetricWeights = MetricWeights()
    ljf_mode: str = "longest"
    out: str = "results.csv"
    no_timing: bool = False
    workers: int = 1

    def __post_init__(self):
        if not self.vm_counts or any(m < 1 for m in self.vm_counts):
            raise ValueError("vm_counts must be non-empty with every count >= 1")
        if self.reps < 1:
            raise ValueError("reps must be >= 1")
        if not self.algorithms:
            raise ValueError("algorithms must be non-empty")
        unknown = set(self.algorithms) - set(ALGORITHMS)
        if unknown:
            raise ValueError(f"unknown algorithms: {sorted(unknown)}")
        if len(set(self.algorithms)) != len(self.algorithms):
            raise ValueError("algorithms must not repeat")
        if self.ljf_mode not in LJF_MODES:
            raise ValueError(f"ljf_mode must be one of {LJF_MODES}")
        if self.jobs_file is None and self.num_jobs < 1:
            raise ValueError("num_jobs must be positive")
        if not 0 < self.len_min <= self.len_max:
            raise ValueError("need 0 < len_min <= len_max")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class ResultRow:
    """One evaluated cell; metrics in seconds, wall_ms in milliseconds."""

    algorithm: str
    num_vms: int
    seed: int
    makespan: float
    avg_completion: float
    avg_response: float
    objective_value: float
    evaluations: int
    wall_ms: float

    def sort_key(self):
        return (self.algorithm, self.num_vms, self.seed)

    def csv_fields(self) -> list[str]:
        return [
            self.algorithm,
            str(self.num_vms),
            str(self.seed),
            repr(self.makespan),
            repr(self.avg_completion),
            repr(self.avg_response),
            repr(self.objective_value),
            str(self.evaluations),
            repr(self.wall_ms),
        ]


@dataclass(frozen=True)
class SummaryRow:
    algorithm: str
    num_vms: int
    mean_makespan: float
    std_makespan: float
    mean_avg_completion: float
    std_avg_completion: float
    mean_avg_response: float
    std_avg_response: float
    mean_objective_value: float
    std_objective_value: float

    def csv_fields(self) -> list[str]:
        return [
            self.algorithm,
            str(self.num_vms),
            repr(self.mean_makespan),
            repr(self.std_makespan),
            repr(self.mean_avg_completion),
            repr(self.std_avg_completion),
            repr(self.mean_avg_response),
            repr(self.std_avg_response),
            repr(self.mean_objective_value),
            repr(self.std_objective_value),
        ]


def _cell_inputs(config: ExperimentConfig, num_vms: int, seed: int):
    workload_seed, fleet_seed, optimizer_seed = (
        int(s) for s in np.random.SeedSequence(seed).generate_state(3, np.uint64)
    )
    if config.jobs_file is not None:
        jobs = read_jobs_csv(config.jobs_file)
    else:
        jobs = generate_workload(
            WorkloadSpec(
                job_count=config.num_jobs,
                len_min=config.len_min,
                len_max=config.len_max,
                arrival_rate=config.arrival_rate,
                seed=workload_seed,
            )
        )
    vms = generate_fleet(
        FleetSpec(
            vm_count=num_vms,
            speed_choices=config.vm_speeds,
            mode=config.vm_speed_mode,
            seed=fleet_seed,
        )
    )
    return jobs, vms, optimizer_seed


def run_cell(config: ExperimentConfig, algorithm: str, num_vms: int, seed: int) -> ResultRow:
    """Build the cell's instance, schedule it, and score the result.

    Deterministic per (config, seed) apart from ``wall_ms``, which
    ``config.no_timing`` pins to zero.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm: {algorithm!r}")
    started = time.perf_counter()
    jobs, vms, optimizer_seed = _cell_inputs(config, num_vms, seed)
    simulator = ScheduleSimulator(jobs, vms)
    if algorithm == "lca":
        objective = make_objective(jobs, vms, config.weights)
        domain = assignment_domain(len(jobs), len(vms))
        result = optimize(objective, domain, replace(config.lca, seed=optimizer_seed))
        assignment = decode_random_key(result.best_formation, len(vms))
        evaluations = result.evaluations
    elif algorithm == "fcfs":
        assignment = fcfs_schedule(jobs, vms)
        evaluations = 1
    else:
        assignment = ljf_schedule(jobs, vms, mode=config.ljf_mode)
        evaluations = 1
    metrics = simulator.metrics(assignment)
    wall_ms = 0.0 if config.no_timing else (time.perf_counter() - started) * 1000.0
    return ResultRow(
        algorithm=algorithm,
        num_vms=num_vms,
        seed=seed,
        makespan=metrics.makespan,
        avg_completion=metrics.avg_completion,
        avg_response=metrics.avg_response,
        objective_value=config.weights.score(metrics),
        evaluations=evaluations,
        wall_ms=wall_ms,
    )


def _run_cell_task(args):
    return run_cell(*args)


def run_sweep(config: ExperimentConfig) -> tuple[list[ResultRow], list[SummaryRow]]:
    """Run the full algorithms x vm_counts x reps grid and write both CSVs.

    Cells are independent and may run in parallel (``config.workers``); the
    output is sorted and therefore independent of execution order. Returns
    the sorted rows and the per-(algorithm, vm count) summary.
    """
    tasks = [
        (config, algorithm, num_vms, seed)
        for algorithm in config.algorithms
        for num_vms in config.vm_counts
        for seed in range(config.base_seed, config.base_seed + config.reps)
    ]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(_run_cell_task, tasks))
    else:
        rows = [_run_cell_task(task) for task in tasks]
    rows.sort(key=ResultRow.sort_key)
    summary = summarize(rows)
    write_results_csv(rows, config.out)
    write_summary_csv(summary, summary_path_for(config.out))
    return rows, summary


def summarize(rows: Sequence[ResultRow]) -> list[SummaryRow]:
    """Mean and population standard deviation of each metric per group."""
    groups: dict[tuple[str, int], list[ResultRow]] = {}
    for row in rows:
        groups.setdefault((row.algorithm, row.num_vms), []).append(row)
    summary = []
    for (algorithm, num_vms) in sorted(groups):
        members = groups[(algorithm, num_vms)]
        columns = {
            "makespan": [r.makespan for r in members],
            "avg_completion": [r.avg_completion for r in members],
            "avg_response": [r.avg_response for r in members],
            "objective_value": [r.objective_value for r in members],
        }
        stats = {}
        for name, values in columns.items():
            stats[f"mean_{name}"] = statistics.fmean(values)
            stats[f"std_{name}"] = statistics.pstdev(values)
        summary.append(SummaryRow(algorithm=algorithm, num_vms=num_vms, **stats))
    return summary


def summary_path_for(out) -> Path:
    out = Path(out)
    return out.with_name(out.stem + "_summary" + (out.suffix or ".csv"))


def write_results_csv(rows: Sequence[ResultRow], sink) -> None:
    _write_csv(RESULTS_CSV_HEADER, [row.csv_fields() for row in rows], sink)


def write_summary_csv(summary: Sequence[SummaryRow], sink) -> None:
    _write_csv(SUMMARY_CSV_HEADER, [row.csv_fields() for row in summary], sink)


def _write_csv(header, field_rows, sink) -> None:
    if hasattr(sink, "write"):
        handle, owned = sink, False
    else:
        handle, owned = open(sink, "w", encoding="utf-8", newline=""), True
    try:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(field_rows)
    finally:
        if owned:
            handle.close()
