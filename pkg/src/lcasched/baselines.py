"""Dispatch-rule schedulers used as comparison points.

Both walk the jobs in a fixed dispatch order and hand each to the VM whose
queue frees up earliest (ties to the lowest VM id), accounting for the
job's arrival. FCFS dispatches in arrival order; LJF dispatches longest
job first by default, or latest arrival first in ``last-arrival`` mode.
The returned assignment is aligned with the input job list; service order
within a VM is decided by the evaluator, not by dispatch order.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .problem import Job, Vm

__all__ = ["fcfs_schedule", "ljf_schedule", "LJF_MODES"]

LJF_MODES = ("longest", "last-arrival")


def _greedy_earliest_ready(jobs, vms, dispatch_order) -> np.ndarray:
    ready = np.zeros(len(vms), dtype=float)
    assignment = np.empty(len(jobs), dtype=np.int64)
    for position in dispatch_order:
        job = jobs[position]
        vm = int(np.argmin(ready))  # first minimum, so ties go to the lowest id
        ready[vm] = max(ready[vm], job.arrival_time) + job.length / vms[vm].speed
        assignment[position] = vm
    return assignment


def _check_inputs(jobs, vms):
    if not jobs or not vms:
        raise ValueError("jobs and vms must be non-empty")


def fcfs_schedule(jobs: Sequence[Job], vms: Sequence[Vm]) -> np.ndarray:
    """First come first served: dispatch by (arrival_time, id)."""
    _check_inputs(jobs, vms)
    order = sorted(range(len(jobs)), key=lambda p: (jobs[p].arrival_time, jobs[p].id))
    return _greedy_earliest_ready(jobs, vms, order)


def ljf_schedule(jobs: Sequence[Job], vms: Sequence[Vm], mode: str = "longest") -> np.ndarray:
    """Longest job first: dispatch by decreasing length (ties by id).

    ``mode='last-arrival'`` dispatches by decreasing arrival time instead.
    """
    _check_inputs(jobs, vms)
    if mode == "longest":
        order = sorted(range(len(jobs)), key=lambda p: (-jobs[p].length, jobs[p].id))
    elif mode == "last-arrival":
        order = sorted(range(len(jobs)), key=lambda p: (-jobs[p].arrival_time, jobs[p].id))
    else:
        raise ValueError(f"unknown ljf mode: {mode!r}")
    return _greedy_earliest_ready(jobs, vms, order)
