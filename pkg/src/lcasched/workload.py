"""Synthetic workloads, VM fleets, and the CSV trace format.

Generation is a pure function of the spec (numpy PCG64 seeded from
``spec.seed``), so the same spec always yields the same trace on any
platform. Job lengths are uniform integers on [len_min, len_max] MI;
arrivals are either all zero (batch submission) or a Poisson process.
Fleet speeds come from a finite choice list, cycled in id order by
default or sampled uniformly.

CSV schemas: jobs files carry ``job_id,arrival_time,length_mi`` and VM
files carry ``vm_id,mips``, UTF-8 with ``.`` decimals.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .problem import Job, Vm

__all__ = [
    "DEFAULT_LEN_MIN",
    "DEFAULT_LEN_MAX",
    "DEFAULT_SPEED_CHOICES",
    "JOBS_CSV_HEADER",
    "VMS_CSV_HEADER",
    "CsvFormatError",
    "WorkloadSpec",
    "FleetSpec",
    "generate_workload",
    "generate_fleet",
    "read_jobs_csv",
    "write_jobs_csv",
    "read_vms_csv",
    "write_vms_csv",
]

DEFAULT_LEN_MIN = 1000
DEFAULT_LEN_MAX = 20000
DEFAULT_SPEED_CHOICES = (500.0, 1000.0, 1500.0, 2000.0, 2500.0)

JOBS_CSV_HEADER = ("job_id", "arrival_time", "length_mi")
VMS_CSV_HEADER = ("vm_id", "mips")


class CsvFormatError(ValueError):
    """Malformed trace file; the message names the offending line."""


@dataclass(frozen=True)
class WorkloadSpec:
    """Recipe for a synthetic job list.

    ``arrival_rate`` of None means batch submission (every job arrives at
    time zero); a positive rate draws Poisson-process arrivals at that many
    jobs per second.
    """

    job_count: int
    len_min: int = DEFAULT_LEN_MIN
    len_max: int = DEFAULT_LEN_MAX
    arrival_rate: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.job_count < 1:
            raise ValueError("job_count must be positive")
        if not 0 < self.len_min <= self.len_max:
            raise ValueError("need 0 < len_min <= len_max")
        if self.arrival_rate is not None and not self.arrival_rate > 0.0:
            raise ValueError("arrival_rate must be positive when set")


@dataclass(frozen=True)
class FleetSpec:
    """Recipe for a VM fleet; speeds are cycled or sampled from the choices."""

    vm_count: int
    speed_choices: tuple[float, ...] = DEFAULT_SPEED_CHOICES
    mode: str = "cycle"
    seed: int = 0

    def __post_init__(self):
        if self.vm_count < 1:
            raise ValueError("vm_count must be positive")
        if not self.speed_choices or any(s <= 0.0 for s in self.speed_choices):
            raise ValueError("speed_choices must be non-empty and positive")
        if self.mode not in ("cycle", "sample"):
            raise ValueError(f"unknown fleet mode: {self.mode!r}")


def generate_workload(spec: WorkloadSpec) -> list[Job]:
    """Jobs with ids 0..n-1, i.i.d. uniform lengths, arrivals per the spec."""
    rng = np.random.default_rng(spec.seed)
    lengths = rng.integers(spec.len_min, spec.len_max, size=spec.job_count, endpoint=True)
    if spec.arrival_rate is None:
        arrivals = np.zeros(spec.job_count)
    else:
        arrivals = np.cumsum(rng.exponential(1.0 / spec.arrival_rate, size=spec.job_count))
    return [
        Job(id=i, arrival_time=float(arrivals[i]), length=int(lengths[i]))
        for i in range(spec.job_count)
    ]


def generate_fleet(spec: FleetSpec) -> list[Vm]:
    """VMs with ids 0..m-1 and speeds cycled or sampled from the choices."""
    if spec.mode == "cycle":
        speeds = [spec.speed_choices[i % len(spec.speed_choices)] for i in range(spec.vm_count)]
    else:
        rng = np.random.default_rng(spec.seed)
        speeds = rng.choice(np.asarray(spec.speed_choices, dtype=float), size=spec.vm_count)
    return [Vm(id=i, speed=float(speeds[i])) for i in range(spec.vm_count)]


def _open_for_read(source):
    if hasattr(source, "read"):
        return source, False
    return open(source, "r", encoding="utf-8", newline=""), True


def _open_for_write(sink):
    if hasattr(sink, "write"):
        return sink, False
    return open(sink, "w", encoding="utf-8", newline=""), True


def _parse_rows(source, header: tuple[str, ...]):
    handle, owned = _open_for_read(source)
    try:
        reader = csv.reader(handle)
        try:
            first = next(reader)
        except StopIteration:
            raise CsvFormatError(f"line 1: missing header {','.join(header)}") from None
        if tuple(field.strip() for field in first) != header:
            raise CsvFormatError(f"line 1: expected header {','.join(header)}")
        for row in reader:
            if not row:
                continue
            yield reader.line_num, row
    finally:
        if owned:
            handle.close()


def read_jobs_csv(source) -> list[Job]:
    """Parse a jobs trace from a path or open text file."""
    jobs: list[Job] = []
    seen: set[int] = set()
    for line_num, row in _parse_rows(source, JOBS_CSV_HEADER):
        if len(row) != 3:
            raise CsvFormatError(f"line {line_num}: expected 3 fields, got {len(row)}")
        try:
            job_id = int(row[0])
            arrival = float(row[1])
            length = int(row[2])
        except ValueError:
            raise CsvFormatError(f"line {line_num}: non-numeric field") from None
        if job_id in seen:
            raise CsvFormatError(f"line {line_num}: duplicate job_id {job_id}")
        seen.add(job_id)
        try:
            jobs.append(Job(id=job_id, arrival_time=arrival, length=length))
        except ValueError as exc:
            raise CsvFormatError(f"line {line_num}: {exc}") from None
    return jobs


def write_jobs_csv(jobs: Sequence[Job], sink) -> None:
    """Write jobs in id order; floats keep full round-trip precision."""
    handle, owned = _open_for_write(sink)
    try:
        writer = csv.writer(handle)
        writer.writerow(JOBS_CSV_HEADER)
        for job in sorted(jobs, key=lambda j: j.id):
            writer.writerow([job.id, repr(job.arrival_time), job.length])
    finally:
        if owned:
            handle.close()


def read_vms_csv(source) -> list[Vm]:
    """Parse a VM fleet from a path or open text file."""
    vms: list[Vm] = []
    seen: set[int] = set()
    for line_num, row in _parse_rows(source, VMS_CSV_HEADER):
        if len(row) != 2:
            raise CsvFormatError(f"line {line_num}: expected 2 fields, got {len(row)}")
        try:
            vm_id = int(row[0])
            speed = float(row[1])
        except ValueError:
            raise CsvFormatError(f"line {line_num}: non-numeric field") from None
        if vm_id in seen:
            raise CsvFormatError(f"line {line_num}: duplicate vm_id {vm_id}")
        seen.add(vm_id)
        try:
            vms.append(Vm(id=vm_id, speed=speed))
        except ValueError as exc:
            raise CsvFormatError(f"line {line_num}: {exc}") from None
    return vms


def write_vms_csv(vms: Sequence[Vm], sink) -> None:
    handle, owned = _open_for_write(sink)
    try:
        writer = csv.writer(handle)
        writer.writerow(VMS_CSV_HEADER)
        for vm in sorted(vms, key=lambda v: v.id):
            writer.writerow([vm.id, repr(vm.speed)])
    finally:
        if owned:
            handle.close()
