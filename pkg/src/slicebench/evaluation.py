"""Empirical ranks from application timings and rank-correlation reports.

Empirical ranks use competition ranking with lower-first direction (the
lowest wall time is rank 1). Accuracy of a benchmark-derived table is the
Pearson product-moment correlation between the two competition-rank
vectors, reported as a percentage; tied ranks enter as-is, with no
mid-rank correction, matching the convention the shipped case-study
reference tables follow.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .ingest import SchemaViolation
from .model import RankMode, RankTable, SliceBenchError
from .ranking import VmSetMismatch, competition_rank


class DuplicateTiming(SliceBenchError):
    pass


class MissingVm(SliceBenchError):
    pass


class LengthMismatch(SliceBenchError):
    pass


class DegenerateRanks(SliceBenchError):
    """A rank vector with zero variance has no defined correlation."""


SEQUENTIAL = "sequential"
PARALLEL = "parallel"
_MODES = (SEQUENTIAL, PARALLEL)


@dataclass(frozen=True)
class TimingRecord:
    """Wall time of one application run on one VM."""

    vm_id: str
    application: str
    execution_mode: str
    wall_time_seconds: float

    def __post_init__(self) -> None:
        if self.execution_mode not in _MODES:
            raise ValueError(f"execution_mode must be one of {_MODES}, got {self.execution_mode!r}")
        if not self.wall_time_seconds > 0:
            raise ValueError(f"wall_time_seconds must be > 0, got {self.wall_time_seconds}")


@dataclass(frozen=True)
class CorrelationReport:
    application: str
    execution_mode: str
    container_label: str
    correlation_percent: float

    def __post_init__(self) -> None:
        if abs(self.correlation_percent) > 100.0:
            raise ValueError(f"correlation out of range: {self.correlation_percent}")


def empirical_ranks(
    timings: Iterable[TimingRecord],
    expected_vms: Iterable[str] | None = None,
) -> RankTable:
    """Competition-rank VMs by wall time (lowest time is rank 1).

    The timings must belong to a single (application, mode) pair, one per VM.
    """
    records = list(timings)
    if not records:
        raise MissingVm("no timings supplied")
    pairs = {(t.application, t.execution_mode) for t in records}
    if len(pairs) > 1:
        raise ValueError(f"timings span multiple (application, mode) pairs: {sorted(pairs)}")
    times: dict[str, float] = {}
    for t in records:
        if t.vm_id in times:
            raise DuplicateTiming(f"duplicate timing for vm {t.vm_id!r}")
        times[t.vm_id] = t.wall_time_seconds
    if expected_vms is not None:
        missing = sorted(set(expected_vms) - set(times))
        if missing:
            raise MissingVm(f"no timing for VMs: {missing}")
    application, mode = next(iter(pairs))
    entries = competition_rank(times, direction="lower-first")
    return RankTable(
        mode=RankMode.EMPIRICAL,
        entries=entries,
        label=f"{application}/{mode}",
    )


def rank_correlation(a: Sequence[float], b: Sequence[float]) -> float:
    """Pearson product-moment correlation of two paired rank vectors, in percent."""
    if len(a) != len(b) or len(a) < 2:
        raise LengthMismatch(f"need two equal-length vectors of >= 2 ranks, got {len(a)} and {len(b)}")
    x = np.asarray(a, dtype=float)
    y = np.asarray(b, dtype=float)
    dx = x - x.mean()
    dy = y - y.mean()
    sx = float(dx @ dx)
    sy = float(dy @ dy)
    if sx == 0.0 or sy == 0.0:
        raise DegenerateRanks("a rank vector has zero variance")
    value = 100.0 * float(dx @ dy) / (sx * sy) ** 0.5
    # Mathematically bounded; clamp the last-ulp float overshoot only.
    return max(-100.0, min(100.0, value))


def correlate_tables(empirical: RankTable, benchmark: RankTable) -> float:
    """Correlation between two rank tables paired by vm_id."""
    if empirical.vm_ids != benchmark.vm_ids:
        raise VmSetMismatch(
            f"empirical VMs {list(empirical.vm_ids)} != benchmark VMs {list(benchmark.vm_ids)}"
        )
    emp = empirical.ranks_by_vm()
    bench = benchmark.ranks_by_vm()
    vms = empirical.vm_ids
    return rank_correlation([emp[v] for v in vms], [bench[v] for v in vms])


def build_report(
    empirical: RankTable,
    benchmark_tables: Mapping[str, RankTable],
    application: str = "",
    execution_mode: str = "",
    row_order: Sequence[str] | None = None,
) -> tuple[tuple[CorrelationReport, ...], str]:
    """Correlate an empirical table against per-container-size benchmark tables.

    Returns the correlation reports plus a formatted table with one VM per
    row and a rank column per container size, in the same layout as the
    shipped case-study tables.
    """
    if not application and "/" in empirical.label:
        application, execution_mode = empirical.label.split("/", 1)
    reports = tuple(
        CorrelationReport(
            application=application,
            execution_mode=execution_mode,
            container_label=label,
            correlation_percent=correlate_tables(empirical, table),
        )
        for label, table in benchmark_tables.items()
    )

    vms = list(row_order) if row_order is not None else list(empirical.vm_ids)
    if sorted(vms) != list(empirical.vm_ids):
        raise VmSetMismatch("row_order does not cover the empirical VM set")
    labels = list(benchmark_tables)
    width = max([len("VM")] + [len(v) for v in vms])
    cols = [("Empirical", empirical.ranks_by_vm())] + [
        (label, benchmark_tables[label].ranks_by_vm()) for label in labels
    ]
    header = f"{'VM':<{width}}  " + "  ".join(f"{name:>9}" for name, _ in cols)
    lines = [header]
    for vm in vms:
        lines.append(f"{vm:<{width}}  " + "  ".join(f"{ranks[vm]:>9}" for _, ranks in cols))
    corr_line = f"{'correlation %':<{width}}  {'':>9}  " + "  ".join(
        f"{r.correlation_percent:>9.1f}" for r in reports
    )
    lines.append(corr_line)
    return reports, "\n".join(lines)


def correlation_summary(reports: Iterable[CorrelationReport]) -> str:
    """Compact summary grid: one row per application, columns = mode x size."""
    items = list(reports)
    apps = sorted({r.application for r in items})
    modes = [m for m in _MODES if any(r.execution_mode == m for r in items)]
    sizes: list[str] = []
    for r in items:
        if r.container_label not in sizes:
            sizes.append(r.container_label)
    by_key = {(r.application, r.execution_mode, r.container_label): r for r in items}
    width = max([len("Application")] + [len(a) for a in apps])
    header = f"{'Application':<{width}}"
    for mode in modes:
        for size in sizes:
            header += f"  {mode[:3] + ' ' + size:>12}"
    lines = [header]
    for app in apps:
        row = f"{app:<{width}}"
        for mode in modes:
            for size in sizes:
                r = by_key.get((app, mode, size))
                row += f"  {r.correlation_percent:>12.1f}" if r else f"  {'-':>12}"
        lines.append(row)
    return "\n".join(lines)


# --- timing record files ----------------------------------------------------


def read_timing_records(lines: Iterable[str]) -> list[TimingRecord]:
    """Parse a timing record file: one {vm_id, application, mode, seconds} per line."""
    records = []
    for line_no, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            continue
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaViolation(line_no, f"invalid JSON: {exc.msg}") from None
        for field_name in ("vm_id", "application", "mode", "seconds"):
            if field_name not in data:
                raise SchemaViolation(line_no, f"missing field {field_name!r}")
        try:
            records.append(
                TimingRecord(
                    vm_id=str(data["vm_id"]),
                    application=str(data["application"]),
                    execution_mode=str(data["mode"]),
                    wall_time_seconds=float(data["seconds"]),
                )
            )
        except (TypeError, ValueError) as exc:
            raise SchemaViolation(line_no, str(exc)) from None
    return records


def write_timing_records(records: Iterable[TimingRecord]) -> list[str]:
    return [
        json.dumps(
            {
                "vm_id": t.vm_id,
                "application": t.application,
                "mode": t.execution_mode,
                "seconds": t.wall_time_seconds,
            },
            sort_keys=True,
        )
        for t in records
    ]
