"""Shipped reference data: the ten-VM fleet and case-study rank tables.

Three applications (a molecular dynamics simulation, a risk simulation, and
a block tridiagonal solver) were timed on a ten-VM fleet, yielding empirical
ranks plus benchmark-derived ranks per method (lightweight, hybrid), per
execution mode, and per container size. These tables and their expected
rank correlations are frozen here as package data so ranking and evaluation
behaviour can be exercised without any cloud access.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Mapping

from .evaluation import TimingRecord, write_timing_records
from .model import RankEntry, RankMode, RankTable, VmDescriptor, WeightVector

# Seconds-per-rank-unit used to synthesize timing records from rank vectors.
# Competition-ranking such timings reproduces the rank vector exactly,
# ties included.
_SECONDS_PER_RANK = 100.0


def _data_text(name: str) -> str:
    return (resources.files("slicebench") / "data" / name).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def reference_fleet() -> tuple[VmDescriptor, ...]:
    """The ten-VM fleet the shipped case-study tables refer to."""
    vms = []
    for line in _data_text("reference_fleet.jsonl").splitlines():
        if not line.strip():
            continue
        raw = json.loads(line)
        vms.append(
            VmDescriptor(
                id=raw["id"],
                vm_type=raw["vm_type"],
                vcpus=raw["vcpus"],
                memory_gib=raw["memory_gib"],
                tags=raw.get("tags", {}),
            )
        )
    return tuple(vms)


@dataclass(frozen=True)
class CaseStudy:
    """One application's empirical and benchmark-derived rank tables."""

    case_id: str
    application: str
    weights: WeightVector
    vm_order: tuple[str, ...]
    empirical: Mapping[str, tuple[int, ...]]  # execution mode -> ranks in vm_order
    benchmark: Mapping[str, Mapping[str, Mapping[int, tuple[int, ...]]]]  # method -> mode -> size
    correlations: Mapping[str, Mapping[str, tuple[float, ...]]]  # method -> mode -> per size

    def empirical_timings(self, execution_mode: str) -> tuple[TimingRecord, ...]:
        """Timing records whose competition ranks equal the empirical ranks."""
        ranks = self.empirical[execution_mode]
        return tuple(
            TimingRecord(
                vm_id=vm,
                application=self.application,
                execution_mode=execution_mode,
                wall_time_seconds=_SECONDS_PER_RANK * rank,
            )
            for vm, rank in zip(self.vm_order, ranks)
        )

    def empirical_table(self, execution_mode: str) -> RankTable:
        ranks = self.empirical[execution_mode]
        entries = tuple(
            RankEntry(vm_id=vm, value=_SECONDS_PER_RANK * rank, rank=rank)
            for vm, rank in zip(self.vm_order, ranks)
        )
        return RankTable(
            mode=RankMode.EMPIRICAL,
            entries=entries,
            label=f"{self.application}/{execution_mode}",
        )

    def benchmark_table(self, method: str, execution_mode: str, size_mib: int) -> RankTable:
        ranks = self.benchmark[method][execution_mode][size_mib]
        entries = tuple(
            RankEntry(vm_id=vm, value=None, rank=rank) for vm, rank in zip(self.vm_order, ranks)
        )
        return RankTable(
            mode=RankMode(method),
            entries=entries,
            weights=self.weights,
            label=f"{self.case_id}/{method}/{execution_mode}/{size_mib}MiB",
        )

    def expected_correlation(self, method: str, execution_mode: str, size_mib: int) -> float:
        sizes = container_sizes_mib()
        return self.correlations[method][execution_mode][sizes.index(size_mib)]


@lru_cache(maxsize=None)
def _case_study_data() -> dict:
    return json.loads(_data_text("case_studies.json"))


def vm_order() -> tuple[str, ...]:
    return tuple(_case_study_data()["vm_order"])


def container_sizes_mib() -> tuple[int, ...]:
    return tuple(_case_study_data()["container_sizes_mib"])


def case_study_ids() -> tuple[str, ...]:
    return tuple(_case_study_data()["case_studies"])


@lru_cache(maxsize=None)
def case_study(case_id: str) -> CaseStudy:
    data = _case_study_data()
    try:
        raw = data["case_studies"][case_id]
    except KeyError:
        raise KeyError(f"unknown case study {case_id!r}; have {sorted(data['case_studies'])}") from None
    order = tuple(data["vm_order"])
    benchmark = {
        method: {
            mode: {int(size): tuple(ranks) for size, ranks in per_mode.items()}
            for mode, per_mode in per_method.items()
        }
        for method, per_method in raw["benchmark"].items()
    }
    return CaseStudy(
        case_id=case_id,
        application=raw["application"],
        weights=WeightVector(*raw["weights"]),
        vm_order=order,
        empirical={mode: tuple(ranks) for mode, ranks in raw["empirical"].items()},
        benchmark=benchmark,
        correlations={
            method: {mode: tuple(vals) for mode, vals in per_method.items()}
            for method, per_method in raw["correlations"].items()
        },
    )


def case_studies() -> tuple[CaseStudy, ...]:
    return tuple(case_study(cid) for cid in case_study_ids())


def tie_case_timings() -> tuple[TimingRecord, ...]:
    """Timing fixture with one exact tie: two VMs share rank 3, next gets 5."""
    raw = _case_study_data()["tie_case"]
    return tuple(
        TimingRecord(
            vm_id=vm,
            application=raw["application"],
            execution_mode=raw["execution_mode"],
            wall_time_seconds=seconds,
        )
        for vm, seconds in sorted(raw["wall_time_seconds"].items())
    )


def tie_case_expected_ranks() -> dict[str, int]:
    return dict(_case_study_data()["tie_case"]["expected_ranks"])


def simulated_inventory() -> list[dict]:
    """Host entries for the reference fleet bound to the simulated executor."""
    return [
        {
            "id": vm.id,
            "vm_type": vm.vm_type,
            "vcpus": vm.vcpus,
            "memory_gib": vm.memory_gib,
            "executor": "simulated",
            "tags": dict(vm.tags),
        }
        for vm in reference_fleet()
    ]


def export_fixture_files(directory: str | Path) -> list[Path]:
    """Materialize fixtures as files for CLI use; returns the paths written."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def _write(name: str, text: str) -> None:
        path = out / name
        path.write_text(text, encoding="utf-8")
        written.append(path)

    _write("inventory_simulated.json", json.dumps({"hosts": simulated_inventory()}, indent=2) + "\n")
    for cs in case_studies():
        for mode in sorted(cs.empirical):
            lines = write_timing_records(cs.empirical_timings(mode))
            _write(f"{cs.case_id}_{mode}_timings.jsonl", "\n".join(lines) + "\n")
        for method, per_mode in sorted(cs.benchmark.items()):
            for mode in sorted(per_mode):
                for size in sorted(per_mode[mode]):
                    table = cs.benchmark_table(method, mode, size)
                    _write(
                        f"{cs.case_id}_{method}_{mode}_{size}mib_ranks.jsonl",
                        "\n".join(table.to_record_lines()) + "\n",
                    )
    _write(
        "tie_case_timings.jsonl",
        "\n".join(write_timing_records(tie_case_timings())) + "\n",
    )
    return written
