"""Domain types and the canonical attribute/group taxonomy.

Everything here is immutable after construction and safe to share across
threads. The four attribute groups partition every benchmarked attribute:
memory/process, local communication, computation, and storage. Each
attribute carries a polarity (latencies are lower-better, bandwidths
higher-better) so downstream normalization can orient all values the same
way before scoring.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping


class SliceBenchError(Exception):
    """Base class for operational errors raised by this package."""


class Group(str, Enum):
    """The four attribute groups weights are applied to."""

    MEMORY_PROCESS = "memory_process"
    LOCAL_COMM = "local_communication"
    COMPUTATION = "computation"
    STORAGE = "storage"

    @property
    def index(self) -> int:
        """1-based group number (weight w1 applies to group 1, etc.)."""
        return _GROUP_ORDER.index(self) + 1


_GROUP_ORDER = [Group.MEMORY_PROCESS, Group.LOCAL_COMM, Group.COMPUTATION, Group.STORAGE]


class Polarity(str, Enum):
    HIGHER_BETTER = "higher_better"
    LOWER_BETTER = "lower_better"


class CpuMode(str, Enum):
    SINGLE_CORE = "single-core"
    ALL_CORES = "all-cores"


class DatasetRole(str, Enum):
    CURRENT = "current"
    HISTORIC = "historic"


class RankMode(str, Enum):
    LIGHTWEIGHT = "lightweight"
    HYBRID = "hybrid"
    EMPIRICAL = "empirical"


@dataclass(frozen=True)
class VmDescriptor:
    """One target virtual machine in an inventory."""

    id: str
    vm_type: str
    vcpus: int
    memory_gib: float
    endpoint: str = ""
    tags: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("vm id must be non-empty")
        if self.vcpus < 1:
            raise ValueError(f"vcpus must be >= 1, got {self.vcpus}")
        if self.memory_gib <= 0:
            raise ValueError(f"memory_gib must be > 0, got {self.memory_gib}")


DEFAULT_IMAGE = "slicebench/microbench:latest"


@dataclass(frozen=True)
class ContainerSpec:
    """Resource cap applied to the benchmark container."""

    memory_mib: int
    cpu_mode: CpuMode
    image_ref: str = DEFAULT_IMAGE

    def __post_init__(self) -> None:
        if self.memory_mib < 4:
            raise ValueError(f"memory_mib must be >= 4, got {self.memory_mib}")

    @property
    def memory_bytes(self) -> int:
        # MiB, not MB: container engines take bytes and 2^20 matches engine conventions.
        return self.memory_mib * 2**20


@dataclass(frozen=True)
class AttributeDef:
    """Taxonomy entry: canonical attribute name, its group, and polarity."""

    key: str
    group: Group
    polarity: Polarity
    unit: str


@dataclass(frozen=True)
class AttributeMeasurement:
    """One benchmarked attribute value for one VM under one container config."""

    vm_id: str
    attribute_key: str
    value: float
    container: ContainerSpec
    captured_at: datetime

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise ValueError(f"measurement value must be finite, got {self.value!r}")


@dataclass(frozen=True)
class AttributeStats:
    attribute_key: str
    mean: float
    stddev: float  # population stddev over the m VMs of one dataset

    def __post_init__(self) -> None:
        if self.stddev < 0:
            raise ValueError("stddev must be >= 0")


class BenchmarkDataset:
    """Matrix of measurements: m VMs x n attributes for one container config.

    Duplicate (vm_id, attribute_key) pairs are rejected at construction
    unless ``allow_duplicates`` is set, in which case the first value wins
    and the duplicated pairs are kept for reporting.
    """

    def __init__(
        self,
        dataset_id: str,
        role: DatasetRole,
        measurements: Iterable[AttributeMeasurement],
        container: ContainerSpec,
        allow_duplicates: bool = False,
    ):
        self.dataset_id = dataset_id
        self.role = DatasetRole(role)
        self.container = container
        values: dict[tuple[str, str], float] = {}
        duplicates: list[tuple[str, str]] = []
        kept: list[AttributeMeasurement] = []
        for m in measurements:
            key = (m.vm_id, m.attribute_key)
            if key in values:
                if not allow_duplicates:
                    raise ValueError(f"duplicate measurement for {key}")
                duplicates.append(key)
                continue
            values[key] = m.value
            kept.append(m)
        self.measurements: tuple[AttributeMeasurement, ...] = tuple(kept)
        self.duplicate_pairs: tuple[tuple[str, str], ...] = tuple(duplicates)
        self._values = values
        self.vm_ids: tuple[str, ...] = tuple(sorted({m.vm_id for m in kept}))
        self.attribute_keys: tuple[str, ...] = tuple(sorted({m.attribute_key for m in kept}))

    @property
    def complete(self) -> bool:
        """True iff every VM has every attribute (and the dataset is non-empty)."""
        if not self.measurements or self.duplicate_pairs:
            return False
        return len(self.measurements) == len(self.vm_ids) * len(self.attribute_keys)

    def value(self, vm_id: str, attribute_key: str) -> float:
        return self._values[(vm_id, attribute_key)]

    def has_value(self, vm_id: str, attribute_key: str) -> bool:
        return (vm_id, attribute_key) in self._values

    def column(self, attribute_key: str) -> dict[str, float]:
        """Values of one attribute keyed by vm_id (only VMs that have it)."""
        return {
            vm: self._values[(vm, attribute_key)]
            for vm in self.vm_ids
            if (vm, attribute_key) in self._values
        }


@dataclass(frozen=True)
class WeightVector:
    """User-supplied group weights w1..w4, each in [0, 5]."""

    w1: float
    w2: float
    w3: float
    w4: float

    def __post_init__(self) -> None:
        for name, w in zip(("w1", "w2", "w3", "w4"), self.as_tuple()):
            if not math.isfinite(w) or not 0.0 <= w <= 5.0:
                raise ValueError(f"{name} must be in [0, 5], got {w}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.w1, self.w2, self.w3, self.w4)

    def for_group(self, group: Group) -> float:
        return self.as_tuple()[group.index - 1]

    @classmethod
    def parse(cls, text: str) -> "WeightVector":
        """Parse a comma-separated 'w1,w2,w3,w4' string (group order G1..G4)."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected 4 comma-separated weights, got {len(parts)}")
        try:
            values = [float(p) for p in parts]
        except ValueError:
            raise ValueError(f"weights must be numeric: {text!r}") from None
        return cls(*values)


@dataclass(frozen=True)
class RankEntry:
    vm_id: str
    value: float | None  # score (lightweight/hybrid) or seconds (empirical); None for rank-only fixtures
    rank: int


@dataclass(frozen=True)
class RankTable:
    """Scores and competition ranks for one set of VMs; best rank is 1."""

    mode: RankMode
    entries: tuple[RankEntry, ...]
    weights: WeightVector | None = None
    dataset_ids: tuple[str, ...] = ()
    label: str = ""

    def __post_init__(self) -> None:
        # Listing order is rank, then vm_id; ranks themselves are shared per
        # competition ranking, so this only fixes the display order.
        ordered = tuple(sorted(self.entries, key=lambda e: (e.rank, e.vm_id)))
        object.__setattr__(self, "entries", ordered)

    @property
    def vm_ids(self) -> tuple[str, ...]:
        return tuple(sorted(e.vm_id for e in self.entries))

    def ranks_by_vm(self) -> dict[str, int]:
        return {e.vm_id: e.rank for e in self.entries}

    def rank_of(self, vm_id: str) -> int:
        return self.ranks_by_vm()[vm_id]

    def to_text(self) -> str:
        header = f"mode={self.mode.value}"
        if self.label:
            header += f" label={self.label}"
        if self.weights is not None:
            header += " weights={%.3g,%.3g,%.3g,%.3g}" % self.weights.as_tuple()
        if self.dataset_ids:
            header += " datasets=" + ",".join(self.dataset_ids)
        width = max([len("VM")] + [len(e.vm_id) for e in self.entries])
        lines = [header, f"{'VM':<{width}}  {'value':>12}  rank"]
        for e in self.entries:
            value = "-" if e.value is None else f"{e.value:.6g}"
            lines.append(f"{e.vm_id:<{width}}  {value:>12}  {e.rank}")
        return "\n".join(lines)

    def to_record_lines(self) -> list[str]:
        """One flat JSON object per entry; metadata repeated on every line."""
        lines = []
        for e in self.entries:
            record = {
                "vm_id": e.vm_id,
                "value": e.value,
                "rank": e.rank,
                "mode": self.mode.value,
                "label": self.label,
            }
            if self.weights is not None:
                record["weights"] = list(self.weights.as_tuple())
            if self.dataset_ids:
                record["dataset_ids"] = list(self.dataset_ids)
            lines.append(json.dumps(record, sort_keys=True))
        return lines

    @classmethod
    def from_record_lines(cls, lines: Iterable[str]) -> "RankTable":
        entries = []
        mode = RankMode.EMPIRICAL
        label = ""
        weights = None
        dataset_ids: tuple[str, ...] = ()
        for line in lines:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            entries.append(
                RankEntry(record["vm_id"], record.get("value"), int(record["rank"]))
            )
            mode = RankMode(record.get("mode", mode))
            label = record.get("label", label)
            if record.get("weights") is not None:
                weights = WeightVector(*record["weights"])
            if record.get("dataset_ids"):
                dataset_ids = tuple(record["dataset_ids"])
        return cls(mode=mode, entries=tuple(entries), weights=weights,
                   dataset_ids=dataset_ids, label=label)


class HostState(str, Enum):
    PENDING = "pending"
    PROVISIONING = "provisioning"
    BENCHMARKING = "benchmarking"
    COLLECTING = "collecting"
    DONE = "done"
    FAILED = "failed"

    @property
    def terminal(self) -> bool:
        return self in (HostState.DONE, HostState.FAILED)


_STATE_ORDER = [
    HostState.PENDING,
    HostState.PROVISIONING,
    HostState.BENCHMARKING,
    HostState.COLLECTING,
    HostState.DONE,
]


def valid_transition(old: HostState, new: HostState) -> bool:
    """Transitions are monotone along the lifecycle; failed from any non-terminal."""
    if old.terminal:
        return False
    if new is HostState.FAILED:
        return True
    return _STATE_ORDER.index(new) > _STATE_ORDER.index(old)


@dataclass
class HostStatus:
    state: HostState = HostState.PENDING
    started_at: datetime | None = None
    finished_at: datetime | None = None
    duration_seconds: float | None = None
    failure_reason: str | None = None


@dataclass
class RunRecord:
    """Lifecycle state of one benchmarking campaign."""

    run_id: str
    hosts: dict[str, HostStatus]
    started_at: datetime | None = None
    finished_at: datetime | None = None
    dataset_id: str | None = None

    @property
    def finished(self) -> bool:
        # finished_at is stamped only after dataset assembly, so a finished
        # run is fully settled: hosts terminal AND results published.
        return self.finished_at is not None

    @property
    def succeeded(self) -> bool:
        return self.finished and all(
            s.state is HostState.DONE for s in self.hosts.values()
        )


# --- taxonomy -------------------------------------------------------------

_NS = "ns"
_US = "us"
_MBPS = "MB/s"


def default_taxonomy() -> tuple[AttributeDef, ...]:
    """The shipped attribute-to-group mapping.

    G1: memory latencies (L1/L2/main/random) and process operations;
    G2: pipe/socket/memory/bcopy bandwidths; G3: integer/float/double
    arithmetic latencies; G4: file and mmap operations. Latencies are
    lower-better, bandwidths higher-better.
    """
    lat = Polarity.LOWER_BETTER
    bw = Polarity.HIGHER_BETTER
    g1, g2, g3, g4 = _GROUP_ORDER
    return (
        AttributeDef("l1_cache_latency_ns", g1, lat, _NS),
        AttributeDef("l2_cache_latency_ns", g1, lat, _NS),
        AttributeDef("main_mem_latency_ns", g1, lat, _NS),
        AttributeDef("random_mem_latency_ns", g1, lat, _NS),
        AttributeDef("fork_latency_us", g1, lat, _US),
        AttributeDef("exec_latency_us", g1, lat, _US),
        AttributeDef("ctx_switch_latency_us", g1, lat, _US),
        AttributeDef("syscall_latency_us", g1, lat, _US),
        AttributeDef("pipe_bw_mbps", g2, bw, _MBPS),
        AttributeDef("socket_bw_mbps", g2, bw, _MBPS),
        AttributeDef("mem_read_bw_mbps", g2, bw, _MBPS),
        AttributeDef("mem_write_bw_mbps", g2, bw, _MBPS),
        AttributeDef("bcopy_libc_bw_mbps", g2, bw, _MBPS),
        AttributeDef("bcopy_hand_bw_mbps", g2, bw, _MBPS),
        AttributeDef("int_add_latency_ns", g3, lat, _NS),
        AttributeDef("int_mul_latency_ns", g3, lat, _NS),
        AttributeDef("int_div_latency_ns", g3, lat, _NS),
        AttributeDef("int_mod_latency_ns", g3, lat, _NS),
        AttributeDef("float_add_latency_ns", g3, lat, _NS),
        AttributeDef("float_mul_latency_ns", g3, lat, _NS),
        AttributeDef("float_div_latency_ns", g3, lat, _NS),
        AttributeDef("double_add_latency_ns", g3, lat, _NS),
        AttributeDef("double_mul_latency_ns", g3, lat, _NS),
        AttributeDef("double_div_latency_ns", g3, lat, _NS),
        AttributeDef("file_create_latency_us", g4, lat, _US),
        AttributeDef("file_delete_latency_us", g4, lat, _US),
        AttributeDef("mmap_latency_us", g4, lat, _US),
        AttributeDef("file_read_bw_mbps", g4, bw, _MBPS),
    )


def taxonomy_by_key(taxonomy: Iterable[AttributeDef]) -> dict[str, AttributeDef]:
    index: dict[str, AttributeDef] = {}
    for attr in taxonomy:
        if attr.key in index:
            raise ValueError(f"duplicate attribute key in taxonomy: {attr.key}")
        index[attr.key] = attr
    return index


def taxonomy_from_config(mapping: Mapping[str, Mapping[str, str]]) -> tuple[AttributeDef, ...]:
    """Build a taxonomy from a config mapping attribute -> {group, polarity, unit}.

    Group and polarity values accept '-' or '_' as the word separator.
    """
    defs = []
    for key, entry in mapping.items():
        defs.append(
            AttributeDef(
                key=key,
                group=Group(str(entry["group"]).replace("-", "_")),
                polarity=Polarity(str(entry["polarity"]).replace("-", "_")),
                unit=entry.get("unit", ""),
            )
        )
    taxonomy_by_key(defs)  # uniqueness check
    return tuple(defs)


def load_taxonomy_config(path: str | Path) -> tuple[AttributeDef, ...]:
    with open(path, encoding="utf-8") as fh:
        return taxonomy_from_config(json.load(fh))


# --- dataset validation ---------------------------------------------------


@dataclass(frozen=True)
class CompletenessReport:
    """Outcome of checking a dataset against a fleet and the taxonomy."""

    complete: bool
    missing: tuple[tuple[str, str], ...]  # (vm_id, attribute_key) gaps
    duplicates: tuple[tuple[str, str], ...]
    unknown_keys: tuple[str, ...]  # attribute keys not in the taxonomy
    unknown_vms: tuple[str, ...]  # dataset VMs absent from the fleet


def validate_dataset(
    dataset: BenchmarkDataset,
    fleet: Iterable[VmDescriptor],
    taxonomy: Iterable[AttributeDef] | None = None,
) -> CompletenessReport:
    """Check a dataset against the full fleet x taxonomy grid.

    Complete means every fleet VM has a value for every taxonomy attribute
    and no duplicates were flagged; attribute keys outside the taxonomy and
    VMs outside the fleet are reported as warnings but do not block
    completeness.
    """
    tax = taxonomy_by_key(taxonomy if taxonomy is not None else default_taxonomy())
    fleet_ids = sorted({vm.id for vm in fleet})
    missing = tuple(
        (vm, attr)
        for vm in fleet_ids
        for attr in sorted(tax)
        if not dataset.has_value(vm, attr)
    )
    unknown_keys = tuple(k for k in dataset.attribute_keys if k not in tax)
    unknown_vms = tuple(v for v in dataset.vm_ids if v not in fleet_ids)
    complete = bool(dataset.measurements) and not missing and not dataset.duplicate_pairs
    return CompletenessReport(
        complete=complete,
        missing=missing,
        duplicates=dataset.duplicate_pairs,
        unknown_keys=unknown_keys,
        unknown_vms=unknown_vms,
    )


def utcnow() -> datetime:
    return datetime.now(timezone.utc)
