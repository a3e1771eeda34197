"""Deterministic synthetic benchmark output for desk-scale runs.

Each vm_type has a performance profile of four speed factors (cpu, memory
latency, memory bandwidth, io). Attribute values are a base value scaled
by the relevant factor, with seeded relative noise. The noise is keyed by
(seed, vm, attribute, container config): repeated runs are identical, and
different container sizes differ only inside the noise band, matching the
observed behaviour of real container-sliced benchmarks. With all CPU
cores available, bandwidth attributes scale sublinearly with the vCPU
count; latencies are independent of the CPU mode.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from typing import Mapping

from .ingest import DEFAULT_ALIASES, RawBenchmarkOutput
from .model import ContainerSpec, CpuMode, VmDescriptor, default_taxonomy


@dataclass(frozen=True)
class PerfProfile:
    """Relative speed factors; 1.0 is the fleet baseline, larger is faster."""

    cpu: float = 1.0
    mem_lat: float = 1.0
    mem_bw: float = 1.0
    io: float = 1.0

    def factor(self, family: str) -> float:
        return getattr(self, family)


def uniform_profile(factor: float) -> PerfProfile:
    """A profile that is uniformly ``factor`` x baseline on every family."""
    return PerfProfile(cpu=factor, mem_lat=factor, mem_bw=factor, io=factor)


# Reference fleet profiles, tuned to the qualitative picture of the real
# hardware: m3 instances lead on main-memory latency, cr1.8xlarge on memory
# bandwidth, the storage-optimized types on io.
REFERENCE_PROFILES: dict[str, PerfProfile] = {
    "m1.xlarge": PerfProfile(cpu=0.80, mem_lat=0.85, mem_bw=0.80, io=0.85),
    "m2.xlarge": PerfProfile(cpu=0.95, mem_lat=0.92, mem_bw=0.90, io=0.90),
    "m2.2xlarge": PerfProfile(cpu=0.96, mem_lat=0.93, mem_bw=0.92, io=0.92),
    "m2.4xlarge": PerfProfile(cpu=0.97, mem_lat=0.94, mem_bw=0.95, io=0.94),
    "m3.xlarge": PerfProfile(cpu=1.15, mem_lat=1.22, mem_bw=1.10, io=1.00),
    "m3.2xlarge": PerfProfile(cpu=1.16, mem_lat=1.24, mem_bw=1.12, io=1.02),
    "cr1.8xlarge": PerfProfile(cpu=1.18, mem_lat=1.10, mem_bw=1.40, io=1.10),
    "cc2.8xlarge": PerfProfile(cpu=1.20, mem_lat=1.05, mem_bw=1.25, io=1.05),
    "hi1.4xlarge": PerfProfile(cpu=0.90, mem_lat=0.88, mem_bw=0.95, io=1.30),
    "hs1.8xlarge": PerfProfile(cpu=0.80, mem_lat=0.86, mem_bw=0.90, io=1.25),
}

# Baseline attribute values at factor 1.0.
BASE_VALUES: dict[str, float] = {
    "l1_cache_latency_ns": 1.2,
    "l2_cache_latency_ns": 5.0,
    "main_mem_latency_ns": 90.0,
    "random_mem_latency_ns": 130.0,
    "fork_latency_us": 250.0,
    "exec_latency_us": 700.0,
    "ctx_switch_latency_us": 4.5,
    "syscall_latency_us": 0.25,
    "pipe_bw_mbps": 2500.0,
    "socket_bw_mbps": 1800.0,
    "mem_read_bw_mbps": 7000.0,
    "mem_write_bw_mbps": 6500.0,
    "bcopy_libc_bw_mbps": 5000.0,
    "bcopy_hand_bw_mbps": 4200.0,
    "int_add_latency_ns": 0.4,
    "int_mul_latency_ns": 1.2,
    "int_div_latency_ns": 9.0,
    "int_mod_latency_ns": 10.0,
    "float_add_latency_ns": 1.5,
    "float_mul_latency_ns": 2.0,
    "float_div_latency_ns": 7.8,
    "double_add_latency_ns": 1.6,
    "double_mul_latency_ns": 2.2,
    "double_div_latency_ns": 8.5,
    "file_create_latency_us": 35.0,
    "file_delete_latency_us": 28.0,
    "mmap_latency_us": 300.0,
    "file_read_bw_mbps": 3500.0,
}

# Which profile factor drives each attribute.
_FAMILY: dict[str, str] = {
    "l1_cache_latency_ns": "mem_lat",
    "l2_cache_latency_ns": "mem_lat",
    "main_mem_latency_ns": "mem_lat",
    "random_mem_latency_ns": "mem_lat",
    "fork_latency_us": "cpu",
    "exec_latency_us": "cpu",
    "ctx_switch_latency_us": "cpu",
    "syscall_latency_us": "cpu",
    "pipe_bw_mbps": "mem_bw",
    "socket_bw_mbps": "mem_bw",
    "mem_read_bw_mbps": "mem_bw",
    "mem_write_bw_mbps": "mem_bw",
    "bcopy_libc_bw_mbps": "mem_bw",
    "bcopy_hand_bw_mbps": "mem_bw",
    "int_add_latency_ns": "cpu",
    "int_mul_latency_ns": "cpu",
    "int_div_latency_ns": "cpu",
    "int_mod_latency_ns": "cpu",
    "float_add_latency_ns": "cpu",
    "float_mul_latency_ns": "cpu",
    "float_div_latency_ns": "cpu",
    "double_add_latency_ns": "cpu",
    "double_mul_latency_ns": "cpu",
    "double_div_latency_ns": "cpu",
    "file_create_latency_us": "io",
    "file_delete_latency_us": "io",
    "mmap_latency_us": "io",
    "file_read_bw_mbps": "io",
}

_LABELS = {key: label for label, key in DEFAULT_ALIASES.items()}
_UNIT_TEXT = {"ns": "nanoseconds", "us": "microseconds", "MB/s": "MB/sec"}

# Sublinear parallel speedup of bandwidth attributes with the vCPU count.
_PARALLEL_BW_EXPONENT = 0.35


def _noise(seed: int, vm_id: str, attribute: str, spec: ContainerSpec, pct: float) -> float:
    if pct <= 0:
        return 1.0
    token = f"{seed}|{vm_id}|{attribute}|{spec.memory_mib}|{spec.cpu_mode.value}"
    digest = hashlib.sha256(token.encode("utf-8")).digest()
    rng = random.Random(int.from_bytes(digest[:8], "big"))
    return 1.0 + rng.uniform(-pct, pct)


def attribute_value(
    vm: VmDescriptor,
    spec: ContainerSpec,
    attribute: str,
    profile: PerfProfile,
    profile_seed: int = 0,
    noise_pct: float = 0.01,
) -> float:
    """Synthesize one attribute value for a VM under a container config."""
    base = BASE_VALUES[attribute]
    factor = profile.factor(_FAMILY[attribute])
    higher_better = attribute.endswith("_bw_mbps")
    value = base * factor if higher_better else base / factor
    if higher_better and spec.cpu_mode is CpuMode.ALL_CORES:
        value *= vm.vcpus**_PARALLEL_BW_EXPONENT
    return value * _noise(profile_seed, vm.id, attribute, spec, noise_pct)


def simulated_execute(
    vm: VmDescriptor,
    spec: ContainerSpec,
    profile_seed: int = 0,
    profiles: Mapping[str, PerfProfile] | None = None,
    noise_pct: float = 0.01,
) -> RawBenchmarkOutput:
    """Produce deterministic benchmark-tool output in the parser's line grammar."""
    table = REFERENCE_PROFILES if profiles is None else profiles
    profile = table.get(vm.vm_type, PerfProfile())
    lines = [
        "# synthetic microbenchmark run",
        f"# HOST: {vm.id}",
        f"# CONFIG: {spec.memory_mib} MiB / {spec.cpu_mode.value}",
    ]
    for attr in default_taxonomy():
        value = attribute_value(vm, spec, attr.key, profile, profile_seed, noise_pct)
        lines.append(f"{_LABELS[attr.key]}: {value:.6g} {_UNIT_TEXT[attr.unit]}")
    return RawBenchmarkOutput(vm_id=vm.id, container=spec, lines=tuple(lines))
