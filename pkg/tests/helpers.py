"""Shared builders for tests: datasets from plain dicts, random instances."""

from __future__ import annotations

import random
from typing import Mapping, Sequence

from slicebench.model import (
    AttributeMeasurement,
    BenchmarkDataset,
    ContainerSpec,
    CpuMode,
    DatasetRole,
    Polarity,
    WeightVector,
    default_taxonomy,
    utcnow,
)

TAXONOMY = default_taxonomy()
ATTR_KEYS = tuple(a.key for a in TAXONOMY)
POLARITY = {a.key: (1 if a.polarity is Polarity.HIGHER_BETTER else -1) for a in TAXONOMY}
GROUPS = {a.key: a.group.index for a in TAXONOMY}


def make_dataset(
    values: Mapping[str, Mapping[str, float]],
    dataset_id: str = "ds",
    memory_mib: int = 100,
    cpu_mode: CpuMode = CpuMode.SINGLE_CORE,
    role: DatasetRole = DatasetRole.CURRENT,
) -> BenchmarkDataset:
    container = ContainerSpec(memory_mib=memory_mib, cpu_mode=cpu_mode)
    now = utcnow()
    measurements = tuple(
        AttributeMeasurement(
            vm_id=vm, attribute_key=attr, value=float(v), container=container, captured_at=now
        )
        for vm in sorted(values)
        for attr, v in sorted(values[vm].items())
    )
    return BenchmarkDataset(
        dataset_id=dataset_id, role=role, measurements=measurements, container=container
    )


def random_values(
    rng: random.Random, m: int, attrs: Sequence[str]
) -> dict[str, dict[str, float]]:
    """m VMs x given attributes; mixed magnitudes, occasional exact ties."""
    vms = [f"vm{i:02d}" for i in range(m)]
    out: dict[str, dict[str, float]] = {vm: {} for vm in vms}
    for attr in attrs:
        scale = 10.0 ** rng.randint(-2, 4)
        base = [rng.uniform(-1.0, 1.0) * scale for _ in vms]
        if rng.random() < 0.25 and m >= 2:  # force a tie on this attribute
            i, j = rng.sample(range(m), 2)
            base[j] = base[i]
        for vm, v in zip(vms, base):
            out[vm][attr] = v
    return out


def random_attrs(rng: random.Random, n: int) -> list[str]:
    return rng.sample(ATTR_KEYS, n)


def random_weights(rng: random.Random) -> WeightVector:
    return WeightVector(*(round(rng.uniform(0.0, 5.0), 3) for _ in range(4)))
