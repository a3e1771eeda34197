from __future__ import annotations

import pytest

from slicebench import fixtures
from slicebench.model import ContainerSpec, CpuMode
from slicebench.orchestrator import (
    CampaignConfig,
    ExecutorBinding,
    ExecutorKind,
    Host,
    Orchestrator,
)
from slicebench.store import DatasetStore


@pytest.fixture(scope="session")
def fleet():
    return fixtures.reference_fleet()


@pytest.fixture(scope="session")
def sim_hosts(fleet):
    binding = ExecutorBinding(kind=ExecutorKind.SIMULATED)
    return [Host(vm=vm, binding=binding) for vm in fleet]


@pytest.fixture(scope="session")
def fleet_dataset(sim_hosts):
    """One deterministic 100 MiB single-core campaign over the reference fleet."""
    spec = ContainerSpec(memory_mib=100, cpu_mode=CpuMode.SINGLE_CORE)
    orch = Orchestrator(CampaignConfig(container=spec))
    record, dataset = orch.run_campaign(sim_hosts, run_id="fleet-ds")
    assert record.succeeded and dataset is not None
    return dataset


@pytest.fixture
def store(tmp_path):
    return DatasetStore(tmp_path / "store")
