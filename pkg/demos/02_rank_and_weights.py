"""
Rank a fleet and watch the weights steer the ordering
=====================================================

Scores are weighted sums of per-group z-score aggregates, so the weight
vector is where an application's resource profile enters: a memory-bound
workload weights group 1, a compute-bound one weights group 3. Same
measurements, different emphasis, different front-runners.
"""

from slicebench import (
    CampaignConfig,
    ContainerSpec,
    CpuMode,
    Orchestrator,
    WeightVector,
    fixtures,
    lightweight_rank,
    load_inventory,
)

import json
import tempfile
from pathlib import Path

# Benchmark the reference fleet once (simulated, in memory).
inv = Path(tempfile.mkdtemp()) / "inventory.json"
inv.write_text(json.dumps({"hosts": fixtures.simulated_inventory()}))
hosts = load_inventory(inv)
spec = ContainerSpec(memory_mib=100, cpu_mode=CpuMode.SINGLE_CORE)
_, dataset = Orchestrator(CampaignConfig(container=spec, profile_seed=7)).run_campaign(
    hosts, run_id="weights-demo"
)

# Three application profiles: memory-heavy, compute-heavy, and balanced.
profiles = {
    "memory-bound": WeightVector(5, 2, 1, 1),
    "compute-bound": WeightVector(1, 1, 5, 1),
    "balanced": WeightVector(3, 3, 3, 3),
}

for name, weights in profiles.items():
    table = lightweight_rank(dataset, weights)
    podium = ", ".join(f"{e.vm_id} (#{e.rank})" for e in table.entries[:3])
    print(f"{name:14} W={weights.as_tuple()}  ->  {podium}")

# The full table for one profile, ready for a report.
print()
print(lightweight_rank(dataset, profiles["memory-bound"]).to_text())
