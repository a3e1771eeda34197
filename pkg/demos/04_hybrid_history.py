"""
Fold last week's benchmark run into this week's ranking
=======================================================

The hybrid method scores each VM twice -- once on the current dataset,
once on an eligible historic one -- and ranks the summed scores. History
damps one-off flukes: a VM that looked unusually good this week gets
pulled back toward its track record. The store finds the history itself:
same fleet, same container spec, not older than the staleness bound.
"""

import json
import tempfile
from datetime import datetime, timedelta, timezone
from pathlib import Path

from slicebench import (
    CampaignConfig,
    ContainerSpec,
    CpuMode,
    DatasetStore,
    Orchestrator,
    WeightVector,
    fixtures,
    hybrid_rank,
    lightweight_rank,
    load_inventory,
)

inv = Path(tempfile.mkdtemp()) / "inventory.json"
inv.write_text(json.dumps({"hosts": fixtures.simulated_inventory()}))
hosts = load_inventory(inv)
spec = ContainerSpec(memory_mib=100, cpu_mode=CpuMode.SINGLE_CORE)
store = DatasetStore(tempfile.mkdtemp(prefix="slicebench-history-"))

# Last week's campaign: run it, then file it with a week-old timestamp so
# the store sees genuine history. Last week was a rough one -- heavy noise
# from neighbors, the kind of fluke history is supposed to smooth out.
_, past = Orchestrator(
    CampaignConfig(container=spec, profile_seed=3, noise_pct=0.25)
).run_campaign(hosts, run_id="last-week")
store.put_dataset(past, stored_at=datetime.now(timezone.utc) - timedelta(days=7))

# This week's campaign goes straight into the store.
_, current = Orchestrator(
    CampaignConfig(container=spec, store=store, profile_seed=7)
).run_campaign(hosts, run_id="this-week")

weights = WeightVector(4, 3, 5, 0)

# Lightweight: this week's data only.
light = lightweight_rank(current, weights)

# Hybrid: the store picks the newest eligible history (<= 30 days old,
# same VMs, same container spec, not the dataset being ranked).
historic = store.latest_historic(
    current.vm_ids, current.container, exclude_ids=(current.dataset_id,)
)
hybrid = hybrid_rank(
    current,
    historic.dataset,
    weights,
    historic_age_days=store.age_days(historic.dataset_id),
)

print(f"history: {historic.dataset_id} "
      f"({store.age_days(historic.dataset_id):.1f} days old)")
print()
print(f"{'VM':<12}  lightweight  hybrid")
moved = []
for vm in sorted(current.vm_ids):
    lw, hy = light.rank_of(vm), hybrid.rank_of(vm)
    marker = "  <-" if lw != hy else ""
    print(f"{vm:<12}  {lw:>11}  {hy:>6}{marker}")
    if lw != hy:
        moved.append(vm)
print()
print("moved by history:", ", ".join(moved) if moved else "nobody")
