"""
Benchmark a simulated ten-VM fleet inside resource-capped containers
====================================================================

Runs one campaign against the bundled reference fleet: each VM gets a
container capped at 100 MiB of memory and a single core, the synthetic
microbenchmark runs inside it, and the parsed measurements land in an
on-disk dataset store.
"""

import tempfile

from slicebench import (
    CampaignConfig,
    ContainerSpec,
    CpuMode,
    DatasetStore,
    Orchestrator,
    fixtures,
    load_inventory,
)

# A store directory: datasets are content-checksummed JSON files, append-only.
store = DatasetStore(tempfile.mkdtemp(prefix="slicebench-demo-"))

# The reference fleet ships as an inventory file bound to the simulated
# executor, so this demo needs no container engine.
export_dir = tempfile.mkdtemp(prefix="slicebench-fixtures-")
fixtures.export_fixture_files(export_dir)
hosts = load_inventory(f"{export_dir}/inventory_simulated.json")
print(f"fleet: {', '.join(h.id for h in hosts)}")

# One campaign = one container spec on every host, run in parallel.
spec = ContainerSpec(memory_mib=100, cpu_mode=CpuMode.SINGLE_CORE)
config = CampaignConfig(container=spec, store=store, profile_seed=7)
record, dataset = Orchestrator(config).run_campaign(hosts, run_id="demo-campaign")

for host_id in sorted(record.hosts):
    status = record.hosts[host_id]
    print(f"  {host_id}: {status.state.value} ({status.duration_seconds:.2f}s)")

print(f"dataset {dataset.dataset_id}: {len(dataset.vm_ids)} VMs x "
      f"{len(dataset.attribute_keys)} attributes")

# A few raw cells, straight off the parsed benchmark output.
for vm in dataset.vm_ids[:3]:
    l1 = dataset.value(vm, "l1_cache_latency_ns")
    bw = dataset.value(vm, "mem_read_bw_mbps")
    print(f"  {vm}: L1 {l1:.2f} ns, memory read {bw:.0f} MB/s")

print(f"store now holds: {[e.dataset_id for e in store.list_datasets()]}")
