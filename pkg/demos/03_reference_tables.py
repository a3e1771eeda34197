"""
Reproduce the case-study correlation tables from the shipped fixtures
=====================================================================

Three applications were timed on the reference fleet and also ranked from
container benchmarks at three container sizes. Correlating the empirical
rank vector with each benchmark-derived one says how well a cheap
container campaign predicts the expensive real measurement.
"""

from slicebench import empirical_ranks, build_report, correlate_tables, fixtures

for cs in fixtures.case_studies():
    print(f"=== {cs.case_id}: {cs.application} (weights {cs.weights.as_tuple()}) ===")
    for mode in sorted(cs.empirical):
        # Rank the VMs by measured wall time, ties shared.
        empirical = empirical_ranks(cs.empirical_timings(mode))
        tables = {
            f"{size} MiB": cs.benchmark_table("lightweight", mode, size)
            for size in fixtures.container_sizes_mib()
        }
        reports, text = build_report(
            empirical, tables, cs.application, mode, row_order=cs.vm_order
        )
        print(f"-- {mode} --")
        print(text)
        print()

# The hybrid method folds in a historic dataset; its fixtures correlate the
# same way. One number as a spot check:
cs1 = fixtures.case_study("cs1")
r = correlate_tables(
    empirical_ranks(cs1.empirical_timings("sequential")),
    cs1.benchmark_table("hybrid", "sequential", 100),
)
print(f"cs1 hybrid/sequential/100MiB correlation: {r:.1f}%")
