from __future__ import annotations

import json

import pytest

from slicebench.evaluation import SEQUENTIAL, correlate_tables, empirical_ranks
from slicebench.fixtures import (
    case_studies,
    case_study,
    case_study_ids,
    container_sizes_mib,
    export_fixture_files,
    reference_fleet,
    simulated_inventory,
    tie_case_expected_ranks,
    tie_case_timings,
    vm_order,
)
from slicebench.model import RankMode
from slicebench.orchestrator import ExecutorKind, load_inventory
from slicebench.ranking import competition_rank


class TestReferenceFleet:
    def test_ten_distinct_vms(self, fleet):
        assert len(fleet) == 10
        assert len({vm.id for vm in fleet}) == 10

    def test_order_matches_case_study_rows(self, fleet):
        assert tuple(vm.id for vm in fleet) == vm_order()

    def test_sizing_is_plausible(self, fleet):
        for vm in fleet:
            assert vm.vcpus >= 1
            assert vm.memory_gib > 0
            assert "processor" in vm.tags


class TestCaseStudies:
    def test_three_cases(self):
        assert case_study_ids() == ("cs1", "cs2", "cs3")
        assert container_sizes_mib() == (100, 500, 1000)

    def test_unknown_case_raises(self):
        with pytest.raises(KeyError):
            case_study("cs9")

    @pytest.mark.parametrize("case_id", ["cs1", "cs2", "cs3"])
    def test_tables_are_permutation_complete(self, case_id):
        cs = case_study(case_id)
        assert len(cs.vm_order) == 10
        for mode, ranks in cs.empirical.items():
            assert len(ranks) == 10
            assert min(ranks) == 1
        for method, per_mode in cs.benchmark.items():
            for mode, per_size in per_mode.items():
                assert set(per_size) == set(container_sizes_mib())
                for ranks in per_size.values():
                    assert len(ranks) == 10 and min(ranks) == 1

    def test_empirical_timings_reproduce_ranks(self):
        # Synthesized wall times are a fixed multiple of rank, so competition
        # ranking them (lower-first) must return the frozen rank vector,
        # ties included.
        for cs in case_studies():
            for mode, expected in cs.empirical.items():
                table = empirical_ranks(cs.empirical_timings(mode))
                want = dict(zip(cs.vm_order, expected))
                assert table.ranks_by_vm() == want, (cs.case_id, mode)

    def test_benchmark_table_metadata(self):
        cs = case_study("cs1")
        table = cs.benchmark_table("lightweight", SEQUENTIAL, 100)
        assert table.mode is RankMode.LIGHTWEIGHT
        assert table.weights == cs.weights
        assert "cs1" in table.label

    def test_expected_correlation_lookup(self):
        cs = case_study("cs1")
        want = cs.correlations["lightweight"][SEQUENTIAL][1]
        assert cs.expected_correlation("lightweight", SEQUENTIAL, 500) == want

    def test_correlations_recomputable(self):
        # spot-check one entry end to end via the evaluation pipeline
        cs = case_study("cs3")
        emp = cs.empirical_table(SEQUENTIAL)
        bench = cs.benchmark_table("lightweight", SEQUENTIAL, 100)
        got = correlate_tables(emp, bench)
        assert got == pytest.approx(cs.expected_correlation("lightweight", SEQUENTIAL, 100), abs=0.05)


class TestTieCase:
    def test_exact_tie_produces_shared_rank_and_gap(self):
        times = {t.vm_id: t.wall_time_seconds for t in tie_case_timings()}
        ranks = {e.vm_id: e.rank for e in competition_rank(times, "lower-first")}
        assert ranks == tie_case_expected_ranks()
        # the defining property: two VMs share rank 3, nobody holds rank 4
        values = sorted(ranks.values())
        assert values.count(3) == 2
        assert 4 not in values
        assert 5 in values


class TestExportedFiles:
    def test_inventory_loads_as_simulated_hosts(self, tmp_path):
        export_fixture_files(tmp_path)
        hosts = load_inventory(tmp_path / "inventory_simulated.json")
        assert len(hosts) == 10
        assert all(h.binding.kind is ExecutorKind.SIMULATED for h in hosts)
        assert [h.id for h in hosts] == list(vm_order())

    def test_all_expected_files_written(self, tmp_path):
        written = {p.name for p in export_fixture_files(tmp_path)}
        assert "inventory_simulated.json" in written
        assert "tie_case_timings.jsonl" in written
        assert "cs1_sequential_timings.jsonl" in written
        assert "cs2_hybrid_parallel_500mib_ranks.jsonl" in written
        # 1 inventory + 1 tie case + 3 cases x (2 timing files + 2x2x3 rank files)
        assert len(written) == 2 + 3 * (2 + 12)

    def test_rank_files_are_jsonl(self, tmp_path):
        export_fixture_files(tmp_path)
        path = tmp_path / "cs1_lightweight_sequential_100mib_ranks.jsonl"
        rows = [json.loads(line) for line in path.read_text().splitlines()]
        assert len(rows) == 10
        assert {"vm_id", "rank"} <= set(rows[0])

    def test_simulated_inventory_entries(self):
        entries = simulated_inventory()
        assert all(e["executor"] == "simulated" for e in entries)
        assert {e["id"] for e in entries} == {vm.id for vm in reference_fleet()}
