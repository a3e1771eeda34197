from __future__ import annotations

import random

import pytest

import oracles
from slicebench.evaluation import (
    PARALLEL,
    SEQUENTIAL,
    CorrelationReport,
    DegenerateRanks,
    DuplicateTiming,
    LengthMismatch,
    MissingVm,
    TimingRecord,
    build_report,
    correlate_tables,
    correlation_summary,
    empirical_ranks,
    rank_correlation,
    read_timing_records,
    write_timing_records,
)
from slicebench.ingest import SchemaViolation
from slicebench.model import RankEntry, RankMode, RankTable
from slicebench.ranking import VmSetMismatch


def _timings(seconds: dict[str, float], app: str = "md-sim", mode: str = SEQUENTIAL):
    return [
        TimingRecord(vm_id=vm, application=app, execution_mode=mode, wall_time_seconds=s)
        for vm, s in seconds.items()
    ]


def _table(ranks: dict[str, int], mode=RankMode.LIGHTWEIGHT, label: str = "") -> RankTable:
    entries = tuple(RankEntry(vm_id=vm, value=None, rank=r) for vm, r in ranks.items())
    return RankTable(mode=mode, entries=entries, label=label)


class TestTimingRecord:
    def test_rejects_bad_mode(self):
        with pytest.raises(ValueError):
            TimingRecord(vm_id="a", application="x", execution_mode="burst", wall_time_seconds=1.0)

    def test_rejects_nonpositive_time(self):
        with pytest.raises(ValueError):
            TimingRecord(vm_id="a", application="x", execution_mode=SEQUENTIAL, wall_time_seconds=0.0)

    def test_correlation_report_range(self):
        with pytest.raises(ValueError):
            CorrelationReport("x", SEQUENTIAL, "100", 100.2)


class TestEmpiricalRanks:
    def test_lowest_time_is_rank_one_with_ties(self):
        table = empirical_ranks(_timings({"a": 100.0, "b": 120.0, "c": 120.0, "d": 130.0}))
        assert table.ranks_by_vm() == {"a": 1, "b": 2, "c": 2, "d": 4}
        assert table.mode is RankMode.EMPIRICAL
        assert table.label == "md-sim/sequential"

    def test_empty_timings(self):
        with pytest.raises(MissingVm):
            empirical_ranks([])

    def test_expected_vms_enforced(self):
        with pytest.raises(MissingVm, match="c"):
            empirical_ranks(_timings({"a": 1.0, "b": 2.0}), expected_vms=["a", "b", "c"])

    def test_duplicate_timing(self):
        rows = _timings({"a": 1.0}) + _timings({"a": 2.0})
        with pytest.raises(DuplicateTiming):
            empirical_ranks(rows)

    def test_mixed_applications_rejected(self):
        rows = _timings({"a": 1.0}, app="x") + _timings({"b": 2.0}, app="y")
        with pytest.raises(ValueError, match="multiple"):
            empirical_ranks(rows)


class TestRankCorrelation:
    def test_identical_vectors(self):
        assert rank_correlation([1, 2, 3, 4], [1, 2, 3, 4]) == pytest.approx(100.0)

    def test_full_reversal(self):
        assert rank_correlation([1, 2, 3, 4], [4, 3, 2, 1]) == pytest.approx(-100.0)

    def test_matches_textbook_formula(self):
        rng = random.Random(23)
        for _ in range(50):
            n = rng.randint(2, 12)
            a = [float(rng.randint(1, n)) for _ in range(n)]
            b = [float(rng.randint(1, n)) for _ in range(n)]
            try:
                want = oracles.textbook_pearson(a, b) * 100.0
            except ZeroDivisionError:
                with pytest.raises(DegenerateRanks):
                    rank_correlation(a, b)
                continue
            assert rank_correlation(a, b) == pytest.approx(want, abs=1e-9)

    def test_symmetry(self):
        a, b = [1, 3, 2, 5, 4], [2, 1, 4, 3, 5]
        assert rank_correlation(a, b) == pytest.approx(rank_correlation(b, a))

    def test_constant_vector_degenerate(self):
        with pytest.raises(DegenerateRanks):
            rank_correlation([1, 1, 1], [1, 2, 3])

    def test_length_mismatch(self):
        with pytest.raises(LengthMismatch):
            rank_correlation([1, 2], [1, 2, 3])
        with pytest.raises(LengthMismatch):
            rank_correlation([1], [1])

    def test_bounded(self):
        rng = random.Random(29)
        for _ in range(200):
            n = rng.randint(2, 8)
            a = [float(rng.randint(1, 4)) for _ in range(n)]
            b = [float(rng.randint(1, 4)) for _ in range(n)]
            if len(set(a)) == 1 or len(set(b)) == 1:
                continue
            assert -100.0 <= rank_correlation(a, b) <= 100.0


class TestCorrelateTables:
    def test_pairs_by_vm_id(self):
        emp = _table({"a": 1, "b": 2, "c": 3}, mode=RankMode.EMPIRICAL)
        bench = _table({"c": 3, "a": 1, "b": 2})
        assert correlate_tables(emp, bench) == pytest.approx(100.0)

    def test_vm_set_mismatch(self):
        emp = _table({"a": 1, "b": 2}, mode=RankMode.EMPIRICAL)
        bench = _table({"a": 1, "c": 2})
        with pytest.raises(VmSetMismatch):
            correlate_tables(emp, bench)


class TestBuildReport:
    def _fixture(self):
        emp = empirical_ranks(_timings({"a": 100.0, "b": 200.0, "c": 300.0}))
        tables = {
            "100": _table({"a": 1, "b": 2, "c": 3}, label="100"),
            "500": _table({"a": 1, "b": 3, "c": 2}, label="500"),
        }
        return emp, tables

    def test_reports_per_size(self):
        emp, tables = self._fixture()
        reports, text = build_report(emp, tables)
        assert [r.container_label for r in reports] == ["100", "500"]
        assert reports[0].application == "md-sim"
        assert reports[0].execution_mode == "sequential"
        assert reports[0].correlation_percent == pytest.approx(100.0)
        assert reports[1].correlation_percent == pytest.approx(50.0)

    def test_text_layout(self):
        emp, tables = self._fixture()
        _, text = build_report(emp, tables)
        lines = text.splitlines()
        assert "Empirical" in lines[0] and "100" in lines[0] and "500" in lines[0]
        assert lines[1].startswith("a")
        assert lines[-1].startswith("correlation %")
        assert "100.0" in lines[-1] and "50.0" in lines[-1]

    def test_row_order_respected(self):
        emp, tables = self._fixture()
        _, text = build_report(emp, tables, row_order=["c", "a", "b"])
        rows = [line.split()[0] for line in text.splitlines()[1:-1]]
        assert rows == ["c", "a", "b"]

    def test_row_order_must_cover_vms(self):
        emp, tables = self._fixture()
        with pytest.raises(VmSetMismatch):
            build_report(emp, tables, row_order=["a", "b"])


class TestCorrelationSummary:
    def test_grid(self):
        reports = [
            CorrelationReport("app-a", SEQUENTIAL, "100", 90.0),
            CorrelationReport("app-a", PARALLEL, "100", 80.0),
            CorrelationReport("app-b", SEQUENTIAL, "100", 70.0),
        ]
        text = correlation_summary(reports)
        lines = text.splitlines()
        assert lines[0].startswith("Application")
        assert lines[1].startswith("app-a") and "90.0" in lines[1] and "80.0" in lines[1]
        # app-b has no parallel entry -> dash placeholder
        assert lines[2].startswith("app-b") and "-" in lines[2]


class TestTimingRecordFiles:
    def test_round_trip(self):
        records = _timings({"a": 100.5, "b": 200.25}, app="risk-sim", mode=PARALLEL)
        assert read_timing_records(write_timing_records(records)) == records

    def test_blank_lines_skipped(self):
        lines = write_timing_records(_timings({"a": 1.0}))
        assert len(read_timing_records(["", *lines, "   "])) == 1

    def test_bad_json(self):
        with pytest.raises(SchemaViolation):
            read_timing_records(["{not json"])

    def test_missing_field(self):
        with pytest.raises(SchemaViolation, match="seconds"):
            read_timing_records(['{"vm_id": "a", "application": "x", "mode": "sequential"}'])

    def test_bad_value(self):
        with pytest.raises(SchemaViolation):
            read_timing_records(
                ['{"vm_id": "a", "application": "x", "mode": "sequential", "seconds": -3}']
            )
