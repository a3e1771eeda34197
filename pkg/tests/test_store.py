from __future__ import annotations

import threading
from datetime import timedelta

import pytest

import helpers
from slicebench.model import ContainerSpec, CpuMode, DatasetRole, utcnow
from slicebench.store import DatasetStore, NoEligibleHistoric, NotFound, StorageCorrupt


def _ds(dataset_id: str, values=None, memory_mib: int = 100, cpu_mode=CpuMode.SINGLE_CORE,
        role=DatasetRole.CURRENT, vms=("a", "b")):
    if values is None:
        values = {vm: {"l1_cache_latency_ns": 1.0 + i} for i, vm in enumerate(vms)}
    return helpers.make_dataset(values, dataset_id=dataset_id, memory_mib=memory_mib,
                                cpu_mode=cpu_mode, role=role)


def _cells(dataset) -> dict[tuple[str, str], float]:
    return {(m.vm_id, m.attribute_key): m.value for m in dataset.measurements}


class TestRoundTrip:
    def test_put_get(self, tmp_path):
        store = DatasetStore(tmp_path)
        ds = _ds("d1")
        assert store.put_dataset(ds) == "d1"
        stored = store.get_dataset("d1")
        assert stored.dataset_id == "d1"
        assert stored.role is DatasetRole.CURRENT
        assert _cells(stored.dataset) == _cells(ds)
        assert stored.dataset.container == ds.container

    def test_image_ref_survives(self, tmp_path):
        store = DatasetStore(tmp_path)
        spec = ContainerSpec(memory_mib=500, cpu_mode=CpuMode.ALL_CORES, image_ref="bench:v2")
        values = {"a": {"l1_cache_latency_ns": 1.0}, "b": {"l1_cache_latency_ns": 2.0}}
        ds = helpers.make_dataset(values, dataset_id="d-img", memory_mib=500,
                                  cpu_mode=CpuMode.ALL_CORES)
        ds = type(ds)(dataset_id=ds.dataset_id, role=ds.role,
                      measurements=ds.measurements, container=spec)
        store.put_dataset(ds)
        assert store.get_dataset("d-img").dataset.container.image_ref == "bench:v2"

    def test_generated_id_when_blank(self, tmp_path):
        store = DatasetStore(tmp_path)
        dataset_id = store.put_dataset(_ds(""))
        assert dataset_id
        assert store.get_dataset(dataset_id).dataset_id == dataset_id

    def test_reload_from_disk(self, tmp_path):
        DatasetStore(tmp_path).put_dataset(_ds("d1"))
        # a fresh handle on the same root sees the committed dataset
        assert DatasetStore(tmp_path).get_dataset("d1").dataset_id == "d1"

    def test_requires_container(self, tmp_path):
        ds = _ds("d1")
        bare = type(ds)(dataset_id="d1", role=ds.role, measurements=ds.measurements,
                        container=None)
        with pytest.raises(ValueError):
            DatasetStore(tmp_path).put_dataset(bare)


class TestAppendOnly:
    def test_duplicate_id_rejected(self, tmp_path):
        store = DatasetStore(tmp_path)
        store.put_dataset(_ds("d1"))
        with pytest.raises(ValueError, match="append-only"):
            store.put_dataset(_ds("d1"))

    def test_original_untouched_after_rejection(self, tmp_path):
        store = DatasetStore(tmp_path)
        values = {"a": {"l1_cache_latency_ns": 42.0}, "b": {"l1_cache_latency_ns": 43.0}}
        store.put_dataset(_ds("d1", values))
        with pytest.raises(ValueError):
            store.put_dataset(_ds("d1"))
        got = store.get_dataset("d1").dataset.value("a", "l1_cache_latency_ns")
        assert got == 42.0


class TestCorruption:
    def test_missing_payload(self, tmp_path):
        store = DatasetStore(tmp_path)
        store.put_dataset(_ds("d1"))
        (tmp_path / "d1.jsonl").unlink()
        with pytest.raises(StorageCorrupt):
            store.get_dataset("d1")

    def test_checksum_mismatch(self, tmp_path):
        store = DatasetStore(tmp_path)
        store.put_dataset(_ds("d1"))
        path = tmp_path / "d1.jsonl"
        path.write_bytes(path.read_bytes().replace(b"1", b"2", 1))
        with pytest.raises(StorageCorrupt):
            store.get_dataset("d1")

    def test_unknown_id(self, tmp_path):
        with pytest.raises(NotFound):
            DatasetStore(tmp_path).get_dataset("nope")


class TestListing:
    def test_list_newest_first(self, tmp_path):
        store = DatasetStore(tmp_path)
        now = utcnow()
        store.put_dataset(_ds("old"), stored_at=now - timedelta(days=2))
        store.put_dataset(_ds("new"), stored_at=now)
        store.put_dataset(_ds("mid"), stored_at=now - timedelta(days=1))
        assert [e.dataset_id for e in store.list_datasets()] == ["new", "mid", "old"]

    def test_known_vms(self, tmp_path):
        store = DatasetStore(tmp_path)
        store.put_dataset(_ds("d1", vms=("a", "b")))
        store.put_dataset(_ds("d2", vms=("b", "c")))
        assert store.known_vms() == ["a", "b", "c"]

    def test_age_days(self, tmp_path):
        store = DatasetStore(tmp_path)
        now = utcnow()
        store.put_dataset(_ds("d1"), stored_at=now - timedelta(days=3))
        assert store.age_days("d1", now=now) == pytest.approx(3.0, abs=1e-6)


class TestLatestHistoric:
    SPEC = ContainerSpec(memory_mib=100, cpu_mode=CpuMode.SINGLE_CORE)

    def test_newest_matching_wins(self, tmp_path):
        store = DatasetStore(tmp_path)
        now = utcnow()
        store.put_dataset(_ds("h-old"), stored_at=now - timedelta(days=10))
        store.put_dataset(_ds("h-new"), stored_at=now - timedelta(days=2))
        got = store.latest_historic(["a", "b"], self.SPEC, now=now)
        assert got.dataset_id == "h-new"

    def test_container_mismatch_filtered(self, tmp_path):
        store = DatasetStore(tmp_path)
        now = utcnow()
        store.put_dataset(_ds("h-500", memory_mib=500), stored_at=now - timedelta(days=1))
        store.put_dataset(_ds("h-all", cpu_mode=CpuMode.ALL_CORES), stored_at=now - timedelta(days=1))
        with pytest.raises(NoEligibleHistoric):
            store.latest_historic(["a", "b"], self.SPEC, now=now)

    def test_image_ref_ignored_in_match(self, tmp_path):
        store = DatasetStore(tmp_path)
        now = utcnow()
        store.put_dataset(_ds("h1"), stored_at=now - timedelta(days=1))
        other_image = ContainerSpec(memory_mib=100, cpu_mode=CpuMode.SINGLE_CORE,
                                    image_ref="retagged:latest")
        assert store.latest_historic(["a", "b"], other_image, now=now).dataset_id == "h1"

    def test_coverage_required(self, tmp_path):
        store = DatasetStore(tmp_path)
        now = utcnow()
        store.put_dataset(_ds("h1", vms=("a", "b")), stored_at=now - timedelta(days=1))
        with pytest.raises(NoEligibleHistoric):
            store.latest_historic(["a", "b", "c"], self.SPEC, now=now)
        # superset coverage is fine
        store.put_dataset(_ds("h2", vms=("a", "b", "c")), stored_at=now - timedelta(days=2))
        assert store.latest_historic(["a", "b"], self.SPEC, now=now).dataset_id in {"h1", "h2"}

    def test_age_filter(self, tmp_path):
        store = DatasetStore(tmp_path)
        now = utcnow()
        store.put_dataset(_ds("h-stale"), stored_at=now - timedelta(days=45))
        with pytest.raises(NoEligibleHistoric):
            store.latest_historic(["a", "b"], self.SPEC, max_age_days=30.0, now=now)
        assert (
            store.latest_historic(["a", "b"], self.SPEC, max_age_days=60.0, now=now).dataset_id
            == "h-stale"
        )

    def test_future_timestamps_ineligible(self, tmp_path):
        store = DatasetStore(tmp_path)
        now = utcnow()
        store.put_dataset(_ds("h-future"), stored_at=now + timedelta(days=1))
        with pytest.raises(NoEligibleHistoric):
            store.latest_historic(["a", "b"], self.SPEC, now=now)

    def test_exclude_ids(self, tmp_path):
        store = DatasetStore(tmp_path)
        now = utcnow()
        store.put_dataset(_ds("current"), stored_at=now)
        store.put_dataset(_ds("older"), stored_at=now - timedelta(days=1))
        got = store.latest_historic(["a", "b"], self.SPEC, now=now, exclude_ids=("current",))
        assert got.dataset_id == "older"

    def test_bad_max_age(self, tmp_path):
        with pytest.raises(ValueError):
            DatasetStore(tmp_path).latest_historic(["a"], self.SPEC, max_age_days=0)


class TestConcurrency:
    def test_parallel_puts_all_committed(self, tmp_path):
        store = DatasetStore(tmp_path)
        errors: list[Exception] = []

        def put(i: int) -> None:
            try:
                store.put_dataset(_ds(f"d{i}"))
            except Exception as exc:  # pragma: no cover - failure path
                errors.append(exc)

        threads = [threading.Thread(target=put, args=(i,)) for i in range(16)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not errors
        ids = {e.dataset_id for e in store.list_datasets()}
        assert ids == {f"d{i}" for i in range(16)}
        for dataset_id in ids:
            store.get_dataset(dataset_id)  # every payload readable + checksum ok
