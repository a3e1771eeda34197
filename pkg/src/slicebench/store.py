"""File-backed dataset repository with staleness filtering for hybrid runs.

Layout: one canonical record file per dataset plus a single JSON index of
{dataset_id, role, container, stored_at, checksum, vm_ids}. Stored
datasets are append-only; a re-benchmark creates a new id. Writes are
serialized through one lock and the payload is committed before the index
entry, so concurrent readers only ever see fully committed datasets.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable

from .ingest import read_canonical_records, write_canonical_records
from .model import (
    BenchmarkDataset,
    ContainerSpec,
    CpuMode,
    DatasetRole,
    SliceBenchError,
    utcnow,
)


class NotFound(SliceBenchError):
    pass


class StorageCorrupt(SliceBenchError):
    """Payload bytes do not match the checksum recorded at write time."""


class NoEligibleHistoric(SliceBenchError):
    """No stored dataset satisfies the coverage, container, and age filters."""


@dataclass(frozen=True)
class StoredDataset:
    dataset: BenchmarkDataset
    stored_at: datetime
    role: DatasetRole

    @property
    def dataset_id(self) -> str:
        return self.dataset.dataset_id


@dataclass(frozen=True)
class IndexEntry:
    dataset_id: str
    role: DatasetRole
    memory_mib: int
    cpu_mode: CpuMode
    image_ref: str
    stored_at: datetime
    checksum: str
    vm_ids: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "dataset_id": self.dataset_id,
            "role": self.role.value,
            "container": {
                "memory_mib": self.memory_mib,
                "cpu_mode": self.cpu_mode.value,
                "image_ref": self.image_ref,
            },
            "stored_at": self.stored_at.isoformat(),
            "checksum": self.checksum,
            "vm_ids": list(self.vm_ids),
        }

    @classmethod
    def from_json(cls, data: dict) -> "IndexEntry":
        stamp = datetime.fromisoformat(data["stored_at"])
        if stamp.tzinfo is None:
            stamp = stamp.replace(tzinfo=timezone.utc)
        return cls(
            dataset_id=data["dataset_id"],
            role=DatasetRole(data["role"]),
            memory_mib=int(data["container"]["memory_mib"]),
            cpu_mode=CpuMode(data["container"]["cpu_mode"]),
            image_ref=data["container"].get("image_ref", ""),
            stored_at=stamp,
            checksum=data["checksum"],
            vm_ids=tuple(data["vm_ids"]),
        )


class DatasetStore:
    """Single-writer, multi-reader dataset repository rooted at a directory."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._index_path = self.root / "index.json"
        self._write_lock = threading.Lock()

    # -- index ----------------------------------------------------------

    def _load_index(self) -> list[IndexEntry]:
        if not self._index_path.exists():
            return []
        with open(self._index_path, encoding="utf-8") as fh:
            data = json.load(fh)
        return [IndexEntry.from_json(e) for e in data.get("datasets", [])]

    def _save_index(self, entries: list[IndexEntry]) -> None:
        payload = {"version": 1, "datasets": [e.to_json() for e in entries]}
        tmp = self._index_path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(payload, indent=2), encoding="utf-8")
        os.replace(tmp, self._index_path)

    def _payload_path(self, dataset_id: str) -> Path:
        return self.root / f"{dataset_id}.jsonl"

    # -- operations -----------------------------------------------------

    def put_dataset(self, dataset: BenchmarkDataset, stored_at: datetime | None = None) -> str:
        """Persist a dataset; returns its id. Existing ids are never overwritten."""
        dataset_id = dataset.dataset_id or uuid.uuid4().hex
        stamp = stored_at if stored_at is not None else utcnow()
        if dataset.container is None:
            raise ValueError("cannot store a dataset without a container spec")
        if not dataset.dataset_id:
            dataset = BenchmarkDataset(
                dataset_id=dataset_id,
                role=dataset.role,
                measurements=dataset.measurements,
                container=dataset.container,
            )
        body = "\n".join(write_canonical_records(dataset)) + "\n"
        payload = body.encode("utf-8")
        with self._write_lock:
            entries = self._load_index()
            if any(e.dataset_id == dataset_id for e in entries):
                raise ValueError(f"dataset {dataset_id!r} already stored; store is append-only")
            self._payload_path(dataset_id).write_bytes(payload)
            entries.append(
                IndexEntry(
                    dataset_id=dataset_id,
                    role=dataset.role,
                    memory_mib=dataset.container.memory_mib,
                    cpu_mode=dataset.container.cpu_mode,
                    image_ref=dataset.container.image_ref,
                    stored_at=stamp,
                    checksum=hashlib.sha256(payload).hexdigest(),
                    vm_ids=dataset.vm_ids,
                )
            )
            self._save_index(entries)
        return dataset_id

    def _entry(self, dataset_id: str) -> IndexEntry:
        for entry in self._load_index():
            if entry.dataset_id == dataset_id:
                return entry
        raise NotFound(f"dataset {dataset_id!r} not in store")

    def get_dataset(self, dataset_id: str) -> StoredDataset:
        entry = self._entry(dataset_id)
        path = self._payload_path(dataset_id)
        if not path.exists():
            raise StorageCorrupt(f"payload for {dataset_id!r} missing")
        payload = path.read_bytes()
        if hashlib.sha256(payload).hexdigest() != entry.checksum:
            raise StorageCorrupt(f"checksum mismatch for dataset {dataset_id!r}")
        container = ContainerSpec(
            memory_mib=entry.memory_mib, cpu_mode=entry.cpu_mode, image_ref=entry.image_ref
        )
        dataset = read_canonical_records(
            payload.decode("utf-8").splitlines(),
            dataset_id=dataset_id,
            role=entry.role,
            container=container,
        )
        return StoredDataset(dataset=dataset, stored_at=entry.stored_at, role=entry.role)

    def list_datasets(self) -> list[IndexEntry]:
        """All index entries, newest first (ties broken by dataset_id)."""
        return sorted(self._load_index(), key=lambda e: (e.stored_at, e.dataset_id), reverse=True)

    def known_vms(self) -> list[str]:
        vms: set[str] = set()
        for entry in self._load_index():
            vms.update(entry.vm_ids)
        return sorted(vms)

    def latest_historic(
        self,
        vm_set: Iterable[str],
        container: ContainerSpec,
        max_age_days: float = 30.0,
        now: datetime | None = None,
        exclude_ids: Iterable[str] = (),
    ) -> StoredDataset:
        """Newest stored dataset covering ``vm_set`` with a matching container
        configuration and age <= ``max_age_days``.

        Any stored dataset can serve as history (a previous lightweight run
        qualifies), so the role tag is provenance only; callers exclude the
        dataset currently being ranked. Container match is on memory size
        and CPU mode; the image reference is ignored so that re-tagged
        images do not spuriously miss history.
        """
        if max_age_days <= 0:
            raise ValueError("max_age_days must be > 0")
        needed = set(vm_set)
        moment = now if now is not None else utcnow()
        excluded = set(exclude_ids)
        candidates = []
        for entry in self._load_index():
            if entry.dataset_id in excluded:
                continue
            if (entry.memory_mib, entry.cpu_mode) != (container.memory_mib, container.cpu_mode):
                continue
            if not needed.issubset(set(entry.vm_ids)):
                continue
            age_days = (moment - entry.stored_at).total_seconds() / 86400.0
            if age_days < 0 or age_days > max_age_days:
                continue
            candidates.append(entry)
        if not candidates:
            raise NoEligibleHistoric(
                f"no stored dataset covers {sorted(needed)} with container "
                f"{container.memory_mib} MiB/{container.cpu_mode.value} "
                f"within {max_age_days:g} days"
            )
        # Newest wins; equal timestamps break deterministically by dataset_id.
        best = max(candidates, key=lambda e: (e.stored_at, e.dataset_id))
        return self.get_dataset(best.dataset_id)

    def age_days(self, dataset_id: str, now: datetime | None = None) -> float:
        entry = self._entry(dataset_id)
        moment = now if now is not None else utcnow()
        return (moment - entry.stored_at).total_seconds() / 86400.0
