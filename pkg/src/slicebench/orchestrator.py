"""Campaign coordination: one resource-capped container per target VM.

The coordinator owns all mutable run state behind a lock; per-host workers
drive a fixed container lifecycle (create -> start -> wait -> logs ->
remove) against an engine client and report state transitions back. The
remove step runs in a ``finally`` block so a host failure never leaks its
container. Engine clients speak either the container engine's HTTP API on
the target VM or an in-process simulated engine for desk-scale runs.
"""

from __future__ import annotations

import copy
import json
import threading
import time
import uuid
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, Mapping

import requests

from .ingest import parse_tool_output, RawBenchmarkOutput
from .model import (
    BenchmarkDataset,
    ContainerSpec,
    CpuMode,
    DatasetRole,
    HostState,
    HostStatus,
    RunRecord,
    SliceBenchError,
    VmDescriptor,
    utcnow,
    valid_transition,
)
from .simulate import PerfProfile, simulated_execute
from .store import DatasetStore


class OrchestratorError(SliceBenchError):
    pass


class HostUnreachable(OrchestratorError):
    def __init__(self, host_id: str, detail: str):
        super().__init__(f"host {host_id!r} unreachable: {detail}")
        self.host_id = host_id


class ContainerCreateFailed(OrchestratorError):
    pass


class BenchmarkFailed(OrchestratorError):
    pass


class DuplicateRun(OrchestratorError):
    """A host in the request is already part of an unfinished run."""

    def __init__(self, host_ids: Iterable[str]):
        ids = sorted(host_ids)
        super().__init__(f"hosts already busy in an active run: {', '.join(ids)}")
        self.host_ids = tuple(ids)


class UnknownRun(OrchestratorError):
    def __init__(self, run_id: str):
        super().__init__(f"no such run: {run_id!r}")
        self.run_id = run_id


# --- inventory --------------------------------------------------------------


class ExecutorKind(str, Enum):
    HTTP_ENGINE = "http-engine"
    SIMULATED = "simulated"


@dataclass(frozen=True)
class ExecutorBinding:
    kind: ExecutorKind
    endpoint: str = ""  # engine API base URL; required for http-engine


@dataclass(frozen=True)
class Host:
    vm: VmDescriptor
    binding: ExecutorBinding

    @property
    def id(self) -> str:
        return self.vm.id


def load_inventory(path: str | Path) -> list[Host]:
    """Read a host inventory file: {"hosts": [{id, vm_type, vcpus, ...}]}."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    hosts = []
    for raw in data.get("hosts", []):
        kind = ExecutorKind(str(raw.get("executor", "http-engine")).replace("_", "-"))
        vm = VmDescriptor(
            id=raw["id"],
            vm_type=raw.get("vm_type", raw["id"]),
            vcpus=int(raw.get("vcpus", 1)),
            memory_gib=float(raw.get("memory_gib", 1.0)),
            endpoint=raw.get("endpoint", ""),
            tags=dict(raw.get("tags", {})),
        )
        hosts.append(Host(vm=vm, binding=ExecutorBinding(kind=kind, endpoint=vm.endpoint)))
    if len({h.id for h in hosts}) != len(hosts):
        raise ValueError("inventory contains duplicate host ids")
    return hosts


def cpuset_for(vm: VmDescriptor, cpu_mode: CpuMode) -> str:
    """cpuset string pinning the container to one core or to all of them."""
    if cpu_mode is CpuMode.SINGLE_CORE or vm.vcpus == 1:
        return "0"
    return f"0-{vm.vcpus - 1}"


# --- engine clients ---------------------------------------------------------


class EngineClient(ABC):
    """Minimal container-engine surface the campaign needs on one host."""

    @abstractmethod
    def create_container(self, image: str, memory_bytes: int, cpuset_cpus: str) -> str: ...

    @abstractmethod
    def start(self, container_id: str) -> None: ...

    @abstractmethod
    def wait(self, container_id: str, timeout_s: float) -> int: ...

    @abstractmethod
    def logs(self, container_id: str) -> str: ...

    @abstractmethod
    def remove(self, container_id: str) -> None: ...


def _demux_engine_stream(payload: bytes) -> str:
    """Decode an attach/logs stream, stripping 8-byte multiplex frame headers.

    Engines running without a TTY frame stdout/stderr as
    [stream(1), 0, 0, 0, len(4, big-endian)] + payload; TTY output is raw.
    """
    if not payload:
        return ""
    if payload[0] not in (0, 1, 2):  # not a frame header: raw stream
        return payload.decode("utf-8", errors="replace")
    out = bytearray()
    i = 0
    while i + 8 <= len(payload):
        size = int.from_bytes(payload[i + 4 : i + 8], "big")
        out += payload[i + 8 : i + 8 + size]
        i += 8 + size
    return out.decode("utf-8", errors="replace")


class HttpEngineClient(EngineClient):
    """Talks to one VM's container engine over its HTTP remote API."""

    def __init__(self, base_url: str, host_id: str = "", session: requests.Session | None = None):
        if not base_url:
            raise ValueError("http-engine executor requires an endpoint URL")
        self.base_url = base_url.rstrip("/")
        self.host_id = host_id or base_url
        self._session = session or requests.Session()

    def _request(self, method: str, path: str, timeout: float = 60.0, **kwargs) -> requests.Response:
        try:
            return self._session.request(method, self.base_url + path, timeout=timeout, **kwargs)
        except requests.Timeout as exc:
            raise BenchmarkFailed(f"engine request {path} timed out") from exc
        except requests.RequestException as exc:
            raise HostUnreachable(self.host_id, str(exc)) from exc

    def create_container(self, image: str, memory_bytes: int, cpuset_cpus: str) -> str:
        body = {
            "Image": image,
            "HostConfig": {"Memory": memory_bytes, "CpusetCpus": cpuset_cpus},
        }
        resp = self._request("POST", "/containers/create", json=body)
        if resp.status_code != 201:
            raise ContainerCreateFailed(
                f"create on {self.host_id} returned {resp.status_code}: {resp.text[:200]}"
            )
        return resp.json()["Id"]

    def start(self, container_id: str) -> None:
        resp = self._request("POST", f"/containers/{container_id}/start")
        if resp.status_code not in (204, 304):
            raise BenchmarkFailed(f"start returned {resp.status_code}: {resp.text[:200]}")

    def wait(self, container_id: str, timeout_s: float) -> int:
        resp = self._request("POST", f"/containers/{container_id}/wait", timeout=timeout_s)
        if resp.status_code != 200:
            raise BenchmarkFailed(f"wait returned {resp.status_code}: {resp.text[:200]}")
        return int(resp.json().get("StatusCode", -1))

    def logs(self, container_id: str) -> str:
        resp = self._request("GET", f"/containers/{container_id}/logs?stdout=1&stderr=1")
        if resp.status_code != 200:
            raise BenchmarkFailed(f"logs returned {resp.status_code}")
        return _demux_engine_stream(resp.content)

    def remove(self, container_id: str) -> None:
        resp = self._request("DELETE", f"/containers/{container_id}?force=1")
        if resp.status_code not in (204, 404):
            raise OrchestratorError(f"remove returned {resp.status_code}: {resp.text[:200]}")


class SimulatedEngine(EngineClient):
    """In-process engine: honours the same lifecycle, emits synthetic output.

    The container config is reconstructed from the create call alone
    (memory bytes and cpuset), so the simulated path exercises exactly the
    arguments a real engine would receive.
    """

    def __init__(
        self,
        vm: VmDescriptor,
        profile_seed: int = 0,
        profiles: Mapping[str, PerfProfile] | None = None,
        noise_pct: float = 0.01,
    ):
        self.vm = vm
        self.profile_seed = profile_seed
        self.profiles = profiles
        self.noise_pct = noise_pct
        self._specs: dict[str, ContainerSpec] = {}

    def create_container(self, image: str, memory_bytes: int, cpuset_cpus: str) -> str:
        mode = CpuMode.SINGLE_CORE if cpuset_cpus == "0" else CpuMode.ALL_CORES
        spec = ContainerSpec(memory_mib=memory_bytes // 2**20, cpu_mode=mode, image_ref=image)
        container_id = uuid.uuid4().hex
        self._specs[container_id] = spec
        return container_id

    def _spec(self, container_id: str) -> ContainerSpec:
        try:
            return self._specs[container_id]
        except KeyError:
            raise OrchestratorError(f"no such simulated container: {container_id!r}") from None

    def start(self, container_id: str) -> None:
        self._spec(container_id)

    def wait(self, container_id: str, timeout_s: float) -> int:
        self._spec(container_id)
        return 0

    def logs(self, container_id: str) -> str:
        out = simulated_execute(
            self.vm,
            self._spec(container_id),
            profile_seed=self.profile_seed,
            profiles=self.profiles,
            noise_pct=self.noise_pct,
        )
        return "\n".join(out.lines) + "\n"

    def remove(self, container_id: str) -> None:
        self._specs.pop(container_id, None)


# --- campaign ---------------------------------------------------------------


@dataclass
class CampaignConfig:
    container: ContainerSpec | None = None  # default spec; overridable per campaign
    timeout_s: float = 1800.0
    max_workers: int = 8
    role: DatasetRole = DatasetRole.CURRENT
    store: DatasetStore | None = None
    profile_seed: int = 0
    profiles: Mapping[str, PerfProfile] | None = None
    noise_pct: float = 0.01
    # Override to inject fakes in tests or custom transports in deployments.
    client_factory: Callable[[Host], EngineClient] | None = None


class Orchestrator:
    """Runs benchmark campaigns and tracks their lifecycle."""

    def __init__(self, config: CampaignConfig):
        self.config = config
        self._lock = threading.Lock()
        self._runs: dict[str, RunRecord] = {}
        self._threads: dict[str, threading.Thread] = {}
        self._datasets: dict[str, BenchmarkDataset] = {}
        self._errors: dict[str, BaseException] = {}
        self._audit: dict[str, list[tuple[str, HostState]]] = {}
        self._specs: dict[str, ContainerSpec] = {}

    # -- client wiring ---------------------------------------------------

    def _client_for(self, host: Host) -> EngineClient:
        if self.config.client_factory is not None:
            return self.config.client_factory(host)
        if host.binding.kind is ExecutorKind.SIMULATED:
            return SimulatedEngine(
                host.vm,
                profile_seed=self.config.profile_seed,
                profiles=self.config.profiles,
                noise_pct=self.config.noise_pct,
            )
        return HttpEngineClient(host.binding.endpoint or host.vm.endpoint, host_id=host.id)

    # -- state bookkeeping ------------------------------------------------

    def _set_state(self, run_id: str, host_id: str, new: HostState, reason: str | None = None) -> None:
        with self._lock:
            status = self._runs[run_id].hosts[host_id]
            if not valid_transition(status.state, new):
                raise OrchestratorError(
                    f"illegal transition {status.state.value} -> {new.value} for {host_id!r}"
                )
            status.state = new
            if new is HostState.PROVISIONING:
                status.started_at = utcnow()
            if new.terminal:
                status.finished_at = utcnow()
            if reason is not None:
                status.failure_reason = reason
            self._audit[run_id].append((host_id, new))

    # -- public API --------------------------------------------------------

    def start_campaign(
        self, hosts: Iterable[Host], run_id: str = "", container: ContainerSpec | None = None
    ) -> str:
        """Launch a campaign in the background; returns its run id."""
        host_list = list(hosts)
        if not host_list:
            raise ValueError("campaign needs at least one host")
        if len({h.id for h in host_list}) != len(host_list):
            raise ValueError("duplicate host ids in campaign")
        spec = container if container is not None else self.config.container
        if spec is None:
            raise ValueError("no container spec: pass one or set CampaignConfig.container")
        rid = run_id or uuid.uuid4().hex
        with self._lock:
            if rid in self._runs:
                raise ValueError(f"run id {rid!r} already used")
            requested = {h.id for h in host_list}
            busy = set()
            for record in self._runs.values():
                if not record.finished:
                    busy |= requested & set(record.hosts)
            if busy:
                raise DuplicateRun(busy)
            self._runs[rid] = RunRecord(
                run_id=rid,
                hosts={h.id: HostStatus() for h in host_list},
                started_at=utcnow(),
            )
            self._audit[rid] = []
            self._specs[rid] = spec
        thread = threading.Thread(target=self._run, args=(rid, host_list), daemon=True)
        self._threads[rid] = thread
        thread.start()
        return rid

    def run_campaign(
        self, hosts: Iterable[Host], run_id: str = "", container: ContainerSpec | None = None
    ) -> tuple[RunRecord, BenchmarkDataset | None]:
        """Synchronous convenience wrapper around start + wait."""
        rid = self.start_campaign(hosts, run_id=run_id, container=container)
        record = self.wait(rid)
        return record, self.dataset_for(rid)

    def wait(self, run_id: str, timeout: float | None = None) -> RunRecord:
        thread = self._threads.get(run_id)
        if thread is None:
            raise UnknownRun(run_id)
        thread.join(timeout)
        if thread.is_alive():
            raise TimeoutError(f"run {run_id} still in progress")
        error = self._errors.pop(run_id, None)
        if error is not None:
            raise error
        return self.poll_status(run_id)

    def poll_status(self, run_id: str) -> RunRecord:
        """Point-in-time snapshot; safe to inspect while the run progresses."""
        with self._lock:
            record = self._runs.get(run_id)
            if record is None:
                raise UnknownRun(run_id)
            return copy.deepcopy(record)

    def dataset_for(self, run_id: str) -> BenchmarkDataset | None:
        with self._lock:
            if run_id not in self._runs:
                raise UnknownRun(run_id)
            return self._datasets.get(run_id)

    def run_ids(self) -> list[str]:
        with self._lock:
            return sorted(self._runs)

    def audit_log(self, run_id: str) -> list[tuple[str, HostState]]:
        """Ordered (host_id, state) transition trail for one run."""
        with self._lock:
            if run_id not in self._audit:
                raise UnknownRun(run_id)
            return list(self._audit[run_id])

    # -- workers -----------------------------------------------------------

    def _run(self, run_id: str, hosts: list[Host]) -> None:
        results: dict[str, RawBenchmarkOutput] = {}
        try:
            workers = min(self.config.max_workers, len(hosts))
            with ThreadPoolExecutor(max_workers=workers) as pool:
                futures = {pool.submit(self._bench_host, run_id, h): h for h in hosts}
                for future, host in futures.items():
                    output = future.result()
                    if output is not None:
                        results[host.id] = output
            self._finalize(run_id, results)
        except BaseException as exc:  # surfaced on wait()
            self._errors[run_id] = exc
        finally:
            with self._lock:
                self._runs[run_id].finished_at = utcnow()

    def _bench_host(self, run_id: str, host: Host) -> RawBenchmarkOutput | None:
        spec = self._specs[run_id]
        client = self._client_for(host)
        container_id: str | None = None
        output: RawBenchmarkOutput | None = None
        failure: Exception | None = None
        begin = time.perf_counter()
        try:
            self._set_state(run_id, host.id, HostState.PROVISIONING)
            container_id = client.create_container(
                image=spec.image_ref,
                memory_bytes=spec.memory_bytes,
                cpuset_cpus=cpuset_for(host.vm, spec.cpu_mode),
            )
            self._set_state(run_id, host.id, HostState.BENCHMARKING)
            client.start(container_id)
            status = client.wait(container_id, timeout_s=self.config.timeout_s)
            if status != 0:
                raise BenchmarkFailed(f"benchmark exited with status {status}")
            self._set_state(run_id, host.id, HostState.COLLECTING)
            text = client.logs(container_id)
            output = RawBenchmarkOutput(
                vm_id=host.id, container=spec, lines=tuple(text.splitlines())
            )
        except Exception as exc:
            failure = exc
        finally:
            # Cleanup happens whether or not the benchmark succeeded; a
            # failed removal fails the host rather than leaking silently.
            if container_id is not None:
                try:
                    client.remove(container_id)
                except Exception as exc:
                    failure = failure if failure is not None else exc
            with self._lock:
                self._runs[run_id].hosts[host.id].duration_seconds = time.perf_counter() - begin
        if failure is not None:
            self._set_state(run_id, host.id, HostState.FAILED, reason=str(failure))
            return None
        self._set_state(run_id, host.id, HostState.DONE)
        return output

    def _finalize(self, run_id: str, results: dict[str, RawBenchmarkOutput]) -> None:
        if not results:
            return
        measurements = []
        captured = utcnow()
        for output in results.values():
            parsed = parse_tool_output(output, captured_at=captured)
            measurements.extend(parsed.measurements)
        dataset = BenchmarkDataset(
            dataset_id=run_id,
            role=self.config.role,
            measurements=tuple(measurements),
            container=self._specs[run_id],
        )
        with self._lock:
            self._datasets[run_id] = dataset
            self._runs[run_id].dataset_id = run_id
        if self.config.store is not None:
            self.config.store.put_dataset(dataset)
