"""HTTP facade over the orchestrator, store, and ranking engine.

Campaigns are started asynchronously (POST /runs, polled via GET
/runs/{id}); rankings are computed per request from stored datasets so a
weight change is a pure read with no server-side state. Error bodies are
always {"code": ..., "message": ...}.
"""

from __future__ import annotations

from datetime import datetime
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .model import (
    DEFAULT_IMAGE,
    ContainerSpec,
    CpuMode,
    RankTable,
    RunRecord,
    VmDescriptor,
    WeightVector,
)
from .orchestrator import (
    CampaignConfig,
    DuplicateRun,
    ExecutorBinding,
    ExecutorKind,
    Host,
    Orchestrator,
    UnknownRun,
    load_inventory,
)
from .ranking import hybrid_rank, lightweight_rank
from .store import DatasetStore, NoEligibleHistoric, NotFound

MAX_PAGE_SIZE = 500


class ApiError(Exception):
    def __init__(self, status_code: int, code: str, message: str):
        super().__init__(message)
        self.status_code = status_code
        self.code = code
        self.message = message


def _bad_request(message: str) -> ApiError:
    return ApiError(400, "invalid-request", message)


def _iso(moment: datetime | None) -> str | None:
    return moment.isoformat() if moment is not None else None


def _run_body(record: RunRecord) -> dict[str, Any]:
    return {
        "run_id": record.run_id,
        "started_at": _iso(record.started_at),
        "finished_at": _iso(record.finished_at),
        "finished": record.finished,
        "succeeded": record.succeeded,
        "dataset_id": record.dataset_id,
        "hosts": {
            host_id: {
                "state": status.state.value,
                "started_at": _iso(status.started_at),
                "finished_at": _iso(status.finished_at),
                "duration_seconds": status.duration_seconds,
                "failure_reason": status.failure_reason,
            }
            for host_id, status in sorted(record.hosts.items())
        },
    }


def _table_body(table: RankTable) -> dict[str, Any]:
    return {
        "mode": table.mode.value,
        "label": table.label,
        "weights": list(table.weights.as_tuple()) if table.weights is not None else None,
        "dataset_ids": list(table.dataset_ids),
        "entries": [
            {"vm_id": e.vm_id, "value": e.value, "rank": e.rank} for e in table.entries
        ],
    }


def _parse_hosts(body: dict[str, Any]) -> list[Host]:
    if "inventory" in body:
        path = Path(str(body["inventory"]))
        if not path.is_file():
            raise _bad_request(f"inventory file not found: {path}")
        return load_inventory(path)
    raw_hosts = body.get("hosts")
    if not isinstance(raw_hosts, list) or not raw_hosts:
        raise _bad_request("body needs a non-empty 'hosts' list or an 'inventory' path")
    default_executor = str(body.get("executor", "simulated"))
    hosts = []
    for i, raw in enumerate(raw_hosts):
        if not isinstance(raw, dict) or "id" not in raw:
            raise _bad_request(f"hosts[{i}] must be an object with an 'id'")
        try:
            kind = ExecutorKind(str(raw.get("executor", default_executor)).replace("_", "-"))
            vm = VmDescriptor(
                id=str(raw["id"]),
                vm_type=str(raw.get("vm_type", raw["id"])),
                vcpus=int(raw.get("vcpus", 1)),
                memory_gib=float(raw.get("memory_gib", 1.0)),
                endpoint=str(raw.get("endpoint", "")),
                tags={str(k): str(v) for k, v in dict(raw.get("tags", {})).items()},
            )
        except (TypeError, ValueError) as exc:
            raise _bad_request(f"hosts[{i}]: {exc}") from exc
        hosts.append(Host(vm=vm, binding=ExecutorBinding(kind=kind, endpoint=vm.endpoint)))
    return hosts


def _parse_container(body: dict[str, Any]) -> ContainerSpec:
    try:
        memory_mib = int(body.get("memory_mib", 0))
    except (TypeError, ValueError):
        raise _bad_request("memory_mib must be an integer") from None
    raw_mode = str(body.get("cpu_mode", CpuMode.SINGLE_CORE.value))
    try:
        cpu_mode = CpuMode(raw_mode)
    except ValueError:
        raise _bad_request(f"unknown cpu_mode {raw_mode!r}") from None
    try:
        return ContainerSpec(
            memory_mib=memory_mib,
            cpu_mode=cpu_mode,
            image_ref=str(body.get("image", DEFAULT_IMAGE)),
        )
    except ValueError as exc:
        raise _bad_request(str(exc)) from exc


def _page_params(limit: int, offset: int) -> tuple[int, int]:
    if limit < 1 or limit > MAX_PAGE_SIZE:
        raise _bad_request(f"limit must be in [1, {MAX_PAGE_SIZE}]")
    if offset < 0:
        raise _bad_request("offset must be >= 0")
    return limit, offset


def create_app(
    store_root: str | Path | None = None,
    store: DatasetStore | None = None,
    orchestrator: Orchestrator | None = None,
    frontend_dir: str | Path | None = None,
) -> FastAPI:
    """Build the application; every collaborator can be injected for tests."""
    if store is None:
        store = DatasetStore(store_root) if store_root else None
    if orchestrator is None:
        orchestrator = Orchestrator(CampaignConfig(store=store))

    app = FastAPI(title="slicebench", version="1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(ApiError)
    async def _api_error(_req: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(
            status_code=exc.status_code, content={"code": exc.code, "message": exc.message}
        )

    def _need_store() -> DatasetStore:
        if store is None:
            raise ApiError(409, "no-store", "server started without a dataset store")
        return store

    @app.get("/health")
    async def health() -> dict[str, str]:
        return {"status": "ok"}

    @app.post("/runs", status_code=202)
    async def start_run(body: dict[str, Any]) -> dict[str, str]:
        hosts = _parse_hosts(body)
        spec = _parse_container(body)
        run_id = str(body.get("run_id", ""))
        try:
            rid = orchestrator.start_campaign(hosts, run_id=run_id, container=spec)
        except DuplicateRun as exc:
            raise ApiError(409, "duplicate-run", str(exc)) from exc
        except ValueError as exc:
            raise _bad_request(str(exc)) from exc
        return {"run_id": rid}

    @app.get("/runs/{run_id}")
    async def run_status(run_id: str) -> dict[str, Any]:
        try:
            record = orchestrator.poll_status(run_id)
        except UnknownRun as exc:
            raise ApiError(404, "unknown-run", str(exc)) from exc
        return _run_body(record)

    @app.get("/rankings")
    async def rankings(
        dataset: str,
        weights: str,
        mode: str = "lightweight",
        max_age_days: float = 30.0,
        group_aggregate: str = "mean",
    ) -> dict[str, Any]:
        try:
            wv = WeightVector.parse(weights)
        except ValueError as exc:
            raise _bad_request(str(exc)) from exc
        if mode not in ("lightweight", "hybrid"):
            raise _bad_request(f"unknown mode {mode!r}")
        if group_aggregate not in ("mean", "sum"):
            raise _bad_request(f"unknown group_aggregate {group_aggregate!r}")
        if mode == "hybrid" and max_age_days <= 0:
            raise _bad_request("max_age_days must be > 0")
        st = _need_store()
        try:
            stored = st.get_dataset(dataset)
        except NotFound as exc:
            raise ApiError(404, "unknown-dataset", str(exc)) from exc
        if mode == "lightweight":
            table = lightweight_rank(stored.dataset, wv, group_aggregate=group_aggregate)
        else:
            assert stored.dataset.container is not None
            try:
                historic = st.latest_historic(
                    stored.dataset.vm_ids,
                    stored.dataset.container,
                    max_age_days=max_age_days,
                    exclude_ids=(dataset,),
                )
            except NoEligibleHistoric as exc:
                raise ApiError(409, "no-eligible-historic", str(exc)) from exc
            table = hybrid_rank(
                stored.dataset,
                historic.dataset,
                wv,
                group_aggregate=group_aggregate,
                historic_age_days=st.age_days(historic.dataset_id),
                max_age_days=max_age_days,
            )
        return _table_body(table)

    @app.get("/datasets")
    async def datasets(limit: int = 50, offset: int = 0) -> dict[str, Any]:
        limit, offset = _page_params(limit, offset)
        entries = _need_store().list_datasets()
        page = entries[offset : offset + limit]
        return {
            "total": len(entries),
            "datasets": [
                {
                    "dataset_id": e.dataset_id,
                    "role": e.role.value,
                    "stored_at": _iso(e.stored_at),
                    "memory_mib": e.memory_mib,
                    "cpu_mode": e.cpu_mode.value,
                    "vm_ids": list(e.vm_ids),
                }
                for e in page
            ],
        }

    @app.get("/vms")
    async def vms(limit: int = 50, offset: int = 0) -> dict[str, Any]:
        limit, offset = _page_params(limit, offset)
        known = _need_store().known_vms()
        return {"total": len(known), "vms": known[offset : offset + limit]}

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(frontend_dir), html=True), name="console")

    return app
