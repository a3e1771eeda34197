"""Command-line front end.

Subcommands mirror the workflow: ``benchmark`` runs a container campaign
over an inventory, ``rank`` scores a stored or file-based dataset under
user weights, ``evaluate`` correlates benchmark ranks against empirical
timings, ``fixtures`` materializes the shipped reference data, and
``serve`` starts the HTTP API. Exit codes: 0 success, 1 operational
failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import evaluation, fixtures
from .ingest import read_canonical_records, write_canonical_records
from .model import (
    BenchmarkDataset,
    ContainerSpec,
    CpuMode,
    DatasetRole,
    RankTable,
    SliceBenchError,
    WeightVector,
)
from .orchestrator import CampaignConfig, Orchestrator, load_inventory
from .ranking import SCORE_QUANTUM, hybrid_rank, lightweight_rank
from .store import DatasetStore, NoEligibleHistoric

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

STORE_ENV = "SLICEBENCH_STORE"


def _store_from(args: argparse.Namespace) -> DatasetStore | None:
    root = getattr(args, "store", None) or os.environ.get(STORE_ENV)
    return DatasetStore(root) if root else None


def _read_lines(path: str) -> list[str]:
    if path == "-":
        return sys.stdin.read().splitlines()
    return Path(path).read_text(encoding="utf-8").splitlines()


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        print(text)
    else:
        Path(path).write_text(text + "\n", encoding="utf-8")


# --- benchmark --------------------------------------------------------------


def cmd_benchmark(args: argparse.Namespace) -> int:
    hosts = load_inventory(args.inventory)
    store = _store_from(args)
    spec = ContainerSpec(
        memory_mib=args.memory_mib, cpu_mode=CpuMode(args.cpu_mode), image_ref=args.image
    )
    config = CampaignConfig(
        container=spec,
        timeout_s=args.timeout_s,
        max_workers=args.max_workers,
        role=DatasetRole(args.role),
        store=store,
        profile_seed=args.seed,
        noise_pct=args.noise,
    )
    record, dataset = Orchestrator(config).run_campaign(hosts, run_id=args.run_id or "")
    for host_id in sorted(record.hosts):
        status = record.hosts[host_id]
        duration = f"{status.duration_seconds:.2f}s" if status.duration_seconds else "-"
        line = f"{host_id}: {status.state.value} ({duration})"
        if status.failure_reason:
            line += f" - {status.failure_reason}"
        print(line)
    if dataset is None:
        print("no dataset produced", file=sys.stderr)
        return EXIT_FAILURE
    print(
        f"dataset {dataset.dataset_id}: {len(dataset.vm_ids)} VMs x "
        f"{len(dataset.attribute_keys)} attributes"
        + (" (stored)" if store is not None else "")
    )
    if args.output:
        _emit("\n".join(write_canonical_records(dataset)), args.output)
    return EXIT_OK if record.succeeded else EXIT_FAILURE


# --- rank -------------------------------------------------------------------


def _load_dataset(
    args: argparse.Namespace, store: DatasetStore | None
) -> tuple[BenchmarkDataset, float | None]:
    """Dataset plus its age in days when it came from the store."""
    if args.input:
        lines = _read_lines(args.input)
        return read_canonical_records(lines, dataset_id=args.input), None
    if not args.dataset_id:
        raise SliceBenchError("provide --input FILE or --dataset-id with a store")
    if store is None:
        raise SliceBenchError(f"--dataset-id needs a store (--store or ${STORE_ENV})")
    stored = store.get_dataset(args.dataset_id)
    return stored.dataset, store.age_days(args.dataset_id)


def cmd_rank(args: argparse.Namespace) -> int:
    weights = WeightVector.parse(args.weights)
    store = _store_from(args)
    dataset, _ = _load_dataset(args, store)
    quantum = args.quantum if args.quantum > 0 else None  # 0 = exact comparison
    if args.mode == "lightweight":
        table = lightweight_rank(
            dataset, weights, group_aggregate=args.group_aggregate, quantum=quantum
        )
    else:
        if args.historic_input:
            historic = read_canonical_records(
                _read_lines(args.historic_input), dataset_id=args.historic_input
            )
            age = None
        elif args.historic_id:
            if store is None:
                raise SliceBenchError(f"--historic-id needs a store (--store or ${STORE_ENV})")
            historic = store.get_dataset(args.historic_id).dataset
            age = store.age_days(args.historic_id)
        else:
            if store is None or dataset.container is None:
                raise SliceBenchError(
                    "hybrid mode needs historic data: --historic-input, --historic-id, "
                    "or a store to search"
                )
            stored = store.latest_historic(
                dataset.vm_ids,
                dataset.container,
                max_age_days=args.max_age_days,
                exclude_ids=(dataset.dataset_id,),
            )
            historic = stored.dataset
            age = store.age_days(stored.dataset_id)
        table = hybrid_rank(
            dataset,
            historic,
            weights,
            group_aggregate=args.group_aggregate,
            quantum=quantum,
            historic_age_days=age,
            max_age_days=args.max_age_days,
        )
    if args.format == "records":
        _emit("\n".join(table.to_record_lines()), args.output)
    else:
        _emit(table.to_text(), args.output)
    return EXIT_OK


# --- evaluate ---------------------------------------------------------------


def _case_study_report(args: argparse.Namespace) -> str:
    cs = fixtures.case_study(args.case_study)
    empirical = cs.empirical_table(args.execution_mode)
    tables = {
        f"{size} MiB": cs.benchmark_table(args.method, args.execution_mode, size)
        for size in fixtures.container_sizes_mib()
    }
    reports, text = evaluation.build_report(
        empirical,
        tables,
        application=cs.application,
        execution_mode=args.execution_mode,
        row_order=cs.vm_order,
    )
    if args.format == "records":
        return "\n".join(
            json.dumps(
                {
                    "application": r.application,
                    "execution_mode": r.execution_mode,
                    "column": r.container_label,
                    "correlation_percent": round(r.correlation_percent, 1),
                }
            )
            for r in reports
        )
    return text


def cmd_evaluate(args: argparse.Namespace) -> int:
    if args.case_study:
        _emit(_case_study_report(args), args.output)
        return EXIT_OK
    if not args.timings or not args.ranks:
        raise SliceBenchError("provide --timings and at least one --ranks file, or --case-study")
    timings = evaluation.read_timing_records(_read_lines(args.timings))
    empirical = evaluation.empirical_ranks(timings)
    tables: dict[str, RankTable] = {}
    for path in args.ranks:
        table = RankTable.from_record_lines(_read_lines(path))
        tables[table.label or Path(path).name] = table
    row_order = args.row_order.split(",") if args.row_order else None
    reports, text = evaluation.build_report(empirical, tables, row_order=row_order)
    if args.format == "records":
        _emit(
            "\n".join(
                json.dumps(
                    {
                        "application": r.application,
                        "execution_mode": r.execution_mode,
                        "column": r.container_label,
                        "correlation_percent": round(r.correlation_percent, 1),
                    }
                )
                for r in reports
            ),
            args.output,
        )
    else:
        _emit(text, args.output)
    return EXIT_OK


# --- fixtures / serve -------------------------------------------------------


def cmd_fixtures(args: argparse.Namespace) -> int:
    for path in fixtures.export_fixture_files(args.output):
        print(path)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .api import create_app

    if not 0 < args.port < 65536:
        raise SliceBenchError(f"port out of range: {args.port}")
    app = create_app(
        store_root=getattr(args, "store", None) or os.environ.get(STORE_ENV),
        frontend_dir=args.frontend,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slicebench",
        description="Container-slice benchmarking, ranking, and evaluation of cloud VMs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("benchmark", help="run a benchmarking campaign over an inventory")
    p.add_argument("--inventory", required=True, help="inventory JSON file")
    p.add_argument("--memory-mib", type=int, default=100, help="container memory cap in MiB")
    p.add_argument(
        "--cpu-mode",
        choices=[m.value for m in CpuMode],
        default=CpuMode.SINGLE_CORE.value,
        help="pin the container to one core or use all of them",
    )
    p.add_argument("--image", default="slicebench/microbench:latest", help="benchmark image")
    p.add_argument("--timeout-s", type=float, default=1800.0, help="per-host wait timeout")
    p.add_argument("--max-workers", type=int, default=8, help="concurrent host cap")
    p.add_argument("--role", choices=[r.value for r in DatasetRole], default="current")
    p.add_argument("--run-id", default="", help="explicit run id (defaults to a fresh one)")
    p.add_argument("--seed", type=int, default=0, help="simulated executor profile seed")
    p.add_argument("--noise", type=float, default=0.01, help="simulated relative noise amplitude")
    p.add_argument("--store", help=f"dataset store directory (or ${STORE_ENV})")
    p.add_argument("--output", help="write canonical records to FILE ('-' = stdout)")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("rank", help="rank VMs from a benchmark dataset")
    p.add_argument("--weights", required=True, help="group weights 'w1,w2,w3,w4', each in [0,5]")
    p.add_argument("--input", help="canonical records file ('-' = stdin)")
    p.add_argument("--dataset-id", help="dataset id in the store")
    p.add_argument("--mode", choices=["lightweight", "hybrid"], default="lightweight")
    p.add_argument("--historic-id", help="historic dataset id (hybrid)")
    p.add_argument("--historic-input", help="historic canonical records file (hybrid)")
    p.add_argument("--max-age-days", type=float, default=30.0, help="historic staleness bound")
    p.add_argument("--group-aggregate", choices=["mean", "sum"], default="mean")
    p.add_argument(
        "--quantum",
        type=float,
        default=SCORE_QUANTUM,
        help="tie-detection rounding quantum (0 = exact comparison)",
    )
    p.add_argument("--store", help=f"dataset store directory (or ${STORE_ENV})")
    p.add_argument("--format", choices=["text", "records"], default="text")
    p.add_argument("--output", help="write to FILE instead of stdout")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("evaluate", help="correlate benchmark ranks with empirical timings")
    p.add_argument("--timings", help="timing records file (JSONL)")
    p.add_argument("--ranks", action="append", default=[], help="rank records file (repeatable)")
    p.add_argument("--row-order", help="comma-separated VM order for the report rows")
    p.add_argument(
        "--case-study",
        choices=fixtures.case_study_ids(),
        help="evaluate a shipped case study instead of files",
    )
    p.add_argument("--method", choices=["lightweight", "hybrid"], default="lightweight")
    p.add_argument(
        "--execution-mode", choices=["sequential", "parallel"], default="sequential"
    )
    p.add_argument("--format", choices=["text", "records"], default="text")
    p.add_argument("--output", help="write to FILE instead of stdout")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("fixtures", help="export shipped reference fixtures as files")
    p.add_argument("--output", required=True, help="target directory")
    p.set_defaults(func=cmd_fixtures)

    p = sub.add_parser("serve", help="start the HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--store", help=f"dataset store directory (or ${STORE_ENV})")
    p.add_argument("--frontend", help="static console build to serve at / (e.g. frontend/dist)")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NoEligibleHistoric as exc:
        print(f"error: {exc} (try lightweight mode)", file=sys.stderr)
        return EXIT_FAILURE
    except SliceBenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main(argv=sys.argv[1:]))
