"""Parsers: raw benchmark-tool output and canonical record files.

The tool-output line grammar is ``<attribute label>: <number> <unit>``.
Blank lines and ``#`` comments are skipped; anything else that does not
match a known label is collected as a warning, never an error, so the
parser is total over arbitrary text. Labels map to canonical attribute
keys through an alias table; new benchmark images need a new alias
config, not code.

The canonical record format is line-delimited JSON, one object per line
with fields {vm_id, attribute, value, unit, memory_mib, cpu_mode,
captured_at}.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Mapping

from .model import (
    AttributeDef,
    AttributeMeasurement,
    BenchmarkDataset,
    ContainerSpec,
    CpuMode,
    DatasetRole,
    SliceBenchError,
    default_taxonomy,
    taxonomy_by_key,
    utcnow,
)


class MalformedNumber(SliceBenchError):
    """A recognized label carried a payload that is not a finite number."""

    def __init__(self, label: str, payload: str, line_no: int):
        super().__init__(f"line {line_no}: {label!r} has non-numeric payload {payload!r}")
        self.label = label
        self.payload = payload
        self.line_no = line_no


class EmptyOutput(SliceBenchError):
    """The benchmark container produced no output."""


class SchemaViolation(SliceBenchError):
    """A canonical record line is malformed; carries the 1-based line number."""

    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


@dataclass(frozen=True)
class RawBenchmarkOutput:
    """Ordered text lines captured from one benchmark container."""

    vm_id: str
    container: ContainerSpec
    lines: tuple[str, ...]


@dataclass(frozen=True)
class ParseResult:
    measurements: tuple[AttributeMeasurement, ...]
    warnings: tuple[str, ...]


# Tool-specific output labels -> canonical attribute keys.
DEFAULT_ALIASES: dict[str, str] = {
    "L1 cache": "l1_cache_latency_ns",
    "L2 cache": "l2_cache_latency_ns",
    "Main mem": "main_mem_latency_ns",
    "Rand mem": "random_mem_latency_ns",
    "Process fork+exit": "fork_latency_us",
    "Process fork+execve": "exec_latency_us",
    "Context switch": "ctx_switch_latency_us",
    "Simple syscall": "syscall_latency_us",
    "Pipe bandwidth": "pipe_bw_mbps",
    "AF_UNIX sock stream bandwidth": "socket_bw_mbps",
    "Mem read": "mem_read_bw_mbps",
    "Mem write": "mem_write_bw_mbps",
    "Bcopy (libc)": "bcopy_libc_bw_mbps",
    "Bcopy (hand)": "bcopy_hand_bw_mbps",
    "Integer add": "int_add_latency_ns",
    "Integer mul": "int_mul_latency_ns",
    "Integer div": "int_div_latency_ns",
    "Integer mod": "int_mod_latency_ns",
    "Float add": "float_add_latency_ns",
    "Float mul": "float_mul_latency_ns",
    "Float div": "float_div_latency_ns",
    "Double add": "double_add_latency_ns",
    "Double mul": "double_mul_latency_ns",
    "Double div": "double_div_latency_ns",
    "File create": "file_create_latency_us",
    "File delete": "file_delete_latency_us",
    "Mmap latency": "mmap_latency_us",
    "File read": "file_read_bw_mbps",
}

# Decimal with optional exponent, '.' radix only (locale-independent).
_NUMBER_RE = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?")


def load_alias_config(path: str | Path) -> dict[str, str]:
    """Load a label -> canonical-key alias table from a JSON config file."""
    with open(path, encoding="utf-8") as fh:
        table = json.load(fh)
    return {str(k): str(v) for k, v in table.items()}


def parse_tool_output(
    raw: RawBenchmarkOutput,
    aliases: Mapping[str, str] | None = None,
    captured_at: datetime | None = None,
) -> ParseResult:
    """Extract one measurement per recognized line.

    Raises EmptyOutput for blank input and MalformedNumber when a known
    label has a non-numeric payload; every other line is either a
    measurement or a warning.
    """
    table = DEFAULT_ALIASES if aliases is None else aliases
    stamp = captured_at if captured_at is not None else utcnow()
    if not any(line.strip() for line in raw.lines):
        raise EmptyOutput(f"no benchmark output for vm {raw.vm_id!r}")

    measurements: list[AttributeMeasurement] = []
    warnings: list[str] = []
    for line_no, line in enumerate(raw.lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        label, sep, payload = text.partition(":")
        label = label.strip()
        if not sep or label not in table:
            warnings.append(f"line {line_no}: unrecognized line {text!r}")
            continue
        payload = payload.strip()
        match = _NUMBER_RE.match(payload)
        if match is None:
            raise MalformedNumber(label, payload, line_no)
        value = float(match.group(0))
        if not math.isfinite(value):
            raise MalformedNumber(label, payload, line_no)
        measurements.append(
            AttributeMeasurement(
                vm_id=raw.vm_id,
                attribute_key=table[label],
                value=value,
                container=raw.container,
                captured_at=stamp,
            )
        )
    return ParseResult(tuple(measurements), tuple(warnings))


# --- canonical record files -------------------------------------------------

_REQUIRED_FIELDS = ("vm_id", "attribute", "value", "unit", "memory_mib", "cpu_mode", "captured_at")


def _parse_timestamp(text: str, line_no: int) -> datetime:
    try:
        stamp = datetime.fromisoformat(text.replace("Z", "+00:00"))
    except (ValueError, TypeError):
        raise SchemaViolation(line_no, f"bad captured_at {text!r}") from None
    if stamp.tzinfo is None:
        stamp = stamp.replace(tzinfo=timezone.utc)
    return stamp


def read_canonical_records(
    lines: Iterable[str],
    dataset_id: str = "",
    role: DatasetRole = DatasetRole.CURRENT,
    container: ContainerSpec | None = None,
) -> BenchmarkDataset:
    """Group canonical records into a dataset.

    All records must share one container configuration; an explicit
    ``container`` (e.g. restored from a store index, carrying the image
    reference the flat record format drops) must agree with the records.
    An empty stream yields an empty, incomplete dataset.
    """
    measurements: list[AttributeMeasurement] = []
    seen: set[tuple[str, str]] = set()
    derived: ContainerSpec | None = container
    for line_no, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            continue
        try:
            record = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaViolation(line_no, f"invalid JSON: {exc.msg}") from None
        if not isinstance(record, dict):
            raise SchemaViolation(line_no, "record is not an object")
        for field_name in _REQUIRED_FIELDS:
            if field_name not in record:
                raise SchemaViolation(line_no, f"missing field {field_name!r}")
        try:
            value = float(record["value"])
        except (TypeError, ValueError):
            raise SchemaViolation(line_no, f"bad value {record['value']!r}") from None
        if not math.isfinite(value):
            raise SchemaViolation(line_no, f"non-finite value {record['value']!r}")
        try:
            memory_mib = int(record["memory_mib"])
            cpu_mode = CpuMode(record["cpu_mode"])
            if derived is None:
                derived = ContainerSpec(memory_mib=memory_mib, cpu_mode=cpu_mode)
        except (TypeError, ValueError) as exc:
            raise SchemaViolation(line_no, str(exc)) from None
        if (memory_mib, cpu_mode) != (derived.memory_mib, derived.cpu_mode):
            raise SchemaViolation(line_no, "mixed container configurations in one dataset")
        key = (str(record["vm_id"]), str(record["attribute"]))
        if key in seen:
            raise SchemaViolation(line_no, f"duplicate measurement for {key}")
        seen.add(key)
        measurements.append(
            AttributeMeasurement(
                vm_id=key[0],
                attribute_key=key[1],
                value=value,
                container=derived,
                captured_at=_parse_timestamp(str(record["captured_at"]), line_no),
            )
        )
    return BenchmarkDataset(
        dataset_id=dataset_id,
        role=role,
        measurements=measurements,
        container=derived,
    )


def write_canonical_records(
    dataset: BenchmarkDataset,
    taxonomy: Iterable[AttributeDef] | None = None,
) -> list[str]:
    """Serialize a dataset as canonical record lines (units from the taxonomy)."""
    tax = taxonomy_by_key(taxonomy if taxonomy is not None else default_taxonomy())
    lines = []
    for m in dataset.measurements:
        attr = tax.get(m.attribute_key)
        record = {
            "vm_id": m.vm_id,
            "attribute": m.attribute_key,
            "value": m.value,
            "unit": attr.unit if attr is not None else "",
            "memory_mib": m.container.memory_mib,
            "cpu_mode": m.container.cpu_mode.value,
            "captured_at": m.captured_at.isoformat(),
        }
        lines.append(json.dumps(record, sort_keys=True))
    return lines
