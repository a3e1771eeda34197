"""Container-slice benchmarking, ranking, and evaluation of cloud VMs.

Benchmark a resource-capped container on each VM of a fleet, normalize the
measured attributes across the fleet, score them under user-supplied group
weights, and rank the VMs; optionally blend in stored historic data, and
correlate any ranking against empirical application timings.
"""

from .evaluation import (
    CorrelationReport,
    TimingRecord,
    build_report,
    correlate_tables,
    empirical_ranks,
    rank_correlation,
)
from .ingest import (
    EmptyOutput,
    MalformedNumber,
    ParseResult,
    RawBenchmarkOutput,
    SchemaViolation,
    parse_tool_output,
    read_canonical_records,
    write_canonical_records,
)
from .model import (
    AttributeDef,
    AttributeMeasurement,
    BenchmarkDataset,
    ContainerSpec,
    CpuMode,
    DatasetRole,
    Group,
    HostState,
    HostStatus,
    Polarity,
    RankEntry,
    RankMode,
    RankTable,
    RunRecord,
    SliceBenchError,
    VmDescriptor,
    WeightVector,
    default_taxonomy,
    validate_dataset,
)
from .orchestrator import (
    CampaignConfig,
    DuplicateRun,
    EngineClient,
    ExecutorBinding,
    ExecutorKind,
    Host,
    HttpEngineClient,
    Orchestrator,
    SimulatedEngine,
    UnknownRun,
    cpuset_for,
    load_inventory,
)
from .ranking import (
    SCORE_QUANTUM,
    IncompleteDataset,
    NormalizedMatrix,
    ScoreVector,
    StaleHistoricData,
    VmSetMismatch,
    competition_rank,
    hybrid_rank,
    lightweight_rank,
    normalize,
    score,
)
from .simulate import PerfProfile, REFERENCE_PROFILES, simulated_execute
from .store import DatasetStore, NoEligibleHistoric, NotFound, StorageCorrupt, StoredDataset

__version__ = "0.1.0"

__all__ = [
    "AttributeDef",
    "AttributeMeasurement",
    "BenchmarkDataset",
    "CampaignConfig",
    "ContainerSpec",
    "CorrelationReport",
    "CpuMode",
    "DatasetRole",
    "DatasetStore",
    "DuplicateRun",
    "EmptyOutput",
    "EngineClient",
    "ExecutorBinding",
    "ExecutorKind",
    "Group",
    "Host",
    "HostState",
    "HostStatus",
    "HttpEngineClient",
    "IncompleteDataset",
    "MalformedNumber",
    "NoEligibleHistoric",
    "NormalizedMatrix",
    "NotFound",
    "Orchestrator",
    "ParseResult",
    "PerfProfile",
    "Polarity",
    "RankEntry",
    "RankMode",
    "RankTable",
    "RawBenchmarkOutput",
    "REFERENCE_PROFILES",
    "SCORE_QUANTUM",
    "RunRecord",
    "SchemaViolation",
    "ScoreVector",
    "SimulatedEngine",
    "SliceBenchError",
    "StaleHistoricData",
    "StorageCorrupt",
    "StoredDataset",
    "TimingRecord",
    "UnknownRun",
    "VmDescriptor",
    "VmSetMismatch",
    "WeightVector",
    "build_report",
    "competition_rank",
    "correlate_tables",
    "cpuset_for",
    "default_taxonomy",
    "empirical_ranks",
    "hybrid_rank",
    "lightweight_rank",
    "load_inventory",
    "normalize",
    "parse_tool_output",
    "rank_correlation",
    "read_canonical_records",
    "score",
    "simulated_execute",
    "validate_dataset",
    "write_canonical_records",
]
