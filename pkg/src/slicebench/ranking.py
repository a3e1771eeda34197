"""Grouping, normalization, weighted scoring, and competition ranking.

The pipeline: orient every attribute so larger is better (latencies are
negated), z-score each attribute across the VM fleet with population
moments, aggregate each group's z-values per VM, and take the weighted
sum of the four group aggregates as the VM's score. Scores are ranked
with standard competition ranking (ties share a rank, the next distinct
value skips by the tie-group size).

The hybrid path normalizes the current and historic datasets separately
and sums the two scores under one shared weight vector.

All functions are pure and evaluate in a fixed order (VMs and attributes
sorted), so identical inputs give identical tables across runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, Mapping, Sequence

import numpy as np

from .model import (
    AttributeDef,
    AttributeStats,
    BenchmarkDataset,
    Group,
    Polarity,
    RankEntry,
    RankMode,
    RankTable,
    SliceBenchError,
    WeightVector,
    default_taxonomy,
    taxonomy_by_key,
)

GroupAggregate = Literal["mean", "sum"]
Direction = Literal["higher-first", "lower-first"]

# Default tie tolerance for score-based ranking. Scores that are exactly tied
# in real arithmetic (symmetric z-values cancelling) come out of float
# summation with ~1e-16 residue of either sign, so exact comparison would
# order VMs by rounding noise and break under affine rescaling of the raw
# measurements. Meaningful score differences are many orders of magnitude
# above this; raw competition_rank stays exact by default.
SCORE_QUANTUM = 1e-9


class IncompleteDataset(SliceBenchError):
    """The dataset is missing (vm, attribute) cells required for normalization."""

    def __init__(self, dataset_id: str, gaps: Sequence[tuple[str, str]]):
        preview = ", ".join(f"{vm}/{attr}" for vm, attr in list(gaps)[:5])
        more = "" if len(gaps) <= 5 else f" (+{len(gaps) - 5} more)"
        super().__init__(f"dataset {dataset_id!r} incomplete: {len(gaps)} gaps [{preview}{more}]"
                         if gaps else f"dataset {dataset_id!r} is empty")
        self.gaps = tuple(gaps)


class NonFiniteValue(SliceBenchError):
    pass


class EmptyInput(SliceBenchError):
    pass


class VmSetMismatch(SliceBenchError):
    pass


class StaleHistoricData(SliceBenchError):
    pass


@dataclass(frozen=True)
class NormalizedMatrix:
    """Per-attribute z-values for every VM, plus the stats they came from.

    ``z[i, j]`` is the dimensionless value of VM ``vm_ids[i]`` on attribute
    ``attributes[j]``. Stats are of the polarity-oriented values (lower-better
    attributes enter negated), so larger z is uniformly better.
    """

    vm_ids: tuple[str, ...]
    attributes: tuple[AttributeDef, ...]
    z: np.ndarray
    stats: tuple[AttributeStats, ...]

    def column(self, attribute_key: str) -> np.ndarray:
        for j, attr in enumerate(self.attributes):
            if attr.key == attribute_key:
                return self.z[:, j]
        raise KeyError(attribute_key)


@dataclass(frozen=True)
class ScoreVector:
    """Weighted per-VM scores; deterministic for identical inputs."""

    vm_ids: tuple[str, ...]
    scores: tuple[float, ...]
    weights: WeightVector
    mode: RankMode

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.vm_ids, self.scores))


def normalize(
    dataset: BenchmarkDataset,
    taxonomy: Iterable[AttributeDef] | None = None,
) -> NormalizedMatrix:
    """Polarity-orient and z-score every attribute across the fleet.

    Population moments over the m VMs; a constant attribute (sigma = 0)
    contributes z = 0 for every VM so it drops out of the scores.
    """
    tax = taxonomy_by_key(taxonomy if taxonomy is not None else default_taxonomy())
    vm_ids = dataset.vm_ids
    keys = dataset.attribute_keys
    if not vm_ids or not keys:
        raise IncompleteDataset(dataset.dataset_id, ())
    gaps = [
        (vm, key) for vm in vm_ids for key in keys if not dataset.has_value(vm, key)
    ]
    if gaps:
        raise IncompleteDataset(dataset.dataset_id, gaps)
    unknown = [k for k in keys if k not in tax]
    if unknown:
        raise ValueError(f"attributes not in taxonomy: {unknown}")

    attributes = tuple(tax[k] for k in keys)
    raw = np.array(
        [[dataset.value(vm, key) for key in keys] for vm in vm_ids], dtype=float
    )
    if not np.all(np.isfinite(raw)):
        bad = [(vm_ids[i], keys[j]) for i, j in zip(*np.nonzero(~np.isfinite(raw)))]
        raise NonFiniteValue(f"non-finite measurement(s): {bad[:5]}")

    # Orient first: negating lower-better values makes larger uniformly better.
    signs = np.array(
        [-1.0 if a.polarity is Polarity.LOWER_BETTER else 1.0 for a in attributes]
    )
    oriented = raw * signs

    mu = oriented.mean(axis=0)
    sigma = oriented.std(axis=0)  # population (divide by m)
    # Rounding in the mean can leave an all-equal column with a tiny nonzero
    # sigma (and z = +-1); exact equality is the authoritative constancy test.
    constant = (oriented == oriented[0]).all(axis=0)
    sigma[constant] = 0.0
    z = np.zeros_like(oriented)
    nonconst = ~constant & (sigma > 0)
    z[:, nonconst] = (oriented[:, nonconst] - mu[nonconst]) / sigma[nonconst]

    stats = tuple(
        AttributeStats(attribute_key=key, mean=float(m), stddev=float(s))
        for key, m, s in zip(keys, mu, sigma)
    )
    return NormalizedMatrix(vm_ids=vm_ids, attributes=attributes, z=z, stats=stats)


def score(
    nm: NormalizedMatrix,
    weights: WeightVector,
    group_aggregate: GroupAggregate = "mean",
    mode: RankMode = RankMode.LIGHTWEIGHT,
) -> ScoreVector:
    """Weighted sum over the four group aggregates of each VM's z-values.

    A group with no attributes contributes 0.
    """
    if group_aggregate not in ("mean", "sum"):
        raise ValueError(f"unknown group aggregate {group_aggregate!r}")
    totals = np.zeros(len(nm.vm_ids))
    for group in Group:
        cols = [j for j, attr in enumerate(nm.attributes) if attr.group is group]
        if not cols:
            continue
        block = nm.z[:, cols]
        agg = block.mean(axis=1) if group_aggregate == "mean" else block.sum(axis=1)
        totals += weights.for_group(group) * agg
    return ScoreVector(
        vm_ids=nm.vm_ids,
        scores=tuple(float(s) for s in totals),
        weights=weights,
        mode=mode,
    )


def competition_rank(
    values: Mapping[str, float],
    direction: Direction = "higher-first",
    quantum: float | None = None,
) -> tuple[RankEntry, ...]:
    """Standard competition ranking: best value gets rank 1, ties share a
    rank, and the next distinct value's rank is 1 + the count of strictly
    better entries.

    Ties are detected by exact equality, optionally after rounding values
    to a multiple of ``quantum`` to absorb float noise.
    """
    if direction not in ("higher-first", "lower-first"):
        raise ValueError(f"unknown direction {direction!r}")
    if not values:
        raise EmptyInput("no values to rank")
    for vm, v in values.items():
        if not math.isfinite(v):
            raise NonFiniteValue(f"value for {vm!r} is {v!r}")

    def keyed(v: float) -> float:
        return v if quantum is None else round(v / quantum) * quantum

    items = sorted(values.items())  # stable id order inside tie groups
    better = (lambda a, b: a > b) if direction == "higher-first" else (lambda a, b: a < b)
    entries = []
    for vm, v in items:
        rank = 1 + sum(1 for _, other in items if better(keyed(other), keyed(v)))
        entries.append(RankEntry(vm_id=vm, value=values[vm], rank=rank))
    return tuple(entries)


def lightweight_rank(
    dataset: BenchmarkDataset,
    weights: WeightVector,
    taxonomy: Iterable[AttributeDef] | None = None,
    group_aggregate: GroupAggregate = "mean",
    quantum: float | None = SCORE_QUANTUM,
) -> RankTable:
    """Rank VMs from one current dataset: normalize, score, competition-rank.

    Scores closer than ``quantum`` count as tied: a VM pair that is exactly
    tied in real arithmetic (e.g. symmetric wins inside one group) otherwise
    comes out of float summation a few ulps apart and would be ordered by
    rounding noise. Pass ``quantum=None`` for exact comparison.
    """
    sv = score(normalize(dataset, taxonomy), weights, group_aggregate)
    entries = competition_rank(sv.as_dict(), "higher-first", quantum)
    return RankTable(
        mode=RankMode.LIGHTWEIGHT,
        entries=entries,
        weights=weights,
        dataset_ids=(dataset.dataset_id,),
    )


def hybrid_rank(
    current: BenchmarkDataset,
    historic: BenchmarkDataset,
    weights: WeightVector,
    taxonomy: Iterable[AttributeDef] | None = None,
    group_aggregate: GroupAggregate = "mean",
    quantum: float | None = SCORE_QUANTUM,
    historic_age_days: float | None = None,
    max_age_days: float = 30.0,
) -> RankTable:
    """Rank VMs from current plus historic data under one weight vector.

    Both datasets are normalized separately; each VM's score is the sum of
    its two weighted scores. The historic dataset must cover the same VM
    set and, when its age is known, be fresh enough. ``quantum`` works as
    in ``lightweight_rank``.
    """
    if historic_age_days is not None and historic_age_days > max_age_days:
        raise StaleHistoricData(
            f"historic dataset {historic.dataset_id!r} is {historic_age_days:.1f} days old "
            f"(max {max_age_days:g})"
        )
    if current.vm_ids != historic.vm_ids:
        raise VmSetMismatch(
            f"current VMs {list(current.vm_ids)} != historic VMs {list(historic.vm_ids)}"
        )
    sv_b = score(normalize(current, taxonomy), weights, group_aggregate)
    sv_hb = score(normalize(historic, taxonomy), weights, group_aggregate, RankMode.HYBRID)
    combined = {
        vm: sv_b.as_dict()[vm] + sv_hb.as_dict()[vm] for vm in current.vm_ids
    }
    entries = competition_rank(combined, "higher-first", quantum)
    return RankTable(
        mode=RankMode.HYBRID,
        entries=entries,
        weights=weights,
        dataset_ids=(current.dataset_id, historic.dataset_id),
    )
