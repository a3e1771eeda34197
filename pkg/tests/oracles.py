"""Independent naive re-implementations used as test oracles.

Everything here is deliberately written from first principles with plain
Python loops and math.fsum — no numpy, no imports from the package's
ranking internals — so agreement with the production code is evidence,
not tautology.
"""

from __future__ import annotations

import math
from typing import Mapping, Sequence

# polarity: attribute -> +1 (higher is better) or -1 (lower is better)
# groups: attribute -> group index 1..4


def naive_zscores(
    values: Mapping[str, Mapping[str, float]],
    polarity: Mapping[str, int],
) -> dict[str, dict[str, float]]:
    """Per-attribute population z-scores of polarity-oriented values."""
    vms = sorted(values)
    attrs = sorted({a for per_vm in values.values() for a in per_vm})
    z: dict[str, dict[str, float]] = {vm: {} for vm in vms}
    for attr in attrs:
        col = [polarity[attr] * values[vm][attr] for vm in vms]
        # sigma of identical values is exactly zero by definition; testing
        # equality first keeps mean-rounding residue out of the z-scores
        if all(x == col[0] for x in col):
            for vm in vms:
                z[vm][attr] = 0.0
            continue
        mean = math.fsum(col) / len(col)
        var = math.fsum((x - mean) ** 2 for x in col) / len(col)
        sigma = math.sqrt(var)
        for vm, x in zip(vms, col):
            z[vm][attr] = 0.0 if sigma == 0.0 else (x - mean) / sigma
    return z


def naive_scores(
    values: Mapping[str, Mapping[str, float]],
    polarity: Mapping[str, int],
    groups: Mapping[str, int],
    weights: Sequence[float],
    aggregate: str = "mean",
) -> dict[str, float]:
    """Weighted sum over per-group aggregates of each VM's z-scores."""
    z = naive_zscores(values, polarity)
    scores: dict[str, float] = {}
    for vm in sorted(values):
        total = 0.0
        for g in (1, 2, 3, 4):
            members = sorted(a for a in z[vm] if groups[a] == g)
            if not members:
                continue
            block = math.fsum(z[vm][a] for a in members)
            if aggregate == "mean":
                block /= len(members)
            total += block * weights[g - 1]
        scores[vm] = total
    return scores


def naive_competition_rank(
    values: Mapping[str, float], lower_first: bool = False
) -> dict[str, int]:
    """Rank = 1 + number of strictly better entries; ties share."""
    ranks = {}
    for vm, v in values.items():
        if lower_first:
            better = sum(1 for w in values.values() if w < v)
        else:
            better = sum(1 for w in values.values() if w > v)
        ranks[vm] = 1 + better
    return ranks


def _quantize(scores: Mapping[str, float], quantum: float | None) -> dict[str, float]:
    # Same tie tolerance the package applies to scores: exact-math ties
    # survive float summation as ~1e-16 residue of either sign, which would
    # otherwise be ranked as if it were signal.
    if quantum is None:
        return dict(scores)
    return {vm: round(v / quantum) * quantum for vm, v in scores.items()}


def naive_lightweight_ranks(
    values: Mapping[str, Mapping[str, float]],
    polarity: Mapping[str, int],
    groups: Mapping[str, int],
    weights: Sequence[float],
    aggregate: str = "mean",
    quantum: float | None = 1e-9,
) -> dict[str, int]:
    scores = naive_scores(values, polarity, groups, weights, aggregate)
    return naive_competition_rank(_quantize(scores, quantum))


def naive_hybrid_ranks(
    current: Mapping[str, Mapping[str, float]],
    historic: Mapping[str, Mapping[str, float]],
    polarity: Mapping[str, int],
    groups: Mapping[str, int],
    weights: Sequence[float],
    aggregate: str = "mean",
    quantum: float | None = 1e-9,
) -> dict[str, int]:
    """Current and historic normalized separately, scored under one W, summed."""
    s_cur = naive_scores(current, polarity, groups, weights, aggregate)
    s_his = naive_scores(historic, polarity, groups, weights, aggregate)
    combined = {vm: s_cur[vm] + s_his[vm] for vm in s_cur}
    return naive_competition_rank(_quantize(combined, quantum))


def textbook_pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """r = cov(x, y) / (sd(x) * sd(y)), computed longhand."""
    n = len(xs)
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    cov = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    vx = math.fsum((x - mx) ** 2 for x in xs)
    vy = math.fsum((y - my) ** 2 for y in ys)
    return cov / math.sqrt(vx * vy)
