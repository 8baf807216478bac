"""Solution-space geometry: Hamming-adjacency clusters and frozen variables.

The solution graph joins solutions at Hamming distance exactly 1. Components
are found by hashing single-coordinate wildcard keys (all solutions agreeing
everywhere except one coordinate are pairwise adjacent), so the O(|S|^2)
pair scan is only needed for inter-component separation.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace

import numpy as np

from .exact import SolutionSet


@dataclass(frozen=True)
class ClusterReport:
    solution_set: SolutionSet
    component_ids: tuple[int, ...]        # per solution, numbered by first appearance
    sizes: tuple[int, ...]                # descending
    dominant_fraction: float
    separation: int | None                # None: single component or skipped
    separation_computed: bool
    frozen_fractions: dict[float, float] | None = None

    @property
    def num_solutions(self) -> int:
        return len(self.component_ids)

    @property
    def num_components(self) -> int:
        return len(self.sizes)

    @property
    def essentially_connected(self) -> bool:
        """Heuristic diagnostic: dominant fraction >= 1 - 1/ln(|S|+2)."""
        return self.dominant_fraction >= 1.0 - 1.0 / math.log(self.num_solutions + 2)


@dataclass(frozen=True)
class FrozenProfile:
    delta: float
    fraction: float                        # frozen (solution, variable) pairs
    frozen_sets: tuple[frozenset[int], ...]
    indices: tuple[int, ...]               # solution indices evaluated
    sampled: bool


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int):
        a, b = self.find(i), self.find(j)
        if a != b:
            self.parent[b] = a


def solution_components(S: SolutionSet, separation_limit: int | None = 4000) -> ClusterReport:
    """Connected components of the distance-1 solution graph.

    Requires an exhaustive, nonempty solution set. Separation is computed
    only when |S| <= separation_limit (pass None to always compute).
    """
    if not S.exhaustive:
        raise ValueError("component structure of a truncated sample is meaningless")
    if len(S) == 0:
        raise ValueError("no solutions to cluster")
    arr = S.as_array()
    count, n = arr.shape
    uf = _UnionFind(count)
    cols = np.arange(n)
    for i in range(n):
        rest = arr[:, cols != i]
        _, inverse = np.unique(rest, axis=0, return_inverse=True)
        order = np.argsort(inverse, kind="stable")
        inv_sorted = inverse[order]
        for pos in range(1, count):
            if inv_sorted[pos] == inv_sorted[pos - 1]:
                uf.union(int(order[pos - 1]), int(order[pos]))

    ids: list[int] = []
    seen: dict[int, int] = {}
    counts: list[int] = []
    for i in range(count):
        root = uf.find(i)
        if root not in seen:
            seen[root] = len(seen)
            counts.append(0)
        cid = seen[root]
        ids.append(cid)
        counts[cid] += 1
    sizes = sorted(counts, reverse=True)

    report = ClusterReport(S, tuple(ids), tuple(sizes), sizes[0] / count,
                           None, False)
    if len(sizes) > 1 and (separation_limit is None or count <= separation_limit):
        report = replace(report, separation=_separation(arr, ids),
                         separation_computed=True)
    elif len(sizes) == 1:
        report = replace(report, separation_computed=True)
    return report


def _separation(arr: np.ndarray, ids: list[int] | tuple[int, ...]) -> int:
    comp = np.asarray(ids)
    count = arr.shape[0]
    best = arr.shape[1] + 1
    block = max(1, 2**22 // max(1, count * arr.shape[1]))
    for start in range(0, count, block):
        stop = min(count, start + block)
        d = (arr[start:stop, None, :] != arr[None, :, :]).sum(axis=2)
        other = comp[start:stop, None] != comp[None, :]
        if other.any():
            best = min(best, int(d[other].min()))
            if best == 2:
                break  # distance-1 pairs share a component, so 2 is minimal
    return best


def cluster_separation(report: ClusterReport) -> int | None:
    """Minimum Hamming distance between solutions in distinct components;
    None (absent) for a single component."""
    if report.num_components < 2:
        return None
    if report.separation is not None:
        return report.separation
    return _separation(report.solution_set.as_array(), report.component_ids)


def frozen_variables(S: SolutionSet, sigma: tuple[int, ...], delta: float) -> frozenset[int]:
    """Variables x whose every value-changing solution sits at Hamming
    distance >= ceil(delta * n) from sigma; vacuously frozen if none exists."""
    _check_frozen_args(S, delta)
    arr = S.as_array()
    n = arr.shape[1]
    srow = np.asarray(sigma, dtype=arr.dtype)
    if srow.shape != (n,):
        raise ValueError("sigma has the wrong length")
    if not (arr == srow).all(axis=1).any():
        raise ValueError("sigma is not a member of the solution set")
    return _frozen_for_row(arr, srow, math.ceil(delta * n))


def _frozen_for_row(arr: np.ndarray, srow: np.ndarray, threshold: int) -> frozenset[int]:
    diff = arr != srow[None, :]
    dists = diff.sum(axis=1)
    sentinel = arr.shape[1] + 1
    nearest = np.where(diff, dists[:, None], sentinel).min(axis=0)
    return frozenset(int(x) + 1 for x in np.nonzero(nearest >= threshold)[0])


def freezing_profile(S: SolutionSet, delta: float,
                     sample_limit: int | None = None,
                     seed: int = 0) -> FrozenProfile:
    """Aggregate frozen_variables over all of S, or over a uniform sample
    when |S| exceeds sample_limit (flagged as sampled)."""
    _check_frozen_args(S, delta)
    if len(S) == 0:
        raise ValueError("no solutions to profile")
    arr = S.as_array()
    n = arr.shape[1]
    threshold = math.ceil(delta * n)
    if sample_limit is not None and len(S) > sample_limit:
        indices = tuple(sorted(random.Random(seed).sample(range(len(S)), sample_limit)))
        sampled = True
    else:
        indices = tuple(range(len(S)))
        sampled = False
    sets = tuple(_frozen_for_row(arr, arr[i], threshold) for i in indices)
    fraction = sum(len(fs) for fs in sets) / (len(sets) * n)
    return FrozenProfile(delta, fraction, sets, indices, sampled)


def _check_frozen_args(S: SolutionSet, delta: float):
    if not S.exhaustive:
        raise ValueError("freezing is defined against the full solution set")
    if not 0.0 < delta <= 1.0:
        raise ValueError(f"delta must lie in (0, 1], got {delta}")


def geometry_report(S: SolutionSet, deltas: tuple[float, ...] = (0.1, 0.2, 0.5),
                    separation_limit: int | None = 4000,
                    sample_limit: int | None = 1000,
                    seed: int = 0) -> tuple[ClusterReport, dict[float, FrozenProfile]]:
    """Cluster report plus freezing profiles on a delta grid."""
    report = solution_components(S, separation_limit)
    profiles = {d: freezing_profile(S, d, sample_limit, seed) for d in deltas}
    report = replace(report, frozen_fractions={d: p.fraction for d, p in profiles.items()})
    return report, profiles
