"""Influence blocking subgraphs.

A set H of nodes (edges) blocks influence when every member outweighs each of
its neighbours outside H.  The smallest such set containing Z is exactly what
can be reached from Z along strictly increasing paths, and GREEDY restricted
to it agrees with GREEDY on the whole graph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .graph import Graph, bfs_distances
from .weights import WeightAssignment, WeightDistribution, derive_seed, draw_distinct


class EmptyQuery(ValueError):
    pass


@dataclass(frozen=True)
class IbsResult:
    elements: frozenset[int]
    source: frozenset[int]
    radius_containment: tuple[int, bool] | None = None


def increasing_reach(conflicts, weights, sources, banned: int | None = None) -> set[int]:
    """Everything reachable from ``sources`` by stepping to strictly heavier neighbours."""
    seen = {s for s in sources if s != banned}
    queue = deque(seen)
    while queue:
        u = queue.popleft()
        wu = weights[u]
        for v in conflicts[u]:
            if v != banned and v not in seen and weights[v] > wu:
                seen.add(v)
                queue.append(v)
    return seen


def influence_blocking(g: Graph, wa: WeightAssignment, z_set) -> IbsResult:
    z_set = frozenset(int(z) for z in z_set)
    if not z_set:
        raise EmptyQuery("query set must be non-empty")
    reach = increasing_reach(g.conflict_adj(wa.target), wa.values, z_set)
    return IbsResult(frozenset(reach), z_set)


def is_blocking(conflicts, weights, elements) -> bool:
    """Definition check: each member is heavier than all its outside neighbours."""
    elements = set(elements)
    for z in elements:
        outside = [weights[y] for y in conflicts[z] if y not in elements]
        if outside and not weights[z] > max(outside):
            return False
    return True


def _ball(conflicts, z: int, radius: int) -> list[int]:
    return bfs_distances(conflicts, [z], limit=radius)


def ibs_contained_direct(g: Graph, wa: WeightAssignment, z: int, d: int) -> bool:
    """IB(N(z)) ⊆ N_d(z), by building IB(N(z)) explicitly."""
    conflicts = g.conflict_adj(wa.target)
    dist = bfs_distances(conflicts, [z])
    start = [z, *conflicts[z]]
    reach = increasing_reach(conflicts, wa.values, start)
    return all(0 <= dist[y] <= d for y in reach)


def ibs_contained(g: Graph, wa: WeightAssignment, z: int, d: int, cross_check: bool = False) -> bool:
    """IB(N(z)) ⊆ N_d(z) via the path test.

    Looks for an increasing path avoiding ``z`` from a neighbour of ``z`` to
    the layer at distance d+1.  ``wa[z]`` is never read.
    """
    if d < 0:
        raise ValueError("d must be non-negative")
    conflicts = g.conflict_adj(wa.target)
    dist = _ball(conflicts, z, d + 1)
    seen = set(conflicts[z])
    queue = deque(seen)
    ok = True
    while queue and ok:
        u = queue.popleft()
        if dist[u] > d:
            ok = False
            break
        wu = wa.values[u]
        for v in conflicts[u]:
            if v != z and v not in seen and wa.values[v] > wu:
                seen.add(v)
                queue.append(v)
    if cross_check:
        direct = ibs_contained_direct(g, wa, z, d)
        if direct != ok:
            raise AssertionError(f"path test {ok} disagrees with direct construction {direct} at z={z}, d={d}")
    return ok


def containment_probability(
    g: Graph,
    z: int,
    d: int,
    dist: WeightDistribution,
    trials: int,
    master_seed: int = 0,
    target: str = "nodes",
) -> tuple[float, float]:
    """Monte Carlo estimate and standard error of P(IB(N(z)) ⊆ N_d(z))."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    size = g.n if target == "nodes" else g.m
    rng = np.random.default_rng(derive_seed(master_seed, 0))
    hits = 0
    for _ in range(trials):
        wa = WeightAssignment(target, draw_distinct(dist, size, rng))
        hits += ibs_contained(g, wa, z, d)
    p = hits / trials
    return p, (p * (1 - p) / trials) ** 0.5


def containment_bound(r: int, d: int, target: str = "nodes") -> float:
    """Lower bound on the containment probability for max degree r."""
    from math import factorial

    if target == "nodes":
        return 1 - r * (r - 1) ** d / factorial(d + 1)
    return 1 - 2 * (r - 1) ** (d + 1) / factorial(d + 1)
