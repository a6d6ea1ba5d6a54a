"""The GREEDY algorithm for independent sets and matchings, scalar and batched."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .weights import UNIFORM01, WeightAssignment, WeightDistribution, derive_seed, distinct_rows

# Fixed so that Monte Carlo output does not depend on the worker count.
BATCH_SIZE = 1 << 15


class MissingWeights(ValueError):
    pass


@dataclass(frozen=True)
class GreedyResult:
    mode: str  # "independent_set" | "matching"
    selected: frozenset
    cardinality: int
    total_weight: float
    seed: int | None = None


def greedy_scan(conflicts, weights) -> list[int]:
    """Visit ids by decreasing weight; keep an id unless a kept neighbour blocks it."""
    order = np.argsort(-np.asarray(weights), kind="stable")
    blocked = np.zeros(len(conflicts), dtype=bool)
    chosen = []
    for z in order:
        if not blocked[z]:
            chosen.append(int(z))
            blocked[list(conflicts[z])] = True
    return chosen


def _check(wa: WeightAssignment, target: str, size: int) -> None:
    if wa.target != target or len(wa) != size:
        raise MissingWeights(f"need {size} weights on {target}, got {len(wa)} on {wa.target}")


def greedy_independent_set(g: Graph, wa: WeightAssignment) -> GreedyResult:
    _check(wa, "nodes", g.n)
    chosen = greedy_scan(g.adj, wa.values)
    return GreedyResult("independent_set", frozenset(chosen), len(chosen), float(wa.values[chosen].sum()), wa.seed)


def greedy_matching(g: Graph, wa: WeightAssignment) -> GreedyResult:
    """Selected edges are reported as node pairs ``(u, v)`` with ``u < v``."""
    _check(wa, "edges", g.m)
    chosen = greedy_scan(g.line_adj, wa.values)
    edges = frozenset(g.edges[k] for k in chosen)
    return GreedyResult("matching", edges, len(chosen), float(wa.values[chosen].sum()), wa.seed)


def run_greedy(g: Graph, mode: str, wa: WeightAssignment) -> GreedyResult:
    mode = normalize_mode(mode)
    return greedy_independent_set(g, wa) if mode == "independent_set" else greedy_matching(g, wa)


def normalize_mode(mode: str) -> str:
    aliases = {"is": "independent_set", "independent_set": "independent_set", "m": "matching", "matching": "matching"}
    try:
        return aliases[mode]
    except KeyError:
        raise ValueError(f"unknown mode {mode!r}") from None


def is_independent(g: Graph, nodes) -> bool:
    nodes = set(nodes)
    return all(v not in nodes for u in nodes for v in g.adj[u])


def is_maximal_independent(g: Graph, nodes) -> bool:
    nodes = set(nodes)
    return is_independent(g, nodes) and all(u in nodes or any(v in nodes for v in g.adj[u]) for u in range(g.n))


def is_maximal_matching(g: Graph, edges) -> bool:
    covered: set[int] = set()
    for u, v in edges:
        if u in covered or v in covered:
            return False
        covered |= {u, v}
    return all(u in covered or v in covered for u, v in g.edges)


# ---------------------------------------------------------------------------
# batched engine: many weightings of one graph at once


def padded_conflicts(conflicts) -> np.ndarray:
    """(size, maxdeg) neighbour table padded with the sentinel id ``size``."""
    size = len(conflicts)
    width = max((len(c) for c in conflicts), default=0)
    table = np.full((size, max(width, 1)), size, dtype=np.int64)
    for k, c in enumerate(conflicts):
        table[k, : len(c)] = c
    return table


def batch_greedy(table: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Boolean (trials, size) selection mask; row t equals ``greedy_scan`` on ``weights[t]``."""
    trials, size = weights.shape
    order = np.argsort(-weights, axis=1, kind="stable")
    blocked = np.zeros((trials, size + 1), dtype=bool)
    selected = np.zeros((trials, size), dtype=bool)
    rows = np.arange(trials)
    for k in range(size):
        z = order[:, k]
        take = ~blocked[rows, z]
        selected[rows, z] = take
        nb = table[z]
        blocked[rows[:, None], nb] |= take[:, None]
    return selected


@dataclass(frozen=True)
class SampleStats:
    trials: int
    normalizer: int
    mean_cardinality: float
    var_cardinality: float
    se_cardinality: float
    mean_weight: float
    var_weight: float
    se_weight: float

    def z_score(self, expected: float, field: str = "cardinality") -> float:
        mean, se = getattr(self, f"mean_{field}"), getattr(self, f"se_{field}")
        if se == 0:
            return 0.0 if mean == expected else float("inf")
        return (mean - expected) / se


def _workers(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get("LAB_THREADS", "1") or 1)
    return max(1, workers)


def batch_seeds(master_seed: int, trials: int) -> list[tuple[int, int]]:
    """(seed, size) per fixed-size batch; batch b uses stream ``derive_seed(master_seed, b)``."""
    out = []
    for b, start in enumerate(range(0, trials, BATCH_SIZE)):
        out.append((derive_seed(master_seed, b), min(BATCH_SIZE, trials - start)))
    return out


def map_batches(fn, master_seed: int, trials: int, workers: int | None = None) -> list:
    jobs = batch_seeds(master_seed, trials)
    nw = _workers(workers)
    if nw == 1 or len(jobs) == 1:
        return [fn(*job) for job in jobs]
    with ThreadPoolExecutor(nw) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))


def simulate(g: Graph, mode: str, dist: WeightDistribution, trials: int, master_seed: int, workers: int | None = None):
    """Per-trial (cardinality, total weight) arrays plus the selection masks' per-id hit counts."""
    target = "nodes" if normalize_mode(mode) == "independent_set" else "edges"
    conflicts = g.conflict_adj(target)
    table = padded_conflicts(conflicts)
    size = len(conflicts)

    def one(seed, count):
        rng = np.random.default_rng(seed)
        w = distinct_rows(dist, (count, size), rng)
        sel = batch_greedy(table, w)
        return sel.sum(axis=1), (w * sel).sum(axis=1), sel.sum(axis=0)

    parts = map_batches(one, master_seed, trials, workers)
    card = np.concatenate([p[0] for p in parts])
    weight = np.concatenate([p[1] for p in parts])
    hits = np.sum([p[2] for p in parts], axis=0)
    return card, weight, hits


def monte_carlo(
    g: Graph,
    mode: str,
    dist: WeightDistribution = UNIFORM01,
    trials: int = 1000,
    master_seed: int = 0,
    normalize: str = "nodes",
    workers: int | None = None,
) -> SampleStats:
    """Sample mean / unbiased variance / standard error of |output| and its weight, per node (or per edge)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    card, weight, _ = simulate(g, mode, dist, trials, master_seed, workers)
    denom = g.n if normalize == "nodes" else g.m
    c = card / denom
    w = weight / denom
    ddof = 1 if trials > 1 else 0
    vc, vw = float(c.var(ddof=ddof)), float(w.var(ddof=ddof))
    return SampleStats(
        trials,
        denom,
        float(c.mean()),
        vc,
        (vc / trials) ** 0.5,
        float(w.mean()),
        vw,
        (vw / trials) ** 0.5,
    )
