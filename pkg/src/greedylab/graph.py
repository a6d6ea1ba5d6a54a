"""Immutable simple graphs, girth, random regular generation and rooted tree families."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

Edge = tuple[int, int]


class GraphError(ValueError):
    pass


class AttemptsExhausted(RuntimeError):
    pass


class UnknownName(KeyError):
    pass


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on nodes ``0..n-1``.

    ``root`` is set when the graph is a rooted tree; ``parent`` then gives the
    parent of every non-root node (``-1`` for the root).
    """

    n: int
    adj: tuple[tuple[int, ...], ...]
    root: int | None = None
    parent: tuple[int, ...] | None = field(default=None, repr=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "Graph":
        if n < 1:
            raise GraphError("node_count must be positive")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if v in nbrs[u]:
                raise GraphError(f"parallel edge ({u}, {v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs))

    @classmethod
    def rooted_tree(cls, n: int, edges: Iterable[Edge], root: int = 0) -> "Graph":
        g = cls.from_edges(n, edges)
        if g.m != n - 1:
            raise GraphError("a tree on n nodes has n-1 edges")
        parent = [-2] * n
        parent[root] = -1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in g.adj[u]:
                if parent[v] == -2:
                    parent[v] = u
                    queue.append(v)
        if -2 in parent:
            raise GraphError("tree is not connected")
        return cls(n, g.adj, root, tuple(parent))

    @property
    def is_tree(self) -> bool:
        return self.root is not None

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple((u, v) for u in range(self.n) for v in self.adj[u] if u < v)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: k for k, e in enumerate(self.edges)}

    def edge_id(self, u: int, v: int) -> int:
        return self.edge_index[_norm(u, v)]

    def degree(self, u: int) -> int:
        return len(self.adj[u])

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def is_regular(self, r: int) -> bool:
        return all(len(a) == r for a in self.adj)

    @cached_property
    def line_adj(self) -> tuple[tuple[int, ...], ...]:
        """Edge conflict lists: two edges are neighbours iff they share a node."""
        out = []
        for u, v in self.edges:
            conflicts = {self.edge_id(u, w) for w in self.adj[u] if w != v}
            conflicts |= {self.edge_id(v, w) for w in self.adj[v] if w != u}
            out.append(tuple(sorted(conflicts)))
        return tuple(out)

    def conflict_adj(self, target: str) -> tuple[tuple[int, ...], ...]:
        if target == "nodes":
            return self.adj
        if target == "edges":
            return self.line_adj
        raise ValueError(f"unknown target {target!r}")

    def children(self, u: int) -> tuple[int, ...]:
        if self.parent is None:
            raise GraphError("not a rooted tree")
        return tuple(v for v in self.adj[u] if v != self.parent[u])

    def depth_of(self) -> list[int]:
        if self.root is None:
            raise GraphError("not a rooted tree")
        return bfs_distances(self.adj, [self.root])

    def induced(self, nodes: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph, relabelled; returns (graph, new->old id map)."""
        keep = sorted(set(nodes))
        pos = {u: k for k, u in enumerate(keep)}
        edges = [(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos]
        return Graph.from_edges(len(keep), edges), keep

    def edge_subgraph(self, edge_ids: Iterable[int]) -> tuple["Graph", list[int]]:
        """Subgraph spanned by a set of edges; returns (graph, new edge id -> old edge id)."""
        chosen = sorted(set(edge_ids))
        nodes = sorted({x for k in chosen for x in self.edges[k]})
        pos = {u: k for k, u in enumerate(nodes)}
        h = Graph.from_edges(max(len(nodes), 1), [(pos[self.edges[k][0]], pos[self.edges[k][1]]) for k in chosen])
        back = [0] * len(chosen)
        for k in chosen:
            u, v = self.edges[k]
            back[h.edge_id(pos[u], pos[v])] = k
        return h, back


def bfs_distances(adj: Sequence[Sequence[int]], sources: Iterable[int], limit: int | None = None) -> list[int]:
    """Multi-source BFS; unreachable (or beyond ``limit``) entries are -1."""
    dist = [-1] * len(adj)
    queue = deque()
    for s in sources:
        if dist[s] < 0:
            dist[s] = 0
            queue.append(s)
    while queue:
        u = queue.popleft()
        if limit is not None and dist[u] >= limit:
            continue
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def girth(g: Graph) -> float:
    """Length of the shortest cycle, ``math.inf`` for forests."""
    best = math.inf
    for s in range(g.n):
        dist = [-1] * g.n
        par = [-1] * g.n
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for v in g.adj[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    par[v] = u
                    queue.append(v)
                elif v != par[u]:
                    best = min(best, dist[u] + dist[v] + 1)
    return best


# ---------------------------------------------------------------------------
# tree families


@dataclass(frozen=True)
class TreeSpec:
    branching: int
    depth: int
    variant: str = "uniform_r"  # or "root_r_plus_1"

    def __post_init__(self):
        if self.branching < 1 or self.depth < 0:
            raise ValueError("branching must be >= 1 and depth >= 0")
        if self.variant not in ("uniform_r", "root_r_plus_1"):
            raise ValueError(f"unknown variant {self.variant!r}")


def build_tree(spec: TreeSpec) -> Graph:
    """T(r, d) or T(r+1, r, d), numbered breadth-first from the root 0."""
    r, d = spec.branching, spec.depth
    edges: list[Edge] = []
    level = [0]
    n = 1
    for depth in range(d):
        k = r + 1 if (depth == 0 and spec.variant == "root_r_plus_1") else r
        nxt = []
        for u in level:
            for _ in range(k):
                edges.append((u, n))
                nxt.append(n)
                n += 1
        level = nxt
    return Graph.rooted_tree(n, edges, root=0)


def regular_tree(r: int, d: int) -> Graph:
    """T(r, r-1, d): the depth-d neighbourhood of a node in a high-girth r-regular graph."""
    return build_tree(TreeSpec(r - 1, d, "root_r_plus_1"))


# ---------------------------------------------------------------------------
# neighbourhoods


def neighborhood(g: Graph, z, d: int, target: str = "nodes") -> set[int]:
    """Ids within distance ``d`` of ``z``.

    For ``target="edges"`` ``z`` is an edge id or a node pair and distances
    are taken in the line graph, which equals "shortest path containing both
    edges, minus one".
    """
    if d < 0:
        raise ValueError("d must be non-negative")
    if target == "edges" and isinstance(z, tuple):
        z = g.edge_id(*z)
    dist = bfs_distances(g.conflict_adj(target), [z], limit=d)
    return {k for k, x in enumerate(dist) if 0 <= x <= d}


# ---------------------------------------------------------------------------
# generators


def _within(adj: list[list[int]], u: int, v: int, radius: int) -> bool:
    """True if v is reachable from u by a path of length <= radius."""
    if radius <= 0:
        return u == v
    seen = {u}
    frontier = [u]
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for y in adj[x]:
                if y == v:
                    return True
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return False


def generate_random_regular(n: int, r: int, girth_min: int = 3, seed: int = 0, max_attempts: int = 10_000) -> Graph:
    """Random r-regular simple graph of girth >= girth_min via stub pairing.

    Stubs are matched one at a time; each stub is paired with a uniformly
    chosen admissible partner (no loop, no multi-edge, no cycle shorter than
    ``girth_min``).  A dead end restarts the whole attempt.
    """
    if r < 2 or n <= r:
        raise ValueError("need r >= 2 and n > r")
    if (n * r) % 2:
        raise ValueError("n * r must be even")
    rng = np.random.default_rng(seed)
    radius = max(girth_min, 3) - 2
    for _ in range(max_attempts):
        adj: list[list[int]] = [[] for _ in range(n)]
        free = [r] * n
        ok = True
        for _ in range(n * r // 2):
            u = max(range(n), key=lambda x: (free[x], -x))
            cand = [v for v in range(n) if v != u and free[v] > 0 and v not in adj[u] and not _within(adj, u, v, radius)]
            if not cand:
                ok = False
                break
            weights = np.array([free[v] for v in cand], dtype=float)
            v = cand[int(rng.choice(len(cand), p=weights / weights.sum()))]
            adj[u].append(v)
            adj[v].append(u)
            free[u] -= 1
            free[v] -= 1
        if ok:
            return Graph.from_edges(n, [(u, v) for u in range(n) for v in adj[u] if u < v])
    raise AttemptsExhausted(f"no {r}-regular graph with n={n}, girth>={girth_min} after {max_attempts} attempts")


def _lcf(n: int, jumps: Sequence[int], repeats: int) -> Graph:
    edges = {_norm(i, (i + 1) % n) for i in range(n)}
    seq = list(jumps) * repeats
    for i, j in enumerate(seq):
        edges.add(_norm(i, (i + j) % n))
    return Graph.from_edges(n, sorted(edges))


def named_graph(name: str) -> Graph:
    """petersen, heawood, mcgee, tutte_coxeter, k4, k3, or cycle(n) / cycleN."""
    key = name.strip().lower()
    if key.startswith("cycle"):
        digits = key[5:].strip("()_:")
        k = int(digits)
        if k < 3:
            raise UnknownName(name)
        return Graph.from_edges(k, [(i, (i + 1) % k) for i in range(k)])
    if key == "petersen":
        outer = [(i, (i + 1) % 5) for i in range(5)]
        spokes = [(i, i + 5) for i in range(5)]
        inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        return Graph.from_edges(10, outer + spokes + inner)
    if key == "heawood":
        return _lcf(14, [5, -5], 7)
    if key == "mcgee":
        return _lcf(24, [12, 7, -7], 8)
    if key in ("tutte_coxeter", "tutte-coxeter"):
        return _lcf(30, [-13, -9, 7, -7, 9, 13], 5)
    if key in ("k4", "k3"):
        k = int(key[1])
        return Graph.from_edges(k, [(i, j) for i in range(k) for j in range(i + 1, k)])
    raise UnknownName(name)


# ---------------------------------------------------------------------------
# edge-list files: first line "n m", then m lines "u v"


def write_edgelist(g: Graph, path) -> None:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges]
    Path(path).write_text("\n".join(lines) + "\n")


def read_edgelist(path) -> Graph:
    rows = [ln.split() for ln in Path(path).read_text().splitlines() if ln.strip() and not ln.startswith("#")]
    if not rows or len(rows[0]) != 2:
        raise GraphError("header must be 'n m'")
    n, m = map(int, rows[0])
    body = rows[1:]
    if len(body) != m:
        raise GraphError(f"header declares {m} edges, found {len(body)}")
    return Graph.from_edges(n, [(int(a), int(b)) for a, b in body])
