"""Bonus recursion on weighted rooted trees.

S(i) is W_i when i survives GREEDY on its own subtree and 0 otherwise; MS(i)
is the weight of the edge from i to a child that GREEDY matches inside T_i
(0 if none).  Both are filled bottom-up in one pass.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph


class NotATree(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class BonusTable:
    s_values: np.ndarray
    ms_values: np.ndarray


def _require_tree(t: Graph) -> None:
    if not t.is_tree:
        raise NotATree("bonus recursion needs a rooted tree")


def _bottom_up(t: Graph) -> list[int]:
    depth = t.depth_of()
    return sorted(range(t.n), key=lambda u: -depth[u])


def _edge_term(t: Graph, edge_w, ms, i: int, j: int) -> float:
    w = edge_w[t.edge_id(i, j)]
    return w if w > ms[j] else 0.0


def compute_bonus(t: Graph, node_w=None, edge_w=None) -> BonusTable:
    _require_tree(t)
    s = np.zeros(t.n)
    ms = np.zeros(t.n)
    for i in _bottom_up(t):
        kids = t.children(i)
        if node_w is not None:
            wi = node_w[i]
            s[i] = wi if not kids or wi > max(s[j] for j in kids) else 0.0
        if edge_w is not None and kids:
            ms[i] = max(_edge_term(t, edge_w, ms, i, j) for j in kids)
    return BonusTable(s, ms)


def root_in_greedy_is(t: Graph, node_w) -> bool:
    return compute_bonus(t, node_w=node_w).s_values[t.root] > 0


def matched_root_edge(t: Graph, edge_w) -> tuple[int, int] | None:
    """The root edge GREEDY matches in T, read off from MS(root)."""
    ms = compute_bonus(t, edge_w=edge_w).ms_values
    root = t.root
    if ms[root] <= 0:
        return None
    j = max(t.children(root), key=lambda c: _edge_term(t, edge_w, ms, root, c))
    return tuple(sorted((root, j)))


def edge_selection_test(t: Graph, edge_w, j: int, i: int | None = None) -> bool:
    """Is (i, j) in MG(T_i)?  Decided as W_ij > max(MS(j), MS_H(i)).

    H is T_i without the edge (i, j) and the subtree below j; MS_H(i) is
    recomputed from the cached child bonuses of the other children.
    """
    _require_tree(t)
    if i is None:
        i = t.root
    if t.parent[j] != i:
        raise ValueError(f"{j} is not a child of {i}")
    ms = compute_bonus(t, edge_w=edge_w).ms_values
    others = [_edge_term(t, edge_w, ms, i, c) for c in t.children(i) if c != j]
    ms_h = max(others, default=0.0)
    return edge_w[t.edge_id(i, j)] > max(ms[j], ms_h)


def subtree(t: Graph, i: int) -> tuple[Graph, list[int]]:
    """T_i as a rooted tree, with new -> old node map."""
    _require_tree(t)
    nodes = [i]
    k = 0
    while k < len(nodes):
        nodes.extend(t.children(nodes[k]))
        k += 1
    pos = {u: n for n, u in enumerate(nodes)}
    edges = [(pos[t.parent[u]], pos[u]) for u in nodes[1:]]
    return Graph.rooted_tree(len(nodes), edges, root=0), nodes


def batch_root_bonus(t: Graph, node_w: np.ndarray | None = None, edge_w: np.ndarray | None = None):
    """S(root) and MS(root) for many weightings at once (rows of ``node_w`` / ``edge_w``).

    Levels are processed bottom-up; within a level every child pushes its
    contribution into its parent's running maximum.
    """
    _require_tree(t)
    depth = t.depth_of()
    levels: dict[int, list[int]] = {}
    for u, dep in enumerate(depth):
        levels.setdefault(dep, []).append(u)
    parent = np.array(t.parent)
    s_root = ms_root = None
    if node_w is not None:
        node_w = np.asarray(node_w)
        s = np.zeros_like(node_w)
        cmax = np.zeros_like(node_w)
        for dep in sorted(levels, reverse=True):
            ids = np.array(levels[dep])
            w = node_w[:, ids]
            s[:, ids] = np.where(w > cmax[:, ids], w, 0.0)
            if dep:
                np.maximum.at(cmax, (slice(None), parent[ids]), s[:, ids])
        s_root = s[:, t.root]
    if edge_w is not None:
        edge_w = np.asarray(edge_w)
        up = np.array([t.edge_id(u, t.parent[u]) if u != t.root else -1 for u in range(t.n)])
        ms = np.zeros((edge_w.shape[0], t.n))
        for dep in sorted(levels, reverse=True):
            if not dep:
                break
            ids = np.array(levels[dep])
            w = edge_w[:, up[ids]]
            term = np.where(w > ms[:, ids], w, 0.0)
            np.maximum.at(ms, (slice(None), parent[ids]), term)
        ms_root = ms[:, t.root]
    return s_root, ms_root
