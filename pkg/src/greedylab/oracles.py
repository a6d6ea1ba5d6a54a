"""Exact expectations of random-order GREEDY on small graphs, for checking simulations."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .graph import Graph


def _closed_masks(conflicts) -> list[int]:
    masks = []
    for k, nb in enumerate(conflicts):
        m = 1 << k
        for j in nb:
            m |= 1 << j
        masks.append(m)
    return masks


def expected_greedy_size(conflicts, exact: bool = False):
    """E|output| when GREEDY picks a uniform remaining id and deletes its conflicts.

    Dynamic programme over surviving-id bitmasks; feasible up to ~22 ids.
    """
    size = len(conflicts)
    if size > 24:
        raise ValueError("subset DP limited to 24 ids")
    closed = _closed_masks(conflicts)
    one = Fraction(1) if exact else 1.0

    @lru_cache(maxsize=None)
    def f(alive: int):
        if not alive:
            return 0 * one
        total = 0 * one
        count = 0
        rest = alive
        while rest:
            low = rest & -rest
            k = low.bit_length() - 1
            total += f(alive & ~closed[k])
            count += 1
            rest ^= low
        return one + total / count

    return f((1 << size) - 1)


def expected_greedy_is(g: Graph, exact: bool = False):
    return expected_greedy_size(g.adj, exact)


def expected_greedy_matching(g: Graph, exact: bool = False):
    return expected_greedy_size(g.line_adj, exact)


def path_greedy_is(n: int) -> list[float]:
    """E|IG| on paths P_0..P_n: picking node i leaves paths of i-2 and n-i-1 nodes."""
    e = [0.0] * (n + 1)
    prefix = [0.0] * (n + 2)  # prefix[k] = e[0] + ... + e[k-1]
    for m in range(1, n + 1):
        # sum over picks i of e[max(i-2, 0)] + e[max(m-i-1, 0)] = 2 * (e[0] + ... + e[m-2])
        e[m] = 1.0 + 2.0 * prefix[m - 1] / m
        prefix[m + 1] = prefix[m] + e[m]
    return e


def cycle_greedy_is(n: int) -> float:
    """E|IG| on the cycle C_n: the first pick removes three nodes and leaves a path."""
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return 1.0 + path_greedy_is(n - 3)[n - 3]
