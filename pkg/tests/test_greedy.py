import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from greedylab.graph import Graph, named_graph
from greedylab.greedy import (
    MissingWeights,
    batch_greedy,
    greedy_independent_set,
    greedy_matching,
    greedy_scan,
    is_maximal_independent,
    is_maximal_matching,
    monte_carlo,
    padded_conflicts,
)
from greedylab.oracles import cycle_greedy_is, expected_greedy_is, expected_greedy_matching, path_greedy_is
from greedylab.weights import WeightAssignment, WeightDistribution

from .helpers import distinct
from .test_graph import small_graphs


def nodes_wa(values):
    return WeightAssignment("nodes", np.array(values, dtype=float))


def edges_wa(values):
    return WeightAssignment("edges", np.array(values, dtype=float))


def test_is_examples():
    k3 = named_graph("k3")
    res = greedy_independent_set(k3, nodes_wa([3, 2, 1]))
    assert res.selected == {0} and res.cardinality == 1 and res.total_weight == 3
    path = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert greedy_independent_set(path, nodes_wa([1, 3, 2])).selected == {1}
    empty = Graph.from_edges(6, [])
    assert greedy_independent_set(empty, nodes_wa(range(1, 7))).cardinality == 6


def test_matching_examples():
    k2 = Graph.from_edges(2, [(0, 1)])
    assert greedy_matching(k2, edges_wa([0.4])).selected == {(0, 1)}
    path = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert greedy_matching(path, edges_wa([2, 1])).selected == {(0, 1)}
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    for perm in itertools.permutations([1, 2, 3]):
        assert greedy_matching(star, edges_wa(perm)).cardinality == 1


def test_missing_weights():
    g = named_graph("k3")
    with pytest.raises(MissingWeights):
        greedy_independent_set(g, nodes_wa([1, 2]))
    with pytest.raises(MissingWeights):
        greedy_matching(g, nodes_wa([1, 2, 3]))


@settings(max_examples=200, deadline=None)
@given(small_graphs(10), st.randoms(use_true_random=False))
def test_outputs_are_maximal(g, rnd):
    nw = distinct(rnd, g.n)
    res = greedy_independent_set(g, nodes_wa(nw))
    assert is_maximal_independent(g, res.selected)
    assert res.total_weight == pytest.approx(sum(nw[i] for i in res.selected))
    if g.m:
        ew = distinct(rnd, g.m)
        mres = greedy_matching(g, edges_wa(ew))
        assert is_maximal_matching(g, mres.selected)
        assert mres.cardinality == len(mres.selected)


def _reference_greedy(g: Graph, weights):
    # literal sequential description: take the heaviest remaining node, delete its neighbours
    alive = set(range(g.n))
    out = set()
    while alive:
        v = max(alive, key=lambda u: weights[u])
        out.add(v)
        alive -= {v, *g.adj[v]}
    return out


@settings(max_examples=200, deadline=None)
@given(small_graphs(10), st.randoms(use_true_random=False))
def test_scan_equals_sequential_deletion(g, rnd):
    w = distinct(rnd, g.n)
    assert greedy_independent_set(g, nodes_wa(w)).selected == _reference_greedy(g, w)


@settings(max_examples=100, deadline=None)
@given(small_graphs(9), st.randoms(use_true_random=False))
def test_permutation_equivalence(g, rnd):
    w = np.array(distinct(rnd, g.n))
    assume(len(set(w)) == g.n)
    ranks = np.argsort(np.argsort(w))  # rank permutation induced by the weights
    assert greedy_independent_set(g, nodes_wa(w)).selected == greedy_independent_set(g, nodes_wa(ranks + 1)).selected


@pytest.mark.parametrize("name", ["petersen", "heawood", "k4", "cycle(7)"])
def test_batch_engine_matches_scalar(name):
    g = named_graph(name)
    rng = np.random.default_rng(1)
    for conflicts in (g.adj, g.line_adj):
        w = rng.random((300, len(conflicts)))
        sel = batch_greedy(padded_conflicts(conflicts), w)
        for t in range(300):
            assert set(np.flatnonzero(sel[t])) == set(greedy_scan(conflicts, w[t]))


def _average_over_orders(conflicts):
    # oracle for the subset DP: average |output| over every processing order
    n = len(conflicts)
    total = Fraction(0)
    count = 0
    for order in itertools.permutations(range(n)):
        w = [0] * n
        for pos, z in enumerate(order):
            w[z] = n - pos
        total += len(greedy_scan(conflicts, w))
        count += 1
    return total / count


@pytest.mark.parametrize(
    "g",
    [
        named_graph("k4"),
        named_graph("cycle(6)"),
        Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (1, 4), (4, 5)]),
        Graph.from_edges(5, [(0, 1), (0, 2), (0, 3), (3, 4)]),
    ],
)
def test_subset_dp_equals_enumeration(g):
    assert expected_greedy_is(g, exact=True) == _average_over_orders(g.adj)
    if g.m <= 7:
        assert expected_greedy_matching(g, exact=True) == _average_over_orders(g.line_adj)


def test_path_cycle_recursion_matches_subset_dp():
    e = path_greedy_is(12)
    for n in range(1, 13):
        path = Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])
        assert e[n] == pytest.approx(float(expected_greedy_is(path)), abs=1e-12)
    for n in range(3, 14):
        assert cycle_greedy_is(n) == pytest.approx(float(expected_greedy_is(named_graph(f"cycle({n})"))), abs=1e-12)


def test_petersen_exact_value():
    assert expected_greedy_is(named_graph("petersen"), exact=True) == Fraction(11, 3)


def test_mc_k3_exact():
    s = monte_carlo(named_graph("k3"), "is", trials=500, master_seed=3)
    assert s.mean_cardinality == pytest.approx(1 / 3, abs=1e-15)
    assert s.var_cardinality == pytest.approx(0.0, abs=1e-15)


def test_mc_k2_matching_weight():
    k2 = Graph.from_edges(2, [(0, 1)])
    s = monte_carlo(k2, "m", WeightDistribution.exponential(1), trials=200_000, master_seed=5)
    # per-node normalisation: W / 2
    assert abs(s.mean_weight - 0.5) <= 4 * s.se_weight


def test_mc_petersen_matching_against_dp():
    g = named_graph("petersen")
    s = monte_carlo(g, "m", trials=200_000, master_seed=8)
    exact = float(expected_greedy_matching(g)) / g.n
    assert abs(s.z_score(exact)) <= 4


def test_mc_cycle_against_recursion():
    g = named_graph("cycle(1000)")
    s = monte_carlo(g, "is", trials=4000, master_seed=2)
    assert abs(s.z_score(cycle_greedy_is(1000) / 1000)) <= 4


def test_mc_deterministic_across_workers(monkeypatch):
    g = named_graph("heawood")
    a = monte_carlo(g, "is", trials=70_000, master_seed=11, workers=1)
    b = monte_carlo(g, "is", trials=70_000, master_seed=11, workers=3)
    monkeypatch.setenv("LAB_THREADS", "2")
    c = monte_carlo(g, "is", trials=70_000, master_seed=11)
    assert a == b == c
    d = monte_carlo(g, "is", trials=70_000, master_seed=12)
    assert d != a


def test_mc_rejects_zero_trials():
    with pytest.raises(ValueError):
        monte_carlo(named_graph("k3"), "is", trials=0)
