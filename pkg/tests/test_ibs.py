import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greedylab.graph import Graph, generate_random_regular, named_graph, neighborhood
from greedylab.greedy import greedy_scan
from greedylab.ibs import (
    EmptyQuery,
    containment_probability,
    ibs_contained,
    ibs_contained_direct,
    influence_blocking,
    is_blocking,
    containment_bound,
)
from greedylab.weights import UNIFORM01, WeightAssignment, assign_weights, derive_seed

from .helpers import distinct
from .test_graph import small_graphs


def wa(values, target="nodes"):
    return WeightAssignment(target, np.array(values, dtype=float))


PATH3 = Graph.from_edges(3, [(0, 1), (1, 2)])


def test_examples():
    assert influence_blocking(PATH3, wa([3, 2, 1]), {0}).elements == {0}
    assert influence_blocking(PATH3, wa([1, 2, 3]), {0}).elements == {0, 1, 2}
    pet = named_graph("petersen")
    w = assign_weights(pet, "nodes", UNIFORM01, 4)
    assert influence_blocking(pet, w, range(10)).elements == set(range(10))
    with pytest.raises(EmptyQuery):
        influence_blocking(PATH3, wa([1, 2, 3]), set())


def test_containment_examples():
    star = Graph.from_edges(5, [(0, k) for k in range(1, 5)])
    rng = np.random.default_rng(0)
    for _ in range(20):
        assert ibs_contained(star, wa(rng.random(5)), 0, 1, cross_check=True)
    path5 = Graph.from_edges(5, [(i, i + 1) for i in range(4)])
    assert not ibs_contained(path5, wa([1, 2, 3, 4, 5]), 0, 1, cross_check=True)
    assert ibs_contained(path5, wa([1, 2, 3, 4, 5]), 0, 4, cross_check=True)
    # a heavy centre does not matter: W_z is never consulted
    w = wa([9, 2, 3, 4, 5])
    assert ibs_contained(path5, w, 0, 1) == ibs_contained_direct(path5, w, 0, 1)


def _minimal_blocking_sets(conflicts, weights, z_set):
    n = len(conflicts)
    rest = [v for v in range(n) if v not in z_set]
    found = []
    for k in range(len(rest) + 1):
        for extra in itertools.combinations(rest, k):
            h = set(z_set) | set(extra)
            if is_blocking(conflicts, weights, h):
                found.append(h)
    return found


@settings(max_examples=200, deadline=None)
@given(small_graphs(8), st.randoms(use_true_random=False), st.data())
def test_increasing_reach_is_minimal_blocking_set(g, rnd, data):
    w = distinct(rnd, g.n)
    z = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1))
    res = influence_blocking(g, wa(w), z)
    assert z <= res.elements
    assert is_blocking(g.adj, w, res.elements)
    candidates = _minimal_blocking_sets(g.adj, w, z)
    # contained in every blocking superset of Z, hence the unique minimal one
    assert all(res.elements <= h for h in candidates)
    for extra in res.elements - z:
        assert not is_blocking(g.adj, w, res.elements - {extra})


@settings(max_examples=100, deadline=None)
@given(small_graphs(7), st.randoms(use_true_random=False), st.data())
def test_edge_mode_minimal_blocking(g, rnd, data):
    if not g.m:
        return
    w = distinct(rnd, g.m)
    z = data.draw(st.sets(st.integers(0, g.m - 1), min_size=1))
    res = influence_blocking(g, wa(w, "edges"), z)
    assert is_blocking(g.line_adj, w, res.elements)
    assert all(res.elements <= h for h in _minimal_blocking_sets(g.line_adj, w, z))


@settings(max_examples=200, deadline=None)
@given(small_graphs(12), st.randoms(use_true_random=False), st.data())
def test_locality_identity(g, rnd, data):
    w = np.array(distinct(rnd, g.n))
    z = data.draw(st.sets(st.integers(0, g.n - 1), min_size=1))
    hset = influence_blocking(g, wa(w), z).elements
    h, back = g.induced(hset)
    full = set(greedy_scan(g.adj, w))
    local = {back[v] for v in greedy_scan(h.adj, w[back])}
    assert full & hset == local
    if g.m:
        ew = np.array(distinct(rnd, g.m))
        ez = data.draw(st.sets(st.integers(0, g.m - 1), min_size=1))
        eset = influence_blocking(g, wa(ew, "edges"), ez).elements
        sub, eback = g.edge_subgraph(eset)
        mfull = set(greedy_scan(g.line_adj, ew))
        mlocal = {eback[e] for e in greedy_scan(sub.line_adj, ew[eback])}
        assert mfull & eset == mlocal


@settings(max_examples=150, deadline=None)
@given(small_graphs(12), st.randoms(use_true_random=False), st.integers(0, 4), st.floats(0, 10))
def test_path_test_ignores_own_weight(g, rnd, d, fresh):
    w = wa(distinct(rnd, g.n))
    z = rnd.randrange(g.n)
    a = ibs_contained(g, w, z, d, cross_check=True)
    assert ibs_contained(g, w.replaced(z, fresh), z, d) == a


class ReadTracker:
    """Weight vector that records which ids were looked up."""

    def __init__(self, values):
        self.values = values
        self.read = set()

    def __getitem__(self, k):
        self.read.add(int(k))
        return self.values[k]

    def __len__(self):
        return len(self.values)


def test_path_test_never_reads_own_weight():
    g = generate_random_regular(30, 3, 3, seed=2)
    for z in range(g.n):
        track = ReadTracker(np.random.default_rng(z).random(g.n))
        fake = WeightAssignment.__new__(WeightAssignment)
        object.__setattr__(fake, "target", "nodes")
        object.__setattr__(fake, "values", track)
        ibs_contained(g, fake, z, 3)
        assert z not in track.read


def test_edge_containment_agrees_with_direct():
    g = named_graph("heawood")
    for seed in range(100):
        w = assign_weights(g, "edges", UNIFORM01, seed)
        for e in (0, 7):
            for d in range(4):
                assert ibs_contained(g, w, e, d) == ibs_contained_direct(g, w, e, d)


def _increasing_frequency(length, trials, seed):
    rng = np.random.default_rng(seed)
    w = rng.random((trials, length))
    return np.all(np.diff(w, axis=1) > 0, axis=1).mean()


@pytest.mark.parametrize("nodes", [2, 3, 4, 5])
def test_node_path_increasing_frequency(nodes):
    # a path of k edges has k+1 nodes and is node increasing with probability 1/(k+1)!
    trials = 10**6
    p = 1 / math.factorial(nodes)
    est = _increasing_frequency(nodes, trials, nodes)
    assert abs(est - p) <= 4 * math.sqrt(p * (1 - p) / trials)


@pytest.mark.parametrize("k", [2, 3, 4])
def test_edge_path_increasing_frequency(k):
    # k edges of a path: the same ordering event on k weights, probability 1/k!
    trials = 10**6
    g = Graph.from_edges(k + 1, [(i, i + 1) for i in range(k)])
    rng = np.random.default_rng(derive_seed(5, k))
    w = rng.random((trials, g.m))
    hits = np.all(np.diff(w, axis=1) > 0, axis=1).sum()
    p = 1 / math.factorial(k)
    assert abs(hits / trials - p) <= 4 * math.sqrt(p * (1 - p) / trials)


def test_containment_probability_trivial_and_bound():
    single = Graph.from_edges(1, [])
    assert containment_probability(single, 0, 0, UNIFORM01, 50)[0] == 1.0
    g = generate_random_regular(60, 3, 3, seed=9)
    p, se = containment_probability(g, 0, 4, UNIFORM01, 3000, master_seed=1)
    assert p >= containment_bound(3, 4) - 4 * se
    pe, see = containment_probability(g, 0, 4, UNIFORM01, 3000, master_seed=1, target="edges")
    assert pe >= containment_bound(3, 4, "edges") - 4 * see


def test_containment_bound_values():
    assert containment_bound(3, 4) == pytest.approx(0.6)
    assert containment_bound(3, 4, "edges") == pytest.approx(1 - 64 / 120)


def test_ibs_within_neighbourhood_when_contained():
    g = generate_random_regular(40, 3, 3, seed=4)
    for seed in range(50):
        w = assign_weights(g, "nodes", UNIFORM01, seed)
        z = seed % g.n
        start = {z, *g.adj[z]}
        elems = influence_blocking(g, w, start).elements
        for d in range(5):
            assert ibs_contained(g, w, z, d) == (elems <= neighborhood(g, z, d))
