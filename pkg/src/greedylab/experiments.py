"""Experiments behind the ``lab`` command line: each returns plain rows plus a pass flag."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from math import factorial

import numpy as np

from . import bonus, bounds, recursion
from .graph import Graph, TreeSpec, build_tree, generate_random_regular, girth, regular_tree
from .greedy import (
    batch_greedy,
    greedy_independent_set,
    greedy_matching,
    is_maximal_independent,
    is_maximal_matching,
    map_batches,
    monte_carlo,
    normalize_mode,
    padded_conflicts,
    simulate,
)
from .ibs import ibs_contained, ibs_contained_direct, influence_blocking, is_blocking
from .oracles import cycle_greedy_is, expected_greedy_is, expected_greedy_matching
from .weights import UNIFORM01, WeightAssignment, WeightDistribution, derive_seed, distinct_rows, draw_distinct

Z_LIMIT = 4.0


@dataclass
class Report:
    name: str
    rows: list[dict]
    passed: bool
    config: dict = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)


def _z(mean: float, se: float, lo: float, hi: float) -> float:
    """Distance in standard errors from the interval [lo, hi]."""
    if lo <= mean <= hi:
        return 0.0
    gap = mean - hi if mean > hi else mean - lo
    return gap / se if se > 0 else math.copysign(math.inf, gap)


# ---------------------------------------------------------------------------
# tree root statistics


def simulate_tree_root(r: int, d: int, trials: int, master_seed: int = 0, mode: str = "is", workers=None):
    """Monte Carlo of GREEDY on T(r, r-1, d) with uniform(0,1) weights.

    Returns per-trial arrays (indicator that the root / root edge (0, 1) is
    selected, weight times indicator).
    """
    mode = normalize_mode(mode)
    tree = regular_tree(r, d)
    target = "nodes" if mode == "independent_set" else "edges"
    conflicts = tree.conflict_adj(target)
    table = padded_conflicts(conflicts)
    probe = 0 if target == "nodes" else tree.edge_id(0, 1)

    def one(seed, count):
        rng = np.random.default_rng(seed)
        w = distinct_rows(UNIFORM01, (count, len(conflicts)), rng)
        hit = batch_greedy(table, w)[:, probe]
        return hit, w[:, probe] * hit

    parts = map_batches(one, master_seed, trials, workers)
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def tree_probability(r: int, d: int, trials: int, master_seed: int = 0, workers=None) -> Report:
    if r < 3 or d < 1:
        raise ValueError("need r >= 3 and d >= 1")
    rows = []
    hit, wh = simulate_tree_root(r, d, trials, master_seed, "is", workers)
    for name, sample, (lo, hi) in (
        ("P(root in IG)", hit, recursion.tree_root_is_probability(r, d)),
        ("E[W_root 1{root in IG}]", wh, recursion.tree_root_is_weight(r, d)),
    ):
        mean = float(sample.mean())
        se = float(sample.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
        rows.append(dict(quantity=name, r=r, d=d, empirical=mean, se=se, analytic=(lo + hi) / 2, analytic_width=hi - lo, z=_z(mean, se, lo, hi)))
    if d >= 1:
        ehit, _ = simulate_tree_root(r, d, trials, master_seed + 1, "m", workers)
        lo, hi = recursion.tree_root_edge_probability(r, d)
        mean = float(ehit.mean())
        se = float(ehit.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
        rows.append(dict(quantity="P((0,j) in MG)", r=r, d=d, empirical=mean, se=se, analytic=(lo + hi) / 2, analytic_width=hi - lo, z=_z(mean, se, lo, hi)))
    passed = all(abs(row["z"]) <= Z_LIMIT for row in rows)
    return Report("tree-prob", rows, passed, dict(r=r, d=d, trials=trials, seed=master_seed))


def tree_probability_sequence(r: int, dmax: int) -> list[dict]:
    """Analytic P(root in IG) for d = 1..dmax with successive differences and the Cauchy bound."""
    out = []
    prev = None
    for d in range(1, dmax + 1):
        lo, hi = recursion.tree_root_is_probability(r, d)
        val = (lo + hi) / 2
        row = dict(d=d, value=val, width=hi - lo, step=None if prev is None else val - prev, cauchy_bound=r * (r - 1) ** (d - 1) / factorial(d))
        out.append(row)
        prev = val
    return out


# ---------------------------------------------------------------------------
# Monte Carlo on whole graphs


def exact_reference(g: Graph, mode: str, name: str | None = None) -> float | None:
    """Exact E|output| / |V| when an oracle is cheap enough."""
    mode = normalize_mode(mode)
    size = g.n if mode == "independent_set" else g.m
    if size <= 22:
        val = expected_greedy_is(g) if mode == "independent_set" else expected_greedy_matching(g)
        return float(val) / g.n
    if mode == "independent_set" and name and name.lower().startswith("cycle"):
        return cycle_greedy_is(g.n) / g.n
    return None


def graph_mc(g: Graph, mode: str, dist: WeightDistribution, trials: int, master_seed: int = 0, name: str | None = None, check_maximal: int = 200, workers=None) -> Report:
    mode = normalize_mode(mode)
    stats = monte_carlo(g, mode, dist, trials, master_seed, workers=workers)
    row = dict(
        graph=name or "graph",
        n=g.n,
        m=g.m,
        mode=mode,
        dist=str(dist),
        trials=trials,
        mean_card_per_node=stats.mean_cardinality,
        se_card=stats.se_cardinality,
        var_card=stats.var_cardinality,
        mean_weight_per_node=stats.mean_weight,
        se_weight=stats.se_weight,
    )
    passed = True
    failures = []
    ref = exact_reference(g, mode, name)
    if ref is not None:
        row["exact_card_per_node"] = ref
        row["z_exact"] = stats.z_score(ref)
        passed &= abs(row["z_exact"]) <= Z_LIMIT
    # spot-check maximality on explicit runs
    bad = 0
    for t in range(min(check_maximal, trials)):
        seed = derive_seed(master_seed, 10_000_000 + t)
        rng = np.random.default_rng(seed)
        if mode == "independent_set":
            res = greedy_independent_set(g, WeightAssignment("nodes", draw_distinct(dist, g.n, rng), dist, seed))
            bad += not is_maximal_independent(g, res.selected)
        else:
            res = greedy_matching(g, WeightAssignment("edges", draw_distinct(dist, g.m, rng), dist, seed))
            bad += not is_maximal_matching(g, res.selected)
    row["maximality_failures"] = bad
    if bad:
        failures.append(f"{bad} non-maximal outputs")
        passed = False
    degs = {g.degree(u) for u in range(g.n)}
    if len(degs) == 1 and (r := degs.pop()) >= 3:
        gg = girth(g)
        row["r"], row["girth"] = r, gg
        if math.isfinite(gg) and gg >= 4:
            rep = bounds.mis_bounds(r, int(gg)) if mode == "independent_set" else bounds.mm_bounds(r, int(gg))
            row.update(bound_lower=rep.lower, bound_limit=rep.limit_value, bound_upper=rep.upper)
    return Report("graph-mc", [row], passed, dict(mode=mode, dist=str(dist), trials=trials, seed=master_seed), failures)


def variance_scaling(r: int, n_list, trials: int, dist: WeightDistribution = UNIFORM01, master_seed: int = 0, workers=None) -> Report:
    """n·Var(|IG|/n) and n·Var(W[IG]/n) on one random r-regular graph per n."""
    if trials < 2:
        raise ValueError("variance needs trials >= 2")
    const = bounds.variance_bound_is(r, 1, dist)
    const_card = bounds.variance_bound_is(r, 1, None)
    rows = []
    for n in n_list:
        g = generate_random_regular(n, r, 3, seed=derive_seed(master_seed, n))
        card, weight, _ = simulate(g, "is", dist, trials, derive_seed(master_seed, 1_000_000 + n), workers)
        nv_card = float(np.var(card / n, ddof=1) * n)
        nv_weight = float(np.var(weight / n, ddof=1) * n)
        rows.append(dict(n=n, trials=trials, n_var_card=nv_card, n_var_weight=nv_weight, bound_card=const_card.value, bound_weight=const.value))
    failures = []
    for row in rows:
        if row["n_var_card"] > row["bound_card"] or row["n_var_weight"] > row["bound_weight"]:
            failures.append(f"bound violated at n={row['n']}")
    for a, b in zip(rows, rows[1:]):
        for key in ("n_var_card", "n_var_weight"):
            ratio = b[key] / a[key] if a[key] > 0 else math.inf
            b[f"ratio_{key}"] = ratio
            if not 1 / 3 <= ratio <= 3:
                failures.append(f"{key} ratio {ratio:.3g} between n={a['n']} and n={b['n']}")
    return Report("var-scaling", rows, not failures, dict(r=r, n=list(n_list), trials=trials, dist=str(dist), seed=master_seed), failures)


# ---------------------------------------------------------------------------
# recursion convergence


def recursion_report(r: int, dmax: int, K: int | None = None, grid: int = 101) -> Report:
    s = np.linspace(0.0, 1.0, grid)
    rows = []
    failures = []
    for d in range(0, dmax + 1):
        kk = recursion.default_truncation(r, dmax) if K is None else K
        px = recursion.x_pmf(r, d, kk)
        py = recursion.y_pmf(r, d, kk)
        dx = float(np.max(np.abs(recursion.pgf(px, s) - recursion.limiting_pgf_x(r, s))))
        dy = float(np.max(np.abs(recursion.pgf(py, s) - recursion.limiting_pgf_y(r, s))))
        bound = r * (r - 1) ** d / factorial(d + 1)
        row = dict(
            r=r,
            d=d,
            sup_dist_x=dx,
            sup_dist_y=dy,
            bound=bound,
            tail_x=px.tail_mass,
            tail_y=py.tail_mass,
            mean_err_x=px.mean() - 1,
            mean_err_y=py.mean() - r if d else None,
        )
        rows.append(row)
        if d >= 2:
            if dx > bound + 2 * px.tail_mass:
                failures.append(f"X r={r} d={d}: {dx:.3g} > {bound:.3g}")
            if dy > bound + 2 * py.tail_mass:
                failures.append(f"Y r={r} d={d}: {dy:.3g} > {bound:.3g}")
    return Report("recursion", rows, not failures, dict(r=r, dmax=dmax, K=K), failures)


# ---------------------------------------------------------------------------
# verification suites


def random_tree(rng: np.random.Generator, max_branching: int = 4, max_depth: int = 4) -> Graph:
    r = int(rng.integers(1, max_branching + 1))
    d = int(rng.integers(0, max_depth + 1))
    variant = "root_r_plus_1" if rng.random() < 0.5 and r < max_branching else "uniform_r"
    return build_tree(TreeSpec(r, d, variant))


def verify_bonus(instances: int = 2000, master_seed: int = 0) -> Report:
    """Bonus recursion against GREEDY on random trees, all three equivalences."""
    rng = np.random.default_rng(derive_seed(master_seed, 1))
    failures = []
    checked = 0
    for k in range(instances):
        t = random_tree(rng)
        nw = draw_distinct(UNIFORM01, t.n, rng)
        ew = draw_distinct(UNIFORM01, t.m, rng) if t.m else np.zeros(0)
        table = bonus.compute_bonus(t, nw, ew)
        ig = greedy_independent_set(t, WeightAssignment("nodes", nw)).selected
        if table.s_values[0] != nw[0] * (0 in ig):
            failures.append(f"tree {k}: S(root) mismatch")
        if t.m:
            mg = greedy_matching(t, WeightAssignment("edges", ew)).selected
            kids = t.children(0)
            expect = max((ew[t.edge_id(0, j)] * ((0, j) in mg) for j in kids), default=0.0)
            if table.ms_values[0] != expect:
                failures.append(f"tree {k}: MS(root) mismatch")
            for j in kids:
                if bonus.edge_selection_test(t, ew, j) != ((0, j) in mg):
                    failures.append(f"tree {k}: edge test mismatch at child {j}")
        checked += 1
    return Report("bonus", [dict(instances=checked, failures=len(failures))], not failures, dict(instances=instances, seed=master_seed), failures)


def random_graph(rng: np.random.Generator, max_n: int = 60) -> Graph:
    n = int(rng.integers(2, max_n + 1))
    if rng.random() < 0.5 and n >= 6:
        r = int(rng.integers(2, 5))
        if (n * r) % 2:
            n += 1
        return generate_random_regular(n, r, 3, seed=int(rng.integers(2**63)))
    p = float(rng.uniform(0.02, 0.3))
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    return Graph.from_edges(n, zip(iu[keep].tolist(), ju[keep].tolist()))


def verify_ibs(instances: int = 500, master_seed: int = 0, max_n: int = 60) -> Report:
    """Locality, blocking property and the two containment tests on random instances."""
    rng = np.random.default_rng(derive_seed(master_seed, 2))
    failures = []
    for k in range(instances):
        g = random_graph(rng, max_n)
        nw = WeightAssignment("nodes", draw_distinct(UNIFORM01, g.n, rng))
        z = rng.choice(g.n, size=int(rng.integers(1, min(4, g.n) + 1)), replace=False)
        h_nodes = influence_blocking(g, nw, z).elements
        if not is_blocking(g.adj, nw.values, h_nodes):
            failures.append(f"instance {k}: node i.b.s. not blocking")
        h, back = g.induced(h_nodes)
        ig = greedy_independent_set(g, nw).selected
        ih = greedy_independent_set(h, WeightAssignment("nodes", nw.values[back])).selected
        if {back[u] for u in ih} != ig & set(h_nodes):
            failures.append(f"instance {k}: IS locality broken")
        zz = int(rng.integers(g.n))
        dd = int(rng.integers(0, 5))
        if ibs_contained(g, nw, zz, dd) != ibs_contained_direct(g, nw, zz, dd):
            failures.append(f"instance {k}: node containment tests disagree")
        if g.m:
            ew = WeightAssignment("edges", draw_distinct(UNIFORM01, g.m, rng))
            ze = rng.choice(g.m, size=int(rng.integers(1, min(4, g.m) + 1)), replace=False)
            h_edges = influence_blocking(g, ew, ze).elements
            if not is_blocking(g.line_adj, ew.values, h_edges):
                failures.append(f"instance {k}: edge i.b.s. not blocking")
            he, eback = g.edge_subgraph(h_edges)
            mg = greedy_matching(g, ew).selected
            mh = greedy_matching(he, WeightAssignment("edges", ew.values[eback])).selected
            mapped = {g.edges[eback[he.edge_id(u, v)]] for u, v in mh}
            if mapped != {e for e in mg if g.edge_id(*e) in h_edges}:
                failures.append(f"instance {k}: matching locality broken")
            ez = int(rng.integers(g.m))
            if ibs_contained(g, ew, ez, dd) != ibs_contained_direct(g, ew, ez, dd):
                failures.append(f"instance {k}: edge containment tests disagree")
    return Report("ibs", [dict(instances=instances, failures=len(failures))], not failures, dict(instances=instances, seed=master_seed), failures)


def verify_recursion(rs=(3, 4, 5), dmax: int = 12) -> Report:
    rows = []
    failures = []
    for r in rs:
        rep = recursion_report(r, dmax)
        rows.extend(rep.rows)
        failures.extend(rep.failures)
        for row in rep.rows[1:]:
            if abs(row["mean_err_x"]) > 1e-9 + row["tail_x"] or abs(row["mean_err_y"]) > 1e-9 + row["tail_y"]:
                failures.append(f"mean drift r={r} d={row['d']}")
    return Report("recursion", rows, not failures, dict(r=list(rs), dmax=dmax), failures)


SUITES = {"bonus": verify_bonus, "ibs": verify_ibs, "recursion": verify_recursion}


def verify(suite: str) -> list[Report]:
    names = list(SUITES) if suite == "all" else [suite]
    return [SUITES[name]() for name in names]
