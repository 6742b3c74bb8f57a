"""Acceptance suite: every end-to-end property the package promises,
replayed against brute force at desk scale.

Each test prints a single PASS line with its measured numbers once all
of its assertions held (run pytest with -s to watch them stream). The
floors on instance counts are asserted, so a green run certifies both
the properties and the breadth they were checked at.
"""

import random

from domkernel.approx import approx_colored_ds, duchet_connect
from domkernel.boundaried import (BoundariedGraph, IncompletenessError,
                                  definitional_equivalence_oracle,
                                  enumerate_boundaried, glue,
                                  normalize_signature,
                                  reduce_via_representatives, signature,
                                  signatures_equivalent)
from domkernel.graph import (Graph, closed_neighborhood,
                             generate_instance,
                             is_connected_dominating_set,
                             is_dominating_set)
from domkernel.reducer import balanced_separator, default_table, kernelize
from domkernel.report import relabelled, scaling_points, seed_constants
from domkernel.slicedec import (build_slice_decomposition,
                                mark_heavy_edges, marked_subtree,
                                tree_stats)
from domkernel.solvers import (CDS, DS, INF, ColoredInstance,
                               cds_opt_bruteforce, ds_opt_bruteforce,
                               ds_treewidth_dp, minimum_ds_size,
                               threshold_or_inf)
from domkernel.treedec import heuristic_decomposition, normalize


def _planar(n, seed):
    return generate_instance("random_planar", {"n": n}, seed=seed)


def _bounded(n, seed):
    return generate_instance("bounded_degree",
                             {"n": n, "max_degree": 4}, seed=seed)


def _subdivided(h, ell):
    return generate_instance("subdivided_clique", {"h": h, "ell": ell})


def _random_graph(rng, n, p):
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)
             if rng.random() < p]
    return Graph(n, edges)


def _random_tree(rng, n):
    return Graph(n, [(rng.randrange(i), i) for i in range(1, n)])


def _connected(maker, n, seed):
    for tries in range(50):
        g = maker(n, seed + 1000 * tries)
        if g.n > 0 and g.is_connected():
            return g
    raise AssertionError("no connected instance after 50 draws")


# ---------------------------------------------------------------------------
# kernel soundness, both problems


def test_kernel_answers_preserved_ds():
    rng = random.Random(11)
    instances = []
    for i in range(200):
        instances.append(_planar(rng.randint(4, 24), i))
    for i in range(200):
        instances.append(_bounded(rng.randint(4, 24), 1000 + i))
    seeds_of_fixed = [_subdivided(4, 1), _subdivided(4, 2),
                      _subdivided(4, 3), _subdivided(5, 1)]
    for s in range(25):
        for base in seeds_of_fixed:
            instances.append(relabelled(base, s))
    assert len(instances) >= 500
    pairs = 0
    kernel_gamma = {}
    for g in instances:
        gamma = minimum_ds_size(g)
        for k in range(g.n + 1):
            res = kernelize(g, k)
            if res.certificate == "kernel":
                key = (res.graph.n, tuple(res.graph.edges()))
                if key not in kernel_gamma:
                    kernel_gamma[key] = minimum_ds_size(res.graph)
                got = kernel_gamma[key] <= res.k
            else:
                got = False
            assert got == (gamma <= k), \
                "answer flipped at n=%d k=%d" % (g.n, k)
            pairs += 1
    print("PASS kernel soundness (ds): %d instances, %d (G,k) pairs, "
          "0 mismatches" % (len(instances), pairs))


def test_kernel_answers_preserved_cds():
    rng = random.Random(12)
    instances = []
    for i in range(200):
        instances.append(_connected(_planar, rng.randint(4, 18), i))
    for i in range(200):
        instances.append(_connected(_bounded, rng.randint(4, 18),
                                    7000 + i))
    for s in range(34):
        for base in (_subdivided(4, 1), _subdivided(4, 2),
                     _subdivided(5, 1)):
            instances.append(relabelled(base, s))
    assert len(instances) >= 500
    pairs = 0
    kernel_opt = {}
    for g in instances:
        opt = len(cds_opt_bruteforce(g))
        for k in range(g.n + 1):
            res = kernelize(g, k, problem=CDS)
            if res.certificate == "kernel":
                key = (res.graph.n, tuple(res.graph.edges()))
                if key not in kernel_opt:
                    kernel_opt[key] = threshold_or_inf(res.graph, CDS)
                got = kernel_opt[key] <= res.k
            else:
                got = False
            assert got == (opt <= k), \
                "answer flipped at n=%d k=%d" % (g.n, k)
            pairs += 1
    print("PASS kernel soundness (cds): %d instances, %d (G,k) pairs, "
          "0 mismatches" % (len(instances), pairs))


# ---------------------------------------------------------------------------
# approximation factor and connector budget


def test_cover_factor_and_connector_budget():
    rng = random.Random(21)
    instances = []
    for i in range(70):
        instances.append(_planar(rng.randint(4, 24), i))
    for i in range(70):
        instances.append(_bounded(rng.randint(4, 24), 3000 + i))
    for _ in range(60):
        instances.append(_random_tree(rng, rng.randint(4, 24)))
    assert len(instances) >= 200
    connected_checked = 0
    for g in instances:
        dec = normalize(heuristic_decomposition(g))
        h_eff = max(1, dec.adhesion())
        res = approx_colored_ds(ColoredInstance.fresh(g), dec, h_eff)
        assert is_dominating_set(g, res.solution)
        assert res.certified, "inner solver fell back under the guard"
        assert res.eta == 5 * h_eff
        opt = minimum_ds_size(g)
        assert len(res.solution) <= res.eta * opt
        if g.n > 0 and g.is_connected():
            q = res.solution
            sub, mapping = g.induced_subgraph(q)
            rho = len(sub.connected_components())
            z = duchet_connect(g, q)
            assert len(z) <= max(2 * (rho - 1), 0)
            assert is_connected_dominating_set(g, q | z)
            connected_checked += 1
    assert connected_checked >= 100
    print("PASS approximation: %d instances within factor, %d connector "
          "budgets held" % (len(instances), connected_checked))


# ---------------------------------------------------------------------------
# signature classes against glued optima over the whole small universe


def _threshold_vector(bg, fillers, problem):
    return [threshold_or_inf(glue(bg, f)[0], problem) for f in fillers]


def _vector_shift(vec_a, vec_b):
    """Constant c with vec_b = vec_a + c, ignoring both-infinite slots;
    None when no single constant works."""
    c = None
    for x, y in zip(vec_a, vec_b):
        if x is INF and y is INF:
            continue
        if x is INF or y is INF:
            return None
        if c is None:
            c = y - x
        elif c != y - x:
            return None
    return 0 if c is None else c


def test_signature_classes_match_glued_optima():
    universe = enumerate_boundaried(2, 5)
    summary = []
    for problem in (DS, CDS):
        sigs = [signature(bg, problem) for bg in universe]
        vectors = [_threshold_vector(bg, universe, problem)
                   for bg in universe]
        grouped = {}
        for i, sig in enumerate(sigs):
            grouped.setdefault(normalize_signature(sig)[0], []).append(i)
        classes = {members[0]: members for members in grouped.values()}
        checked = 0
        for rep_i, members in classes.items():
            for i in members:
                c_sig = signatures_equivalent(sigs[rep_i], sigs[i])
                c_def = _vector_shift(vectors[rep_i], vectors[i])
                assert c_def == c_sig, \
                    "class transfer constant lied (%s)" % problem
                checked += 1
        reps = sorted(classes)
        merged = 0
        for a in range(len(reps)):
            for b in range(a + 1, len(reps)):
                if _vector_shift(vectors[reps[a]],
                                 vectors[reps[b]]) is not None:
                    merged += 1
        spot = random.Random(31)
        for _ in range(5):
            rep_i = spot.choice(reps)
            i = spot.choice(classes[rep_i])
            c = definitional_equivalence_oracle(
                universe[rep_i], universe[i], problem, t=2,
                filler_size_limit=5)
            assert c == signatures_equivalent(sigs[rep_i], sigs[i])
        summary.append("%s %d graphs / %d classes / %d member checks / "
                       "%d class pairs merged by optima"
                       % (problem, len(universe), len(classes), checked,
                          merged))
    print("PASS signature classes: " + "; ".join(summary))


# ---------------------------------------------------------------------------
# replacement re-verification against every stored context


def _random_boundaried(rng, n, labels_count, p):
    g = _random_graph(rng, n, p)
    chosen = rng.sample(range(n), labels_count)
    labels = {lab: v for lab, v in enumerate(sorted(chosen), start=1)}
    return BoundariedGraph(g, labels)


def test_replacement_reverifies_thresholds():
    rng = random.Random(5)
    checked = 0
    skipped = 0
    for problem in (DS, CDS):
        table = default_table(problem)
        for _ in range(40):
            n = rng.randint(3, 8)
            bg = _random_boundaried(rng, n, rng.randint(1, 2), 0.35)
            try:
                rep, c = reduce_via_representatives(bg, table)
            except IncompletenessError:
                skipped += 1
                continue
            for y in table.reps:
                lhs = threshold_or_inf(glue(bg, y)[0], problem)
                rhs = threshold_or_inf(glue(rep, y)[0], problem)
                if lhs is INF and rhs is INF:
                    continue
                assert lhs is not INF and rhs is not INF
                assert rhs == lhs + c, \
                    "replacement shifted a glued optimum wrongly"
                checked += 1
    assert checked >= 1000
    print("PASS replacement thresholds: %d glued contexts re-verified, "
          "%d inputs outside the table" % (checked, skipped))


# ---------------------------------------------------------------------------
# structural facts: tree shapes, markings, slices, separators


def test_tree_marking_and_separator_facts():
    rng = random.Random(41)
    for _ in range(1000):
        n = rng.randint(1, 40)
        edges = [(rng.randrange(i), i) for i in range(1, n)]
        got = tree_stats(range(n), edges)
        assert got.leaves + got.branch_nodes + got.link_nodes == n
        assert got.branch_nodes <= max(got.leaves - 1, 0)
        assert n == 1 or got.link_paths <= 2 * got.leaves - 1

    markings = 0
    while markings < 500:
        n = rng.randint(3, 16)
        g = _random_graph(rng, n, rng.choice((0.15, 0.3, 0.5)))
        td = normalize(heuristic_decomposition(g))
        d = frozenset(v for v in range(n) if rng.random() < 0.4)
        h = rng.randint(1, 3)
        heavy = mark_heavy_edges(g, td, d, h)
        nodes = marked_subtree(td, heavy)
        if heavy:
            # reachability over the marked edges alone must span them
            reach = {nodes[0]}
            grew = True
            while grew:
                grew = False
                for p, c in heavy:
                    if (p in reach) != (c in reach):
                        reach.update((p, c))
                        grew = True
            assert set(nodes) == reach
        markings += 1

    slices_seen = 0
    for _ in range(100):
        n = rng.randint(4, 18)
        g = _random_graph(rng, n, 0.25)
        td = normalize(heuristic_decomposition(g))
        d = frozenset(ds_opt_bruteforce(g))
        h = max(1, td.adhesion())
        dec = build_slice_decomposition(g, td, d, h)
        everything = frozenset(range(n))
        covered = frozenset().union(*(s.region for s in dec.slices))
        assert covered == everything
        for s in dec.slices:
            outside = everything - s.region
            for v in s.region - s.ports:
                assert not g.adj[v] & outside
            assert s.region <= closed_neighborhood(g, s.cover)
            slices_seen += 1

    separators = 0
    banded = 0
    while separators < 200:
        n = rng.randint(4, 18)
        g = _random_graph(rng, n, 0.3)
        td = normalize(heuristic_decomposition(g))
        split = balanced_separator(g, td)
        body = g.n - len(split.separator)
        assert split.side1 | split.side2 | split.separator == \
            frozenset(range(n))
        assert not split.side1 & split.side2
        for u in split.side1:
            assert not g.adj[u] & split.side2
        if split.balanced and body > 0:
            for side in (split.side1, split.side2):
                assert body / 3 <= len(side) <= 2 * body / 3
            banded += 1
        separators += 1
    print("PASS structure: 1000 tree shapes, 500 markings, %d slices, "
          "%d separators (%d inside the band)"
          % (slices_seen, separators, banded))


# ---------------------------------------------------------------------------
# decomposition solver against search


def test_dp_agrees_with_search():
    rng = random.Random(61)
    checked = 0
    for i in range(200):
        g = _planar(rng.randint(4, 18), i)
        td = normalize(heuristic_decomposition(g))
        assert ds_treewidth_dp(g, td) == minimum_ds_size(g)
        checked += 1
    for i in range(150):
        g = _bounded(rng.randint(4, 18), 5000 + i)
        td = normalize(heuristic_decomposition(g))
        assert ds_treewidth_dp(g, td) == minimum_ds_size(g)
        checked += 1
    for _ in range(150):
        g = _random_graph(rng, rng.randint(4, 18),
                          rng.choice((0.2, 0.3, 0.4)))
        td = normalize(heuristic_decomposition(g))
        assert ds_treewidth_dp(g, td) == minimum_ds_size(g)
        checked += 1
    assert checked >= 500
    print("PASS decomposition solver: %d instances agree with search"
          % checked)


# ---------------------------------------------------------------------------
# measured scaling


def test_kernel_size_scales_linearly():
    lines = []
    for family in ("comb", "subdivided_grid"):
        points = scaling_points(family, range(2, 13), (0, 1, 2))
        cs = seed_constants(points, family)
        spread = max(cs.values()) / min(cs.values())
        assert spread <= 1.5, "relabelling moved the constant too much"
        big_c = max(cs.values())
        for p in points:
            assert p.kernel_n <= big_c * p.k
        xs = [float(p.k) for p in points]
        ys = [float(p.kernel_n) for p in points]
        from statistics import linear_regression
        slope, _ = linear_regression(xs, ys)
        lines.append("%s C=%.2f slope=%.2f spread=%.2f"
                     % (family, big_c, slope, spread))
    print("PASS scaling: " + "; ".join(lines))
