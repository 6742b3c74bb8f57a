import random

import pytest

from domkernel.errors import InputError, CapacityError
from domkernel.graph import Graph, is_dominating_set
from domkernel.treedec import heuristic_decomposition, normalize
from domkernel.solvers import (DS, CDS, minimum_ds_size, threshold_or_inf,
                               ds_opt_bruteforce)
from domkernel.reducer import (build_apex_context, irrelevant_vertices,
                               irrelevant_vertex_pass, two_dom_witness,
                               balanced_separator,
                               cover_component_candidates,
                               bounded_degree_candidate,
                               separator_candidate, kernelize,
                               default_table, NO_PARAMETER)
from domkernel.protrusion import verify_protrusion, replace_protrusion


def star(leaves):
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def path(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def random_graph(rng, n, p):
    edges = [(u, v) for u in range(n) for v in range(u + 1, n)
             if rng.random() < p]
    return Graph(n, edges)


def random_connected(rng, n, p):
    edges = set()
    order = list(range(n))
    rng.shuffle(order)
    for a, b in zip(order, order[1:]):
        edges.add((min(a, b), max(a, b)))
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                edges.add((u, v))
    return Graph(n, sorted(edges))


def hub_with_clique(leaves):
    # hub 0, clique 1..5, a pendant on each clique vertex, then hub leaves
    edges = [(0, i) for i in range(1, 6)]
    edges += [(i, j) for i in range(1, 6) for j in range(i + 1, 6)]
    edges += [(i, i + 5) for i in range(1, 6)]
    edges += [(0, w) for w in range(11, 11 + leaves)]
    return Graph(11 + leaves, edges)


def instance_answer(g, k, problem):
    size = minimum_ds_size(g) if problem == DS else threshold_or_inf(
        g, CDS)
    return size <= k


def result_answer(res, problem):
    if res.certificate == "no":
        return False
    size = (minimum_ds_size(res.graph) if problem == DS
            else threshold_or_inf(res.graph, CDS))
    return size <= res.k


# ---------------------------------------------------------------------------
# apex census


def test_apex_census_star_frozen():
    g = star(12)
    ctx = build_apex_context(g, {0}, {0})
    assert ctx.feasible == (frozenset({0}),)
    assert ctx.witnesses == {frozenset({0}): frozenset({0})}
    assert ctx.reps == frozenset({0})
    assert irrelevant_vertices(ctx) == frozenset(range(1, 13))


def test_apex_census_rejections():
    g = star(12)
    with pytest.raises(InputError):
        build_apex_context(g, {0}, {1})  # {1} does not dominate
    wide = Graph(10, [(i, j) for i in range(9) for j in range(i + 1, 10)])
    with pytest.raises(CapacityError):
        build_apex_context(wide, set(range(9)), {0})
    big = star(30)
    with pytest.raises(CapacityError):
        build_apex_context(big, {0}, {0})


def test_budget_stops_sequential_earlier_than_batch():
    # the batch deletes every leaf in one sweep; the sequential pass
    # stops once the no-apex subset turns feasible for the shrunk body
    g = star(12)
    batch, kept_b = irrelevant_vertex_pass(g, {0}, {0}, mode="batch")
    assert batch.n == 1 and kept_b == [0]
    seq, kept_s = irrelevant_vertex_pass(g, {0}, {0}, mode="sequential")
    assert seq.n == 7
    assert kept_s == [0, 7, 8, 9, 10, 11, 12]
    assert minimum_ds_size(batch) == minimum_ds_size(g) == 1
    assert minimum_ds_size(seq) == 1
    with pytest.raises(InputError):
        irrelevant_vertex_pass(g, {0}, {0}, mode="eager")


def test_apex_pass_keeps_needed_structure():
    g = hub_with_clique(13)
    small, kept = irrelevant_vertex_pass(g, {0}, set(range(6)))
    # only hub leaves 11 and 12 go; the clique and its pendants stay
    assert small.n == 22
    assert kept == [v for v in range(24) if v not in (11, 12)]
    assert minimum_ds_size(small) == minimum_ds_size(g) == 6


def test_two_dom_witness_covers_far_zone():
    # hub 0 over 1..6, then a tail 6-7-8-9 outside the hub's reach
    edges = [(0, i) for i in range(1, 7)] + [(6, 7), (7, 8), (8, 9)]
    g = Graph(10, edges)
    ctx = build_apex_context(g, {0}, {0, 8})
    q = two_dom_witness(ctx)
    expect = set(ctx.reps) | (ctx.small_ds - ctx.apexes)
    for witness in ctx.witnesses.values():
        expect |= witness
    assert q == frozenset(expect)
    # independent check of the claim on the apex-free graph
    sub, mapping = g.remove_vertices(ctx.apexes)
    back = {old: new for new, old in enumerate(mapping)}
    dist = sub.bfs_distances([back[v] for v in q if v != 0])
    for v in range(g.n):
        if v != 0 and 0 not in g.adj[v]:
            assert 0 <= dist[back[v]] <= 2


# ---------------------------------------------------------------------------
# balanced separators


def test_balanced_separator_path_frozen():
    g = path(9)
    td = normalize(heuristic_decomposition(g))
    split = balanced_separator(g, td)
    assert split.node == 3
    assert split.separator == frozenset({3, 4})
    assert split.side1 == frozenset({5, 6, 7, 8})
    assert split.side2 == frozenset({0, 1, 2})
    assert split.balanced


def test_balanced_separator_weight_fallback():
    # one heavy endpoint: no bag hits the one-third band, and the bag
    # isolating the heavy vertex is the only weight-legal centroid
    g = path(3)
    td = normalize(heuristic_decomposition(g))
    split = balanced_separator(g, td, weights=[3, 1, 1])
    assert not split.balanced
    assert split.separator == frozenset({0, 1})
    assert split.side1 == frozenset({2})
    assert split.side2 == frozenset()


def test_balanced_separator_rejections():
    g = path(5)
    other = path(6)
    td = normalize(heuristic_decomposition(other))
    with pytest.raises(InputError):
        balanced_separator(g, td)
    own = normalize(heuristic_decomposition(g))
    with pytest.raises(InputError):
        balanced_separator(g, own, weights=[1, 1])
    with pytest.raises(InputError):
        balanced_separator(g, own, weights=[1, 1, -1, 1, 1])


def test_balanced_separator_random_properties():
    rng = random.Random(20260818)
    for _ in range(30):
        n = rng.randint(3, 16)
        g = random_graph(rng, n, 0.3)
        td = normalize(heuristic_decomposition(g))
        split = balanced_separator(g, td)
        assert split.separator == td.bags[split.node]
        rest = frozenset(range(n)) - split.separator
        assert split.side1 | split.side2 == rest
        assert not split.side1 & split.side2
        for u in split.side1:
            assert not g.adj[u] & split.side2
        if split.balanced:
            total = float(n)
            body = total - len(split.separator)
            for side in (split.side1, split.side2):
                assert body / 3 - 1e-9 <= len(side) <= 2 * body / 3 + 1e-9
        again = balanced_separator(g, td)
        assert again == split


# ---------------------------------------------------------------------------
# piece candidates


def test_cover_sweep_frozen():
    g = path(9)
    found = cover_component_candidates(g, {1, 4, 7}, 3, 2)
    assert [sorted(p.vertices) for p in found] == [[1, 2, 3, 4],
                                                   [4, 5, 6, 7]]
    assert all(p.witness == p.boundary for p in found)
    assert all(verify_protrusion(g, p) == "ok" for p in found)
    shielded = cover_component_candidates(g, {1, 4, 7}, 3, 2,
                                          protected={3})
    assert [sorted(p.vertices) for p in shielded] == [[4, 5, 6, 7]]


def test_cover_sweep_never_proposes_whole_graph():
    # hub dominates a cycle, so the single leftover component spans
    # everything else; that proposal must be suppressed
    n = 8
    edges = [(i, (i + 1) % (n - 1)) for i in range(n - 1)]
    edges += [(n - 1, i) for i in range(n - 1)]
    g = Graph(n, edges)
    assert is_dominating_set(g, {n - 1})
    assert cover_component_candidates(g, {n - 1}, 2, 3) == []


def fan_instance():
    # path 0..4 fanned by 5 (over 0,1,2) and 6 (over 2,3,4), with a
    # shared handle 7; {5, 6, 7} dominates everything
    edges = [(i, i + 1) for i in range(4)]
    edges += [(5, 0), (5, 1), (5, 2), (6, 2), (6, 3), (6, 4), (5, 7),
              (6, 7)]
    return Graph(8, edges)


def test_bounded_degree_candidate_fan():
    g = fan_instance()
    table = default_table(DS)
    cover = {5, 6, 7}
    found = bounded_degree_candidate(g, range(g.n), cover, 10, table)
    assert found is not None
    assert found.vertices == frozenset({0, 1, 2, 3, 4, 5, 6})
    assert found.witness == frozenset({5, 6})
    assert verify_protrusion(g, found) == "ok"
    # a low degree ceiling pulls the fan centers out of the pieces
    assert bounded_degree_candidate(g, range(g.n), cover, 3, table) is None


def test_separator_candidate_takes_small_interface_region():
    g = fan_instance()
    table = default_table(DS)
    region = frozenset(range(7))  # everything but the handle
    found = separator_candidate(g, region, {5, 6, 7}, table)
    assert found is not None
    assert found.vertices == region
    assert found.boundary == frozenset({5, 6})
    assert verify_protrusion(g, found) == "ok"


def three_tails(length):
    # K4 core with a tail hanging off vertices 1, 2, and 3; the tail
    # union is a region whose interface (the three anchors) overflows
    # the table, so finding a piece requires the balanced descent
    edges = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    v = 4
    tails = []
    for c in (1, 2, 3):
        chain = list(range(v, v + length))
        edges.append((c, chain[0]))
        edges += [(chain[i], chain[i + 1]) for i in range(length - 1)]
        tails += chain
        v += length
    return Graph(v, edges), frozenset(tails)


def test_separator_candidate_descends_three_tails():
    g, region = three_tails(6)
    table = default_table(DS)
    d = ds_opt_bruteforce(g)
    found = separator_candidate(g, region, d, table)
    assert found is not None
    assert found.vertices == frozenset(range(4, 16))
    assert found.boundary == frozenset({4, 10})
    assert verify_protrusion(g, found) == "ok"
    swap = replace_protrusion(g, found, table)
    assert minimum_ds_size(swap.graph) == minimum_ds_size(g) + \
        swap.constant


def test_separator_candidate_descent_sizes():
    table = default_table(DS)
    for length in (5, 6):
        g, region = three_tails(length)
        d = ds_opt_bruteforce(g)
        found = separator_candidate(g, region, d, table)
        assert found is not None
        assert len(found.boundary) <= table.t
        assert table.xi < len(found.vertices) < g.n
        assert verify_protrusion(g, found) == "ok"
        swap = replace_protrusion(g, found, table)
        assert minimum_ds_size(swap.graph) == minimum_ds_size(g) + \
            swap.constant


def test_separator_candidate_random_never_lies():
    # uniform sparse graphs rarely contain a qualifying piece; the
    # point here is that whatever comes back is a verified claim
    rng = random.Random(404)
    table = default_table(DS)
    for _ in range(40):
        n = rng.randint(6, 15)
        g = random_graph(rng, n, 0.25)
        found = separator_candidate(g, range(n), ds_opt_bruteforce(g),
                                    table)
        if found is None:
            continue
        assert verify_protrusion(g, found) == "ok"
        assert len(found.boundary) <= table.t
        assert table.xi < len(found.vertices) < n


# ---------------------------------------------------------------------------
# the driver


def test_kernelize_path_frozen():
    g = path(12)
    res = kernelize(g, 4)
    assert res.certificate == "kernel"
    assert res.graph.n == 3
    assert res.k == 1
    assert res.constant == -3
    assert res.k == 4 + res.constant
    assert minimum_ds_size(res.graph) == minimum_ds_size(g) + res.constant
    assert [s.action for s in res.trace] == ["subtree"]
    assert sum(s.removed for s in res.trace) == g.n - res.graph.n


def test_kernelize_immediate_no():
    res = kernelize(path(12), 0)
    assert res.certificate == "no"
    assert res.k == NO_PARAMETER
    assert res.graph.n == 0
    assert res.trace[-1].action == "no_certificate"


def test_kernelize_long_path_no():
    # gamma(P30) = 10 but the certified cover bound only allows 5k
    res = kernelize(path(30), 1)
    assert res.certificate == "no"


def test_kernelize_apex_instance_frozen():
    g = hub_with_clique(13)
    res = kernelize(g, 6)
    assert res.certificate == "kernel"
    actions = [s.action for s in res.trace]
    assert "apex_deletion" in actions
    step = res.trace[actions.index("apex_deletion")]
    assert step.removed == 2
    assert res.graph.n == 22
    assert res.constant == 0
    assert minimum_ds_size(res.graph) == minimum_ds_size(g) == 6


def test_kernelize_hub_capacity_fixpoint():
    # every vertex sits next to the hub, so no piece has a boundary
    # the stock table can absorb; the driver must settle without lying
    edges = [(i, i + 1) for i in range(19)] + [(i, 20) for i in range(20)]
    g = Graph(21, edges)
    res = kernelize(g, 2)
    assert res.certificate == "kernel"
    assert res.graph.n == g.n
    assert res.constant == 0
    assert res.trace == ()


def test_kernelize_rejections():
    g = path(6)
    with pytest.raises(InputError):
        kernelize(g, -1)
    with pytest.raises(InputError):
        kernelize(g, 2, h=0)
    with pytest.raises(InputError):
        kernelize(g, 2, problem="vertex cover")
    two = Graph(4, [(0, 1), (2, 3)])
    with pytest.raises(InputError):
        kernelize(two, 2, problem=CDS)
    with pytest.raises(InputError):
        kernelize(g, 2, table=default_table(CDS))
    foreign = normalize(heuristic_decomposition(path(7)))
    with pytest.raises(InputError):
        kernelize(g, 2, td=foreign)


def test_kernelize_round_budget_and_fixpoint():
    g = path(12)
    untouched = kernelize(g, 4, max_rounds=0)
    assert untouched.graph is g and untouched.k == 4
    assert untouched.certificate == "kernel"
    first = kernelize(g, 4)
    again = kernelize(first.graph, first.k)
    assert again.graph.n == first.graph.n
    assert again.constant == 0


def test_kernelize_accepts_prepared_decomposition():
    g = path(12)
    td = normalize(heuristic_decomposition(g))
    res = kernelize(g, 4, td=td)
    assert res.certificate == "kernel"
    assert minimum_ds_size(res.graph) == minimum_ds_size(g) + res.constant


def test_kernelize_deterministic():
    rng = random.Random(5)
    g = random_graph(rng, 12, 0.3)
    a = kernelize(g, 3)
    b = kernelize(g, 3)
    assert a.graph.n == b.graph.n
    assert a.graph.edges() == b.graph.edges()
    assert a.k == b.k and a.trace == b.trace


def test_kernelize_ds_answers_preserved():
    rng = random.Random(99)
    for _ in range(50):
        n = rng.randint(4, 13)
        g = random_graph(rng, n, 0.25)
        k = rng.randint(0, 5)
        res = kernelize(g, k)
        assert result_answer(res, DS) == instance_answer(g, k, DS)
        if res.certificate == "kernel":
            assert res.k == k + res.constant
            assert minimum_ds_size(res.graph) == \
                minimum_ds_size(g) + res.constant


def random_tree(rng, n):
    return Graph(n, [(rng.randrange(i), i) for i in range(1, n)])


def test_kernelize_shrinks_trees():
    # trees are all tail and no core, the friendliest shape for the
    # replacement machinery; most of them should actually get smaller
    rng = random.Random(7)
    shrunk = 0
    for _ in range(15):
        n = rng.randint(8, 14)
        g = random_tree(rng, n)
        k = rng.randint(2, 5)
        res = kernelize(g, k)
        assert result_answer(res, DS) == instance_answer(g, k, DS)
        if res.certificate == "kernel":
            assert minimum_ds_size(res.graph) == \
                minimum_ds_size(g) + res.constant
            if res.graph.n < g.n:
                shrunk += 1
    assert shrunk >= 10


def test_kernelize_cds_answers_preserved():
    rng = random.Random(123)
    for _ in range(15):
        n = rng.randint(3, 11)
        g = random_connected(rng, n, 0.25)
        k = rng.randint(0, 5)
        res = kernelize(g, k, problem=CDS)
        assert result_answer(res, CDS) == instance_answer(g, k, CDS)
        if res.certificate == "kernel":
            assert res.k == k + res.constant


def test_kernelize_cds_shrinks_a_tail():
    # triangle with a long tail: the tail subtree fits the connected
    # machinery's size guards, so the kernel actually gets smaller
    edges = [(0, 1), (0, 2), (1, 2)] + [(i, i + 1) for i in range(2, 9)]
    g = Graph(10, edges)
    res = kernelize(g, 7, problem=CDS)
    assert res.certificate == "kernel"
    assert res.graph.n < g.n
    before = threshold_or_inf(g, CDS)
    after = threshold_or_inf(res.graph, CDS)
    assert after == before + res.constant
