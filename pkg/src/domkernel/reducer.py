"""Reduction driver: shrink a parameterized instance without changing
its answer.

Each round recomputes a decomposition and an approximate dominating
set, then tries the rewrites in a fixed order: cut a quiet stretch out
of a long decomposition path, swap a whole hanging subtree for its
table representative, sweep the slice structure for replaceable
pieces, and, on graphs that are one apex-structured piece, delete
vertices the apex analysis proves unnecessary. Every rewrite either
preserves the optimum exactly or shifts it by a recorded constant, so
the pair (graph, parameter) keeps the same yes/no answer throughout.

The driver only ever applies one rewrite per round and then rebuilds
everything from the new graph. That is slower than batching but it
keeps the correctness argument local to a single replacement; nothing
downstream has to reason about stale decompositions.
"""

from collections import namedtuple

from .errors import (InputError, CapacityError, InvariantError,
                     IncompletenessError, ReplacementRefused)
from .graph import (Graph, closed_neighborhood, open_neighborhood,
                    r_dominated_set, is_dominating_set)
from .treedec import (normalize, validate, heuristic_decomposition,
                      classify_node, LOW_HIGH_DEGREE, MINOR_STRUCTURED)
from .solvers import DS, CDS, DS_GUARD, ColoredInstance, colored_ds_opt
from .approx import approx_colored_ds, approx_cds
from .boundaried import RepresentativeTable, enumerate_representatives
from .protrusion import (DS_KIND, make_protrusion, compute_boundary,
                         replace_protrusion, find_large_protrusion)
from .slicedec import long_path_reduction, build_slice_decomposition

# Feasibility scans every apex subset, so this caps an exponent.
APEX_GUARD = 8

NO_PARAMETER = -1


# ---------------------------------------------------------------------------
# apex analysis
#
# On a piece whose difficulty is concentrated in a small apex set A,
# a vertex w outside A is unnecessary when every budget-feasible way
# of using the apexes already covers the whole non-apex neighborhood
# of w. Deleting such a w keeps the domination number unchanged: any
# optimum using w can trade it for a stored representative, and any
# optimum of the smaller graph still covers w through the apexes.

ApexContext = namedtuple("ApexContext",
                         ["graph", "apexes", "small_ds", "feasible",
                          "witnesses", "reps"])


def _subsets(items):
    items = sorted(items)
    for bits in range(1 << len(items)):
        yield frozenset(items[i] for i in range(len(items))
                        if bits >> i & 1)


def build_apex_context(g, apexes, small_ds, guard=DS_GUARD):
    """Feasibility census over apex subsets.

    A subset A' is feasible when the graph minus the other apexes can
    be dominated by A' plus at most 2(|small_ds| + 2) - |A'| further
    vertices. The census keeps one witness per feasible subset and one
    representative vertex per single-vertex-dominatable subset; both
    sets are off limits for deletion.
    """
    apexes = frozenset(apexes)
    small_ds = frozenset(small_ds)
    for v in apexes | small_ds:
        g._check_vertex(v)
    if len(apexes) > APEX_GUARD:
        raise CapacityError("apex set of %d exceeds the census budget %d"
                            % (len(apexes), APEX_GUARD))
    if not is_dominating_set(g, small_ds):
        raise InputError("the working set must dominate the graph")
    budget = 2 * (len(small_ds) + 2)
    feasible = []
    witnesses = {}
    for chosen in _subsets(apexes):
        cap = budget - len(chosen)
        if cap < 0:
            continue
        sub, mapping = g.remove_vertices(apexes - chosen)
        back = {old: new for new, old in enumerate(mapping)}
        inst = ColoredInstance.fresh(sub, (back[a] for a in chosen))
        extra = colored_ds_opt(inst, cap=cap, guard=guard)
        if extra is None:
            continue
        feasible.append(chosen)
        witnesses[chosen] = chosen | frozenset(mapping[i] for i in extra)
    # the working set itself always fits the budget
    assert small_ds & apexes in witnesses
    reps = set()
    for chosen in _subsets(apexes):
        if not chosen:
            continue
        for v in range(g.n):
            if chosen <= g.adj[v] | {v}:
                reps.add(v)
                break
    feasible.sort(key=sorted)
    return ApexContext(g, apexes, small_ds, tuple(feasible), witnesses,
                       frozenset(reps))


def two_dom_witness(ctx):
    """Collect every witness, representative, and working vertex, and
    check that the collection 2-dominates the apex-free zone once the
    apexes are gone. The reduction's size argument leans on this set
    being both small and spread out, so a violation is an internal
    error, not a soft failure."""
    g = ctx.graph
    q = set(ctx.reps) | (ctx.small_ds - ctx.apexes)
    for witness in ctx.witnesses.values():
        q |= witness
    far = frozenset(range(g.n)) - closed_neighborhood(g, ctx.apexes)
    sub, mapping = g.remove_vertices(ctx.apexes)
    back = {old: new for new, old in enumerate(mapping)}
    inside = frozenset(back[v] for v in q if v not in ctx.apexes)
    covered = r_dominated_set(sub, inside, 2) if inside else frozenset()
    for v in sorted(far):
        if back[v] not in covered:
            raise InvariantError("vertex %d escapes the witness core" % v)
    return frozenset(q)


def irrelevant_vertices(ctx):
    """Vertices whose deletion the census justifies, in the current
    graph. Protected vertices (apexes, working set, representatives)
    never qualify."""
    g = ctx.graph
    protected = ctx.reps | ctx.small_ds | ctx.apexes
    zones = {chosen: open_neighborhood(g, chosen) - ctx.apexes
             for chosen in ctx.feasible}
    out = []
    for w in range(g.n):
        if w in protected:
            continue
        hood = (g.adj[w] | {w}) - ctx.apexes
        if all(hood <= zones[chosen] for chosen in ctx.feasible):
            out.append(w)
    return frozenset(out)


def irrelevant_vertex_pass(g, apexes, small_ds, mode="sequential",
                           guard=DS_GUARD):
    """Delete unnecessary vertices; returns (graph, kept) with
    kept[new_id] = original id.

    Sequential mode deletes one vertex at a time and redoes the census
    in between, which is the form the exchange argument actually
    covers. Batch mode deletes everything the initial census flags in
    one go; it is faster and the census invariant is still checked,
    but interactions inside the batch are not re-examined, so the
    driver sticks to sequential.
    """
    if mode not in ("sequential", "batch"):
        raise InputError("unknown pass mode %r" % (mode,))
    kept = list(range(g.n))
    if mode == "batch":
        ctx = build_apex_context(g, apexes, small_ds, guard=guard)
        two_dom_witness(ctx)
        drop = irrelevant_vertices(ctx)
        if drop:
            g, kept = g.remove_vertices(drop)
        return g, kept
    apexes = frozenset(apexes)
    small_ds = frozenset(small_ds)
    while True:
        ctx = build_apex_context(g, apexes, small_ds, guard=guard)
        two_dom_witness(ctx)
        drop = irrelevant_vertices(ctx)
        if not drop:
            return g, kept
        g, mapping = g.remove_vertices([min(drop)])
        back = {old: new for new, old in enumerate(mapping)}
        kept = [kept[old] for old in mapping]
        apexes = frozenset(back[a] for a in apexes)
        small_ds = frozenset(back[s] for s in small_ds)


# ---------------------------------------------------------------------------
# balanced separators

SeparatorSplit = namedtuple("SeparatorSplit",
                            ["node", "separator", "side1", "side2",
                             "balanced"])

# exhaustive regrouping is only attempted below this many components
_REGROUP_LIMIT = 20


def _band_grouping(weights, lo, hi):
    """Indices whose weight lands in [lo, hi], or None.

    Greedy first: heaviest component to the lighter side. When that
    misses the band and the component count is small, try every
    subset.
    """
    order = sorted(range(len(weights)), key=lambda i: -weights[i])
    side = []
    side_w = 0
    other_w = 0
    for i in order:
        if side_w <= other_w:
            side.append(i)
            side_w += weights[i]
        else:
            other_w += weights[i]
    if lo <= side_w <= hi:
        return side
    if len(weights) > _REGROUP_LIMIT:
        return None
    for bits in range(1 << len(weights)):
        total = sum(weights[i] for i in range(len(weights))
                    if bits >> i & 1)
        if lo <= total <= hi:
            return [i for i in range(len(weights)) if bits >> i & 1]
    return None


def balanced_separator(g, td, weights=None):
    """Pick a bag that splits the rest of the graph into two sides of
    comparable weight.

    Scans bags in node order and returns the first whose removal
    leaves components groupable into sides within [third, two thirds]
    of the remaining weight. Some graph and weight combinations admit
    no such bag; the classic centroid bag (every component at most
    half the total weight) always exists and is returned with
    balanced=False in that case.
    """
    if td.host != g:
        raise InputError("decomposition belongs to a different graph")
    if weights is None:
        weights = [1] * g.n
    weights = list(weights)
    if len(weights) != g.n:
        raise InputError("need one weight per vertex")
    if any(w < 0 for w in weights):
        raise InputError("weights must be nonnegative")
    total = sum(weights)
    fallback = None
    for t in td.nodes():
        bag = td.bags[t]
        rest, mapping = g.remove_vertices(bag)
        comps = rest.connected_components()
        comp_hosts = [frozenset(mapping[v] for v in comp)
                      for comp in comps]
        comp_w = [sum(weights[v] for v in hosts) for hosts in comp_hosts]
        if any(2 * w > total for w in comp_w):
            continue
        body = total - sum(weights[v] for v in bag)
        picked = _band_grouping(comp_w, body / 3.0, 2.0 * body / 3.0)
        if picked is not None:
            chosen = set(picked)
            side1 = frozenset().union(
                *(comp_hosts[i] for i in chosen)) if chosen else frozenset()
            side2 = frozenset().union(
                *(comp_hosts[i] for i in range(len(comp_hosts))
                  if i not in chosen)) if len(chosen) < len(comp_hosts) \
                else frozenset()
            return SeparatorSplit(t, frozenset(bag), side1, side2, True)
        if fallback is None:
            fallback = (t, frozenset(bag), comp_hosts)
    if fallback is None:
        raise InvariantError("no centroid bag in the decomposition")
    t, bag, comp_hosts = fallback
    side1 = set()
    side2 = set()
    w1 = 0
    w2 = 0
    for hosts in sorted(comp_hosts, key=lambda hs: (-len(hs), sorted(hs))):
        w = sum(weights[v] for v in hosts)
        if w1 <= w2:
            side1 |= hosts
            w1 += w
        else:
            side2 |= hosts
            w2 += w
    return SeparatorSplit(t, bag, frozenset(side1), frozenset(side2), False)


# ---------------------------------------------------------------------------
# piece candidates
#
# The searches below only propose protrusions; the driver applies them
# through the representative table. Witness sets always dominate the
# piece, so every proposal passes certificate verification.


def cover_component_candidates(g, cover, xi, cap, region=None,
                               protected=frozenset()):
    """Protrusions C | N(C) for components C left after removing a set
    that dominates the region. N(C) is simultaneously the boundary and
    a domination witness, which is what makes the sweep sound."""
    verts = frozenset(range(g.n)) if region is None else frozenset(region)
    cover = frozenset(cover)
    allowed = verts - cover
    seen = set()
    out = []
    for s in sorted(allowed):
        if s in seen:
            continue
        comp = {s}
        queue = [s]
        while queue:
            v = queue.pop()
            for u in sorted(g.adj[v]):
                if u in allowed and u not in comp:
                    comp.add(u)
                    queue.append(u)
        seen |= comp
        hood = open_neighborhood(g, comp)
        piece = frozenset(comp) | hood
        # a proposal must leave part of the graph behind
        if len(hood) > cap or len(piece) <= xi or len(piece) >= g.n:
            continue
        if (piece - hood) & protected:
            continue
        out.append(make_protrusion(g, piece, DS_KIND, hood))
    return out


def bounded_degree_candidate(g, region, cover, h_prime, table,
                             protected=frozenset()):
    """First replaceable piece of a region whose structure is carried
    by low degrees. Vertices above the degree threshold are set aside
    with the cover so the leftover components are genuinely shallow."""
    region = frozenset(region)
    hot = frozenset(v for v in region if len(g.adj[v]) > h_prime)
    found = cover_component_candidates(
        g, frozenset(cover) | hot, table.xi, table.t, region=region,
        protected=protected)
    return found[0] if found else None


_DESCENT_LIMIT = 12


def separator_candidate(g, region, cover, table, protected=frozenset()):
    """Replaceable piece found by recursive balanced splitting.

    Descends only while the interface strictly shrinks; when the
    descent stalls, falls back to the cover-component sweep inside the
    current piece.
    """
    region = frozenset(region)
    cover = frozenset(cover)
    interface = compute_boundary(g, region)
    return _descend(g, region, interface, cover, table, protected, 0)


def _descend(g, piece, interface, cover, table, protected, depth):
    interior = piece - interface
    if (len(interface) <= table.t and len(piece) > table.xi
            and len(piece) < g.n and not interior & protected):
        witness = (cover & closed_neighborhood(g, piece)) | interface
        return make_protrusion(g, piece, DS_KIND, witness)
    if depth < _DESCENT_LIMIT and len(piece) > table.xi:
        sub, mapping = g.induced_subgraph(piece)
        dec = normalize(heuristic_decomposition(sub))
        split = balanced_separator(sub, dec)
        cut = frozenset(mapping[v] for v in split.separator)
        for side in (split.side1, split.side2):
            sub_piece = frozenset(mapping[v] for v in side) | cut
            if sub_piece == piece:
                continue
            sub_interface = compute_boundary(g, sub_piece)
            if len(sub_interface) >= len(interface):
                continue
            found = _descend(g, sub_piece, sub_interface, cover, table,
                             protected, depth + 1)
            if found is not None:
                return found
    swept = cover_component_candidates(
        g, cover, table.xi, table.t, region=piece, protected=protected)
    return swept[0] if swept else None


# ---------------------------------------------------------------------------
# the driver

KernelStep = namedtuple("KernelStep",
                        ["action", "detail", "removed", "constant"])

KernelResult = namedtuple("KernelResult",
                          ["graph", "k", "constant", "certificate",
                           "trace", "h", "approx_size", "rounds"])

_TABLE_CACHE = {}

_DEFAULT_TABLE_SPEC = {DS: (2, 5), CDS: (2, 4)}


def _fixture_path(problem, t, size_limit):
    import os

    name = "%s_t%d_s%d.reptable" % (problem, t, size_limit)
    return os.path.join(os.path.dirname(__file__), "fixtures", name)


def default_table(problem):
    """Shared representative table, built once per process.

    A precomputed copy ships with the package; enumeration is the
    fallback so a missing fixture costs time, not correctness.
    """
    if problem not in _DEFAULT_TABLE_SPEC:
        raise InputError("unknown problem %r" % (problem,))
    if problem not in _TABLE_CACHE:
        t, size_limit = _DEFAULT_TABLE_SPEC[problem]
        path = _fixture_path(problem, t, size_limit)
        try:
            with open(path) as fh:
                table = RepresentativeTable.parse(fh.read())
        except OSError:
            table = enumerate_representatives(problem, t, size_limit)
        _TABLE_CACHE[problem] = table
    return _TABLE_CACHE[problem]


def _apply(g, p, table):
    # refusals and table gaps leave the graph alone; they are not errors
    try:
        return replace_protrusion(g, p, table)
    except (ReplacementRefused, IncompletenessError, CapacityError):
        return None


def _try_round(g, dec, d_set, h_eff, table, problem, guard, apex_mode):
    """One rewrite attempt; returns (action, detail, result graph,
    constant) or None at a fixpoint."""
    p = long_path_reduction(g, dec, d_set, h_eff, table.xi)
    if p is not None and len(p.boundary) <= table.t:
        hit = _apply(g, p, table)
        if hit is not None:
            return ("long_path", "stretch of %d" % len(p.vertices),
                    hit.graph, hit.constant)
    p = find_large_protrusion(g, dec, table)
    if p is not None:
        hit = _apply(g, p, table)
        if hit is not None:
            return ("subtree", "piece of %d" % len(p.vertices),
                    hit.graph, hit.constant)
    slices = build_slice_decomposition(g, dec, d_set, h_eff)
    for piece in slices.slices:
        kind = classify_node(dec, piece.head, h_eff)
        if kind.tag == LOW_HIGH_DEGREE:
            cand = bounded_degree_candidate(
                g, piece.region, piece.cover, h_eff + table.xi, table)
        else:
            cand = separator_candidate(
                g, piece.region, piece.cover, table)
        if cand is not None:
            hit = _apply(g, cand, table)
            if hit is not None:
                return ("slice", "%s piece of %d at node %d"
                        % (kind.tag, len(cand.vertices), piece.head),
                        hit.graph, hit.constant)
        whole_graph = (len(slices.slices) == 1
                       and not compute_boundary(g, piece.region))
        if (whole_graph and kind.tag == MINOR_STRUCTURED
                and kind.apex_set and problem == DS):
            # deletion exchange is only argued for a standalone piece
            try:
                smaller, _ = irrelevant_vertex_pass(
                    g, kind.apex_set, d_set, mode=apex_mode, guard=guard)
            except CapacityError:
                continue
            if smaller.n < g.n:
                return ("apex_deletion",
                        "%d vertices ruled out" % (g.n - smaller.n),
                        smaller, 0)
    return None


def kernelize(g, k, problem=DS, h=1, td=None, table=None, guard=DS_GUARD,
              apex_mode="sequential", max_rounds=None):
    """Reduce (g, k) to an equivalent instance.

    Returns a KernelResult whose certificate is either "kernel", with
    graph and parameter satisfying answer(g, k) == answer(graph, k +
    constant), or "no", meaning the instance is decided negative
    outright. A supplied decomposition steers the first round only;
    later rounds recompute one heuristically. The degree parameter h
    is raised to the decomposition adhesion when needed.
    """
    if problem not in (DS, CDS):
        raise InputError("unknown problem %r" % (problem,))
    if k < 0:
        raise InputError("parameter must be nonnegative, got %r" % (k,))
    if h < 1:
        raise InputError("degree parameter must be at least 1")
    if problem == CDS and g.n > 0 and not g.is_connected():
        raise InputError("connected domination needs a connected graph")
    if table is None:
        table = default_table(problem)
    if table.problem != problem:
        raise InputError("table solves %r, instance asks %r"
                         % (table.problem, problem))
    cur = g
    cur_k = k
    c_total = 0
    trace = []
    rounds = 0
    h_seen = h
    first_approx = None
    factor = 5 if problem == DS else 15
    while cur.n > 0:
        if max_rounds is not None and rounds >= max_rounds:
            break
        if rounds > g.n + 1:
            raise InvariantError("reduction failed to reach a fixpoint")
        rounds += 1
        if rounds == 1 and td is not None:
            if td.host != cur:
                raise InputError(
                    "decomposition belongs to a different graph")
            report = validate(td)
            if not report.ok:
                raise InputError("invalid decomposition: %s"
                                 % report.problems[0])
            dec = normalize(td)
        else:
            dec = normalize(heuristic_decomposition(cur))
        h_eff = max(h, dec.adhesion())
        h_seen = max(h_seen, h_eff)
        if problem == DS:
            approx = approx_colored_ds(ColoredInstance.fresh(cur), dec,
                                       h_eff, guard=guard)
        else:
            approx = approx_cds(cur, dec, h_eff, guard=guard)
        d_set = approx.solution
        if first_approx is None:
            first_approx = len(d_set)
        assert approx.eta == factor * h_eff
        if approx.certified and len(d_set) > approx.eta * cur_k:
            # the cover certifies optimum > parameter
            trace.append(KernelStep(
                "no_certificate",
                "cover %d exceeds %d times parameter %d"
                % (len(d_set), approx.eta, cur_k), 0, 0))
            return KernelResult(Graph(0, []), NO_PARAMETER, c_total,
                                "no", tuple(trace), h_seen,
                                first_approx, rounds)
        step = _try_round(cur, dec, d_set, h_eff, table, problem, guard,
                          apex_mode)
        if step is None:
            break
        action, detail, smaller, constant = step
        trace.append(KernelStep(action, detail, cur.n - smaller.n,
                                constant))
        assert smaller.n < cur.n
        cur = smaller
        cur_k += constant
        c_total += constant
    if cur_k < 0:
        trace.append(KernelStep(
            "no_certificate",
            "parameter drove below zero", 0, 0))
        return KernelResult(Graph(0, []), NO_PARAMETER, c_total, "no",
                            tuple(trace), h_seen,
                            first_approx if first_approx is not None else 0,
                            rounds)
    return KernelResult(cur, cur_k, c_total, "kernel", tuple(trace),
                        h_seen,
                        first_approx if first_approx is not None else 0,
                        rounds)
