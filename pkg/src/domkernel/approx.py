"""Approximation layer for colored domination and its connected variant.

The core loop walks a tree decomposition from the bottom: it picks the
deepest node that is the peak of an undominated vertex, then either
grabs the bag's few high-degree vertices plus the adhesion (cheap, no
solving) or solves the bag's restricted instance with the inner solver
and pays the adhesion on top. Every iteration strictly shrinks the set
of undominated vertices. With an exact inner solver the output is at
most 5h times the optimum whenever the decomposition has adhesion at
most h; greedy fallback keeps validity but downgrades the factor to
an uncertified, empirical one.
"""

from collections import deque, namedtuple

from .errors import InputError, InvariantError
from .graph import (
    closed_neighborhood,
    is_connected_dominating_set,
    is_dominating_set,
    open_neighborhood,
)
from .solvers import DS_GUARD, ColoredInstance, colored_ds_opt
from .treedec import LOW_HIGH_DEGREE, classify_node, validate

TraceStep = namedtuple("TraceStep", ["node", "case", "added"])

ApproxResult = namedtuple("ApproxResult",
                          ["solution", "trace", "eta", "certified"])

CdsApproxResult = namedtuple(
    "CdsApproxResult",
    ["solution", "ds_part", "connector", "trace", "eta", "certified"])

InnerResult = namedtuple("InnerResult", ["solution", "exact"])


def inner_two_approx(inst, size_budget=None, guard=DS_GUARD):
    """Solve a colored instance exactly under the guard, greedily above it.

    Returns (solution, exact). A None solution with exact=True certifies
    that nothing within the budget exists; with exact=False it only
    means the greedy pass found nothing that small.
    """
    if inst.graph.n <= guard:
        found = colored_ds_opt(inst, cap=size_budget, guard=guard)
        return InnerResult(found, True)
    g = inst.graph
    masks = g.neighbor_masks()
    universe = 0
    for z in inst.z_set:
        universe |= 1 << z
    chosen = []
    covered = 0
    candidates = sorted(inst.y_set | inst.z_set)
    while covered & universe != universe:
        best_v = None
        best_gain = 0
        for v in candidates:
            gain = bin(masks[v] & universe & ~covered).count("1")
            if gain > best_gain:
                best_gain = gain
                best_v = v
        if best_v is None:
            return InnerResult(None, False)
        chosen.append(best_v)
        covered |= masks[best_v]
        if size_budget is not None and len(chosen) > size_budget:
            return InnerResult(None, False)
    return InnerResult(frozenset(chosen), False)


def _check_decomposition(inst, td, h):
    if td.host != inst.graph:
        raise InputError("decomposition belongs to a different graph")
    report = validate(td)
    if not report.ok:
        raise InputError("invalid decomposition: %s" % report.problems[0])
    if not report.subset_free:
        raise InputError("decomposition must be normalized first")
    if td.adhesion() > h:
        raise InputError("adhesion %d exceeds the degree parameter %d"
                         % (td.adhesion(), h))


def approx_colored_ds(inst, td, h, guard=DS_GUARD):
    """Iteratively dominate z_set, returning the added vertices.

    The result's solution D satisfies: x_set | D dominates z_set and
    D avoids x_set. With every inner call exact the size is certified
    to be at most eta = 5h times the optimum of the instance.
    """
    _check_decomposition(inst, td, h)
    g = inst.graph
    x = set(inst.x_set)
    y = set(inst.y_set)
    z = set(inst.z_set)
    x0 = frozenset(x)
    z0 = frozenset(z)
    trace = []
    certified = True
    rounds = 0
    while z:
        rounds += 1
        if rounds > len(z0) + 1:
            raise InvariantError("domination loop failed to make progress")
        peaks = {}
        for v in sorted(z):
            peaks[v] = td.peak(v)
        t = min(peaks.values(), key=lambda node: (-td.depth[node], node))
        kind = classify_node(td, t, h)
        bag = td.bags[t]
        if kind.tag == LOW_HIGH_DEGREE:
            torso, verts = td.torso(t)
            heavy = frozenset(verts[i] for i in torso.vertices()
                              if torso.degree(i) > h)
            x_star = heavy | td.sigma[t]
            z_star = (bag - open_neighborhood(g, x_star)) & z
            added = x_star | z_star
            case = "high_degree"
        else:
            local, mapping = ColoredInstance(g, x, y, z).restrict(bag)
            inner = inner_two_approx(local, guard=guard)
            if inner.solution is None:
                raise InvariantError("restricted instance must be solvable")
            certified = certified and inner.exact
            added = frozenset(mapping[i] for i in inner.solution)
            added |= td.sigma[t]
            case = "structured"
        trace.append(TraceStep(node=t, case=case, added=frozenset(added)))

        x |= added
        new_y = (y | open_neighborhood(g, x)) - x
        z_by_formula = set(range(g.n)) - x - new_y
        z_by_removal = z - x - new_y
        if z_by_formula != z_by_removal:
            raise InvariantError("undominated set drifted outside the "
                                 "previous one")
        y = new_y
        z = z_by_formula

    solution = frozenset(x) - x0
    if z0 and not z0 <= closed_neighborhood(g, x0 | solution):
        raise InvariantError("output fails to dominate the target set")
    return ApproxResult(solution=solution, trace=tuple(trace),
                        eta=5 * h, certified=certified)


def duchet_connect(g, q):
    """Vertices joining the components of g[q] into one, at most
    2 * (components - 1) of them.

    Requires q to dominate the connected graph g; then some other
    component always sits within three edges of any component, so each
    join needs at most two new vertices.
    """
    q = frozenset(q)
    if not g.is_connected():
        raise InputError("component joining needs a connected graph")
    if not is_dominating_set(g, q):
        raise InputError("the set to connect must be dominating")
    current = set(q)
    extra = set()

    def components():
        sub, mapping = g.induced_subgraph(current)
        return [[mapping[i] for i in comp]
                for comp in sub.connected_components()]

    comps = components()
    budget = 2 * (len(comps) - 1)
    while len(comps) > 1:
        home = set(comps[0])
        others = set(current) - home
        parent = {v: None for v in home}
        frontier = deque(sorted(home))
        hit = None
        while frontier and hit is None:
            u = frontier.popleft()
            for w in sorted(g.adj[u]):
                if w in parent:
                    continue
                parent[w] = u
                if w in others:
                    hit = w
                    break
                frontier.append(w)
        if hit is None:
            raise InvariantError("components stopped seeing each other")
        path = []
        walk = parent[hit]
        while walk is not None and walk not in home:
            path.append(walk)
            walk = parent[walk]
        if len(path) > 2:
            raise InvariantError(
                "joining path needs %d internal vertices; domination "
                "should cap it at two" % len(path))
        extra.update(path)
        current.update(path)
        comps = components()
    if len(extra) > max(budget, 0):
        raise InvariantError("connector exceeded the 2(rho-1) budget")
    return frozenset(extra)


def approx_cds(g, td, h, guard=DS_GUARD):
    """Connected dominating set at most 3 * eta times the optimum."""
    if g.n == 0 or not g.is_connected():
        raise InputError("connected domination needs a connected graph")
    inst = ColoredInstance.fresh(g)
    base = approx_colored_ds(inst, td, h, guard=guard)
    connector = duchet_connect(g, base.solution)
    solution = frozenset(base.solution | connector)
    if not is_connected_dominating_set(g, solution):
        raise InvariantError("connected output check failed")
    return CdsApproxResult(solution=solution, ds_part=base.solution,
                           connector=connector, trace=base.trace,
                           eta=3 * base.eta, certified=base.certified)
