"""Exact solvers, guarded for desk-scale inputs.

Minimum (connected) dominating sets are found by bitmask search with
branch and bound; the lexicographically first optimum is recovered by a
separate ordered scan so callers get a deterministic witness. A
3-state dynamic program over tree decompositions provides the same
number along a second, independent route.

"No solution within the cap" is reported as None, never as a sentinel
size. Inputs beyond a guard raise CapacityError instead of silently
taking forever.
"""

import math

from .errors import CapacityError, InputError
from .graph import Graph, closed_neighborhood, open_neighborhood

DS = "ds"
CDS = "cds"

DS_GUARD = 24
CDS_GUARD = 20
INF = math.inf


def _check_guard(g, guard, what):
    if g.n > guard:
        raise CapacityError("%s limited to %d vertices, got %d"
                            % (what, guard, g.n))


def _greedy_cover(universe, masks, order):
    covered = 0
    count = 0
    while covered & universe != universe:
        best_v = None
        best_gain = 0
        for v in order:
            gain = bin(masks[v] & universe & ~covered).count("1")
            if gain > best_gain:
                best_gain = gain
                best_v = v
        if best_v is None:
            return None
        covered |= masks[best_v]
        count += 1
    return count


def _min_cover_size(universe, masks, candidates, cap):
    """Fewest candidate masks whose union covers universe; None beyond cap."""
    if universe == 0:
        return 0
    coverers = {}
    bit = 1
    b = 0
    while bit <= universe:
        if universe & bit:
            cov = [v for v in candidates if masks[v] & bit]
            if not cov:
                return None
            coverers[b] = cov
        bit <<= 1
        b += 1
    max_gain = max(bin(masks[v] & universe).count("1") for v in candidates)
    upper = _greedy_cover(universe, masks, candidates)
    best = cap + 1
    if upper is not None:
        best = min(best, upper)
    memo = {}

    def search(covered, depth):
        nonlocal best
        missing = universe & ~covered
        if not missing:
            best = min(best, depth)
            return
        if depth + (bin(missing).count("1") + max_gain - 1) // max_gain >= best:
            return
        prev = memo.get(covered)
        if prev is not None and prev <= depth:
            return
        memo[covered] = depth
        target = (missing & -missing).bit_length() - 1
        options = sorted(coverers[target],
                         key=lambda v: (-bin(masks[v] & missing).count("1"), v))
        for v in options:
            search(covered | masks[v], depth + 1)

    search(0, 0)
    return best if best <= cap else None


def _lex_first_cover(universe, masks, candidates, size):
    """Lexicographically first candidate subset of the given size covering
    universe, as a sorted tuple; None when there is none."""
    n = len(candidates)
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] | masks[candidates[i]]
    max_gain = max((bin(masks[v] & universe).count("1")
                    for v in candidates), default=1) or 1

    def go(start, need, covered):
        missing = universe & ~covered
        if need == 0:
            return () if not missing else None
        if missing & ~suffix[start]:
            return None
        if (bin(missing).count("1") + max_gain - 1) // max_gain > need:
            return None
        for i in range(start, n - need + 1):
            v = candidates[i]
            rest = go(i + 1, need - 1, covered | masks[v])
            if rest is not None:
                return (v,) + rest
        return None

    return go(0, size, 0)


def minimum_ds_size(g, cap=None, guard=DS_GUARD):
    """Size of a minimum dominating set, or None if it exceeds cap."""
    _check_guard(g, guard, "dominating set search")
    if g.n == 0:
        return 0
    if cap is None:
        cap = g.n
    if cap < 0:
        return None
    masks = g.neighbor_masks()
    universe = (1 << g.n) - 1
    return _min_cover_size(universe, masks, list(range(g.n)), cap)


def ds_opt_bruteforce(g, cap=None, guard=DS_GUARD):
    """Lexicographically first minimum dominating set; None beyond cap."""
    size = minimum_ds_size(g, cap=cap, guard=guard)
    if size is None:
        return None
    if size == 0:
        return frozenset()
    masks = g.neighbor_masks()
    universe = (1 << g.n) - 1
    found = _lex_first_cover(universe, masks, list(range(g.n)), size)
    if found is None:
        raise InputError("optimum size %d has no witness; impossible" % size)
    return frozenset(found)


def _mask_connected(vmask, masks):
    if vmask == 0:
        return False
    start = vmask & -vmask
    reach = start
    while True:
        grow = reach
        m = reach
        while m:
            bit = m & -m
            m ^= bit
            grow |= masks[bit.bit_length() - 1] & vmask
        if grow == reach:
            break
        reach = grow
    return reach == vmask


def cds_opt_bruteforce(g, cap=None, guard=CDS_GUARD):
    """Lexicographically first minimum connected dominating set.

    Defined for connected graphs only. Enumerates candidate sets in
    size-then-lex order with coverage pruning, so the first hit is the
    answer.
    """
    _check_guard(g, guard, "connected dominating set search")
    if not g.is_connected():
        raise InputError("connected dominating sets need a connected graph")
    if cap is None:
        cap = g.n
    masks = g.neighbor_masks()
    universe = (1 << g.n) - 1
    n = g.n
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] | masks[i]

    def go(start, need, covered, chosen):
        missing = universe & ~covered
        if need == 0:
            if missing:
                return None
            vmask = 0
            for v in chosen:
                vmask |= 1 << v
            return tuple(chosen) if _mask_connected(vmask, masks) else None
        if missing & ~suffix[start]:
            return None
        for i in range(start, n - need + 1):
            chosen.append(i)
            hit = go(i + 1, need - 1, covered | masks[i], chosen)
            chosen.pop()
            if hit is not None:
                return hit
        return None

    for size in range(1, min(cap, n) + 1):
        hit = go(0, size, 0, [])
        if hit is not None:
            return frozenset(hit)
    return None


class ColoredInstance:
    """A graph with a three-way coloring driving partial domination.

    x_set holds vertices already committed to the solution, y_set holds
    vertices considered dominated (always including the neighborhood of
    x_set), and z_set holds the vertices still to dominate. A solution
    is a subset of y_set | z_set that, together with x_set, dominates
    z_set.
    """

    __slots__ = ("graph", "x_set", "y_set", "z_set")

    def __init__(self, graph, x_set, y_set, z_set):
        x_set = frozenset(x_set)
        y_set = frozenset(y_set)
        z_set = frozenset(z_set)
        everything = x_set | y_set | z_set
        if (len(everything) != len(x_set) + len(y_set) + len(z_set)
                or everything != frozenset(range(graph.n))):
            raise InputError("coloring must partition the vertex set")
        spill = open_neighborhood(graph, x_set) - y_set
        if spill:
            raise InputError("neighbors of x_set must be in y_set, "
                             "missing %r" % (sorted(spill)[0],))
        self.graph = graph
        self.x_set = x_set
        self.y_set = y_set
        self.z_set = z_set

    @classmethod
    def fresh(cls, graph, x_set=()):
        """Start a coloring from a committed set: y is its neighborhood."""
        x_set = frozenset(x_set)
        y_set = open_neighborhood(graph, x_set)
        z_set = frozenset(range(graph.n)) - x_set - y_set
        return cls(graph, x_set, y_set, z_set)

    def restrict(self, vertices):
        """Induced sub-instance on the given vertices, plus the id map."""
        sub, mapping = self.graph.induced_subgraph(vertices)
        back = {old: new for new, old in enumerate(mapping)}
        return ColoredInstance(
            sub,
            (back[v] for v in self.x_set if v in back),
            (back[v] for v in self.y_set if v in back),
            (back[v] for v in self.z_set if v in back),
        ), mapping

    def __repr__(self):
        return ("ColoredInstance(n=%d, |x|=%d, |y|=%d, |z|=%d)"
                % (self.graph.n, len(self.x_set), len(self.y_set),
                   len(self.z_set)))


def colored_ds_opt(inst, cap=None, guard=DS_GUARD):
    """Lexicographically first minimum D with x_set | D dominating z_set."""
    g = inst.graph
    _check_guard(g, guard, "colored dominating set search")
    masks = g.neighbor_masks()
    universe = 0
    for z in inst.z_set:
        universe |= 1 << z
    candidates = sorted(inst.y_set | inst.z_set)
    if cap is None:
        cap = len(candidates)
    if universe == 0:
        return frozenset()
    if not candidates:
        return None
    size = _min_cover_size(universe, masks, candidates, cap)
    if size is None:
        return None
    found = _lex_first_cover(universe, masks, candidates, size)
    return frozenset(found)


# ---------------------------------------------------------------------------
# dynamic programming over a tree decomposition
#
# Bag vertices carry one of three states: 0 in the solution, 1 out and
# dominated by the part processed so far, 2 out and not yet dominated.
# Tables are exact in state 2, which keeps joins free of double counting.

IN_SET, DOMINATED, UNDOMINATED = 0, 1, 2


def _nice_events(td):
    """Linearize the decomposition into leaf/introduce/forget/join events.

    Returns a list evaluated front to back; each event produces one
    table and refers to earlier events by index. The final event leaves
    an empty bag, so its table has a single entry: the optimum.
    """
    events = []  # (kind, payload, child_indices, bag_tuple)

    def emit(kind, payload, children, bag):
        events.append((kind, payload, tuple(children), tuple(sorted(bag))))
        return len(events) - 1

    def chain_to(idx, have, want):
        have = set(have)
        for v in sorted(have - want, reverse=True):
            have.discard(v)
            idx = emit("forget", v, [idx], have)
        for v in sorted(want - have):
            have.add(v)
            idx = emit("introduce", v, [idx], have)
        return idx

    # children before parents
    post = list(reversed(td._bfs_order))
    built = {}
    for t in post:
        bag = set(td.bags[t])
        parts = []
        for c in td.children[t]:
            parts.append(chain_to(built[c], td.bags[c], bag))
        if not parts:
            idx = emit("leaf", None, [], set())
            idx = chain_to(idx, set(), bag)
        else:
            idx = parts[0]
            for other in parts[1:]:
                idx = emit("join", None, [idx, other], bag)
        built[t] = idx
    top = chain_to(built[td.root], td.bags[td.root], set())
    assert top == len(events) - 1
    return events


def _ds_dp(g, events, forced_in=(), forbidden=(), relaxed=()):
    """Run the three-state tables over precomputed events.

    forced_in vertices must join the solution, forbidden ones must stay
    out, relaxed ones may finish undominated. Returns math.inf when the
    constraints rule everything out.
    """
    forced_in = frozenset(forced_in)
    forbidden = frozenset(forbidden)
    relaxed = frozenset(relaxed)
    tables = [None] * len(events)
    for idx, (kind, payload, children, bag) in enumerate(events):
        if kind == "leaf":
            tables[idx] = {(): 0}
        elif kind == "introduce":
            v = payload
            child_bag = events[children[0]][3]
            pos = bag.index(v)
            nbr_child_pos = [i for i, u in enumerate(child_bag)
                             if u in g.adj[v]]
            new = {}
            for state, cost in tables[children[0]].items():
                base = list(state)
                if v not in forced_in:
                    # v stays out: its domination status is forced
                    if any(state[i] == IN_SET for i in nbr_child_pos):
                        vs = DOMINATED
                    else:
                        vs = UNDOMINATED
                    out_state = tuple(base[:pos] + [vs] + base[pos:])
                    if new.get(out_state, INF) > cost:
                        new[out_state] = cost
                if v not in forbidden:
                    # v joins the solution and dominates bag neighbors
                    lifted = list(state)
                    for i in nbr_child_pos:
                        if lifted[i] == UNDOMINATED:
                            lifted[i] = DOMINATED
                    in_state = tuple(lifted[:pos] + [IN_SET] + lifted[pos:])
                    if new.get(in_state, INF) > cost + 1:
                        new[in_state] = cost + 1
            tables[idx] = new
        elif kind == "forget":
            v = payload
            child_bag = events[children[0]][3]
            pos = child_bag.index(v)
            may_stay = v in relaxed
            new = {}
            for state, cost in tables[children[0]].items():
                if state[pos] == UNDOMINATED and not may_stay:
                    continue
                short = state[:pos] + state[pos + 1:]
                if new.get(short, INF) > cost:
                    new[short] = cost
            tables[idx] = new
        else:  # join
            left = tables[children[0]]
            right = tables[children[1]]
            width = len(bag)
            by_pattern = {}
            for state, cost in right.items():
                pattern = tuple(i for i in range(width)
                                if state[i] == IN_SET)
                by_pattern.setdefault(pattern, []).append((state, cost))
            new = {}
            for s1, c1 in left.items():
                pattern = tuple(i for i in range(width) if s1[i] == IN_SET)
                for s2, c2 in by_pattern.get(pattern, ()):
                    merged = tuple(
                        s1[i] if s1[i] == IN_SET
                        else (DOMINATED if DOMINATED in (s1[i], s2[i])
                              else UNDOMINATED)
                        for i in range(width))
                    cost = c1 + c2 - len(pattern)
                    if new.get(merged, INF) > cost:
                        new[merged] = cost
            tables[idx] = new
        # free child tables early; events reference each child once
        for c in children:
            tables[c] = None
    return tables[-1].get((), INF)


def ds_treewidth_dp(g, td):
    """Minimum dominating set size via the decomposition, host-independent
    of the search-based solvers."""
    if g.n == 0:
        return 0
    if td.host is not g and td.host != g:
        raise InputError("decomposition belongs to a different graph")
    if frozenset().union(*td.bags) != frozenset(range(g.n)):
        raise InputError("decomposition does not cover the graph")
    best = _ds_dp(g, _nice_events(td))
    assert best is not INF
    return best


def threshold(g, problem):
    """Smallest k for which (g, k) is a yes-instance."""
    if problem == DS:
        size = minimum_ds_size(g)
        return size
    if problem == CDS:
        best = cds_opt_bruteforce(g)
        return len(best)
    raise InputError("unknown problem %r" % (problem,))


def threshold_or_inf(g, problem):
    """Like threshold, but disconnected or empty CDS inputs give math.inf
    instead of an error; handy when composing graphs that may fall apart."""
    if problem == CDS and (g.n == 0 or not g.is_connected()):
        return INF
    return threshold(g, problem)


def two_dominating_set_size(g, cap=None, guard=DS_GUARD):
    """Minimum size of a set whose radius-2 balls cover the graph."""
    _check_guard(g, guard, "2-domination search")
    if g.n == 0:
        return 0
    if cap is None:
        cap = g.n
    base = g.neighbor_masks()
    masks = []
    for v in range(g.n):
        ball = base[v]
        for u in g.adj[v]:
            ball |= base[u]
        masks.append(ball)
    universe = (1 << g.n) - 1
    return _min_cover_size(universe, masks, list(range(g.n)), cap)
