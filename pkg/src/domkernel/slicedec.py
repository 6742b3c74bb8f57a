"""Splitting a decomposition along edges that carry many dominators.

A tree edge is heavy when both of its sides already hold more than h
vertices of the current dominating set. Cutting every heavy edge
splits the tree into slices; each slice inherits a small dominating
set made of the local dominators plus the cut adhesions, which is what
the per-slice reducers feed on. The heavy edges themselves span a
connected marked subtree whose shape statistics (leaves, branch nodes,
chains of degree-two nodes) bound how many slices there can be, and
long chains with no activity admit a direct replacement: a stretch
whose bags see no dominator starting or ending there is dominated
entirely by the two cut adhesions around it.
"""

from collections import namedtuple

from .errors import InputError, InvariantError
from .graph import closed_neighborhood
from .protrusion import DS_KIND, make_protrusion

TreeStats = namedtuple("TreeStats",
                       ["leaves", "branch_nodes", "link_nodes",
                        "link_paths"])

Slice = namedtuple("Slice",
                   ["nodes", "region", "ports", "cover", "head"])

SliceDecomposition = namedtuple(
    "SliceDecomposition",
    ["slices", "heavy_edges", "adhesion_budget"])


def _subtree_vertex_sets(td, d_set):
    """For every node, the dominators occurring in its subtree's bags."""
    down = {}
    for t in reversed(td._bfs_order):
        acc = set(td.bags[t] & d_set)
        for c in td.children[t]:
            acc |= down[c]
        down[t] = frozenset(acc)
    return down


def mark_heavy_edges(g, td, d_set, h):
    """Tree edges with more than h dominators strictly on each side.

    Sides count occupancy by bag occurrence: the lower side is the
    child's subtree, the upper side everything else including the
    shared adhesion's occurrences above.
    """
    if h < 1:
        raise InputError("degree parameter must be at least 1")
    d_set = frozenset(d_set)
    for v in d_set:
        g._check_vertex(v)
    down = _subtree_vertex_sets(td, d_set)
    up = {td.root: frozenset()}
    heavy = set()
    for t in td._bfs_order:
        base = up[t] | (td.bags[t] & d_set)
        kids = td.children[t]
        for c in kids:
            other = set(base)
            for s in kids:
                if s != c:
                    other |= down[s]
            up[c] = frozenset(other)
            if len(down[c]) > h and len(up[c]) > h:
                heavy.add((t, c))
    heavy = frozenset(heavy)
    _assert_marked_connected(td, heavy)
    return heavy


def _assert_marked_connected(td, heavy):
    if not heavy:
        return
    nodes = set()
    for p, c in heavy:
        nodes.add(p)
        nodes.add(c)
    seen = {min(nodes)}
    frontier = [min(nodes)]
    incident = {}
    for p, c in heavy:
        incident.setdefault(p, []).append(c)
        incident.setdefault(c, []).append(p)
    while frontier:
        t = frontier.pop()
        for s in incident.get(t, ()):
            if s not in seen:
                seen.add(s)
                frontier.append(s)
    if seen != nodes:
        raise InvariantError("heavy edges do not span a connected subtree")


def marked_subtree(td, heavy):
    """Sorted nodes touched by heavy edges."""
    nodes = set()
    for p, c in heavy:
        nodes.add(p)
        nodes.add(c)
    return sorted(nodes)


def _marked_degrees(heavy):
    deg = {}
    for p, c in heavy:
        deg[p] = deg.get(p, 0) + 1
        deg[c] = deg.get(c, 0) + 1
    return deg


def tree_stats(nodes, edges):
    """Shape counts of a subtree: by classic double counting the
    branch nodes number at most leaves - 1 and the maximal chains of
    degree-two nodes at most 2 * leaves - 1."""
    nodes = set(nodes)
    if not nodes:
        return TreeStats(0, 0, 0, 0)
    deg = {t: 0 for t in nodes}
    for p, c in edges:
        deg[p] += 1
        deg[c] += 1
    leaves = sum(1 for t in nodes if deg[t] <= 1)
    branch = sum(1 for t in nodes if deg[t] >= 3)
    links = sum(1 for t in nodes if deg[t] == 2)
    paths = len(_link_runs(nodes, edges))
    return TreeStats(leaves, branch, links, paths)


def _adjacency(edges):
    adj = {}
    for p, c in edges:
        adj.setdefault(p, set()).add(c)
        adj.setdefault(c, set()).add(p)
    return adj


def _link_runs(nodes, edges):
    """Maximal chains of degree-two nodes, each as (left anchor,
    [chain...], right anchor); anchors are the adjacent nodes of other
    degrees. Ordered by smallest chain node for determinism."""
    adj = _adjacency(edges)
    deg = {t: len(adj.get(t, ())) for t in nodes}
    in_run = set()
    runs = []
    for start in sorted(nodes):
        if deg.get(start, 0) != 2 or start in in_run:
            continue
        chain = [start]
        in_run.add(start)
        for direction in (0, 1):
            prev = start
            nxt = sorted(adj[start])[direction]
            while deg.get(nxt, 0) == 2 and nxt not in in_run:
                chain.append(nxt) if direction else chain.insert(0, nxt)
                in_run.add(nxt)
                options = [x for x in adj[nxt] if x != prev]
                prev = nxt
                nxt = options[0]
            if direction == 0:
                left_anchor = nxt
            else:
                right_anchor = nxt
        runs.append((left_anchor, chain, right_anchor))
    runs.sort(key=lambda r: min(r[1]))
    return runs


def _hanging_component(td, anchor_pairs, start):
    """Nodes reachable from start without crossing the given tree
    edges (each an unordered pair)."""
    blocked = {frozenset(p) for p in anchor_pairs}
    seen = {start}
    frontier = [start]
    while frontier:
        t = frontier.pop()
        nbrs = list(td.children[t])
        if td.parent[t] >= 0:
            nbrs.append(td.parent[t])
        for s in nbrs:
            if s in seen or frozenset((t, s)) in blocked:
                continue
            seen.add(s)
            frontier.append(s)
    return seen


def long_path_reduction(g, td, d_set, h, xi):
    """A quiet stretch of a heavy chain, packaged for replacement.

    Along each maximal chain of the marked subtree, every dominator
    occurring in the chain's region marks the first and the last chain
    position whose hanging bags contain it (cut adhesion vertices
    count too). A run of unmarked positions holding more than xi
    vertices is returned as a protrusion; the two cut adhesions beside
    the run dominate all of it, which the construction re-checks.
    """
    d_set = frozenset(d_set)
    heavy = mark_heavy_edges(g, td, d_set, h)
    if not heavy:
        return None
    nodes = marked_subtree(td, heavy)
    for left_anchor, chain, right_anchor in _link_runs(nodes, heavy):
        cut_left = (left_anchor, chain[0])
        cut_right = (chain[-1], right_anchor)
        cuts = [cut_left, cut_right]
        hang_bags = []
        for j, a in enumerate(chain):
            neighbor_cuts = cuts + [(a, chain[j - 1]) if j else cut_left,
                                    (a, chain[j + 1])
                                    if j + 1 < len(chain) else cut_right]
            comp = _hanging_component(td, neighbor_cuts, a)
            verts = set()
            for s in comp:
                verts |= td.bags[s]
            hang_bags.append(frozenset(verts))
        region = frozenset().union(*hang_bags)
        kappa_left = td.kappa(*cut_left)
        kappa_right = td.kappa(*cut_right)
        watched = (d_set & region) | kappa_left | kappa_right
        marked_positions = set()
        for w in sorted(watched):
            spots = [j for j in range(len(chain)) if w in hang_bags[j]]
            if spots:
                marked_positions.add(spots[0])
                marked_positions.add(spots[-1])
        j = 0
        while j < len(chain):
            if j in marked_positions:
                j += 1
                continue
            start = j
            while j < len(chain) and j not in marked_positions:
                j += 1
            # run of quiet positions [start, j)
            area = frozenset().union(*hang_bags[start:j])
            if len(area) <= xi:
                continue
            left_edge = cut_left if start == 0 \
                else (chain[start - 1], chain[start])
            right_edge = cut_right if j == len(chain) \
                else (chain[j - 1], chain[j])
            witness = td.kappa(*left_edge) | td.kappa(*right_edge)
            if len(witness) > 2 * h:
                raise InvariantError("cut adhesions exceed twice the "
                                     "degree parameter")
            uncovered = area - closed_neighborhood(g, witness)
            if uncovered:
                raise InvariantError(
                    "quiet stretch has %d vertices the adhesions miss"
                    % len(uncovered))
            return make_protrusion(g, area, DS_KIND, witness)
    return None


def build_slice_decomposition(g, td, d_set, h):
    """Cut the heavy edges and package each piece with its ports and
    its inherited small dominating set."""
    d_set = frozenset(d_set)
    heavy = mark_heavy_edges(g, td, d_set, h)
    blocked = {frozenset(e) for e in heavy}
    unassigned = set(td.nodes())
    slices = []
    budget = 0
    kappa_total = sum(len(td.kappa(p, c)) for p, c in heavy)
    while unassigned:
        start = min(unassigned)
        comp = _hanging_component(td, blocked, start)
        unassigned -= comp
        region = set()
        for t in comp:
            region |= td.bags[t]
        local_cuts = [e for e in heavy if (e[0] in comp) != (e[1] in comp)]
        ports = set()
        for e in local_cuts:
            ports |= td.kappa(*e)
        budget += sum(len(td.kappa(*e)) for e in local_cuts)
        cover = (d_set & region) | ports
        head = min(comp, key=lambda t: (td.depth[t], t))
        piece = Slice(nodes=frozenset(comp), region=frozenset(region),
                      ports=frozenset(ports), cover=frozenset(cover),
                      head=head)
        _check_slice(g, piece)
        slices.append(piece)
    if budget != 2 * kappa_total:
        raise InvariantError("port budget %d is off (expected %d)"
                             % (budget, 2 * kappa_total))
    return SliceDecomposition(slices=tuple(slices),
                              heavy_edges=heavy,
                              adhesion_budget=budget)


def _check_slice(g, piece):
    # ports absorb every edge leaving the region, and the cover
    # dominates the region from inside it
    outside = frozenset(range(g.n)) - piece.region
    for v in sorted(piece.region - piece.ports):
        if g.adj[v] & outside:
            raise InvariantError("vertex %d leaks out of its slice" % v)
    for v in sorted(piece.region):
        if v not in piece.cover and not g.adj[v] & piece.cover:
            raise InvariantError("vertex %d is not dominated inside "
                                 "its slice" % v)
