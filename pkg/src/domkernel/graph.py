"""Immutable simple graphs with dense integer vertex ids.

Vertices are always 0..n-1. Operations that shrink a graph return a new
graph together with a mapping from new ids back to the ids they came
from, so reductions stay traceable. Iteration order is deterministic
everywhere: vertices ascending, edges as sorted (u, v) pairs with u < v.
"""

from collections import deque
from itertools import combinations
import random

from .errors import InputError


class Graph:
    """Undirected simple graph, immutable after construction."""

    __slots__ = ("n", "adj", "_masks", "_edge_count")

    def __init__(self, n, edges=()):
        if n < 0:
            raise InputError("vertex count must be nonnegative")
        sets = [set() for _ in range(n)]
        m = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError("edge endpoint %r out of range" % ((u, v),))
            if u == v:
                raise InputError("loops are not allowed: %d" % u)
            if v not in sets[u]:
                sets[u].add(v)
                sets[v].add(u)
                m += 1
        self.n = n
        self.adj = tuple(frozenset(s) for s in sets)
        self._masks = None
        self._edge_count = m

    @property
    def m(self):
        return self._edge_count

    def vertices(self):
        return range(self.n)

    def edges(self):
        out = []
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    out.append((u, v))
        out.sort()
        return out

    def has_edge(self, u, v):
        self._check_vertex(u)
        self._check_vertex(v)
        return v in self.adj[u]

    def degree(self, v):
        self._check_vertex(v)
        return len(self.adj[v])

    def neighbors(self, v):
        self._check_vertex(v)
        return self.adj[v]

    def _check_vertex(self, v):
        if not (isinstance(v, int) and 0 <= v < self.n):
            raise InputError("unknown vertex id %r" % (v,))

    def neighbor_masks(self):
        """Closed neighborhood of each vertex as a bitmask, cached."""
        if self._masks is None:
            masks = []
            for v in range(self.n):
                m = 1 << v
                for u in self.adj[v]:
                    m |= 1 << u
                masks.append(m)
            self._masks = tuple(masks)
        return self._masks

    def induced_subgraph(self, vs):
        """Return (subgraph, mapping) with mapping[new_id] = old_id."""
        keep = sorted(set(vs))
        for v in keep:
            self._check_vertex(v)
        index = {old: new for new, old in enumerate(keep)}
        edges = []
        for u in keep:
            for v in self.adj[u]:
                if u < v and v in index:
                    edges.append((index[u], index[v]))
        return Graph(len(keep), edges), keep

    def remove_vertices(self, vs):
        """Return (graph without vs, mapping new_id -> old_id)."""
        drop = set(vs)
        return self.induced_subgraph(v for v in range(self.n) if v not in drop)

    def connected_components(self):
        """Components as sorted vertex lists, ordered by smallest member."""
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp = [s]
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for v in sorted(self.adj[u]):
                    if not seen[v]:
                        seen[v] = True
                        comp.append(v)
                        queue.append(v)
            comps.append(sorted(comp))
        return comps

    def is_connected(self):
        if self.n == 0:
            return False
        return len(self.connected_components()) == 1

    def bfs_distances(self, sources):
        """Distance from the nearest source, -1 when unreachable."""
        dist = [-1] * self.n
        queue = deque()
        for s in sorted(set(sources)):
            self._check_vertex(s)
            dist[s] = 0
            queue.append(s)
        while queue:
            u = queue.popleft()
            for v in sorted(self.adj[u]):
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        return dist

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        return "Graph(n=%d, m=%d)" % (self.n, self.m)


def closed_neighborhood(g, s):
    """N[S]: S together with every vertex adjacent to S."""
    out = set()
    for v in s:
        g._check_vertex(v)
        out.add(v)
        out.update(g.adj[v])
    return frozenset(out)


def open_neighborhood(g, s):
    """N(S): vertices outside S adjacent to S."""
    s = set(s)
    return frozenset(closed_neighborhood(g, s) - s)


def r_dominated_set(g, p, r):
    """Vertices within BFS distance r of P."""
    if r < 1:
        raise InputError("domination radius must be at least 1, got %r" % r)
    if not p:
        return frozenset()
    dist = g.bfs_distances(p)
    return frozenset(v for v in range(g.n) if 0 <= dist[v] <= r)


def is_dominating_set(g, d):
    """True iff every vertex of g is in N[d]."""
    for v in d:
        g._check_vertex(v)
    return len(closed_neighborhood(g, d)) == g.n


def is_connected_dominating_set(g, d):
    """True iff d is nonempty, dominating, and induces a connected graph.

    Only defined on connected host graphs; anything else is an input
    error rather than False, to keep misuse loud.
    """
    if not g.is_connected():
        raise InputError("connected dominating sets need a connected graph")
    if not d:
        return False
    if not is_dominating_set(g, d):
        return False
    sub, _ = g.induced_subgraph(d)
    return sub.is_connected()


# ---------------------------------------------------------------------------
# instance generators

def _path(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def _cycle(n):
    if n < 3:
        raise InputError("cycles need at least 3 vertices")
    edges = [(i, i + 1) for i in range(n - 1)] + [(n - 1, 0)]
    return Graph(n, edges)


def _grid(rows, cols):
    if rows < 1 or cols < 1:
        raise InputError("grid dimensions must be positive")
    def vid(r, c):
        return r * cols + c
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
    return Graph(rows * cols, edges)


def _subdivided_clique(h, ell):
    """K_h with every edge replaced by a path of ell internal vertices."""
    if h < 1:
        raise InputError("clique size must be positive")
    if ell < 0:
        raise InputError("subdivision count must be nonnegative")
    edges = []
    nxt = h
    for u, v in combinations(range(h), 2):
        prev = u
        for _ in range(ell):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        edges.append((prev, v))
    return Graph(nxt, edges)


def _random_planar(n, seed):
    """Random planar graph from a triangulation of random points.

    Points in general position are triangulated greedily by shortest
    non-crossing segments, then edges are thinned at random. Planarity
    holds by construction and the result is deterministic per seed.
    """
    if n < 1:
        raise InputError("vertex count must be positive")
    rng = random.Random(seed)
    pts = [(rng.random(), rng.random()) for _ in range(n)]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def segments_intersect(p1, p2, p3, p4):
        # proper intersection only; shared endpoints are fine
        if len({p1, p2, p3, p4}) < 4:
            return False
        d1 = cross(p3, p4, p1)
        d2 = cross(p3, p4, p2)
        d3 = cross(p1, p2, p3)
        d4 = cross(p1, p2, p4)
        return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))

    cand = sorted(
        combinations(range(n), 2),
        key=lambda e: ((pts[e[0]][0] - pts[e[1]][0]) ** 2
                       + (pts[e[0]][1] - pts[e[1]][1]) ** 2, e),
    )
    chosen = []
    for u, v in cand:
        ok = True
        for a, b in chosen:
            if segments_intersect(pts[u], pts[v], pts[a], pts[b]):
                ok = False
                break
        if ok:
            chosen.append((u, v))
    kept = [e for e in chosen if rng.random() < 0.85]
    return Graph(n, kept)


def _bounded_degree(n, max_degree, seed):
    if n < 1:
        raise InputError("vertex count must be positive")
    if max_degree < 0:
        raise InputError("degree bound must be nonnegative")
    rng = random.Random(seed)
    deg = [0] * n
    edges = []
    cand = list(combinations(range(n), 2))
    rng.shuffle(cand)
    target = min(len(cand), (n * max_degree) // 2)
    for u, v in cand:
        if len(edges) >= target:
            break
        if deg[u] < max_degree and deg[v] < max_degree and rng.random() < 0.7:
            edges.append((u, v))
            deg[u] += 1
            deg[v] += 1
    return Graph(n, edges)


_FAMILIES = {
    "path": lambda params, seed: _path(params["n"]),
    "cycle": lambda params, seed: _cycle(params["n"]),
    "grid": lambda params, seed: _grid(params["rows"], params["cols"]),
    "subdivided_clique":
        lambda params, seed: _subdivided_clique(params["h"], params["ell"]),
    "random_planar": lambda params, seed: _random_planar(params["n"], seed),
    "bounded_degree":
        lambda params, seed: _bounded_degree(params["n"],
                                             params["max_degree"], seed),
}


def generate_instance(family, params, seed=0):
    """Build a named test instance; same (family, params, seed) -> same graph."""
    if family not in _FAMILIES:
        raise InputError("unknown family %r (have: %s)"
                         % (family, ", ".join(sorted(_FAMILIES))))
    try:
        return _FAMILIES[family](params, seed)
    except KeyError as exc:
        raise InputError("family %r is missing parameter %s" % (family, exc))


# ---------------------------------------------------------------------------
# edge-list file format: "p ds <n> <m>" header, "e <u> <v>" lines, 1-indexed

def to_dimacs(g):
    """Canonical text form; parsing it back reproduces the same bytes."""
    lines = ["p ds %d %d" % (g.n, g.m)]
    for u, v in g.edges():
        lines.append("e %d %d" % (u + 1, v + 1))
    return "\n".join(lines) + "\n"


def from_dimacs(text):
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise InputError("line %d: duplicate problem line" % lineno)
            if len(parts) != 4 or parts[1] != "ds":
                raise InputError("line %d: malformed problem line %r"
                                 % (lineno, raw))
            n = int(parts[2])
        elif parts[0] == "e":
            if n is None:
                raise InputError("line %d: edge before problem line" % lineno)
            if len(parts) != 3:
                raise InputError("line %d: malformed edge line %r"
                                 % (lineno, raw))
            u, v = int(parts[1]), int(parts[2])
            if not (1 <= u <= n and 1 <= v <= n):
                raise InputError("line %d: endpoint out of range" % lineno)
            edges.append((u - 1, v - 1))
        else:
            raise InputError("line %d: unknown record %r" % (lineno, parts[0]))
    if n is None:
        raise InputError("missing problem line")
    return Graph(n, edges)


def read_graph(path):
    with open(path, "r", encoding="ascii") as fh:
        return from_dimacs(fh.read())


def write_graph(g, path):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(to_dimacs(g))
