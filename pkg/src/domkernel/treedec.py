"""Rooted tree decompositions and the structural maps the pipeline needs.

A decomposition is stored rooted. For unrooted input the root is the
node whose bag contains the lowest vertex id of the host graph, with
the smallest node id breaking ties, so every construction path is
deterministic.

Derived maps follow the usual conventions: sigma(t) is the bag's
intersection with the parent bag (empty at the root), gamma(t) is the
union of all bags in the subtree below t inclusive, kappa(e) is the
intersection of the two endpoint bags of a tree edge, and the torso of
a node is the host graph induced on its bag with cliques added on
sigma(t) and on sigma(u) for every child u.
"""

from collections import namedtuple

from .errors import InputError, InvariantError
from .graph import Graph


NodeType = namedtuple("NodeType", ["tag", "apex_set"])

LOW_HIGH_DEGREE = "low_high_degree"
MINOR_STRUCTURED = "minor_structured"

ValidationReport = namedtuple("ValidationReport",
                              ["ok", "subset_free", "problems"])


class TreeDecomposition:

    def __init__(self, host, bags, tree_edges, root=None,
                 node_types=None, apex_notes=None):
        if not isinstance(host, Graph):
            raise InputError("host must be a Graph")
        bags = [frozenset(b) for b in bags]
        if not bags:
            raise InputError("a decomposition needs at least one bag")
        nnodes = len(bags)
        for b in bags:
            for v in b:
                if not (0 <= v < host.n):
                    raise InputError("bag vertex %r outside host" % (v,))
        edges = set()
        for u, v in tree_edges:
            if not (0 <= u < nnodes and 0 <= v < nnodes) or u == v:
                raise InputError("bad tree edge %r" % ((u, v),))
            edges.add((min(u, v), max(u, v)))
        if len(edges) != nnodes - 1:
            raise InputError("tree must have exactly %d edges, got %d"
                             % (nnodes - 1, len(edges)))
        nbrs = [[] for _ in range(nnodes)]
        for u, v in edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        for lst in nbrs:
            lst.sort()

        if root is None:
            root = self._default_root(host, bags)
        elif not (0 <= root < nnodes):
            raise InputError("root %r out of range" % (root,))

        parent = [-1] * nnodes
        depth = [0] * nnodes
        order = [root]
        seen = [False] * nnodes
        seen[root] = True
        i = 0
        while i < len(order):
            u = order[i]
            i += 1
            for v in nbrs[u]:
                if not seen[v]:
                    seen[v] = True
                    parent[v] = u
                    depth[v] = depth[u] + 1
                    order.append(v)
        if len(order) != nnodes:
            raise InputError("decomposition tree is not connected")

        self.host = host
        self.bags = tuple(bags)
        self.root = root
        self.parent = tuple(parent)
        self.depth = tuple(depth)
        children = [[] for _ in range(nnodes)]
        for v in range(nnodes):
            if parent[v] >= 0:
                children[parent[v]].append(v)
        self.children = tuple(tuple(sorted(c)) for c in children)
        self._bfs_order = tuple(order)
        self.node_types = dict(node_types or {})
        self.apex_notes = {t: frozenset(s)
                           for t, s in (apex_notes or {}).items()}

        # eager derived maps
        self.sigma = tuple(
            frozenset() if parent[t] < 0 else bags[t] & bags[parent[t]]
            for t in range(nnodes))
        gamma = [None] * nnodes
        for t in reversed(order):
            acc = set(bags[t])
            for c in self.children[t]:
                acc |= gamma[c]
            gamma[t] = frozenset(acc)
        self.gamma = tuple(gamma)
        self._occurrences = None

    @staticmethod
    def _default_root(host, bags):
        lowest = None
        for b in bags:
            for v in b:
                if lowest is None or v < lowest:
                    lowest = v
        if lowest is None:
            return 0
        for t, b in enumerate(bags):
            if lowest in b:
                return t
        raise InvariantError("unreachable")

    @property
    def nnodes(self):
        return len(self.bags)

    def nodes(self):
        return range(len(self.bags))

    def bag(self, t):
        return self.bags[t]

    def width(self):
        return max(len(b) for b in self.bags) - 1

    def adhesion(self):
        return max(len(s) for s in self.sigma)

    def kappa(self, u, v):
        """Bag intersection along the tree edge {u, v}."""
        if self.parent[u] == v or self.parent[v] == u:
            return self.bags[u] & self.bags[v]
        raise InputError("%r is not a tree edge" % ((u, v),))

    def tree_edges(self):
        return [(self.parent[t], t) for t in self.nodes()
                if self.parent[t] >= 0]

    def subtree_nodes(self, t):
        """Nodes of the subtree rooted at t, in BFS order."""
        out = [t]
        i = 0
        while i < len(out):
            out.extend(self.children[out[i]])
            i += 1
        return out

    def occurrences(self, v):
        """Sorted node ids whose bag contains v."""
        if self._occurrences is None:
            occ = [[] for _ in range(self.host.n)]
            for t, b in enumerate(self.bags):
                for w in b:
                    occ[w].append(t)
            self._occurrences = tuple(tuple(o) for o in occ)
        self.host._check_vertex(v)
        return self._occurrences[v]

    def peak(self, v):
        """The node of v's occurrence subtree closest to the root.

        Uniqueness follows from occurrence-subtree connectivity and is
        checked rather than assumed.
        """
        occ = self.occurrences(v)
        if not occ:
            raise InputError("vertex %d is in no bag" % v)
        best = min(occ, key=lambda t: (self.depth[t], t))
        hits = [t for t in occ if self.depth[t] == self.depth[best]]
        if len(hits) != 1:
            raise InvariantError(
                "vertex %d tops out at several nodes %r; occurrence "
                "subtree is disconnected" % (v, hits))
        return best

    def torso(self, t):
        """Return (graph, vertex_list): bag graph plus adhesion cliques.

        vertex_list[i] is the host id of torso vertex i, sorted ascending.
        """
        verts = sorted(self.bags[t])
        index = {v: i for i, v in enumerate(verts)}
        edges = set()
        for u in verts:
            for w in self.host.adj[u]:
                if w in index and u < w:
                    edges.add((index[u], index[w]))
        cliques = [self.sigma[t]]
        cliques.extend(self.sigma[c] for c in self.children[t])
        for cl in cliques:
            cl = sorted(cl)
            for i in range(len(cl)):
                for j in range(i + 1, len(cl)):
                    a, b = index[cl[i]], index[cl[j]]
                    edges.add((min(a, b), max(a, b)))
        return Graph(len(verts), sorted(edges)), verts


def validate(td):
    """Check the decomposition invariants and report violations.

    The report's `ok` field covers vertex coverage, edge coverage, and
    occurrence-subtree connectivity. Subset-freeness between bags is
    reported separately via `subset_free`, since an un-normalized
    decomposition is still structurally valid; pipeline stages that
    demand a normalized one check both fields.
    """
    problems = []
    host = td.host
    covered = set()
    for b in td.bags:
        covered |= b
    missing = sorted(set(range(host.n)) - covered)
    if missing:
        problems.append("vertex %d is in no bag" % missing[0])

    for u, v in host.edges():
        if not any(u in b and v in b for b in td.bags):
            problems.append("edge (%d, %d) is in no bag" % (u, v))
            break

    for v in sorted(covered):
        occ = set(td.occurrences(v))
        # walk the occurrence set; connected iff one component in the tree
        start = next(iter(sorted(occ)))
        stack = [start]
        seen = {start}
        while stack:
            t = stack.pop()
            for nb in list(td.children[t]) + [td.parent[t]]:
                if nb >= 0 and nb in occ and nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        if seen != occ:
            problems.append("occurrence subtree of vertex %d is "
                            "disconnected" % v)
            break

    subset_free = True
    for i, a in enumerate(td.bags):
        for j, b in enumerate(td.bags):
            if i != j and a <= b:
                subset_free = False
                break
        if not subset_free:
            break

    return ValidationReport(ok=not problems, subset_free=subset_free,
                            problems=problems)


def normalize(td):
    """Contract tree edges whose bag intersection equals one endpoint bag.

    Repeats until no bag is a subset of an adjacent bag, which by
    occurrence-subtree connectivity means no bag is a subset of any
    other. Already-normalized input is returned unchanged.
    """
    bags = {t: set(td.bags[t]) for t in td.nodes()}
    nbrs = {t: set() for t in td.nodes()}
    for u, v in td.tree_edges():
        nbrs[u].add(v)
        nbrs[v].add(u)
    merged_into = {}
    changed = False
    while True:
        contract = None
        for u in sorted(bags):
            for v in sorted(nbrs[u]):
                if bags[u] <= bags[v]:
                    contract = (u, v)  # u disappears into v
                    break
                if bags[v] <= bags[u]:
                    contract = (v, u)
                    break
            if contract:
                break
        if not contract:
            break
        changed = True
        gone, keep = contract
        for w in nbrs[gone]:
            if w != keep:
                nbrs[w].discard(gone)
                nbrs[w].add(keep)
                nbrs[keep].add(w)
        nbrs[keep].discard(gone)
        del nbrs[gone], bags[gone]
        merged_into[gone] = keep
    if not changed:
        return td

    keep_ids = sorted(bags)
    index = {old: new for new, old in enumerate(keep_ids)}
    new_edges = set()
    for u in keep_ids:
        for v in nbrs[u]:
            new_edges.add((min(index[u], index[v]), max(index[u], index[v])))
    root = td.root
    while root in merged_into:
        root = merged_into[root]
    types = {index[t]: tag for t, tag in td.node_types.items() if t in index}
    apexes = {index[t]: s for t, s in td.apex_notes.items() if t in index}
    return TreeDecomposition(td.host, [bags[t] for t in keep_ids],
                             sorted(new_edges), root=index[root],
                             node_types=types, apex_notes=apexes)


# ---------------------------------------------------------------------------
# elimination-ordering heuristics

def _fill_count(work, v):
    nb = sorted(work[v])
    missing = 0
    for i in range(len(nb)):
        for j in range(i + 1, len(nb)):
            if nb[j] not in work[nb[i]]:
                missing += 1
    return missing


def heuristic_decomposition(g, strategy="min_fill"):
    """Tree decomposition from an elimination ordering, normalized.

    `strategy` picks the next vertex to eliminate: "min_degree" by
    current degree, "min_fill" by the number of neighbor pairs the
    elimination would have to connect. Ties go to the lowest vertex id.
    """
    if g.n == 0:
        raise InputError("cannot decompose the empty graph")
    if strategy not in ("min_degree", "min_fill"):
        raise InputError("unknown strategy %r" % (strategy,))

    work = {v: set(g.adj[v]) for v in range(g.n)}
    order = []
    bag_of = []
    while work:
        if strategy == "min_degree":
            v = min(work, key=lambda u: (len(work[u]), u))
        else:
            v = min(work, key=lambda u: (_fill_count(work, u), u))
        nb = sorted(work[v])
        bag_of.append(frozenset([v] + nb))
        order.append(v)
        for a in nb:
            for b in nb:
                if a < b:
                    work[a].add(b)
                    work[b].add(a)
            work[a].discard(v)
        del work[v]

    pos = {v: i for i, v in enumerate(order)}
    edges = []
    for i, v in enumerate(order[:-1]):
        later = [pos[u] for u in bag_of[i] if u != v and pos[u] > i]
        target = min(later) if later else i + 1
        edges.append((i, target))
    td = TreeDecomposition(g, bag_of, edges)
    return normalize(td)


def classify_node(td, t, h):
    """Split nodes by torso degree structure.

    A node whose torso has at most h vertices of degree above h is
    tagged low_high_degree; anything else is minor_structured with the
    h highest-degree torso vertices recorded as its apex set. Explicit
    annotations on the decomposition (from a decomposition file) take
    precedence over the census.
    """
    if h < 1:
        raise InputError("degree threshold must be at least 1")
    note = td.node_types.get(t)
    if note == "deg":
        return NodeType(LOW_HIGH_DEGREE, frozenset())
    torso, verts = td.torso(t)
    ranked = sorted(torso.vertices(),
                    key=lambda i: (-torso.degree(i), verts[i]))
    heavy = [verts[i] for i in ranked if torso.degree(i) > h]
    if note == "minor":
        apex = td.apex_notes.get(t)
        if apex is None:
            apex = frozenset(verts[i] for i in ranked[:h])
        return NodeType(MINOR_STRUCTURED, apex)
    if len(heavy) <= h:
        return NodeType(LOW_HIGH_DEGREE, frozenset())
    return NodeType(MINOR_STRUCTURED,
                    frozenset(verts[i] for i in ranked[:h]))


# ---------------------------------------------------------------------------
# decomposition file format
#
#   s td <#bags> <max bag size> <#host vertices>
#   b <bag id> <vertex> ...          (ids and vertices 1-indexed)
#   <bag id> <bag id>                (tree edges)
#   t <bag id> minor|deg             (optional node tag)
#   a <bag id> <vertex> ...          (optional apex note)

def to_td_text(td):
    width_plus = max(len(b) for b in td.bags)
    lines = ["s td %d %d %d" % (td.nnodes, width_plus, td.host.n)]
    for t in td.nodes():
        lines.append("b %d %s" % (t + 1,
                     " ".join(str(v + 1) for v in sorted(td.bags[t]))))
    for u, v in sorted((min(a, b), max(a, b)) for a, b in td.tree_edges()):
        lines.append("%d %d" % (u + 1, v + 1))
    for t in sorted(td.node_types):
        lines.append("t %d %s" % (t + 1, td.node_types[t]))
    for t in sorted(td.apex_notes):
        lines.append("a %d %s" % (t + 1,
                     " ".join(str(v + 1) for v in sorted(td.apex_notes[t]))))
    return "\n".join(lines) + "\n"


def from_td_text(text, host):
    nbags = None
    bags = {}
    edges = []
    types = {}
    apexes = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if nbags is not None:
                raise InputError("line %d: duplicate header" % lineno)
            if len(parts) != 5 or parts[1] != "td":
                raise InputError("line %d: malformed header" % lineno)
            nbags = int(parts[2])
            if int(parts[4]) != host.n:
                raise InputError("line %d: header says %s host vertices, "
                                 "graph has %d" % (lineno, parts[4], host.n))
        elif parts[0] == "b":
            if nbags is None:
                raise InputError("line %d: bag before header" % lineno)
            bid = int(parts[1]) - 1
            if not (0 <= bid < nbags) or bid in bags:
                raise InputError("line %d: bad bag id" % lineno)
            bags[bid] = frozenset(int(x) - 1 for x in parts[2:])
        elif parts[0] == "t":
            tag = parts[2] if len(parts) == 3 else None
            if tag not in ("minor", "deg"):
                raise InputError("line %d: node tag must be minor or deg"
                                 % lineno)
            types[int(parts[1]) - 1] = tag
        elif parts[0] == "a":
            apexes[int(parts[1]) - 1] = frozenset(int(x) - 1
                                                  for x in parts[2:])
        else:
            if len(parts) != 2 or nbags is None:
                raise InputError("line %d: unrecognized line %r"
                                 % (lineno, raw))
            edges.append((int(parts[0]) - 1, int(parts[1]) - 1))
    if nbags is None:
        raise InputError("missing header line")
    if len(bags) != nbags:
        raise InputError("header promises %d bags, found %d"
                         % (nbags, len(bags)))
    return TreeDecomposition(host, [bags[i] for i in range(nbags)], edges,
                             node_types=types, apex_notes=apexes)


def read_decomposition(path, host):
    with open(path, "r", encoding="ascii") as fh:
        return from_td_text(fh.read(), host)


def write_decomposition(td, path):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(to_td_text(td))
