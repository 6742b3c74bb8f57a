"""Graphs with a labeled boundary, their domination signatures, and
replacement tables.

A boundaried graph can be glued to another one along equal labels. Its
signature tabulates, for every way the boundary can interact with an
unknown other side, the cheapest local partial solution. Two graphs
with the same signature shape are interchangeable up to an additive
constant, which is what lets a large piece be swapped for a small
stored representative without changing the answer to any instance.

Boundary states per label: SELECTED means the vertex joins the
solution, FREE means the vertex stays out and this side must dominate
it, SATISFIED means the vertex stays out and the other side takes care
of it. Internal vertices are always dominated locally. The connected
variant additionally tracks how the selected boundary splits into
connected blocks, plus a flag for one solution component that misses
the boundary entirely.
"""

import itertools
import math
from collections import namedtuple

from .errors import CapacityError, IncompletenessError, InputError, \
    InvariantError
from .graph import Graph
from .solvers import CDS, DS, _ds_dp, _nice_events, threshold_or_inf
from .treedec import TreeDecomposition, heuristic_decomposition

SELECTED = "S"
FREE = "F"
SATISFIED = "T"

SIGNATURE_ENUM_GUARD = 12
CDS_SIGNATURE_GUARD = 10
CANONICAL_GUARD = 8

INF = math.inf

Signature = namedtuple("Signature", ["problem", "labels", "table"])


class BoundariedGraph:
    """An immutable graph plus an injective label -> vertex map."""

    __slots__ = ("graph", "labels")

    def __init__(self, graph, labels):
        labels = dict(labels)
        for lab, v in labels.items():
            if not isinstance(lab, int) or lab < 1:
                raise InputError("labels must be positive integers, got %r"
                                 % (lab,))
            if not 0 <= v < graph.n:
                raise InputError("label %d points at missing vertex %d"
                                 % (lab, v))
        if len(set(labels.values())) != len(labels):
            raise InputError("labels must point at distinct vertices")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "labels", dict(sorted(labels.items())))

    def __setattr__(self, name, value):
        raise AttributeError("boundaried graphs are immutable")

    def used_labels(self):
        return tuple(sorted(self.labels))

    def boundary(self):
        return frozenset(self.labels.values())

    def label_of(self, v):
        for lab, u in self.labels.items():
            if u == v:
                return lab
        return None

    def canonical_code(self):
        """Order-independent encoding; labeled vertices stay pinned.

        Two boundaried graphs get the same code exactly when some
        relabeling of the unlabeled vertices maps one onto the other.
        """
        n = self.graph.n
        labeled = [v for _, v in sorted(self.labels.items())]
        rest = sorted(set(range(n)) - set(labeled))
        if len(rest) > CANONICAL_GUARD:
            raise CapacityError("%d unlabeled vertices is past the "
                                "canonical form guard" % len(rest))
        best = None
        for perm in itertools.permutations(rest):
            order = labeled + list(perm)
            pos = {old: i for i, old in enumerate(order)}
            code = tuple(sorted(
                (min(pos[u], pos[v]), max(pos[u], pos[v]))
                for u, v in self.graph.edges()))
            if best is None or code < best:
                best = code
        if best is None:
            best = ()
        return (n, self.used_labels(), best)

    def __eq__(self, other):
        if not isinstance(other, BoundariedGraph):
            return NotImplemented
        return self.graph == other.graph and self.labels == other.labels

    def __hash__(self):
        return hash((self.graph, tuple(sorted(self.labels.items()))))

    def __repr__(self):
        return "BoundariedGraph(%r, %r)" % (self.graph, self.labels)


def glue(bg1, bg2):
    """Identify equal labels, returning the glued graph and the id map
    for the second argument (the first one keeps its ids)."""
    map2 = {}
    for lab, v2 in bg2.labels.items():
        if lab in bg1.labels:
            map2[v2] = bg1.labels[lab]
    nxt = bg1.graph.n
    for v2 in range(bg2.graph.n):
        if v2 not in map2:
            map2[v2] = nxt
            nxt += 1
    edges = list(bg1.graph.edges())
    edges.extend((map2[u], map2[v]) for u, v in bg2.graph.edges())
    return Graph(nxt, edges), tuple(map2[v] for v in range(bg2.graph.n))


def glue_boundaried(bg1, bg2):
    """Glue and keep the union of the labelings on the result."""
    g, map2 = glue(bg1, bg2)
    labels = dict(bg1.labels)
    for lab, v2 in bg2.labels.items():
        labels[lab] = map2[v2]
    return BoundariedGraph(g, labels)


# ---------------------------------------------------------------------------
# signatures

def _ds_signature_enum(bg):
    # direct scan over local solutions; the reference implementation
    g = bg.graph
    labels = bg.used_labels()
    lab_vertex = [bg.labels[lab] for lab in labels]
    boundary = set(lab_vertex)
    internal = [v for v in range(g.n) if v not in boundary]
    masks = g.neighbor_masks()
    internal_mask = 0
    for v in internal:
        internal_mask |= 1 << v
    table = {}
    for state in itertools.product((SELECTED, FREE, SATISFIED),
                                   repeat=len(labels)):
        sel_mask = 0
        need = internal_mask
        for st, v in zip(state, lab_vertex):
            if st == SELECTED:
                sel_mask |= 1 << v
            elif st == FREE:
                need |= 1 << v
        best = INF
        for pick in range(1 << len(internal)):
            d_mask = sel_mask
            for i in range(len(internal)):
                if pick >> i & 1:
                    d_mask |= 1 << internal[i]
            covered = 0
            rest = d_mask
            while rest:
                v = rest.bit_length() - 1
                covered |= masks[v]
                rest ^= 1 << v
            if need & ~covered == 0:
                count = d_mask.bit_count()
                if count < best:
                    best = count
        if best is not INF:
            table[state] = best
    return Signature(DS, labels, table)


def _ds_signature_dp(bg):
    # boundary vertices ride along in every bag so their fate stays
    # visible until the end
    g = bg.graph
    labels = bg.used_labels()
    if g.n == 0:
        return Signature(DS, labels, {(): 0})
    boundary = bg.boundary()
    base = heuristic_decomposition(g)
    bags = [bag | boundary for bag in base.bags]
    td = TreeDecomposition(g, bags, list(base.tree_edges()))
    events = _nice_events(td)
    lab_vertex = [bg.labels[lab] for lab in labels]
    table = {}
    for state in itertools.product((SELECTED, FREE, SATISFIED),
                                   repeat=len(labels)):
        forced = [v for st, v in zip(state, lab_vertex) if st == SELECTED]
        relaxed = [v for st, v in zip(state, lab_vertex) if st == SATISFIED]
        forbidden = [v for st, v in zip(state, lab_vertex)
                     if st != SELECTED]
        val = _ds_dp(g, events, forced_in=forced, forbidden=forbidden,
                     relaxed=relaxed)
        if val is not INF:
            table[state] = val
    return Signature(DS, labels, table)


def ds_signature(bg):
    if bg.graph.n <= SIGNATURE_ENUM_GUARD:
        return _ds_signature_enum(bg)
    return _ds_signature_dp(bg)


def cds_signature(bg, guard=CDS_SIGNATURE_GUARD):
    """Signature for the connected variant, by exhausting local choices.

    States are (chars, blocks, lone_internal): chars as for plain
    domination, blocks the partition of selected labels into connected
    pieces of the local solution, lone_internal marking one solution
    component that avoids the boundary. Local solutions that can never
    become connected (two boundary-free components, or one next to
    boundary blocks, or one while a label still waits on the far side)
    are dropped outright.
    """
    g = bg.graph
    if g.n > guard:
        raise CapacityError("%d vertices is past the connected signature "
                            "guard of %d" % (g.n, guard))
    labels = bg.used_labels()
    lab_vertex = [bg.labels[lab] for lab in labels]
    vertex_lab = {v: lab for lab, v in bg.labels.items()}
    boundary = set(lab_vertex)
    internal = [v for v in range(g.n) if v not in boundary]
    masks = g.neighbor_masks()
    table = {}
    for d_mask in range(1 << g.n):
        d_set = frozenset(v for v in range(g.n) if d_mask >> v & 1)
        undominated_internal = False
        covered = 0
        for v in d_set:
            covered |= masks[v]
        for v in internal:
            if not covered >> v & 1:
                undominated_internal = True
                break
        if undominated_internal:
            continue
        sub, mapping = g.induced_subgraph(d_set)
        blocks = []
        lone_internal = 0
        for comp in sub.connected_components():
            labs = sorted(vertex_lab[mapping[i]] for i in comp
                          if mapping[i] in vertex_lab)
            if labs:
                blocks.append(tuple(labs))
            else:
                lone_internal += 1
        if lone_internal >= 2:
            continue
        if lone_internal == 1 and blocks:
            continue
        blocks = tuple(sorted(blocks))
        flag = lone_internal == 1
        selected = {lab for lab, v in bg.labels.items() if v in d_set}
        choice_lists = []
        dead = False
        for lab in labels:
            if lab in selected:
                choice_lists.append((SELECTED,))
            elif covered >> bg.labels[lab] & 1:
                # a boundary-free solution component tolerates no other
                # solution vertex anywhere, so "the far side dominates
                # this label" can never glue; keep only the local form
                choice_lists.append((FREE,) if flag else (FREE, SATISFIED))
            else:
                if flag:
                    dead = True
                    break
                choice_lists.append((SATISFIED,))
        if dead:
            continue
        cost = len(d_set)
        for chars in itertools.product(*choice_lists):
            state = (chars, blocks, flag)
            if table.get(state, INF) > cost:
                table[state] = cost
    return Signature(CDS, labels, table)


def signature(bg, problem):
    if problem == DS:
        return ds_signature(bg)
    if problem == CDS:
        return cds_signature(bg)
    raise InputError("unknown problem %r" % (problem,))


def normalize_signature(sig):
    """Class key and offset: the key drops the overall additive level,
    the offset (minimum finite entry) is returned separately. A table
    with no finite entry keys its own class and has offset None."""
    if not sig.table:
        return (sig.problem, sig.labels, ()), None
    base = min(sig.table.values())
    items = tuple(sorted((state, cost - base)
                         for state, cost in sig.table.items()))
    return (sig.problem, sig.labels, items), base


def signatures_equivalent(a, b):
    """The transfer constant c with Thr(b + F) = Thr(a + F) + c for all
    fillers F, or None when the signatures are in different classes."""
    key_a, base_a = normalize_signature(a)
    key_b, base_b = normalize_signature(b)
    if key_a != key_b:
        return None
    if base_a is None:
        return 0
    return base_b - base_a


def _chars_of(problem, state):
    return state if problem == DS else state[0]


def _compatible_chars(chars1, chars2, labels1, labels2):
    # selected must agree on shared labels; a non-selected label must be
    # dominated by a side that actually contains it
    pos1 = {lab: i for i, lab in enumerate(labels1)}
    pos2 = {lab: i for i, lab in enumerate(labels2)}
    shared = 0
    for lab in labels1:
        if lab in pos2:
            c1, c2 = chars1[pos1[lab]], chars2[pos2[lab]]
            if (c1 == SELECTED) != (c2 == SELECTED):
                return None
            if c1 == SELECTED:
                shared += 1
            elif FREE not in (c1, c2):
                return None
        elif chars1[pos1[lab]] == SATISFIED:
            return None
    for lab in labels2:
        if lab not in pos1 and chars2[pos2[lab]] == SATISFIED:
            return None
    return shared


def _connected_when_glued(state1, state2):
    # union-find across the two block lists; flags are loose components
    (_, blocks1, flag1) = state1
    (_, blocks2, flag2) = state2
    items = [("a", i) for i in range(len(blocks1))]
    items += [("b", i) for i in range(len(blocks2))]
    parent = {it: it for it in items}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    where2 = {}
    for i, block in enumerate(blocks2):
        for lab in block:
            where2[lab] = ("b", i)
    for i, block in enumerate(blocks1):
        for lab in block:
            if lab in where2:
                union(("a", i), where2[lab])
    components = len({find(it) for it in items})
    components += int(flag1) + int(flag2)
    return components == 1


def compose_threshold(sig1, sig2):
    """Optimum of the glued graph straight from the two tables."""
    if sig1.problem != sig2.problem:
        raise InputError("cannot compose signatures of different problems")
    problem = sig1.problem
    best = INF
    for s1, c1 in sig1.table.items():
        chars1 = _chars_of(problem, s1)
        for s2, c2 in sig2.table.items():
            chars2 = _chars_of(problem, s2)
            shared = _compatible_chars(chars1, chars2,
                                       sig1.labels, sig2.labels)
            if shared is None:
                continue
            if problem == CDS and not _connected_when_glued(s1, s2):
                continue
            total = c1 + c2 - shared
            if total < best:
                best = total
    return best


# ---------------------------------------------------------------------------
# equivalence by definition, for checking the signature route

def enumerate_boundaried(t, size_limit):
    """All boundaried graphs up to relabeling of unlabeled vertices,
    with labels from {1..t} sitting on the lowest vertex ids."""
    if t < 0 or size_limit < 0:
        raise InputError("capacity and size limit must be nonnegative")
    seen = set()
    out = []
    universe = list(range(1, t + 1))
    for n in range(size_limit + 1):
        label_sets = []
        for size in range(min(n, t) + 1):
            label_sets.extend(itertools.combinations(universe, size))
        pairs = list(itertools.combinations(range(n), 2))
        for label_set in label_sets:
            labels = {lab: i for i, lab in enumerate(sorted(label_set))}
            for pick in range(1 << len(pairs)):
                edges = [pairs[i] for i in range(len(pairs))
                         if pick >> i & 1]
                bg = BoundariedGraph(Graph(n, edges), labels)
                code = bg.canonical_code()
                if code in seen:
                    continue
                seen.add(code)
                out.append(bg)
    return out


def definitional_equivalence_oracle(bg1, bg2, problem, t=None,
                                    filler_size_limit=3):
    """Transfer constant from first principles: glue every small filler
    onto both graphs and compare optima. None when any filler tells the
    two apart; both-infinite outcomes constrain nothing."""
    if t is None:
        t = max((0,) + bg1.used_labels() + bg2.used_labels())
    c = None
    for filler in enumerate_boundaried(t, filler_size_limit):
        t1 = threshold_or_inf(glue(bg1, filler)[0], problem)
        t2 = threshold_or_inf(glue(bg2, filler)[0], problem)
        if t1 is INF and t2 is INF:
            continue
        if t1 is INF or t2 is INF:
            return None
        if c is None:
            c = t2 - t1
        elif c != t2 - t1:
            return None
    return 0 if c is None else c


def distinguishing_filler(bg1, bg2, problem, t=None, filler_size_limit=3):
    """A filler witnessing inequivalence: (filler, thr1, thr2) with the
    two thresholds differing by something other than the established
    constant; None when no small filler separates them."""
    if t is None:
        t = max((0,) + bg1.used_labels() + bg2.used_labels())
    c = None
    for filler in enumerate_boundaried(t, filler_size_limit):
        t1 = threshold_or_inf(glue(bg1, filler)[0], problem)
        t2 = threshold_or_inf(glue(bg2, filler)[0], problem)
        if t1 is INF and t2 is INF:
            continue
        if t1 is INF or t2 is INF:
            return filler, t1, t2
        if c is None:
            c = t2 - t1
        elif c != t2 - t1:
            return filler, t1, t2
    return None


# ---------------------------------------------------------------------------
# representatives

class RepresentativeTable:
    """One smallest representative per signature class, with the
    pairwise glued optima kept for cross-checking replacements."""

    FORMAT = "reptable v1"

    def __init__(self, problem, t, size_limit, reps, bases, thr_matrix):
        self.problem = problem
        self.t = t
        self.size_limit = size_limit
        self.reps = list(reps)
        self.bases = list(bases)
        self.thr_matrix = [list(row) for row in thr_matrix]
        self.xi = 1 + max((bg.graph.n for bg in self.reps), default=0)
        self._signatures = [None] * len(self.reps)
        self._index = None

    def signature_of(self, i):
        if self._signatures[i] is None:
            self._signatures[i] = signature(self.reps[i], self.problem)
        return self._signatures[i]

    def class_index(self):
        if self._index is None:
            self._index = {}
            for i in range(len(self.reps)):
                key, _ = normalize_signature(self.signature_of(i))
                self._index[key] = i
        return self._index

    def find(self, key):
        return self.class_index().get(key)

    def serialize(self):
        lines = [self.FORMAT,
                 "problem %s" % self.problem,
                 "t %d" % self.t,
                 "size_limit %d" % self.size_limit,
                 "xi %d" % self.xi,
                 "reps %d" % len(self.reps)]
        for i, bg in enumerate(self.reps):
            lines.append("rep %d" % i)
            lines.append("n %d" % bg.graph.n)
            lines.append("labels %s" % ",".join(
                "%d:%d" % (lab, v) for lab, v in sorted(bg.labels.items())))
            lines.append("edges %s" % ",".join(
                "%d-%d" % (u, v) for u, v in bg.graph.edges()))
            lines.append("base %s" % _fmt(self.bases[i]))
        lines.append("matrix")
        for row in self.thr_matrix:
            lines.append(" ".join(_fmt(x) for x in row))
        lines.append("end")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text):
        lines = text.splitlines()
        if not lines or lines[0] != cls.FORMAT:
            raise InputError("unrecognized table header")
        fields = {}
        pos = 1
        for name in ("problem", "t", "size_limit", "xi", "reps"):
            parts = lines[pos].split()
            if len(parts) != 2 or parts[0] != name:
                raise InputError("expected '%s ...' on line %d"
                                 % (name, pos + 1))
            fields[name] = parts[1]
            pos += 1
        count = int(fields["reps"])
        reps, bases = [], []
        for i in range(count):
            if lines[pos] != "rep %d" % i:
                raise InputError("expected 'rep %d' on line %d"
                                 % (i, pos + 1))
            n = int(lines[pos + 1].split()[1])
            label_field = lines[pos + 2].split(" ", 1)
            labels = {}
            if len(label_field) > 1 and label_field[1]:
                for item in label_field[1].split(","):
                    lab, v = item.split(":")
                    labels[int(lab)] = int(v)
            edge_field = lines[pos + 3].split(" ", 1)
            edges = []
            if len(edge_field) > 1 and edge_field[1]:
                for item in edge_field[1].split(","):
                    u, v = item.split("-")
                    edges.append((int(u), int(v)))
            reps.append(BoundariedGraph(Graph(n, edges), labels))
            bases.append(_parse_num(lines[pos + 4].split()[1]))
            pos += 5
        if lines[pos] != "matrix":
            raise InputError("expected 'matrix' on line %d" % (pos + 1))
        pos += 1
        matrix = []
        for _ in range(count):
            matrix.append([_parse_num(x) for x in lines[pos].split()])
            if len(matrix[-1]) != count:
                raise InputError("matrix row %d has %d entries, wanted %d"
                                 % (len(matrix), len(matrix[-1]), count))
            pos += 1
        if lines[pos] != "end":
            raise InputError("expected 'end' on line %d" % (pos + 1))
        table = cls(fields["problem"], int(fields["t"]),
                    int(fields["size_limit"]), reps, bases, matrix)
        if table.xi != int(fields["xi"]):
            raise InputError("stored xi %s disagrees with the reps"
                             % fields["xi"])
        return table


def _fmt(x):
    return "inf" if x is None or x is INF else "%d" % x


def _parse_num(text):
    return INF if text == "inf" else int(text)


def enumerate_representatives(problem, t, size_limit):
    """Build the table: group the small universe by signature class,
    keep the cheapest-then-smallest member of each class, and record
    every pairwise glued optimum."""
    universe = enumerate_boundaried(t, size_limit)
    classes = {}
    for bg in universe:
        key, base = normalize_signature(signature(bg, problem))
        rank = (base if base is not None else INF, bg.graph.n,
                bg.canonical_code())
        kept = classes.get(key)
        if kept is None or rank < kept[0]:
            classes[key] = (rank, bg, base)
    ordered = sorted(classes.items(), key=lambda item: item[1][0])
    reps = [bg for _, (_, bg, _) in ordered]
    bases = [base for _, (_, _, base) in ordered]
    matrix = []
    for bg1 in reps:
        row = []
        for bg2 in reps:
            glued, _ = glue(bg1, bg2)
            row.append(threshold_or_inf(glued, problem))
        matrix.append(row)
    return RepresentativeTable(problem, t, size_limit, reps, bases, matrix)


def reduce_via_representatives(bg, table):
    """Swap bg for its class representative.

    Returns (rep, c) with the guarantee that replacing bg by rep turns
    any surrounding instance (G, k) into one with answer preserved at
    (G', k + c). Every call re-checks the guarantee against the stored
    matrix and raises InvariantError on any mismatch; a class missing
    from the table raises IncompletenessError.
    """
    if max(bg.used_labels(), default=0) > table.t:
        raise InputError("graph uses label %d beyond table capacity %d"
                         % (max(bg.used_labels()), table.t))
    sig = signature(bg, table.problem)
    key, base = normalize_signature(sig)
    idx = table.find(key)
    if idx is None:
        raise IncompletenessError(
            "no representative stored for this signature class "
            "(%d states)" % len(sig.table))
    rep_base = table.bases[idx]
    shift = 0 if base is None else base - rep_base
    for j in range(len(table.reps)):
        direct = compose_threshold(sig, table.signature_of(j))
        stored = table.thr_matrix[idx][j]
        expected = INF if stored is INF else stored + shift
        if direct != expected:
            raise InvariantError(
                "replacement table row mismatch at column %d: %s vs %s"
                % (j, direct, expected))
    return table.reps[idx], (0 if base is None else rep_base - base)
