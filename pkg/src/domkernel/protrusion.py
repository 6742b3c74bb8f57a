"""Protrusions: large pieces hanging off a small boundary, and their
replacement by stored representatives.

A piece X qualifies when every edge leaving X goes through a small
rim (its boundary within X) and the piece is structurally simple in
one of three certified ways: a small set dominates it (kind "ds" or
"cds"), or it has small width (kind "tw"). Replacement swaps the
interior of X for the representative of its signature class, shifting
the target parameter by the reported constant. Soundness comes from
the signature machinery alone; the kind only certifies size bounds,
so a wrong kind can make a replacement unavailable but never wrong.
"""

from collections import namedtuple

from .errors import InputError, ReplacementRefused
from .boundaried import BoundariedGraph, glue, reduce_via_representatives
from .graph import closed_neighborhood
from .treedec import heuristic_decomposition

DS_KIND = "ds"
TW_KIND = "tw"
CDS_KIND = "cds"

Protrusion = namedtuple("Protrusion", ["vertices", "boundary", "kind",
                                       "witness"])

ReplacementResult = namedtuple("ReplacementResult",
                               ["graph", "constant", "kept_map",
                                "rep_vertices"])


def compute_boundary(g, vertices):
    """Vertices of the set with at least one neighbor outside it."""
    vertices = frozenset(vertices)
    return frozenset(v for v in vertices if g.adj[v] - vertices)


def make_protrusion(g, vertices, kind, witness):
    vertices = frozenset(vertices)
    for v in vertices:
        g._check_vertex(v)
    if kind not in (DS_KIND, TW_KIND, CDS_KIND):
        raise InputError("unknown protrusion kind %r" % (kind,))
    return Protrusion(vertices, compute_boundary(g, vertices), kind,
                      witness)


def verify_protrusion(g, p):
    """Check the certificate: "ok", "failed", or "unverified".

    Width certificates rely on a heuristic decomposition, so a blown
    width bound is inconclusive rather than disproven.
    """
    if p.boundary != compute_boundary(g, p.vertices):
        return "failed"
    if not p.boundary <= p.vertices:
        return "failed"
    if p.kind in (DS_KIND, CDS_KIND):
        witness = frozenset(p.witness)
        if not witness <= frozenset(range(g.n)):
            return "failed"
        if p.vertices <= closed_neighborhood(g, witness):
            return "ok"
        return "failed"
    # width bound
    piece, _ = g.induced_subgraph(p.vertices)
    if piece.n == 0:
        return "ok"
    td = heuristic_decomposition(piece)
    if td.width() <= p.witness:
        return "ok"
    return "unverified"


def replace_protrusion(g, p, table):
    """Swap the interior of the protrusion for its representative.

    Returns the rebuilt graph, the parameter shift, the id map for
    every kept vertex, and the new ids of the representative. Refuses
    (ReplacementRefused) when the stored representative is not
    actually smaller than the piece, so a successful replacement
    always strictly shrinks the graph.
    """
    if len(p.boundary) > table.t:
        raise InputError("boundary size %d exceeds table capacity %d"
                         % (len(p.boundary), table.t))
    piece, piece_verts = g.induced_subgraph(p.vertices)
    rim = sorted(p.boundary)
    to_piece = {old: new for new, old in enumerate(piece_verts)}
    piece_bg = BoundariedGraph(
        piece, {i + 1: to_piece[v] for i, v in enumerate(rim)})
    rep, constant = reduce_via_representatives(piece_bg, table)
    if rep.graph.n >= piece.n:
        raise ReplacementRefused(
            "representative has %d vertices, piece has %d"
            % (rep.graph.n, piece.n))
    interior = p.vertices - p.boundary
    kept = [v for v in range(g.n) if v not in interior]
    rest, rest_verts = g.induced_subgraph(kept)
    kept_map = {old: new for new, old in enumerate(rest_verts)}
    rest_bg = BoundariedGraph(
        rest, {i + 1: kept_map[v] for i, v in enumerate(rim)})
    glued, map2 = glue(rest_bg, rep)
    assert glued.n < g.n
    return ReplacementResult(graph=glued, constant=constant,
                             kept_map=kept_map, rep_vertices=map2)


def find_large_protrusion(g, td, table):
    """First decomposition subtree that is big enough to pay for a
    replacement and hangs off a rim the table can absorb."""
    if td.host != g:
        raise InputError("decomposition belongs to a different graph")
    for t in td.nodes():
        if t == td.root:
            continue
        area = td.gamma[t]
        if len(area) >= g.n or len(area) <= table.xi:
            continue
        if len(td.sigma[t]) > table.t:
            continue
        width = max(len(td.bags[s]) for s in td.subtree_nodes(t)) - 1
        return make_protrusion(g, area, TW_KIND, width)
    return None
