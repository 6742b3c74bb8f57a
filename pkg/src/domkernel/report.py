"""Scaling study: kernel size against the planted parameter.

The guarantee worth having is a kernel linear in k, but the constant
is not something we can certify analytically at this scale. The honest
substitute is measurement: run the pipeline over families whose optimum
is known or computable, set k to that optimum, and record kernel sizes.
The per-family constant C = max |kernel| / k and a least-squares slope
get reported; seeds only relabel the vertices, so C should barely move
across them. The delimited output is byte-stable given the same
arguments; figures are a convenience rendering of the same rows.
"""

import random
from collections import namedtuple
from statistics import linear_regression

from .errors import InputError
from .graph import Graph, generate_instance
from .reducer import kernelize
from .solvers import ds_treewidth_dp
from .treedec import heuristic_decomposition, normalize

ScalingPoint = namedtuple("ScalingPoint",
                          ["family", "k", "seed", "n", "kernel_n"])

FitSummary = namedtuple("FitSummary",
                        ["family", "slope", "intercept", "big_c"])

FAMILIES = ("comb", "subdivided_grid")


def comb_instance(k):
    """Spine path of k vertices, one pendant leaf each; gamma is exactly
    k since the closed neighborhoods of the leaves are disjoint."""
    if k < 1:
        raise InputError("comb needs at least one tooth")
    edges = [(i, i + 1) for i in range(k - 1)]
    edges += [(i, k + i) for i in range(k)]
    return Graph(2 * k, edges)


def subdivide(g):
    """One new vertex in the middle of every edge."""
    edges = []
    mid = g.n
    for u, v in g.edges():
        edges.append((u, mid))
        edges.append((mid, v))
        mid += 1
    return Graph(mid, edges)


def subdivided_grid_instance(cols):
    """2 x cols grid with every edge subdivided, plus its optimum via the
    decomposition solver (the graph outgrows the search guard quickly)."""
    g = subdivide(generate_instance("grid", {"rows": 2, "cols": cols}))
    td = normalize(heuristic_decomposition(g))
    return g, ds_treewidth_dp(g, td)


def relabelled(g, seed):
    """Apply the seed's vertex permutation; seed 0 is the identity."""
    if seed == 0:
        return g
    perm = list(range(g.n))
    random.Random(seed).shuffle(perm)
    return Graph(g.n, [(perm[u], perm[v]) for u, v in g.edges()])


def scaling_points(family, ks, seeds):
    ks = sorted(set(ks))
    points = []
    if family == "comb":
        targets = [(comb_instance(k), k) for k in ks]
    elif family == "subdivided_grid":
        targets = []
        for cols in range(2, 40):
            g, gamma = subdivided_grid_instance(cols)
            if gamma > ks[-1]:
                break
            if gamma >= ks[0]:
                targets.append((g, gamma))
    else:
        raise InputError("unknown scaling family %r" % (family,))
    for g, k in targets:
        for seed in seeds:
            shuffled = relabelled(g, seed)
            res = kernelize(shuffled, k)
            if res.certificate != "kernel":
                raise InputError(
                    "family %s planted a wrong optimum at k=%d" % (family, k))
            points.append(ScalingPoint(family, k, seed, g.n, res.graph.n))
    return points


def fit(points):
    """One summary per family: least-squares slope of kernel size in k,
    and the single constant C that bounds every measured point."""
    out = []
    for family in sorted({p.family for p in points}):
        rows = [p for p in points if p.family == family]
        xs = [float(p.k) for p in rows]
        ys = [float(p.kernel_n) for p in rows]
        if len(set(xs)) > 1:
            slope, intercept = linear_regression(xs, ys)
        else:
            slope, intercept = 0.0, ys[0]
        big_c = max(p.kernel_n / p.k for p in rows)
        out.append(FitSummary(family, slope, intercept, big_c))
    return out


def seed_constants(points, family):
    """C recomputed per seed; relabelling should leave it nearly alone."""
    seeds = sorted({p.seed for p in points if p.family == family})
    return {seed: max(p.kernel_n / p.k for p in points
                      if p.family == family and p.seed == seed)
            for seed in seeds}


def write_points_tsv(points, path):
    lines = ["family\tk\tseed\tn\tkernel_n\tratio"]
    for p in points:
        lines.append("%s\t%d\t%d\t%d\t%d\t%.4f"
                     % (p.family, p.k, p.seed, p.n, p.kernel_n,
                        p.kernel_n / p.k))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def write_fit_tsv(fits, path):
    lines = ["family\tslope\tintercept\tC"]
    for f in fits:
        lines.append("%s\t%.4f\t%.4f\t%.4f"
                     % (f.family, f.slope, f.intercept, f.big_c))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def render_figure(points, fits, path):
    # lazy import keeps the pipeline paths free of plotting machinery
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    markers = {"comb": "o", "subdivided_grid": "s"}
    for f in fits:
        rows = [p for p in points if p.family == f.family]
        ax.scatter([p.k for p in rows], [p.kernel_n for p in rows],
                   marker=markers.get(f.family, "x"), alpha=0.7,
                   label="%s (C=%.2f)" % (f.family, f.big_c))
        ks = sorted({p.k for p in rows})
        ax.plot(ks, [f.big_c * k for k in ks], linestyle="--",
                linewidth=1.0)
    ax.set_xlabel("parameter k")
    ax.set_ylabel("kernel size")
    ax.set_title("kernel size vs parameter")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def run_study(out_dir, ks=range(2, 13), seeds=(0, 1, 2), figure=True):
    import os

    os.makedirs(out_dir, exist_ok=True)
    points = []
    for family in FAMILIES:
        points += scaling_points(family, ks, seeds)
    fits = fit(points)
    write_points_tsv(points, os.path.join(out_dir, "scaling.tsv"))
    write_fit_tsv(fits, os.path.join(out_dir, "scaling_fit.tsv"))
    if figure:
        render_figure(points, fits, os.path.join(out_dir, "scaling.png"))
    return points, fits
