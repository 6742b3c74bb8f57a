"""Command-line front end.

Five subcommands: `kernelize` runs the reduction pipeline and writes
the kernel plus trace and stats artifacts, `verify` replays instances
against the brute-force solvers, `approx` emits the approximate cover,
`tables` materializes a representative table, and `report` runs the
scaling study. Artifacts are plain text with a stable field order, so
reruns on the same input produce the same bytes; wall-clock timing
goes to stderr where it cannot spoil that.

Exit codes: 0 kernel or successful run, 1 NO-certificate, 2 bad or
oversized input, 3 broken internal invariant (including a failed
verification).
"""

import argparse
import os
import sys
import time

from .approx import approx_cds, approx_colored_ds
from .boundaried import RepresentativeTable, enumerate_representatives
from .errors import CapacityError, InputError
from .graph import (is_connected_dominating_set, is_dominating_set,
                    read_graph, write_graph)
from .reducer import NO_PARAMETER, kernelize
from .slicedec import build_slice_decomposition
from .solvers import (CDS, CDS_GUARD, DS, DS_GUARD, INF, ColoredInstance,
                      cds_opt_bruteforce, minimum_ds_size)
from .treedec import heuristic_decomposition, normalize, read_decomposition

EXIT_KERNEL = 0
EXIT_NO_CERTIFICATE = 1
EXIT_INPUT = 2
EXIT_INVARIANT = 3

# enumeration cost explodes past these; the guards are hard caps
TABLE_T_CAP = 2
TABLE_SIZE_CAP = 5


def _load_table(path, problem):
    with open(path) as fh:
        table = RepresentativeTable.parse(fh.read())
    if table.problem != problem:
        raise InputError("table solves %s, run asked for %s"
                         % (table.problem, problem))
    return table


def _threshold_or_inf(g, problem, guard):
    """Brute-force optimum; infinite when no solution can exist."""
    if problem == CDS:
        if g.n == 0 or not g.is_connected():
            return INF
        return len(cds_opt_bruteforce(g, guard=guard))
    return minimum_ds_size(g, guard=guard)


def _guard_for(args):
    base = DS_GUARD if args.problem == DS else CDS_GUARD
    return max(base, args.guard_n) if args.guard_n else base


def _input_stats(g, h, problem, td, guard):
    """Measured structure of the input: approximation size and factor,
    slice count alpha, and the decomposition's adhesion budget."""
    if g.n == 0:
        return {"h_prime": h, "approx_size": 0, "eta": 0,
                "certified": "yes", "alpha": 0, "boundary_budget": 0}
    dec = normalize(td) if td is not None \
        else normalize(heuristic_decomposition(g))
    h_eff = max(h, dec.adhesion())
    if problem == DS:
        approx = approx_colored_ds(ColoredInstance.fresh(g), dec, h_eff,
                                   guard=guard)
    else:
        approx = approx_cds(g, dec, h_eff, guard=guard)
    out = {"h_prime": h_eff, "approx_size": len(approx.solution),
           "eta": approx.eta,
           "certified": "yes" if approx.certified else "no"}
    try:
        sd = build_slice_decomposition(g, dec, frozenset(approx.solution),
                                       h_eff)
        out["alpha"] = len(sd.slices)
        out["boundary_budget"] = sd.adhesion_budget
    except (CapacityError, AssertionError):
        out["alpha"] = "na"
        out["boundary_budget"] = "na"
    return out


def _stats_text(args, g, res, extra):
    size = res.graph.n
    approx_size = extra["approx_size"]
    delta = size / approx_size if approx_size else 0.0
    lines = [
        "problem %s" % args.problem,
        "n %d" % g.n,
        "m %d" % g.m,
        "k %d" % args.k,
        "h %d" % args.h,
        "h_prime %s" % extra["h_prime"],
        "status %s" % ("kernel" if res.certificate == "kernel"
                       else "no_certificate"),
        "kernel_n %d" % res.graph.n,
        "kernel_m %d" % res.graph.m,
        "k_prime %d" % res.k,
        "constant %d" % res.constant,
        "rounds %d" % res.rounds,
        "approx_size %s" % approx_size,
        "eta %s" % extra["eta"],
        "certified %s" % extra["certified"],
        "alpha %s" % extra["alpha"],
        "boundary_budget %s" % extra["boundary_budget"],
        "delta %.4f" % delta,
    ]
    return "\n".join(lines) + "\n"


def _trace_text(g, res):
    lines = ["step\taction\tremoved\tconstant\tn_after\tdetail"]
    n = g.n
    for i, step in enumerate(res.trace, start=1):
        n -= step.removed
        lines.append("%d\t%s\t%d\t%d\t%d\t%s"
                     % (i, step.action, step.removed, step.constant, n,
                        step.detail))
    return "\n".join(lines) + "\n"


def run_kernelize(args):
    g = read_graph(args.graph)
    td = read_decomposition(args.td, g) if args.td else None
    table = _load_table(args.tables, args.problem) if args.tables else None
    guard = _guard_for(args)
    t0 = time.monotonic()
    res = kernelize(g, args.k, problem=args.problem, h=args.h, td=td,
                    table=table, guard=guard, apex_mode=args.apex_mode,
                    max_rounds=args.max_rounds)
    extra = _input_stats(g, args.h, args.problem, td, guard)
    elapsed = time.monotonic() - t0
    prefix = args.out if args.out else os.path.splitext(args.graph)[0]
    write_graph(res.graph, prefix + ".kernel.gr")
    with open(prefix + ".trace.txt", "w") as fh:
        fh.write(_trace_text(g, res))
    with open(prefix + ".stats.txt", "w") as fh:
        fh.write(_stats_text(args, g, res, extra))
    print("runtime %.3fs" % elapsed, file=sys.stderr)
    if res.certificate == "kernel":
        print("kernel %d vertices, k' = %d (constant %d, %d rounds)"
              % (res.graph.n, res.k, res.constant, res.rounds))
        return EXIT_KERNEL
    reason = res.trace[-1].detail if res.trace else "parameter exhausted"
    print("NO certificate: %s" % reason)
    return EXIT_NO_CERTIFICATE


def run_verify(args):
    g = read_graph(args.graph)
    guard = _guard_for(args)
    failures = 0
    if args.kernel:
        if args.k is None or args.kprime is None:
            raise InputError("verifying a kernel file needs -k and --kprime")
        kernel = read_graph(args.kernel)
        thr_in = _threshold_or_inf(g, args.problem, guard)
        if kernel.n == 0 and args.kprime == NO_PARAMETER:
            ok = thr_in > args.k
            print("k=%d NO-certificate %s" % (args.k,
                                              "PASS" if ok else "FAIL"))
            failures += 0 if ok else 1
        else:
            c = args.kprime - args.k
            thr_out = _threshold_or_inf(kernel, args.problem, guard)
            for j in range(g.n + 1):
                ok = (thr_in <= j) == (thr_out <= j + c)
                print("k=%d %s" % (j, "PASS" if ok else "FAIL"))
                failures += 0 if ok else 1
    else:
        table = _load_table(args.tables, args.problem) if args.tables \
            else None
        thr_in = _threshold_or_inf(g, args.problem, guard)
        for j in range(g.n + 1):
            res = kernelize(g, j, problem=args.problem, h=args.h,
                            table=table, guard=guard)
            if res.certificate == "kernel":
                got = _threshold_or_inf(res.graph, args.problem,
                                        guard) <= res.k
            else:
                got = False
            ok = (thr_in <= j) == got
            print("k=%d %s" % (j, "PASS" if ok else "FAIL"))
            failures += 0 if ok else 1
    if failures:
        print("verify: %d FAIL" % failures)
        return EXIT_INVARIANT
    print("verify: all PASS")
    return EXIT_KERNEL


def run_approx(args):
    g = read_graph(args.graph)
    td = read_decomposition(args.td, g) if args.td else None
    dec = normalize(td) if td is not None \
        else normalize(heuristic_decomposition(g))
    h_eff = max(args.h, dec.adhesion())
    guard = _guard_for(args)
    t0 = time.monotonic()
    if args.problem == DS:
        res = approx_colored_ds(ColoredInstance.fresh(g), dec, h_eff,
                                guard=guard)
        assert is_dominating_set(g, res.solution)
    else:
        res = approx_cds(g, dec, h_eff, guard=guard)
        assert is_connected_dominating_set(g, res.solution)
    print("runtime %.3fs" % (time.monotonic() - t0), file=sys.stderr)
    solution = sorted(res.solution)
    print("size %d" % len(solution))
    print("eta %d" % res.eta)
    print("certified %s" % ("yes" if res.certified else "no"))
    print("solution %s" % " ".join(str(v) for v in solution))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("\n".join(str(v) for v in solution))
            fh.write("\n" if solution else "")
    return EXIT_KERNEL


def run_tables(args):
    if args.t > TABLE_T_CAP:
        raise CapacityError("boundary width capped at %d, got %d"
                            % (TABLE_T_CAP, args.t))
    if args.size_limit > TABLE_SIZE_CAP:
        raise CapacityError("member size capped at %d, got %d"
                            % (TABLE_SIZE_CAP, args.size_limit))
    if args.t < 0 or args.size_limit < 1:
        raise InputError("table parameters out of range")
    t0 = time.monotonic()
    table = enumerate_representatives(args.problem, args.t,
                                      args.size_limit)
    print("runtime %.3fs" % (time.monotonic() - t0), file=sys.stderr)
    out = args.out or "%s_t%d_s%d.reptable" % (args.problem, args.t,
                                               args.size_limit)
    with open(out, "w") as fh:
        fh.write(table.serialize())
    print("classes %d" % len(table.reps))
    print("xi %d" % table.xi)
    print("wrote %s" % out)
    return EXIT_KERNEL


def run_report(args):
    from .report import fit, run_study, seed_constants

    seeds = tuple(int(s) for s in args.seeds.split(","))
    t0 = time.monotonic()
    points, fits = run_study(args.out_dir,
                             ks=range(2, args.kmax + 1),
                             seeds=seeds, figure=args.figure)
    print("runtime %.3fs" % (time.monotonic() - t0), file=sys.stderr)
    for f in fits:
        cs = seed_constants(points, f.family)
        spread = max(cs.values()) / min(cs.values())
        print("family %s slope %.4f C %.4f seed_spread %.4f"
              % (f.family, f.slope, f.big_c, spread))
    print("wrote %s" % os.path.join(args.out_dir, "scaling.tsv"))
    return EXIT_KERNEL


def _add_common(sub, k_required=False):
    sub.add_argument("--graph", required=True, help="input .gr file")
    sub.add_argument("--problem", choices=(DS, CDS), default=DS)
    sub.add_argument("--h", type=int, default=1,
                     help="excluded-structure parameter, at least 1")
    sub.add_argument("--guard-n", type=int, default=0, dest="guard_n",
                     help="raise the brute-force size guard")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="domkernel",
        description="kernelization toolkit for (connected) dominating set")
    subs = parser.add_subparsers(dest="command", required=True)

    ker = subs.add_parser("kernelize", help="reduce an instance")
    _add_common(ker)
    ker.add_argument("-k", type=int, required=True, help="parameter")
    ker.add_argument("--td", help="tree decomposition .td file")
    ker.add_argument("--tables", help="representative table file")
    ker.add_argument("--out", help="artifact path prefix")
    ker.add_argument("--apex-mode", choices=("sequential", "batch"),
                     default="sequential", dest="apex_mode")
    ker.add_argument("--max-rounds", type=int, default=None,
                     dest="max_rounds")
    ker.set_defaults(func=run_kernelize)

    ver = subs.add_parser("verify", help="replay against brute force")
    _add_common(ver)
    ver.add_argument("--kernel", help="kernel .gr file to check")
    ver.add_argument("-k", type=int, default=None,
                     help="parameter the kernel was produced for")
    ver.add_argument("--kprime", type=int, default=None,
                     help="parameter emitted with the kernel")
    ver.add_argument("--tables", help="representative table file")
    ver.set_defaults(func=run_verify)

    app = subs.add_parser("approx", help="approximate cover")
    _add_common(app)
    app.add_argument("--td", help="tree decomposition .td file")
    app.add_argument("--out", help="write the cover, one vertex per line")
    app.set_defaults(func=run_approx)

    tab = subs.add_parser("tables", help="materialize a table")
    tab.add_argument("--problem", choices=(DS, CDS), default=DS)
    tab.add_argument("--t", type=int, default=2, help="boundary width")
    tab.add_argument("--size-limit", type=int, default=4,
                     dest="size_limit")
    tab.add_argument("--out", help="output path")
    tab.set_defaults(func=run_tables)

    rep = subs.add_parser("report", help="scaling study with figures")
    rep.add_argument("--out-dir", default="report", dest="out_dir")
    rep.add_argument("--kmax", type=int, default=12)
    rep.add_argument("--seeds", default="0,1,2",
                     help="comma-separated relabelling seeds")
    rep.add_argument("--figure", action=argparse.BooleanOptionalAction,
                     default=True)
    rep.set_defaults(func=run_report)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except CapacityError as exc:
        print("capacity error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print("io error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as exc:
        print("internal invariant violated: %s" % exc, file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
