"""Kernelization toolkit for dominating set and connected dominating set.

The package is organized around a reduction pipeline: graphs and tree
decompositions at the bottom, exact solvers and an approximation layer
above them, boundaried-graph signatures and representative tables for
answer-preserving replacement, and a driver that combines slice
decomposition, protrusion replacement, and vertex-deletion rules into
a kernelization with certified soundness at desk scale.
"""

from .graph import (
    Graph,
    closed_neighborhood,
    open_neighborhood,
    r_dominated_set,
    is_dominating_set,
    is_connected_dominating_set,
    generate_instance,
    to_dimacs,
    from_dimacs,
    read_graph,
    write_graph,
)
from .errors import (
    InputError,
    CapacityError,
    IncompletenessError,
    ReplacementRefused,
    InvariantError,
)
from .solvers import (
    DS,
    CDS,
    threshold,
    threshold_or_inf,
    ds_opt_bruteforce,
    cds_opt_bruteforce,
    ds_treewidth_dp,
    ColoredInstance,
)
from .treedec import (
    TreeDecomposition,
    heuristic_decomposition,
    validate,
    normalize,
    read_decomposition,
    write_decomposition,
)
from .boundaried import (
    BoundariedGraph,
    signature,
    signatures_equivalent,
    RepresentativeTable,
    enumerate_representatives,
)
from .approx import approx_colored_ds, approx_cds, duchet_connect
from .reducer import kernelize, KernelResult, KernelStep, default_table, NO_PARAMETER
from .report import run_study

__all__ = [
    "Graph",
    "closed_neighborhood",
    "open_neighborhood",
    "r_dominated_set",
    "is_dominating_set",
    "is_connected_dominating_set",
    "generate_instance",
    "to_dimacs",
    "from_dimacs",
    "read_graph",
    "write_graph",
    "InputError",
    "CapacityError",
    "IncompletenessError",
    "ReplacementRefused",
    "InvariantError",
    "DS",
    "CDS",
    "threshold",
    "threshold_or_inf",
    "ds_opt_bruteforce",
    "cds_opt_bruteforce",
    "ds_treewidth_dp",
    "ColoredInstance",
    "TreeDecomposition",
    "heuristic_decomposition",
    "validate",
    "normalize",
    "read_decomposition",
    "write_decomposition",
    "BoundariedGraph",
    "signature",
    "signatures_equivalent",
    "RepresentativeTable",
    "enumerate_representatives",
    "approx_colored_ds",
    "approx_cds",
    "duchet_connect",
    "kernelize",
    "KernelResult",
    "KernelStep",
    "default_table",
    "NO_PARAMETER",
    "run_study",
]
