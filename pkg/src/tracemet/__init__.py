"""Exact trace metrics and characterizing formulae for finite probabilistic
transition systems.

The package computes, over exact rationals: strong and weak probabilistic
trace equivalence and the corresponding 1-bounded trace metrics (optimal
transport between trace distributions, lifted over scheduler sets with the
Hausdorff max-min); the mimicking formulae that generate the set of
distribution formulae a process satisfies; distances on formulae and the
logical distance over processes; and a real-valued semantics whose largest
verification gap reproduces the metric.  A cross-check verifies that every
route yields the same number on any given input.
"""

__version__ = "0.1.0"

from .core import (
    Action,
    Dist,
    Distribution,
    PTS,
    ProcessId,
    Rational,
    TAU,
    TraceDistFormula,
    TraceDistribution,
    Transition,
    ValidationReport,
    depth,
    enabled_actions,
    reachable,
    validate_pts,
)
from .resolutions import (
    DEFAULT_MAX_RESOLUTIONS,
    Resolution,
    SizeGuardExceeded,
    UnfoldNode,
    count_resolutions,
    enumerate_resolutions,
    make_resolution,
    validate_resolution,
)
from .traces import (
    Computation,
    EPSILON,
    Trace,
    compatible_probabilities,
    max_computations,
    pr_compatible,
    pr_weak_compatible,
    tau_erase,
    trace_distribution,
    weak_compatible_probabilities,
    weak_trace_distribution,
)
from .transport import (
    DISCRETE,
    Discrete,
    DiscreteQuotient,
    Matching,
    hausdorff,
    hausdorff_witness,
    kantorovich_01,
    kantorovich_oracle,
)
from .logic import (
    TOP,
    TOP_DIST,
    TraceFormula,
    compatible_with_formula,
    dist_formulas_weak_equivalent,
    erase_formula,
    formulas_weak_equivalent,
    mimicking_formula,
    satisfied_set,
    satisfies,
    satisfies_trace,
    tracing_formula,
    weak_mimicking_formula,
)
from .metrics import (
    DedupStats,
    MetricResult,
    find_distinguishing_resolution,
    resolution_distance,
    strong_trace_equivalent,
    strong_trace_metric,
    weak_resolution_distance,
    weak_trace_equivalent,
    weak_trace_metric,
)
from .formula_distance import (
    CrossCheckReport,
    crosscheck,
    dist_formula_distance,
    distance_to_set,
    logical_distance,
    real_value,
    sup_val_distance,
    trace_formula_distance,
)
from .parser import (
    ParseError,
    ParseIssue,
    ParserWarning,
    SourceSpan,
    parse_formula,
    parse_pts,
    print_formula,
    print_pts,
    print_trace,
    print_trace_distribution,
)
