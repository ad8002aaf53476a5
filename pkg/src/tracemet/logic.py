"""A minimal two-sorted logic over traces and its satisfaction relations.

A *trace formula* is a finite sequence of diamond modalities ending in top;
it denotes a trace shape and is satisfied by a run whose first steps carry
the listed actions.  A *trace distribution formula* is a probability
distribution over pairwise-distinct trace formulae; a process satisfies one
when some resolution realizes every listed formula with exactly the listed
probability mass on its maximal runs.

The *mimicking formula* of a resolution spells out its trace distribution
inside the logic.  The set of formulae a process satisfies is exactly the
top formula together with the mimicking formulae of its resolutions, which
is what makes the satisfied set finitely computable.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Action, Dist, PTS, ProcessId, TraceDistFormula
from .resolutions import (
    DEFAULT_MAX_RESOLUTIONS,
    Resolution,
    enumerate_resolutions,
)
from .traces import (
    Computation,
    Trace,
    max_computations,
    trace_distribution,
    weak_trace_distribution,
)


@dataclass(frozen=True, order=True)
class TraceFormula:
    """A diamond sequence; the empty sequence is the top formula."""

    diamonds: tuple[Action, ...] = ()

    @property
    def depth(self) -> int:
        return len(self.diamonds)

    def __str__(self) -> str:
        return "".join(f"<{a.name}>" for a in self.diamonds) + "T"


TOP = TraceFormula()
TOP_DIST = Dist.dirac(TOP)


def tracing_formula(alpha: Trace) -> TraceFormula:
    """The formula spelling a trace; the empty trace maps to top."""
    return TraceFormula(tuple(alpha))


def satisfies_trace(computation: Computation, phi: TraceFormula) -> bool:
    """Structural satisfaction: top always holds; a diamond consumes one
    matching step.  A run longer than the formula still satisfies it."""

    def go(steps: tuple, diamonds: tuple) -> bool:
        if not diamonds:
            return True
        if not steps:
            return False
        return steps[0][1] == diamonds[0] and go(steps[1:], diamonds[1:])

    return go(computation.steps, phi.diamonds)


def compatible_with_formula(computation: Computation, phi: TraceFormula) -> bool:
    """Satisfaction plus exact length: the run spells the formula and stops."""
    return len(computation) == phi.depth and satisfies_trace(computation, phi)


def mimicking_formula(resolution: Resolution) -> TraceDistFormula:
    """The distribution formula assigning each maximal trace its probability."""
    return trace_distribution(resolution).pushforward(tracing_formula)


def weak_mimicking_formula(resolution: Resolution) -> TraceDistFormula:
    """Mimicking formula over tau-erased representative traces, weights
    aggregated per class."""
    return weak_trace_distribution(resolution).pushforward(tracing_formula)


def erase_formula(phi: TraceFormula) -> TraceFormula:
    """Drop every silent diamond; the canonical representative of the
    formula's equivalence class."""
    return TraceFormula(tuple(a for a in phi.diamonds if not a.is_tau))


def formulas_weak_equivalent(x: TraceFormula, y: TraceFormula) -> bool:
    return erase_formula(x) == erase_formula(y)


def dist_formulas_weak_equivalent(p: TraceDistFormula, q: TraceDistFormula) -> bool:
    return p.pushforward(erase_formula) == q.pushforward(erase_formula)


def formula_sort_key(psi: TraceDistFormula):
    return tuple(
        (tuple(a.name for a in phi.diamonds), weight) for phi, weight in psi.items_sorted
    )


def satisfied_set(
    pts: PTS,
    process: ProcessId,
    max_resolutions: int = DEFAULT_MAX_RESOLUTIONS,
) -> list[TraceDistFormula]:
    """All distribution formulae the process satisfies, deduplicated and in
    a canonical order.  Materialized as the mimicking formulae of its
    resolutions together with the top formula (which the halting scheduler
    already contributes)."""
    formulas = {TOP_DIST}
    for resolution in enumerate_resolutions(pts, process, max_resolutions):
        formulas.add(mimicking_formula(resolution))
    return sorted(formulas, key=formula_sort_key)


def satisfies(
    pts: PTS,
    process: ProcessId,
    psi: TraceDistFormula,
    max_resolutions: int = DEFAULT_MAX_RESOLUTIONS,
) -> tuple[bool, Resolution | None]:
    """Direct semantic check with witness.

    Scans resolutions in canonical order for one where, for every listed
    formula, the probability of the maximal runs compatible with it equals
    the listed weight; only the listed formulae are constrained (the weights
    summing to 1 leaves no room for unlisted maximal mass).  Deliberately
    avoids the mimicking-formula shortcut so the two routes can be compared.
    """
    if not psi.is_probability:
        raise ValueError("formula weights must sum to 1")
    for resolution in enumerate_resolutions(pts, process, max_resolutions):
        runs = max_computations(resolution)
        for phi, weight in psi.items_sorted:
            mass = sum(
                (c.probability for c in runs if compatible_with_formula(c, phi)),
                Fraction(0),
            )
            if mass != weight:
                break
        else:
            return True, resolution
    return False, None
