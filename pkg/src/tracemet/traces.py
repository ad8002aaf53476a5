"""Runs of a resolution, their probabilities, and trace distributions.

A run (``Computation``) is a chain of steps through the unfolding; its
probability is the product of the step probabilities read off the scheduled
distributions.  Only *maximal* runs (those ending where the scheduler halts)
carry trace-distribution mass: summing over all runs would count the same
probability once per prefix.

The weak view erases the silent action from traces.  Weak trace
distributions live on tau-free representative traces, which keeps them
honest probability distributions; summing instead over every equivalent
tau-decorated spelling would overshoot 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import Action, Dist, TraceDistribution
from .resolutions import Resolution, UnfoldNode

Trace = tuple[Action, ...]
EPSILON: Trace = ()

Step = tuple[UnfoldNode, Action, Fraction, UnfoldNode]


@dataclass(frozen=True)
class Computation:
    """A finite run: consecutive steps chain, each with its positive
    conditional probability."""

    steps: tuple[Step, ...]

    @property
    def actions(self) -> Trace:
        return tuple(step[1] for step in self.steps)

    @property
    def probability(self) -> Fraction:
        prob = Fraction(1)
        for step in self.steps:
            prob *= step[2]
        return prob

    def __len__(self) -> int:
        return len(self.steps)


def max_computations(resolution: Resolution) -> list[Computation]:
    """All maximal runs from the root, in depth-first (path-lexicographic)
    order.  Their probabilities always sum to exactly 1."""
    out: list[Computation] = []
    steps: list[Step] = []

    def walk(node: UnfoldNode) -> None:
        row = resolution.scheduled(node)
        if row is None:
            out.append(Computation(tuple(steps)))
            return
        choice = resolution.choices[node]
        for target in row.target.support:
            child = node.child(choice, target)
            steps.append((node, row.action, row.target[target], child))
            walk(child)
            steps.pop()

    walk(resolution.root_node)
    return out


def pr_compatible(resolution: Resolution, alpha: Trace) -> Fraction:
    """Total probability of runs (maximal or not) whose trace equals alpha.

    Runs compatible with a fixed trace all have the same length, so none is
    a prefix of another and the sum is well defined.
    """
    frontier: list[tuple[UnfoldNode, Fraction]] = [(resolution.root_node, Fraction(1))]
    for action in alpha:
        nxt: list[tuple[UnfoldNode, Fraction]] = []
        for node, prob in frontier:
            row = resolution.scheduled(node)
            if row is None or row.action != action:
                continue
            choice = resolution.choices[node]
            for target in row.target.support:
                nxt.append((node.child(choice, target), prob * row.target[target]))
        frontier = nxt
        if not frontier:
            return Fraction(0)
    return sum((prob for _, prob in frontier), Fraction(0))


def trace_distribution(resolution: Resolution) -> TraceDistribution:
    """Map each trace to the probability of the maximal runs spelling it."""
    return Dist.merged((c.actions, c.probability) for c in max_computations(resolution))


def tau_erase(alpha: Trace) -> Trace:
    """The canonical tau-free representative: alpha with every tau removed."""
    return tuple(action for action in alpha if not action.is_tau)


def weak_trace_distribution(resolution: Resolution) -> TraceDistribution:
    """The trace distribution pushed forward through tau erasure."""
    return trace_distribution(resolution).pushforward(tau_erase)


def pr_weak_compatible(resolution: Resolution, alpha: Trace) -> Fraction:
    """Probability mass of runs matching alpha up to tau erasure.

    Among the runs whose erased trace equals ``tau_erase(alpha)``, only those
    that are prefix-maximal within that set are summed; counting a run
    together with one of its extensions would tally the same probability
    twice.
    """
    target = tau_erase(alpha)

    def walk(node: UnfoldNode, erased: Trace, prob: Fraction) -> tuple[Fraction, bool]:
        # Returns (mass of prefix-maximal matching runs below, match seen).
        if erased != target[: len(erased)]:
            return Fraction(0), False
        total = Fraction(0)
        matched_below = False
        row = resolution.scheduled(node)
        if row is not None:
            choice = resolution.choices[node]
            grown = erased if row.action.is_tau else erased + (row.action,)
            for q in row.target.support:
                sub_total, sub_match = walk(node.child(choice, q), grown, prob * row.target[q])
                total += sub_total
                matched_below = matched_below or sub_match
        if erased == target:
            if matched_below:
                return total, True
            return prob, True
        return total, matched_below

    return walk(resolution.root_node, EPSILON, Fraction(1))[0]


def compatible_probabilities(resolution: Resolution) -> dict[Trace, Fraction]:
    """``pr_compatible`` evaluated at every trace the resolution can show.

    The returned map is total over all traces once completed with 0; its
    values generally sum to more than 1 (each run contributes at every
    prefix length).
    """
    acc: dict[Trace, Fraction] = {}

    def walk(node: UnfoldNode, trace: Trace, prob: Fraction) -> None:
        acc[trace] = acc.get(trace, Fraction(0)) + prob
        row = resolution.scheduled(node)
        if row is None:
            return
        choice = resolution.choices[node]
        for q in row.target.support:
            walk(node.child(choice, q), trace + (row.action,), prob * row.target[q])

    walk(resolution.root_node, EPSILON, Fraction(1))
    return acc


def weak_compatible_probabilities(resolution: Resolution) -> dict[Trace, Fraction]:
    """``pr_weak_compatible`` at every tau-free trace the resolution can show."""
    candidates = {tau_erase(trace) for trace in compatible_probabilities(resolution)}
    return {beta: pr_weak_compatible(resolution, beta) for beta in sorted(candidates)}
