"""Data model for finite nondeterministic probabilistic transition systems.

Processes are plain strings.  Each process carries an ordered list of
transitions; a transition pairs an action with a finite-support probability
distribution over target processes.  Every probability in this package is an
exact ``fractions.Fraction``; there is no floating point anywhere in the
computation paths.

The model is deliberately restricted to *acyclic* systems: every quantity
computed downstream (maximal runs, trace distributions, scheduler
enumeration) presupposes that all runs are finite.  ``validate_pts`` rejects
cyclic inputs with a diagnostic naming one cycle.
"""
from __future__ import annotations

import re
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple

Rational = Fraction
ProcessId = str

TAU_NAME = "tau"
IDENTIFIER_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


@dataclass(frozen=True, order=True)
class Action:
    """A transition label.  The reserved name ``tau`` is the silent action."""

    name: str

    def __post_init__(self) -> None:
        if not IDENTIFIER_RE.fullmatch(self.name):
            raise ValueError(f"invalid action name {self.name!r}")

    @property
    def is_tau(self) -> bool:
        return self.name == TAU_NAME

    def __str__(self) -> str:
        return self.name


TAU = Action(TAU_NAME)


class Dist(Mapping):
    """Immutable finite-support map from keys to strictly positive rationals.

    The one distribution type used across the package: over process ids
    (transition targets), over traces (trace distributions) and over trace
    formulae (distribution formulae).  Keys must be orderable so storage and
    output are canonical.  Strict positivity is enforced here; whether the
    weights must sum to 1 is the caller's contract (``is_probability``), so
    that validators can inspect ill-formed inputs instead of never seeing
    them.
    """

    __slots__ = ("_map", "_items", "_total")

    def __init__(self, weights: Mapping | Iterable[tuple]):
        pairs = weights.items() if isinstance(weights, Mapping) else weights
        acc: dict = {}
        for key, raw in pairs:
            weight = Fraction(raw)
            if weight <= 0:
                raise ValueError(f"nonpositive weight {weight} for {key!r}")
            if key in acc:
                raise ValueError(f"duplicate key {key!r}; use Dist.merged")
            acc[key] = weight
        if not acc:
            raise ValueError("empty support")
        self._map = acc
        self._items = tuple(sorted(acc.items(), key=lambda kv: kv[0]))
        self._total = sum(acc.values(), Fraction(0))

    @classmethod
    def merged(cls, pairs: Iterable[tuple]) -> "Dist":
        """Build a Dist from pairs, summing weights of duplicate keys."""
        acc: dict = {}
        for key, weight in pairs:
            acc[key] = acc.get(key, Fraction(0)) + Fraction(weight)
        return cls(acc)

    @classmethod
    def dirac(cls, key) -> "Dist":
        return cls({key: Fraction(1)})

    def pushforward(self, fn: Callable) -> "Dist":
        """Image distribution under ``fn``, merging collided keys."""
        return Dist.merged((fn(key), weight) for key, weight in self._items)

    @property
    def support(self) -> tuple:
        return tuple(key for key, _ in self._items)

    @property
    def items_sorted(self) -> tuple:
        return self._items

    @property
    def total(self) -> Fraction:
        return self._total

    @property
    def is_probability(self) -> bool:
        return self._total == 1

    def __getitem__(self, key) -> Fraction:
        return self._map[key]

    def __iter__(self) -> Iterator:
        return iter(key for key, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __eq__(self, other) -> bool:
        if isinstance(other, Dist):
            return self._items == other._items
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._items)

    def __repr__(self) -> str:
        inner = ", ".join(f"{key!r}: {weight}" for key, weight in self._items)
        return f"Dist({{{inner}}})"


# Aliases naming the three roles Dist plays.
Distribution = Dist
TraceDistribution = Dist
TraceDistFormula = Dist


class Transition(NamedTuple):
    action: Action
    target: Dist


@dataclass(frozen=True)
class PTS:
    """A finite probabilistic transition system.

    ``transitions`` maps a process to its ordered transition list; the order
    is the input order and carries no semantics, it only makes enumeration
    and printed output stable.  Processes without an entry (or with an empty
    list) are terminal.
    """

    processes: frozenset[ProcessId]
    transitions: Mapping[ProcessId, tuple[Transition, ...]]

    @classmethod
    def build(cls, spec: Mapping[ProcessId, Iterable[tuple]]) -> "PTS":
        """Construct from ``{src: [(action, {target: weight}), ...]}``.

        Action values may be strings or Actions; every referenced target is
        added to the process set.  No validation beyond Dist's positivity is
        performed here, so ill-formed systems can be built and then passed
        to ``validate_pts``.
        """
        transitions: dict[ProcessId, tuple[Transition, ...]] = {}
        processes: set[ProcessId] = set()
        for src, entries in spec.items():
            processes.add(src)
            rows = []
            for action, weights in entries:
                if not isinstance(action, Action):
                    action = Action(action)
                dist = weights if isinstance(weights, Dist) else Dist(weights)
                processes.update(dist.support)
                rows.append(Transition(action, dist))
            transitions[src] = tuple(rows)
        return cls(frozenset(processes), transitions)

    def transitions_of(self, process: ProcessId) -> tuple[Transition, ...]:
        if process not in self.processes:
            raise ValueError(f"unknown process {process!r}")
        return self.transitions.get(process, ())

    def is_terminal(self, process: ProcessId) -> bool:
        return not self.transitions_of(process)


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[tuple[str, str], ...]
    warnings: tuple[tuple[str, str], ...]

    @property
    def ok(self) -> bool:
        return not self.errors


def validate_pts(pts: PTS) -> ValidationReport:
    """Check every structural invariant, reporting all violations at once.

    Checked: transition sources are declared processes, target weights sum
    to exactly 1, no transition references an undeclared process, and the
    support graph is acyclic (one witness cycle is named).  Exact duplicate
    transitions are reported as warnings; they are semantically redundant.
    """
    errors: list[tuple[str, str]] = []
    warnings: list[tuple[str, str]] = []

    for src in sorted(pts.transitions):
        if src not in pts.processes:
            errors.append((src, "transition source is not a declared process"))
    for src in sorted(pts.processes):
        rows = pts.transitions.get(src, ())
        seen: set[Transition] = set()
        for idx, row in enumerate(rows):
            where = f"{src}#{idx}"
            if row.target.total != 1:
                errors.append((where, f"weights sum to {row.target.total} != 1"))
            for tgt in row.target.support:
                if tgt not in pts.processes:
                    errors.append((where, f"reference to undeclared process {tgt!r}"))
            if row in seen:
                warnings.append((where, f"duplicate transition -{row.action}->"))
            seen.add(row)

    cycle = _find_cycle(pts)
    if cycle is not None:
        errors.append((cycle[0], "reachability cycle: " + " -> ".join(cycle)))

    return ValidationReport(tuple(errors), tuple(warnings))


def _find_cycle(pts: PTS) -> list[ProcessId] | None:
    """Return one cycle of the support graph as [p0, ..., p0], or None."""
    WHITE, GREY, BLACK = 0, 1, 2
    color = {p: WHITE for p in pts.processes}

    def successors(p: ProcessId) -> list[ProcessId]:
        out: list[ProcessId] = []
        for row in pts.transitions.get(p, ()):
            out.extend(q for q in row.target.support if q in color)
        return out

    for start in sorted(pts.processes):
        if color[start] != WHITE:
            continue
        stack: list[tuple[ProcessId, Iterator[ProcessId]]] = [(start, iter(successors(start)))]
        color[start] = GREY
        path = [start]
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if color[nxt] == GREY:
                    return path[path.index(nxt):] + [nxt]
                if color[nxt] == WHITE:
                    color[nxt] = GREY
                    path.append(nxt)
                    stack.append((nxt, iter(successors(nxt))))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                path.pop()
                stack.pop()
    return None


def enabled_actions(pts: PTS, process: ProcessId) -> frozenset[Action]:
    """The set of actions the process can perform."""
    return frozenset(row.action for row in pts.transitions_of(process))


def depth(pts: PTS, process: ProcessId) -> int:
    """Length of the longest run from the process; 0 when terminal.

    Requires an acyclic system; a cycle through `process` raises ValueError.
    """
    memo: dict[ProcessId, int] = {}
    on_stack: set[ProcessId] = set()

    def go(p: ProcessId) -> int:
        if p in memo:
            return memo[p]
        if p in on_stack:
            raise ValueError(f"cycle through {p!r}; depth is undefined")
        on_stack.add(p)
        best = 0
        for row in pts.transitions_of(p):
            best = max(best, 1 + max(go(q) for q in row.target.support))
        on_stack.discard(p)
        memo[p] = best
        return best

    return go(process)


def reachable(pts: PTS, process: ProcessId) -> frozenset[ProcessId]:
    """All processes reachable from ``process`` through transition supports."""
    seen = {process}
    todo = [process]
    while todo:
        p = todo.pop()
        for row in pts.transitions_of(p):
            for q in row.target.support:
                if q not in seen:
                    seen.add(q)
                    todo.append(q)
    return frozenset(seen)
