"""Surface syntax for transition systems and formulae, with pretty-printers.

System files hold one transition per line::

    # '#' starts a comment, blank lines are ignored
    s -a-> 1/2 s1, 1/2 s2
    s1 -b-> 1 nil

Probabilities are exact: ``1``, a decimal literal such as ``0.5`` (meaning
exactly one half, never a float) or a fraction ``p/q``; each must lie in
(0, 1] and the probabilities of one line must sum to exactly 1.  Any
identifier that never appears as a source is a terminal process.  ``tau``
is the silent action.

Formulae use ``T`` for the top formula, angle-bracket diamonds and a
weighted choice operator::

    0.5 <a><c>T (+) 0.5 <a>T

Duplicate trace formulae in one choice are merged by summing their weights
(a warning is emitted); after merging the weights must sum to exactly 1.

Both printers emit a canonical text that re-parses to an equal value.
"""
from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    Action,
    Dist,
    IDENTIFIER_RE,
    PTS,
    TraceDistFormula,
    Transition,
    validate_pts,
)
from .logic import TraceFormula
from .traces import Trace


@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    length: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class ParseIssue:
    span: "SourceSpan | None"
    message: str

    def __str__(self) -> str:
        return f"{self.span}: {self.message}" if self.span else self.message


class ParseError(ValueError):
    def __init__(self, issues: list[ParseIssue]):
        super().__init__("; ".join(str(issue) for issue in issues))
        self.issues = tuple(issues)


class ParserWarning(UserWarning):
    pass


_PROB_RE = re.compile(r"\d+/\d+|\d+\.\d+|\d+")
_ARROW_OPEN = "-"
_ARROW_CLOSE = "->"


class _LineScanner:
    """Cursor over one line, producing spans for error messages."""

    def __init__(self, text: str, line_no: int):
        self.text = text
        self.line_no = line_no
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t\r\n":
            self.pos += 1

    def span(self, start: int, length: int = 1) -> SourceSpan:
        return SourceSpan(self.line_no, start + 1, max(length, 1))

    def here(self) -> SourceSpan:
        return self.span(self.pos)

    def at_end(self) -> bool:
        self.skip_ws()
        return self.pos >= len(self.text)

    def take_regex(self, regex: re.Pattern, what: str) -> tuple[str, SourceSpan]:
        self.skip_ws()
        match = regex.match(self.text, self.pos)
        if not match:
            raise ParseError([ParseIssue(self.here(), f"expected {what}")])
        start = self.pos
        self.pos = match.end()
        return match.group(), self.span(start, match.end() - start)

    def take_literal(self, literal: str) -> SourceSpan:
        self.skip_ws()
        if not self.text.startswith(literal, self.pos):
            raise ParseError([ParseIssue(self.here(), f"expected {literal!r}")])
        start = self.pos
        self.pos += len(literal)
        return self.span(start, len(literal))

    def try_literal(self, literal: str) -> bool:
        self.skip_ws()
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False


def _parse_probability(scanner: _LineScanner) -> tuple[Fraction, SourceSpan]:
    token, span = scanner.take_regex(_PROB_RE, "a probability (1, 0.5 or p/q)")
    try:
        value = Fraction(token)
    except ZeroDivisionError:
        raise ParseError([ParseIssue(span, "zero denominator")]) from None
    if not 0 < value <= 1:
        raise ParseError([ParseIssue(span, f"probability {token} outside (0, 1]")])
    return value, span


def _strip_comment(line: str) -> str:
    cut = line.find("#")
    return line if cut < 0 else line[:cut]


def _parse_transition_line(scanner: _LineScanner):
    src, _ = scanner.take_regex(IDENTIFIER_RE, "a process identifier")
    scanner.take_literal(_ARROW_OPEN)
    act, _ = scanner.take_regex(IDENTIFIER_RE, "an action name")
    scanner.take_literal(_ARROW_CLOSE)
    pairs: list[tuple[Fraction, str, SourceSpan]] = []
    while True:
        prob, prob_span = _parse_probability(scanner)
        target, _ = scanner.take_regex(IDENTIFIER_RE, "a target process identifier")
        pairs.append((prob, target, prob_span))
        if not scanner.try_literal(","):
            break
    if not scanner.at_end():
        raise ParseError([ParseIssue(scanner.here(), "trailing input after transition")])
    return src, Action(act), pairs


def parse_pts(text: str) -> PTS:
    """Parse a system description; raises ParseError carrying every issue.

    Line-level syntax errors do not stop the scan, so one parse reports all
    of them.  Exact duplicate transitions are collapsed with a warning.
    Structural validation (probability sums, acyclicity) runs on the result
    and its findings are raised as parse errors too.
    """
    issues: list[ParseIssue] = []
    rows: list[tuple[str, Action, Dist, int]] = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            continue
        scanner = _LineScanner(line, line_no)
        try:
            src, action, pairs = _parse_transition_line(scanner)
        except ParseError as exc:
            issues.extend(exc.issues)
            continue
        weights: dict[str, Fraction] = {}
        for prob, target, _span in pairs:
            if target in weights:
                warnings.warn(
                    ParserWarning(
                        f"line {line_no}: duplicate target {target!r} merged"
                    ),
                    stacklevel=2,
                )
            weights[target] = weights.get(target, Fraction(0)) + prob
        total = sum(weights.values(), Fraction(0))
        if total != 1:
            issues.append(
                ParseIssue(
                    SourceSpan(line_no, 1, len(line)),
                    f"weights sum to {total} != 1",
                )
            )
            continue
        rows.append((src, action, Dist(weights), line_no))
    if issues:
        raise ParseError(issues)

    transitions: dict[str, list[Transition]] = {}
    processes: set[str] = set()
    for src, action, dist, line_no in rows:
        processes.add(src)
        processes.update(dist.support)
        row = Transition(action, dist)
        bucket = transitions.setdefault(src, [])
        if row in bucket:
            warnings.warn(
                ParserWarning(
                    f"line {line_no}: duplicate transition {src} -{action}-> collapsed"
                ),
                stacklevel=2,
            )
            continue
        bucket.append(row)

    pts = PTS(frozenset(processes), {p: tuple(rs) for p, rs in transitions.items()})
    report = validate_pts(pts)
    if report.errors:
        raise ParseError([ParseIssue(None, f"{loc}: {msg}") for loc, msg in report.errors])
    return pts


def parse_formula(text: str) -> TraceDistFormula:
    """Parse a trace distribution formula; raises ParseError on any issue."""
    scanner = _LineScanner(text, 1)
    weights: dict[TraceFormula, Fraction] = {}
    merged_any = False
    while True:
        prob, _ = _parse_probability(scanner)
        diamonds: list[Action] = []
        while scanner.try_literal("<"):
            name, _ = scanner.take_regex(IDENTIFIER_RE, "an action name")
            scanner.take_literal(">")
            diamonds.append(Action(name))
        scanner.take_literal("T")
        phi = TraceFormula(tuple(diamonds))
        if phi in weights:
            merged_any = True
        weights[phi] = weights.get(phi, Fraction(0)) + prob
        if scanner.at_end():
            break
        scanner.take_literal("(+)")
    if merged_any:
        warnings.warn(
            ParserWarning("duplicate trace formulae merged by summing weights"),
            stacklevel=2,
        )
    total = sum(weights.values(), Fraction(0))
    if total != 1:
        raise ParseError([ParseIssue(None, f"weights sum to {total} != 1")])
    return Dist(weights)


def _formula_display_order(psi: TraceDistFormula) -> list[tuple[TraceFormula, Fraction]]:
    # Longest/greatest diamond sequences first; a stable convention that
    # keeps the dominant shapes at the front of the printed choice.
    return sorted(psi.items_sorted, key=lambda item: item[0], reverse=True)


def print_formula(psi: TraceDistFormula) -> str:
    return " (+) ".join(f"{weight} {phi}" for phi, weight in _formula_display_order(psi))


def print_trace(trace: Trace) -> str:
    return " ".join(a.name for a in trace) if trace else "ε"


def print_trace_distribution(td: Dist) -> str:
    items = sorted(td.items_sorted, key=lambda item: item[0], reverse=True)
    return ", ".join(f"{weight} {print_trace(trace)}" for trace, weight in items)


def print_pts(pts: PTS) -> str:
    """Canonical text: sources sorted, transition order preserved, targets
    sorted, weights as reduced fractions.  Re-parses to an equal system
    (terminal processes are recovered from the transitions referencing
    them, so an isolated process with no transitions is not representable).
    """
    lines: list[str] = []
    for src in sorted(pts.transitions):
        for action, dist in pts.transitions[src]:
            body = ", ".join(f"{weight} {target}" for target, weight in dist.items_sorted)
            lines.append(f"{src} -{action.name}-> {body}")
    return "\n".join(lines) + ("\n" if lines else "")
