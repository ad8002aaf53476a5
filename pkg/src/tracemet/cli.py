"""Command-line interface.

Exit codes: 0 success, 1 parse/validation/usage errors, 2 resolution-count
guard exceeded, 3 cross-check inequality (a bug signal).  Diagnostics go to
stderr; results go to stdout as text or, with ``--json``, as a stable JSON
document in which every rational appears as ``{"num": "...", "den": "..."}``.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from fractions import Fraction

from . import __version__
from .core import PTS, validate_pts
from .formula_distance import (
    crosscheck,
    dist_formula_distance,
    real_value,
)
from .logic import mimicking_formula, satisfies, weak_mimicking_formula
from .metrics import (
    MetricResult,
    find_distinguishing_resolution,
    strong_trace_equivalent,
    strong_trace_metric,
    weak_trace_equivalent,
    weak_trace_metric,
)
from .parser import (
    ParseError,
    ParserWarning,
    parse_formula,
    parse_pts,
    print_formula,
    print_trace_distribution,
)
from .resolutions import (
    DEFAULT_MAX_RESOLUTIONS,
    Resolution,
    SizeGuardExceeded,
    enumerate_resolutions,
)
from .traces import trace_distribution, weak_trace_distribution

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_SIZE_GUARD = 2
EXIT_CROSSCHECK = 3

MAX_RESOLUTIONS_ENV = "TRACEMET_MAX_RESOLUTIONS"


class _CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INVALID):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage problems are plain invocation errors
        raise _CliError(f"{self.prog}: {message}")


def _frac_json(value: Fraction) -> dict:
    return {"num": str(value.numerator), "den": str(value.denominator)}


def _frac_text(value: Fraction) -> str:
    return f"{value} ({float(value)})"


def _trace_json(trace) -> list[str]:
    return [a.name for a in trace]


def _dist_json(td) -> list[dict]:
    items = sorted(td.items_sorted, key=lambda item: item[0], reverse=True)
    return [
        {"trace": _trace_json(trace), "probability": _frac_json(weight)}
        for trace, weight in items
    ]


def _formula_json(psi) -> list[dict]:
    items = sorted(psi.items_sorted, key=lambda item: item[0], reverse=True)
    return [
        {"diamonds": [a.name for a in phi.diamonds], "weight": _frac_json(weight)}
        for phi, weight in items
    ]


def _format_node(resolution: Resolution, node) -> str:
    text = resolution.root
    for index, target in node.path:
        text += f" /{index}/ {target}"
    return text


def _resolution_json(resolution: Resolution) -> dict:
    entries = []
    for node in sorted(resolution.choices, key=lambda n: n.path):
        entries.append(
            {
                "path": [[index, target] for index, target in node.path],
                "process": node.process,
                "choice": resolution.choices[node],
            }
        )
    return {"root": resolution.root, "choices": entries}


def _resolution_lines(resolution: Resolution, indent: str = "  ") -> list[str]:
    lines = []
    for node in sorted(resolution.choices, key=lambda n: n.path):
        choice = resolution.choices[node]
        if choice is None:
            decision = "halt"
        else:
            row = resolution.pts.transitions_of(node.process)[choice]
            body = ", ".join(f"{w} {t}" for t, w in row.target.items_sorted)
            decision = f"-{row.action.name}-> {body}  [#{choice}]"
        lines.append(f"{indent}{_format_node(resolution, node)}: {decision}")
    return lines


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _load_pts(path: str) -> PTS:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise _CliError(f"cannot read {path}: {exc}") from exc
    try:
        return parse_pts(text)
    except ParseError as exc:
        details = "\n".join(f"  {issue}" for issue in exc.issues)
        raise _CliError(f"{path}: invalid system:\n{details}") from exc


def _parse_formula_arg(text: str):
    # A .psi path stands in for the formula it contains.
    if text.endswith(".psi"):
        try:
            with open(text, "r", encoding="utf-8") as handle:
                text = handle.read().strip()
        except OSError as exc:
            raise _CliError(f"cannot read {text}: {exc}") from exc
    try:
        return parse_formula(text)
    except ParseError as exc:
        raise _CliError(f"invalid formula {text!r}: {exc}") from exc


def _require_process(pts: PTS, name: str) -> str:
    if name not in pts.processes:
        raise _CliError(f"unknown process {name!r}")
    return name


def _max_resolutions(args) -> int:
    if args.max_resolutions is not None:
        return args.max_resolutions
    env = os.environ.get(MAX_RESOLUTIONS_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise _CliError(f"{MAX_RESOLUTIONS_ENV} must be an integer") from exc
    return DEFAULT_MAX_RESOLUTIONS


def _cmd_validate(args) -> int:
    try:
        with open(args.file, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise _CliError(f"cannot read {args.file}: {exc}") from exc
    collected: list[str] = []
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ParserWarning)
        try:
            pts = parse_pts(text)
        except ParseError as exc:
            payload = {
                "valid": False,
                "errors": [str(issue) for issue in exc.issues],
                "warnings": [str(w.message) for w in caught],
            }
            _emit(args, payload, ["invalid"] + [f"  error: {i}" for i in exc.issues])
            for w in caught:
                print(f"warning: {w.message}", file=sys.stderr)
            return EXIT_INVALID
        collected = [str(w.message) for w in caught]
    report = validate_pts(pts)
    payload = {
        "valid": True,
        "processes": sorted(pts.processes),
        "errors": [],
        "warnings": collected + [f"{loc}: {msg}" for loc, msg in report.warnings],
    }
    lines = ["valid", f"  processes: {', '.join(sorted(pts.processes))}"]
    lines += [f"  warning: {w}" for w in payload["warnings"]]
    _emit(args, payload, lines)
    return EXIT_OK


def _cmd_resolutions(args) -> int:
    pts = _load_pts(args.file)
    process = _require_process(pts, args.process)
    resolutions = enumerate_resolutions(pts, process, _max_resolutions(args))
    shown = resolutions if args.limit is None else resolutions[: args.limit]
    td_of = weak_trace_distribution if args.weak else trace_distribution
    payload = {
        "process": process,
        "count": len(resolutions),
        "shown": len(shown),
        "resolutions": [
            {
                **_resolution_json(r),
                "trace_distribution": _dist_json(td_of(r)),
            }
            for r in shown
        ],
    }
    lines = [f"{len(resolutions)} resolutions of {process}"]
    for number, r in enumerate(shown, start=1):
        lines.append(f"#{number}")
        lines.extend(_resolution_lines(r))
        lines.append(f"  TD: {print_trace_distribution(td_of(r))}")
    if len(shown) < len(resolutions):
        lines.append(f"... {len(resolutions) - len(shown)} more (raise --limit)")
    _emit(args, payload, lines)
    return EXIT_OK


def _cmd_mimic(args) -> int:
    pts = _load_pts(args.file)
    process = _require_process(pts, args.process)
    formula_of = weak_mimicking_formula if args.weak else mimicking_formula
    formulas = []
    seen = set()
    for r in enumerate_resolutions(pts, process, _max_resolutions(args)):
        psi = formula_of(r)
        if psi not in seen:
            seen.add(psi)
            formulas.append(psi)
    payload = {
        "process": process,
        "weak": args.weak,
        "formulas": [_formula_json(psi) for psi in formulas],
    }
    _emit(args, payload, [print_formula(psi) for psi in formulas])
    return EXIT_OK


def _metric_payload(result: MetricResult) -> dict:
    payload = {
        "value": _frac_json(result.value),
        "dedup": {
            "left": [result.dedup_stats.left_before, result.dedup_stats.left_after],
            "right": [result.dedup_stats.right_before, result.dedup_stats.right_after],
        },
        "witness": None,
    }
    if result.witness is not None:
        payload["witness"] = [
            _resolution_json(result.witness[0]),
            _resolution_json(result.witness[1]),
        ]
    return payload


def _cmd_metric(args) -> int:
    pts = _load_pts(args.file)
    s = _require_process(pts, args.process)
    t = _require_process(pts, args.other)
    metric = weak_trace_metric if args.weak else strong_trace_metric
    result = metric(pts, s, t, _max_resolutions(args))
    lines = [_frac_text(result.value)]
    if result.witness is not None:
        left, right = result.witness
        lines.append(f"witness resolution of {s}:")
        lines.extend(_resolution_lines(left))
        lines.append(f"witness resolution of {t}:")
        lines.extend(_resolution_lines(right))
    stats = result.dedup_stats
    lines.append(
        f"resolutions: {s} {stats.left_before}->{stats.left_after} deduped, "
        f"{t} {stats.right_before}->{stats.right_after} deduped"
    )
    _emit(args, _metric_payload(result), lines)
    return EXIT_OK


def _cmd_equiv(args) -> int:
    pts = _load_pts(args.file)
    s = _require_process(pts, args.process)
    t = _require_process(pts, args.other)
    check = weak_trace_equivalent if args.weak else strong_trace_equivalent
    equivalent = check(pts, s, t, _max_resolutions(args))
    payload = {"equivalent": equivalent, "distinguishing": None}
    lines = ["true" if equivalent else "false"]
    if not equivalent:
        found = find_distinguishing_resolution(
            pts, s, t, weak=args.weak, max_resolutions=_max_resolutions(args)
        )
        if found is not None:
            side, resolution = found
            td_of = weak_trace_distribution if args.weak else trace_distribution
            payload["distinguishing"] = {
                "process": side,
                **_resolution_json(resolution),
                "trace_distribution": _dist_json(td_of(resolution)),
            }
            lines.append(f"distinguishing resolution of {side} (unmatched by the other side):")
            lines.extend(_resolution_lines(resolution))
            lines.append(f"  TD: {print_trace_distribution(td_of(resolution))}")
    _emit(args, payload, lines)
    return EXIT_OK


def _cmd_sat(args) -> int:
    pts = _load_pts(args.file)
    process = _require_process(pts, args.process)
    psi = _parse_formula_arg(args.formula)
    if args.weak:
        # Weak satisfaction: some resolution's mimicking formula is
        # equivalent to the query up to erasure of silent diamonds.
        from .logic import dist_formulas_weak_equivalent

        holds, witness = False, None
        for r in enumerate_resolutions(pts, process, _max_resolutions(args)):
            if dist_formulas_weak_equivalent(mimicking_formula(r), psi):
                holds, witness = True, r
                break
    else:
        holds, witness = satisfies(pts, process, psi, _max_resolutions(args))
    payload = {
        "satisfied": holds,
        "witness": _resolution_json(witness) if witness is not None else None,
    }
    lines = ["true" if holds else "false"]
    if witness is not None:
        lines.append("witness resolution:")
        lines.extend(_resolution_lines(witness))
    _emit(args, payload, lines)
    return EXIT_OK


def _cmd_fdist(args) -> int:
    psi1 = _parse_formula_arg(args.formula1)
    psi2 = _parse_formula_arg(args.formula2)
    value = dist_formula_distance(psi1, psi2, weak=args.weak)
    _emit(args, {"value": _frac_json(value)}, [_frac_text(value)])
    return EXIT_OK


def _cmd_val(args) -> int:
    pts = _load_pts(args.file)
    process = _require_process(pts, args.process)
    psi = _parse_formula_arg(args.formula)
    value = real_value(pts, process, psi, weak=args.weak, max_resolutions=_max_resolutions(args))
    _emit(args, {"value": _frac_json(value)}, [_frac_text(value)])
    return EXIT_OK


def _cmd_crosscheck(args) -> int:
    pts = _load_pts(args.file)
    s = _require_process(pts, args.process)
    t = _require_process(pts, args.other)
    report = crosscheck(pts, s, t, _max_resolutions(args))
    payload = {
        "strong_metric": _frac_json(report.strong_metric),
        "logical_distance": _frac_json(report.logical_distance),
        "sup_val_distance": _frac_json(report.sup_val_distance),
        "weak_metric": _frac_json(report.weak_metric),
        "weak_logical_distance": _frac_json(report.weak_logical_distance),
        "weak_sup_val_distance": _frac_json(report.weak_sup_val_distance),
        "all_equal": report.all_equal,
        "mismatches": list(report.mismatches),
    }
    lines = [
        f"strong metric:          {_frac_text(report.strong_metric)}",
        f"logical distance:       {_frac_text(report.logical_distance)}",
        f"sup-val distance:       {_frac_text(report.sup_val_distance)}",
        f"weak metric:            {_frac_text(report.weak_metric)}",
        f"weak logical distance:  {_frac_text(report.weak_logical_distance)}",
        f"weak sup-val distance:  {_frac_text(report.weak_sup_val_distance)} (derived)",
        f"all equal: {'true' if report.all_equal else 'false'}",
    ]
    lines += [f"MISMATCH: {m}" for m in report.mismatches]
    _emit(args, payload, lines)
    if not report.all_equal:
        for mismatch in report.mismatches:
            print(f"crosscheck failed: {mismatch}", file=sys.stderr)
        return EXIT_CROSSCHECK
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument(
        "--max-resolutions",
        type=int,
        metavar="N",
        default=None,
        help=f"abort when a process has more resolutions (default {DEFAULT_MAX_RESOLUTIONS}; "
        f"env {MAX_RESOLUTIONS_ENV})",
    )
    common.add_argument(
        "--seed",
        type=int,
        default=None,
        help="seed for randomized subcommands (accepted everywhere for uniformity)",
    )

    parser = _Parser(
        prog="tracemet",
        description="Exact trace metrics, equivalences and characterizing "
        "formulae for finite probabilistic transition systems.",
        epilog="exit codes: 0 ok; 1 parse/validation/usage error; "
        "2 resolution size guard; 3 cross-check disagreement",
    )
    parser.add_argument("--version", action="version", version=f"tracemet {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, *, file=True, process=False, other=False, formula=0, weak=False):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if file:
            p.add_argument("file", help="system description (.pts)")
        if process:
            p.add_argument("-p", "--process", required=True, help="first process")
        if other:
            p.add_argument("-q", "--other", required=True, help="second process")
        if formula == 1:
            p.add_argument("-f", "--formula", required=True, help="distribution formula")
        if formula == 2:
            p.add_argument("-f1", "--formula1", required=True, help="first formula")
            p.add_argument("-f2", "--formula2", required=True, help="second formula")
        if weak:
            p.add_argument("--weak", action="store_true", help="compare up to silent steps")
        p.set_defaults(func=func)
        return p

    add("validate", _cmd_validate, "check a system description")
    p = add("resolutions", _cmd_resolutions, "list resolutions with trace distributions",
            process=True, weak=True)
    p.add_argument("--limit", type=int, default=None, metavar="N", help="print at most N")
    add("mimic", _cmd_mimic, "deduplicated mimicking formulae of all resolutions",
        process=True, weak=True)
    add("metric", _cmd_metric, "trace metric between two processes",
        process=True, other=True, weak=True)
    add("equiv", _cmd_equiv, "trace equivalence between two processes",
        process=True, other=True, weak=True)
    add("sat", _cmd_sat, "does the process satisfy the formula",
        process=True, formula=1, weak=True)
    add("fdist", _cmd_fdist, "distance between two formulae", file=False, formula=2, weak=True)
    add("val", _cmd_val, "real value of a formula at a process",
        process=True, formula=1, weak=True)
    add("crosscheck", _cmd_crosscheck, "verify that all metric routes agree",
        process=True, other=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", ParserWarning)
            code = args.func(args)
        for w in caught:
            if args.command != "validate":
                print(f"warning: {w.message}", file=sys.stderr)
        return code
    except _CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except SizeGuardExceeded as exc:
        print(f"size guard: {exc}", file=sys.stderr)
        return EXIT_SIZE_GUARD


if __name__ == "__main__":
    sys.exit(main())
