"""Command-line front end: ``prpatterns {analyze,block,witness,solutions,fs,reduce}``.

Exit codes for ``analyze``: 0 PR, 1 NOT_PR, 2 OPEN, 3 UNSUPPORTED. Every
command exits 64 on unparsable input (pattern text, colouring spec, flags).
"""

from __future__ import annotations

import argparse
import enum
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

from .analyzer import Status, Verdict, analyze
from .colourings import FormatError, SpecError, format_explicit, parse_colouring_spec
from .parser import ParseError, parse_pattern
from .pattern import Pattern, PatternError, canonical_piece, make_pattern, render
from .search import (
    DEFAULT_PROPOSAL_PRIME_BOUND,
    BlockReport,
    SolutionTuple,
    auto_block,
    enumerate_solutions,
    find_monochromatic,
    propose_blocking,
    verify_blocking,
)
from .sequences import fs_ratio_search, fs_set, ratio_set
from .witness import DEFAULT_BUDGET, BudgetExhausted, Unsat, Witness, search_witness

EXIT_USAGE = 64
EXIT_CODES = {Status.PR: 0, Status.NOT_PR: 1, Status.OPEN: 2, Status.UNSUPPORTED: 3}
DEFAULT_BLOCK_N = 10_000

REPORT_SCHEMA: dict[str, Any] = {
    "type": "object",
    "required": ["pattern"],
    "additionalProperties": False,
    "properties": {
        "pattern": {"type": "string"},
        "normal_form": {"type": "string"},
        "verdict": {"enum": [s.value for s in Status]},
        "derivation": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["rule", "citation", "detail"],
                "additionalProperties": False,
                "properties": {
                    "rule": {"type": "string"},
                    "citation": {"type": "string"},
                    "detail": {"type": "object"},
                },
            },
        },
        "canonical": {"type": "string"},
        "t": {"type": "integer"},
        "case": {"enum": ["A", "B"]},
        "shift": {"type": "string", "pattern": r"^-?\d+(/\d+)?$"},
        "colourings": {"type": "array", "items": {"type": "string"}},
        "search": {"type": "object"},
    },
}


class UsageError(Exception):
    pass


def _rat(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _jsonable(value: Any) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, Fraction):
        return _rat(value)
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, Pattern):
        return render(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return str(value)


def _parse(text: str) -> Pattern:
    try:
        return parse_pattern(text)
    except ParseError as exc:
        raise UsageError(exc.pretty()) from None
    except PatternError as exc:
        raise UsageError(str(exc)) from None


def _colouring(spec: str):
    try:
        return parse_colouring_spec(spec)
    except (SpecError, FormatError, OSError) as exc:
        raise UsageError(f"bad colouring {spec!r}: {exc}") from None


def verdict_report(text: str, pattern: Pattern, verdict: Verdict) -> dict[str, Any]:
    rep: dict[str, Any] = {
        "pattern": text,
        "normal_form": render(pattern),
        "verdict": verdict.status.value,
        "derivation": [
            {"rule": s.rule.value, "citation": s.citation, "detail": _jsonable(s.detail)} for s in verdict.derivation
        ],
    }
    if verdict.canonical is not None:
        rep["canonical"] = render(verdict.canonical)
    if verdict.t is not None:
        rep["t"] = verdict.t
    if verdict.case is not None:
        rep["case"] = verdict.case.value
    if verdict.shift is not None:
        rep["shift"] = _rat(verdict.shift)
    return rep


def _solution_json(s: SolutionTuple) -> dict[str, Any]:
    return {"x": s.x, "y": s.y, "values": list(s.values)}


def _block_json(r: BlockReport) -> dict[str, Any]:
    out = {
        "colouring": r.colouring.spec(),
        "N": r.N,
        "count_half": r.count_half,
        "count_full": r.count_full,
        "passed": r.passed,
        "complete": r.complete,
        "exceptional": [_solution_json(s) for s in r.exceptional],
    }
    if r.uncoverable:
        out["uncoverable"] = r.uncoverable
    return out


# -- human output --------------------------------------------------------------

def _print_verdict(rep: dict[str, Any]) -> None:
    print(f"pattern:     {rep['pattern']}")
    print(f"normal form: {rep['normal_form']}")
    print(f"verdict:     {rep['verdict']}")
    for step in rep["derivation"]:
        print(f"  [{step['rule']}] {step['citation']}")
        if step["detail"]:
            print("      " + ", ".join(f"{k}={v}" for k, v in step["detail"].items()))
    for key in ("canonical", "t", "case", "shift"):
        if key in rep:
            print(f"{key + ':':12s} {rep[key]}")
    if rep.get("colourings"):
        shown = rep["colourings"][:8]
        more = len(rep["colourings"]) - len(shown)
        print("suggested colourings: " + ", ".join(shown) + (f" (+{more} more)" if more > 0 else ""))


def _print_block(b: dict[str, Any]) -> None:
    status = "PASS" if b["passed"] else "FAIL"
    partial = "" if b["complete"] else " (stopped at first new solution)"
    print(f"  {status} {b['colouring']}: count_half={b['count_half']} count_full={b['count_full']}{partial}")
    for s in b["exceptional"][:5]:
        print(f"      x={s['x']} y={s['y']} values={s['values']}")


def _emit(args, rep: dict[str, Any], human) -> None:
    if args.json:
        print(json.dumps(rep, indent=2))
    else:
        human(rep)


# -- commands --------------------------------------------------------------------

def cmd_analyze(args) -> int:
    pattern = _parse(args.pattern)
    verdict = analyze(pattern)
    rep = verdict_report(args.pattern, pattern, verdict)
    if verdict.status is Status.NOT_PR:
        rep["colourings"] = [c.spec() for c in propose_blocking(pattern, verdict, args.prime_bound)]
    _emit(args, rep, _print_verdict)
    return EXIT_CODES[verdict.status]


def cmd_block(args) -> int:
    pattern = _parse(args.pattern)
    if args.N < 4:
        raise UsageError("--N must be at least 4")
    if (args.colouring is None) == (not args.auto):
        raise UsageError("give exactly one of --colouring SPEC or --auto")
    verdict = analyze(pattern)
    rep = verdict_report(args.pattern, pattern, verdict)
    if args.auto:
        if verdict.status is not Status.NOT_PR:
            raise UsageError(f"--auto needs a NOT_PR verdict, got {verdict.status.value}")
        report, tried = auto_block(pattern, args.N, verdict, args.prime_bound, cap=args.cap)
        rep["colourings"] = [r.colouring.spec() for r in tried]
        rep["search"] = {
            "mode": "auto",
            "N": args.N,
            "tried": [_block_json(r) for r in tried],
            "certificate": _block_json(report) if report else None,
        }
        passed = report is not None
    else:
        colouring = _colouring(args.colouring)
        report = verify_blocking(pattern, colouring, args.N, cap=args.cap)
        rep["search"] = {"mode": "check", "N": args.N, "tried": [_block_json(report)], "certificate": None}
        if report.passed:
            rep["search"]["certificate"] = _block_json(report)
        passed = report.passed
    if rep["search"]["certificate"] is None:
        del rep["search"]["certificate"]

    def human(r):
        _print_verdict(r)
        print(f"blocking check up to N={args.N} (passes when no monochromatic solution has max(x,y) > N/2):")
        for b in r["search"]["tried"]:
            _print_block(b)
        print("certificate: " + (r["search"]["certificate"]["colouring"] if passed else "none found"))

    _emit(args, rep, human)
    return 0 if passed else 1


def cmd_witness(args) -> int:
    pattern = _parse(args.pattern)
    if args.r < 2 or args.N < 1:
        raise UsageError("need -r >= 2 and --N >= 1")
    res = search_witness(pattern, args.r, args.N, args.budget)
    search: dict[str, Any] = {"r": args.r, "N": args.N, "budget": args.budget, "nodes": res.nodes}
    if isinstance(res, Witness):
        search["result"] = "WITNESS"
        search["table"] = list(res.colouring.table)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(format_explicit(res.colouring))
    elif isinstance(res, Unsat):
        search["result"] = "UNSAT"
    else:
        search["result"] = "BUDGET_EXHAUSTED"
    rep = {"pattern": args.pattern, "normal_form": render(pattern), "search": search}

    def human(r):
        s = r["search"]
        print(f"{s['result']} for {r['normal_form']} with r={s['r']} on [1..{s['N']}] ({s['nodes']} nodes)")
        if "table" in s:
            print(" ".join(map(str, s["table"])))
            print("note: only tuples with every value <= N were constrained")

    _emit(args, rep, human)
    return {Witness: 0, Unsat: 1, BudgetExhausted: 2}[type(res)]


def cmd_solutions(args) -> int:
    pattern = _parse(args.pattern)
    if args.N < 1:
        raise UsageError("--N must be at least 1")
    if args.mono:
        if args.colouring is None:
            raise UsageError("--mono needs --colouring")
        sols = find_monochromatic(pattern, _colouring(args.colouring), args.N, args.cap)
    else:
        sols = enumerate_solutions(pattern, args.N, args.cap)
    search: dict[str, Any] = {"N": args.N, "mono": args.mono, "solutions": [_solution_json(s) for s in sols]}
    if args.colouring is not None:
        search["colouring"] = args.colouring
    if args.cap is not None:
        search["cap"] = args.cap
    rep = {"pattern": args.pattern, "normal_form": render(pattern), "search": search}

    def human(r):
        for s in r["search"]["solutions"]:
            print(f"{s['x']} {s['y']} : {' '.join(map(str, s['values']))}")
        print(f"{len(r['search']['solutions'])} solution(s)")

    _emit(args, rep, human)
    return 0


def cmd_fs(args) -> int:
    colouring = _colouring(args.colouring)
    if args.len < 1:
        raise UsageError("--len must be at least 1")
    xs = fs_ratio_search(colouring, args.len, args.bound)
    search: dict[str, Any] = {"colouring": args.colouring, "len": args.len, "bound": args.bound}
    if xs is not None:
        search["xs"] = xs
        search["fs"] = sorted(fs_set(xs))
        search["ratios"] = sorted({q for _, _, q in ratio_set(xs).ratios})
    rep = {"pattern": "FS(x) and sum ratios", "search": search}

    def human(r):
        s = r["search"]
        if "xs" not in s:
            print(f"no sequence of length {s['len']} with terms <= {s['bound']}")
            return
        print("xs:     " + " ".join(map(str, s["xs"])))
        print("sums:   " + " ".join(map(str, s["fs"])))
        print("ratios: " + " ".join(map(str, s["ratios"])))

    _emit(args, rep, human)
    return 0 if xs is not None else 1


def cmd_reduce(args) -> int:
    pattern = _parse(args.pattern)
    verdict = analyze(pattern)
    rep = verdict_report(args.pattern, pattern, verdict)
    if "canonical" not in rep and len(pattern.bilinear) == 1 and len(pattern.extra) == 1:
        # no reduction was certified; still show the translated form for reference
        rep["search"] = {"translated": render(make_pattern(canonical_piece(pattern.bilinear[0])))}

    def human(r):
        if "canonical" in r:
            print(f"{r['normal_form']}  ->  {r['canonical']}")
        else:
            print(f"{r['normal_form']}: no reduction applies ({r['verdict']})")

    _emit(args, rep, human)
    return 0


# -- argument parsing ------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")

    parser = _Parser(prog="prpatterns", description="Partition regularity of x/y patterns.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", parents=[common], help="decide a pattern")
    p.add_argument("pattern")
    p.add_argument("--prime-bound", type=int, default=DEFAULT_PROPOSAL_PRIME_BOUND)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("block", parents=[common], help="check or search for a blocking colouring")
    p.add_argument("pattern")
    p.add_argument("--colouring", metavar="SPEC")
    p.add_argument("--auto", action="store_true")
    p.add_argument("--N", type=int, default=DEFAULT_BLOCK_N)
    p.add_argument("--cap", type=int, default=20)
    p.add_argument("--prime-bound", type=int, default=DEFAULT_PROPOSAL_PRIME_BOUND)
    p.set_defaults(func=cmd_block)

    p = sub.add_parser("witness", parents=[common], help="search an r-colouring of [1..N] with no monochromatic tuple")
    p.add_argument("pattern")
    p.add_argument("-r", type=int, default=2)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--out", metavar="PATH", help="save a found witness as a colouring file")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("solutions", parents=[common], help="list solutions, optionally monochromatic ones")
    p.add_argument("pattern")
    p.add_argument("--colouring", metavar="SPEC")
    p.add_argument("--mono", action="store_true")
    p.add_argument("--N", type=int, default=100)
    p.add_argument("--cap", type=int)
    p.set_defaults(func=cmd_solutions)

    p = sub.add_parser("fs", parents=[common], help="find a sequence with monochromatic sums and ratios")
    p.add_argument("--colouring", metavar="SPEC", required=True)
    p.add_argument("--len", type=int, default=2)
    p.add_argument("--bound", type=int, default=1000)
    p.set_defaults(func=cmd_fs)

    p = sub.add_parser("reduce", parents=[common], help="print the canonical form of a pattern")
    p.add_argument("pattern")
    p.set_defaults(func=cmd_reduce)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
