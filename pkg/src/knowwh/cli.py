"""Command-line front end.

Exit codes: 0 for true/valid/bisimilar/plan found, 1 for the negative
answer, 2 for any error (bad input, unknown world, budget exceeded).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bisim, models, planner, translate
from .lab import BudgetTooLarge, SearchBudget, frame_valid, valid
from .lab.suites import SUITES, run_suite
from .models import ModelError, load_model, model_to_json
from .parser import ParseError, parse
from .semantics import FragmentMismatch, eval as eval_at
from .syntax import to_text


class CliError(Exception):
    pass


def _formula(text: str):
    return parse(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


def _budget(args) -> SearchBudget:
    return SearchBudget(max_worlds=args.max_worlds, max_agents=args.max_agents,
                        max_values=args.max_values, max_actions=args.max_actions,
                        max_letters=args.max_letters)


def _add_budget(p):
    p.add_argument("--max-worlds", type=int, default=3)
    p.add_argument("--max-agents", type=int, default=1)
    p.add_argument("--max-values", type=int, default=2)
    p.add_argument("--max-actions", type=int, default=2)
    p.add_argument("--max-letters", type=int, default=2)


def cmd_check(args, out):
    m = load_model(args.model)
    models.require_world(m, args.at)
    result = eval_at(m, args.at, _formula(args.formula))
    if args.json:
        out.write(_dump({"world": args.at, "formula": args.formula, "value": result}) + "\n")
    else:
        out.write(("true" if result else "false") + "\n")
    return 0 if result else 1


def _verdict_out(v, args, out):
    if args.emit and v.model is not None:
        with open(args.emit, "w", encoding="utf-8") as fh:
            fh.write(model_to_json(v.model) + "\n")
    if args.json:
        out.write(_dump(v.to_dict()) + "\n")
    else:
        out.write(v.summary() + "\n")
        if v.model is not None and not args.emit:
            out.write(model_to_json(v.model) + "\n")
    return 0 if v.valid else 1


def cmd_valid(args, out):
    v = valid(_formula(args.formula), args.frames, _budget(args))
    return _verdict_out(v, args, out)


def cmd_frame_valid(args, out):
    v = frame_valid(load_model(args.frame), _formula(args.formula))
    return _verdict_out(v, args, out)


def cmd_bisim(args, out):
    m1, m2 = load_model(args.m1), load_model(args.m2)
    res = bisim.check_bisim(m1, args.w1, m2, args.w2, bisim.DELTA if args.delta else bisim.STANDARD)
    if args.json:
        rel = sorted(res.relation) if res.relation else None
        out.write(_dump({"bisimilar": res.holds, "relation": rel}) + "\n")
    else:
        out.write(("bisimilar" if res.holds else "not bisimilar") + "\n")
    return 0 if res.holds else 1


def cmd_update(args, out):
    m = load_model(args.model)
    if args.announce is not None:
        new = models.announce(m, _formula(args.announce))
    else:
        if args.at is None:
            raise CliError("--at is required with --announce-whether and --inspect")
        if args.announce_whether is not None:
            new = models.announce_whether(m, _formula(args.announce_whether), args.at)
        else:
            new = models.inspect(m, args.inspect.lstrip("$"), args.at)
    out.write(model_to_json(new) + "\n")
    return 0


def cmd_plan(args, out):
    m = load_model(args.lts)
    if not isinstance(m, models.LtsModel):
        raise CliError("plan needs a transition system")
    res = planner.eval_kh(m, _formula(args.pre), _formula(args.goal))
    if args.json:
        plan = list(res.plan) if res.holds else None
        out.write(_dump({"holds": res.holds, "plan": plan}) + "\n")
    else:
        out.write((planner.format_plan(res.plan) if res.holds else "no uniform plan") + "\n")
    return 0 if res.holds else 1


def cmd_translate(args, out):
    phi = _formula(args.formula)
    if args.ncl_to_ml:
        res = translate.ncl_to_ml(phi)
    elif args.ml_to_ncl:
        res = translate.ml_to_ncl_reflexive(phi)
    else:
        res = translate.expand_diamonds(phi)
    text = to_text(res)
    out.write((_dump({"formula": text}) if args.json else text) + "\n")
    return 0


def cmd_axioms(args, out):
    if args.suite not in SUITES:
        raise CliError(f"unknown suite {args.suite!r}; known: {', '.join(SUITES)}")
    report = run_suite(args.suite, _budget(args), spot=not args.no_spot)
    out.write((report.to_json() if args.json else report.text()) + "\n")
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="knowwh", description="Knowing-wh logics toolkit.")
    ap.add_argument("--json", action="store_true", help="machine-readable output")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="evaluate a formula at a world")
    p.add_argument("model")
    p.add_argument("--at", required=True)
    p.add_argument("formula")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("valid", help="validity over a frame class within a budget")
    p.add_argument("formula")
    p.add_argument("--frames", default="arbitrary")
    _add_budget(p)
    p.add_argument("--emit", help="write the countermodel JSON here")
    p.set_defaults(fn=cmd_valid)

    p = sub.add_parser("frame-valid", help="validity on one frame under all valuations")
    p.add_argument("frame")
    p.add_argument("formula")
    p.add_argument("--emit", help="write the countermodel JSON here")
    p.set_defaults(fn=cmd_frame_valid)

    p = sub.add_parser("bisim", help="(Delta-)bisimilarity of two pointed models")
    p.add_argument("--delta", action="store_true")
    p.add_argument("m1")
    p.add_argument("w1")
    p.add_argument("m2")
    p.add_argument("w2")
    p.set_defaults(fn=cmd_bisim)

    p = sub.add_parser("update", help="announce, announce whether, or inspect")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--announce")
    g.add_argument("--announce-whether")
    g.add_argument("--inspect")
    p.add_argument("--at")
    p.add_argument("model")
    p.set_defaults(fn=cmd_update)

    p = sub.add_parser("plan", help="shortest uniform plan for Kh(pre, goal)")
    p.add_argument("lts")
    p.add_argument("--pre", required=True)
    p.add_argument("--goal", required=True)
    p.set_defaults(fn=cmd_plan)

    p = sub.add_parser("translate", help="syntactic translations")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--ncl-to-ml", action="store_true")
    g.add_argument("--ml-to-ncl", action="store_true")
    g.add_argument("--expand-diamond", action="store_true")
    p.add_argument("formula")
    p.set_defaults(fn=cmd_translate)

    p = sub.add_parser("axioms", help="run an axiom suite")
    p.add_argument("--suite", required=True)
    _add_budget(p)
    p.add_argument("--no-spot", action="store_true", help="skip substitution spot checks")
    p.set_defaults(fn=cmd_axioms)

    # Accept --json after the subcommand as well.
    for p in sub.choices.values():
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    return ap


def _report_parse_error(exc: ParseError, err):
    expected = ", ".join(sorted(exc.expected))
    err.write(f"parse error at {exc.line}:{exc.column}: expected {expected}; found {exc.found}\n")
    line = exc.text.splitlines()[exc.line - 1] if exc.text else ""
    width = max(1, exc.span.end - exc.span.begin)
    err.write(f"  {line}\n  {' ' * (exc.column - 1)}{'^' * width}\n")


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        return args.fn(args, out)
    except ParseError as exc:
        _report_parse_error(exc, err)
    except (ModelError, FragmentMismatch, BudgetTooLarge, CliError, ValueError, OSError) as exc:
        err.write(f"error: {exc}\n")
    return 2


if __name__ == "__main__":
    sys.exit(main())
