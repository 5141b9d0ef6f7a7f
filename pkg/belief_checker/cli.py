"""
belief-checker command line tool

Exit codes:
    0: success (and every assertion holds)
    1: usage, syntax, lookup or format error
    2: model validation failure
    3: assertion failure (failed golden expectation, theorem mismatch, or a false result under --assert)
"""

import argparse
import json
import logging
import random
import sys

from typing import Any, Dict, List, Optional, Sequence

from belief_checker.checker import Checker
from belief_checker.config import CheckerOpts, load_opts, opts_from_mapping
from belief_checker.errors import BeliefCheckerError, ModelFormatError, ModelValidationError
from belief_checker.formula import parse, render
from belief_checker.misc import fingerprint_matches, model_fingerprint
from belief_checker.model import Model, Point, validate_model
from belief_checker.model_io import dump_model, load_model
from belief_checker.properties import TheoremReport, check_jb, verify_theorem_1_2, verify_theorem_3_4
from belief_checker.scenarios import SCENARIOS, build_scenario, evaluate, random_formula, random_model
from belief_checker.scenarios.random_model import INDEXICAL_GROUP, RIGID_GROUP

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_ASSERTION = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine readable output")
    common.add_argument("--config", help="TOML file with a [checker] table")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")

    checking = argparse.ArgumentParser(add_help=False)
    checking.add_argument("--assert", dest="assert_", action="store_true", help="exit 3 unless the result holds")
    checking.add_argument("--force", action="store_true", help="check a model that fails validation")
    checking.add_argument("--fingerprint", help="refuse the model file unless it has this fingerprint")

    parser = _Parser(prog="belief-checker", description="Model checker for multi-agent belief logic")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", parents=[common], help="validate a model file")
    p.add_argument("model")

    p = sub.add_parser("check", parents=[common, checking], help="evaluate a formula")
    p.add_argument("model")
    p.add_argument("-f", "--formula", required=True)
    where = p.add_mutually_exclusive_group()
    where.add_argument("--point", help="run,time")
    where.add_argument("--all", action="store_true", help="every point (default)")

    p = sub.add_parser("jb", parents=[common, checking], help="check the joint behavior property")
    p.add_argument("model")
    p.add_argument("--group", required=True)

    p = sub.add_parser("theorems", parents=[common, checking], help="verify the Ca / joint behavior theorems")
    p.add_argument("model", nargs="?")
    p.add_argument("--group")
    p.add_argument("--phi", help="formula for the arbitrary-formula variant")
    p.add_argument("--random", type=int, metavar="N", help="run on N random models instead of a file")
    p.add_argument("--seed", type=int, help="first seed of the random corpus")

    p = sub.add_parser("scenario", parents=[common], help="run a built-in scenario's golden expectations")
    p.add_argument("name", choices=sorted(SCENARIOS))
    p.add_argument("--export", metavar="PATH", help="write the scenario model as JSON instead")

    p = sub.add_parser("export", parents=[common], help="write a built-in scenario model as JSON")
    p.add_argument("name", choices=sorted(SCENARIOS))
    p.add_argument("--out", required=True)

    p = sub.add_parser("random", parents=[common], help="write a random model as JSON")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    return parser


def _emit(args, payload: Dict[str, Any], lines: List[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        for line in lines:
            print(line)


def _load(args) -> Model:
    m = load_model(args.model)
    if args.fingerprint is not None:
        try:
            same = fingerprint_matches(m, args.fingerprint)
        except ValueError as e:
            raise UsageError(f"--fingerprint: {e}") from None
        if not same:
            raise ModelFormatError(
                f"{args.model} has fingerprint {model_fingerprint(m)}, expected {args.fingerprint}"
            )
    return m


def _session(args, m: Model) -> Checker:
    return Checker(m, allow_invalid=getattr(args, "force", False))


def _validation_lines(report) -> List[str]:
    if report.passed:
        return ["model is valid"]
    lines = [f"{len(report.violations)} violation(s):"]
    for v in report.violations:
        witness = " ".join(f"({p})" for p in v.witness)
        lines.append(f"  {v.rule}: {v.element}: {v.detail}" + (f" witness {witness}" if witness else ""))
    return lines


def cmd_validate(args, opts: CheckerOpts) -> int:
    m = load_model(args.model)
    report = validate_model(m)
    payload = {"command": "validate", "model": model_fingerprint(m), **report.to_dict()}
    _emit(args, payload, _validation_lines(report))
    return EXIT_OK if report.passed else EXIT_INVALID


def cmd_check(args, opts: CheckerOpts) -> int:
    m = _load(args)
    c = _session(args, m)
    f = parse(args.formula, m)
    points = [m.require_point(Point.parse(args.point))] if args.point else list(m.points)
    table = [(p, c.check(f, p)) for p in points]
    holds = all(v for _, v in table)
    payload = {
        "command": "check",
        "model": model_fingerprint(m),
        "formula": render(f),
        "points": [{"point": [p.run, p.time], "holds": v} for p, v in table],
        "holds_everywhere": holds,
    }
    _emit(args, payload, [render(f)] + [f"  {p}\t{'true' if v else 'false'}" for p, v in table])
    return EXIT_ASSERTION if args.assert_ and not holds else EXIT_OK


def cmd_jb(args, opts: CheckerOpts) -> int:
    m = _load(args)
    c = _session(args, m)
    report = check_jb(m, args.group, c)
    lines = [f"JB{{{report.group}}}: {'holds' if report.holds else 'fails'}"]
    lines += [f"  {agent} acts at ({p}) without believing chi{{{report.group}}}" for p, agent in report.violations]
    _emit(args, {"command": "jb", "model": model_fingerprint(m), **report.to_dict()}, lines)
    return EXIT_ASSERTION if args.assert_ and not report.holds else EXIT_OK


def _theorem_line(label: str, r: TheoremReport) -> str:
    status = "ok" if r.equivalence_respected else "MISMATCH"
    line = f"{label} theorems {r.theorems[0]},{r.theorems[1]} group {r.group}: left={r.left} right={r.right} {status}"
    if r.witness_point is not None:
        line += f" witness ({r.witness_point})" + (f" agent {r.witness_agent}" if r.witness_agent else "")
    if r.note:
        line += f" [{r.note}]"
    return line


def cmd_theorems(args, opts: CheckerOpts) -> int:
    entries = []
    if args.random is not None:
        first = args.seed if args.seed is not None else opts.seed
        for seed in range(first, first + args.random):
            m = random_model(seed, opts)
            c = Checker(m)
            rng = random.Random(seed)
            for group in (RIGID_GROUP, INDEXICAL_GROUP):
                phi = random_formula(rng, m, opts.formula_depth, nested_common=False)
                entries.append((f"seed {seed}", verify_theorem_1_2(m, group, c)))
                entries.append((f"seed {seed}", verify_theorem_3_4(m, group, phi, c)))
            logger.info("seed %d done", seed)
    else:
        if not args.model or not args.group:
            raise UsageError("theorems needs a model and --group, or --random N")
        m = _load(args)
        c = _session(args, m)
        entries.append((args.model, verify_theorem_1_2(m, args.group, c)))
        if args.phi:
            entries.append((args.model, verify_theorem_3_4(m, args.group, parse(args.phi, m), c)))

    respected = all(r.equivalence_respected for _, r in entries)
    payload = {
        "command": "theorems",
        "reports": [{"source": label, **r.to_dict()} for label, r in entries],
        "all_respected": respected,
    }
    lines = [_theorem_line(label, r) for label, r in entries]
    lines.append(f"{len(entries)} report(s), {'all respected' if respected else 'MISMATCH found'}")
    _emit(args, payload, lines)
    if not respected:
        return EXIT_ASSERTION
    # --assert additionally requires the joint behavior side to hold
    if args.assert_ and not all(r.left for _, r in entries):
        return EXIT_ASSERTION
    return EXIT_OK


def cmd_scenario(args, opts: CheckerOpts) -> int:
    scenario = build_scenario(args.name)
    if args.export:
        return _export(args, scenario.model, args.export, scenario.name)
    results = evaluate(scenario)
    passed = all(r.passed for r in results)
    payload = {
        "command": "scenario",
        "scenario": scenario.name,
        "model": model_fingerprint(scenario.model),
        "results": [r.to_dict() for r in results],
        "passed": passed,
    }
    lines = [f"{scenario.name}: {scenario.title}"]
    for r in results:
        e = r.expectation
        status = "pass" if r.passed else "FAIL"
        where = "" if e.kind == "property" else f" @ {e.selector}"
        lines.append(f"  [{status}] {e.text}{where} == {str(e.expected).lower()}")
        if r.mismatches:
            lines.append("         mismatching points: " + " ".join(f"({p})" for p in r.mismatches))
        if r.error:
            lines.append(f"         error: {r.error}")
    _emit(args, payload, lines)
    return EXIT_OK if passed else EXIT_ASSERTION


def _export(args, m: Model, path: str, source: str) -> int:
    dump_model(m, path)
    fingerprint = model_fingerprint(m)
    _emit(
        args,
        {"command": "export", "source": source, "out": path, "model": fingerprint},
        [f"wrote {source} to {path} ({fingerprint})"],
    )
    return EXIT_OK


def cmd_export(args, opts: CheckerOpts) -> int:
    return _export(args, build_scenario(args.name).model, args.out, args.name)


def cmd_random(args, opts: CheckerOpts) -> int:
    seed = args.seed if args.seed is not None else opts.seed
    return _export(args, random_model(seed, opts), args.out, f"random seed {seed}")


COMMANDS = {
    "validate": cmd_validate,
    "check": cmd_check,
    "jb": cmd_jb,
    "theorems": cmd_theorems,
    "scenario": cmd_scenario,
    "export": cmd_export,
    "random": cmd_random,
}


def _setup_logging(verbose: int, opts: CheckerOpts) -> None:
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = getattr(logging, opts.log_level.upper())
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s", force=True)


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        opts = load_opts(args.config) if args.config else CheckerOpts()
        if getattr(args, "seed", None) is not None:
            opts = opts_from_mapping({"seed": args.seed}, base=opts)
        _setup_logging(args.verbose, opts)
        return COMMANDS[args.command](args, opts)
    except UsageError as e:
        print(f"belief-checker: usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ModelValidationError as e:
        print("belief-checker: model failed validation (use --force to check anyway)", file=sys.stderr)
        for line in _validation_lines(e.report):
            print(line, file=sys.stderr)
        return EXIT_INVALID
    except (BeliefCheckerError, OSError) as e:
        print(f"belief-checker: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
