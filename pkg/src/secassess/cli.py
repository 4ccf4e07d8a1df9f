"""Command-line front end.

Subcommands::

    secassess assess  FILES --app A --operator OP [options]
    secassess trust   FILES --from X --to Y [options]
    secassess explain FILES (--partial FILE | --from X --to Y) [options]
    secassess lint    FILES

Input files use the ``.sf`` language; several files merge in argument
order and may not re-label atoms declared earlier.  Machine-readable
output goes to stdout (or ``--out``); diagnostics go to stderr.

Exit codes: 0 success, 1 parse/validation error, 2 usage error,
3 no eligible deployment (assess only).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .assessor import (
    Deployment, InconsistentPartialError, UnknownAppError, assess,
    deployment_formula, enumerate_deployments, rank,
)
from .dsl import ParseError, parse_program
from .explain import disjoint_proofs, export_ground_graph, format_literal
from .grounder import GroundingError
from .model import ValidationError, build_kb, lint_vocabulary
from .semiring import SEMIRINGS, CarrierMismatchError, ProbValue
from .trust import (
    TooManyPathsError, UnknownOperatorError, default_path_limit,
    parse_trust_mode, trust_formula, trust_value,
)
from .wmc import SizeLimitError, UnsupportedLabelError, formula_probability

class InputFileError(Exception):
    """A named input file failed to parse or load."""


USER_ERRORS = (
    InputFileError, ParseError, ValidationError, GroundingError,
    UnknownAppError, InconsistentPartialError, UnknownOperatorError,
    TooManyPathsError, CarrierMismatchError, UnsupportedLabelError,
    SizeLimitError, OSError, ValueError,
)


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("files", nargs="+", metavar="FILE",
                        help=".sf input files, merged in order")
    parser.add_argument("--semiring", choices=sorted(SEMIRINGS),
                        default="prob", help="evaluation algebra")
    parser.add_argument("--trust-mode", default="transitive",
                        metavar="MODE",
                        help="transitive | direct-preferred | radius:<d>")
    parser.add_argument("--out", metavar="FILE",
                        help="write the report here instead of stdout")


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="secassess",
        description="Security assessment of multi-service cloud-edge "
                    "deployments, weighted by stakeholder trust.")
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_assess = sub.add_parser("assess", help="rank eligible deployments")
    _add_common(p_assess)
    p_assess.add_argument("--app", required=True, help="application to deploy")
    p_assess.add_argument("--operator", required=True,
                          help="deploying application operator")
    p_assess.add_argument("--partial", metavar="FILE",
                          help="JSON deployment fixing some services")
    p_assess.add_argument("--format", choices=["table", "json"],
                          default="table")
    p_assess.add_argument("--rank-by", choices=["value", "confidence"],
                          default="confidence",
                          help="ordering for pair-valued levels")

    p_trust = sub.add_parser("trust", help="trust degree between operators")
    _add_common(p_trust)
    p_trust.add_argument("--from", dest="from_op", required=True,
                         metavar="OP", help="trusting operator")
    p_trust.add_argument("--to", dest="to_op", required=True,
                         metavar="OP", help="trusted operator")

    p_explain = sub.add_parser(
        "explain", help="ground graph or disjoint proofs for one query")
    _add_common(p_explain)
    p_explain.add_argument("--partial", metavar="FILE",
                           help="JSON file with one complete deployment")
    p_explain.add_argument("--operator", help="deploying operator "
                           "(overrides the JSON field)")
    p_explain.add_argument("--from", dest="from_op", metavar="OP",
                           help="trust query source")
    p_explain.add_argument("--to", dest="to_op", metavar="OP",
                           help="trust query target")
    p_explain.add_argument("--format", choices=["dot", "json"],
                           default="dot")

    p_lint = sub.add_parser("lint", help="check capability names against "
                            "the shared vocabulary")
    _add_common(p_lint)
    return parser


def _load_kb(args):
    programs = []
    for path in args.files:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
        try:
            programs.append(parse_program(text))
        except ParseError as exc:
            raise InputFileError(f"{path}: {exc}") from None
    return build_kb(programs, SEMIRINGS[args.semiring])


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _level_fields(level) -> dict:
    if isinstance(level, ProbValue):
        return {"level": level.p}
    return {"level": [level.t, level.c],
            "level_components": {"trust": level.t, "confidence": level.c}}


def _level_text(level) -> str:
    if isinstance(level, ProbValue):
        return f"{level.p:.10g}"
    return str(level)


def _read_partial(path: str, kb, operator: str | None):
    """Deployment JSON -> (app, operator, {service: node}); flags win."""
    with open(path, encoding="utf-8") as handle:
        doc = json.load(handle)
    if isinstance(doc, dict) and "deployments" in doc:  # a whole report
        if len(doc["deployments"]) != 1:
            raise ValueError(f"{path}: expected exactly one deployment")
        app = doc.get("app")
        operator = operator or doc.get("operator")
        doc = doc["deployments"][0]
    else:
        app = doc.get("app")
        operator = operator or doc.get("operator")
    assignments = doc.get("assignments")
    if not isinstance(assignments, list):
        raise ValueError(f"{path}: missing 'assignments' list")
    fixed = {}
    for entry in assignments:
        service, node = entry["service"], entry["node"]
        if "operator" in entry and kb.nodes.get(node) != entry["operator"]:
            raise InconsistentPartialError(
                f"node {node!r} is not operated by {entry['operator']!r}")
        fixed[service] = node
    if app is None:
        for candidate, services in kb.apps.items():
            if any(s in services for s in fixed):
                app = candidate
                break
    return app, operator, fixed


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_assess(args) -> int:
    kb = _load_kb(args)
    mode = parse_trust_mode(args.trust_mode)
    partial = None
    if args.partial:
        _app, _op, partial = _read_partial(args.partial, kb, args.operator)
    ranked = rank(kb, args.app, args.operator, partial=partial,
                  semiring=SEMIRINGS[args.semiring], trust_mode=mode,
                  rank_by=args.rank_by)

    ids = {d: f"Δ{i + 1}" for i, d in enumerate(
        enumerate_deployments(kb, args.app, args.operator, partial=partial,
                              trust_mode=mode))}

    if args.format == "json":
        doc = {
            "app": args.app,
            "operator": args.operator,
            "semiring": args.semiring,
            "deployments": [
                {
                    "id": ids[a.deployment],
                    "assignments": [
                        {"service": s, "node": n, "operator": o}
                        for (s, n, o) in a.deployment.assignments
                    ],
                    **_level_fields(a.level),
                }
                for a in ranked
            ],
        }
        _emit(args, json.dumps(doc, indent=2) + "\n")
    else:
        services = kb.apps[args.app]
        headers = ["Dep.", *services, "Security"]
        rows = [
            [ids[a.deployment], *a.deployment.nodes(), _level_text(a.level)]
            for a in ranked
        ]
        widths = [max([len(h)] + [len(r[i]) for r in rows])
                  for i, h in enumerate(headers)]
        out = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
        out += ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip()
                for row in rows]
        _emit(args, "\n".join(out) + "\n")
    return 0 if ranked else 3


def cmd_trust(args) -> int:
    kb = _load_kb(args)
    mode = parse_trust_mode(args.trust_mode)
    value = trust_value(kb, args.from_op, args.to_op, mode=mode,
                        semiring=SEMIRINGS[args.semiring],
                        path_limit=default_path_limit())
    _emit(args, f"{value}\n")
    return 0


def _explain_target(args, kb):
    """Resolve the query target to (description dict, GroundFormula)."""
    mode = parse_trust_mode(args.trust_mode)
    if args.partial:
        app, operator, fixed = _read_partial(args.partial, kb, args.operator)
        if app is None or operator is None:
            raise ValueError(
                "the deployment JSON (or --operator) must identify the "
                "application and deploying operator")
        services = kb.apps.get(app)
        if services is None:
            raise UnknownAppError(f"unknown application {app!r}")
        missing = [s for s in services if s not in fixed]
        if missing:
            raise ValueError(
                f"explanation needs a complete deployment; missing "
                f"{', '.join(missing)}")
        deployment = Deployment(
            app, operator,
            tuple((s, fixed[s], kb.nodes[fixed[s]]) for s in services))
        head = {"app": app, "operator": operator,
                "assignments": [{"service": s, "node": n, "operator": o}
                                for (s, n, o) in deployment.assignments]}
        return head, deployment_formula(kb, deployment, trust_mode=mode)
    if args.from_op and args.to_op:
        head = {"from": args.from_op, "to": args.to_op}
        return head, trust_formula(kb, args.from_op, args.to_op, mode=mode,
                                   path_limit=default_path_limit())
    raise ValueError("explain needs --partial FILE or --from/--to")


def cmd_explain(args) -> int:
    kb = _load_kb(args)
    head, formula = _explain_target(args, kb)
    if args.format == "dot":
        _emit(args, export_ground_graph(formula))
        return 0
    proofs = disjoint_proofs(formula)
    doc = {
        **head,
        "probability": formula_probability(formula),
        "proofs": [
            {
                "literals": [format_literal(formula, atom_id, positive)
                             for atom_id, positive in proof.literals],
                "contribution": proof.contribution,
            }
            for proof in proofs
        ],
    }
    _emit(args, json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    return 0


def cmd_lint(args) -> int:
    kb = _load_kb(args)
    warnings = lint_vocabulary(kb)
    text = "".join(f"warning: {w}\n" for w in warnings)
    _emit(args, text if warnings else "no warnings\n")
    return 0


def main(argv=None) -> int:
    args = build_arg_parser().parse_args(argv)
    handler = {"assess": cmd_assess, "trust": cmd_trust,
               "explain": cmd_explain, "lint": cmd_lint}[args.command]
    try:
        return handler(args)
    except USER_ERRORS as exc:
        print(f"secassess: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
