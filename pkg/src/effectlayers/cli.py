"""Command-line entry points.

    effectlayers check SPEC        preservation verdicts per stage
    effectlayers compose SPEC      full pipeline: weaken, laws, final theory
    effectlayers verify-laws SPEC  DL.1-4, naturality, monad and axiom checks
    effectlayers eval SPEC -e PROG [--stage N]

Exit codes: 0 = all verified, 1 = equations dropped but composite verified,
2 = unverified composite or failed law, 3 = input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .monads import Bound, BoundExplosionError, InnerOnlyMonadError
from .pipeline import compose_stack, eval_term
from .render import render_value
from .reports import (
    ReportDocument,
    check_document,
    composition_document,
    laws_document,
)
from .specfile import SpecParseError, parse_program, parse_spec
from .terms import TermError
from .values import ValueError_

_DEFAULT_GRID = (Fraction(0), Fraction(1, 2), Fraction(1))


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="effectlayers",
        description="compose algebraic effect layers and audit the resulting theory",
    )
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("check", "run preservation checks for every stage"),
        ("compose", "run the full composition pipeline"),
        ("verify-laws", "verify distributive-law and monad axioms"),
        ("eval", "evaluate a closed program at a stage"),
    ):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("spec", help="path to a .layers file")
        sp.add_argument("--bounds", help="JSON file overriding enumeration bounds")
        sp.add_argument("--json", dest="json_path", help="write the machine report here")
        sp.add_argument(
            "--keep-unknown",
            action="store_true",
            help="keep equations with UNKNOWN verdicts (marks the stage UNVERIFIED)",
        )
        if name == "eval":
            sp.add_argument("-e", "--program", required=True, help="program text")
            sp.add_argument("--stage", type=int, default=None,
                            help="stage index (default: outermost)")
    return p


def _load_bounds(path) -> Bound:
    if path is None:
        return Bound(prob_grid=_DEFAULT_GRID, max_set_size=3)
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    kwargs = {}
    for key in (
        "max_word_len",
        "max_set_size",
        "max_multiplicity",
        "max_term_depth",
        "ceiling",
    ):
        if key in raw:
            kwargs[key] = int(raw[key])
    if "prob_grid" in raw:
        kwargs["prob_grid"] = tuple(Fraction(g) for g in raw["prob_grid"])
    else:
        kwargs["prob_grid"] = _DEFAULT_GRID
    return Bound(**kwargs)


def _emit(doc: ReportDocument, json_path, stream) -> None:
    if json_path:
        with open(json_path, "w", encoding="utf-8") as fh:
            fh.write(doc.to_json() + "\n")
    print(doc.to_text(), file=stream)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        with open(args.spec, "r", encoding="utf-8") as fh:
            spec = parse_spec(fh.read())
        bound = _load_bounds(args.bounds)
    except (OSError, SpecParseError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3

    try:
        if args.command == "check":
            report = compose_stack(
                spec.layers,
                atoms=spec.atoms,
                bound=bound,
                keep_unknown=args.keep_unknown,
                build_laws=False,
            )
            doc = check_document(report)
            _emit(doc, args.json_path, sys.stdout)
            return doc.data["exit_code"]

        if args.command == "compose":
            report = compose_stack(
                spec.layers,
                atoms=spec.atoms,
                bound=bound,
                keep_unknown=args.keep_unknown,
                law_cap=60,
                algebra_cap=12,
            )
            doc = composition_document(report)
            _emit(doc, args.json_path, sys.stdout)
            return report.exit_code

        if args.command == "verify-laws":
            report = compose_stack(
                spec.layers,
                atoms=spec.atoms,
                bound=bound,
                keep_unknown=args.keep_unknown,
                law_cap=60,
                algebra_cap=12,
            )
            doc = laws_document(report)
            _emit(doc, args.json_path, sys.stdout)
            return doc.data["exit_code"]

        # eval
        report = compose_stack(
            spec.layers,
            atoms=spec.atoms,
            bound=bound,
            keep_unknown=args.keep_unknown,
            build_laws=False,
        )
        stage = args.stage if args.stage is not None else len(report.stages)
        program = parse_program(args.program, spec.signature_at(stage), spec.atoms)
        value = eval_term(report, program, stage, spec.atoms)
        print(render_value(value))
        if args.json_path:
            doc = ReportDocument(
                {
                    "kind": "eval",
                    "program": args.program,
                    "stage": stage,
                    "value": render_value(value),
                }
            )
            with open(args.json_path, "w", encoding="utf-8") as fh:
                fh.write(doc.to_json() + "\n")
        return 0
    except (SpecParseError, TermError, ValueError_) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (BoundExplosionError, InnerOnlyMonadError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
