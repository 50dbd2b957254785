"""Command line: ``walkguess enum|guess|check|replicate``.

Exit status: 0 verified (or fully checked), 1 no fit / check failed,
2 input error, 3 resource limit hit, 4 partial check.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .guess.fitting import InsufficientTerms
from .guess.grammar import RelationSyntaxError, parse_relation
from .guess.relations import TrivialRelation
from .replicate import EXAMPLES, UnknownExample, replicate
from .report import TermsFileError, atomic_write, dumps, format_terms, parse_terms, render_text
from .runs import ANSATZ_CHOICES, EXIT_CODES, INPUT_ERROR, check_document, enum_terms, guess_document
from .walks import CountMode, ResourceExceeded, StepSetError, parse_steps_arg, stepset_from_text

log = logging.getLogger("walkguess")


class InputError(Exception):
    pass


def load_steps(arg: str):
    """``--steps`` is a step-set file if one exists at that path, else inline."""
    path = Path(arg)
    try:
        if path.is_file():
            return stepset_from_text(path.read_text())
        return parse_steps_arg(arg)
    except StepSetError as e:
        raise InputError(f"step set {arg}: {e}") from None


def parse_mode(words) -> CountMode:
    if not words:
        return CountMode("zero")
    kind = words[0]
    if kind in ("zero", "any") and len(words) == 1:
        return CountMode(kind)
    if kind == "slice" and len(words) == 2:
        try:
            target = tuple(int(v) for v in words[1].split(","))
        except ValueError:
            raise InputError(f"bad slice target {words[1]!r}") from None
        try:
            return CountMode("slice", target)
        except ValueError as e:
            raise InputError(str(e)) from None
    raise InputError(f"--mode expects zero, any or 'slice i[,j]', got {' '.join(words)!r}")


def load_terms(path: str):
    try:
        terms, _ = parse_terms(Path(path).read_text())
    except OSError as e:
        raise InputError(f"cannot read terms file: {e}") from None
    except TermsFileError as e:
        raise InputError(f"{path}: {e}") from None
    if not terms:
        raise InputError(f"{path}: no terms")
    return terms


def load_relation(path: str):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read relation file: {e}") from None
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if len(lines) != 1:
        raise InputError(f"{path}: expected exactly one relation line, found {len(lines)}")
    try:
        return parse_relation(lines[0]), lines[0]
    except RelationSyntaxError as e:
        raise InputError(f"{path}: {e}") from None
    except TrivialRelation as e:
        raise InputError(f"{path}: trivial relation rejected: {e}") from None


def emit(doc: dict, out: str | None, fmt: str) -> None:
    text = render_text(doc)
    if out:
        atomic_write(out, dumps(doc))
        atomic_write(Path(out).with_suffix(".txt"), text)
    sys.stdout.write(dumps(doc) if fmt == "json" else text)


def cmd_enum(args) -> int:
    s = load_steps(args.steps)
    mode = parse_mode(args.mode)
    if args.N < 0:
        raise InputError("-N must be non-negative")
    try:
        values, manifest = enum_terms(s, mode, args.N)
    except ValueError as e:
        raise InputError(str(e)) from None
    text = format_terms(values, manifest)
    if args.out:
        atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_guess(args) -> int:
    if (args.terms is None) == (args.steps is None):
        raise InputError("give exactly one of --terms or --steps")
    if not 0 < args.split < 1:
        raise InputError("--split is the fit fraction and must lie strictly between 0 and 1")
    common = dict(ansatz=args.ansatz, max_terms=args.max_terms, max_order=args.max_order,
                  max_degree=args.max_degree, fit_fraction=args.split, min_verify=args.min_verify,
                  seconds=args.budget_seconds)
    try:
        if args.steps is not None:
            doc, status = guess_document(steps=load_steps(args.steps), mode=parse_mode(args.mode), **common)
        else:
            doc, status = guess_document(load_terms(args.terms), source=Path(args.terms).name, **common)
    except InsufficientTerms as e:
        raise InputError(f"insufficient terms: {e}") from None
    emit(doc, args.out, args.format)
    return EXIT_CODES[status]


def cmd_check(args) -> int:
    rel, text = load_relation(args.relation)
    terms = load_terms(args.terms)
    doc, status = check_document(rel, text, terms, args.start)
    emit(doc, args.out, args.format)
    return EXIT_CODES[status]


def cmd_replicate(args) -> int:
    try:
        doc, status = replicate(args.example)
    except UnknownExample as e:
        raise InputError(e.args[0]) from None
    emit(doc, args.out, args.format)
    return EXIT_CODES[status]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="walkguess", description="Count lattice walks and guess their laws.")
    p.add_argument("-v", "--verbose", action="store_true", help="log sweep progress to stderr")
    sub = p.add_subparsers(dest="verb", required=True)

    def output_flags(q):
        q.add_argument("--out", help="write the JSON report here (and the text report next to it)")
        q.add_argument("--format", choices=("text", "json"), default="text", help="what to print on stdout")

    e = sub.add_parser("enum", help="count walks and write a terms file")
    e.add_argument("--steps", required=True, help="step-set file, or inline steps like -1,-2,3 or 1:0,0:1")
    e.add_argument("--mode", nargs="+", help="zero | any | slice i[,j]")
    e.add_argument("-N", type=int, required=True, help="count walks of length 0..N")
    e.add_argument("--out", help="terms file (default: stdout)")
    e.set_defaults(func=cmd_enum)

    g = sub.add_parser("guess", help="guess a relation for a sequence")
    g.add_argument("--terms", help="terms file")
    g.add_argument("--steps", help="step-set file or inline steps (terms come from the walk counts)")
    g.add_argument("--mode", nargs="+", help="zero | any | slice i[,j]")
    g.add_argument("--ansatz", choices=ANSATZ_CHOICES, default="auto")
    g.add_argument("--max-order", type=int, default=12)
    g.add_argument("--max-degree", type=int, default=12)
    g.add_argument("--max-terms", type=int, default=400, help="walk lengths 0..max-terms-1 with --steps")
    g.add_argument("--split", type=float, default=0.6, help="fraction of terms used for fitting")
    g.add_argument("--min-verify", type=int, default=10, help="minimum number of held-out terms")
    g.add_argument("--budget-seconds", type=float, help="wall-clock cap for the sweeps")
    output_flags(g)
    g.set_defaults(func=cmd_guess)

    c = sub.add_parser("check", help="verify a relation against terms")
    c.add_argument("relation", help="file holding one relation in the canonical grammar")
    c.add_argument("terms", help="terms file")
    c.add_argument("--start", type=int, default=0, help="first index to check")
    output_flags(c)
    c.set_defaults(func=cmd_check)

    r = sub.add_parser("replicate", help="rerun a worked example and diff against stored output")
    r.add_argument("example", help=", ".join(EXAMPLES))
    output_flags(r)
    r.set_defaults(func=cmd_replicate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InputError as e:
        print(f"walkguess: error: {e}", file=sys.stderr)
        return EXIT_CODES[INPUT_ERROR]
    except ResourceExceeded as e:
        print(f"walkguess: resource limit: {e}", file=sys.stderr)
        return EXIT_CODES["resource-exceeded"]


if __name__ == "__main__":
    sys.exit(main())
