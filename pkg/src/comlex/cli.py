"""Command-line interface.

Exit codes: 0 = success, 1 = validation errors found in lexicon content,
2 = usage or I/O error (argparse uses 2 for bad invocations as well).
The store root comes from ``--root`` or the ``COMLEX_ROOT`` environment
variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .convert import lexicon_to_records, lexicon_to_sgml
from .corpus import ingest, kwic, load_corpus_dir
from .diagnostics import ERROR, Diagnostic, has_errors
from .entries import Entry, Lexicon, SubcatSpec, lexicon_from_text, lexicon_to_text, print_entry
from .evaluation import (
    CoverageMode,
    MODE_ORDER,
    agreement,
    agreement_json,
    coverage,
    coverage_json,
    dumps_json,
    external_codes_from_lexicon,
    external_coverage,
    mapping_from_text,
    read_instances,
    render_agreement,
    render_coverage,
    union_lexicon,
)
from .frames import FrameRegistry, default_registry, registry_from_text
from .morphology import regular_forms
from .pdir import PdirClass, default_pdir, expand_pdir, pdir_from_file
from .sexpr import SexprParseError
from .store import LexiconStore
from .validation import validate_entry

OK, INVALID, USAGE = 0, 1, 2


class ContentError(Exception):
    """Lexicon content failed to parse/validate (exit code 1)."""


def _read_text(path: str) -> str:
    return Path(path).read_text("utf-8")


def _load_lexicon_file(path: str, strict: bool = False) -> tuple[Lexicon, list[Diagnostic]]:
    try:
        return lexicon_from_text(_read_text(path), strict=strict)
    except SexprParseError as exc:
        raise ContentError(f"{path}: [{exc.code}] {exc}") from exc


def _load_registry(path: str | None) -> tuple[FrameRegistry, list[Diagnostic]]:
    if path is None:
        return default_registry(), []
    try:
        return registry_from_text(_read_text(path))
    except SexprParseError as exc:
        raise ContentError(f"{path}: [{exc.code}] {exc}") from exc


def _load_pdir(path: str | None) -> PdirClass:
    return pdir_from_file(path) if path else default_pdir()


def _print_diagnostics(diags, prefix: str = "") -> None:
    for diag in diags:
        print(f"{prefix}{diag}", file=sys.stderr)


def _store_root(args) -> Path:
    root = getattr(args, "root", None) or os.environ.get("COMLEX_ROOT")
    if not root:
        raise ValueError("no store root: pass --root or set COMLEX_ROOT")
    return Path(root)


# -- commands -------------------------------------------------------------------


def cmd_validate(args) -> int:
    registry, frame_diags = _load_registry(args.frames)
    lexicon, diags = _load_lexicon_file(args.lexicon, strict=args.strict)
    pdir = _load_pdir(args.pdir)
    _print_diagnostics(frame_diags, prefix="frames: ")
    _print_diagnostics(diags)
    entry_diags: list[Diagnostic] = []
    for entry in lexicon:
        for diag in validate_entry(entry, registry, pdir):
            entry_diags.append(diag)
            print(f"({entry.orth}, {entry.pos}): {diag}", file=sys.stderr)
    all_diags = list(frame_diags) + list(diags) + entry_diags
    errors = sum(1 for d in all_diags if d.severity == ERROR)
    warnings = len(all_diags) - errors
    print(f"{len(lexicon)} entries: {errors} errors, {warnings} warnings")
    return INVALID if errors else OK


def cmd_query(args) -> int:
    store = LexiconStore(_store_root(args))
    hits = store.lookup_records(args.orth, args.pos)
    for hit in hits:
        print(f"{hit.lexicon}\tv{hit.version}\t{print_entry(hit.entry)}")
    if not hits:
        print(f"no entries for {args.orth!r}", file=sys.stderr)
    return OK


def cmd_convert(args) -> int:
    lexicon, diags = _load_lexicon_file(args.lexicon)
    _print_diagnostics(diags)
    if has_errors(diags):
        return INVALID
    if args.to == "sgml":
        sys.stdout.write(lexicon_to_sgml(lexicon))
    else:
        sys.stdout.write(lexicon_to_records(lexicon))
    return OK


def cmd_expand_pdir(args) -> int:
    lexicon, diags = _load_lexicon_file(args.lexicon)
    _print_diagnostics(diags)
    if has_errors(diags):
        return INVALID
    pdir = _load_pdir(getattr(args, "class"))
    expanded = Lexicon()
    for entry in lexicon:
        subc = [
            SubcatSpec(s.frame, tuple(expand_pdir(s.pval, pdir)) if s.pval else s.pval)
            for s in entry.subc
        ]
        expanded.add(
            Entry(pos=entry.pos, orth=entry.orth, morphology=dict(entry.morphology),
                  features=list(entry.features), subc=subc)
        )
    sys.stdout.write(lexicon_to_text(expanded))
    return OK


def cmd_eval_coverage(args) -> int:
    instances = read_instances(_read_text(args.gold))
    lexicons = {}
    for path in args.lexicons:
        lexicon, diags = _load_lexicon_file(path)
        if has_errors(diags):
            _print_diagnostics(diags)
            return INVALID
        lexicons[Path(path).stem] = lexicon
    pdir = _load_pdir(args.pdir)
    modes = list(MODE_ORDER) if args.mode == "all" else [CoverageMode(args.mode)]
    reports = [
        coverage(lexicons, instances, mode, pdir, include_flagged=not args.exclude_flagged)
        for mode in modes
    ]
    if args.json:
        sys.stdout.write(dumps_json(coverage_json(reports)))
    else:
        sys.stdout.write(render_coverage(reports))
        misses = reports[-1].misses
        if misses:
            print()
            for instance_id, reason in misses:
                print(f"miss\t{instance_id}\t{reason}")
    return OK


def cmd_eval_agreement(args) -> int:
    side_a = read_instances(_read_text(args.a))
    side_b = read_instances(_read_text(args.b))
    report = agreement(side_a, side_b)
    if args.json:
        sys.stdout.write(dumps_json(agreement_json(report)))
    else:
        sys.stdout.write(render_agreement(report))
    return OK


def cmd_eval_external(args) -> int:
    instances = read_instances(_read_text(args.gold))
    mapping = mapping_from_text(_read_text(args.mapping))
    lexicon, diags = _load_lexicon_file(args.lexicon)
    if has_errors(diags):
        _print_diagnostics(diags)
        return INVALID
    codes = external_codes_from_lexicon(lexicon, mapping)
    modes = ("strict", "soft") if args.mode == "both" else (args.mode,)
    for mode in modes:
        cell = external_coverage(mapping, codes, instances, mode)
        print(f"{mode}\t{cell.covered}/{cell.total}\t{cell.percent}%")
    return OK


def cmd_kwic(args) -> int:
    documents = load_corpus_dir(args.corpus)
    index = ingest(documents)
    forms = {args.word}
    if args.inflect:
        forms.update(regular_forms(args.inflect, args.word).values())
    for line in kwic(index, sorted(forms), window=args.window, limit=args.limit):
        print(f"{line.source}\t{line.left}[{line.match}]{line.right}")
    return OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(LexiconStore(_store_root(args)))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return OK


# -- parser ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="comlex",
        description="Syntax lexicon toolkit: validate, query, convert, and "
        "evaluate parenthesized lexicon files.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a lexicon file against a frame registry")
    p.add_argument("lexicon", help="lexicon file (.lex)")
    p.add_argument("--frames", help="frame registry file (default: built-in registry)")
    p.add_argument("--pdir", help="directional-preposition class file")
    p.add_argument("--strict", action="store_true",
                   help="treat unknown parts of speech/keywords as errors")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("query", help="look up entries in the store")
    p.add_argument("--orth", required=True, help="orthographic form to look up")
    p.add_argument("--pos", help="restrict to one part of speech")
    p.add_argument("--root", help="store root (default: $COMLEX_ROOT)")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("convert", help="export a lexicon to another format")
    p.add_argument("lexicon", help="lexicon file (.lex)")
    p.add_argument("--to", required=True, choices=("sgml", "records"))
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("expand-pdir", help="replace p-dir tokens with class members")
    p.add_argument("lexicon", help="lexicon file (.lex)")
    p.add_argument("--class", help="class file, one preposition per line")
    p.set_defaults(func=cmd_expand_pdir)

    ev = sub.add_parser("eval", help="coverage / agreement / external comparisons")
    ev_sub = ev.add_subparsers(dest="eval_command", required=True)

    p = ev_sub.add_parser("coverage", help="instance coverage per annotator/pair/union")
    p.add_argument("--gold", required=True, help="tagged instance TSV")
    p.add_argument("--lexicons", required=True, nargs="+",
                   help="one lexicon file per annotator (stem = annotator name)")
    p.add_argument("--mode", default="all",
                   choices=("all",) + tuple(m.value for m in MODE_ORDER))
    p.add_argument("--pdir", help="directional-preposition class file")
    p.add_argument("--exclude-flagged", action="store_true",
                   help="drop flagged instances before scoring")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_eval_coverage)

    p = ev_sub.add_parser("agreement", help="label agreement between two annotations")
    p.add_argument("--a", required=True, help="first annotation TSV")
    p.add_argument("--b", required=True, help="second annotation TSV")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_eval_agreement)

    p = ev_sub.add_parser("external", help="coverage through an external-code mapping")
    p.add_argument("--gold", required=True, help="tagged instance TSV")
    p.add_argument("--mapping", required=True, help="frame-to-code mapping TSV")
    p.add_argument("--lexicon", required=True, help="lexicon supplying the codes per lemma")
    p.add_argument("--mode", default="both", choices=("strict", "soft", "both"))
    p.set_defaults(func=cmd_eval_external)

    p = sub.add_parser("kwic", help="keyword-in-context lines from a corpus directory")
    p.add_argument("--corpus", required=True, help="directory of .txt files")
    p.add_argument("--word", required=True, help="surface form to search")
    p.add_argument("--inflect", choices=("noun", "verb"),
                   help="also search regular inflections for this part of speech")
    p.add_argument("--window", type=int, default=40)
    p.add_argument("--limit", type=int, default=25)
    p.set_defaults(func=cmd_kwic)

    p = sub.add_parser("serve", help="run the HTTP service over a store root")
    p.add_argument("--root", help="store root (default: $COMLEX_ROOT)")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8737)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ContentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
