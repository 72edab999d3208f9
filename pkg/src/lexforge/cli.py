"""Command line entry point: ``lexforge run | eval | synth``.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from lexforge.config import load_config
from lexforge.errors import LexforgeError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2

# (flag, type, help); dest is the config field of the same name
_RUN_OPTIONS = [
    ("--noun-tags", str, "comma-separated source tags counted as nouns"),
    ("--min-freq", int, "minimum count for DTW matching (both sides)"),
    ("--max-freq-ratio", float, "largest allowed ratio of the two counts"),
    ("--max-start-offset", float, "largest gap between relative first positions"),
    ("--euclid-threshold", float, "absolute bound on the (mean, std) distance, tokens"),
    ("--euclid-relative", float, "bound on the (mean, std) distance as a fraction of the source mean gap"),
    ("--dtw-threshold", float, "absolute bound on normalized DTW cost, tokens"),
    ("--dtw-relative", float, "bound on normalized DTW cost as a fraction of the source mean gap"),
    ("--dtw-band", float, "Sakoe-Chiba radius in cells (default: full matrix)"),
    ("--top-n", int, "candidates kept per source word"),
    ("--anchor-ranks", int, "primary ranks whose paths feed the anchor pool"),
    ("--cell-tolerance", float, "max relative gap mismatch of a path cell used for anchors"),
    ("--slope-band", float, "anchor band around the diagonal, fraction of target length"),
    ("--min-gap-source", int, "minimum source distance between anchors"),
    ("--max-jump-target", int, "allowed target deviation from the diagonal step"),
    ("--jump-growth", float, "extra allowed deviation per source token since the last anchor"),
    ("--t-threshold", float, "t-score gate for secondary pairs"),
    ("--min-secondary-freq", int, "minimum count for secondary matching"),
    ("--workers", int, "processes for DTW scoring"),
]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lexforge", description="Compile a bilingual noun lexicon "
                     "from unaligned parallel texts.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="compile a lexicon")
    run.add_argument("--source", required=True, help="tagged source text (word/TAG tokens)")
    run.add_argument("--target", required=True, help="segmented target text")
    run.add_argument("--config", help="key = value config file; flags override it")
    run.add_argument("--out", required=True, help="output directory")
    for flag, typ, text in _RUN_OPTIONS:
        run.add_argument(flag, type=typ, default=None, help=text)
    run.add_argument("--dump-signals", action="store_true", help="write signals.csv")
    run.add_argument("--dump-paths", action="store_true", help="write paths.csv")
    run.add_argument("--dump-anchors", action="store_true", help="write anchors.csv and anchors.svg")
    run.add_argument("--dump-segments", action="store_true",
                     help="write segments.tsv and segment_sets.tsv")

    ev = sub.add_parser("eval", help="score a lexicon against gold translations")
    ev.add_argument("--lexicon", required=True)
    ev.add_argument("--gold", required=True, help="source<TAB>target lines")
    ev.add_argument("-n", type=int, default=1, help="count a hit within the top n")
    ev.add_argument("--json", action="store_true", help="print JSON instead of a table")

    syn = sub.add_parser("synth", help="generate a synthetic fixture")
    syn.add_argument("--seed", type=int, default=42)
    syn.add_argument("--tokens", type=int, default=100_000)
    syn.add_argument("--pairs", type=int, default=200)
    syn.add_argument("--low-pairs", type=int, default=None)
    syn.add_argument("--out", required=True)
    return parser


def _cmd_run(args) -> int:
    from lexforge.diagnostics import emit_outputs
    from lexforge.pipeline import run_files

    overrides = {flag[2:]: getattr(args, flag[2:].replace("-", "_")) for flag, _, _ in _RUN_OPTIONS}
    try:
        cfg = load_config(args.config, overrides)
    except (OSError, KeyError, ValueError) as exc:
        raise LexforgeError(f"bad configuration: {exc}") from exc
    run = run_files(cfg, args.source, args.target)
    emit_outputs(run, args.out, signals=args.dump_signals, paths=args.dump_paths,
                 anchors=args.dump_anchors, segments=args.dump_segments)
    for message in run.report.warnings:
        print(f"warning: {message}", file=sys.stderr)
    r = run.report
    print(f"{len(run.primary)} primary + {len(run.secondary)} secondary entries, "
          f"{r.anchor_points} anchors -> {args.out}")
    return EXIT_OK


def _cmd_eval(args) -> int:
    from lexforge.lexicon import evaluate, format_report, load_gold, load_lexicon

    if args.n < 1:
        raise _UsageError("-n must be >= 1")
    try:
        lexicon = load_lexicon(args.lexicon)
        gold = load_gold(args.gold)
    except (OSError, ValueError) as exc:
        raise LexforgeError(str(exc)) from exc
    report = evaluate(lexicon, gold, args.n)
    if args.json:
        print(json.dumps({k: v.as_dict() for k, v in report.items()}, indent=2, sort_keys=True))
    else:
        print(format_report(report))
    return EXIT_OK


def _cmd_synth(args) -> int:
    from lexforge.synth import generate_fixture

    if args.tokens < 1000 or args.pairs < 1:
        raise _UsageError("--tokens must be >= 1000 and --pairs >= 1")
    try:
        fx = generate_fixture(seed=args.seed, tokens=args.tokens, pairs=args.pairs,
                              low_pairs=args.low_pairs)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    try:
        paths = fx.write(args.out)
    except OSError as exc:
        raise LexforgeError(f"cannot write {args.out}: {exc}") from exc
    print(" ".join(str(p) for p in paths.values()))
    return EXIT_OK


class _UsageError(Exception):
    pass


_COMMANDS = {"run": _cmd_run, "eval": _cmd_eval, "synth": _cmd_synth}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"lexforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LexforgeError as exc:
        print(f"lexforge: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
