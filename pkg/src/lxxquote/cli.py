"""Command-line driver.

Stages can run one at a time through intermediate files::

    lxxquote ingest  --ot lxx.xml --nt nt.xml --out corpus.json.gz
    lxxquote detect  --corpus corpus.json.gz --out quotations.csv
    lxxquote analyze --corpus corpus.json.gz --quotations quotations.csv --out analysis.json
    lxxquote report  --corpus corpus.json.gz --quotations quotations.csv --analysis analysis.json --out out/

or all at once with ``lxxquote run --ot lxx.xml --nt nt.xml --out out/``.

Exit codes: 0 ok, 1 configuration, 2 parse, 3 degenerate data, 4 I/O.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .detect import MERGE_RULES, default_workers, detect, read_quotations, write_quotations
from .errors import ConfigError, LxxQuoteError, OutputError, ParseError
from .ingest import IngestResult, ingest_files, read_container, write_container
from .numerics import LOG_OFFSET_MODES
from .pipeline import Analysis, analysis_from_json, analysis_to_json, analyze, validate_config
from .report.emit import emit_report, svg_files, write_failure_manifest

log = logging.getLogger("lxxquote")

EXIT_OK, EXIT_CONFIG, EXIT_PARSE, EXIT_DEGENERATE, EXIT_IO = 0, 1, 2, 3, 4


def _existing_file(value: str) -> Path:
    path = Path(value)
    if not path.is_file():
        raise ConfigError(f"input file not found: {value}")
    return path


def _sidecar(quotations: Path) -> Path:
    return quotations.with_name(quotations.stem + ".meta.json")


def _write_text(path: Path, text: str) -> None:
    try:
        path.write_bytes(text.encode("utf-8"))
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def _load_analysis(path: Path) -> Analysis:
    try:
        return analysis_from_json(json.loads(path.read_text(encoding="utf-8")))
    except (ValueError, KeyError) as exc:
        raise ParseError(f"{path}: bad analysis file ({exc})") from None


def _read_corpus(path: Path) -> IngestResult:
    return read_container(_existing_file(str(path)))


def cmd_ingest(args) -> int:
    ot, nt = _existing_file(args.ot), _existing_file(args.nt)
    result = ingest_files(ot, nt)
    try:
        write_container(result, args.out)
    except OSError as exc:
        raise OutputError(f"cannot write {args.out}: {exc}") from exc
    log.info("ingested %d OT and %d NT tokens", result.ot.total_words(), result.nt.total_words())
    return EXIT_OK


def cmd_detect(args) -> int:
    if args.n < 2:
        raise ConfigError(f"n must be >= 2, got {args.n}")
    corpus = _read_corpus(Path(args.corpus))
    raw, quotes = detect(corpus.ot, corpus.nt, n=args.n, workers=args.workers, rule=args.merge_rule)
    out = Path(args.out)
    try:
        write_quotations(out, quotes, corpus.ot, corpus.nt)
    except OSError as exc:
        raise OutputError(f"cannot write {out}: {exc}") from exc
    meta = {"n": args.n, "raw_matches": len(raw), "merge_rule": args.merge_rule, "quotations": len(quotes)}
    _write_text(_sidecar(out), json.dumps(meta, indent=2, sort_keys=True) + "\n")
    log.info("%d raw matches merged into %d quotations", len(raw), len(quotes))
    return EXIT_OK


def _detect_meta(quotations: Path) -> dict:
    side = _sidecar(quotations)
    if side.is_file():
        return json.loads(side.read_text(encoding="utf-8"))
    log.warning("%s missing; assuming n=5, diagonal merge", side.name)
    return {"n": 5, "raw_matches": None, "merge_rule": "diagonal"}


def cmd_analyze(args) -> int:
    validate_config(5, args.k_ot, args.k_nt, args.log_offset)
    corpus = _read_corpus(Path(args.corpus))
    qpath = _existing_file(args.quotations)
    quotes = read_quotations(qpath)
    meta = _detect_meta(qpath)
    result = analyze(
        quotes, corpus.ot, corpus.nt, n=meta["n"], raw_matches=meta["raw_matches"],
        merge_rule=meta["merge_rule"], k_ot=args.k_ot, k_nt=args.k_nt, log_offset=args.log_offset,
    )
    _write_text(Path(args.out), json.dumps(analysis_to_json(result), sort_keys=True) + "\n")
    return EXIT_DEGENERATE if result.degenerate else EXIT_OK


def cmd_report(args) -> int:
    corpus = _read_corpus(Path(args.corpus))
    quotes = read_quotations(_existing_file(args.quotations))
    result = _load_analysis(_existing_file(args.analysis))
    emit_report(args.out, result, corpus.ot, corpus.nt, quotes, corpus.manifest, args.compare_published)
    return EXIT_DEGENERATE if result.degenerate else EXIT_OK


def cmd_plot(args) -> int:
    result = _load_analysis(_existing_file(args.analysis))
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create {out}: {exc}") from exc
    for name, text in svg_files(result).items():
        _write_text(out / name, text)
    return EXIT_OK


def cmd_run(args) -> int:
    ot, nt = _existing_file(args.ot), _existing_file(args.nt)
    validate_config(args.n, args.k_ot, args.k_nt, args.log_offset, args.merge_rule)
    if args.workers < 1:
        raise ConfigError(f"workers must be >= 1, got {args.workers}")
    config = {"ot": ot.name, "nt": nt.name, "n": args.n, "k_ot": args.k_ot, "k_nt": args.k_nt,
              "log_offset": args.log_offset, "merge_rule": args.merge_rule}
    try:
        corpus = ingest_files(ot, nt)
        raw, quotes = detect(corpus.ot, corpus.nt, n=args.n, workers=args.workers, rule=args.merge_rule)
        result = analyze(
            quotes, corpus.ot, corpus.nt, n=args.n, raw_matches=len(raw), merge_rule=args.merge_rule,
            k_ot=args.k_ot, k_nt=args.k_nt, log_offset=args.log_offset,
        )
        emit_report(args.out, result, corpus.ot, corpus.nt, quotes, corpus.manifest, args.compare_published)
    except LxxQuoteError as exc:
        write_failure_manifest(args.out, config, exc)
        raise
    return EXIT_DEGENERATE if result.degenerate else EXIT_OK


def _add_detect_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=5, help="n-gram length (default 5)")
    p.add_argument("--workers", type=int, default=default_workers(),
                   help="parallel NT-book shards (default: available CPUs)")
    p.add_argument("--merge-rule", choices=MERGE_RULES, default="diagonal")


def _add_analysis_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k-ot", type=int, default=3, help="OT cluster count (default 3)")
    p.add_argument("--k-nt", type=int, default=2, help="NT cluster count (default 2)")
    p.add_argument("--log-offset", choices=LOG_OFFSET_MODES, default="value",
                   help="value: ln(p + eps); literal: ln(p - ln eps)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lxxquote", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    parser.add_argument("--format", choices=["csv"], default="csv", help=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse Zefania XML into a corpus container")
    p.add_argument("--ot", required=True)
    p.add_argument("--nt", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("detect", help="find and merge n-gram quotations")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    _add_detect_flags(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("analyze", help="matrices, clustering and PCA")
    p.add_argument("--corpus", required=True)
    p.add_argument("--quotations", required=True)
    p.add_argument("--out", required=True)
    _add_analysis_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("report", help="write the report directory")
    p.add_argument("--corpus", required=True)
    p.add_argument("--quotations", required=True)
    p.add_argument("--analysis", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--compare-published", action="store_true",
                   help="add a comparison with the published figures to the manifest")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("run", help="ingest, detect, analyze and report in one go")
    p.add_argument("--ot", required=True)
    p.add_argument("--nt", required=True)
    p.add_argument("--out", required=True)
    _add_detect_flags(p)
    _add_analysis_flags(p)
    p.add_argument("--compare-published", action="store_true",
                   help="add a comparison with the published figures to the manifest")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("plot", help="re-render SVG figures from an analysis file")
    p.add_argument("--analysis", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except LxxQuoteError as exc:
        print(f"lxxquote {args.command}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"lxxquote {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
