"""Write the full report directory: CSV tables, SVG figures and the run manifest."""

from __future__ import annotations

import csv
import io
import json
import logging
from pathlib import Path
from typing import Sequence

import numpy as np

from .. import __version__
from ..corpus import NT_BOOKS, OT_BOOKS, BookId, Corpus
from ..detect import Quotation, quotations_csv, read_quotations
from ..errors import OutputError
from ..numerics import dendrogram_csv, matrix_csv, proportion_matrix
from .stats import cluster_name, flow_conservation, flows_csv, stats_csv
from .svg import histogram_svg, scatter_svg

log = logging.getLogger(__name__)

MANIFEST = "manifest.json"
SVG_FILES = ("histogram.svg", "pca_ot.svg", "pca_nt.svg")


def clusters_csv(books: Sequence[BookId], labels: Sequence[int]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["book", "cluster"])
    for b, label in zip(books, labels):
        w.writerow([b.name, cluster_name(b.testament, label)])
    return buf.getvalue()


def parse_clusters_csv(text: str) -> dict[str, str]:
    rows = list(csv.reader(io.StringIO(text)))
    return {book: cluster for book, cluster in rows[1:]}


def histogram_csv(hist: dict[int, int]) -> str:
    return "length,count\n" + "".join(f"{k},{v}\n" for k, v in hist.items())


def manifest_json(data: dict) -> str:
    return json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def svg_files(analysis) -> dict[str, str]:
    out = {"histogram.svg": histogram_svg(analysis.histogram, "Quotation length distribution")}
    views = (
        ("pca_ot.svg", analysis.ot_pca, analysis.ot_clusters, OT_BOOKS, "Old Testament books"),
        ("pca_nt.svg", analysis.nt_pca, analysis.nt_clusters, NT_BOOKS, "New Testament books"),
    )
    for name, pca, clusters, books, title in views:
        if pca is None:
            continue
        groups = [cluster_name(b.testament, l) for b, l in zip(books, clusters.labels)] if clusters else None
        caption = f"{title} ({pca.explained_variance_fraction:.0%} of variance shown)"
        out[name] = scatter_svg(pca.coords, [b.name for b in books], groups, caption)
    return out


def report_files(analysis, ot: Corpus, nt: Corpus, quotes: Sequence[Quotation]) -> dict[str, str]:
    files = {
        "quotations.csv": quotations_csv(quotes, ot, nt),
        "matrix_proportion.csv": matrix_csv(analysis.proportions.values),
        "length_histogram.csv": histogram_csv(analysis.histogram),
    }
    if analysis.log is not None:
        files["matrix_log.csv"] = matrix_csv(analysis.log.values)
    if analysis.ot_clusters is not None:
        files["clusters_ot.csv"] = clusters_csv(OT_BOOKS, analysis.ot_clusters.labels)
        files["clusters_nt.csv"] = clusters_csv(NT_BOOKS, analysis.nt_clusters.labels)
        files["dendrogram_ot.csv"] = dendrogram_csv(analysis.ot_clusters.merges, [b.name for b in OT_BOOKS])
        files["dendrogram_nt.csv"] = dendrogram_csv(analysis.nt_clusters.merges, [b.name for b in NT_BOOKS])
        files["cluster_stats.csv"] = stats_csv(analysis.stats)
        files["flows.csv"] = flows_csv(analysis.flows)
    files.update(svg_files(analysis))
    return files


def build_manifest(analysis, ingest_manifest: dict, files: Sequence[str], checks: dict, comparison: dict | None) -> dict:
    manifest = {
        "tool": "lxxquote",
        "version": __version__,
        "status": "degenerate" if analysis.degenerate else "ok",
        "config": {
            "n": analysis.n,
            "k_ot": analysis.k_ot,
            "k_nt": analysis.k_nt,
            "log_offset": analysis.log_offset,
            "merge_rule": analysis.merge_rule,
        },
        "inputs": ingest_manifest,
        "scope": "66-book canon only; non-canon books are excluded from detection and matrices",
        "detection": {"raw_matches": analysis.raw_matches, "quotations": analysis.quotations},
        "analysis": {
            "epsilon": analysis.log.epsilon if analysis.log is not None else None,
            "pca_explained_ot": analysis.ot_pca.explained_variance_fraction if analysis.ot_pca else None,
            "pca_explained_nt": analysis.nt_pca.explained_variance_fraction if analysis.nt_pca else None,
            "clustering": "skipped" if analysis.ot_clusters is None else "ward",
            "skipped": analysis.skipped,
        },
        "sensitivity": analysis.sensitivity,
        "checks": checks,
        "files": sorted(list(files) + [MANIFEST]),
    }
    if comparison is not None:
        from ..targets import out_of_tolerance

        manifest["comparison"] = comparison
        manifest["out_of_tolerance"] = out_of_tolerance(comparison)
    return manifest


def emit_report(
    out_dir: Path | str,
    analysis,
    ot: Corpus,
    nt: Corpus,
    quotes: Sequence[Quotation],
    ingest_manifest: dict,
    compare_published: bool = False,
) -> list[Path]:
    """Write every report file into ``out_dir``.

    On any failure the files written so far are removed (and the directory
    too, if this call created it) before OutputError is raised.
    """
    out_dir = Path(out_dir)
    created = not out_dir.exists()
    written: list[Path] = []
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        files = report_files(analysis, ot, nt, quotes)
        for name in sorted(files):
            path = out_dir / name
            path.write_bytes(files[name].encode("utf-8"))
            written.append(path)

        checks = {}
        reread = proportion_matrix(read_quotations(out_dir / "quotations.csv"), ot, nt)
        checks["matrix_from_quotation_csv_identical"] = bool(
            np.array_equal(reread.values, analysis.proportions.values))
        if analysis.flows is not None:
            checks["flow_conservation"] = flow_conservation(analysis.flows, analysis.stats, len(quotes))
        comparison = None
        if compare_published:
            from ..targets import compare

            comparison = compare(analysis, quotes, nt)
        manifest = build_manifest(analysis, ingest_manifest, files, checks, comparison)
        path = out_dir / MANIFEST
        path.write_bytes(manifest_json(manifest).encode("utf-8"))
        written.append(path)
    except OSError as exc:
        _cleanup(written, out_dir if created else None)
        raise OutputError(f"cannot write report to {out_dir}: {exc}") from exc
    except BaseException:
        _cleanup(written, out_dir if created else None)
        raise
    return written


def write_failure_manifest(out_dir: Path | str, config: dict, error: Exception) -> None:
    """Record the attempted configuration after a failed stage, if possible."""
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        data = {"tool": "lxxquote", "version": __version__, "status": "failed",
                "config": config, "error": f"{type(error).__name__}: {error}"}
        (out_dir / MANIFEST).write_bytes(manifest_json(data).encode("utf-8"))
    except OSError:
        log.error("could not write failure manifest to %s", out_dir)


def _cleanup(paths: list[Path], directory: Path | None) -> None:
    for p in paths:
        p.unlink(missing_ok=True)
    if directory is not None:
        try:
            directory.rmdir()
        except OSError:
            pass
