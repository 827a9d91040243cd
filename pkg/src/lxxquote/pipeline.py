"""Analysis stage: matrices, clustering, PCA views and cluster statistics."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .corpus import NT_BOOKS, OT_BOOKS, Corpus
from .detect import MERGE_RULES, Quotation, length_histogram, merge_matches, raw_windows
from .errors import ConfigError, DegenerateDataError, ParseError
from .numerics import (
    LOG_OFFSET_MODES,
    LogMatrix,
    Merge,
    PcaProjection,
    ProportionMatrix,
    WardResult,
    log_transform,
    match_labels,
    loading_projection,
    proportion_matrix,
    ward_cluster,
)
from .report.stats import ClusterStats, FlowTable, cluster_stats, flow_conservation, flow_table

log = logging.getLogger(__name__)

ANALYSIS_FORMAT = "lxxquote-analysis"
ANALYSIS_VERSION = 1


@dataclass
class Analysis:
    n: int
    raw_matches: int
    merge_rule: str
    log_offset: str
    k_ot: int
    k_nt: int
    quotations: int
    histogram: dict[int, int]
    proportions: ProportionMatrix
    log: LogMatrix | None = None
    ot_clusters: WardResult | None = None
    nt_clusters: WardResult | None = None
    ot_pca: PcaProjection | None = None
    nt_pca: PcaProjection | None = None
    stats: list[ClusterStats] = field(default_factory=list)
    flows: FlowTable | None = None
    skipped: dict[str, str] = field(default_factory=dict)
    sensitivity: dict = field(default_factory=dict)

    @property
    def degenerate(self) -> bool:
        return self.log is None


def validate_config(n: int, k_ot: int, k_nt: int, log_offset: str, merge_rule: str = "diagonal") -> None:
    if n < 2:
        raise ConfigError(f"n must be >= 2, got {n}")
    if not 1 <= k_ot <= len(OT_BOOKS):
        raise ConfigError(f"k_ot must be in 1..{len(OT_BOOKS)}, got {k_ot}")
    if not 1 <= k_nt <= len(NT_BOOKS):
        raise ConfigError(f"k_nt must be in 1..{len(NT_BOOKS)}, got {k_nt}")
    if log_offset not in LOG_OFFSET_MODES:
        raise ConfigError(f"log offset mode must be one of {LOG_OFFSET_MODES}, got {log_offset!r}")
    if merge_rule not in MERGE_RULES:
        raise ConfigError(f"merge rule must be one of {MERGE_RULES}, got {merge_rule!r}")


def testament_views(lm: LogMatrix, k_ot: int, k_nt: int) -> tuple[WardResult, WardResult]:
    """Ward clusters of OT books (27-D column points) and NT books (39-D row points)."""
    return ward_cluster(lm.values.T, k_ot), ward_cluster(lm.values, k_nt)


def pca_views(lm: LogMatrix) -> tuple[PcaProjection | None, PcaProjection | None, dict[str, str]]:
    """Plane coordinates for OT and NT books.

    OT books are placed by their loadings in a PCA fitted over NT books
    (rows), and NT books by their loadings in a PCA fitted over OT books.
    """
    out: list[PcaProjection | None] = []
    skipped = {}
    for name, table in (("pca_ot", lm.values), ("pca_nt", lm.values.T)):
        try:
            out.append(loading_projection(table, 2))
        except DegenerateDataError as exc:
            out.append(None)
            skipped[name] = str(exc)
    return out[0], out[1], skipped


def _membership_shift(labels, alt_labels, books) -> dict:
    mapping, agree = match_labels(alt_labels, labels)
    moved = [b.name for b, a, l in zip(books, alt_labels, labels) if mapping[a] != l]
    return {"agreement": agree, "books": len(books), "moved": moved}


def analyze(
    quotes: Sequence[Quotation],
    ot: Corpus,
    nt: Corpus,
    *,
    n: int = 5,
    raw_matches: int | None = None,
    merge_rule: str = "diagonal",
    k_ot: int = 3,
    k_nt: int = 2,
    log_offset: str = "value",
) -> Analysis:
    validate_config(n, k_ot, k_nt, log_offset, merge_rule)
    quotes = list(quotes)
    if raw_matches is None:
        raw_matches = sum(q.length - n + 1 for q in quotes)
    result = Analysis(
        n=n, raw_matches=raw_matches, merge_rule=merge_rule, log_offset=log_offset,
        k_ot=k_ot, k_nt=k_nt, quotations=len(quotes),
        histogram=length_histogram(quotes),
        proportions=proportion_matrix(quotes, ot, nt),
    )
    if merge_rule == "diagonal" and quotes:
        alt = merge_matches(raw_windows(quotes, n), "overlap")
        result.sensitivity["overlap_merge"] = {
            "quotations": len(alt),
            "length_mode": Counter(q.length for q in alt).most_common(1)[0][0],
        }
    try:
        result.log = log_transform(result.proportions, log_offset)
    except DegenerateDataError as exc:
        log.warning("clustering skipped: %s", exc)
        for stage in ("clustering", "pca_ot", "pca_nt", "cluster_stats", "flows"):
            result.skipped[stage] = f"degenerate: {exc}"
        return result

    result.ot_clusters, result.nt_clusters = testament_views(result.log, k_ot, k_nt)
    result.ot_pca, result.nt_pca, skipped = pca_views(result.log)
    result.skipped.update(skipped)
    ot_labels, nt_labels = result.ot_clusters.labels, result.nt_clusters.labels
    result.stats = cluster_stats(quotes, ot, nt, ot_labels, nt_labels)
    result.flows = flow_table(quotes, ot_labels, nt_labels)
    if not flow_conservation(result.flows, result.stats, len(quotes)):
        raise AssertionError("flow table does not conserve reference counts")

    other = "literal" if log_offset == "value" else "value"
    alt_log = log_transform(result.proportions, other)
    alt_ot, alt_nt = testament_views(alt_log, k_ot, k_nt)
    alt_pca_ot, alt_pca_nt, _ = pca_views(alt_log)
    result.sensitivity[f"{other}_log_offset"] = {
        "ot_membership": _membership_shift(result.ot_clusters.labels, alt_ot.labels, OT_BOOKS),
        "nt_membership": _membership_shift(result.nt_clusters.labels, alt_nt.labels, NT_BOOKS),
        "pca_explained_ot": alt_pca_ot.explained_variance_fraction if alt_pca_ot else None,
        "pca_explained_nt": alt_pca_nt.explained_variance_fraction if alt_pca_nt else None,
    }
    return result


# -- JSON round trip ---------------------------------------------------------

def _ward_json(w: WardResult | None):
    if w is None:
        return None
    return {"k": w.k, "labels": list(w.labels),
            "merges": [[m.left, m.right, m.height, m.size] for m in w.merges]}


def _ward_from(d) -> WardResult | None:
    if d is None:
        return None
    return WardResult(tuple(d["labels"]), d["k"], tuple(Merge(*m) for m in d["merges"]))


def _pca_json(p: PcaProjection | None):
    if p is None:
        return None
    return {"coords": p.coords.tolist(), "components": p.components.tolist(),
            "eigenvalues": p.eigenvalues.tolist(), "mean": p.mean.tolist(),
            "explained": p.explained_variance_fraction}


def _pca_from(d) -> PcaProjection | None:
    if d is None:
        return None
    return PcaProjection(np.array(d["coords"]), np.array(d["components"]),
                         np.array(d["eigenvalues"]), np.array(d["mean"]), d["explained"])


def analysis_to_json(a: Analysis) -> dict:
    return {
        "format": ANALYSIS_FORMAT,
        "version": ANALYSIS_VERSION,
        "n": a.n, "raw_matches": a.raw_matches, "merge_rule": a.merge_rule,
        "log_offset": a.log_offset, "k_ot": a.k_ot, "k_nt": a.k_nt,
        "quotations": a.quotations,
        "histogram": [[k, v] for k, v in a.histogram.items()],
        "proportions": a.proportions.values.tolist(),
        "log": None if a.log is None else {"values": a.log.values.tolist(), "epsilon": a.log.epsilon},
        "ot_clusters": _ward_json(a.ot_clusters),
        "nt_clusters": _ward_json(a.nt_clusters),
        "ot_pca": _pca_json(a.ot_pca),
        "nt_pca": _pca_json(a.nt_pca),
        "stats": [[s.cluster, s.books, s.word_count, s.reference_words, s.mean_reference_length, s.reference_count]
                  for s in a.stats],
        "flows": None if a.flows is None else a.flows.counts.tolist(),
        "skipped": a.skipped,
        "sensitivity": a.sensitivity,
    }


def analysis_from_json(d: dict) -> Analysis:
    if d.get("format") != ANALYSIS_FORMAT or d.get("version") != ANALYSIS_VERSION:
        raise ParseError("not a version-1 analysis file")
    lm = None
    if d["log"] is not None:
        lm = LogMatrix(np.array(d["log"]["values"]), d["log"]["epsilon"], d["log_offset"])
    return Analysis(
        n=d["n"], raw_matches=d["raw_matches"], merge_rule=d["merge_rule"],
        log_offset=d["log_offset"], k_ot=d["k_ot"], k_nt=d["k_nt"],
        quotations=d["quotations"],
        histogram={k: v for k, v in d["histogram"]},
        proportions=ProportionMatrix(np.array(d["proportions"], dtype=float).reshape(len(NT_BOOKS), len(OT_BOOKS))),
        log=lm,
        ot_clusters=_ward_from(d["ot_clusters"]),
        nt_clusters=_ward_from(d["nt_clusters"]),
        ot_pca=_pca_from(d["ot_pca"]),
        nt_pca=_pca_from(d["nt_pca"]),
        stats=[ClusterStats(*s) for s in d["stats"]],
        flows=None if d["flows"] is None else FlowTable(np.array(d["flows"], dtype=np.int64)),
        skipped=d["skipped"],
        sensitivity=d["sensitivity"],
    )
