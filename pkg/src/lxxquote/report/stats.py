"""Per-cluster statistics and NT-cluster x OT-cluster reference counts."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..corpus import Corpus, Testament
from ..detect import Quotation


@dataclass(frozen=True)
class ClusterStats:
    cluster: str
    books: int
    word_count: int
    reference_words: int
    mean_reference_length: float
    reference_count: int

    @property
    def quotation_density(self) -> float:
        return self.reference_words / self.word_count if self.word_count else 0.0


def cluster_name(testament: Testament | str, label: int) -> str:
    return f"{Testament(testament).value}{label}"


def _side_stats(
    testament: Testament,
    corpus: Corpus,
    labels: Sequence[int],
    quotes: Sequence[Quotation],
) -> list[ClusterStats]:
    is_ot = testament is Testament.OT
    masks = [np.zeros(len(b), dtype=bool) for b in corpus]
    touching: dict[int, list[int]] = {}
    for q in quotes:
        book = q.ot_book if is_ot else q.nt_book
        start = q.ot_start if is_ot else q.nt_start
        masks[book.canon_index][start : start + q.length] = True
        touching.setdefault(labels[book.canon_index], []).append(q.length)
    out = []
    for label in sorted(set(labels)):
        idx = [i for i, lab in enumerate(labels) if lab == label]
        lengths = touching.get(label, [])
        out.append(ClusterStats(
            cluster=cluster_name(testament, label),
            books=len(idx),
            word_count=sum(len(corpus.books[i]) for i in idx),
            reference_words=int(sum(masks[i].sum() for i in idx)),
            mean_reference_length=float(np.mean(lengths)) if lengths else 0.0,
            reference_count=len(lengths),
        ))
    return out


def cluster_stats(
    quotes: Sequence[Quotation],
    ot: Corpus,
    nt: Corpus,
    ot_labels: Sequence[int],
    nt_labels: Sequence[int],
) -> list[ClusterStats]:
    """OT clusters then NT clusters.

    Reference words are distinct covered positions on the cluster's own side
    (quoted OT words for OT clusters, quoting NT words for NT clusters); the
    reference count and mean length are over quotations touching the cluster.
    """
    return (_side_stats(Testament.OT, ot, ot_labels, quotes)
            + _side_stats(Testament.NT, nt, nt_labels, quotes))


@dataclass(frozen=True)
class FlowTable:
    """``counts[i, j]`` = quotations from NT cluster i+1 to OT cluster j+1."""

    counts: np.ndarray

    def cell(self, nt_label: int, ot_label: int) -> int:
        return int(self.counts[nt_label - 1, ot_label - 1])

    def row_sums(self) -> dict[str, int]:
        return {cluster_name("NT", i + 1): int(v) for i, v in enumerate(self.counts.sum(axis=1))}

    def col_sums(self) -> dict[str, int]:
        return {cluster_name("OT", j + 1): int(v) for j, v in enumerate(self.counts.sum(axis=0))}

    def total(self) -> int:
        return int(self.counts.sum())


def flow_table(
    quotes: Sequence[Quotation],
    ot_labels: Sequence[int],
    nt_labels: Sequence[int],
) -> FlowTable:
    counts = np.zeros((max(nt_labels), max(ot_labels)), dtype=np.int64)
    for q in quotes:
        counts[nt_labels[q.nt_book.canon_index] - 1, ot_labels[q.ot_book.canon_index] - 1] += 1
    return FlowTable(counts)


def flow_conservation(flows: FlowTable, stats: Sequence[ClusterStats], quote_count: int) -> bool:
    refs = {s.cluster: s.reference_count for s in stats}
    return (
        flows.total() == quote_count
        and all(refs.get(name) == v for name, v in flows.row_sums().items())
        and all(refs.get(name) == v for name, v in flows.col_sums().items())
    )


# -- CSV ---------------------------------------------------------------------

STATS_FIELDS = ("cluster", "books", "word_count", "reference_words",
                "mean_reference_length", "reference_count", "quotation_density")


def stats_csv(stats: Sequence[ClusterStats]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(STATS_FIELDS)
    for s in stats:
        w.writerow([s.cluster, s.books, s.word_count, s.reference_words,
                    f"{s.mean_reference_length:.6g}", s.reference_count,
                    f"{s.quotation_density:.6g}"])
    return buf.getvalue()


def flows_csv(flows: FlowTable) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    ot_names = list(flows.col_sums())
    w.writerow([""] + ot_names + ["total"])
    for name, row in zip(flows.row_sums(), flows.counts):
        w.writerow([name] + [int(v) for v in row] + [int(row.sum())])
    w.writerow(["total"] + list(flows.col_sums().values()) + [flows.total()])
    return buf.getvalue()


def parse_flows_csv(text: str) -> FlowTable:
    rows = list(csv.reader(io.StringIO(text)))
    body = [r[1:-1] for r in rows[1:-1]]
    return FlowTable(np.array(body, dtype=np.int64).reshape(len(body), len(rows[0]) - 2))
