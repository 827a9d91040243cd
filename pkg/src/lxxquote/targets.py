"""Published reference figures for the Analytic Septuagint / Tischendorf
corpora, and a comparison of a run against them.

Tolerances absorb edition drift between XML releases.
"""

from __future__ import annotations

from importlib import resources
from typing import Sequence

import numpy as np

from .corpus import NT_BOOKS, OT_BOOKS, Corpus
from .detect import Quotation
from .numerics.matrix import covered_nt_positions, parse_matrix_csv
from .numerics.ward import match_labels

RAW_MATCHES = 6388
QUOTATIONS = 4807
COUNT_RTOL = 0.02

REVELATION_DENSITY = 0.122
REVELATION_DENSITY_TOL = 0.005
REVELATION_PSALMS = 0.023
REVELATION_PSALMS_TOL = 0.002

FLOW_NT2_OT1 = 2726
PCA_EXPLAINED = {"OT": 0.67, "NT": 0.58}
PCA_TOL = 0.05
DENSITY_TOL = 0.003
CELL_TOL = 0.002
ZERO_CELL_MAX = 0.0005
MEMBERSHIP_MIN_AGREEMENT = 59

# cluster -> (books, word count, reference words, mean length, references, density)
CLUSTER_STATS = {
    "OT1": (17, 317173, 9062, 5.24, 2884, 0.0286),
    "OT2": (19, 63622, 1060, 5.34, 348, 0.0167),
    "OT3": (3, 94605, 3660, 5.5, 1575, 0.0387),
    "NT1": (20, 39907, 1017, 5.51, 464, 0.0255),
    "NT2": (7, 97618, 6058, 5.32, 4343, 0.0621),
}

_OT1 = {"Exodus", "Leviticus", "Numbers", "Deuteronomy", "Joshua", "Judges", "1 Samuel",
        "2 Samuel", "1 Kings", "2 Kings", "1 Chronicles", "2 Chronicles", "Nehemiah",
        "Jeremiah", "Ezekiel", "Daniel", "Zechariah"}
_OT3 = {"Genesis", "Psalms", "Isaiah"}
_NT2 = {"Matthew", "Mark", "Luke", "John", "Acts", "Hebrews", "Revelation"}

OT_MEMBERSHIP = {b.name: 1 if b.name in _OT1 else 3 if b.name in _OT3 else 2 for b in OT_BOOKS}
NT_MEMBERSHIP = {b.name: 2 if b.name in _NT2 else 1 for b in NT_BOOKS}


def reference_proportions() -> np.ndarray:
    """Published 27 x 39 proportion table, as fractions (printed in percent, 2 dp)."""
    text = resources.files("lxxquote").joinpath("data/reference_proportions.csv").read_text(encoding="utf-8")
    rows, cols, values = parse_matrix_csv(text)
    assert rows == [b.name for b in NT_BOOKS] and cols == [b.name for b in OT_BOOKS]
    return values / 100.0


def _check(value, target, tol, *, relative=False, exact=False) -> dict:
    if value is None:
        return {"value": None, "target": target, "ok": False}
    if exact:
        return {"value": value, "target": target, "tolerance": 0, "ok": value == target}
    limit = tol * target if relative else tol
    return {"value": value, "target": target, "tolerance": limit, "ok": bool(abs(value - target) <= limit)}


def membership_report(labels: Sequence[int], reference: dict[str, int], books, prefix: str) -> dict:
    ref = [reference[b.name] for b in books]
    mapping, agree = match_labels(labels, ref)
    return {
        "agreement": agree,
        "books": len(books),
        "label_map": {f"{prefix}{a}": f"{prefix}{b}" for a, b in mapping.items()},
        "disagreements": [
            {"book": b.name, "assigned": f"{prefix}{mapping[l]}", "published": f"{prefix}{r}"}
            for b, l, r in zip(books, labels, ref) if mapping[l] != r
        ],
    }


def compare(analysis, quotes: Sequence[Quotation], nt: Corpus) -> dict:
    """Every reproducible published figure next to this run's value."""
    out: dict = {
        "raw_matches": _check(analysis.raw_matches, RAW_MATCHES, COUNT_RTOL, relative=True),
        "quotations": _check(analysis.quotations, QUOTATIONS, COUNT_RTOL, relative=True),
    }
    rev = NT_BOOKS[-1].canon_index
    covered = np.zeros(len(nt.books[rev]), dtype=bool)
    for (r, _), mask in covered_nt_positions(quotes, nt).items():
        if r == rev:
            covered |= mask
    density = float(covered.sum() / len(covered)) if len(covered) else None
    out["revelation_density"] = _check(density, REVELATION_DENSITY, REVELATION_DENSITY_TOL)
    out["revelation_psalms"] = _check(analysis.proportions.cell("Revelation", "Psalms"),
                                      REVELATION_PSALMS, REVELATION_PSALMS_TOL)

    ref = reference_proportions()
    diff = np.abs(analysis.proportions.values - ref)
    nonzero = ref > 0
    out["reference_cells"] = {
        "nonzero_within_tolerance": int((diff[nonzero] <= CELL_TOL).sum()),
        "nonzero_cells": int(nonzero.sum()),
        "zero_cells_below_max": int((analysis.proportions.values[~nonzero] < ZERO_CELL_MAX).sum()),
        "zero_cells": int((~nonzero).sum()),
        "max_abs_deviation": float(diff.max()),
    }

    if analysis.ot_clusters is None:
        out["clustering"] = "skipped"
        return out
    ot_m = membership_report(analysis.ot_clusters.labels, OT_MEMBERSHIP, OT_BOOKS, "OT")
    nt_m = membership_report(analysis.nt_clusters.labels, NT_MEMBERSHIP, NT_BOOKS, "NT")
    out["membership"] = {
        "OT": ot_m, "NT": nt_m,
        "agreement": ot_m["agreement"] + nt_m["agreement"],
        "ok": ot_m["agreement"] + nt_m["agreement"] >= MEMBERSHIP_MIN_AGREEMENT,
    }

    relabel = {**ot_m["label_map"], **nt_m["label_map"]}
    stats = {}
    for s in analysis.stats:
        name = relabel.get(s.cluster, s.cluster)
        target = CLUSTER_STATS.get(name)
        if target is None:
            continue
        stats[name] = {
            "word_count": _check(s.word_count, target[1], 0, exact=True),
            "quotation_density": _check(s.quotation_density, target[5], DENSITY_TOL),
            "reference_count": {"value": s.reference_count, "target": target[4]},
            "reference_words": {"value": s.reference_words, "target": target[2]},
            "mean_reference_length": {"value": s.mean_reference_length, "target": target[3]},
        }
    out["cluster_stats"] = stats

    inv = {v: k for k, v in relabel.items()}
    nt2, ot1 = inv.get("NT2"), inv.get("OT1")
    flow = analysis.flows.cell(int(nt2[2:]), int(ot1[2:])) if nt2 and ot1 else None
    out["flow_nt2_ot1"] = _check(flow, FLOW_NT2_OT1, COUNT_RTOL, relative=True)
    for t, p in (("OT", analysis.ot_pca), ("NT", analysis.nt_pca)):
        out[f"pca_explained_{t.lower()}"] = _check(
            p.explained_variance_fraction if p else None, PCA_EXPLAINED[t], PCA_TOL)
    return out


def out_of_tolerance(comparison: dict) -> list[str]:
    """Names of failed checks, dotted for nested entries."""
    failed = []

    def walk(prefix: str, node):
        if isinstance(node, dict):
            if node.get("ok") is False:
                failed.append(prefix)
            for k, v in node.items():
                if isinstance(v, dict):
                    walk(f"{prefix}.{k}" if prefix else k, v)

    walk("", comparison)
    return failed
