"""Analysis of the bundled published proportion table.

The table stands in for a proportion matrix computed from the reference
corpora, so clustering and PCA on it can be compared with the published
memberships and explained-variance figures without the XML sources.
"""

from __future__ import annotations

import numpy as np
import pytest

from lxxquote import pipeline, targets
from lxxquote.corpus import NT_BOOKS, OT_BOOKS
from lxxquote.numerics import ProportionMatrix, log_transform
from lxxquote.targets import membership_report


@pytest.fixture(scope="module")
def table() -> ProportionMatrix:
    return ProportionMatrix(targets.reference_proportions())


def memberships(table, mode):
    ot, nt = pipeline.testament_views(log_transform(table, mode), 3, 2)
    return (membership_report(ot.labels, targets.OT_MEMBERSHIP, OT_BOOKS, "OT"),
            membership_report(nt.labels, targets.NT_MEMBERSHIP, NT_BOOKS, "NT"))


def test_table_shape_and_cells(table):
    assert table.values.shape == (27, 39)
    assert table.cell("Hebrews", "Psalms") == pytest.approx(0.0554)
    assert table.cell("1 Peter", "Psalms") == pytest.approx(0.0352)
    assert table.cell("Galatians", "Genesis") == pytest.approx(0.0144)
    assert table.cell("Revelation", "Psalms") == pytest.approx(targets.REVELATION_PSALMS, abs=1e-4)
    assert np.all(table.values >= 0) and table.values.max() < 0.1
    assert table.min_nonzero() == pytest.approx(0.0003)


def test_published_membership_sizes():
    ot = list(targets.OT_MEMBERSHIP.values())
    nt = list(targets.NT_MEMBERSHIP.values())
    for cluster, (books, *_rest) in targets.CLUSTER_STATS.items():
        labels = ot if cluster.startswith("OT") else nt
        assert labels.count(int(cluster[2:])) == books


def test_value_offset_recovers_every_membership(table):
    ot, nt = memberships(table, "value")
    assert (ot["agreement"], nt["agreement"]) == (39, 27)
    assert ot["disagreements"] == nt["disagreements"] == []


def test_literal_offset_meets_minimum(table):
    ot, nt = memberships(table, "literal")
    total = ot["agreement"] + nt["agreement"]
    assert targets.MEMBERSHIP_MIN_AGREEMENT <= total < 66


def test_pca_explained_fractions(table):
    ot, nt, skipped = pipeline.pca_views(log_transform(table, "value"))
    assert skipped == {}
    assert ot.explained_variance_fraction == pytest.approx(targets.PCA_EXPLAINED["OT"], abs=targets.PCA_TOL)
    assert nt.explained_variance_fraction == pytest.approx(targets.PCA_EXPLAINED["NT"], abs=targets.PCA_TOL)
    assert ot.coords.shape == (39, 2) and nt.coords.shape == (27, 2)


def test_out_of_tolerance_walk():
    comparison = {
        "a": {"value": 1, "ok": True},
        "b": {"value": 2, "ok": False},
        "membership": {"OT": {"agreement": 30}, "ok": False},
        "cluster_stats": {"OT1": {"word_count": {"ok": False}, "quotation_density": {"ok": True}}},
        "clustering": "skipped",
    }
    assert targets.out_of_tolerance(comparison) == ["b", "membership", "cluster_stats.OT1.word_count"]
