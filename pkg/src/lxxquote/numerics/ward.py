"""Agglomerative clustering with Ward's minimum-variance linkage.

Distances start as squared Euclidean and are updated with the Lance-Williams
recurrence, so a stored value equals twice the increase in within-cluster
sum of squares caused by merging the pair. A cluster is identified by the
smallest point index it contains; points are expected in canon order.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError

# Values this close (relative) to the minimum are treated as ties.
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class Merge:
    left: int
    right: int
    height: float
    size: int


@dataclass(frozen=True)
class WardResult:
    labels: tuple[int, ...]
    k: int
    merges: tuple[Merge, ...]

    def members(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for i, label in enumerate(self.labels):
            out.setdefault(label, []).append(i)
        return out


def pick_pair(values: np.ndarray, active: list[int]) -> tuple[int, int]:
    """Lexicographically smallest active pair whose value ties the minimum.

    ``values[a][b]`` is only read for ``a < b``.
    """
    best = min(values[a][b] for i, a in enumerate(active) for b in active[i + 1 :])
    limit = best + TIE_RTOL * abs(best)
    for i, a in enumerate(active):
        for b in active[i + 1 :]:
            if values[a][b] <= limit:
                return a, b
    raise AssertionError("unreachable")


def ward_linkage(points) -> list[Merge]:
    """Full merge sequence (n - 1 merges) for the given points."""
    x = np.asarray(points, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    n = len(x)
    diff = x[:, None, :] - x[None, :, :]
    d = (diff * diff).sum(axis=-1)
    size = [1] * n
    active = list(range(n))
    merges = []
    while len(active) > 1:
        a, b = pick_pair(d, active)
        dab = d[a, b]
        na, nb = size[a], size[b]
        active.remove(b)
        for c in active:
            if c == a:
                continue
            nc = size[c]
            new = ((na + nc) * d[a, c] + (nb + nc) * d[b, c] - nc * dab) / (na + nb + nc)
            d[a, c] = d[c, a] = new
        size[a] = na + nb
        merges.append(Merge(a, b, float(np.sqrt(max(dab, 0.0))), size[a]))
    return merges


def cut(merges: list[Merge], n: int, k: int) -> tuple[int, ...]:
    """Labels 1..k after replaying the first n - k merges; label order follows
    each cluster's smallest index."""
    if not 1 <= k <= n:
        raise ConfigError(f"k must be in 1..{n}, got {k}")
    owner = list(range(n))
    for m in merges[: n - k]:
        owner = [m.left if o == m.right else o for o in owner]
    roots = sorted(set(owner))
    label = {r: i + 1 for i, r in enumerate(roots)}
    return tuple(label[o] for o in owner)


def ward_cluster(points, k: int) -> WardResult:
    x = np.asarray(points, dtype=float)
    n = len(x)
    if not 1 <= k <= n:
        raise ConfigError(f"k must be in 1..{n}, got {k}")
    merges = ward_linkage(x)
    return WardResult(cut(merges, n, k), k, tuple(merges))


def match_labels(labels, reference) -> tuple[dict[int, int], int]:
    """Relabelling of ``labels`` onto ``reference`` that maximizes agreement.

    Returns the mapping and the number of agreeing positions. Brute force
    over permutations; intended for k <= 6.
    """
    k = max(max(labels), max(reference))
    best, best_map = -1, {}
    for perm in itertools.permutations(range(1, k + 1)):
        mapping = {i + 1: perm[i] for i in range(k)}
        agree = sum(mapping[a] == b for a, b in zip(labels, reference))
        if agree > best:
            best, best_map = agree, mapping
    return best_map, best


def dendrogram_csv(merges: list[Merge] | tuple[Merge, ...], names: list[str] | None = None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["step", "left", "right", "height", "size"])
    for step, m in enumerate(merges, 1):
        left = names[m.left] if names else m.left
        right = names[m.right] if names else m.right
        writer.writerow([step, left, right, f"{m.height:.6g}", m.size])
    return buf.getvalue()
