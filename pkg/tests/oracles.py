"""Independent reference implementations used to check the package.

None of these share code with ``lxxquote`` beyond its data types; they
are written for obviousness rather than speed.
"""

from __future__ import annotations

import random

import numpy as np

from lxxquote.corpus import Corpus
from lxxquote.detect import Quotation, RawMatch
from lxxquote.numerics.ward import TIE_RTOL

from conftest import corpus_from_keys


def fnv1a_reference(data: bytes) -> int:
    h = 14695981039346656037
    for b in data:
        h ^= b
        h = (h * 1099511628211) % 2**64
    return h


def brute_matches_scalar(ot: Corpus, nt: Corpus, n: int) -> list[tuple]:
    """Every equal (OT window, NT window) pair by direct comparison."""
    out = []
    for tb in nt:
        t = tb.key_values()
        for ob in ot:
            o = ob.key_values()
            for j in range(len(t) - n + 1):
                for i in range(len(o) - n + 1):
                    if all(o[i + d] == t[j + d] for d in range(n)):
                        out.append((ob.book.canon_index, i, tb.book.canon_index, j))
    return sorted(out, key=lambda m: (m[2], m[3], m[0], m[1]))


def brute_matches(ot: Corpus, nt: Corpus, n: int) -> list[tuple]:
    """Same as ``brute_matches_scalar``, with each book pair's window-pair
    grid evaluated as a boolean array."""
    out = []
    for tb in nt:
        t = np.array(tb.key_values(), dtype=object)
        for ob in ot:
            o = np.array(ob.key_values(), dtype=object)
            rows, cols = len(o) - n + 1, len(t) - n + 1
            if rows <= 0 or cols <= 0:
                continue
            eq = o[:, None] == t[None, :]
            hit = np.ones((rows, cols), dtype=bool)
            for d in range(n):
                hit &= eq[d : d + rows, d : d + cols]
            for i, j in zip(*np.nonzero(hit)):
                out.append((ob.book.canon_index, int(i), tb.book.canon_index, int(j)))
    return sorted(out, key=lambda m: (m[2], m[3], m[0], m[1]))


def as_tuples(matches: list[RawMatch]) -> list[tuple]:
    return [(m.ot_book.canon_index, m.ot_start, m.nt_book.canon_index, m.nt_start) for m in matches]


def closure_merge(raw: list[RawMatch]) -> list[Quotation]:
    """Transitive closure of the pairwise relation: same books, same
    diagonal, spans overlapping or touching. Quadratic union-find."""
    parent = list(range(len(raw)))

    def root(i):
        while parent[i] != i:
            i = parent[i]
        return i

    for i, a in enumerate(raw):
        for j in range(i + 1, len(raw)):
            b = raw[j]
            if (a.ot_book, a.nt_book) != (b.ot_book, b.nt_book):
                continue
            if a.nt_start - a.ot_start != b.nt_start - b.ot_start:
                continue
            if a.nt_start <= b.nt_start + b.n and b.nt_start <= a.nt_start + a.n:
                parent[root(j)] = root(i)
    groups: dict[int, list[RawMatch]] = {}
    for i, m in enumerate(raw):
        groups.setdefault(root(i), []).append(m)
    out = []
    for ms in groups.values():
        start = min(ms, key=lambda m: m.nt_start)
        end = max(m.nt_start + m.n for m in ms)
        out.append(Quotation(start.ot_book, start.ot_start, start.nt_book, start.nt_start, end - start.nt_start))
    return sorted(out, key=lambda q: (q.nt_book.canon_index, q.nt_start, q.ot_book.canon_index, q.ot_start))


def random_corpus_pair(rng: random.Random, max_tokens: int = 500, n: int = 5) -> tuple[Corpus, Corpus]:
    """Random OT/NT corpora over a small shared key alphabet, with some
    copied spans so that long quotations occur."""
    alphabet = [f"G{i}" for i in range(rng.randint(3, 48))] + ["C-1", "C-2"]

    def books(testament_size: int) -> dict[int, list[str]]:
        total = rng.randint(0, max_tokens)
        picks = sorted(rng.sample(range(testament_size), rng.randint(1, 4)))
        cuts = sorted(rng.randint(0, total) for _ in range(len(picks) - 1))
        sizes = [b - a for a, b in zip([0] + cuts, cuts + [total])]
        return {p: [rng.choice(alphabet) for _ in range(s)] for p, s in zip(picks, sizes)}

    ot, nt = books(39), books(27)
    for _ in range(rng.randint(0, 6)):
        src = rng.choice(list(ot))
        dst = rng.choice(list(nt))
        length = rng.randint(n, 3 * n)
        if len(ot[src]) >= length and len(nt[dst]) >= length:
            s = rng.randrange(len(ot[src]) - length + 1)
            t = rng.randrange(len(nt[dst]) - length + 1)
            nt[dst][t : t + length] = ot[src][s : s + length]
    return corpus_from_keys("OT", ot), corpus_from_keys("NT", nt)


def naive_ward(points: np.ndarray) -> list[tuple[int, int, float]]:
    """Ward merge sequence by recomputing within-cluster sums of squares.

    At each step every candidate pair is scored by the increase in total
    SSE it would cause; the smallest wins, ties going to the smallest
    (min index of A, min index of B). Returns (left, right, height) with
    clusters named by their smallest member and height = sqrt(2 * dSSE).
    """
    x = np.asarray(points, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    clusters = [[i] for i in range(len(x))]

    def sse(idx):
        # shifting by a member keeps coincident points at exactly zero
        pts = x[idx] - x[idx[0]]
        return float(((pts - pts.mean(axis=0)) ** 2).sum())

    merges = []
    while len(clusters) > 1:
        clusters.sort(key=min)
        scored = []
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                union = sse(clusters[a] + clusters[b])
                delta = union - sse(clusters[a]) - sse(clusters[b])
                scored.append((2 * delta, union, min(clusters[a]), min(clusters[b]), a, b))
        best = min(scored)
        # a difference is only real if it exceeds the roundoff of both subtractions
        slack = lambda s: 1e3 * TIE_RTOL * abs(best[0]) + 1e-13 * (s[1] + best[1])
        tied = [s for s in scored if s[0] <= best[0] + slack(s)]
        value, _, left, right, a, b = min(tied, key=lambda s: (s[2], s[3]))
        merges.append((left, right, float(np.sqrt(max(value, 0.0)))))
        clusters[a] = clusters[a] + clusters[b]
        del clusters[b]
    return merges


def naive_cut(merges: list[tuple[int, int, float]], n: int, k: int) -> list[int]:
    groups = {i: {i} for i in range(n)}
    for left, right, _ in merges[: n - k]:
        groups[left] |= groups.pop(right)
    label = {}
    for rank, r in enumerate(sorted(groups), 1):
        for i in groups[r]:
            label[i] = rank
    return [label[i] for i in range(n)]
