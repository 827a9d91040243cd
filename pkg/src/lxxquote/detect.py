"""Exact n-gram quotation detection from OT into NT.

Every in-book window of ``n`` OT keys is fingerprinted with 64-bit FNV-1a
and stored in a sorted array. NT windows are looked up by fingerprint and
each hit is confirmed by comparing the full key sequence, so fingerprint
collisions can never yield a false match.
"""

from __future__ import annotations

import csv
import io
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import BookId, BookText, Corpus, OT_BOOKS, book_by_name
from .errors import ConfigError, ParseError

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
SEPARATOR = 0x1F
_MASK = (1 << 64) - 1

QUOTATION_FIELDS = ("ot_book", "ot_start", "ot_ref", "nt_book", "nt_start", "nt_ref", "length")
MERGE_RULES = ("diagonal", "overlap")


def fnv1a_64(data: bytes) -> int:
    h = FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * FNV_PRIME) & _MASK
    return h


def ngram_fingerprint(keys: Sequence[str]) -> int:
    """Fingerprint of one window: FNV-1a over the keys joined by 0x1F."""
    return fnv1a_64(bytes([SEPARATOR]).join(k.encode("utf-8") for k in keys))


def window_fingerprints(keys: Sequence[str], n: int) -> np.ndarray:
    """``ngram_fingerprint(keys[i:i+n])`` for every window, vectorized.

    Runs FNV-1a over all windows at once, one byte column at a time; shorter
    keys are masked out of the trailing columns.
    """
    count = len(keys) - n + 1
    if count <= 0:
        return np.empty(0, dtype=np.uint64)
    vocab: dict[str, int] = {}
    ids = np.fromiter((vocab.setdefault(k, len(vocab)) for k in keys), dtype=np.int64, count=len(keys))
    encoded = [k.encode("utf-8") for k in vocab]
    width = max(len(e) for e in encoded)
    table = np.zeros((len(encoded), width), dtype=np.uint64)
    lengths = np.fromiter((len(e) for e in encoded), dtype=np.int64, count=len(encoded))
    for row, e in enumerate(encoded):
        table[row, : len(e)] = np.frombuffer(e, dtype=np.uint8)

    prime = np.uint64(FNV_PRIME)
    sep = np.uint64(SEPARATOR)
    h = np.full(count, FNV_OFFSET, dtype=np.uint64)
    with np.errstate(over="ignore"):
        for slot in range(n):
            if slot:
                h = (h ^ sep) * prime
            slot_ids = ids[slot : slot + count]
            slot_len = lengths[slot_ids]
            for col in range(width):
                live = slot_len > col
                if not live.any():
                    break
                stepped = (h ^ table[slot_ids, col]) * prime
                h = np.where(live, stepped, h)
    return h


@dataclass(frozen=True, order=True, slots=True)
class RawMatch:
    ot_book: BookId
    ot_start: int
    nt_book: BookId
    nt_start: int
    n: int


@dataclass(frozen=True, order=True, slots=True)
class Quotation:
    ot_book: BookId
    ot_start: int
    nt_book: BookId
    nt_start: int
    length: int

    @property
    def ot_end(self) -> int:
        return self.ot_start + self.length

    @property
    def nt_end(self) -> int:
        return self.nt_start + self.length


def nt_order(m: RawMatch | Quotation) -> tuple[int, int, int, int]:
    return (m.nt_book.canon_index, m.nt_start, m.ot_book.canon_index, m.ot_start)


class NGramIndex:
    """Multimap from window fingerprint to ``(OT book, start offset)``."""

    def __init__(self, ot: Corpus, n: int):
        if n < 2:
            raise ConfigError(f"n must be >= 2, got {n}")
        self.n = n
        self.vocab: dict[str, int] = {}
        flat: list[int] = []
        self.book_base = np.zeros(len(ot), dtype=np.int64)
        fps, books, starts = [], [], []
        for text in ot:
            self.book_base[text.book.canon_index] = len(flat)
            keys = text.key_values()
            flat.extend(self.vocab.setdefault(k, len(self.vocab)) for k in keys)
            book_fps = window_fingerprints(keys, n)
            fps.append(book_fps)
            books.append(np.full(len(book_fps), text.book.canon_index, dtype=np.int64))
            starts.append(np.arange(len(book_fps), dtype=np.int64))
        self.flat_ids = np.asarray(flat, dtype=np.int64)
        fps_all = np.concatenate(fps) if fps else np.empty(0, np.uint64)
        order = np.argsort(fps_all, kind="stable")
        self.fingerprints = fps_all[order]
        self.books = np.concatenate(books)[order] if books else np.empty(0, np.int64)
        self.starts = np.concatenate(starts)[order] if starts else np.empty(0, np.int64)

    def __len__(self) -> int:
        return len(self.fingerprints)

    def lookup(self, fingerprint: int) -> list[tuple[BookId, int]]:
        fp = np.uint64(fingerprint)
        lo = np.searchsorted(self.fingerprints, fp, side="left")
        hi = np.searchsorted(self.fingerprints, fp, side="right")
        return [(OT_BOOKS[b], int(s)) for b, s in zip(self.books[lo:hi], self.starts[lo:hi])]

    def entries(self) -> list[tuple[BookId, int]]:
        return sorted((OT_BOOKS[b], int(s)) for b, s in zip(self.books, self.starts))

    def _match_book(self, text: BookText) -> list[RawMatch]:
        n = self.n
        keys = text.key_values()
        fps = window_fingerprints(keys, n)
        if not len(fps) or not len(self):
            return []
        lo = np.searchsorted(self.fingerprints, fps, side="left")
        hi = np.searchsorted(self.fingerprints, fps, side="right")
        hits = hi - lo
        if not hits.any():
            return []
        nt_starts = np.repeat(np.arange(len(fps)), hits)
        # candidate slots into the sorted index, one per (NT window, hit)
        slot = np.repeat(lo - np.cumsum(hits) + hits, hits) + np.arange(hits.sum())
        ot_books = self.books[slot]
        ot_starts = self.starts[slot]
        nt_ids = np.fromiter((self.vocab.get(k, -1) for k in keys), dtype=np.int64, count=len(keys))
        ot_pos = self.book_base[ot_books] + ot_starts
        ok = np.ones(len(slot), dtype=bool)
        for j in range(n):
            ok &= self.flat_ids[ot_pos + j] == nt_ids[nt_starts + j]
        return [
            RawMatch(OT_BOOKS[b], int(o), text.book, int(t), n)
            for b, o, t in zip(ot_books[ok], ot_starts[ok], nt_starts[ok])
        ]


def build_index(ot: Corpus, n: int = 5) -> NGramIndex:
    return NGramIndex(ot, n)


def find_matches(index: NGramIndex, nt: Corpus, workers: int = 1) -> list[RawMatch]:
    """All (OT window, NT window) pairs with equal key sequences.

    Sharded by NT book when ``workers > 1``; the result is sorted by
    (nt_book, nt_start, ot_book, ot_start) regardless of scheduling.
    """
    if workers is None or workers < 1:
        raise ConfigError(f"workers must be >= 1, got {workers}")
    books = list(nt)
    if workers == 1:
        shards = [index._match_book(b) for b in books]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            shards = list(pool.map(index._match_book, books))
    matches = [m for shard in shards for m in shard]
    matches.sort(key=nt_order)
    return matches


def _merge_diagonal(raw: list[RawMatch]) -> list[Quotation]:
    groups: dict[tuple, list[RawMatch]] = {}
    for m in raw:
        groups.setdefault((m.ot_book, m.nt_book, m.nt_start - m.ot_start), []).append(m)
    out = []
    for group in groups.values():
        group.sort(key=lambda m: m.nt_start)
        first = group[0]
        ot_start, nt_start, end = first.ot_start, first.nt_start, first.nt_start + first.n
        for m in group[1:]:
            if m.nt_start <= end:
                end = max(end, m.nt_start + m.n)
            else:
                out.append(Quotation(first.ot_book, ot_start, first.nt_book, nt_start, end - nt_start))
                ot_start, nt_start, end = m.ot_start, m.nt_start, m.nt_start + m.n
        out.append(Quotation(first.ot_book, ot_start, first.nt_book, nt_start, end - nt_start))
    return out


def _merge_overlap(raw: list[RawMatch]) -> list[Quotation]:
    groups: dict[tuple, list[RawMatch]] = {}
    for m in raw:
        groups.setdefault((m.ot_book, m.nt_book), []).append(m)
    out = []
    for group in groups.values():
        group.sort(key=lambda m: (m.nt_start, m.ot_start))
        parent = list(range(len(group)))

        def find(i: int) -> int:
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for i, a in enumerate(group):
            for j in range(i + 1, len(group)):
                b = group[j]
                if b.nt_start > a.nt_start + a.n:
                    break
                if b.ot_start <= a.ot_start + a.n and a.ot_start <= b.ot_start + b.n:
                    parent[find(j)] = find(i)
        members: dict[int, list[RawMatch]] = {}
        for i, m in enumerate(group):
            members.setdefault(find(i), []).append(m)
        for ms in members.values():
            nt_start = min(m.nt_start for m in ms)
            nt_end = max(m.nt_start + m.n for m in ms)
            ot_start = min(m.ot_start for m in ms)
            out.append(Quotation(ms[0].ot_book, ot_start, ms[0].nt_book, nt_start, nt_end - nt_start))
    return out


def merge_matches(raw: Iterable[RawMatch], rule: str = "diagonal") -> list[Quotation]:
    """Merge overlapping or touching raw matches into maximal quotations.

    ``diagonal`` (default) merges only matches on the same book pair and the
    same ``nt_start - ot_start`` offset, which keeps every merged span a
    verbatim key-for-key match. ``overlap`` merges any matches on the same
    book pair whose OT spans and NT spans both overlap or touch; its
    quotations take the NT extent as their length and exist only for
    sensitivity comparisons.
    """
    raw = list(raw)
    if not raw:
        return []
    if len({m.n for m in raw}) != 1:
        raise ConfigError("raw matches mix different n")
    if rule == "diagonal":
        quotes = _merge_diagonal(raw)
    elif rule == "overlap":
        quotes = _merge_overlap(raw)
    else:
        raise ConfigError(f"unknown merge rule {rule!r}; expected one of {MERGE_RULES}")
    quotes.sort(key=nt_order)
    return quotes


def raw_windows(quotes: Iterable[Quotation], n: int) -> list[RawMatch]:
    """Expand diagonal quotations back into the n-windows they cover."""
    return sorted(
        (RawMatch(q.ot_book, q.ot_start + i, q.nt_book, q.nt_start + i, n)
         for q in quotes for i in range(q.length - n + 1)),
        key=nt_order,
    )


def length_histogram(quotes: Iterable[Quotation]) -> dict[int, int]:
    return dict(sorted(Counter(q.length for q in quotes).items()))


def detect(ot: Corpus, nt: Corpus, n: int = 5, workers: int = 1, rule: str = "diagonal") -> tuple[list[RawMatch], list[Quotation]]:
    raw = find_matches(build_index(ot, n), nt, workers=workers)
    return raw, merge_matches(raw, rule)


def default_workers() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


# -- quotation CSV -----------------------------------------------------------

def quotations_csv(quotes: Iterable[Quotation], ot: Corpus, nt: Corpus) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(QUOTATION_FIELDS)
    for q in sorted(quotes, key=nt_order):
        writer.writerow([
            q.ot_book.name, q.ot_start, ot.book(q.ot_book).ref(q.ot_start),
            q.nt_book.name, q.nt_start, nt.book(q.nt_book).ref(q.nt_start),
            q.length,
        ])
    return buf.getvalue()


def write_quotations(path: Path | str, quotes: Iterable[Quotation], ot: Corpus, nt: Corpus) -> None:
    Path(path).write_bytes(quotations_csv(quotes, ot, nt).encode("utf-8"))


def read_quotations(path: Path | str) -> list[Quotation]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != QUOTATION_FIELDS:
            raise ParseError(f"{path}: unexpected quotation CSV header {reader.fieldnames}")
        try:
            return [
                Quotation(
                    book_by_name(row["ot_book"], "OT"), int(row["ot_start"]),
                    book_by_name(row["nt_book"], "NT"), int(row["nt_start"]),
                    int(row["length"]),
                )
                for row in reader
            ]
        except (ValueError, KeyError) as exc:
            raise ParseError(f"{path}: bad quotation row ({exc})") from None

