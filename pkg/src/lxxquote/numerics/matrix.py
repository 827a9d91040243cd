"""Proportion matrix, log transform and Euclidean distances."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from ..corpus import NT_BOOKS, OT_BOOKS, BookId, Corpus, book_by_name
from ..detect import Quotation
from ..errors import ConfigError, DegenerateDataError, ParseError

LOG_OFFSET_MODES = ("value", "literal")


@dataclass(frozen=True)
class ProportionMatrix:
    """Share of each NT book's words (rows) quoted from each OT book (columns)."""

    values: np.ndarray
    rows: tuple[BookId, ...] = NT_BOOKS
    cols: tuple[BookId, ...] = OT_BOOKS

    def cell(self, nt: str | BookId, ot: str | BookId) -> float:
        r = nt if isinstance(nt, BookId) else book_by_name(nt, "NT")
        c = ot if isinstance(ot, BookId) else book_by_name(ot, "OT")
        return float(self.values[r.canon_index, c.canon_index])

    def min_nonzero(self) -> float:
        nz = self.values[self.values > 0]
        if not nz.size:
            raise DegenerateDataError("proportion matrix has no nonzero cell")
        return float(nz.min())


@dataclass(frozen=True)
class LogMatrix:
    values: np.ndarray
    epsilon: float
    mode: str
    rows: tuple[BookId, ...] = NT_BOOKS
    cols: tuple[BookId, ...] = OT_BOOKS


def covered_nt_positions(quotes: Iterable[Quotation], nt: Corpus) -> dict[tuple[int, int], np.ndarray]:
    """Boolean coverage mask over each NT book, split by source OT book."""
    masks: dict[tuple[int, int], np.ndarray] = {}
    for q in quotes:
        r, c = q.nt_book.canon_index, q.ot_book.canon_index
        mask = masks.get((r, c))
        if mask is None:
            mask = masks[(r, c)] = np.zeros(len(nt.books[r]), dtype=bool)
        mask[q.nt_start : q.nt_end] = True
    return masks


def proportion_matrix(quotes: Iterable[Quotation], ot: Corpus, nt: Corpus) -> ProportionMatrix:
    """cell[r][c] = distinct words of NT book r covered by quotations from OT book c,
    divided by the word count of r. Empty books give a zero row."""
    values = np.zeros((len(NT_BOOKS), len(OT_BOOKS)))
    counts = nt.word_counts()
    for (r, c), mask in covered_nt_positions(quotes, nt).items():
        values[r, c] = mask.sum() / counts[r]
    return ProportionMatrix(values)


def log_transform(m: ProportionMatrix, mode: str = "value") -> LogMatrix:
    """Offset-log of the proportions, with eps the smallest nonzero proportion.

    ``value``:   ln(cell + eps)
    ``literal``: ln(cell - ln(eps)); adds the magnitude of ln(eps), the only
                 way adding "the logarithm of the smallest value" keeps the
                 argument positive.
    """
    if mode not in LOG_OFFSET_MODES:
        raise ConfigError(f"unknown log offset mode {mode!r}; expected one of {LOG_OFFSET_MODES}")
    eps = m.min_nonzero()
    if mode == "value":
        values = np.log(m.values + eps)
    else:
        offset = -math.log(eps)
        if offset <= 0 and (m.values == 0).any():
            raise DegenerateDataError("literal log offset is zero (eps = 1); zero cells have no logarithm")
        values = np.log(m.values + offset)
    return LogMatrix(values, eps, mode, m.rows, m.cols)


def axis_points(m: LogMatrix | ProportionMatrix, axis: str) -> np.ndarray:
    """Rows (one 39-D point per NT book) or columns (one 27-D point per OT book)."""
    axis = axis.upper()
    if axis == "NT":
        return np.asarray(m.values)
    if axis == "OT":
        return np.asarray(m.values).T
    raise ConfigError(f"axis must be 'NT' or 'OT', got {axis!r}")


def euclidean_distances(points: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt((diff * diff).sum(axis=-1))


def row_distance_matrix(m: LogMatrix | ProportionMatrix, axis: str) -> np.ndarray:
    return euclidean_distances(axis_points(m, axis))


# -- CSV ---------------------------------------------------------------------

def matrix_csv(values: np.ndarray, rows: Iterable[BookId] = NT_BOOKS, cols: Iterable[BookId] = OT_BOOKS) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([""] + [c.name for c in cols])
    for book, row in zip(rows, values):
        writer.writerow([book.name] + [f"{float(v):.6g}" for v in row])
    return buf.getvalue()


def parse_matrix_csv(text: str) -> tuple[list[str], list[str], np.ndarray]:
    """Inverse of :func:`matrix_csv`: (row names, column names, values)."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0][:1] != [""]:
        raise ParseError("matrix CSV must start with an empty corner cell")
    cols = rows[0][1:]
    names, values = [], []
    for line in rows[1:]:
        if len(line) != len(cols) + 1:
            raise ParseError(f"matrix row {line[:1]} has {len(line) - 1} cells, expected {len(cols)}")
        names.append(line[0])
        values.append([float(v) for v in line[1:]])
    return names, cols, np.array(values, dtype=float).reshape(len(names), len(cols))


def read_matrix_csv(path: Path | str) -> tuple[list[str], list[str], np.ndarray]:
    return parse_matrix_csv(Path(path).read_text(encoding="utf-8"))
