"""Token, book and corpus data model.

Tokens are addressed by ``(book, book_offset)``: a flat, zero-based index into
the book's word stream that ignores chapter and verse boundaries.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from . import canon
from .errors import BoundsError, CanonError

CUSTOM_PREFIX = "C-"


class Testament(str, enum.Enum):
    OT = "OT"
    NT = "NT"

    @property
    def names(self) -> tuple[str, ...]:
        return canon.OT_NAMES if self is Testament.OT else canon.NT_NAMES


class KeyKind(str, enum.Enum):
    REAL = "real"
    CUSTOM = "custom"


@dataclass(frozen=True, slots=True)
class TokenKey:
    """Word identity used for matching: a Strong's number or a custom ``C-<k>`` key."""

    kind: KeyKind
    value: str

    def __post_init__(self) -> None:
        if self.kind is KeyKind.REAL:
            if not self.value or self.value.startswith(CUSTOM_PREFIX):
                raise ValueError(f"invalid Strong's key {self.value!r}")
        elif not self.value.startswith(CUSTOM_PREFIX) or len(self.value) == len(CUSTOM_PREFIX):
            raise ValueError(f"invalid custom key {self.value!r}")

    @classmethod
    def real(cls, value: str) -> TokenKey:
        return cls(KeyKind.REAL, value)

    @classmethod
    def custom(cls, sequence: int) -> TokenKey:
        return cls(KeyKind.CUSTOM, f"{CUSTOM_PREFIX}{sequence}")

    @classmethod
    def parse(cls, value: str) -> TokenKey:
        kind = KeyKind.CUSTOM if value.startswith(CUSTOM_PREFIX) else KeyKind.REAL
        return cls(kind, value)

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, order=True, slots=True)
class BookId:
    testament: Testament
    canon_index: int
    name: str = field(compare=False)

    def __post_init__(self) -> None:
        names = Testament(self.testament).names
        if not 0 <= self.canon_index < len(names):
            raise CanonError(f"{self.testament.value} canon index {self.canon_index} out of range")
        if names[self.canon_index] != self.name:
            raise CanonError(f"{self.name!r} is not {self.testament.value} book #{self.canon_index}")

    def __str__(self) -> str:
        return self.name


OT_BOOKS = tuple(BookId(Testament.OT, i, n) for i, n in enumerate(canon.OT_NAMES))
NT_BOOKS = tuple(BookId(Testament.NT, i, n) for i, n in enumerate(canon.NT_NAMES))


def canon_books(testament: Testament | str) -> tuple[BookId, ...]:
    return OT_BOOKS if Testament(testament) is Testament.OT else NT_BOOKS


def book_by_name(name: str, testament: Testament | str | None = None) -> BookId:
    """Resolve a canonical name or known alias; raises CanonError otherwise."""
    hit = canon.resolve_name(name)
    if hit is None or (testament is not None and hit[0] != Testament(testament).value):
        where = f" in {Testament(testament).value}" if testament is not None else ""
        raise CanonError(f"unknown book {name!r}{where}")
    return canon_books(hit[0])[hit[1]]


@dataclass(frozen=True, slots=True)
class Token:
    key: TokenKey
    surface: str
    book: BookId
    chapter: int
    verse: int
    book_offset: int


@dataclass(frozen=True)
class BookText:
    """Column-oriented token stream for one book."""

    book: BookId
    keys: tuple[TokenKey, ...] = ()
    surfaces: tuple[str, ...] = ()
    chapters: tuple[int, ...] = ()
    verses: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        n = len(self.keys)
        if not (len(self.surfaces) == len(self.chapters) == len(self.verses) == n):
            raise ValueError(f"{self.book}: column lengths differ")

    @classmethod
    def from_tokens(cls, book: BookId, tokens: Iterable[tuple[TokenKey, str, int, int]]) -> BookText:
        rows = list(tokens)
        if not rows:
            return cls(book)
        keys, surfaces, chapters, verses = zip(*rows)
        return cls(book, keys, surfaces, chapters, verses)

    def __len__(self) -> int:
        return len(self.keys)

    def __getitem__(self, offset: int) -> Token:
        if not 0 <= offset < len(self):
            raise BoundsError(f"{self.book}: offset {offset} outside 0..{len(self) - 1}")
        return Token(self.keys[offset], self.surfaces[offset], self.book,
                     self.chapters[offset], self.verses[offset], offset)

    def __iter__(self) -> Iterator[Token]:
        return (self[i] for i in range(len(self)))

    def key_values(self) -> list[str]:
        return [k.value for k in self.keys]

    def ref(self, offset: int) -> str:
        """``chapter:verse`` of the word at ``offset``."""
        token = self[offset]
        return f"{token.chapter}:{token.verse}"


class Corpus:
    """All canon books of one testament, in canon order.

    Books absent from the source are present with zero tokens so that every
    downstream matrix has the full 27 x 39 shape.
    """

    def __init__(self, testament: Testament | str, books: Mapping[BookId, BookText] | Iterable[BookText] = ()):
        self.testament = Testament(testament)
        given = dict(books) if isinstance(books, Mapping) else {b.book: b for b in books}
        for book_id, text in given.items():
            if book_id.testament is not self.testament or text.book != book_id:
                raise CanonError(f"{book_id} does not belong to the {self.testament.value} corpus")
        self.books: tuple[BookText, ...] = tuple(
            given.get(b, BookText(b)) for b in canon_books(self.testament)
        )

    def __iter__(self) -> Iterator[BookText]:
        return iter(self.books)

    def __len__(self) -> int:
        return len(self.books)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Corpus) and (self.testament, self.books) == (other.testament, other.books)

    def __repr__(self) -> str:
        return f"Corpus({self.testament.value}, {self.total_words()} words)"

    def book(self, book: BookId | str) -> BookText:
        if isinstance(book, str):
            book = book_by_name(book, self.testament)
        if book.testament is not self.testament:
            raise CanonError(f"{book} is not in the {self.testament.value} corpus")
        return self.books[book.canon_index]

    def word_counts(self) -> list[int]:
        return [len(b) for b in self.books]

    def total_words(self) -> int:
        return sum(self.word_counts())


def book_word_count(corpus: Corpus, book: BookId | str) -> int:
    return len(corpus.book(book))


def span_positions(book: BookText, start_offset: int, length: int) -> set[int]:
    """Book offsets covered by a span; raises BoundsError if it leaves the book."""
    if start_offset < 0 or length < 1:
        raise BoundsError(f"invalid span start={start_offset} length={length}")
    if start_offset + length > len(book):
        raise BoundsError(
            f"{book.book}: span {start_offset}+{length} exceeds book length {len(book)}"
        )
    return set(range(start_offset, start_offset + length))
