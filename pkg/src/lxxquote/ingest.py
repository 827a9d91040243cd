"""Zefania XML ingestion, custom key assignment and the corpus container file."""

from __future__ import annotations

import functools
import gzip
import hashlib
import io
import json
import logging
import re
import unicodedata
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path

from . import canon
from .corpus import BookId, BookText, Corpus, Testament, TokenKey, canon_books
from .errors import ParseError

log = logging.getLogger(__name__)

CONTAINER_FORMAT = "lxxquote-corpus"
CONTAINER_VERSION = 1
NORMALIZATION = "NFC, lowercase, leading/trailing punctuation stripped, diacritics kept"

_SKIPPED_ELEMENTS = {"NOTE", "CAPTION", "XREF", "REMARK", "SUP"}
_STRONGS_RE = re.compile(r"^([GHgh]?)0*(\d+)([A-Za-z]?)$")


@functools.lru_cache(maxsize=1 << 16)
def normalize_surface(raw: str) -> str:
    """Canonical form of a word used for custom-key lookup.

    NFC composition and lowercasing; accents and breathings are kept, so
    words that differ only in diacritics stay distinct. Punctuation attached
    to either end of the word is removed. Returns "" when nothing is left.
    """
    text = unicodedata.normalize("NFC", raw).lower()
    start, end = 0, len(text)
    while start < end and _is_edge_junk(text[start]):
        start += 1
    while end > start and _is_edge_junk(text[end - 1]):
        end -= 1
    return text[start:end]


def _is_edge_junk(ch: str) -> bool:
    return ch.isspace() or unicodedata.category(ch).startswith("P")


@functools.lru_cache(maxsize=1 << 16)
def normalize_strongs(raw: str | None) -> str | None:
    """First Strong's number of an annotation as ``G<digits>``; None if absent."""
    if raw is None:
        return None
    parts = raw.replace(",", " ").split()
    if not parts:
        return None
    first = parts[0]
    m = _STRONGS_RE.match(first)
    if m is None:
        return first
    prefix = (m.group(1) or "G").upper()
    return f"{prefix}{int(m.group(2))}{m.group(3).lower()}"


@dataclass(frozen=True, slots=True)
class RawToken:
    surface: str
    strongs: str | None
    book_name: str
    book: BookId | None
    chapter: int
    verse: int


@dataclass
class ZefaniaDocument:
    """Parsed words of one Zefania file, before key assignment."""

    testament: Testament
    tokens: list[RawToken] = field(default_factory=list)
    excluded_books: dict[str, int] = field(default_factory=dict)
    dropped: list[tuple[str, int, int, str]] = field(default_factory=list)
    word_count: int = 0


def _int_attr(elem: ET.Element, *names: str) -> int | None:
    for name in names:
        value = elem.get(name)
        if value is not None:
            try:
                return int(value.strip())
            except ValueError:
                return None
    return None


def _resolve_book(elem: ET.Element, testament: Testament) -> tuple[str, BookId | None]:
    number = _int_attr(elem, "bnumber")
    label = elem.get("bname") or elem.get("bsname") or f"book {number}"
    hit = canon.resolve_zefania_number(number) if number is not None else None
    if hit is None:
        # non-standard numbering: fall back on the title
        for attr in ("bname", "bsname"):
            if elem.get(attr) and (hit := canon.resolve_name(elem.get(attr))) is not None:
                break
    if hit is None or hit[0] != testament.value:
        return label, None
    book = canon_books(testament)[hit[1]]
    return book.name, book


def _verse_words(vers: ET.Element):
    """Yield ``(raw_surface, strongs_attr)`` for every word in a VERS element."""
    if vers.text:
        for w in vers.text.split():
            yield w, None
    for child in vers:
        tag = child.tag.upper()
        if tag in _SKIPPED_ELEMENTS:
            pass
        elif tag == "GR":
            text = " ".join("".join(child.itertext()).split())
            if text:
                yield text, child.get("str")
        else:
            yield from _verse_words(child)
        if child.tail:
            for w in child.tail.split():
                yield w, None


def parse_zefania(data: bytes, testament: Testament | str) -> ZefaniaDocument:
    """Parse a Zefania XML document into raw tokens in document order.

    Books outside the 66-book canon (or belonging to the other testament)
    are parsed, counted and recorded in ``excluded_books`` but yield no
    tokens. Words whose surface is empty after normalization are dropped and
    recorded in ``dropped``.
    """
    testament = Testament(testament)
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line, col = exc.position
        raise ParseError("malformed XML", line, col) from None

    doc = ZefaniaDocument(testament)
    for book_el in root.iter():
        if book_el.tag.upper() != "BIBLEBOOK":
            continue
        name, book = _resolve_book(book_el, testament)
        if book is None:
            log.warning("excluding non-canon or foreign book %r", name)
            doc.excluded_books.setdefault(name, 0)
        for chap_el in book_el:
            if chap_el.tag.upper() != "CHAPTER":
                continue
            chapter = _int_attr(chap_el, "cnumber") or 0
            for vers_el in chap_el:
                if vers_el.tag.upper() != "VERS":
                    continue
                verse = _int_attr(vers_el, "vnumber") or 0
                for raw, strongs in _verse_words(vers_el):
                    doc.word_count += 1
                    if book is None:
                        doc.excluded_books[name] += 1
                        continue
                    surface = normalize_surface(raw)
                    if not surface:
                        log.debug("dropping %r at %s %d:%d", raw, name, chapter, verse)
                        doc.dropped.append((name, chapter, verse, raw))
                        continue
                    doc.tokens.append(
                        RawToken(surface, normalize_strongs(strongs), name, book, chapter, verse)
                    )
    if doc.dropped:
        log.warning("%s: dropped %d punctuation-only words", testament.value, len(doc.dropped))
    return doc


class CustomKeyTable:
    """Maps normalized surfaces of unannotated words to ``C-<k>`` keys.

    One table must be shared by both testaments so that identical
    unannotated words in OT and NT receive the same key.
    """

    def __init__(self, surfaces: list[str] | None = None):
        self._keys: dict[str, TokenKey] = {}
        for s in surfaces or ():
            self.key_for(s)

    @property
    def next_sequence(self) -> int:
        return len(self._keys) + 1

    def key_for(self, surface: str) -> TokenKey:
        key = self._keys.get(surface)
        if key is None:
            key = self._keys[surface] = TokenKey.custom(self.next_sequence)
        return key

    def surfaces(self) -> list[str]:
        """Surfaces in key order (index i holds ``C-<i+1>``)."""
        return list(self._keys)

    def __len__(self) -> int:
        return len(self._keys)

    def __contains__(self, surface: str) -> bool:
        return surface in self._keys


def assign_custom_keys(doc: ZefaniaDocument, table: CustomKeyTable) -> Corpus:
    rows: dict[BookId, list] = {}
    real: dict[str, TokenKey] = {}
    for tok in doc.tokens:
        if tok.strongs:
            key = real.get(tok.strongs) or real.setdefault(tok.strongs, TokenKey.real(tok.strongs))
        else:
            key = table.key_for(tok.surface)
        rows.setdefault(tok.book, []).append((key, tok.surface, tok.chapter, tok.verse))
    return Corpus(doc.testament, {b: BookText.from_tokens(b, r) for b, r in rows.items()})


@dataclass
class IngestResult:
    ot: Corpus
    nt: Corpus
    table: CustomKeyTable
    manifest: dict


def _doc_manifest(doc: ZefaniaDocument, source_name: str, digest: str) -> dict:
    return {
        "file": source_name,
        "sha256": digest,
        "words_in_document": doc.word_count,
        "tokens": len(doc.tokens),
        "dropped": len(doc.dropped),
        "excluded_books": dict(doc.excluded_books),
    }


def ingest_bytes(ot_data: bytes, nt_data: bytes, ot_name: str = "ot.xml", nt_name: str = "nt.xml") -> IngestResult:
    """Ingest both testaments, OT first, with one shared custom key table."""
    table = CustomKeyTable()
    sources = {}
    corpora = {}
    for testament, data, name in ((Testament.OT, ot_data, ot_name), (Testament.NT, nt_data, nt_name)):
        doc = parse_zefania(data, testament)
        corpora[testament] = assign_custom_keys(doc, table)
        sources[testament.value] = _doc_manifest(doc, name, hashlib.sha256(data).hexdigest())
    manifest = {
        "normalization": NORMALIZATION,
        "multiple_strongs": "first annotation used",
        "sources": sources,
        "custom_keys": len(table),
    }
    return IngestResult(corpora[Testament.OT], corpora[Testament.NT], table, manifest)


def ingest_files(ot_path: Path | str, nt_path: Path | str) -> IngestResult:
    ot_path, nt_path = Path(ot_path), Path(nt_path)
    return ingest_bytes(ot_path.read_bytes(), nt_path.read_bytes(), ot_path.name, nt_path.name)


# -- container ---------------------------------------------------------------

def _corpus_to_json(corpus: Corpus) -> list[dict]:
    return [
        {
            "name": b.book.name,
            "keys": [k.value for k in b.keys],
            "surfaces": list(b.surfaces),
            "chapters": list(b.chapters),
            "verses": list(b.verses),
        }
        for b in corpus
    ]


def _corpus_from_json(testament: Testament, books: list[dict]) -> Corpus:
    texts = []
    for entry, book in zip(books, canon_books(testament)):
        if entry["name"] != book.name:
            raise ParseError(f"container book order mismatch: {entry['name']!r} != {book.name!r}")
        texts.append(BookText(
            book,
            tuple(TokenKey.parse(k) for k in entry["keys"]),
            tuple(entry["surfaces"]),
            tuple(entry["chapters"]),
            tuple(entry["verses"]),
        ))
    return Corpus(testament, texts)


def write_container(result: IngestResult, path: Path | str) -> None:
    payload = {
        "format": CONTAINER_FORMAT,
        "version": CONTAINER_VERSION,
        "manifest": result.manifest,
        "custom_keys": result.table.surfaces(),
        "OT": _corpus_to_json(result.ot),
        "NT": _corpus_to_json(result.nt),
    }
    raw = json.dumps(payload, ensure_ascii=False, sort_keys=True, separators=(",", ":")).encode("utf-8")
    buf = io.BytesIO()
    # mtime=0 keeps the container byte-reproducible
    with gzip.GzipFile(filename="", mode="wb", fileobj=buf, mtime=0) as gz:
        gz.write(raw)
    Path(path).write_bytes(buf.getvalue())


def read_container(path: Path | str) -> IngestResult:
    try:
        payload = json.loads(gzip.decompress(Path(path).read_bytes()))
    except (OSError, EOFError, ValueError) as exc:
        raise ParseError(f"{path}: not a corpus container ({exc})") from None
    if payload.get("format") != CONTAINER_FORMAT:
        raise ParseError(f"{path}: unexpected container format {payload.get('format')!r}")
    if payload.get("version") != CONTAINER_VERSION:
        raise ParseError(f"{path}: unsupported container version {payload.get('version')!r}")
    return IngestResult(
        _corpus_from_json(Testament.OT, payload["OT"]),
        _corpus_from_json(Testament.NT, payload["NT"]),
        CustomKeyTable(payload["custom_keys"]),
        payload["manifest"],
    )
