from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import corpus_from_keys
from lxxquote import canon
from lxxquote import corpus as model
from lxxquote.corpus import (
    NT_BOOKS,
    OT_BOOKS,
    BookId,
    BookText,
    Corpus,
    KeyKind,
    TokenKey,
    book_by_name,
    book_word_count,
    span_positions,
)
from lxxquote.errors import BoundsError, CanonError


def test_canon_sizes_and_order():
    assert len(OT_BOOKS) == 39 and len(NT_BOOKS) == 27
    assert OT_BOOKS[0].name == "Genesis" and OT_BOOKS[-1].name == "Malachi"
    assert NT_BOOKS[0].name == "Matthew" and NT_BOOKS[-1].name == "Revelation"
    assert len(set(canon.OT_NAMES) | set(canon.NT_NAMES)) == 66
    assert [b.canon_index for b in OT_BOOKS] == list(range(39))


@pytest.mark.parametrize("alias, expected", [
    ("1 Kingdoms", ("OT", 8)),
    ("III Reigns", ("OT", 10)),
    ("1 Paralipomenon", ("OT", 12)),
    ("Psalm", ("OT", 18)),
    ("Song of Solomon", ("OT", 21)),
    ("Apocalypse", ("NT", 26)),
    ("Second Corinthians", ("NT", 7)),
    ("Tobit", None),
])
def test_resolve_name(alias, expected):
    assert canon.resolve_name(alias) == expected


def test_zefania_numbers():
    assert canon.resolve_zefania_number(1) == ("OT", 0)
    assert canon.resolve_zefania_number(39) == ("OT", 38)
    assert canon.resolve_zefania_number(40) == ("NT", 0)
    assert canon.resolve_zefania_number(66) == ("NT", 26)
    assert canon.resolve_zefania_number(69) is None
    assert canon.resolve_zefania_number(0) is None


def test_token_key_kinds():
    assert TokenKey.real("G2316").kind is KeyKind.REAL
    assert TokenKey.custom(3) == TokenKey(KeyKind.CUSTOM, "C-3")
    assert TokenKey.parse("C-12").kind is KeyKind.CUSTOM
    assert TokenKey.parse("G1") == TokenKey.real("G1")
    for bad in ("", "C-5"):
        with pytest.raises(ValueError):
            TokenKey.real(bad)
    for bad in ("G5", "C-"):
        with pytest.raises(ValueError):
            TokenKey(KeyKind.CUSTOM, bad)


@given(st.text(min_size=1, max_size=8), st.integers(1, 10**6))
def test_real_never_equals_custom(value, seq):
    custom = TokenKey.custom(seq)
    if value.startswith("C-"):
        return
    real = TokenKey.real(value)
    assert real != custom and real.value != custom.value


@given(st.lists(st.sampled_from(["G1", "G2", "C-1", "C-2"]), min_size=3, max_size=3))
def test_key_equality_is_equivalence(values):
    a, b, c = (TokenKey.parse(v) for v in values)
    assert a == TokenKey.parse(values[0])
    assert (a == b) == (b == a)
    if a == b and b == c:
        assert a == c


def test_book_id_validation():
    with pytest.raises(CanonError):
        BookId(model.Testament.OT, 39, "Malachi")
    with pytest.raises(CanonError):
        BookId(model.Testament.NT, 0, "Genesis")
    assert book_by_name("1 Kingdoms") == OT_BOOKS[8]
    assert book_by_name("Revelation", "NT") is NT_BOOKS[26]
    with pytest.raises(CanonError):
        book_by_name("Genesis", "NT")
    with pytest.raises(CanonError):
        book_by_name("Tobit")


def test_corpus_fills_canon_and_rejects_foreign_books():
    c = corpus_from_keys("NT", {3: ["G1", "G2"]})
    assert len(c) == 27 and c.word_counts()[3] == 2 and c.total_words() == 2
    assert [b.book for b in c] == list(NT_BOOKS)
    with pytest.raises(CanonError):
        Corpus("NT", [BookText(OT_BOOKS[0])])
    with pytest.raises(CanonError):
        c.book(OT_BOOKS[0])


def test_book_word_count():
    c = corpus_from_keys("OT", {0: ["G1"] * 17})
    assert book_word_count(c, "Genesis") == 17
    assert book_word_count(c, OT_BOOKS[1]) == 0
    with pytest.raises(CanonError):
        book_word_count(c, "Matthew")


def test_book_word_count_fixture(fixtures_dir):
    from lxxquote.ingest import ingest_files

    r = ingest_files(fixtures_dir / "ot_small.xml", fixtures_dir / "nt_small.xml")
    assert book_word_count(r.ot, "Genesis") == 17
    assert book_word_count(r.ot, "Exodus") == 0


def test_span_positions():
    text = corpus_from_keys("OT", {0: ["G1"] * 12}).book("Genesis")
    assert span_positions(text, 0, 5) == {0, 1, 2, 3, 4}
    assert span_positions(text, 10, 1) == {10}
    assert span_positions(text, 3, 7) == set(range(3, 10))
    with pytest.raises(BoundsError):
        span_positions(text, 8, 5)
    with pytest.raises(BoundsError):
        span_positions(text, -1, 2)
    with pytest.raises(BoundsError):
        span_positions(text, 0, 0)


def test_book_text_access():
    text = corpus_from_keys("NT", {0: ["G5", "C-1", "G7"]}).book("Matthew")
    tok = text[1]
    assert tok.key == TokenKey.custom(1) and tok.book_offset == 1 and tok.book is NT_BOOKS[0]
    assert [t.book_offset for t in text] == [0, 1, 2]
    assert text.ref(2) == "1:3"
    with pytest.raises(BoundsError):
        text[3]
    with pytest.raises(ValueError):
        BookText(NT_BOOKS[0], (TokenKey.real("G1"),), (), (), ())


@given(st.dictionaries(st.integers(0, 38), st.lists(st.sampled_from(["G1", "G2", "C-1"]), max_size=6), max_size=5))
def test_offsets_reconstruct_document_order(books):
    c = corpus_from_keys("OT", books)
    tokens = [t for text in c for t in text]
    assert sorted(tokens, key=lambda t: (t.book.canon_index, t.book_offset)) == tokens
    for text in c:
        assert [t.book_offset for t in text] == list(range(len(text)))
        assert all(t.book == text.book for t in text)
