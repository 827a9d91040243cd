from __future__ import annotations

import gzip
import json
import logging
import unicodedata

import pytest
from hypothesis import given
from hypothesis import strategies as st

from synth import synthetic_bible, zefania_xml
from lxxquote.corpus import KeyKind, TokenKey
from lxxquote.errors import ParseError
from lxxquote.ingest import (
    CustomKeyTable,
    assign_custom_keys,
    ingest_bytes,
    ingest_files,
    normalize_strongs,
    normalize_surface,
    parse_zefania,
    read_container,
    write_container,
)


def test_normalize_surface_examples():
    assert normalize_surface("Λόγος") == "λόγος"
    assert normalize_surface("θεός") == "θεός"
    decomposed = "λο\u0301γος"
    assert len(decomposed) == 6
    assert normalize_surface(decomposed) == "λόγος"
    assert normalize_surface(decomposed) == unicodedata.normalize("NFC", decomposed)


def test_normalize_surface_keeps_diacritics_and_final_sigma():
    assert normalize_surface("θεὸς") != normalize_surface("θεός")
    assert normalize_surface("ΛΟΓΟΣ") == "λογος"
    assert normalize_surface("«λόγος,»") == "λόγος"
    assert normalize_surface("·") == ""
    assert normalize_surface("τοῦ·") == "τοῦ"


@given(st.text(max_size=12))
def test_normalize_surface_idempotent(raw):
    once = normalize_surface(raw)
    assert normalize_surface(once) == once


@pytest.mark.parametrize("raw, expected", [
    ("2316", "G2316"),
    ("G2316", "G2316"),
    ("g02316", "G2316"),
    ("4151 4160", "G4151"),
    ("3588,3739", "G3588"),
    ("  ", None),
    (None, None),
])
def test_normalize_strongs(raw, expected):
    assert normalize_strongs(raw) == expected


def test_parse_two_verse_fixture(fixtures_dir):
    doc = parse_zefania((fixtures_dir / "nt_small.xml").read_bytes(), "NT")
    assert len(doc.tokens) == 9
    assert all(t.strongs for t in doc.tokens)
    assert [t.verse for t in doc.tokens] == [1] * 5 + [2] * 4
    corpus = assign_custom_keys(doc, CustomKeyTable())
    keys = corpus.book("John").keys
    assert all(k.kind is KeyKind.REAL for k in keys)
    assert keys[-1] == TokenKey.real("G2316")


def test_parse_ot_fixture(fixtures_dir, caplog):
    data = (fixtures_dir / "ot_small.xml").read_bytes()
    with caplog.at_level(logging.WARNING, logger="lxxquote"):
        doc = parse_zefania(data, "OT")
    assert "Tobit" in caplog.text
    assert doc.excluded_books == {"Tobit": 3}
    assert doc.dropped == [("Genesis", 1, 1, ".")]
    assert len(doc.tokens) == 17
    assert doc.word_count == len(doc.tokens) + len(doc.dropped) + sum(doc.excluded_books.values())
    assert not any(t.book_name == "Exodus" for t in doc.tokens)
    # first of several annotations wins
    assert doc.tokens[15].surface == "πνεῦμα" and doc.tokens[15].strongs == "G4151"


def test_custom_keys_first_appearance(fixtures_dir):
    table = CustomKeyTable()
    doc = parse_zefania((fixtures_dir / "ot_small.xml").read_bytes(), "OT")
    genesis = assign_custom_keys(doc, table).book("Genesis")
    custom = [(k.value, s) for k, s in zip(genesis.keys, genesis.surfaces) if k.kind is KeyKind.CUSTOM]
    assert custom[:3] == [("C-1", "ὁ"), ("C-2", "τὸν"), ("C-3", "καὶ")]
    assert table.surfaces() == ["ὁ", "τὸν", "καὶ", "τὴν", "ἡ", "δὲ"]
    assert custom.count(("C-3", "καὶ")) == 2
    assert table.next_sequence == 7


def test_fully_annotated_input_leaves_table_unchanged(fixtures_dir):
    table = CustomKeyTable(["x"])
    assign_custom_keys(parse_zefania((fixtures_dir / "nt_small.xml").read_bytes(), "NT"), table)
    assert table.surfaces() == ["x"]


def test_shared_custom_key_across_testaments():
    word = "και̃"
    ot = zefania_xml([(1, "Genesis", [[[("α", "1"), (word, None)]]])])
    nt = zefania_xml([(40, "Matthew", [[[(word, None), ("β", "2")]]])])
    r = ingest_bytes(ot, nt)
    assert r.ot.book("Genesis").keys[1] == r.nt.book("Matthew").keys[0] == TokenKey.custom(1)
    assert len(r.table) == 1


def test_table_is_injective():
    table = CustomKeyTable()
    keys = [table.key_for(s) for s in ("a", "b", "a", "c", "b")]
    assert [k.value for k in keys] == ["C-1", "C-2", "C-1", "C-3", "C-2"]
    assert "a" in table and "z" not in table


def test_malformed_xml_reports_position(fixtures_dir):
    with pytest.raises(ParseError) as info:
        parse_zefania((fixtures_dir / "malformed.xml").read_bytes(), "OT")
    assert info.value.line == 5 and info.value.offset is not None
    assert info.value.exit_code == 2


def test_book_resolved_by_name_when_number_is_foreign():
    xml = zefania_xml([(901, "3 Kingdoms", [[[("α", "1")]]])])
    doc = parse_zefania(xml, "OT")
    assert doc.tokens[0].book.name == "1 Kings"


def test_other_testament_book_is_excluded():
    xml = zefania_xml([(40, "Matthew", [[[("α", "1")]]])])
    doc = parse_zefania(xml, "OT")
    assert doc.tokens == [] and doc.excluded_books == {"Matthew": 1}


def test_notes_are_skipped():
    xml = ('<XMLBIBLE><BIBLEBOOK bnumber="1"><CHAPTER cnumber="1"><VERS vnumber="1">'
           '<gr str="1">α</gr><NOTE>not scripture</NOTE> β <STYLE><gr str="3">γ</gr></STYLE>'
           '</VERS></CHAPTER></BIBLEBOOK></XMLBIBLE>').encode()
    doc = parse_zefania(xml, "OT")
    assert [(t.surface, t.strongs) for t in doc.tokens] == [("α", "G1"), ("β", None), ("γ", "G3")]


def test_ingest_is_idempotent():
    ot, nt = synthetic_bible(seed=4)
    a, b = ingest_bytes(ot, nt), ingest_bytes(ot, nt)
    assert a.ot == b.ot and a.nt == b.nt
    assert a.table.surfaces() == b.table.surfaces()
    assert a.manifest == b.manifest


def test_manifest_records_sources(fixtures_dir):
    r = ingest_files(fixtures_dir / "ot_small.xml", fixtures_dir / "nt_small.xml")
    ot = r.manifest["sources"]["OT"]
    assert ot["file"] == "ot_small.xml" and len(ot["sha256"]) == 64
    assert (ot["words_in_document"], ot["tokens"], ot["dropped"]) == (21, 17, 1)
    assert ot["excluded_books"] == {"Tobit": 3}
    assert r.manifest["custom_keys"] == 6


def test_container_round_trip_is_byte_stable(tmp_path):
    r = ingest_bytes(*synthetic_bible(seed=2))
    write_container(r, tmp_path / "a.json.gz")
    back = read_container(tmp_path / "a.json.gz")
    assert back.ot == r.ot and back.nt == r.nt
    assert back.table.surfaces() == r.table.surfaces() and back.manifest == r.manifest
    write_container(back, tmp_path / "b.json.gz")
    assert (tmp_path / "a.json.gz").read_bytes() == (tmp_path / "b.json.gz").read_bytes()


def test_container_rejects_bad_input(tmp_path):
    bad = tmp_path / "bad.gz"
    bad.write_bytes(b"not gzip")
    with pytest.raises(ParseError):
        read_container(bad)
    wrong = tmp_path / "wrong.gz"
    wrong.write_bytes(gzip.compress(json.dumps({"format": "other"}).encode()))
    with pytest.raises(ParseError):
        read_container(wrong)
