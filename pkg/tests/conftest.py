from __future__ import annotations

import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lxxquote.corpus import NT_BOOKS, OT_BOOKS, BookText, Corpus, TokenKey  # noqa: E402

FIXTURES = Path(__file__).parent / "fixtures"


def pytest_addoption(parser):
    group = parser.getgroup("reproduction")
    group.addoption("--ot-xml", default=os.environ.get("LXXQUOTE_OT_XML"),
                    help="Analytic Septuagint Zefania XML (enables the reproduction suite)")
    group.addoption("--nt-xml", default=os.environ.get("LXXQUOTE_NT_XML"),
                    help="Tischendorf Greek NT Zefania XML (enables the reproduction suite)")


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def reference_corpora(request):
    ot, nt = request.config.getoption("--ot-xml"), request.config.getoption("--nt-xml")
    if not (ot and nt and Path(ot).is_file() and Path(nt).is_file()):
        pytest.skip("reference corpora not supplied (--ot-xml/--nt-xml)")
    return Path(ot), Path(nt)


def corpus_from_keys(testament: str, books: dict[int, list[str]]) -> Corpus:
    """Corpus whose book ``i`` carries the given key strings; surfaces mirror keys."""
    canon = OT_BOOKS if testament == "OT" else NT_BOOKS
    texts = [
        BookText.from_tokens(canon[i], [(TokenKey.parse(k), k.lower(), 1, j + 1) for j, k in enumerate(keys)])
        for i, keys in books.items()
    ]
    return Corpus(testament, texts)


@pytest.fixture(scope="session")
def synthetic_xml(tmp_path_factory):
    from synth import synthetic_bible

    ot, nt = synthetic_bible(seed=0)
    root = tmp_path_factory.mktemp("xml")
    (root / "ot.xml").write_bytes(ot)
    (root / "nt.xml").write_bytes(nt)
    return root / "ot.xml", root / "nt.xml"


@pytest.fixture(scope="session")
def synthetic_run(synthetic_xml):
    """(ingest result, raw matches, quotations, analysis) for the default synthetic corpus."""
    from lxxquote.detect import detect
    from lxxquote.ingest import ingest_files
    from lxxquote.pipeline import analyze

    corpus = ingest_files(*synthetic_xml)
    raw, quotes = detect(corpus.ot, corpus.nt)
    analysis = analyze(quotes, corpus.ot, corpus.nt, raw_matches=len(raw))
    return corpus, raw, quotes, analysis


ACCEPTANCE: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL/SKIP line per acceptance criterion."""

    def record(number: int, ok: bool | None, detail: str) -> None:
        status = "SKIP" if ok is None else "PASS" if ok else "FAIL"
        line = f"criterion {number}: {status} {detail}"
        ACCEPTANCE.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
