"""Fixed 66-book Protestant canon and book-name resolution."""

from __future__ import annotations

import re

OT_NAMES = (
    "Genesis", "Exodus", "Leviticus", "Numbers", "Deuteronomy",
    "Joshua", "Judges", "Ruth", "1 Samuel", "2 Samuel",
    "1 Kings", "2 Kings", "1 Chronicles", "2 Chronicles", "Ezra",
    "Nehemiah", "Esther", "Job", "Psalms", "Proverbs",
    "Ecclesiastes", "Song of Solomon", "Isaiah", "Jeremiah", "Lamentations",
    "Ezekiel", "Daniel", "Hosea", "Joel", "Amos",
    "Obadiah", "Jonah", "Micah", "Nahum", "Habakkuk",
    "Zephaniah", "Haggai", "Zechariah", "Malachi",
)

NT_NAMES = (
    "Matthew", "Mark", "Luke", "John", "Acts",
    "Romans", "1 Corinthians", "2 Corinthians", "Galatians", "Ephesians",
    "Philippians", "Colossians", "1 Thessalonians", "2 Thessalonians", "1 Timothy",
    "2 Timothy", "Titus", "Philemon", "Hebrews", "James",
    "1 Peter", "2 Peter", "1 John", "2 John", "3 John",
    "Jude", "Revelation",
)

# Zefania numbering: 1-39 OT, 40-66 NT, 67+ deuterocanonical/apocryphal.
ZEFANIA_NT_OFFSET = 40

# Alternate titles seen in Greek/Latin editions. Keys are folded (see _fold).
_ALIASES = {
    "gen": "Genesis", "exod": "Exodus", "exo": "Exodus", "lev": "Leviticus",
    "num": "Numbers", "deut": "Deuteronomy", "deu": "Deuteronomy",
    "josh": "Joshua", "jos": "Joshua", "judg": "Judges", "jdg": "Judges",
    "1kingdoms": "1 Samuel", "2kingdoms": "2 Samuel",
    "3kingdoms": "1 Kings", "4kingdoms": "2 Kings",
    "1reigns": "1 Samuel", "2reigns": "2 Samuel",
    "3reigns": "1 Kings", "4reigns": "2 Kings",
    "1sam": "1 Samuel", "2sam": "2 Samuel", "1kgs": "1 Kings", "2kgs": "2 Kings",
    "1paralipomenon": "1 Chronicles", "2paralipomenon": "2 Chronicles",
    "1chron": "1 Chronicles", "2chron": "2 Chronicles",
    "1chr": "1 Chronicles", "2chr": "2 Chronicles",
    "1esdras": None, "2esdras": "Ezra", "esdras": "Ezra",
    "neh": "Nehemiah", "esth": "Esther", "psalm": "Psalms", "ps": "Psalms",
    "psa": "Psalms", "prov": "Proverbs", "pro": "Proverbs",
    "eccl": "Ecclesiastes", "ecc": "Ecclesiastes", "qoheleth": "Ecclesiastes",
    "songofsongs": "Song of Solomon", "canticles": "Song of Solomon",
    "song": "Song of Solomon", "sos": "Song of Solomon",
    "isa": "Isaiah", "jer": "Jeremiah", "lam": "Lamentations",
    "ezek": "Ezekiel", "eze": "Ezekiel", "dan": "Daniel", "hos": "Hosea",
    "obad": "Obadiah", "oba": "Obadiah", "jon": "Jonah", "mic": "Micah",
    "nah": "Nahum", "hab": "Habakkuk", "zeph": "Zephaniah", "zep": "Zephaniah",
    "hag": "Haggai", "zech": "Zechariah", "zec": "Zechariah", "mal": "Malachi",
    "matt": "Matthew", "mat": "Matthew", "mrk": "Mark", "mk": "Mark",
    "luk": "Luke", "jhn": "John", "act": "Acts", "actsoftheapostles": "Acts",
    "rom": "Romans", "1cor": "1 Corinthians", "2cor": "2 Corinthians",
    "gal": "Galatians", "eph": "Ephesians", "phil": "Philippians",
    "php": "Philippians", "col": "Colossians",
    "1thess": "1 Thessalonians", "2thess": "2 Thessalonians",
    "1th": "1 Thessalonians", "2th": "2 Thessalonians",
    "1tim": "1 Timothy", "2tim": "2 Timothy", "tit": "Titus",
    "phlm": "Philemon", "phm": "Philemon", "heb": "Hebrews", "jas": "James",
    "jam": "James", "1pet": "1 Peter", "2pet": "2 Peter",
    "1jn": "1 John", "2jn": "2 John", "3jn": "3 John", "jud": "Jude",
    "rev": "Revelation", "apocalypse": "Revelation", "revelationofjohn": "Revelation",
}

_ROMAN = {"i": "1", "ii": "2", "iii": "3", "iv": "4"}


def _fold(name: str) -> str:
    name = name.strip().casefold()
    head, _, rest = name.partition(" ")
    if rest and head in _ROMAN:
        name = _ROMAN[head] + rest
    for word in ("first ", "second ", "third "):
        if name.startswith(word):
            name = {"first ": "1", "second ": "2", "third ": "3"}[word] + name[len(word):]
    return re.sub(r"[^0-9a-z]", "", name)


_LOOKUP: dict[str, tuple[str, int]] = {}
for _i, _n in enumerate(OT_NAMES):
    _LOOKUP[_fold(_n)] = ("OT", _i)
for _i, _n in enumerate(NT_NAMES):
    _LOOKUP[_fold(_n)] = ("NT", _i)
for _alias, _target in _ALIASES.items():
    if _target is not None:
        _LOOKUP.setdefault(_alias, _LOOKUP[_fold(_target)])


def resolve_name(name: str) -> tuple[str, int] | None:
    """Map a book title or abbreviation to ``(testament, canon_index)``.

    Returns None for anything outside the 66-book canon (Tobit, Maccabees...).
    """
    return _LOOKUP.get(_fold(name))


def resolve_zefania_number(bnumber: int) -> tuple[str, int] | None:
    if 1 <= bnumber <= len(OT_NAMES):
        return ("OT", bnumber - 1)
    if ZEFANIA_NT_OFFSET <= bnumber < ZEFANIA_NT_OFFSET + len(NT_NAMES):
        return ("NT", bnumber - ZEFANIA_NT_OFFSET)
    return None
