"""Parse interlinear transcription files and plain text into word tables.

The central structure is the :class:`LongTable`: one :class:`WordRecord` per
word, in document order, each carrying the word's position within its line and
paragraph plus the page-level classifications (folio, quire, section,
language, scribal hand, transcriber).

Interlinear input follows a documented subset of the line-by-line
transcription family used for the Voynich manuscript:

* ``#``-prefixed lines are comments and are skipped;
* every text line is ``<folio.locus.line;transcriber>`` followed by the
  payload, e.g. ``<f1r.P1.2;H>  daiin.ckhey.qo``;
* the locus code names the text unit on the page; codes starting with ``P``
  (or ``p``) are running paragraph text, anything else counts as
  label-or-diagram text;
* ``{...}`` spans in the payload are transcriber annotations and are
  stripped;
* ``.`` separates words; ``,`` marks an uncertain word break and is deleted
  by default (fusing its neighbours), or treated as a break when
  ``comma_breaks=True``;
* ``*`` is an unreadable glyph and is kept as a literal character.

Paragraph boundaries are recovered from the locus codes: whenever the
(folio, locus) pair changes between consecutive text lines, a new paragraph
begins. This also resets paragraph counters when the locus kind changes
(e.g. paragraph text interrupted by a diagram label).

Section, language, hand and quire are not stored in the transcription files;
they come from an external folio metadata map (a five-column TSV), because
these are scholarly classifications subject to revision.
"""

from __future__ import annotations

import io
import re
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, replace

from .errors import DecodeError, MetadataError, ParseError

PARAGRAPH = "paragraph"
LABEL_OR_DIAGRAM = "label_or_diagram"
UNCLASSIFIED = "unclassified"

LOCUS_KINDS = (PARAGRAPH, LABEL_OR_DIAGRAM)
LANGUAGES = ("A", "B", UNCLASSIFIED)
HANDS = ("1", "2", "3", "4", "5", UNCLASSIFIED)

# No surface form may contain whitespace: every carrier format (interlinear
# payloads, plain text, the long-table TSV) breaks on it. Interlinear words
# additionally may not contain the transcription break marks or the stream
# boundary symbol; plain-text words may (raw corpora carry punctuation until
# cleansing strips it), which is why that stricter check lives in the
# interlinear parser, not here.
_WHITESPACE_CHARS = frozenset(" \t\r\n\v\f")
_INTERLINEAR_FORBIDDEN = frozenset(".,#")

_LOCUS_RE = re.compile(
    r"^<\s*(?P<folio>[A-Za-z0-9]+)"
    r"\.(?P<locus>[A-Za-z][A-Za-z0-9]*)"
    r"\.(?P<line>\d+)"
    r"\s*;\s*(?P<transcriber>[A-Za-z0-9]+)\s*>"
    r"(?P<payload>.*)$"
)

_ANNOTATION_RE = re.compile(r"\{[^{}]*\}")


@dataclass(frozen=True, slots=True)
class WordRecord:
    """One word of the source text with its full positional metadata.

    Positions are 1-based distances: ``line_pos_fwd`` counts from the start
    of the line, ``line_pos_rev`` from its end, and likewise for the
    paragraph counters, so ``line_pos_fwd + line_pos_rev`` equals the line's
    word count plus one. Positions always describe the word's place in the
    *original* document; filtering a table does not renumber survivors.
    """

    surface_form: str
    line_pos_fwd: int
    line_pos_rev: int
    para_pos_fwd: int
    para_pos_rev: int
    locus_kind: str
    line_number: int
    paragraph_number: int
    folio: str
    quire: str
    section: str
    language: str
    hand: str
    transcriber: str

    def __post_init__(self) -> None:
        if not self.surface_form:
            raise ValueError("surface_form must be non-empty")
        bad = _WHITESPACE_CHARS.intersection(self.surface_form)
        if bad:
            raise ValueError(
                f"surface_form {self.surface_form!r} contains "
                f"whitespace {sorted(bad)!r}"
            )
        for name in ("line_pos_fwd", "line_pos_rev", "para_pos_fwd",
                     "para_pos_rev", "line_number", "paragraph_number"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be a positive integer")
        if self.locus_kind not in LOCUS_KINDS:
            raise ValueError(f"unknown locus_kind {self.locus_kind!r}")
        if self.language not in LANGUAGES:
            raise ValueError(f"unknown language {self.language!r}")
        if self.hand not in HANDS:
            raise ValueError(f"unknown hand {self.hand!r}")


@dataclass(frozen=True, slots=True)
class LongTable:
    """An ordered, immutable sequence of WordRecords from one source."""

    records: tuple[WordRecord, ...]
    source_id: str

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def words(self) -> list[str]:
        return [r.surface_form for r in self.records]


@dataclass(frozen=True, slots=True)
class FolioMetadataMap:
    """folio -> (section, language, hand, quire), loaded from a TSV.

    Lookups are total over parsed input: a folio with no entry fails the
    parse, unless a ``default_entry`` is set (see :meth:`permissive`), in
    which case unknown folios take the default classification.
    """

    entries: dict[str, tuple[str, str, str, str]]
    default_entry: tuple[str, str, str, str] | None = None

    def lookup(self, folio: str) -> tuple[str, str, str, str]:
        try:
            return self.entries[folio]
        except KeyError:
            if self.default_entry is not None:
                return self.default_entry
            raise MetadataError([folio]) from None

    def permissive(self) -> "FolioMetadataMap":
        """Copy that classifies unknown folios as unclassified."""
        return FolioMetadataMap(
            entries=self.entries,
            default_entry=("", UNCLASSIFIED, UNCLASSIFIED, ""))

    @classmethod
    def from_tsv(cls, text: str) -> "FolioMetadataMap":
        """Parse ``folio<TAB>section<TAB>language<TAB>hand<TAB>quire`` rows.

        ``#``-prefixed lines are comments; a literal header row is skipped.
        """
        entries: dict[str, tuple[str, str, str, str]] = {}
        for n, line in enumerate(text.splitlines(), start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if fields[0] == "folio" and len(fields) == 5:
                continue
            if len(fields) != 5:
                raise ParseError(
                    f"folio metadata row needs 5 tab-separated fields, "
                    f"got {len(fields)}", n)
            folio, section, language, hand, quire = (f.strip() for f in fields)
            if language not in LANGUAGES:
                raise ParseError(f"unknown language {language!r}", n)
            if hand not in HANDS:
                raise ParseError(f"unknown hand {hand!r}", n)
            entries[folio] = (section, language, hand, quire)
        return cls(entries)

    @classmethod
    def from_file(cls, path) -> "FolioMetadataMap":
        with open(path, "rb") as fh:
            return cls.from_tsv(_decode(fh.read()))


def _decode(raw: bytes) -> str:
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DecodeError("input is not valid UTF-8", exc.start) from None


@dataclass(frozen=True, slots=True)
class _RawLine:
    """One locus line before positional fields are assigned."""

    folio: str
    locus: str
    line_number: int
    transcriber: str
    words: tuple[str, ...]
    source_line: int


def _split_payload(payload: str, comma_breaks: bool, line_number: int) -> tuple[str, ...]:
    if "{" in payload or "}" in payload:
        stripped = _ANNOTATION_RE.sub("", payload)
        if "{" in stripped or "}" in stripped:
            raise ParseError("unbalanced '{' annotation", line_number)
        payload = stripped
    if comma_breaks:
        payload = payload.replace(",", ".")
    else:
        payload = payload.replace(",", "")
    words = tuple(w for w in re.split(r"[.\s]+", payload) if w)
    for w in words:
        bad = _INTERLINEAR_FORBIDDEN.intersection(w)
        if bad:
            raise ParseError(
                f"word {w!r} contains reserved character(s) {sorted(bad)!r}",
                line_number)
    return words


def parse_interlinear(
    raw: bytes,
    meta: FolioMetadataMap,
    transcriber_filter: str | None = None,
    *,
    comma_breaks: bool = False,
    source_id: str = "",
) -> LongTable:
    """Parse an interlinear transcription file into a LongTable.

    One WordRecord per credible word. When ``transcriber_filter`` is given,
    only that transcriber's lines are kept, and line/paragraph positions are
    computed over the filtered text (an interlinear file repeats each locus
    once per transcriber; positions describe a single transcriber's
    document). ``comma_breaks=True`` treats uncertain breaks as real breaks
    instead of deleting them.

    Raises ParseError for malformed locus headers (with the line number) and
    MetadataError listing every folio missing from ``meta``.
    """
    text = _decode(raw)
    lines: list[_RawLine] = []
    for n, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        if line.lstrip().startswith("#"):
            continue
        m = _LOCUS_RE.match(line.strip())
        if m is None:
            raise ParseError(
                "expected '<folio.locus.line;transcriber>' locus header", n)
        if transcriber_filter is not None and m["transcriber"] != transcriber_filter:
            continue
        lines.append(_RawLine(
            folio=m["folio"],
            locus=m["locus"],
            line_number=int(m["line"]),
            transcriber=m["transcriber"],
            words=_split_payload(m["payload"], comma_breaks, n),
            source_line=n,
        ))

    if meta.default_entry is None:
        missing = sorted({ln.folio for ln in lines} - set(meta.entries))
        if missing:
            raise MetadataError(missing)

    # Group consecutive lines into paragraphs by (folio, locus).
    para_of_line: list[int] = []
    paragraph = 0
    prev_key: tuple[str, str] | None = None
    for ln in lines:
        key = (ln.folio, ln.locus)
        if key != prev_key:
            paragraph += 1
            prev_key = key
        para_of_line.append(paragraph)

    para_sizes: dict[int, int] = {}
    for ln, para in zip(lines, para_of_line):
        para_sizes[para] = para_sizes.get(para, 0) + len(ln.words)

    records: list[WordRecord] = []
    para_cursor: dict[int, int] = {}
    for ln, para in zip(lines, para_of_line):
        section, language, hand, quire = meta.lookup(ln.folio)
        kind = PARAGRAPH if ln.locus[0] in "Pp" else LABEL_OR_DIAGRAM
        n_line = len(ln.words)
        n_para = para_sizes[para]
        for i, word in enumerate(ln.words, start=1):
            pos_in_para = para_cursor.get(para, 0) + 1
            para_cursor[para] = pos_in_para
            try:
                records.append(WordRecord(
                    surface_form=word,
                    line_pos_fwd=i,
                    line_pos_rev=n_line - i + 1,
                    para_pos_fwd=pos_in_para,
                    para_pos_rev=n_para - pos_in_para + 1,
                    locus_kind=kind,
                    line_number=ln.line_number,
                    paragraph_number=para,
                    folio=ln.folio,
                    quire=quire,
                    section=section,
                    language=language,
                    hand=hand,
                    transcriber=ln.transcriber,
                ))
            except ValueError as exc:
                raise ParseError(str(exc), ln.source_line) from None
    return LongTable(records=tuple(records), source_id=source_id)


def parse_plaintext(raw: bytes, source_id: str) -> LongTable:
    """Parse whitespace-separated plain text into a LongTable.

    Line numbers are physical file lines; paragraphs are blocks separated by
    blank lines. All classification fields are unclassified (folio, quire,
    section and transcriber are empty strings).
    """
    text = _decode(raw)
    file_lines = text.splitlines()

    line_words: list[tuple[int, int, list[str]]] = []  # (line_no, para, words)
    paragraph = 0
    in_block = False
    for n, line in enumerate(file_lines, start=1):
        words = line.split()
        if not words:
            in_block = False
            continue
        if not in_block:
            paragraph += 1
            in_block = True
        line_words.append((n, paragraph, words))

    para_sizes: dict[int, int] = {}
    for _, para, words in line_words:
        para_sizes[para] = para_sizes.get(para, 0) + len(words)

    records: list[WordRecord] = []
    para_cursor: dict[int, int] = {}
    for line_no, para, words in line_words:
        n_line = len(words)
        for i, word in enumerate(words, start=1):
            pos = para_cursor.get(para, 0) + 1
            para_cursor[para] = pos
            records.append(WordRecord(
                surface_form=word,
                line_pos_fwd=i,
                line_pos_rev=n_line - i + 1,
                para_pos_fwd=pos,
                para_pos_rev=para_sizes[para] - pos + 1,
                locus_kind=PARAGRAPH,
                line_number=line_no,
                paragraph_number=para,
                folio="",
                quire="",
                section="",
                language=UNCLASSIFIED,
                hand=UNCLASSIFIED,
                transcriber="",
            ))
    return LongTable(records=tuple(records), source_id=source_id)


def select(table: LongTable, predicate: Callable[[WordRecord], bool]) -> LongTable:
    """Subsequence of records matching ``predicate``, order preserved."""
    return LongTable(
        records=tuple(r for r in table.records if predicate(r)),
        source_id=table.source_id,
    )


# The sixteen canonical document selections: the whole text, each Currier
# language, and each scribal hand -- with and without label/diagram text.
def _criteria(language: str | None, hand: str | None, text_only: bool):
    def pred(r: WordRecord) -> bool:
        if language is not None and r.language != language:
            return False
        if hand is not None and r.hand != hand:
            return False
        if text_only and r.locus_kind != PARAGRAPH:
            return False
        return True
    return pred


CANONICAL_SELECTIONS: dict[str, Callable[[WordRecord], bool]] = {}
for _name, _lang, _hand in [("full", None, None),
                            ("a", "A", None), ("b", "B", None),
                            ("hand1", None, "1"), ("hand2", None, "2"),
                            ("hand3", None, "3"), ("hand4", None, "4"),
                            ("hand5", None, "5")]:
    CANONICAL_SELECTIONS[_name] = _criteria(_lang, _hand, False)
    CANONICAL_SELECTIONS[_name + "_text"] = _criteria(_lang, _hand, True)
del _name, _lang, _hand


def canonical_selection(table: LongTable, name: str) -> LongTable:
    """Apply one of the sixteen named selections (``full``, ``a_text``, ...)."""
    try:
        pred = CANONICAL_SELECTIONS[name]
    except KeyError:
        raise ValueError(
            f"unknown selection {name!r}; expected one of "
            + ", ".join(sorted(CANONICAL_SELECTIONS))) from None
    return select(table, pred)


# ---------------------------------------------------------------------------
# TSV serialization: surface_form followed by the 14 metadata columns.
# ---------------------------------------------------------------------------

TSV_COLUMNS = (
    "surface_form",
    "line_pos_fwd", "line_pos_rev", "para_pos_fwd", "para_pos_rev",
    "locus_kind", "line_number", "paragraph_number",
    "folio", "quire", "section", "language", "hand", "transcriber",
    "source_id",
)

_INT_COLUMNS = frozenset(
    c for c in TSV_COLUMNS if c.endswith(("_fwd", "_rev", "_number")))


def write_tsv(table: LongTable) -> str:
    out = io.StringIO()
    out.write("\t".join(TSV_COLUMNS) + "\n")
    for r in table.records:
        row = [r.surface_form,
               str(r.line_pos_fwd), str(r.line_pos_rev),
               str(r.para_pos_fwd), str(r.para_pos_rev),
               r.locus_kind, str(r.line_number), str(r.paragraph_number),
               r.folio, r.quire, r.section, r.language, r.hand, r.transcriber,
               table.source_id]
        out.write("\t".join(row) + "\n")
    return out.getvalue()


def read_tsv(text: str) -> LongTable:
    lines = text.splitlines()
    if not lines:
        return LongTable(records=(), source_id="")
    header = tuple(lines[0].split("\t"))
    if header != TSV_COLUMNS:
        raise ParseError(
            f"unexpected long-table header {header!r}", 1)
    records: list[WordRecord] = []
    source_id = ""
    for n, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        fields = line.split("\t")
        if len(fields) != len(TSV_COLUMNS):
            raise ParseError(
                f"expected {len(TSV_COLUMNS)} columns, got {len(fields)}", n)
        row = dict(zip(TSV_COLUMNS, fields))
        source_id = row.pop("source_id")
        try:
            records.append(WordRecord(**{
                k: (int(v) if k in _INT_COLUMNS else v) for k, v in row.items()
            }))
        except ValueError as exc:
            raise ParseError(str(exc), n) from None
    return LongTable(records=tuple(records), source_id=source_id)


def with_words(table: LongTable, words: Iterable[str]) -> LongTable:
    """Copy of ``table`` with surface forms replaced one-for-one."""
    words = list(words)
    if len(words) != len(table.records):
        raise ValueError(
            f"{len(words)} words for {len(table.records)} records")
    return LongTable(
        records=tuple(replace(r, surface_form=w)
                      for r, w in zip(table.records, words)),
        source_id=table.source_id,
    )


def from_words(words: Sequence[str], source_id: str = "") -> LongTable:
    """Build a minimal one-line-per-word table from bare words (for tests
    and synthetic corpora)."""
    records = tuple(
        WordRecord(
            surface_form=w,
            line_pos_fwd=1, line_pos_rev=1, para_pos_fwd=i + 1,
            para_pos_rev=len(words) - i,
            locus_kind=PARAGRAPH, line_number=i + 1, paragraph_number=1,
            folio="", quire="", section="",
            language=UNCLASSIFIED, hand=UNCLASSIFIED, transcriber="",
        )
        for i, w in enumerate(words)
    )
    return LongTable(records=records, source_id=source_id)
