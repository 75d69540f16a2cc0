"""Lexicon entries: the typed feature-value record behind one headword.

An entry file is a sequence of forms like::

    (verb :orth "abandon" :subc ((np-pp :pval ("to")) (np)))
    (noun :orth "abandon" :features ((countable :pval ("with"))))

The head symbol is the part of speech; ``:orth`` holds the base form;
irregular morphology lives under keys like ``:plural``; other syntactic
features under ``:features``; subcategorization under ``:subc``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import diagnostics as dg
from .diagnostics import Diagnostic
from .sexpr import (
    Integer,
    Keyword,
    ListExpr,
    SExpr,
    StringLit,
    Symbol,
    lst,
    parse_sexprs,
    print_sexpr,
)

# Closed part-of-speech set; anything else is accepted only leniently.
POS_CLOSED = ("adjective", "adverb", "noun", "prep", "verb")

# Non-canonical heads folded to their canonical spelling (with a warning).
POS_ALIASES = {"pre": "prep"}

# Morphology override keys accepted per part of speech.  Keys outside a
# POS's row are flagged by validate_entry.
MORPH_KEYS: dict[str, tuple[str, ...]] = {
    "noun": ("plural",),
    "verb": ("past", "past-part", "pres-part", "present"),
    "adjective": ("comparative", "superlative"),
}

_ALL_MORPH_KEYS = frozenset(k for keys in MORPH_KEYS.values() for k in keys)

P_DIR = "p-dir"


class EntryFormError(ValueError):
    """Hard failure turning a form into an Entry."""

    def __init__(self, code: str, message: str, span=None):
        super().__init__(message)
        self.code = code
        self.span = span

    def to_diagnostic(self) -> Diagnostic:
        return dg.error(self.code, str(self), self.span)


@dataclass(frozen=True)
class FeatureSpec:
    """A named syntactic feature, e.g. ``(countable :pval ("with"))``."""

    name: str
    params: tuple[tuple[str, tuple[str, ...]], ...] = ()

    def param(self, key: str) -> tuple[str, ...] | None:
        for k, v in self.params:
            if k == key:
                return v
        return None


@dataclass(frozen=True)
class SubcatSpec:
    """One licensed complement structure: a frame name plus optional preps."""

    frame: str
    pval: tuple[str, ...] | None = None


@dataclass
class Entry:
    pos: str
    orth: str
    morphology: dict[str, tuple[str, ...]] = field(default_factory=dict)
    features: list[FeatureSpec] = field(default_factory=list)
    subc: list[SubcatSpec] = field(default_factory=list)

    @property
    def key(self) -> tuple[str, str]:
        return (self.orth, self.pos)


def _expect_string_list(form: SExpr, code: str, what: str) -> tuple[str, ...]:
    if not isinstance(form, ListExpr) or not form.items:
        raise EntryFormError(code, f"{what} must be a non-empty list of strings", _span(form))
    out = []
    for item in form.items:
        if not isinstance(item, StringLit) or not item.text:
            raise EntryFormError(code, f"{what} must contain non-empty strings", _span(item))
        out.append(item.text)
    return tuple(out)


def _span(form: SExpr | None):
    return form.span if form is not None else None


def _pairs(items, start, span, what):
    """Yield (keyword-text, value) from items[start:], enforcing pairing."""
    i = start
    while i < len(items):
        kw = items[i]
        if not isinstance(kw, Keyword):
            raise EntryFormError(
                "malformed-pair", f"expected a keyword in {what}, got {print_sexpr(kw)}", _span(kw)
            )
        if i + 1 >= len(items):
            raise EntryFormError(
                "malformed-pair", f"keyword {kw.text} has no value in {what}", _span(kw) or span
            )
        yield kw.text[1:], items[i + 1]
        i += 2


def _feature_from_form(form: SExpr, strict: bool, warnings: list[Diagnostic]) -> FeatureSpec:
    if isinstance(form, Symbol):
        return FeatureSpec(form.text)
    if not isinstance(form, ListExpr) or not form.items or not isinstance(form.items[0], Symbol):
        raise EntryFormError(
            "bad-features-shape", f"feature must be (name ...), got {print_sexpr(form)}", _span(form)
        )
    name = form.items[0].text
    params = []
    for key, value in _pairs(form.items, 1, form.span, f"feature {name}"):
        params.append((key, _expect_string_list(value, "bad-pval-shape", f":{key} on {name}")))
    return FeatureSpec(name, tuple(params))


def _subcat_from_form(form: SExpr, strict: bool, warnings: list[Diagnostic]) -> SubcatSpec:
    if not isinstance(form, ListExpr) or not form.items or not isinstance(form.items[0], Symbol):
        raise EntryFormError(
            "bad-subc-shape",
            f"subcategorization must be (frame ...), got {print_sexpr(form)}",
            _span(form),
        )
    frame = form.items[0].text
    pval: tuple[str, ...] | None = None
    for key, value in _pairs(form.items, 1, form.span, f"subc {frame}"):
        if key == "pval":
            pval = _expect_string_list(value, "bad-pval-shape", f":pval on {frame}")
        else:
            message = f"unrecognized :{key} in subcategorization {frame}"
            if strict:
                raise EntryFormError("unknown-subcat-param", message, _span(value))
            warnings.append(dg.warning("unknown-subcat-param", message, _span(value)))
    return SubcatSpec(frame, pval)


def entry_from_sexpr(form: SExpr, strict: bool = False) -> tuple[Entry, list[Diagnostic]]:
    """Build an Entry from one parsed form.

    Returns the entry plus any warnings.  Lenient mode (default) records
    unknown heads and keywords as warnings; strict mode raises
    :class:`EntryFormError` for them.
    """
    if not isinstance(form, ListExpr) or not form.items or not isinstance(form.items[0], Symbol):
        raise EntryFormError("bad-head", "entry must be a list starting with a part of speech", _span(form))

    warnings: list[Diagnostic] = []
    head = form.items[0]
    pos = head.text
    if pos in POS_ALIASES:
        canonical = POS_ALIASES[pos]
        warnings.append(
            dg.warning("pos-alias", f"head {pos} read as {canonical}", _span(head))
        )
        pos = canonical
    elif pos not in POS_CLOSED:
        message = f"unknown part of speech {pos}"
        if strict:
            raise EntryFormError("unknown-pos", message, _span(head))
        warnings.append(dg.warning("unknown-pos", message, _span(head)))

    orth: str | None = None
    morphology: dict[str, tuple[str, ...]] = {}
    features: list[FeatureSpec] = []
    subc: list[SubcatSpec] = []

    for key, value in _pairs(form.items, 1, form.span, "entry"):
        if key == "orth":
            if not isinstance(value, StringLit):
                raise EntryFormError("bad-orth-shape", ":orth must be a string", _span(value))
            orth = value.text
        elif key == "features":
            if not isinstance(value, ListExpr):
                raise EntryFormError("bad-features-shape", ":features must be a list", _span(value))
            features = [_feature_from_form(f, strict, warnings) for f in value.items]
        elif key == "subc":
            if not isinstance(value, ListExpr):
                raise EntryFormError("bad-subc-shape", ":subc must be a list", _span(value))
            subc = [_subcat_from_form(s, strict, warnings) for s in value.items]
        elif key in _ALL_MORPH_KEYS:
            morphology[key] = _expect_string_list(value, "bad-morph-shape", f":{key}")
        else:
            message = f"unrecognized keyword :{key} in entry"
            if strict:
                raise EntryFormError("unknown-keyword", message, _span(value))
            warnings.append(dg.warning("unknown-keyword", message, _span(value)))

    if not orth:
        raise EntryFormError("missing-orth", "entry has no non-empty :orth", _span(form))

    return Entry(pos, orth, morphology, features, subc), warnings


def _feature_to_sexpr(feature: FeatureSpec) -> SExpr:
    items: list[SExpr] = [Symbol(feature.name)]
    for key, values in sorted(feature.params):
        items.append(Keyword(f":{key}"))
        items.append(lst(*(StringLit(v) for v in values)))
    return ListExpr(tuple(items))


def _subcat_to_sexpr(spec: SubcatSpec) -> SExpr:
    items: list[SExpr] = [Symbol(spec.frame)]
    if spec.pval is not None:
        items.append(Keyword(":pval"))
        items.append(lst(*(StringLit(p) for p in spec.pval)))
    return ListExpr(tuple(items))


def entry_to_sexpr(entry: Entry) -> SExpr:
    """Canonical form: head, :orth, morphology keys alphabetically, :features, :subc."""
    items: list[SExpr] = [Symbol(entry.pos), Keyword(":orth"), StringLit(entry.orth)]
    for key in sorted(entry.morphology):
        items.append(Keyword(f":{key}"))
        items.append(lst(*(StringLit(v) for v in entry.morphology[key])))
    if entry.features:
        items.append(Keyword(":features"))
        items.append(lst(*(_feature_to_sexpr(f) for f in entry.features)))
    if entry.subc:
        items.append(Keyword(":subc"))
        items.append(lst(*(_subcat_to_sexpr(s) for s in entry.subc)))
    return ListExpr(tuple(items))


def print_entry(entry: Entry) -> str:
    return print_sexpr(entry_to_sexpr(entry))


class Lexicon:
    """Ordered collection of entries, unique per (orth, pos)."""

    def __init__(self, entries=()):
        self._entries: list[Entry] = []
        self._by_key: dict[tuple[str, str], Entry] = {}
        for entry in entries:
            self.add(entry)

    def add(self, entry: Entry) -> None:
        if entry.key in self._by_key:
            raise ValueError(f"duplicate entry for {entry.key}")
        self._by_key[entry.key] = entry
        self._entries.append(entry)

    def replace(self, entry: Entry) -> None:
        """Insert, or overwrite in place if the key already exists."""
        if entry.key in self._by_key:
            idx = next(i for i, e in enumerate(self._entries) if e.key == entry.key)
            self._entries[idx] = entry
            self._by_key[entry.key] = entry
        else:
            self.add(entry)

    def get(self, orth: str, pos: str) -> Entry | None:
        return self._by_key.get((orth, pos))

    def lookup(self, orth: str, pos: str | None = None) -> list[Entry]:
        hits = [e for e in self._entries if e.orth == orth and (pos is None or e.pos == pos)]
        return sorted(hits, key=lambda e: e.pos)

    def __iter__(self):
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, Lexicon) and self._entries == other._entries

    def copy(self) -> "Lexicon":
        return Lexicon(self._entries)


def lexicon_from_text(text: str, strict: bool = False) -> tuple[Lexicon, list[Diagnostic]]:
    """Parse a lexicon file.  Duplicate (orth, pos) keeps the first entry
    and reports an error diagnostic."""
    lexicon = Lexicon()
    diags: list[Diagnostic] = []
    for form in parse_sexprs(text):
        try:
            entry, warnings = entry_from_sexpr(form, strict=strict)
        except EntryFormError as exc:
            diags.append(exc.to_diagnostic())
            continue
        diags.extend(warnings)
        if lexicon.get(entry.orth, entry.pos) is not None:
            diags.append(
                dg.error("duplicate-entry", f"second entry for {entry.key}", _span(form))
            )
            continue
        lexicon.add(entry)
    return lexicon, diags


def lexicon_to_text(lexicon: Lexicon) -> str:
    """Canonical dump, one entry per line."""
    return "".join(print_entry(entry) + "\n" for entry in lexicon)
