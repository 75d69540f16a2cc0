"""Diagnostic records shared by the parser, model, and validators.

Every diagnostic carries a stable code from :data:`CODES`; anything not
registered there is a bug (enforced by the test suite).
"""

from __future__ import annotations

from dataclasses import dataclass

ERROR = "error"
WARNING = "warning"

# Stable code -> short description.  The closed set of everything the
# toolkit can emit; keep alphabetical.
CODES: dict[str, str] = {
    "bad-control-type": "control/raising value outside subject/object/variable/arbitrary",
    "bad-ex-shape": ":ex value is not a string literal",
    "bad-features-shape": ":features value is not a list of feature forms",
    "bad-head": "entry form does not start with a part-of-speech symbol",
    "bad-morph-shape": "morphology value is not a non-empty list of strings",
    "bad-orth-shape": ":orth value is not a string literal",
    "bad-pval-shape": ":pval value is not a non-empty list of non-empty strings",
    "bad-requires-pval": ":requires-pval value is not true/false",
    "bad-subc-shape": ":subc value is not a list of subcategorization forms",
    "control-raising-conflict": "frame carries both control and raising features",
    "control-subject-mismatch": "control-subject frame whose gs subject is not constituent 1",
    "dangling-gs-index": "gs references an index with no cs constituent",
    "duplicate-cs-index": "two cs constituents share an index",
    "duplicate-entry": "second entry for the same (orth, pos) in one lexicon",
    "duplicate-frame": "second frame with the same name and kind in one registry",
    "duplicate-frame-key": "frame keyword given more than once",
    "duplicate-gs-role": "gs role keyword given more than once",
    "duplicate-prep": "preposition list contains duplicates after p-dir expansion",
    "empty-pdir-class": "pval uses p-dir but the configured class is empty",
    "illegal-token": "character cannot start or continue any token",
    "malformed-pair": "keyword without a following value",
    "missing-cs": "frame has no :cs",
    "missing-gs": "frame has no :gs",
    "missing-frame-name": "frame form has no name symbol",
    "missing-orth": "entry has no non-empty :orth",
    "missing-pval": "frame requires :pval but the entry gives none",
    "morph-conflict": "merged entries disagree on a morphology key",
    "non-integer-index": "constituent index or gs reference is not an integer",
    "pos-alias": "part-of-speech head replaced by its canonical spelling",
    "raising-subject-filled": "raising-subject frame whose gs subject is filled",
    "reserved-cs-index": "cs constituent uses index 1 or lower (1 is the surface subject)",
    "too-deep": "list nesting exceeds the maximum depth",
    "unbalanced-paren": "missing or extra parenthesis",
    "unexpected-pval": ":pval given for a frame that forbids it",
    "unfilled-subject-without-raising": "gs subject is unfilled but the frame has no raising feature",
    "unknown-frame": "subcategorization frame name not in the registry for this part of speech",
    "unknown-frame-feature": "frame :features keyword outside control/raising",
    "unknown-frame-key": "unrecognized keyword in a frame form",
    "unknown-frame-kind": "frame head is not vp-frame/noun-frame/adj-frame",
    "unknown-keyword": "unrecognized keyword in an entry form",
    "unknown-morph-key": "morphology key not defined for this part of speech",
    "unknown-pos": "part-of-speech head outside the closed set",
    "unknown-subcat-param": "unrecognized keyword inside a subcategorization form",
    "unterminated-string": "string literal not closed before end of input",
}


@dataclass(frozen=True)
class Diagnostic:
    """One validation or parse finding.

    ``locus`` is either a ``(start, end)`` byte span into the source text
    or an ``(orth, pos)`` key when no source is at hand.
    """

    severity: str
    code: str
    message: str
    locus: tuple[int, int] | tuple[str, str] | None = None

    def __str__(self) -> str:
        where = ""
        if self.locus is not None:
            a, b = self.locus
            if isinstance(a, int):
                where = f" at {a}..{b}"
            else:
                where = f" for ({a}, {b})"
        return f"{self.severity}[{self.code}]{where}: {self.message}"


def error(code: str, message: str, locus=None) -> Diagnostic:
    return Diagnostic(ERROR, code, message, locus)


def warning(code: str, message: str, locus=None) -> Diagnostic:
    return Diagnostic(WARNING, code, message, locus)


def has_errors(diags) -> bool:
    return any(d.severity == ERROR for d in diags)
