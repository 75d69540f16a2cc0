"""Parenthesized-list notation: tokenizer, parser, and canonical printer.

The notation carries every on-disk artifact in this toolkit: lexicon
entries, frame definitions, and fixtures.  Atoms are symbols (case-folded
to lowercase), keywords (leading ``:``), double-quoted strings, and bare
digit-sequence integers.  ``;`` starts a comment running to end of line.

All nodes carry a ``(start, end)`` byte span into the UTF-8 source.
Spans are excluded from equality so printed-then-reparsed trees compare
equal to their originals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

MAX_DEPTH = 64

_DELIMITERS = frozenset('()";')


class SexprParseError(ValueError):
    """Parse failure with a stable code and a byte span into the source."""

    def __init__(self, code: str, span: tuple[int, int], message: str):
        super().__init__(f"{message} (bytes {span[0]}..{span[1]})")
        self.code = code
        self.span = span


@dataclass(frozen=True)
class Symbol:
    text: str
    span: tuple[int, int] | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Keyword:
    text: str  # includes the leading ":"
    span: tuple[int, int] | None = field(default=None, compare=False)


@dataclass(frozen=True)
class StringLit:
    text: str
    span: tuple[int, int] | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Integer:
    value: int
    span: tuple[int, int] | None = field(default=None, compare=False)


@dataclass(frozen=True)
class ListExpr:
    items: tuple["SExpr", ...]
    span: tuple[int, int] | None = field(default=None, compare=False)


SExpr = Union[Symbol, Keyword, StringLit, Integer, ListExpr]


def _utf8_len(ch: str) -> int:
    cp = ord(ch)
    if cp < 0x80:
        return 1
    if cp < 0x800:
        return 2
    if cp < 0x10000:
        return 3
    return 4


class _Scanner:
    """Walks the decoded text while tracking the byte offset alongside."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0  # char index
        self.byte = 0  # byte offset of self.pos

    def eof(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos]

    def advance(self) -> str:
        ch = self.text[self.pos]
        self.pos += 1
        self.byte += _utf8_len(ch)
        return ch

    def skip_blank(self) -> None:
        while not self.eof():
            ch = self.peek()
            if ch == ";":
                while not self.eof() and self.peek() != "\n":
                    self.advance()
            elif ch.isspace():
                self.advance()
            else:
                return


def _is_token_char(ch: str) -> bool:
    return not ch.isspace() and ch not in _DELIMITERS


def _is_illegal(ch: str) -> bool:
    # Control characters other than whitespace can never appear in a token.
    return (ord(ch) < 0x20 or ord(ch) == 0x7F) and not ch.isspace()


def _read_string(sc: _Scanner) -> StringLit:
    start = sc.byte
    sc.advance()  # opening quote
    chars: list[str] = []
    while not sc.eof():
        ch = sc.advance()
        if ch == '"':
            return StringLit("".join(chars), (start, sc.byte))
        if ch == "\\":
            if sc.eof():
                break
            chars.append(sc.advance())
        else:
            chars.append(ch)
    raise SexprParseError("unterminated-string", (start, sc.byte), "string literal not closed")


def _read_atom(sc: _Scanner) -> SExpr:
    start = sc.byte
    ch = sc.peek()
    if _is_illegal(ch):
        sc.advance()
        raise SexprParseError("illegal-token", (start, sc.byte), f"illegal character {ch!r}")
    chars: list[str] = []
    while not sc.eof() and _is_token_char(sc.peek()):
        if _is_illegal(sc.peek()):
            bad_start = sc.byte
            bad = sc.advance()
            raise SexprParseError(
                "illegal-token", (bad_start, sc.byte), f"illegal character {bad!r} inside token"
            )
        chars.append(sc.advance())
    token = "".join(chars)
    span = (start, sc.byte)
    # isdigit() alone admits non-ASCII digits (e.g. superscripts) that
    # int() rejects; integers here are ASCII decimal only.
    if token.isascii() and token.isdigit():
        return Integer(int(token), span)
    if token.startswith(":"):
        if len(token) < 2:
            raise SexprParseError("illegal-token", span, "keyword ':' with no name")
        return Keyword(token.lower(), span)
    return Symbol(token.lower(), span)


def _read_form(sc: _Scanner, depth: int) -> SExpr:
    ch = sc.peek()
    if ch == "(":
        if depth >= MAX_DEPTH:
            raise SexprParseError(
                "too-deep", (sc.byte, sc.byte + 1), f"nesting exceeds {MAX_DEPTH} levels"
            )
        start = sc.byte
        sc.advance()
        items: list[SExpr] = []
        while True:
            sc.skip_blank()
            if sc.eof():
                raise SexprParseError("unbalanced-paren", (start, sc.byte), "missing ')'")
            if sc.peek() == ")":
                sc.advance()
                return ListExpr(tuple(items), (start, sc.byte))
            items.append(_read_form(sc, depth + 1))
    if ch == ")":
        raise SexprParseError("unbalanced-paren", (sc.byte, sc.byte + 1), "extra ')'")
    if ch == '"':
        return _read_string(sc)
    return _read_atom(sc)


def parse_sexprs(text: str) -> list[SExpr]:
    """Parse every top-level form in ``text``.

    Raises :class:`SexprParseError` on the first malformed construct; the
    error's ``span`` always lies within the source.
    """
    sc = _Scanner(text)
    forms: list[SExpr] = []
    while True:
        sc.skip_blank()
        if sc.eof():
            return forms
        forms.append(_read_form(sc, 0))


def parse_one(text: str) -> SExpr:
    """Parse exactly one form; reject empty input or trailing forms."""
    forms = parse_sexprs(text)
    if len(forms) != 1:
        total = len(text.encode("utf-8"))
        raise SexprParseError(
            "unbalanced-paren", (0, total), f"expected exactly one form, found {len(forms)}"
        )
    return forms[0]


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def print_sexpr(form: SExpr) -> str:
    """Render ``form`` canonically: single spaces, escaped strings, no padding."""
    if isinstance(form, Symbol):
        return form.text
    if isinstance(form, Keyword):
        return form.text
    if isinstance(form, StringLit):
        return f'"{_escape(form.text)}"'
    if isinstance(form, Integer):
        return str(form.value)
    if isinstance(form, ListExpr):
        return "(" + " ".join(print_sexpr(item) for item in form.items) + ")"
    raise TypeError(f"not an s-expression node: {form!r}")


def print_sexprs(forms) -> str:
    """One form per LF-terminated line; re-parses to an equal sequence."""
    return "".join(print_sexpr(form) + "\n" for form in forms)


def lst(*items: SExpr) -> ListExpr:
    """Convenience constructor used by printers and tests."""
    return ListExpr(tuple(items))
