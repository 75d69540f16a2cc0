"""Subcategorization frames: indexed constituents, grammatical structure,
control/raising features, and the data-driven registry.

A frame definition looks like::

    (vp-frame to-inf-rs :cs ((vp 2 :mood to-infinitive :subject 1))
      :features (:raising subject)
      :gs (:subject () :comp 2)
      :ex "they seemed to wilt.")

Index 1 always denotes the surface subject, so complement constituents in
``:cs`` are numbered from 2.  ``:gs (:subject () ...)`` marks an unfilled
matrix subject, which only raising frames may carry.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

from . import diagnostics as dg
from .diagnostics import Diagnostic
from .sexpr import Integer, Keyword, ListExpr, SExpr, StringLit, Symbol, parse_sexprs, print_sexpr

FRAME_KINDS = ("vp-frame", "noun-frame", "adj-frame")

# Part of speech -> the frame kind its subcategorizations draw from.
POS_FRAME_KIND = {"verb": "vp-frame", "noun": "noun-frame", "adjective": "adj-frame"}

CONTROL_TYPES = ("subject", "object", "variable", "arbitrary")

# Frame-name tokens that imply a prepositional/particle slot, used when a
# definition carries no explicit :requires-pval.
_PVAL_TOKENS = frozenset({"pp", "p", "part"})

SUBJECT_INDEX = 1


class FrameFormError(ValueError):
    def __init__(self, code: str, message: str, span=None):
        super().__init__(message)
        self.code = code
        self.span = span

    def to_diagnostic(self) -> Diagnostic:
        return dg.error(self.code, str(self), self.span)


@dataclass
class Constituent:
    category: str
    index: int
    options: dict[str, str | int] = field(default_factory=dict)


@dataclass
class GrammaticalStructure:
    """Functional roles over constituent indices; ``subject=None`` is unfilled."""

    subject: int | None = None
    comp: list[int] = field(default_factory=list)
    roles: dict[str, int] = field(default_factory=dict)

    def references(self) -> list[int]:
        refs = [] if self.subject is None else [self.subject]
        refs.extend(self.comp)
        refs.extend(self.roles.values())
        return refs


@dataclass
class FrameFeature:
    kind: str  # "control" | "raising"
    value: str  # one of CONTROL_TYPES


@dataclass
class Frame:
    kind: str
    name: str
    cs: list[Constituent] = field(default_factory=list)
    gs: GrammaticalStructure = field(default_factory=GrammaticalStructure)
    features: list[FrameFeature] = field(default_factory=list)
    example: str | None = None
    requires_pval: bool = False

    def has_feature(self, kind: str, value: str) -> bool:
        return any(f.kind == kind and f.value == value for f in self.features)


def default_requires_pval(name: str) -> bool:
    return bool(_PVAL_TOKENS.intersection(name.split("-")))


def _span(form: SExpr | None):
    return form.span if form is not None else None


def _constituent_from_form(form: SExpr) -> Constituent:
    if not isinstance(form, ListExpr) or len(form.items) < 2 or not isinstance(form.items[0], Symbol):
        raise FrameFormError(
            "missing-cs", f"constituent must be (category index ...), got {print_sexpr(form)}", _span(form)
        )
    category = form.items[0].text
    if not isinstance(form.items[1], Integer):
        raise FrameFormError(
            "non-integer-index", f"constituent {category} has a non-integer index", _span(form.items[1])
        )
    index = form.items[1].value
    options: dict[str, str | int] = {}
    items = form.items
    i = 2
    while i < len(items):
        kw = items[i]
        if not isinstance(kw, Keyword) or i + 1 >= len(items):
            raise FrameFormError(
                "malformed-pair", f"constituent {category} options must be keyword/value pairs", _span(kw)
            )
        value = items[i + 1]
        if isinstance(value, Integer):
            options[kw.text[1:]] = value.value
        elif isinstance(value, Symbol):
            options[kw.text[1:]] = value.text
        else:
            raise FrameFormError(
                "malformed-pair",
                f"constituent option {kw.text} must be a symbol or integer",
                _span(value),
            )
        i += 2
    return Constituent(category, index, options)


def _gs_from_form(form: SExpr) -> GrammaticalStructure:
    if not isinstance(form, ListExpr):
        raise FrameFormError("missing-gs", ":gs must be a list of role pairs", _span(form))
    gs = GrammaticalStructure()
    saw_subject = False
    items = form.items
    i = 0
    while i < len(items):
        kw = items[i]
        if not isinstance(kw, Keyword) or i + 1 >= len(items):
            raise FrameFormError("malformed-pair", ":gs must hold keyword/value pairs", _span(kw))
        role = kw.text[1:]
        value = items[i + 1]
        if role == "subject":
            if saw_subject:
                raise FrameFormError("duplicate-gs-role", "second :subject in :gs", _span(kw))
            saw_subject = True
            if isinstance(value, ListExpr) and not value.items:
                gs.subject = None
            elif isinstance(value, Integer):
                gs.subject = value.value
            else:
                raise FrameFormError(
                    "non-integer-index", ":subject must be an index or ()", _span(value)
                )
        elif role == "comp":
            if not isinstance(value, Integer):
                raise FrameFormError("non-integer-index", ":comp must be an index", _span(value))
            gs.comp.append(value.value)
        else:
            if role in gs.roles:
                raise FrameFormError("duplicate-gs-role", f"second :{role} in :gs", _span(kw))
            if not isinstance(value, Integer):
                raise FrameFormError("non-integer-index", f":{role} must be an index", _span(value))
            gs.roles[role] = value.value
        i += 2
    return gs


def _features_from_form(form: SExpr) -> list[FrameFeature]:
    if not isinstance(form, ListExpr):
        raise FrameFormError("bad-features-shape", ":features must be a list", _span(form))
    feats: list[FrameFeature] = []
    items = form.items
    i = 0
    while i < len(items):
        kw = items[i]
        if not isinstance(kw, Keyword) or i + 1 >= len(items):
            raise FrameFormError(
                "bad-features-shape", "frame :features must hold keyword/value pairs", _span(kw)
            )
        kind = kw.text[1:]
        if kind not in ("control", "raising"):
            raise FrameFormError(
                "unknown-frame-feature", f"unrecognized frame feature :{kind}", _span(kw)
            )
        value = items[i + 1]
        if not isinstance(value, Symbol) or value.text not in CONTROL_TYPES:
            raise FrameFormError(
                "bad-control-type",
                f":{kind} value must be one of {', '.join(CONTROL_TYPES)}",
                _span(value),
            )
        feats.append(FrameFeature(kind, value.text))
        i += 2
    return feats


def frame_from_sexpr(form: SExpr) -> Frame:
    """Build a Frame from one parsed definition form.

    Structural consistency (index references, control/raising coherence)
    is deferred to :func:`validate_frame`.
    """
    if not isinstance(form, ListExpr) or not form.items or not isinstance(form.items[0], Symbol):
        raise FrameFormError("unknown-frame-kind", "frame must be a list starting with its kind", _span(form))
    kind = form.items[0].text
    if kind not in FRAME_KINDS:
        raise FrameFormError(
            "unknown-frame-kind", f"unknown frame kind {kind}", _span(form.items[0])
        )
    if len(form.items) < 2 or not isinstance(form.items[1], Symbol):
        raise FrameFormError("missing-frame-name", "frame has no name symbol", _span(form))
    name = form.items[1].text

    cs: list[Constituent] | None = None
    gs: GrammaticalStructure | None = None
    features: list[FrameFeature] = []
    example: str | None = None
    requires_pval: bool | None = None

    seen: set[str] = set()
    items = form.items
    i = 2
    while i < len(items):
        kw = items[i]
        if not isinstance(kw, Keyword) or i + 1 >= len(items):
            raise FrameFormError(
                "malformed-pair", f"frame {name} must hold keyword/value pairs", _span(kw)
            )
        key = kw.text[1:]
        value = items[i + 1]
        if key in seen:
            raise FrameFormError("duplicate-frame-key", f"second :{key} in frame {name}", _span(kw))
        seen.add(key)
        if key == "cs":
            if not isinstance(value, ListExpr):
                raise FrameFormError("missing-cs", ":cs must be a list", _span(value))
            cs = [_constituent_from_form(c) for c in value.items]
        elif key == "gs":
            gs = _gs_from_form(value)
        elif key == "features":
            features = _features_from_form(value)
        elif key == "ex":
            if not isinstance(value, StringLit):
                raise FrameFormError("bad-ex-shape", ":ex must be a string", _span(value))
            example = value.text
        elif key == "requires-pval":
            if not isinstance(value, Symbol) or value.text not in ("true", "false"):
                raise FrameFormError(
                    "bad-requires-pval", ":requires-pval must be true or false", _span(value)
                )
            requires_pval = value.text == "true"
        else:
            raise FrameFormError("unknown-frame-key", f"unrecognized :{key} in frame {name}", _span(kw))
        i += 2

    if cs is None:
        raise FrameFormError("missing-cs", f"frame {name} has no :cs", _span(form))
    if gs is None:
        raise FrameFormError("missing-gs", f"frame {name} has no :gs", _span(form))
    if requires_pval is None:
        requires_pval = default_requires_pval(name)
    return Frame(kind, name, cs, gs, features, example, requires_pval)


def validate_frame(frame: Frame) -> list[Diagnostic]:
    """Structural checks; an empty result means the frame is coherent."""
    diags: list[Diagnostic] = []
    locus = (frame.name, frame.kind)

    indices = [c.index for c in frame.cs]
    seen: set[int] = set()
    for idx in indices:
        if idx in seen:
            diags.append(dg.error("duplicate-cs-index", f"cs index {idx} repeated", locus))
        seen.add(idx)
    for c in frame.cs:
        if c.index <= SUBJECT_INDEX:
            diags.append(
                dg.error(
                    "reserved-cs-index",
                    f"cs constituent {c.category} uses index {c.index}; complements start at 2",
                    locus,
                )
            )

    valid = {SUBJECT_INDEX} | set(indices)
    for ref in frame.gs.references():
        if ref not in valid:
            diags.append(
                dg.error("dangling-gs-index", f"gs references index {ref} with no constituent", locus)
            )

    has_control = any(f.kind == "control" for f in frame.features)
    has_raising = any(f.kind == "raising" for f in frame.features)
    if has_control and has_raising:
        # The subject-shape rules below presume one discipline or the
        # other, so they are skipped until the conflict is resolved.
        diags.append(dg.error("control-raising-conflict", "frame has both control and raising", locus))
        return diags
    if frame.has_feature("control", "subject") and frame.gs.subject != SUBJECT_INDEX:
        diags.append(
            dg.error(
                "control-subject-mismatch",
                "control-subject frame must give the surface subject as gs subject",
                locus,
            )
        )
    if frame.has_feature("raising", "subject") and frame.gs.subject is not None:
        diags.append(
            dg.error(
                "raising-subject-filled",
                "raising-subject frame must leave the gs subject unfilled",
                locus,
            )
        )
    if frame.gs.subject is None and not has_raising and not frame.has_feature("control", "subject"):
        diags.append(
            dg.error(
                "unfilled-subject-without-raising",
                "only raising frames may leave the gs subject unfilled",
                locus,
            )
        )
    return diags


class FrameRegistry:
    """Frames keyed by (kind, name); names unique per kind."""

    def __init__(self, frames=()):
        self._frames: dict[tuple[str, str], Frame] = {}
        self._order: list[Frame] = []
        for frame in frames:
            self.add(frame)

    def add(self, frame: Frame) -> None:
        key = (frame.kind, frame.name)
        if key in self._frames:
            raise ValueError(f"duplicate frame {frame.name} for {frame.kind}")
        self._frames[key] = frame
        self._order.append(frame)

    def get(self, kind: str, name: str) -> Frame | None:
        return self._frames.get((kind, name))

    def for_pos(self, pos: str, name: str) -> Frame | None:
        kind = POS_FRAME_KIND.get(pos)
        if kind is None:
            return None
        return self.get(kind, name)

    def __iter__(self):
        return iter(self._order)

    def __len__(self) -> int:
        return len(self._order)


def registry_from_text(text: str) -> tuple[FrameRegistry, list[Diagnostic]]:
    """Parse a frame file into a registry.

    Malformed or duplicate frames become error diagnostics; frames that
    fail :func:`validate_frame` are kept but their diagnostics reported.
    """
    registry = FrameRegistry()
    diags: list[Diagnostic] = []
    for form in parse_sexprs(text):
        try:
            frame = frame_from_sexpr(form)
        except FrameFormError as exc:
            diags.append(exc.to_diagnostic())
            continue
        if registry.get(frame.kind, frame.name) is not None:
            diags.append(
                dg.error("duplicate-frame", f"second {frame.kind} named {frame.name}", _span(form))
            )
            continue
        diags.extend(validate_frame(frame))
        registry.add(frame)
    return registry, diags


def default_registry() -> FrameRegistry:
    """The registry shipped with the package (see ``data/frames.lex``)."""
    text = resources.files("comlex.data").joinpath("frames.lex").read_text("utf-8")
    registry, diags = registry_from_text(text)
    if dg.has_errors(diags):
        raise RuntimeError("packaged frame registry is invalid: " + "; ".join(map(str, diags)))
    return registry
