"""HTTP service exposing the store to the browser workbench.

All state lives in a :class:`~comlex.store.LexiconStore`; the service
itself is stateless apart from an optional in-memory corpus index.
Responses are JSON; errors use conventional status codes (400 malformed
input, 404 unknown resource, 409 version conflict, 422 validation
failure).
"""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .corpus import CorpusIndex, kwic, load_or_build_index
from .diagnostics import Diagnostic, has_errors
from .entries import entry_from_sexpr, print_entry, EntryFormError
from .evaluation import (
    CoverageMode,
    EmptyInstanceSetError,
    IdSetMismatchError,
    MODE_ORDER,
    TaggedInstance,
    agreement,
    agreement_json,
    by_annotator,
    coverage,
    coverage_json,
)
from .frames import Frame
from .sexpr import SexprParseError, parse_sexprs
from .store import LexiconStore, ValidationFailedError, VersionConflictError
from .validation import validate_entry


class SaveEntryRequest(BaseModel):
    lexicon: str
    text: str
    expected_version: Optional[int] = None
    annotator: str = ""


class ValidateRequest(BaseModel):
    text: str
    strict: bool = False


class InstanceModel(BaseModel):
    id: str
    lemma: str
    pos: str
    frame: str
    preps: list[str] = Field(default_factory=list)
    labels: list[str] = Field(default_factory=list)
    flag: Optional[str] = None
    annotator: str = ""
    sentence: str = ""


class AppendInstancesRequest(BaseModel):
    name: str = "instances"
    instances: list[InstanceModel]


def _diag_json(diag: Diagnostic) -> dict:
    return {
        "severity": diag.severity,
        "code": diag.code,
        "message": diag.message,
        "locus": list(diag.locus) if diag.locus is not None else None,
    }


def _frame_json(frame: Frame) -> dict:
    return {
        "kind": frame.kind,
        "name": frame.name,
        "requires_pval": frame.requires_pval,
        "example": frame.example,
        "features": [[f.kind, f.value] for f in frame.features],
        "constituents": [
            {"category": c.category, "index": c.index, "options": dict(c.options)}
            for c in frame.cs
        ],
    }


def _instance_json(inst: TaggedInstance) -> dict:
    return {
        "id": inst.id,
        "lemma": inst.lemma,
        "pos": inst.pos,
        "frame": inst.frame,
        "preps": list(inst.preps),
        "labels": list(inst.labels),
        "flag": inst.flag,
        "annotator": inst.annotator,
        "sentence": inst.sentence,
    }


def _parse_entry_text(text: str, strict: bool = False):
    try:
        forms = parse_sexprs(text)
    except SexprParseError as exc:
        raise HTTPException(400, detail=str(exc)) from exc
    if len(forms) != 1:
        raise HTTPException(400, detail=f"expected exactly one entry form, got {len(forms)}")
    try:
        return entry_from_sexpr(forms[0], strict=strict)
    except EntryFormError as exc:
        raise HTTPException(
            422, detail={"message": str(exc), "diagnostics": [_diag_json(exc.to_diagnostic())]}
        ) from exc


def _load_index(store: LexiconStore) -> CorpusIndex | None:
    corpus_dir = store.corpus_dir()
    if not corpus_dir.is_dir() or not any(corpus_dir.glob("*.txt")):
        return None
    return load_or_build_index(corpus_dir, store.root / "corpus.index.json")


def create_app(store: LexiconStore, index: CorpusIndex | None = None) -> FastAPI:
    app = FastAPI(title="comlex service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    if index is None:
        index = _load_index(store)

    def lookup_payload(orth: str, pos: str | None) -> list[dict]:
        return [
            {
                "lexicon": hit.lexicon,
                "orth": hit.entry.orth,
                "pos": hit.entry.pos,
                "version": hit.version,
                "text": print_entry(hit.entry),
            }
            for hit in store.lookup_records(orth, pos)
        ]

    @app.get("/entries/{orth}")
    def get_entries(orth: str) -> list[dict]:
        return lookup_payload(orth, None)

    @app.get("/entries/{orth}/{pos}")
    def get_entries_pos(orth: str, pos: str) -> list[dict]:
        hits = lookup_payload(orth, pos)
        if not hits:
            raise HTTPException(404, detail=f"no {pos} entry for {orth!r}")
        return hits

    @app.put("/entries")
    def put_entry(request: SaveEntryRequest) -> dict:
        entry, warnings = _parse_entry_text(request.text)
        try:
            version = store.save_entry(
                request.lexicon, entry, request.expected_version, request.annotator
            )
        except VersionConflictError as exc:
            server_text = next(
                (
                    hit["text"]
                    for hit in lookup_payload(entry.orth, entry.pos)
                    if hit["lexicon"] == request.lexicon
                ),
                None,
            )
            raise HTTPException(
                409,
                detail={
                    "message": str(exc),
                    "current_version": exc.current,
                    "server_text": server_text,
                },
            ) from exc
        except ValidationFailedError as exc:
            raise HTTPException(
                422,
                detail={
                    "message": str(exc),
                    "diagnostics": [_diag_json(d) for d in exc.diagnostics],
                },
            ) from exc
        return {
            "lexicon": request.lexicon,
            "orth": entry.orth,
            "pos": entry.pos,
            "version": version,
            "text": print_entry(entry),
            "warnings": [_diag_json(d) for d in warnings],
        }

    @app.post("/validate")
    def post_validate(request: ValidateRequest) -> dict:
        entry, warnings = _parse_entry_text(request.text, strict=request.strict)
        diags = list(warnings) + validate_entry(entry, store.registry, store.pdir)
        return {
            "orth": entry.orth,
            "pos": entry.pos,
            "valid": not has_errors(diags),
            "canonical": print_entry(entry),
            "diagnostics": [_diag_json(d) for d in diags],
        }

    @app.get("/frames")
    def get_frames() -> list[dict]:
        return [_frame_json(frame) for frame in store.registry]

    @app.get("/frames/{name}")
    def get_frame(name: str) -> list[dict]:
        hits = [_frame_json(f) for f in store.registry if f.name == name]
        if not hits:
            raise HTTPException(404, detail=f"no frame named {name!r}")
        return hits

    @app.get("/kwic")
    def get_kwic(
        forms: str = Query(..., description="comma-separated surface forms"),
        window: int = 40,
        limit: int = 25,
    ) -> list[dict]:
        if index is None:
            raise HTTPException(404, detail="store has no corpus directory")
        wanted = [f for f in (s.strip() for s in forms.split(",")) if f]
        if not wanted:
            raise HTTPException(400, detail="no forms given")
        try:
            lines = kwic(index, wanted, window=window, limit=limit)
        except ValueError as exc:
            raise HTTPException(400, detail=str(exc)) from exc
        return [
            {
                "doc_id": line.doc_id,
                "source": line.source,
                "left": line.left,
                "match": line.match,
                "right": line.right,
                "span": list(line.span),
            }
            for line in lines
        ]

    @app.post("/instances")
    def post_instances(request: AppendInstancesRequest) -> dict:
        instances = [
            TaggedInstance(
                id=m.id,
                lemma=m.lemma,
                pos=m.pos,
                frame=m.frame,
                preps=tuple(m.preps),
                labels=tuple(m.labels),
                flag=m.flag,
                annotator=m.annotator,
                sentence=m.sentence,
            )
            for m in request.instances
        ]
        try:
            count = store.append_instances(request.name, instances)
        except ValueError as exc:
            raise HTTPException(422, detail=str(exc)) from exc
        return {"name": request.name, "count": count}

    @app.get("/instances")
    def get_instances(
        name: str = "instances",
        annotator: Optional[str] = None,
        lemma: Optional[str] = None,
    ) -> list[dict]:
        instances = store.read_instance_file(name)
        if annotator is not None:
            instances = [i for i in instances if i.annotator == annotator]
        if lemma is not None:
            instances = [i for i in instances if i.lemma == lemma]
        return [_instance_json(i) for i in instances]

    @app.get("/reports/coverage")
    def get_coverage(
        mode: str = "all",
        instances: str = "instances",
        include_flagged: bool = True,
    ) -> dict:
        tagged = store.read_instance_file(instances)
        lexicons = {name: store.load_lexicon(name) for name in store.lexicon_names()}
        if not lexicons:
            raise HTTPException(404, detail="store has no lexicons")
        try:
            modes = list(MODE_ORDER) if mode == "all" else [CoverageMode(mode)]
        except ValueError as exc:
            raise HTTPException(400, detail=str(exc)) from exc
        try:
            reports = [
                coverage(lexicons, tagged, m, store.pdir, include_flagged=include_flagged)
                for m in modes
            ]
        except EmptyInstanceSetError as exc:
            raise HTTPException(404, detail=str(exc)) from exc
        return coverage_json(reports)

    @app.get("/reports/agreement")
    def get_agreement(a: str, b: str, instances: str = "instances") -> dict:
        grouped = by_annotator(store.read_instance_file(instances))
        for annotator in (a, b):
            if annotator not in grouped:
                raise HTTPException(404, detail=f"no instances for annotator {annotator!r}")
        try:
            report = agreement(grouped[a], grouped[b])
        except IdSetMismatchError as exc:
            raise HTTPException(422, detail=str(exc)) from exc
        payload = agreement_json(report)
        payload["a"] = a
        payload["b"] = b
        return payload

    return app
