"""Versioned on-disk persistence for lexicons and tagged-instance files.

Layout under a root directory:

* ``<name>.lex``       — one canonically printed entry per line
* ``<name>.meta.json`` — per-entry version counters and the audit log
* ``<name>.tsv``       — tagged instances (see :mod:`comlex.evaluation`)
* ``frames.lex``       — optional frame registry override (reserved name)
* ``pdir.txt``         — optional directional-preposition class override
* ``corpus/*.txt``     — optional concordance corpus

Every write goes through temp-file + fsync + atomic rename, so a crash
at any point leaves the previous committed state readable.  Writes are
serialized through one lock per store; reads take no lock.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable

from .diagnostics import Diagnostic, has_errors
from .entries import Entry, Lexicon, lexicon_from_text, lexicon_to_text
from .evaluation import TaggedInstance, read_instances, write_instances
from .frames import FrameRegistry, default_registry, registry_from_text
from .pdir import PdirClass, default_pdir, pdir_from_file
from .sexpr import SexprParseError
from .validation import validate_entry

RESERVED_NAMES = frozenset({"frames"})

_REPLACE = os.replace  # indirection point for crash-injection tests


class StoreError(ValueError):
    pass


class VersionConflictError(StoreError):
    def __init__(self, message: str, current: int):
        super().__init__(message)
        self.current = current


class ValidationFailedError(StoreError):
    def __init__(self, message: str, diagnostics: list[Diagnostic]):
        super().__init__(message)
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class LookupHit:
    lexicon: str
    entry: Entry
    version: int


def _atomic_write_text(path: Path, text: str) -> None:
    """Write via a same-directory temp file and atomic rename."""
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
            handle.flush()
            os.fsync(handle.fileno())
        _REPLACE(tmp, path)
    finally:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass


def _entry_key(orth: str, pos: str) -> str:
    return f"{orth}\t{pos}"


class LexiconStore:
    """All lexicon/instance files under one root directory."""

    def __init__(
        self,
        root: str | Path,
        registry: FrameRegistry | None = None,
        pdir: PdirClass | None = None,
    ):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._write_lock = threading.Lock()
        self.registry = registry if registry is not None else self._load_registry()
        self.pdir = pdir if pdir is not None else self._load_pdir()

    def _load_registry(self) -> FrameRegistry:
        override = self.root / "frames.lex"
        if override.exists():
            try:
                registry, diags = registry_from_text(override.read_text("utf-8"))
            except SexprParseError as exc:
                raise StoreError(f"frame registry override: {exc}") from exc
            if has_errors(diags):
                raise StoreError(
                    "frame registry override has errors: "
                    + "; ".join(str(d) for d in diags)
                )
            return registry
        return default_registry()

    def _load_pdir(self) -> PdirClass:
        override = self.root / "pdir.txt"
        if override.exists():
            return pdir_from_file(override)
        return default_pdir()

    # -- paths -----------------------------------------------------------

    def lexicon_path(self, name: str) -> Path:
        return self.root / f"{name}.lex"

    def _meta_path(self, name: str) -> Path:
        return self.root / f"{name}.meta.json"

    def instance_path(self, name: str) -> Path:
        return self.root / f"{name}.tsv"

    def corpus_dir(self) -> Path:
        return self.root / "corpus"

    def lexicon_names(self) -> list[str]:
        return sorted(
            path.stem
            for path in self.root.glob("*.lex")
            if path.stem not in RESERVED_NAMES
        )

    def instance_names(self) -> list[str]:
        return sorted(path.stem for path in self.root.glob("*.tsv"))

    # -- lexicons ----------------------------------------------------------

    def load_lexicon(self, name: str) -> Lexicon:
        path = self.lexicon_path(name)
        if not path.exists():
            return Lexicon()
        try:
            lexicon, diags = lexicon_from_text(path.read_text("utf-8"))
        except SexprParseError as exc:
            raise StoreError(f"lexicon {name!r} is not readable: {exc}") from exc
        if has_errors(diags):
            raise StoreError(
                f"lexicon {name!r} is not readable: " + "; ".join(str(d) for d in diags)
            )
        return lexicon

    def _load_meta(self, name: str) -> dict:
        path = self._meta_path(name)
        if not path.exists():
            return {"versions": {}, "audit": []}
        return json.loads(path.read_text("utf-8"))

    def version(self, name: str, orth: str, pos: str) -> int:
        """Current committed version for (orth, pos); 0 when absent."""
        return self._load_meta(name)["versions"].get(_entry_key(orth, pos), 0)

    def audit(self, name: str) -> list[dict]:
        return self._load_meta(name)["audit"]

    def save_entry(
        self,
        name: str,
        entry: Entry,
        expected_version: int | None,
        annotator: str,
    ) -> int:
        """Validate, then atomically commit one entry; returns the new version.

        ``expected_version`` of ``None`` (or 0) asserts the entry is new;
        otherwise it must equal the current committed version.
        """
        if name in RESERVED_NAMES:
            raise StoreError(f"{name!r} is a reserved file name")
        diags = validate_entry(entry, self.registry, self.pdir)
        if has_errors(diags):
            raise ValidationFailedError(
                f"entry ({entry.orth!r}, {entry.pos!r}) failed validation", diags
            )
        with self._write_lock:
            lexicon = self.load_lexicon(name)
            meta = self._load_meta(name)
            key = _entry_key(entry.orth, entry.pos)
            current = meta["versions"].get(key, 0)
            if (expected_version or 0) != current:
                raise VersionConflictError(
                    f"expected version {expected_version} for ({entry.orth!r}, "
                    f"{entry.pos!r}) but the store has {current}",
                    current=current,
                )
            action = "update" if lexicon.get(entry.orth, entry.pos) else "create"
            lexicon.replace(entry)
            meta["versions"][key] = current + 1
            meta["audit"].append(
                {
                    "timestamp": datetime.now(timezone.utc).isoformat(),
                    "annotator": annotator,
                    "orth": entry.orth,
                    "pos": entry.pos,
                    "action": action,
                }
            )
            # Lexicon first: a crash before the meta rename leaves a valid
            # lexicon with a stale counter, never a torn file.
            _atomic_write_text(self.lexicon_path(name), lexicon_to_text(lexicon))
            _atomic_write_text(self._meta_path(name), json.dumps(meta, indent=2) + "\n")
            return current + 1

    def lookup(self, orth: str, pos: str | None = None) -> list[Entry]:
        """Entries matching orth (and pos) across every lexicon in the store."""
        return [hit.entry for hit in self.lookup_records(orth, pos)]

    def lookup_records(self, orth: str, pos: str | None = None) -> list[LookupHit]:
        """Like :meth:`lookup`, with lexicon name and version attached.

        Ordered POS-alphabetically, then by lexicon name.
        """
        hits = []
        for name in self.lexicon_names():
            lexicon = self.load_lexicon(name)
            for entry in lexicon.lookup(orth, pos):
                hits.append(LookupHit(name, entry, self.version(name, entry.orth, entry.pos)))
        hits.sort(key=lambda hit: (hit.entry.pos, hit.lexicon))
        return hits

    # -- instances ---------------------------------------------------------

    def read_instance_file(self, name: str) -> list[TaggedInstance]:
        path = self.instance_path(name)
        if not path.exists():
            return []
        return read_instances(path.read_text("utf-8"))

    def append_instances(self, name: str, instances: Iterable[TaggedInstance]) -> int:
        """Append instances to ``<name>.tsv``; returns the new total count."""
        with self._write_lock:
            combined = self.read_instance_file(name) + list(instances)
            text = write_instances(combined)
            read_instances(text)  # re-parse: catches duplicate ids before commit
            _atomic_write_text(self.instance_path(name), text)
            return len(combined)
