"""The p-dir token: a configurable class of directional prepositions.

Writing ``p-dir`` inside a :pval list stands for the whole class, so
motion verbs need not enumerate every directional preposition by hand.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .entries import P_DIR


class EmptyPdirClassError(ValueError):
    pass


@dataclass(frozen=True)
class PdirClass:
    """Ordered, duplicate-free preposition strings (configuration data)."""

    members: tuple[str, ...] = ()

    def __post_init__(self):
        if len(set(self.members)) != len(self.members):
            raise ValueError("p-dir class has duplicate members")
        if P_DIR in self.members:
            raise ValueError("p-dir class cannot contain the p-dir token itself")


def expand_pdir(pval, pdir: PdirClass) -> list[str]:
    """Replace each ``p-dir`` token with the class members.

    First-occurrence order is kept and the result is duplicate-free, so
    the expansion is idempotent.
    """
    out: list[str] = []
    seen: set[str] = set()
    for token in pval:
        if token == P_DIR:
            if not pdir.members:
                raise EmptyPdirClassError("pval uses p-dir but the class is empty")
            replacement = pdir.members
        else:
            replacement = (token,)
        for prep in replacement:
            if prep not in seen:
                seen.add(prep)
                out.append(prep)
    return out


def expansion_multiset(pval, pdir: PdirClass) -> list[str]:
    """Like :func:`expand_pdir` but keeping duplicates, for validation."""
    out: list[str] = []
    for token in pval:
        if token == P_DIR:
            if not pdir.members:
                raise EmptyPdirClassError("pval uses p-dir but the class is empty")
            out.extend(pdir.members)
        else:
            out.append(token)
    return out


def pdir_from_text(text: str) -> PdirClass:
    """One preposition per line; ``#`` starts a comment."""
    members: list[str] = []
    seen: set[str] = set()
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line not in seen:
            seen.add(line)
            members.append(line)
    return PdirClass(tuple(members))


def pdir_from_file(path: str | Path) -> PdirClass:
    return pdir_from_text(Path(path).read_text("utf-8"))


def default_pdir() -> PdirClass:
    text = resources.files("comlex.data").joinpath("pdir.txt").read_text("utf-8")
    return pdir_from_text(text)
