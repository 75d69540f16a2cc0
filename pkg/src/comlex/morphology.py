"""Regular inflection generation for concordance matching.

Deliberately shallow: suffix rules with sibilant +es, y->ies, and final-e
drop, no consonant doubling.  The goal is concordance recall, not a
morphology of English; irregular forms come from entry overrides.
"""

from __future__ import annotations

from .entries import MORPH_KEYS, Entry

_SIBILANT_ENDINGS = ("s", "x", "z", "ch", "sh")
_VOWELS = frozenset("aeiou")


def _s_form(base: str) -> str:
    if base.endswith(_SIBILANT_ENDINGS):
        return base + "es"
    if base.endswith("y") and len(base) > 1 and base[-2] not in _VOWELS:
        return base[:-1] + "ies"
    return base + "s"


def _ed_form(base: str) -> str:
    if base.endswith("e"):
        return base + "d"
    if base.endswith("y") and len(base) > 1 and base[-2] not in _VOWELS:
        return base[:-1] + "ied"
    return base + "ed"


def _ing_form(base: str) -> str:
    if base.endswith("e"):
        return base[:-1] + "ing"
    return base + "ing"


def regular_forms(pos: str, base: str) -> dict[str, str]:
    """Regularly generated surface form per morphology key."""
    if pos == "noun":
        return {"plural": _s_form(base)}
    if pos == "verb":
        ed = _ed_form(base)
        return {
            "present": _s_form(base),
            "past": ed,
            "past-part": ed,
            "pres-part": _ing_form(base),
        }
    if pos == "adjective":
        return {}
    raise ValueError(f"no inflection rules for part of speech {pos!r}")


def inflections(entry: Entry) -> set[str]:
    """Base form plus generated inflections, with overrides replacing the
    regular form for their key."""
    if entry.pos not in MORPH_KEYS:
        raise ValueError(f"inflections undefined for part of speech {entry.pos!r}")
    forms = {entry.orth}
    regular = regular_forms(entry.pos, entry.orth)
    for key in MORPH_KEYS[entry.pos]:
        override = entry.morphology.get(key)
        if override is not None:
            forms.update(override)
        elif key in regular:
            forms.add(regular[key])
    return forms
