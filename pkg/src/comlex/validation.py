"""Entry validation against a frame registry and a p-dir class."""

from __future__ import annotations

from collections import Counter

from . import diagnostics as dg
from .diagnostics import Diagnostic
from .entries import MORPH_KEYS, Entry
from .frames import POS_FRAME_KIND, FrameRegistry
from .pdir import EmptyPdirClassError, PdirClass, expansion_multiset


def validate_entry(entry: Entry, registry: FrameRegistry, pdir: PdirClass) -> list[Diagnostic]:
    """Check an entry's subcategorizations and morphology keys.

    Output order follows the entry's own field order, so results are
    independent of registry iteration order.
    """
    diags: list[Diagnostic] = []
    locus = (entry.orth, entry.pos)

    for spec in entry.subc:
        frame = registry.for_pos(entry.pos, spec.frame)
        if frame is None:
            kind = POS_FRAME_KIND.get(entry.pos)
            why = f"no {kind} named {spec.frame}" if kind else f"{entry.pos} entries take no frames"
            diags.append(dg.error("unknown-frame", why, locus))
            continue
        if frame.requires_pval and spec.pval is None:
            diags.append(dg.error("missing-pval", f"frame {spec.frame} requires :pval", locus))
        if not frame.requires_pval and spec.pval is not None:
            diags.append(dg.error("unexpected-pval", f"frame {spec.frame} forbids :pval", locus))
        if spec.pval is not None:
            try:
                expanded = expansion_multiset(spec.pval, pdir)
            except EmptyPdirClassError:
                diags.append(
                    dg.error("empty-pdir-class", f"frame {spec.frame} uses p-dir with an empty class", locus)
                )
                continue
            dupes = sorted(p for p, n in Counter(expanded).items() if n > 1)
            if dupes:
                diags.append(
                    dg.error(
                        "duplicate-prep",
                        f"frame {spec.frame} lists duplicate prepositions after expansion: "
                        + ", ".join(dupes),
                        locus,
                    )
                )

    allowed = MORPH_KEYS.get(entry.pos, ())
    for key in entry.morphology:
        if key not in allowed:
            diags.append(
                dg.error("unknown-morph-key", f":{key} is not a {entry.pos} morphology key", locus)
            )

    return diags
