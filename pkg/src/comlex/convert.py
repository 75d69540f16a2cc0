"""Export lexicons to SGML-style markup and to flat line records.

Both forms are deterministic: same lexicon in, same bytes out.  The
SGML form mirrors the canonical entry layout (head attributes, then
morphology keys alphabetically, then features, then subcategorization);
see ``docs/sgml.md`` for the element declarations.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from .entries import Entry, Lexicon


def _pcdata(text: str) -> str:
    return escape(text)


def _attr(value: str) -> str:
    # Always double-quoted (unlike saxutils.quoteattr) so output bytes
    # never depend on which quote characters the value contains.
    return '"' + escape(value, {'"': "&quot;"}) + '"'


def entry_to_sgml(entry: Entry) -> str:
    """One ``<entry>`` element; attribute order is pos then orth."""
    lines = [f"<entry pos={_attr(entry.pos)} orth={_attr(entry.orth)}>"]
    for key in sorted(entry.morphology):
        forms = "".join(f"<form>{_pcdata(f)}</form>" for f in entry.morphology[key])
        lines.append(f"  <morph key={_attr(key)}>{forms}</morph>")
    for feature in entry.features:
        params = "".join(
            f"<param key={_attr(key)}>"
            + "".join(f"<value>{_pcdata(v)}</value>" for v in values)
            + "</param>"
            for key, values in sorted(feature.params)
        )
        if params:
            lines.append(f"  <feature name={_attr(feature.name)}>{params}</feature>")
        else:
            lines.append(f"  <feature name={_attr(feature.name)}/>")
    for spec in entry.subc:
        if spec.pval is None:
            lines.append(f"  <subc frame={_attr(spec.frame)}/>")
        else:
            preps = "".join(f"<prep>{_pcdata(p)}</prep>" for p in spec.pval)
            lines.append(f"  <subc frame={_attr(spec.frame)}>{preps}</subc>")
    lines.append("</entry>")
    return "\n".join(lines)


def lexicon_to_sgml(lexicon: Lexicon) -> str:
    body = "\n".join(entry_to_sgml(entry) for entry in lexicon)
    return f"<lexicon>\n{body}\n</lexicon>\n" if len(lexicon) else "<lexicon>\n</lexicon>\n"


def entry_to_records(entry: Entry) -> list[str]:
    """Flat tab-separated facts, one per line, grep/cut friendly.

    Record shapes::

        entry    <orth> <pos>
        morph    <orth> <pos> <key>   <form,form,...>
        feature  <orth> <pos> <name>  <key=v1|v2;key2=...>
        subc     <orth> <pos> <frame> <prep,prep,...>
    """
    base = f"{entry.orth}\t{entry.pos}"
    records = [f"entry\t{base}"]
    for key in sorted(entry.morphology):
        records.append(f"morph\t{base}\t{key}\t{','.join(entry.morphology[key])}")
    for feature in entry.features:
        params = ";".join(
            f"{key}={'|'.join(values)}" for key, values in sorted(feature.params)
        )
        records.append(f"feature\t{base}\t{feature.name}\t{params}")
    for spec in entry.subc:
        records.append(f"subc\t{base}\t{spec.frame}\t{','.join(spec.pval or ())}")
    return records


def lexicon_to_records(lexicon: Lexicon) -> str:
    lines: list[str] = []
    for entry in lexicon:
        lines.extend(entry_to_records(entry))
    return "".join(line + "\n" for line in lines)
