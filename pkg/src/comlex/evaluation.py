"""Quality-control measurements over tagged corpus instances.

Covers four measurements:

* **Coverage** — what fraction of gold instances each annotator's
  lexicon licenses, in three strictness modes, with rows for every
  annotator, every unordered annotator pair, and the union of all.
* **Union lexicons** — merging entries across annotators (subcats by
  frame name with ordered preposition union, features by name,
  morphology with conflict warnings).
* **Agreement** — how often two annotators assign identical
  argument/adjunct label sequences, overall and excluding flagged
  instances, plus frame agreement among label-agreeing instances.
* **External comparison** — coverage against a foreign dictionary's
  code scheme through a mapping table, in strict and soft modes.

Conventions: vacuous ratios (0/0) report 1.0 (100%); integer percents
round half-up.  Flagged instances count in coverage unless excluded via
``include_flagged=False``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Iterable, Mapping

from .diagnostics import Diagnostic, warning
from .entries import P_DIR, POS_ALIASES, POS_CLOSED, Entry, FeatureSpec, Lexicon, SubcatSpec
from .pdir import PdirClass

FLAGS = frozenset({"difficult", "ambiguous", "figurative"})

ARGUMENT = "argument"
ADJUNCT = "adjunct"
_LABEL_CODES = {"a": ARGUMENT, "j": ADJUNCT}
_CODE_FOR_LABEL = {v: k for k, v in _LABEL_CODES.items()}

MISSING_ENTRY = "missing-entry"
FRAME_ABSENT = "frame-absent"
PREP_ABSENT = "prep-absent"

UNMAPPABLE = "UNMAPPABLE"

_INSTANCE_COLUMNS = (
    "id",
    "lemma",
    "pos",
    "frame",
    "preps",
    "labels",
    "flag",
    "annotator",
    "sentence",
)


class KeyMismatchError(ValueError):
    pass


class EmptyInstanceSetError(ValueError):
    pass


class IdSetMismatchError(ValueError):
    pass


class CoverageMode(Enum):
    COMPLEMENTS_ONLY = "complements-only"
    FULL_STRICT = "full-strict"
    FULL_PDIR = "full-pdir"


MODE_ORDER = (
    CoverageMode.COMPLEMENTS_ONLY,
    CoverageMode.FULL_STRICT,
    CoverageMode.FULL_PDIR,
)


@dataclass(frozen=True)
class TaggedInstance:
    """One gold-tagged corpus occurrence of a lemma."""

    id: str
    lemma: str
    pos: str
    frame: str
    preps: tuple[str, ...] = ()
    labels: tuple[str, ...] = ()
    flag: str | None = None
    annotator: str = ""
    sentence: str = ""


@dataclass(frozen=True)
class Cell:
    """A covered/total count with derived presentation values."""

    covered: int
    total: int

    def __post_init__(self):
        if not 0 <= self.covered <= max(self.total, 0):
            raise ValueError(f"covered {self.covered} out of range for total {self.total}")

    @property
    def fraction(self) -> float:
        return 1.0 if self.total == 0 else self.covered / self.total

    @property
    def percent(self) -> int:
        """Integer percent, ties rounded up, via exact arithmetic."""
        if self.total == 0:
            return 100
        return (200 * self.covered + self.total) // (2 * self.total)


@dataclass(frozen=True)
class CoverageReport:
    mode: CoverageMode
    per_annotator: dict[str, Cell]
    pairwise: dict[tuple[str, str], Cell]
    union_all: Cell
    misses: tuple[tuple[str, str], ...]  # (instance id, reason) against the union

    @property
    def average(self) -> Cell:
        """Pooled counts across annotators (not a mean of percents)."""
        return _pool(self.per_annotator.values())

    @property
    def pair_average(self) -> Cell:
        return _pool(self.pairwise.values())


def _pool(cells) -> Cell:
    cells = list(cells)
    return Cell(sum(c.covered for c in cells), sum(c.total for c in cells))


@dataclass(frozen=True)
class AgreementReport:
    overall_rate: float
    unflagged_rate: float
    n_instances: int
    n_flagged_excluded: int
    frame_agreement_given_label_agreement: float


# -- instance TSV ------------------------------------------------------------


def read_instances(text: str) -> list[TaggedInstance]:
    """Parse the tab-separated instance format (header row required)."""
    lines = text.splitlines()
    if not lines:
        raise ValueError("instance file is empty")
    header = tuple(lines[0].rstrip("\n").split("\t"))
    if header != _INSTANCE_COLUMNS:
        raise ValueError(
            f"bad instance header: expected {'/'.join(_INSTANCE_COLUMNS)}, got {'/'.join(header)}"
        )
    out: list[TaggedInstance] = []
    seen: set[tuple[str, str]] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != len(_INSTANCE_COLUMNS):
            raise ValueError(f"line {lineno}: expected {len(_INSTANCE_COLUMNS)} fields, got {len(fields)}")
        id_, lemma, pos, frame, preps, labels, flag, annotator, sentence = fields
        if not id_ or not lemma or not frame:
            raise ValueError(f"line {lineno}: id, lemma, and frame must be non-empty")
        pos = pos.lower()
        pos = POS_ALIASES.get(pos, pos)
        if pos not in POS_CLOSED:
            raise ValueError(f"line {lineno}: unknown part of speech {pos!r}")
        try:
            label_values = tuple(_LABEL_CODES[c] for c in _split_csv(labels))
        except KeyError as exc:
            raise ValueError(f"line {lineno}: unknown label code {exc.args[0]!r} (use a/j)") from None
        if flag and flag not in FLAGS:
            raise ValueError(f"line {lineno}: unknown flag {flag!r} (use {'/'.join(sorted(FLAGS))})")
        if (id_, annotator) in seen:
            raise ValueError(f"line {lineno}: duplicate instance id {id_!r} for annotator {annotator!r}")
        seen.add((id_, annotator))
        out.append(
            TaggedInstance(
                id=id_,
                lemma=lemma,
                pos=pos,
                frame=frame,
                preps=tuple(_split_csv(preps)),
                labels=label_values,
                flag=flag or None,
                annotator=annotator,
                sentence=sentence,
            )
        )
    return out


def _split_csv(value: str) -> list[str]:
    return [token.strip() for token in value.split(",") if token.strip()]


def write_instances(instances: Iterable[TaggedInstance]) -> str:
    lines = ["\t".join(_INSTANCE_COLUMNS)]
    for inst in instances:
        labels = ",".join(_CODE_FOR_LABEL[l] for l in inst.labels)
        fields = [
            inst.id,
            inst.lemma,
            inst.pos,
            inst.frame,
            ",".join(inst.preps),
            labels,
            inst.flag or "",
            inst.annotator,
            inst.sentence,
        ]
        for name, value in zip(_INSTANCE_COLUMNS, fields):
            if "\t" in value or "\n" in value or "\r" in value:
                raise ValueError(f"field {name!r} of instance {inst.id!r} contains a tab or newline")
        lines.append("\t".join(fields))
    return "\n".join(lines) + "\n"


def by_annotator(instances: Iterable[TaggedInstance]) -> dict[str, list[TaggedInstance]]:
    out: dict[str, list[TaggedInstance]] = {}
    for inst in instances:
        out.setdefault(inst.annotator, []).append(inst)
    return out


# -- coverage -----------------------------------------------------------------


def instance_covered(
    entry: Entry, inst: TaggedInstance, mode: CoverageMode, pdir: PdirClass
) -> bool:
    """Does ``entry`` license the frame (and, in full modes, the preps)?"""
    if entry.pos != inst.pos or entry.orth != inst.lemma:
        raise KeyMismatchError(
            f"entry ({entry.orth!r}, {entry.pos!r}) does not match "
            f"instance ({inst.lemma!r}, {inst.pos!r})"
        )
    candidates = [spec for spec in entry.subc if spec.frame == inst.frame]
    if not candidates:
        return False
    if mode is CoverageMode.COMPLEMENTS_ONLY:
        return True
    allowed: set[str] = set()
    for spec in candidates:
        for token in spec.pval or ():
            if token == P_DIR:
                if mode is CoverageMode.FULL_PDIR:
                    allowed.update(pdir.members)
            else:
                allowed.add(token)
    return all(p in allowed for p in inst.preps)


def _covered_in(lexicon: Lexicon, inst: TaggedInstance, mode: CoverageMode, pdir: PdirClass) -> bool:
    entry = lexicon.get(inst.lemma, inst.pos)
    return entry is not None and instance_covered(entry, inst, mode, pdir)


def _cell(lexicon: Lexicon, instances, mode: CoverageMode, pdir: PdirClass) -> Cell:
    covered = sum(1 for inst in instances if _covered_in(lexicon, inst, mode, pdir))
    return Cell(covered, len(instances))


def coverage(
    lexicons: Mapping[str, Lexicon],
    instances: Iterable[TaggedInstance],
    mode: CoverageMode,
    pdir: PdirClass,
    include_flagged: bool = True,
) -> CoverageReport:
    """Coverage rows for each annotator, each pair, and the full union.

    Pair and union rows are computed over :func:`union_lexicon` of the
    member lexicons.  ``misses`` lists instances the full union still
    fails to cover, with a reason each.
    """
    instances = list(instances)
    if not include_flagged:
        instances = [inst for inst in instances if inst.flag is None]
    if not instances:
        raise EmptyInstanceSetError("no instances to evaluate")
    mode = CoverageMode(mode)

    per_annotator = {
        name: _cell(lexicon, instances, mode, pdir) for name, lexicon in lexicons.items()
    }
    pairwise: dict[tuple[str, str], Cell] = {}
    for a, b in combinations(lexicons, 2):
        merged, _ = union_lexicon([lexicons[a], lexicons[b]])
        pairwise[(a, b)] = _cell(merged, instances, mode, pdir)
    union, _ = union_lexicon(list(lexicons.values()))
    union_all = _cell(union, instances, mode, pdir)

    misses: list[tuple[str, str]] = []
    for inst in instances:
        entry = union.get(inst.lemma, inst.pos)
        if entry is None:
            misses.append((inst.id, MISSING_ENTRY))
        elif not any(spec.frame == inst.frame for spec in entry.subc):
            misses.append((inst.id, FRAME_ABSENT))
        elif not instance_covered(entry, inst, mode, pdir):
            misses.append((inst.id, PREP_ABSENT))
    return CoverageReport(mode, per_annotator, pairwise, union_all, tuple(misses))


# -- union lexicon ------------------------------------------------------------


def _union_pval(a: tuple[str, ...] | None, b: tuple[str, ...] | None):
    if a is None and b is None:
        return None
    out: list[str] = []
    for token in (a or ()) + (b or ()):
        if token not in out:
            out.append(token)
    return tuple(out)


def _merge_params(a, b):
    out: list[tuple[str, tuple[str, ...]]] = []
    index: dict[str, int] = {}
    for key, values in tuple(a) + tuple(b):
        if key not in index:
            index[key] = len(out)
            out.append((key, tuple(values)))
        else:
            i = index[key]
            merged = list(out[i][1])
            for v in values:
                if v not in merged:
                    merged.append(v)
            out[i] = (key, tuple(merged))
    return tuple(out)


def _merge_subc(specs: Iterable[SubcatSpec]) -> list[SubcatSpec]:
    out: list[SubcatSpec] = []
    index: dict[str, int] = {}
    for spec in specs:
        if spec.frame not in index:
            index[spec.frame] = len(out)
            out.append(spec)
        else:
            i = index[spec.frame]
            out[i] = SubcatSpec(spec.frame, _union_pval(out[i].pval, spec.pval))
    return out


def _merge_features(features: Iterable[FeatureSpec]) -> list[FeatureSpec]:
    out: list[FeatureSpec] = []
    index: dict[str, int] = {}
    for feat in features:
        if feat.name not in index:
            index[feat.name] = len(out)
            out.append(feat)
        else:
            i = index[feat.name]
            out[i] = FeatureSpec(feat.name, _merge_params(out[i].params, feat.params))
    return out


def union_lexicon(lexicons: Iterable[Lexicon]) -> tuple[Lexicon, list[Diagnostic]]:
    """Merge lexicons entry-wise; first-seen order wins everywhere.

    Subcat specs merge by frame name with an ordered preposition union
    (so within-entry repeats of a frame collapse too); features merge by
    name with parameter unions; morphology merges per key, emitting a
    ``morph-conflict`` warning when annotators disagree on the forms.
    """
    result = Lexicon()
    diags: list[Diagnostic] = []
    for lexicon in lexicons:
        for entry in lexicon:
            have = result.get(entry.orth, entry.pos)
            if have is None:
                result.add(
                    Entry(
                        pos=entry.pos,
                        orth=entry.orth,
                        morphology=dict(entry.morphology),
                        features=_merge_features(entry.features),
                        subc=_merge_subc(entry.subc),
                    )
                )
                continue
            have.subc = _merge_subc(have.subc + entry.subc)
            have.features = _merge_features(have.features + entry.features)
            for key, forms in entry.morphology.items():
                known = have.morphology.get(key)
                if known is None:
                    have.morphology[key] = forms
                elif known != forms:
                    merged = list(known)
                    for form in forms:
                        if form not in merged:
                            merged.append(form)
                    have.morphology[key] = tuple(merged)
                    diags.append(
                        warning(
                            "morph-conflict",
                            f"{key} forms differ: {'/'.join(known)} vs {'/'.join(forms)}",
                            locus=(entry.orth, entry.pos),
                        )
                    )
    return result, diags


# -- agreement ----------------------------------------------------------------


def _rate(numerator: int, denominator: int) -> float:
    return 1.0 if denominator == 0 else numerator / denominator


def _paired(instances: Iterable[TaggedInstance], side: str) -> dict[str, TaggedInstance]:
    out: dict[str, TaggedInstance] = {}
    for inst in instances:
        if inst.id in out:
            raise IdSetMismatchError(f"duplicate id {inst.id!r} in annotation set {side}")
        out[inst.id] = inst
    return out


def agreement(a: Iterable[TaggedInstance], b: Iterable[TaggedInstance]) -> AgreementReport:
    """Label-sequence agreement between two annotations of the same ids."""
    map_a = _paired(a, "a")
    map_b = _paired(b, "b")
    if map_a.keys() != map_b.keys():
        only_a = sorted(map_a.keys() - map_b.keys())
        only_b = sorted(map_b.keys() - map_a.keys())
        raise IdSetMismatchError(f"instance id sets differ (only in a: {only_a}, only in b: {only_b})")
    ids = sorted(map_a)
    label_equal = [i for i in ids if map_a[i].labels == map_b[i].labels]
    unflagged = [i for i in ids if map_a[i].flag is None and map_b[i].flag is None]
    unflagged_equal = [i for i in unflagged if map_a[i].labels == map_b[i].labels]
    frame_equal = [i for i in label_equal if map_a[i].frame == map_b[i].frame]
    return AgreementReport(
        overall_rate=_rate(len(label_equal), len(ids)),
        unflagged_rate=_rate(len(unflagged_equal), len(unflagged)),
        n_instances=len(ids),
        n_flagged_excluded=len(ids) - len(unflagged),
        frame_agreement_given_label_agreement=_rate(len(frame_equal), len(label_equal)),
    )


# -- spurious features --------------------------------------------------------


def spurious_rate(entry: Entry, attested: Iterable) -> float:
    """Fraction of the entry's subcat frames never seen in gold instances.

    An upper-bound proxy: a frame can be real yet unattested in a small
    sample.  ``attested`` holds ``(frame, preps)`` observations; only
    the frame component is consulted.
    """
    if not entry.subc:
        return 0.0
    seen = {frame for frame, _ in attested}
    unattested = sum(1 for spec in entry.subc if spec.frame not in seen)
    return unattested / len(entry.subc)


def attested_from_instances(instances: Iterable[TaggedInstance], orth: str, pos: str):
    return {
        (inst.frame, inst.preps)
        for inst in instances
        if inst.lemma == orth and inst.pos == pos
    }


# -- external dictionary comparison -------------------------------------------


@dataclass(frozen=True)
class MappingTable:
    """Internal frame names -> external code sets, plus unmappable frames."""

    mapped: dict[str, frozenset[str]] = field(default_factory=dict)
    unmappable: frozenset[str] = frozenset()

    def __post_init__(self):
        overlap = set(self.mapped) & self.unmappable
        if overlap:
            raise ValueError(f"frames both mapped and unmappable: {sorted(overlap)}")

    def is_unmappable(self, frame: str) -> bool:
        """Frames absent from the table count as unmappable."""
        return frame not in self.mapped


def mapping_from_text(text: str) -> MappingTable:
    """Parse the two-column tab-separated mapping format."""
    mapped: dict[str, frozenset[str]] = {}
    unmappable: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise ValueError(f"line {lineno}: expected frame<TAB>codes, got {len(fields)} fields")
        frame, codes = fields[0].strip().lower(), fields[1].strip()
        if not frame:
            raise ValueError(f"line {lineno}: empty frame name")
        if frame in mapped or frame in unmappable:
            raise ValueError(f"line {lineno}: duplicate mapping for frame {frame!r}")
        if codes == UNMAPPABLE:
            unmappable.add(frame)
            continue
        code_set = frozenset(_split_csv(codes))
        if not code_set:
            raise ValueError(f"line {lineno}: no external codes for frame {frame!r}")
        mapped[frame] = code_set
    return MappingTable(mapped, frozenset(unmappable))


def external_codes_from_lexicon(lexicon: Lexicon, mapping: MappingTable) -> dict[str, set[str]]:
    """Per-lemma external code sets derived from the lexicon's frames."""
    out: dict[str, set[str]] = {}
    for entry in lexicon:
        codes = out.setdefault(entry.orth, set())
        for spec in entry.subc:
            codes.update(mapping.mapped.get(spec.frame, ()))
    return out


def external_coverage(
    mapping: MappingTable,
    codes_by_lemma: Mapping[str, set[str]],
    instances: Iterable[TaggedInstance],
    mode: str = "strict",
) -> Cell:
    """Coverage against an external scheme.

    ``strict`` keeps unmappable instances in the denominator (they can
    never be covered); ``soft`` drops them, so soft >= strict always.
    """
    if mode not in ("strict", "soft"):
        raise ValueError(f"mode must be strict or soft, got {mode!r}")
    instances = list(instances)
    covered = 0
    unmappable = 0
    for inst in instances:
        if mapping.is_unmappable(inst.frame):
            unmappable += 1
            continue
        lemma_codes = codes_by_lemma.get(inst.lemma, set())
        if mapping.mapped[inst.frame] & set(lemma_codes):
            covered += 1
    total = len(instances) - (unmappable if mode == "soft" else 0)
    return Cell(covered, total)


# -- rendering ----------------------------------------------------------------


def _format_table(rows: list[tuple[str, ...]]) -> str:
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = []
    for row in rows:
        cells = [row[0].ljust(widths[0])]
        cells += [value.rjust(widths[i]) for i, value in enumerate(row[1:], start=1)]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def render_coverage(reports: Iterable[CoverageReport]) -> str:
    """Aligned text tables: annotator rows then pair rows, one column per mode."""
    by_mode = {report.mode: report for report in reports}
    modes = [m for m in MODE_ORDER if m in by_mode]
    if not modes:
        raise ValueError("no coverage reports to render")
    first = by_mode[modes[0]]

    rows = [("annotator", *(m.value for m in modes))]
    for name in first.per_annotator:
        rows.append((name, *(f"{by_mode[m].per_annotator[name].percent}%" for m in modes)))
    rows.append(("average", *(f"{by_mode[m].average.percent}%" for m in modes)))
    rows.append(("union", *(f"{by_mode[m].union_all.percent}%" for m in modes)))
    text = _format_table(rows)

    if first.pairwise:
        pair_rows = [("pair", *(m.value for m in modes))]
        for pair in first.pairwise:
            label = " + ".join(pair)
            pair_rows.append((label, *(f"{by_mode[m].pairwise[pair].percent}%" for m in modes)))
        pair_rows.append(("pair average", *(f"{by_mode[m].pair_average.percent}%" for m in modes)))
        text += "\n" + _format_table(pair_rows)
    return text


def _cell_json(cell: Cell) -> dict:
    return {"covered": cell.covered, "total": cell.total, "percent": cell.percent}


def coverage_json(reports: Iterable[CoverageReport]) -> dict:
    out: dict = {"modes": {}}
    for report in reports:
        out["modes"][report.mode.value] = {
            "per_annotator": {k: _cell_json(v) for k, v in report.per_annotator.items()},
            "average": _cell_json(report.average),
            "pairwise": {" + ".join(k): _cell_json(v) for k, v in report.pairwise.items()},
            "pair_average": _cell_json(report.pair_average),
            "union": _cell_json(report.union_all),
            "misses": [{"id": i, "reason": r} for i, r in report.misses],
        }
    return out


def render_agreement(report: AgreementReport) -> str:
    lines = [
        f"instances:                     {report.n_instances}",
        f"flagged (excluded from below): {report.n_flagged_excluded}",
        f"label agreement, overall:      {report.overall_rate:.1%}",
        f"label agreement, unflagged:    {report.unflagged_rate:.1%}",
        f"frame agreement when labels agree: {report.frame_agreement_given_label_agreement:.1%}",
    ]
    return "\n".join(lines) + "\n"


def agreement_json(report: AgreementReport) -> dict:
    return {
        "overall_rate": report.overall_rate,
        "unflagged_rate": report.unflagged_rate,
        "n_instances": report.n_instances,
        "n_flagged_excluded": report.n_flagged_excluded,
        "frame_agreement_given_label_agreement": report.frame_agreement_given_label_agreement,
    }


def dumps_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"
