from __future__ import annotations

import copy

import pytest

from comlex.diagnostics import has_errors
from comlex.frames import (
    Frame,
    FrameFeature,
    FrameFormError,
    default_registry,
    default_requires_pval,
    frame_from_sexpr,
    registry_from_text,
    validate_frame,
)
from comlex.sexpr import parse_one

RAISING_FRAME = """
(vp-frame to-inf-rs :cs ((vp 2 :mood to-infinitive :subject 1))
  :features (:raising subject)
  :gs (:subject () :comp 2)
  :ex "they seemed to wilt.")
"""

CONTROL_FRAME = """
(vp-frame to-inf-sc :cs ((vp 2 :mood to-infinitive :subject 1))
  :features (:control subject)
  :gs (:subject 1 :comp 2)
  :ex "I wanted to come.")
"""

SENTENTIAL_FRAME = """
(vp-frame s :cs ((s 2 :that-comp optional))
  :gs (:subject 1 :comp 2)
  :ex "they thought (that) he was always late")
"""


def _frame(text: str) -> Frame:
    return frame_from_sexpr(parse_one(text))


def test_raising_frame_fields():
    frame = _frame(RAISING_FRAME)
    assert frame.kind == "vp-frame"
    assert frame.name == "to-inf-rs"
    assert frame.features == [FrameFeature("raising", "subject")]
    assert frame.gs.subject is None
    assert frame.gs.comp == [2]
    assert frame.example == "they seemed to wilt."
    assert frame.requires_pval is False


def test_sentential_frame_constituent_options():
    frame = _frame(SENTENTIAL_FRAME)
    (cons,) = frame.cs
    assert cons.category == "s"
    assert cons.index == 2
    assert cons.options == {"that-comp": "optional"}
    assert frame.gs.subject == 1


def test_control_frame_embedded_subject_option():
    frame = _frame(CONTROL_FRAME)
    assert frame.cs[0].options == {"mood": "to-infinitive", "subject": 1}


def test_dangling_gs_reference_parses_then_flags():
    frame = _frame('(vp-frame x :cs ((np 2)) :gs (:subject 1 :comp 3) :ex "e")')
    assert [d.code for d in validate_frame(frame)] == ["dangling-gs-index"]


def test_unknown_frame_kind():
    with pytest.raises(FrameFormError) as exc:
        _frame('(np-frame x :cs () :gs (:subject 1))')
    assert exc.value.code == "unknown-frame-kind"


def test_missing_cs_and_gs():
    with pytest.raises(FrameFormError) as exc:
        _frame("(vp-frame x :gs (:subject 1))")
    assert exc.value.code == "missing-cs"
    with pytest.raises(FrameFormError) as exc:
        _frame("(vp-frame x :cs ())")
    assert exc.value.code == "missing-gs"


def test_non_integer_index():
    with pytest.raises(FrameFormError) as exc:
        _frame("(vp-frame x :cs ((np two)) :gs (:subject 1))")
    assert exc.value.code == "non-integer-index"


def test_attested_frames_validate_clean():
    for text in (RAISING_FRAME, CONTROL_FRAME, SENTENTIAL_FRAME):
        assert validate_frame(_frame(text)) == []


def test_control_subject_with_unfilled_subject():
    frame = _frame(CONTROL_FRAME)
    frame.gs.subject = None
    # exactly the specific diagnosis; the generic unfilled-subject rule
    # stands down when control-subject already explains the problem
    assert [d.code for d in validate_frame(frame)] == ["control-subject-mismatch"]


def test_raising_subject_with_filled_subject():
    frame = _frame(RAISING_FRAME)
    frame.gs.subject = 1
    assert [d.code for d in validate_frame(frame)] == ["raising-subject-filled"]


def test_duplicate_cs_index():
    frame = _frame('(vp-frame x :cs ((np 2) (pp 2)) :gs (:subject 1 :comp 2) :ex "e")')
    assert [d.code for d in validate_frame(frame)] == ["duplicate-cs-index"]


def test_control_and_raising_conflict():
    frame = _frame(CONTROL_FRAME)
    frame.features.append(FrameFeature("raising", "subject"))
    # the conflict alone: subject-shape checks are moot until resolved
    assert [d.code for d in validate_frame(frame)] == ["control-raising-conflict"]


def test_unfilled_subject_requires_raising():
    frame = _frame('(vp-frame x :cs ((np 2)) :gs (:subject () :comp 2) :ex "e")')
    assert [d.code for d in validate_frame(frame)] == ["unfilled-subject-without-raising"]


def test_reserved_cs_index():
    frame = _frame('(vp-frame x :cs ((np 1)) :gs (:subject 1) :ex "e")')
    assert "reserved-cs-index" in [d.code for d in validate_frame(frame)]


def test_requires_pval_default_heuristic():
    assert default_requires_pval("pp")
    assert default_requires_pval("np-pp")
    assert default_requires_pval("p-ing-sc")
    assert default_requires_pval("part-np-pp")
    assert not default_requires_pval("np")
    assert not default_requires_pval("intrans")
    assert not default_requires_pval("np-as-np")


def test_requires_pval_override():
    frame = _frame('(vp-frame pp :cs ((pp 2)) :gs (:subject 1 :comp 2) :requires-pval false)')
    assert frame.requires_pval is False


def test_duplicate_frame_key_rejected():
    with pytest.raises(FrameFormError) as exc:
        _frame('(vp-frame x :cs () :cs () :gs (:subject 1))')
    assert exc.value.code == "duplicate-frame-key"


def test_registry_duplicate_frame_diagnostic():
    text = '(vp-frame np :cs ((np 2)) :gs (:subject 1 :obj 2))\n' * 2
    registry, diags = registry_from_text(text)
    assert len(registry) == 1
    assert [d.code for d in diags] == ["duplicate-frame"]


def test_default_registry_is_clean():
    registry = default_registry()
    assert len(registry) == 10
    for frame in registry:
        assert validate_frame(frame) == []
    for name in ("np-pp", "np", "intrans", "pp", "p-ing-sc", "that-s", "np-as-np"):
        assert registry.get("vp-frame", name) is not None
    assert registry.get("vp-frame", "pp").requires_pval
    assert not registry.get("vp-frame", "np").requires_pval


def test_validation_does_not_mutate(registry):
    before = copy.deepcopy(list(registry))
    for frame in registry:
        validate_frame(frame)
    assert list(registry) == before
