"""Versioned saves, conflict detection, read-your-writes, crash safety."""

import json
import random
import threading

import pytest

from comlex.entries import Entry, SubcatSpec, lexicon_from_text
from comlex.evaluation import TaggedInstance
from comlex.store import (
    LexiconStore,
    StoreError,
    ValidationFailedError,
    VersionConflictError,
    _atomic_write_text,
)

import comlex.store as store_mod


@pytest.fixture
def store(tmp_path):
    return LexiconStore(tmp_path)


def accept_entry():
    return Entry(pos="verb", orth="accept",
                 subc=[SubcatSpec("np"), SubcatSpec("that-s"), SubcatSpec("np-as-np")])


def abandon_verb():
    return Entry(pos="verb", orth="abandon",
                 subc=[SubcatSpec("np-pp", ("to",)), SubcatSpec("np")])


def abandon_noun():
    return Entry(pos="noun", orth="abandon")


def test_save_new_entry_writes_canonical_line(store):
    version = store.save_entry("work", accept_entry(), None, "ann1")
    assert version == 1
    text = store.lexicon_path("work").read_text("utf-8")
    assert text == '(verb :orth "accept" :subc ((np) (that-s) (np-as-np)))\n'


def test_read_your_writes(store):
    store.save_entry("work", abandon_verb(), None, "ann1")
    store.save_entry("work", abandon_noun(), None, "ann1")
    hits = store.lookup("abandon")
    assert [e.pos for e in hits] == ["noun", "verb"]
    assert store.lookup("abandon", "noun") == [abandon_noun()]
    assert store.lookup("zzz") == []


def test_version_increments_per_key(store):
    assert store.save_entry("work", accept_entry(), None, "ann1") == 1
    assert store.save_entry("work", abandon_verb(), None, "ann1") == 1
    updated = accept_entry()
    updated.subc.append(SubcatSpec("pp", ("of",)))
    assert store.save_entry("work", updated, 1, "ann2") == 2
    assert store.version("work", "accept", "verb") == 2
    assert store.version("work", "abandon", "verb") == 1
    assert store.version("work", "never", "verb") == 0


def test_stale_version_conflicts(store):
    store.save_entry("work", accept_entry(), None, "ann1")
    store.save_entry("work", accept_entry(), 1, "ann1")
    with pytest.raises(VersionConflictError) as info:
        store.save_entry("work", accept_entry(), 1, "ann2")
    assert info.value.current == 2
    # creating over an existing entry conflicts too
    with pytest.raises(VersionConflictError):
        store.save_entry("work", accept_entry(), None, "ann2")
    # zero behaves like None
    assert store.save_entry("work", abandon_verb(), 0, "ann1") == 1


def test_validation_failure_leaves_file_unchanged(store):
    store.save_entry("work", accept_entry(), None, "ann1")
    before = store.lexicon_path("work").read_text("utf-8")
    bad = Entry(pos="verb", orth="explode", subc=[SubcatSpec("no-such-frame")])
    with pytest.raises(ValidationFailedError) as info:
        store.save_entry("work", bad, None, "ann1")
    assert any(d.code == "unknown-frame" for d in info.value.diagnostics)
    assert store.lexicon_path("work").read_text("utf-8") == before
    assert store.version("work", "explode", "verb") == 0


def test_reserved_name_rejected(store):
    with pytest.raises(StoreError):
        store.save_entry("frames", accept_entry(), None, "ann1")
    assert "frames" not in store.lexicon_names()


def test_audit_log_records_actions(store):
    store.save_entry("work", accept_entry(), None, "ann1")
    updated = accept_entry()
    store.save_entry("work", updated, 1, "ann2")
    log = store.audit("work")
    assert [(r["annotator"], r["action"]) for r in log] == [
        ("ann1", "create"),
        ("ann2", "update"),
    ]
    assert all(r["orth"] == "accept" and r["pos"] == "verb" for r in log)
    assert all("timestamp" in r for r in log)


def test_lookup_records_across_lexicons(store):
    store.save_entry("ann1", abandon_verb(), None, "ann1")
    store.save_entry("ann2", abandon_verb(), None, "ann2")
    store.save_entry("ann2", abandon_noun(), None, "ann2")
    records = store.lookup_records("abandon")
    assert [(r.lexicon, r.entry.pos, r.version) for r in records] == [
        ("ann2", "noun", 1),
        ("ann1", "verb", 1),
        ("ann2", "verb", 1),
    ]


def test_lexicon_names_sorted(store):
    store.save_entry("beta", accept_entry(), None, "x")
    store.save_entry("alpha", accept_entry(), None, "x")
    assert store.lexicon_names() == ["alpha", "beta"]


def test_registry_and_pdir_overrides(tmp_path):
    (tmp_path / "frames.lex").write_text(
        '(vp-frame only-frame :cs () :gs (:subject 1))\n', "utf-8"
    )
    (tmp_path / "pdir.txt").write_text("up\ndown\n", "utf-8")
    store = LexiconStore(tmp_path)
    assert store.pdir.members == ("up", "down")
    entry = Entry(pos="verb", orth="go", subc=[SubcatSpec("only-frame")])
    assert store.save_entry("work", entry, None, "x") == 1
    with pytest.raises(ValidationFailedError):
        store.save_entry("work", accept_entry(), None, "x")  # np unknown here


def test_corrupt_registry_override_raises(tmp_path):
    (tmp_path / "frames.lex").write_text("(vp-frame broken", "utf-8")
    with pytest.raises(StoreError):
        LexiconStore(tmp_path)


def test_corrupt_lexicon_file_raises(store):
    store.lexicon_path("bad").write_text("(verb :orth)", "utf-8")
    with pytest.raises(StoreError):
        store.load_lexicon("bad")


def test_instance_append_and_read(store):
    first = [TaggedInstance("i1", "abandon", "verb", "np", annotator="ann1")]
    second = [TaggedInstance("i2", "abandon", "verb", "pp", preps=("from",),
                             annotator="ann1", flag="difficult")]
    assert store.append_instances("instances", first) == 1
    assert store.append_instances("instances", second) == 2
    got = store.read_instance_file("instances")
    assert [i.id for i in got] == ["i1", "i2"]
    assert store.read_instance_file("missing") == []
    assert store.instance_names() == ["instances"]


def test_instance_duplicate_id_rejected_before_commit(store):
    inst = TaggedInstance("i1", "abandon", "verb", "np", annotator="ann1")
    store.append_instances("instances", [inst])
    before = store.instance_path("instances").read_text("utf-8")
    with pytest.raises(ValueError):
        store.append_instances("instances", [inst])
    assert store.instance_path("instances").read_text("utf-8") == before


def test_atomic_write_replaces_content(tmp_path):
    target = tmp_path / "file.txt"
    _atomic_write_text(target, "one\n")
    _atomic_write_text(target, "two\n")
    assert target.read_text("utf-8") == "two\n"
    leftovers = [p for p in tmp_path.iterdir() if p.name != "file.txt"]
    assert leftovers == []


def test_concurrent_saves_serialize(store):
    errors = []

    def hammer(annotator, orth):
        try:
            entry = Entry(pos="verb", orth=orth, subc=[SubcatSpec("np")])
            store.save_entry("work", entry, None, annotator)
        except Exception as exc:  # pragma: no cover - failure path
            errors.append(exc)

    threads = [
        threading.Thread(target=hammer, args=(f"ann{i}", f"word{i}")) for i in range(8)
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert errors == []
    lexicon = store.load_lexicon("work")
    assert len(lexicon) == 8
    meta = json.loads(store._meta_path("work").read_text("utf-8"))
    assert len(meta["audit"]) == 8


class _Crash(RuntimeError):
    pass


def test_interrupted_saves_never_corrupt(tmp_path, monkeypatch):
    """Kill the save at random points; the store must always reopen clean."""
    store = LexiconStore(tmp_path)
    rng = random.Random(99)
    words = [f"word{i}" for i in range(12)]
    shadow: dict[tuple[str, str], Entry] = {}

    frames = ["np", "pp", "np-pp", "intrans", "that-s"]

    def random_entry():
        orth = rng.choice(words)
        subc = [SubcatSpec(f, ("to", "from") if f in ("pp", "np-pp") else None)
                for f in rng.sample(frames, rng.randint(1, 3))]
        return Entry(pos="verb", orth=orth, subc=subc)

    def check_invariants():
        # both files parse; every stored entry reparses to itself
        lexicon = store.load_lexicon("work")
        text = store.lexicon_path("work")
        if text.exists():
            reparsed, diags = lexicon_from_text(text.read_text("utf-8"))
            assert not diags
            assert reparsed == lexicon
        store._load_meta("work")  # must stay valid JSON
        return lexicon

    crashed = failed_at_rename = 0
    for trial in range(100):
        entry = random_entry()
        expected = store.version("work", entry.orth, entry.pos) or None
        point = rng.randrange(3)
        calls = {"n": 0}
        real_replace = store_mod._REPLACE

        def flaky_replace(src, dst, _point=point, _calls=calls, _real=real_replace):
            # call 1 commits the lexicon, call 2 commits the meta file
            if _point == 0 and _calls["n"] == 0:
                raise _Crash("before lexicon rename")
            if _point == 1 and _calls["n"] == 1:
                raise _Crash("before meta rename")
            _calls["n"] += 1
            return _real(src, dst)

        monkeypatch.setattr(store_mod, "_REPLACE", flaky_replace)
        try:
            store.save_entry("work", entry, expected, "ann1")
            committed = True
        except _Crash:
            committed = False
            crashed += 1
            if point == 0:
                failed_at_rename += 1
        finally:
            monkeypatch.setattr(store_mod, "_REPLACE", real_replace)

        lexicon = check_invariants()
        if committed:
            shadow[entry.key] = entry
            assert lexicon.get(entry.orth, entry.pos) == entry
        elif point == 0:
            # nothing renamed: old state intact
            assert lexicon.get(entry.orth, entry.pos) == shadow.get(entry.key)
        else:
            # lexicon committed, meta crash: content updated, version stale;
            # recover by saving again at the still-current version
            assert lexicon.get(entry.orth, entry.pos) == entry
            retry = store.version("work", entry.orth, entry.pos) or None
            store.save_entry("work", entry, retry, "ann1")
            shadow[entry.key] = entry
            check_invariants()

    assert crashed > 0 and failed_at_rename > 0  # both injection points exercised
    final = store.load_lexicon("work")
    for key, entry in shadow.items():
        assert final.get(*key) == entry
