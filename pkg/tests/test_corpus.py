import json
import shutil

import pytest

from polyforge.corpus import TAGS, CorpusError, default_corpus_dir, load_corpus


def test_ids_unique_and_sorted(corpus_entries):
    ids = [e.id for e in corpus_entries]
    assert ids == sorted(set(ids))


def test_required_members(corpus_entries):
    ids = {e.id for e in corpus_entries}
    assert {"cd2", "cd3", "cd4", "cd5", "t20", "t40", "t80", "t22"} <= ids
    assert any(e.rank == 4 and not e.id.startswith("cd") for e in corpus_entries)
    assert any(e.role == "degenerate" for e in corpus_entries)


def test_every_expectation_is_tagged(corpus_entries):
    for e in corpus_entries:
        assert e.expected
        for x in e.expected.values():
            assert x.tag in TAGS and x.basis


def test_untagged_expectation_is_refused(tmp_path):
    src = default_corpus_dir()
    for f in src.iterdir():
        shutil.copy(f, tmp_path / f.name)
    meta = json.loads((tmp_path / "corpus.json").read_text())
    meta["entries"][0]["expected"]["order"] = meta["entries"][0]["expected"]["order"]["value"]
    (tmp_path / "corpus.json").write_text(json.dumps(meta))
    with pytest.raises(CorpusError):
        load_corpus(tmp_path)


def test_unknown_tag_is_refused(tmp_path):
    src = default_corpus_dir()
    for f in src.iterdir():
        shutil.copy(f, tmp_path / f.name)
    meta = json.loads((tmp_path / "corpus.json").read_text())
    meta["entries"][1]["expected"]["order"]["tag"] = "GUESS"
    (tmp_path / "corpus.json").write_text(json.dumps(meta))
    with pytest.raises(CorpusError):
        load_corpus(tmp_path)


def test_duplicate_id_is_refused(tmp_path):
    src = default_corpus_dir()
    for f in src.iterdir():
        shutil.copy(f, tmp_path / f.name)
    meta = json.loads((tmp_path / "corpus.json").read_text())
    meta["entries"].append(meta["entries"][0])
    (tmp_path / "corpus.json").write_text(json.dumps(meta))
    with pytest.raises(CorpusError):
        load_corpus(tmp_path)


def test_orders_and_types_match_expectations(corpus_entries, corpus_groups):
    for e in corpus_entries:
        S = corpus_groups[e.id]
        assert S.order() == e.expected["order"].value, e.id
        assert list(S.schlafli.entries) == e.expected["schlafli"].value, e.id
        assert S.rank == e.rank


def test_corpus_orders_are_two_powers_within_range(corpus_groups):
    for S in corpus_groups.values():
        n = S.order().bit_length() - 1
        assert S.order() == 2**n and n <= 12
        assert 2 <= S.rank <= 5
