import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from collagekit import serialize
from collagekit.base import INF
from collagekit.corpus import bb_corpus
from collagekit.enriched import validate

CORPUS = bb_corpus(7, "smoke")


@pytest.mark.parametrize("entry", CORPUS, ids=lambda e: e.label)
def test_corpus_round_trips(entry):
    doc = serialize.to_document(entry.bb)
    text = serialize.dumps(doc)
    back = serialize.from_document(json.loads(text))
    assert back == entry.bb
    assert serialize.dumps(serialize.to_document(back)) == text


def test_extents_and_homs_round_trip(tmp_path):
    bb = CORPUS[1].bb
    for X, E in bb.extent.items():
        path = tmp_path / f"{X}.json"
        serialize.save(E, path)
        assert serialize.load(path) == E
        assert validate(serialize.load(path)).ok


@given(st.recursive(st.one_of(st.integers(-5, 5), st.booleans(), st.just(INF)), lambda c: st.lists(c, max_size=3), max_leaves=8))
def test_values_round_trip(v):
    def norm(x):
        return tuple(norm(y) for y in x) if isinstance(x, list) else x

    assert serialize.dec_value(json.loads(json.dumps(serialize.enc_value(v)))) == norm(v)


def test_documents_are_canonical():
    doc = serialize.to_document(CORPUS[0].bb)
    assert serialize.dumps(doc) == serialize.dumps(json.loads(serialize.dumps(doc)))
    assert serialize.dumps(doc).endswith("}\n")


@pytest.mark.parametrize(
    "doc",
    [
        [],
        {"schema": "nope", "version": 1},
        {"schema": "base", "version": 2},
        {"schema": "job", "version": 1, "check": "nope"},
        {"schema": "ecategory", "version": 1},
    ],
)
def test_bad_documents_are_rejected(doc):
    with pytest.raises(serialize.DocumentError):
        serialize.from_document(doc)


def test_report_envelope_carries_the_version():
    rep = serialize.report_envelope("suite", seed=7)
    assert rep["tool"].startswith("collagekit ") and rep["seed"] == 7
