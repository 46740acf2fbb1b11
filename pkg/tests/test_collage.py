import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from collagekit.base import QuantaloidBase, boolean_quantale, identity_morphism, span_to_rel
from collagekit.collage import (
    absoluteness_probe,
    certify_collage,
    collage,
    coproduct_category,
    decompose_check,
    detects_tightness,
    idempotence_probe,
    kleisli_check,
    metric_collage_demo,
    mutate_total,
    span_blocks,
)
from collagekit.corpus import fixed_bbs, kleisli_bbs, random_glue, random_spaces
from collagekit.enriched import validate
from collagekit.oracle import minplus_shortest, parallel_pair, walking_arrow

FIXED = {e.label: e for e in fixed_bbs()}


def test_corpus_inputs_are_valid():
    for e in FIXED.values():
        assert validate(e.bb).ok, e.label


def test_discrete_collage_is_the_coproduct():
    bb = FIXED["discrete-2-3"].bb
    assert collage(bb).total == coproduct_category(dict(bb.extent))


@pytest.mark.parametrize("label", ["cograph", "arrow-split", "bool-chain", "metric-pair"])
def test_collages_certify(label):
    cert = certify_collage(collage(FIXED[label].bb))
    assert cert["ok"], [c for c in cert["checks"] if not c["ok"]]


def test_mutated_collage_is_rejected():
    m = mutate_total(collage(FIXED["cograph"].bb))
    assert m is not None
    assert not certify_collage(m)["ok"]


def test_collage_of_a_split_category_recovers_it():
    r = collage(span_blocks(walking_arrow(), [[0], [1]]))
    assert len(r.total.objects) == 2
    assert validate(r.total).ok


def test_kleisli_check_one_target():
    lab, bb = kleisli_bbs()[0]
    rep = kleisli_check(collage(bb), cap=4, targets=[1])
    assert rep["verdict"] == "YES"
    assert rep["rows"][0]["modules"] == rep["rows"][0]["algebras"]


@pytest.mark.parametrize("label", ["cograph", "bool-chain"])
def test_coprojections_detect_tightness(label):
    rep = detects_tightness(collage(FIXED[label].bb), cap=3)
    assert rep["verdict"] == "YES"
    assert all(c["ok"] for c in rep["coprojections"])


@pytest.mark.parametrize("label", ["cograph", "bool-chain", "metric-pair"])
def test_matrix_round_trip(label):
    r = collage(FIXED[label].bb)
    assert decompose_check(r.total)["ok"]


def test_idempotence_on_the_cograph():
    assert idempotence_probe(FIXED["cograph"].bb)["ok"]


def test_span_to_rel_preserves_the_cograph_collage():
    r = collage(FIXED["cograph"].bb)
    assert absoluteness_probe(r, identity_morphism(r.inner))["ok"]
    assert absoluteness_probe(r, span_to_rel(r.inner, QuantaloidBase(boolean_quantale())))["ok"]


def test_morphism_from_another_base_is_not_applicable():
    r = collage(FIXED["cograph"].bb)
    rep = absoluteness_probe(r, identity_morphism(QuantaloidBase(boolean_quantale())))
    assert not rep["applicable"]


@given(st.integers(0, 10_000))
def test_metric_gluing_matches_shortest_paths(seed):
    rng = random.Random(seed)
    spaces = random_spaces(rng, rng.randint(1, 3), 3)
    glue = random_glue(rng, spaces)
    rep = metric_collage_demo(spaces, glue, 10)
    assert rep["distances"] == minplus_shortest(spaces, glue, 10)
    assert rep["valid"]


def test_metric_gluing_shortcut():
    inf = float("inf")
    spaces = [[[0, 8], [8, 0]], [[0]]]
    glue = {(0, 1): [[2], [inf]], (1, 0): [[inf, 3]]}
    rep = metric_collage_demo(spaces, glue, 10)
    assert rep["distances"][0][1] == 5  # through the other space, not 8
    assert rep["agree"]
