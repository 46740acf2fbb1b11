import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from collagekit.base import ArityClass, QuantaloidBase, SpanBase, boolean_quantale
from collagekit.enriched import (
    ECategory,
    ecat_to_fincat,
    efun_compose,
    efun_id,
    efunctor_to_finfunctor,
    emodule_to_profunctor,
    enum_singleton_functors,
    fincat_to_ecat,
    fincat_to_finite_ecat,
    finfunctor_to_efunctor,
    hat_cat,
    hat_loose,
    profunctor_to_emodule,
    validate,
)
from collagekit.oracle import enum_functors, parallel_pair, random_category, random_profunctor, walking_arrow

BOOL = QuantaloidBase(boolean_quantale())


def categories():
    return st.integers(0, 10_000).map(lambda s: random_category(random.Random(s), 3, 8))


@given(categories())
def test_finite_category_round_trips_through_spans(K):
    A = fincat_to_ecat(K)
    assert validate(A).ok
    back = ecat_to_fincat(A)
    assert back.n_objects == K.n_objects and len(back.mor) == len(K.mor)


@given(categories())
def test_finite_arity_encoding_is_valid(K):
    assert validate(fincat_to_finite_ecat(K)).ok


@given(st.integers(0, 10_000))
def test_profunctor_round_trips_through_modules(seed):
    rng = random.Random(seed)
    K, L = random_category(rng, 3, 6), random_category(rng, 3, 6)
    P = random_profunctor(rng, K, L)
    T = profunctor_to_emodule(P, fincat_to_ecat(K), fincat_to_ecat(L))
    assert validate(T).ok
    Q = emodule_to_profunctor(T, K, L)
    assert Q.check()
    assert len(Q.elems) == len(P.elems)


def test_functors_match_the_oracle_count():
    K, L = walking_arrow(), parallel_pair()
    A, B = fincat_to_ecat(K), fincat_to_ecat(L)
    mine = enum_singleton_functors(A, B)
    assert len(mine) == len(enum_functors(K, L))
    for D in mine:
        assert validate(D).ok
        F = efunctor_to_finfunctor(D, K, L)
        assert F.check()
        assert validate(finfunctor_to_efunctor(F, A, B)).ok


def test_identity_functor_is_a_unit():
    A = fincat_to_ecat(parallel_pair())
    one = efun_id(A)
    assert validate(efun_compose(one, one)).ok


def test_mutated_composition_is_rejected():
    A = fincat_to_ecat(parallel_pair())
    key = next(k for k, v in A.comp.items() if len(v.data) > 1 and len(set(v.data)) > 1)
    cell = A.comp[key]
    bad = dict(A.comp)
    bad[key] = type(cell)(cell.src1, cell.dst1, tuple(reversed(cell.data)))
    B = ECategory(A.base, A.objects, A.extent, A.hom, bad, A.unit, "broken")
    rep = validate(B)
    assert not rep.ok


@given(st.integers(1, 3))
def test_hat_category_is_valid(n):
    assert validate(hat_cat(BOOL, n)).ok
    assert validate(hat_cat(SpanBase(ArityClass.FINITE), n)).ok


def test_hat_loose_of_a_relation_is_a_module():
    f = BOOL.matrix(2, 2, [[True, False], [True, True]])
    assert validate(hat_loose(BOOL, f)).ok
