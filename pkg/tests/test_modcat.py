import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from collagekit.base import QuantaloidBase, Verdict, boolean_quantale
from collagekit.corpus import module_chain, nonempty_profunctor
from collagekit.enriched import emodule_to_profunctor, fincat_to_ecat, hat_cat, hat_loose, profunctor_to_emodule, validate
from collagekit.modcat import (
    ModBase,
    adjunction_check,
    enum_efunctors,
    find_tightening,
    is_equivalence,
    mod_associator,
    mod_compose,
    mod_id,
    mod_unitors,
    modcell_eq,
    modcell_id,
    modcell_vcompose,
    pentagon_check,
    representable,
    representable_adjunction,
    triangle_check,
)
from collagekit.oracle import parallel_pair, prof_compose_coend, profunctor_bijection, random_category, walking_arrow

BOOL = QuantaloidBase(boolean_quantale())


@given(st.integers(0, 10_000))
def test_module_composite_matches_the_coend(seed):
    rng = random.Random(seed)
    K, L, M = (random_category(rng, 3, 8) for _ in range(3))
    P, Q = nonempty_profunctor(rng, K, L), nonempty_profunctor(rng, L, M)
    A, B, C = (fincat_to_ecat(X) for X in (K, L, M))
    composite = mod_compose(profunctor_to_emodule(Q, B, C), profunctor_to_emodule(P, A, B)).composite
    assert validate(composite).ok
    coend, _ = prof_compose_coend(Q, P)
    assert profunctor_bijection(coend, emodule_to_profunctor(composite, K, M)) is not None


@pytest.mark.parametrize("kind", ["singleton", "finite", "boolean"])
@pytest.mark.parametrize("seed", [0, 1])
def test_pentagon_and_triangle(kind, seed):
    R, S, T, U = module_chain(seed, kind)
    assert pentagon_check(R, S, T, U)
    assert triangle_check(R, S)


@pytest.mark.parametrize("kind", ["singleton", "boolean"])
def test_associator_and_unitors_are_invertible(kind):
    R, S, T, _ = module_chain(3, kind)
    fwd, back = mod_associator(R, S, T)
    assert modcell_eq(modcell_vcompose(back, fwd), modcell_id(fwd.src))
    assert modcell_eq(modcell_vcompose(fwd, back), modcell_id(fwd.dst))
    for f, b in mod_unitors(S):
        assert modcell_eq(modcell_vcompose(b, f), modcell_id(f.src))


def test_hat_preserves_boolean_composites():
    f = BOOL.matrix(2, 3, [[True, False], [False, True], [True, True]])
    g = BOOL.matrix(3, 2, [[True, False, False], [False, False, True]])
    composite = mod_compose(hat_loose(BOOL, g), hat_loose(BOOL, f)).composite
    assert list(composite.comp.values()) == [BOOL.compose1(g, f)]


def test_representables_are_maps_and_tighten():
    A, B = fincat_to_ecat(walking_arrow()), fincat_to_ecat(parallel_pair())
    for D in enum_efunctors(A, B):
        adj = representable_adjunction(D)
        assert adjunction_check(adj.left, adj.right, adj.unit, adj.counit)
        assert find_tightening(representable(D)).verdict is Verdict.YES


def test_non_function_relation_does_not_tighten():
    f = BOOL.matrix(2, 2, [[True, True], [False, True]])
    assert find_tightening(hat_loose(BOOL, f)).verdict is Verdict.NO


def test_identity_module_is_an_equivalence():
    A = fincat_to_ecat(walking_arrow())
    assert is_equivalence(mod_id(A)).verdict is Verdict.YES


def test_proper_injection_is_not_an_equivalence():
    f = BOOL.matrix(1, 2, [[True], [False]])
    assert is_equivalence(hat_loose(BOOL, f)).verdict is Verdict.NO


def test_module_base_composes_like_modules():
    M = ModBase(BOOL)
    A = hat_cat(BOOL, 2)
    one = M.id1(A)
    assert validate(M.compose1(one, one)).ok
