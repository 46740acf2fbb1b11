import ast
import random
from pathlib import Path

from hypothesis import given
from hypothesis import strategies as st

import collagekit
from collagekit.base import INF
from collagekit.oracle import (
    cat1_equiv_check,
    cyclic_monoid,
    enum_functors,
    hom_profunctor,
    minplus_shortest,
    prof_compose_coend,
    profunctor_bijection,
    random_category,
    random_profunctor,
    walking_arrow,
)


def test_oracle_does_not_import_the_colimit_code():
    tree = ast.parse(Path(collagekit.__file__).with_name("oracle.py").read_text())
    names = set()
    for node in ast.walk(tree):
        if isinstance(node, ast.ImportFrom):
            names.add(node.module or "")
        elif isinstance(node, ast.Import):
            names.update(a.name for a in node.names)
    assert not any(n.split(".")[-1] in ("base", "modcat", "enriched", "collage") for n in names)


@given(st.integers(0, 10_000))
def test_random_categories_satisfy_the_axioms(seed):
    K = random_category(random.Random(seed), 4, 12)
    K.check()  # raises on a broken axiom
    assert K.n_objects <= 4 and len(K.mor) <= 12


@given(st.integers(0, 10_000))
def test_hom_profunctor_is_a_unit_for_coend_composition(seed):
    rng = random.Random(seed)
    K, L = random_category(rng, 3, 8), random_category(rng, 3, 8)
    P = random_profunctor(rng, K, L)
    composite, _ = prof_compose_coend(hom_profunctor(L), P)
    assert profunctor_bijection(composite, P) is not None


def test_functors_out_of_the_arrow():
    K = walking_arrow()
    # functors arrow -> arrow: constant at either end, or the identity
    assert len(enum_functors(K, K)) == 3


def test_cyclic_monoid_endofunctors():
    K = cyclic_monoid()
    assert len(enum_functors(K, K)) == 2
    assert cat1_equiv_check(K, K)["ok"]


def test_minplus_shortest_two_points():
    spaces = [[[0]], [[0]]]
    glue = {(0, 1): [[3]], (1, 0): [[INF]]}
    assert minplus_shortest(spaces, glue, 10) == [[0, 3], [INF, 0]]


def test_minplus_shortest_relaxes_through_the_other_space():
    spaces = [[[0, 9], [9, 0]], [[0]]]
    glue = {(0, 1): [[1], [INF]], (1, 0): [[INF, 2]]}
    table = minplus_shortest(spaces, glue, 10)
    assert table[0][1] == 3
    assert table[1][0] == 9


def test_minplus_shortest_truncates_at_the_cap():
    spaces = [[[0, 6], [6, 0]], [[0]]]
    glue = {(0, 1): [[6], [INF]]}
    table = minplus_shortest(spaces, glue, 10)
    assert table[1][2] == INF  # 6 + 6 exceeds the cap
