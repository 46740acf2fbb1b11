import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from collagekit.base import (
    INF,
    ArityClass,
    BaseError,
    QuantaloidBase,
    SpanBase,
    boolean_quantale,
    minplus_quantale,
    minplus_truncation,
    span_to_rel,
)

SPAN = SpanBase(ArityClass.FINITE)
BOOL = QuantaloidBase(boolean_quantale())
MINPLUS = QuantaloidBase(minplus_quantale(10))


@st.composite
def spans(draw, src=None, dst=None, max_apex=4):
    a = src if src is not None else draw(st.integers(1, 3))
    b = dst if dst is not None else draw(st.integers(1, 3))
    k = draw(st.integers(0, max_apex))
    left = draw(st.lists(st.integers(0, a - 1), min_size=k, max_size=k))
    right = draw(st.lists(st.integers(0, b - 1), min_size=k, max_size=k))
    return SPAN.span(a, b, left, right)


@st.composite
def span_chain(draw, n=3):
    objs = draw(st.lists(st.integers(1, 3), min_size=n + 1, max_size=n + 1))
    return [draw(spans(objs[i], objs[i + 1])) for i in range(n)]


def matrices(C, values):
    @st.composite
    def make(draw, src=None, dst=None):
        a = src if src is not None else draw(st.integers(1, 3))
        b = dst if dst is not None else draw(st.integers(1, 3))
        rows = [[draw(st.sampled_from(values)) for _ in range(a)] for _ in range(b)]
        return C.matrix(a, b, rows)

    return make


bool_matrices = matrices(BOOL, [False, True])
minplus_matrices = matrices(MINPLUS, [0, 1, 3, 7, 10, INF])


def pullback_count(f, g):
    # number of pairs of apex elements that agree over the middle object
    return sum(1 for p, q in itertools.product(range(len(f.data[0])), range(len(g.data[0]))) if f.data[1][p] == g.data[0][q])


@given(span_chain(2))
def test_span_composite_apex_is_the_pullback(chain):
    f, g = chain
    h = SPAN.compose1(g, f)
    assert SPAN.apex(h) == pullback_count(f, g)
    assert (h.src, h.dst) == (f.src, g.dst)


@given(span_chain(3))
def test_span_associator_is_invertible_and_natural_in_size(chain):
    f, g, h = chain
    fwd, back = SPAN.associator(f, g, h)
    assert SPAN.eq2(SPAN.vcomp(back, fwd), SPAN.id2(fwd.src1))
    assert SPAN.eq2(SPAN.vcomp(fwd, back), SPAN.id2(fwd.dst1))


@given(spans())
def test_span_unitors_are_invertible(f):
    for fwd, back in (SPAN.left_unitor(f), SPAN.right_unitor(f)):
        assert SPAN.eq2(SPAN.vcomp(back, fwd), SPAN.id2(fwd.src1))
        assert SPAN.eq2(SPAN.vcomp(fwd, back), SPAN.id2(fwd.dst1))


def test_span_rejects_out_of_range_legs():
    with pytest.raises(BaseError):
        SPAN.span(2, 2, [0, 2], [0, 0])


def _product(C, g, f):
    q = C.q
    return [[q.join_all(q.tensor(g.data[k][j], f.data[j][i]) for j in range(f.dst)) for i in range(f.src)] for k in range(g.dst)]


@given(st.data())
def test_boolean_composite_is_or_and_product(data):
    a, b, c = (data.draw(st.integers(1, 3)) for _ in range(3))
    f, g = data.draw(bool_matrices(a, b)), data.draw(bool_matrices(b, c))
    expected = [[any(g.data[k][j] and f.data[j][i] for j in range(b)) for i in range(a)] for k in range(c)]
    assert [list(r) for r in BOOL.compose1(g, f).data] == expected


@given(st.data())
def test_minplus_composite_is_truncated_min_sum(data):
    a, b, c = (data.draw(st.integers(1, 3)) for _ in range(3))
    f, g = data.draw(minplus_matrices(a, b)), data.draw(minplus_matrices(b, c))
    expected = [[min((g.data[k][j] + f.data[j][i] for j in range(b)), default=INF) for i in range(a)] for k in range(c)]
    expected = [[INF if v > 10 else v for v in row] for row in expected]
    assert [list(r) for r in MINPLUS.compose1(g, f).data] == expected
    assert [list(r) for r in MINPLUS.compose1(g, f).data] == _product(MINPLUS, g, f)


@given(st.data())
def test_quantaloid_composition_is_associative(data):
    dims = [data.draw(st.integers(1, 3)) for _ in range(4)]
    f, g, h = (data.draw(minplus_matrices(dims[i], dims[i + 1])) for i in range(3))
    assert MINPLUS.compose1(h, MINPLUS.compose1(g, f)) == MINPLUS.compose1(MINPLUS.compose1(h, g), f)


@given(spans())
def test_tight_spans_are_functions_with_right_adjoints(f):
    if not SPAN.is_tight(f):
        return
    fstar, unit, counit = SPAN.right_adjoint(f)
    assert unit.src1 == SPAN.id1(f.src) and counit.dst1 == SPAN.id1(f.dst)


@given(span_chain(2))
def test_span_to_rel_preserves_composites(chain):
    f, g = chain
    F = span_to_rel(SPAN, BOOL)
    assert F.hom1(SPAN.compose1(g, f)) == BOOL.compose1(F.hom1(g), F.hom1(f))


@given(st.data())
def test_minplus_truncation_preserves_composites(data):
    F = minplus_truncation(10, 5)
    a, b, c = (data.draw(st.integers(1, 3)) for _ in range(3))
    f, g = data.draw(minplus_matrices(a, b)), data.draw(minplus_matrices(b, c))
    assert F.hom1(MINPLUS.compose1(g, f)) == F.dst.compose1(F.hom1(g), F.hom1(f))


def test_truncation_must_lower_the_cap():
    with pytest.raises(BaseError):
        minplus_truncation(5, 10)


@given(span_chain(2))
def test_coproduct_of_spans_concatenates_apexes(chain):
    f, _ = chain
    total, injections = SPAN.coproduct([f, f], f.src, f.dst)[:2]
    assert SPAN.apex(total) == 2 * SPAN.apex(f)
    assert len(injections) == 2
