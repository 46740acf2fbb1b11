"""Finite computational bases.

A base is a bicategory whose hom-categories are finite and decidable and
which has reflexive coequalizers and small coproducts in each hom, preserved
by whiskering.  Two concrete families are provided: spans of finite sets and
matrices over a finite quantale (which covers relations and truncated
min-plus distances).  Every base also carries a tightness predicate, making
it an equipment.

Composition is written ``compose1(g, f)`` for ``f: a -> b`` and ``g: b -> c``.
"""
from __future__ import annotations

import enum
import functools
import itertools
import math
from dataclasses import dataclass
from typing import Any, Callable, Iterator, Sequence

from scipy.cluster.hierarchy import DisjointSet


class ArityClass(enum.Enum):
    SINGLETON = "singleton"
    FINITE = "finite"

    def allows(self, n: int) -> bool:
        return n == 1 if self is ArityClass.SINGLETON else n >= 0


class Verdict(enum.Enum):
    YES = "YES"
    NO = "NO"
    UNKNOWN = "UNKNOWN"


class BaseError(ValueError):
    """Raised on boundary mismatches and malformed cells."""


def _cached_hash(self):
    # cells are hashed constantly by the composition caches
    h = self.__dict__.get("_hash")
    if h is None:
        h = hash(tuple(getattr(self, f) for f in self.__dataclass_fields__))
        object.__setattr__(self, "_hash", h)
    return h


@dataclass(frozen=True)
class Hom1:
    src: Any
    dst: Any
    data: Any

    __hash__ = _cached_hash


@dataclass(frozen=True)
class Hom2:
    src1: Any
    dst1: Any
    data: Any = None

    __hash__ = _cached_hash


@dataclass(frozen=True)
class Comp:
    """Formal composite ``g o f`` used when rebracketing."""

    g: Any
    f: Any


class Base:
    """Interface shared by every base.

    Subclasses implement the primitive operations; the helpers at the bottom
    of this module (``hcomp``, ``vseq``, ``rebracket``, ``Chain``) are written
    once against this interface.
    """

    kind = "ABSTRACT"
    arity = ArityClass.FINITE
    finite_homs = False

    # objects
    def check_obj(self, a) -> None:
        raise NotImplementedError

    def enum_objects(self, cap: int) -> list:
        raise NotImplementedError

    # 1-cells
    def id1(self, a):
        raise NotImplementedError

    def compose1(self, g, f):
        raise NotImplementedError

    def initial(self, a, b):
        fs, _ = self.coproduct([], a, b)
        return fs

    def is_initial(self, f) -> bool:
        raise NotImplementedError

    # 2-cells
    def id2(self, f):
        raise NotImplementedError

    def vcomp(self, beta, alpha):
        """``beta`` after ``alpha``."""
        raise NotImplementedError

    def whisker_left(self, k, alpha):
        """``k o alpha``."""
        raise NotImplementedError

    def whisker_right(self, alpha, k):
        """``alpha o k``."""
        raise NotImplementedError

    def associator(self, f, g, h):
        """Pair ``((h o g) o f => h o (g o f), inverse)``."""
        raise NotImplementedError

    def left_unitor(self, f):
        """Pair ``(1 o f => f, inverse)``."""
        raise NotImplementedError

    def right_unitor(self, f):
        """Pair ``(f o 1 => f, inverse)``."""
        raise NotImplementedError

    def eq2(self, a, b) -> bool:
        raise NotImplementedError

    def inverse2(self, a):
        raise NotImplementedError

    # colimits
    def refl_coequalizer(self, f, g):
        raise NotImplementedError

    def coproduct(self, fs, a, b):
        raise NotImplementedError

    def descend(self, es, hs, y, z):
        """Factor ``hs[i]`` through a jointly epimorphic family ``es[i]: X_i => y``.

        Returns the unique ``k: y => z`` with ``k . es[i] == hs[i]``, or None
        when the family does not factor.
        """
        raise NotImplementedError

    def from_initial(self, x, z):
        return self.descend([], [], x, z)

    # search
    def iso1(self, f, g):
        raise NotImplementedError

    def iso1_all(self, f, g, cap: int = 10_000) -> list:
        raise NotImplementedError

    def enum_hom2(self, f, g) -> Iterator:
        raise NotImplementedError

    def enum_hom1(self, a, b, cap: int) -> Iterator:
        raise NotImplementedError

    def enum_extensions(self, e, h, g) -> Iterator:
        """All ``k: e.dst1 => g`` with ``k . e == h``."""
        for k in self.enum_hom2(e.dst1, g):
            if self.eq2(self.vcomp(k, e), h):
                yield k

    def enum_tight(self, a, b) -> Iterator:
        raise NotImplementedError

    # equipment
    def is_tight(self, f) -> bool:
        raise NotImplementedError

    def tighten(self, f):
        raise NotImplementedError

    def right_adjoint(self, f):
        """For tight ``f`` return ``(f*, unit: 1 => f* o f, counit: f o f* => 1)``."""
        raise NotImplementedError

    def size(self, f) -> int:
        """Carrier size used for search caps."""
        return 1


# ---------------------------------------------------------------------------
# spans of finite sets


@functools.lru_cache(maxsize=1 << 16)
def _span_pairs(left_of_g: tuple, right_of_f: tuple) -> tuple:
    # pullback of f's right leg against g's left leg, lexicographic
    by_left: dict[int, list[int]] = {}
    for q, v in enumerate(left_of_g):
        by_left.setdefault(v, []).append(q)
    return tuple((p, q) for p, v in enumerate(right_of_f) for q in by_left.get(v, ()))


@functools.lru_cache(maxsize=1 << 16)
def _span_pair_index(left_of_g: tuple, right_of_f: tuple) -> dict:
    return {pq: i for i, pq in enumerate(_span_pairs(left_of_g, right_of_f))}


@functools.lru_cache(maxsize=1 << 16)
def _span_compose(g: Hom1, f: Hom1) -> Hom1:
    pairs = _span_pairs(g.data[0], f.data[1])
    left = tuple(f.data[0][p] for p, _ in pairs)
    right = tuple(g.data[1][q] for _, q in pairs)
    return Hom1(f.src, g.dst, (left, right))


class SpanBase(Base):
    """Spans of finite sets.  Object ``n`` is the set ``{0, ..., n-1}``.

    A 1-cell ``n -> m`` stores ``(left, right)`` with ``left[p] < n`` and
    ``right[p] < m``; the apex is ``range(len(left))``.  A 2-cell stores the
    apex function as a tuple.
    """

    kind = "SPAN_FINSET"
    finite_homs = False

    def __init__(self, arity: ArityClass = ArityClass.FINITE):
        self.arity = arity

    def __repr__(self):
        return f"SpanBase({self.arity.value})"

    def __eq__(self, other):
        return isinstance(other, SpanBase) and other.arity == self.arity

    def __hash__(self):
        return hash(("span", self.arity))

    def check_obj(self, a):
        if not isinstance(a, int) or a < 0:
            raise BaseError(f"not a finite set size: {a!r}")

    def enum_objects(self, cap):
        return list(range(cap + 1))

    def span(self, src: int, dst: int, left: Sequence[int], right: Sequence[int]) -> Hom1:
        left, right = tuple(left), tuple(right)
        if len(left) != len(right):
            raise BaseError("legs of different length")
        if any(not 0 <= v < src for v in left) or any(not 0 <= v < dst for v in right):
            raise BaseError("leg out of range")
        return Hom1(src, dst, (left, right))

    @staticmethod
    def apex(f: Hom1) -> int:
        return len(f.data[0])

    def size(self, f):
        return self.apex(f)

    def cell(self, src1: Hom1, dst1: Hom1, fn: Sequence[int]) -> Hom2:
        fn = tuple(fn)
        if (src1.src, src1.dst) != (dst1.src, dst1.dst):
            raise BaseError("2-cell between 1-cells with different boundaries")
        if len(fn) != self.apex(src1):
            raise BaseError("2-cell function has wrong length")
        (l0, r0), (l1, r1) = src1.data, dst1.data
        for p, q in enumerate(fn):
            if not 0 <= q < len(l1) or l1[q] != l0[p] or r1[q] != r0[p]:
                raise BaseError("2-cell does not commute with the legs")
        return Hom2(src1, dst1, fn)

    def id1(self, a):
        self.check_obj(a)
        return Hom1(a, a, (tuple(range(a)), tuple(range(a))))

    @staticmethod
    def _pairs(g: Hom1, f: Hom1) -> tuple[tuple[int, int], ...]:
        return _span_pairs(g.data[0], f.data[1])

    @staticmethod
    def _pair_index(g: Hom1, f: Hom1) -> dict:
        return _span_pair_index(g.data[0], f.data[1])

    def compose1(self, g, f):
        if f.dst != g.src:
            raise BaseError(f"cannot compose {f.src}->{f.dst} with {g.src}->{g.dst}")
        return _span_compose(g, f)

    def is_initial(self, f):
        return self.apex(f) == 0

    def id2(self, f):
        return Hom2(f, f, tuple(range(self.apex(f))))

    def vcomp(self, beta, alpha):
        if alpha.dst1 != beta.src1:
            raise BaseError("vertical composite of non-composable 2-cells")
        return Hom2(alpha.src1, beta.dst1, tuple(beta.data[q] for q in alpha.data))

    def whisker_left(self, k, alpha):
        src, dst = self.compose1(k, alpha.src1), self.compose1(k, alpha.dst1)
        index = self._pair_index(k, alpha.dst1)
        fn = tuple(index[(alpha.data[p], q)] for p, q in self._pairs(k, alpha.src1))
        return Hom2(src, dst, fn)

    def whisker_right(self, alpha, k):
        src, dst = self.compose1(alpha.src1, k), self.compose1(alpha.dst1, k)
        index = self._pair_index(alpha.dst1, k)
        fn = tuple(index[(p, alpha.data[q])] for p, q in self._pairs(alpha.src1, k))
        return Hom2(src, dst, fn)

    def associator(self, f, g, h):
        hg = self.compose1(h, g)
        gf = self.compose1(g, f)
        left = self.compose1(hg, f)
        right = self.compose1(h, gf)
        hg_pairs = self._pairs(h, g)
        gf_index = self._pair_index(g, f)
        right_index = self._pair_index(h, gf)
        fwd = []
        for p, r in self._pairs(hg, f):
            q, s = hg_pairs[r]
            fwd.append(right_index[(gf_index[(p, q)], s)])
        fwd = Hom2(left, right, tuple(fwd))
        return fwd, self.inverse2(fwd)

    def left_unitor(self, f):
        # the pullback with an identity on the right is already in f's order
        one_f = self.compose1(self.id1(f.dst), f)
        fwd = Hom2(one_f, f, tuple(p for p, _ in self._pairs(self.id1(f.dst), f)))
        return fwd, self.inverse2(fwd)

    def right_unitor(self, f):
        f_one = self.compose1(f, self.id1(f.src))
        fwd = Hom2(f_one, f, tuple(q for _, q in self._pairs(f, self.id1(f.src))))
        return fwd, self.inverse2(fwd)

    def eq2(self, a, b):
        return a.src1 == b.src1 and a.dst1 == b.dst1 and a.data == b.data

    def inverse2(self, a):
        n = self.apex(a.dst1)
        if len(a.data) != n or sorted(a.data) != list(range(n)):
            return None
        inv = [0] * n
        for p, q in enumerate(a.data):
            inv[q] = p
        return Hom2(a.dst1, a.src1, tuple(inv))

    def refl_coequalizer(self, f, g):
        if (f.src1, f.dst1) != (g.src1, g.dst1):
            raise BaseError("coequalizer of non-parallel 2-cells")
        q = f.dst1
        n = self.apex(q)
        classes = DisjointSet(range(n))
        for a, b in zip(f.data, g.data):
            classes.merge(a, b)
        reps = sorted(min(s) for s in classes.subsets())
        slot = {r: i for i, r in enumerate(reps)}
        fn = tuple(slot[min(classes.subset(p))] for p in range(n))
        left = tuple(q.data[0][r] for r in reps)
        right = tuple(q.data[1][r] for r in reps)
        quotient = Hom1(q.src, q.dst, (left, right))
        return quotient, self.cell(q, quotient, fn)

    def coproduct(self, fs, a, b):
        if any((f.src, f.dst) != (a, b) for f in fs):
            raise BaseError("coproduct of 1-cells with different boundaries")
        left = tuple(v for f in fs for v in f.data[0])
        right = tuple(v for f in fs for v in f.data[1])
        total = Hom1(a, b, (left, right))
        injections, offset = [], 0
        for f in fs:
            n = self.apex(f)
            injections.append(Hom2(f, total, tuple(range(offset, offset + n))))
            offset += n
        return total, injections

    def descend(self, es, hs, y, z):
        k: list[int | None] = [None] * self.apex(y)
        for e, h in zip(es, hs):
            for p, t in enumerate(e.data):
                v = h.data[p]
                if k[t] is None:
                    k[t] = v
                elif k[t] != v:
                    return None
        if any(v is None for v in k):
            return None
        try:
            return self.cell(y, z, k)
        except BaseError:
            return None

    def _fibers(self, f):
        out: dict[tuple[int, int], list[int]] = {}
        for p, lr in enumerate(zip(*f.data)):
            out.setdefault(lr, []).append(p)
        return out

    def iso1(self, f, g):
        if (f.src, f.dst) != (g.src, g.dst) or self.apex(f) != self.apex(g):
            return None
        ff, gf = self._fibers(f), self._fibers(g)
        if {k: len(v) for k, v in ff.items()} != {k: len(v) for k, v in gf.items()}:
            return None
        fn = [0] * self.apex(f)
        for key, ps in ff.items():
            for p, q in zip(ps, gf[key]):
                fn[p] = q
        fwd = Hom2(f, g, tuple(fn))
        return fwd, self.inverse2(fwd)

    def iso1_all(self, f, g, cap=10_000):
        if self.iso1(f, g) is None:
            return []
        ff, gf = self._fibers(f), self._fibers(g)
        keys = sorted(ff)
        out = []
        for choice in itertools.product(*(itertools.permutations(gf[k]) for k in keys)):
            fn = [0] * self.apex(f)
            for key, perm in zip(keys, choice):
                for p, q in zip(ff[key], perm):
                    fn[p] = q
            out.append(Hom2(f, g, tuple(fn)))
            if len(out) >= cap:
                break
        return out

    def enum_hom2(self, f, g):
        if (f.src, f.dst) != (g.src, g.dst):
            return
        gf = self._fibers(g)
        options = [gf.get(lr, []) for lr in zip(*f.data)] if self.apex(f) else []
        for fn in itertools.product(*options):
            yield Hom2(f, g, tuple(fn))

    def enum_extensions(self, e, h, g):
        f = e.dst1
        if (f.src, f.dst) != (g.src, g.dst) or h.dst1 != g:
            return
        fixed: dict[int, int] = {}
        for p, q in enumerate(e.data):
            if fixed.setdefault(q, h.data[p]) != h.data[p]:
                return
        gf = self._fibers(g)
        options = []
        for q, lr in enumerate(zip(*f.data)):
            if q in fixed:
                if fixed[q] not in gf.get(lr, ()):
                    return
                options.append((fixed[q],))
            else:
                options.append(gf.get(lr, []))
        for fn in itertools.product(*options):
            yield Hom2(f, g, tuple(fn))

    def enum_hom1(self, a, b, cap):
        cells = list(itertools.product(range(a), range(b)))
        for n in range(cap + 1):
            for combo in itertools.combinations_with_replacement(cells, n):
                yield Hom1(a, b, (tuple(c[0] for c in combo), tuple(c[1] for c in combo)))

    def enum_tight(self, a, b):
        for fn in itertools.product(range(b), repeat=a):
            yield Hom1(a, b, (tuple(range(a)), tuple(fn)))

    def is_tight(self, f):
        return sorted(f.data[0]) == list(range(f.src))

    def tighten(self, f):
        if not self.is_tight(f):
            return None
        fn = [0] * f.src
        for a, v in zip(*f.data):
            fn[a] = v
        return Hom1(f.src, f.dst, (tuple(range(f.src)), tuple(fn)))

    def right_adjoint(self, f):
        if not self.is_tight(f):
            raise BaseError("right adjoints are provided for tight spans only")
        fs = Hom1(f.dst, f.src, (f.data[1], f.data[0]))
        fsf = self.compose1(fs, f)
        where = {a: p for p, a in enumerate(f.data[0])}
        index = {pq: i for i, pq in enumerate(self._pairs(fs, f))}
        unit = self.cell(self.id1(f.src), fsf, [index[(where[a], where[a])] for a in range(f.src)])
        ffs = self.compose1(f, fs)
        counit = self.cell(ffs, self.id1(f.dst), [f.data[1][p] for _, p in self._pairs(f, fs)])
        return fs, unit, counit


# ---------------------------------------------------------------------------
# finite quantales and their matrix bases


class Quantale:
    """A finite quantale given by join and tensor tables.

    All laws are checked exhaustively on construction; a violation raises
    ``BaseError``.
    """

    def __init__(self, elements, join, tensor, unit, name: str = "Q"):
        self.elements = tuple(elements)
        self.join_table = dict(join)
        self.tensor_table = dict(tensor)
        self.unit = unit
        self.name = name
        self._check()
        self.bottom = next(e for e in self.elements if all(self.join(e, x) == x for x in self.elements))
        top = self.bottom
        for e in self.elements:
            top = self.join(top, e)
        self.top = top

    @classmethod
    def from_ops(cls, elements, join: Callable, tensor: Callable, unit, name="Q"):
        els = tuple(elements)
        return cls(
            els,
            {(a, b): join(a, b) for a in els for b in els},
            {(a, b): tensor(a, b) for a in els for b in els},
            unit,
            name,
        )

    def join(self, a, b):
        return self.join_table[(a, b)]

    def tensor(self, a, b):
        return self.tensor_table[(a, b)]

    def leq(self, a, b) -> bool:
        return self.join(a, b) == b

    def join_all(self, items):
        out = self.bottom
        for x in items:
            out = self.join(out, x)
        return out

    def _check(self):
        els = self.elements
        if len(set(els)) != len(els):
            raise BaseError("repeated quantale elements")
        if self.unit not in els:
            raise BaseError("unit is not an element")
        for a in els:
            if self.join(a, a) != a:
                raise BaseError(f"join not idempotent at {a!r}")
            for b in els:
                if self.join(a, b) != self.join(b, a):
                    raise BaseError("join not commutative")
                for c in els:
                    if self.join(self.join(a, b), c) != self.join(a, self.join(b, c)):
                        raise BaseError("join not associative")
                    if self.tensor(self.tensor(a, b), c) != self.tensor(a, self.tensor(b, c)):
                        raise BaseError("tensor not associative")
                    if self.tensor(a, self.join(b, c)) != self.join(self.tensor(a, b), self.tensor(a, c)):
                        raise BaseError("tensor does not distribute on the left")
                    if self.tensor(self.join(b, c), a) != self.join(self.tensor(b, a), self.tensor(c, a)):
                        raise BaseError("tensor does not distribute on the right")
            if self.tensor(self.unit, a) != a or self.tensor(a, self.unit) != a:
                raise BaseError("unit law fails")
        bottoms = [e for e in els if all(self.join(e, x) == x for x in els)]
        if len(bottoms) != 1:
            raise BaseError("no bottom element")
        bot = bottoms[0]
        if any(self.tensor(bot, a) != bot or self.tensor(a, bot) != bot for a in els):
            raise BaseError("tensor does not preserve the empty join")

    def __repr__(self):
        return f"Quantale({self.name}, {len(self.elements)} elements)"

    def __eq__(self, other):
        return (
            isinstance(other, Quantale)
            and self.elements == other.elements
            and self.join_table == other.join_table
            and self.tensor_table == other.tensor_table
            and self.unit == other.unit
        )

    def __hash__(self):
        return hash((self.name, self.elements))


def boolean_quantale() -> Quantale:
    return Quantale.from_ops((False, True), lambda a, b: a or b, lambda a, b: a and b, True, "bool")


INF = math.inf


def minplus_quantale(cap: int = 10) -> Quantale:
    """Distances ``0..cap`` plus infinity; join is min, tensor is truncated sum."""

    def add(a, b):
        s = a + b
        return INF if s > cap else s

    els = tuple(range(cap + 1)) + (INF,)
    return Quantale.from_ops(els, min, add, 0, f"minplus{cap}")


def chain_frame(n: int) -> Quantale:
    """The chain ``0 < 1 < ... < n-1`` with meet as tensor."""
    return Quantale.from_ops(range(n), max, min, n - 1, f"chain{n}")


def powerset_quantale(table: dict, units: int, name: str = "P(M)") -> Quantale:
    """Subsets of a finite monoid with pointwise product.

    ``table[(a, b)]`` is the monoid product on ``range(units)`` with identity 0.
    """
    els = tuple(frozenset(s) for n in range(units + 1) for s in itertools.combinations(range(units), n))

    def tensor(a, b):
        return frozenset(table[(x, y)] for x in a for y in b)

    return Quantale.from_ops(els, lambda a, b: a | b, tensor, frozenset([0]), name)


class QuantaloidBase(Base):
    """Matrices over a finite quantale.

    Object ``n`` is an ``n``-element index set.  A 1-cell ``n -> m`` is an
    ``m x n`` matrix stored as rows (row = target index, column = source
    index).  The one-object case ``1 -> 1`` is the quantale itself.  2-cells
    are bare order tokens.
    """

    kind = "FINITE_QUANTALE"
    finite_homs = True

    def __init__(self, quantale: Quantale, arity: ArityClass = ArityClass.FINITE, tight=None):
        self.q = quantale
        self.arity = arity
        self._tight = tight
        self._composites: dict = {}
        if quantale.elements == (False, True):
            self.kind = "BOOLEAN_QUANTALE"

    def __repr__(self):
        return f"QuantaloidBase({self.q.name}, {self.arity.value})"

    def __eq__(self, other):
        return isinstance(other, QuantaloidBase) and other.q == self.q and other.arity == self.arity

    def __hash__(self):
        return hash(("quantaloid", self.q.name, self.arity))

    def check_obj(self, a):
        if not isinstance(a, int) or a < 0:
            raise BaseError(f"not an index set size: {a!r}")

    def enum_objects(self, cap):
        return list(range(cap + 1))

    def matrix(self, src: int, dst: int, rows) -> Hom1:
        rows = tuple(tuple(r) for r in rows)
        if len(rows) != dst or any(len(r) != src for r in rows):
            raise BaseError("matrix has the wrong shape")
        if any(v not in self.q.elements for r in rows for v in r):
            raise BaseError("matrix entry is not a quantale element")
        return Hom1(src, dst, rows)

    def leq1(self, f, g) -> bool:
        return all(self.q.leq(a, b) for ra, rb in zip(f.data, g.data) for a, b in zip(ra, rb))

    def id1(self, a):
        q = self.q
        return Hom1(a, a, tuple(tuple(q.unit if i == j else q.bottom for i in range(a)) for j in range(a)))

    def compose1(self, g, f):
        if f.dst != g.src:
            raise BaseError(f"cannot compose {f.src}->{f.dst} with {g.src}->{g.dst}")
        hit = self._composites.get((g, f))
        if hit is not None:
            return hit
        q = self.q
        rows = tuple(
            tuple(q.join_all(q.tensor(g.data[k][j], f.data[j][i]) for j in range(f.dst)) for i in range(f.src))
            for k in range(g.dst)
        )
        if len(self._composites) > 1 << 16:
            self._composites.clear()
        out = self._composites[(g, f)] = Hom1(f.src, g.dst, rows)
        return out

    def is_initial(self, f):
        return all(v == self.q.bottom for r in f.data for v in r)

    def size(self, f):
        return sum(v != self.q.bottom for r in f.data for v in r)

    def cell(self, src1, dst1, data=None) -> Hom2:
        if (src1.src, src1.dst) != (dst1.src, dst1.dst) or not self.leq1(src1, dst1):
            raise BaseError("no 2-cell: source is not below target")
        return Hom2(src1, dst1, None)

    def id2(self, f):
        return Hom2(f, f, None)

    def vcomp(self, beta, alpha):
        if alpha.dst1 != beta.src1:
            raise BaseError("vertical composite of non-composable 2-cells")
        return Hom2(alpha.src1, beta.dst1, None)

    def whisker_left(self, k, alpha):
        return Hom2(self.compose1(k, alpha.src1), self.compose1(k, alpha.dst1), None)

    def whisker_right(self, alpha, k):
        return Hom2(self.compose1(alpha.src1, k), self.compose1(alpha.dst1, k), None)

    def associator(self, f, g, h):
        c = self.compose1(self.compose1(h, g), f)
        return Hom2(c, c), Hom2(c, c)

    def left_unitor(self, f):
        return Hom2(f, f), Hom2(f, f)

    def right_unitor(self, f):
        return Hom2(f, f), Hom2(f, f)

    def eq2(self, a, b):
        return a.src1 == b.src1 and a.dst1 == b.dst1

    def inverse2(self, a):
        return Hom2(a.dst1, a.src1) if a.src1 == a.dst1 else None

    def refl_coequalizer(self, f, g):
        if (f.src1, f.dst1) != (g.src1, g.dst1):
            raise BaseError("coequalizer of non-parallel 2-cells")
        return f.dst1, Hom2(f.dst1, f.dst1)

    def coproduct(self, fs, a, b):
        if any((f.src, f.dst) != (a, b) for f in fs):
            raise BaseError("coproduct of 1-cells with different boundaries")
        q = self.q
        rows = tuple(tuple(q.join_all(f.data[j][i] for f in fs) for i in range(a)) for j in range(b))
        total = Hom1(a, b, rows)
        return total, [Hom2(f, total) for f in fs]

    def descend(self, es, hs, y, z):
        if (y.src, y.dst) != (z.src, z.dst) or not self.leq1(y, z):
            return None
        # the family must be jointly epimorphic: its sources join to y
        srcs = [e.src1 for e in es]
        if self.coproduct(srcs, y.src, y.dst)[0] != y:
            return None
        return Hom2(y, z)

    def iso1(self, f, g):
        return (Hom2(f, g), Hom2(g, f)) if f == g else None

    def iso1_all(self, f, g, cap=10_000):
        return [Hom2(f, g)] if f == g else []

    def enum_hom2(self, f, g):
        if (f.src, f.dst) == (g.src, g.dst) and self.leq1(f, g):
            yield Hom2(f, g)

    def enum_hom1(self, a, b, cap):
        for flat in itertools.product(self.q.elements, repeat=a * b):
            yield Hom1(a, b, tuple(tuple(flat[j * a:(j + 1) * a]) for j in range(b)))

    def _graph(self, a, b, fn) -> Hom1:
        q = self.q
        return Hom1(a, b, tuple(tuple(q.unit if fn[i] == j else q.bottom for i in range(a)) for j in range(b)))

    def enum_tight(self, a, b):
        for fn in itertools.product(range(b), repeat=a):
            yield self._graph(a, b, fn)

    def is_tight(self, f):
        if self._tight is not None:
            return bool(self._tight(f))
        q = self.q
        for i in range(f.src):
            col = [f.data[j][i] for j in range(f.dst)]
            if sum(v == q.unit for v in col) != 1 or any(v not in (q.unit, q.bottom) for v in col):
                return False
        return True

    def tighten(self, f):
        return f if self.is_tight(f) else None

    def right_adjoint(self, f):
        if not self.is_tight(f):
            raise BaseError("right adjoints are provided for tight matrices only")
        fs = Hom1(f.dst, f.src, tuple(tuple(f.data[j][i] for j in range(f.dst)) for i in range(f.src)))
        unit = self.cell(self.id1(f.src), self.compose1(fs, f))
        counit = self.cell(self.compose1(f, fs), self.id1(f.dst))
        return fs, unit, counit


# ---------------------------------------------------------------------------
# matrices of 1-cells


class MatrBase(Base):
    """Matrices of 1-cells of an inner base, composed by coproducts.

    Objects are tuples of inner objects.  A 1-cell ``a -> b`` stores rows
    ``data[j][i]`` in ``inner(a[i], b[j])``; ``(N o M)[k][i]`` is the
    coproduct over ``j`` of ``N[k][j] o M[j][i]``.
    """

    kind = "MATR"

    def __init__(self, inner: Base):
        if inner.arity is ArityClass.SINGLETON:
            raise BaseError("matrices need the finite arity class")
        self.inner = inner
        self.arity = ArityClass.FINITE
        self.finite_homs = inner.finite_homs

    def __repr__(self):
        return f"MatrBase({self.inner!r})"

    def __eq__(self, other):
        return isinstance(other, MatrBase) and other.inner == self.inner

    def __hash__(self):
        return hash(("matr", self.inner))

    def check_obj(self, a):
        if not isinstance(a, tuple):
            raise BaseError("matrix objects are tuples")
        for x in a:
            self.inner.check_obj(x)

    def id1(self, a):
        c = self.inner
        rows = tuple(tuple(c.id1(a[i]) if i == j else c.initial(a[i], a[j]) for i in range(len(a))) for j in range(len(a)))
        return Hom1(a, a, rows)

    def _entry(self, n, m, k, i):
        c = self.inner
        parts = [c.compose1(n.data[k][j], m.data[j][i]) for j in range(len(m.dst))]
        return c.coproduct(parts, m.src[i], n.dst[k])

    def compose1(self, g, f):
        if f.dst != g.src:
            raise BaseError("matrix composite with mismatched families")
        rows = tuple(tuple(self._entry(g, f, k, i)[0] for i in range(len(f.src))) for k in range(len(g.dst)))
        return Hom1(f.src, g.dst, rows)

    def is_initial(self, f):
        return all(self.inner.is_initial(e) for r in f.data for e in r)

    def size(self, f):
        return sum(self.inner.size(e) for r in f.data for e in r)

    def _cells(self, src1, dst1, fn):
        rows = tuple(tuple(fn(j, i) for i in range(len(src1.src))) for j in range(len(src1.dst)))
        return Hom2(src1, dst1, rows)

    def id2(self, f):
        return self._cells(f, f, lambda j, i: self.inner.id2(f.data[j][i]))

    def vcomp(self, beta, alpha):
        return self._cells(alpha.src1, beta.dst1, lambda j, i: self.inner.vcomp(beta.data[j][i], alpha.data[j][i]))

    def whisker_left(self, k, alpha):
        c = self.inner
        src, dst = self.compose1(k, alpha.src1), self.compose1(k, alpha.dst1)

        def entry(r, i):
            _, es = self._entry(k, alpha.src1, r, i)
            _, fs = self._entry(k, alpha.dst1, r, i)
            hs = [c.vcomp(fs[j], c.whisker_left(k.data[r][j], alpha.data[j][i])) for j in range(len(es))]
            return c.descend(es, hs, src.data[r][i], dst.data[r][i])

        return self._cells(src, dst, entry)

    def whisker_right(self, alpha, k):
        c = self.inner
        src, dst = self.compose1(alpha.src1, k), self.compose1(alpha.dst1, k)

        def entry(r, i):
            _, es = self._entry(alpha.src1, k, r, i)
            _, fs = self._entry(alpha.dst1, k, r, i)
            hs = [c.vcomp(fs[j], c.whisker_right(alpha.data[r][j], k.data[j][i])) for j in range(len(es))]
            return c.descend(es, hs, src.data[r][i], dst.data[r][i])

        return self._cells(src, dst, entry)

    def associator(self, f, g, h):
        c = self.inner
        hg, gf = self.compose1(h, g), self.compose1(g, f)
        left, right = self.compose1(hg, f), self.compose1(h, gf)

        def entry(l, i):
            _, outer_l = self._entry(hg, f, l, i)
            _, outer_r = self._entry(h, gf, l, i)
            es, hs = [], []
            for j in range(len(f.dst)):
                _, inner_l = self._entry(h, g, l, j)
                for k in range(len(g.dst)):
                    _, inner_r = self._entry(g, f, k, i)
                    es.append(c.vcomp(outer_l[j], c.whisker_right(inner_l[k], f.data[j][i])))
                    a = c.associator(f.data[j][i], g.data[k][j], h.data[l][k])[0]
                    hs.append(c.vcomp(outer_r[k], c.vcomp(c.whisker_left(h.data[l][k], inner_r[j]), a)))
            return c.descend(es, hs, left.data[l][i], right.data[l][i])

        fwd = self._cells(left, right, entry)
        return fwd, self.inverse2(fwd)

    def _unitor(self, f, one, on_left):
        c = self.inner
        comp = self.compose1(one, f) if on_left else self.compose1(f, one)

        def entry(j, i):
            _, es = self._entry(one, f, j, i) if on_left else self._entry(f, one, j, i)
            hs = []
            for k, e in enumerate(es):
                if on_left:
                    cell = c.left_unitor(f.data[j][i])[0] if k == j else c.from_initial(e.src1, f.data[j][i])
                else:
                    cell = c.right_unitor(f.data[j][i])[0] if k == i else c.from_initial(e.src1, f.data[j][i])
                hs.append(cell)
            return c.descend(es, hs, comp.data[j][i], f.data[j][i])

        fwd = self._cells(comp, f, entry)
        return fwd, self.inverse2(fwd)

    def left_unitor(self, f):
        return self._unitor(f, self.id1(f.dst), True)

    def right_unitor(self, f):
        return self._unitor(f, self.id1(f.src), False)

    def eq2(self, a, b):
        return all(
            self.inner.eq2(x, y) for ra, rb in zip(a.data, b.data) for x, y in zip(ra, rb)
        ) and a.src1 == b.src1 and a.dst1 == b.dst1

    def inverse2(self, a):
        rows = tuple(tuple(self.inner.inverse2(e) for e in r) for r in a.data)
        if any(e is None for r in rows for e in r):
            return None
        return Hom2(a.dst1, a.src1, rows)

    def refl_coequalizer(self, f, g):
        c = self.inner
        q = f.dst1
        parts = [[c.refl_coequalizer(f.data[j][i], g.data[j][i]) for i in range(len(q.src))] for j in range(len(q.dst))]
        quotient = Hom1(q.src, q.dst, tuple(tuple(p[0] for p in r) for r in parts))
        return quotient, Hom2(q, quotient, tuple(tuple(p[1] for p in r) for r in parts))

    def coproduct(self, fs, a, b):
        c = self.inner
        parts = [[c.coproduct([f.data[j][i] for f in fs], a[i], b[j]) for i in range(len(a))] for j in range(len(b))]
        total = Hom1(a, b, tuple(tuple(p[0] for p in r) for r in parts))
        injections = [
            Hom2(f, total, tuple(tuple(parts[j][i][1][n] for i in range(len(a))) for j in range(len(b))))
            for n, f in enumerate(fs)
        ]
        return total, injections

    def descend(self, es, hs, y, z):
        c = self.inner
        rows = []
        for j in range(len(y.dst)):
            row = []
            for i in range(len(y.src)):
                k = c.descend([e.data[j][i] for e in es], [h.data[j][i] for h in hs], y.data[j][i], z.data[j][i])
                if k is None:
                    return None
                row.append(k)
            rows.append(tuple(row))
        return Hom2(y, z, tuple(rows))

    def iso1(self, f, g):
        if (f.src, f.dst) != (g.src, g.dst):
            return None
        pairs = [[self.inner.iso1(x, y) for x, y in zip(rf, rg)] for rf, rg in zip(f.data, g.data)]
        if any(p is None for r in pairs for p in r):
            return None
        return (
            Hom2(f, g, tuple(tuple(p[0] for p in r) for r in pairs)),
            Hom2(g, f, tuple(tuple(p[1] for p in r) for r in pairs)),
        )

    def iso1_all(self, f, g, cap=10_000):
        if (f.src, f.dst) != (g.src, g.dst):
            return []
        options = [self.inner.iso1_all(x, y, cap) for rf, rg in zip(f.data, g.data) for x, y in zip(rf, rg)]
        out = []
        width = len(f.src)
        for choice in itertools.product(*options):
            rows = tuple(tuple(choice[j * width:(j + 1) * width]) for j in range(len(f.dst)))
            out.append(Hom2(f, g, rows))
            if len(out) >= cap:
                break
        return out

    def enum_hom2(self, f, g):
        if (f.src, f.dst) != (g.src, g.dst):
            return
        options = [list(self.inner.enum_hom2(x, y)) for rf, rg in zip(f.data, g.data) for x, y in zip(rf, rg)]
        width = len(f.src)
        for choice in itertools.product(*options):
            yield Hom2(f, g, tuple(tuple(choice[j * width:(j + 1) * width]) for j in range(len(f.dst))))

    def enum_hom1(self, a, b, cap):
        options = [list(self.inner.enum_hom1(x, y, cap)) for y in b for x in a]
        for choice in itertools.product(*options):
            yield Hom1(a, b, tuple(tuple(choice[j * len(a):(j + 1) * len(a)]) for j in range(len(b))))

    def is_tight(self, f):
        for i in range(len(f.src)):
            live = [j for j in range(len(f.dst)) if not self.inner.is_initial(f.data[j][i])]
            if len(live) != 1 or not self.inner.is_tight(f.data[live[0]][i]):
                return False
        return True

    def tighten(self, f):
        if not self.is_tight(f):
            return None
        c = self.inner
        rows = tuple(
            tuple(c.initial(f.src[i], f.dst[j]) if c.is_initial(e) else c.tighten(e) for i, e in enumerate(r))
            for j, r in enumerate(f.data)
        )
        return Hom1(f.src, f.dst, rows)

    def enum_tight(self, a, b):
        c = self.inner
        for targets in itertools.product(range(len(b)), repeat=len(a)):
            options = [list(c.enum_tight(a[i], b[targets[i]])) for i in range(len(a))]
            for choice in itertools.product(*options):
                rows = tuple(
                    tuple(choice[i] if targets[i] == j else c.initial(a[i], b[j]) for i in range(len(a)))
                    for j in range(len(b))
                )
                yield Hom1(a, b, rows)

    def right_adjoint(self, f):
        c = self.inner
        if not self.is_tight(f):
            raise BaseError("right adjoints are provided for tight matrices only")
        adj = {}
        for j, r in enumerate(f.data):
            for i, e in enumerate(r):
                if not c.is_initial(e):
                    adj[(j, i)] = c.right_adjoint(e)
        rows = tuple(
            tuple(adj[(j, i)][0] if (j, i) in adj else c.initial(f.dst[j], f.src[i]) for j in range(len(f.dst)))
            for i in range(len(f.src))
        )
        fs = Hom1(f.dst, f.src, rows)
        fsf, ffs = self.compose1(fs, f), self.compose1(f, fs)
        one_a, one_b = self.id1(f.src), self.id1(f.dst)

        def unit(i, i2):
            if i != i2:
                return c.from_initial(one_a.data[i][i2], fsf.data[i][i2])
            _, inj = self._entry(fs, f, i, i)
            j = next(j for j in range(len(f.dst)) if (j, i) in adj)
            return c.vcomp(inj[j], adj[(j, i)][1])

        def counit(j, j2):
            _, inj = self._entry(f, fs, j, j2)
            hs = []
            for i, e in enumerate(inj):
                if j == j2 and (j, i) in adj:
                    hs.append(adj[(j, i)][2])
                else:
                    hs.append(c.from_initial(e.src1, one_b.data[j][j2]))
            return c.descend(inj, hs, ffs.data[j][j2], one_b.data[j][j2])

        return fs, self._cells(one_a, fsf, unit), self._cells(ffs, one_b, counit)


# ---------------------------------------------------------------------------
# pasting helpers shared by every base


def hcomp(base: Base, beta, alpha):
    """Horizontal composite ``beta * alpha`` of ``alpha: f => f'`` and ``beta: g => g'``."""
    return base.vcomp(base.whisker_left(beta.dst1, alpha), base.whisker_right(beta, alpha.src1))


def vseq(base: Base, *cells):
    """Vertical composite of ``cells`` applied in the order given."""
    out = cells[0]
    for c in cells[1:]:
        out = base.vcomp(c, out)
    return out


def ev(base: Base, t):
    if isinstance(t, Comp):
        return base.compose1(ev(base, t.g), ev(base, t.f))
    return t


def leaves(t) -> list:
    if isinstance(t, Comp):
        return leaves(t.g) + leaves(t.f)
    return [t]


def _merge(base, rg, rf):
    # rg is right-nested; returns cell ev(rg) o ev(rf) => right nest, and that nest
    if not isinstance(rg, Comp):
        return base.id2(base.compose1(rg, ev(base, rf))), Comp(rg, rf)
    a = base.associator(ev(base, rf), ev(base, rg.f), rg.g)[0]
    cm, rm = _merge(base, rg.f, rf)
    return base.vcomp(base.whisker_left(rg.g, cm), a), Comp(rg.g, rm)


def _normalize(base, t):
    if not isinstance(t, Comp):
        return base.id2(t), t
    cg, rg = _normalize(base, t.g)
    cf, rf = _normalize(base, t.f)
    cm, rm = _merge(base, rg, rf)
    return base.vcomp(cm, hcomp(base, cg, cf)), rm


def rebracket(base: Base, src, dst):
    """The canonical associator composite between two bracketings of one word."""
    if len(leaves(src)) != len(leaves(dst)):
        raise BaseError("rebracketing words of different length")
    if src == dst:
        return base.id2(ev(base, src))
    # the single associator covers the common three-letter case
    if isinstance(src, Comp) and isinstance(dst, Comp):
        if isinstance(src.g, Comp) and dst == Comp(src.g.g, Comp(src.g.f, src.f)):
            if not any(isinstance(t, Comp) for t in (src.g.g, src.g.f, src.f)):
                return base.associator(src.f, src.g.f, src.g.g)[0]
        if isinstance(src.f, Comp) and dst == Comp(Comp(src.g, src.f.g), src.f.f):
            if not any(isinstance(t, Comp) for t in (src.g, src.f.g, src.f.f)):
                return base.associator(src.f.f, src.f.g, src.g)[1]
    c1, _ = _normalize(base, src)
    c2, _ = _normalize(base, dst)
    return base.vcomp(base.inverse2(c2), c1)


def _sub(t, path: str):
    for step in path:
        t = t.g if step == "g" else t.f
    return t


def _replace(t, path: str, new):
    if not path:
        return new
    if path[0] == "g":
        return Comp(_replace(t.g, path[1:], new), t.f)
    return Comp(t.g, _replace(t.f, path[1:], new))


def whisker_at(base: Base, t, path: str, cell):
    """Whisker ``cell`` into position ``path`` (a string over 'g'/'f') of tree ``t``."""
    if not path:
        return cell
    if path[0] == "g":
        return base.whisker_right(whisker_at(base, t.g, path[1:], cell), ev(base, t.f))
    return base.whisker_left(ev(base, t.g), whisker_at(base, t.f, path[1:], cell))


class Chain:
    """Builds a pasting composite step by step on a bracketed word.

    >>> # Chain(base, Comp(h, Comp(g, f))).regroup(Comp(Comp(h, g), f)).done()
    """

    def __init__(self, base: Base, tree):
        self.base = base
        self.tree = tree
        self.cells: list = []

    def regroup(self, tree) -> "Chain":
        if tree != self.tree:
            self.cells.append(rebracket(self.base, self.tree, tree))
        self.tree = tree
        return self

    def apply(self, path: str, cell, new=None) -> "Chain":
        self.cells.append(whisker_at(self.base, self.tree, path, cell))
        self.tree = _replace(self.tree, path, cell.dst1 if new is None else new)
        return self

    def lam_inv(self, path: str) -> "Chain":
        """Replace the leaf ``f`` at ``path`` by ``1 o f``."""
        f = ev(self.base, _sub(self.tree, path))
        one = self.base.id1(f.dst)
        return self.apply(path, self.base.left_unitor(f)[1], Comp(one, _sub(self.tree, path)))

    def rho_inv(self, path: str) -> "Chain":
        """Replace the leaf ``f`` at ``path`` by ``f o 1``."""
        f = ev(self.base, _sub(self.tree, path))
        one = self.base.id1(f.src)
        return self.apply(path, self.base.right_unitor(f)[1], Comp(_sub(self.tree, path), one))

    def done(self):
        if not self.cells:
            return self.base.id2(ev(self.base, self.tree))
        return vseq(self.base, *self.cells)


# ---------------------------------------------------------------------------
# morphisms of bases


class BaseMorphism:
    """A locally cocontinuous functor between bases, applied cell by cell."""

    def __init__(self, name: str, src: Base, dst: Base, obj, hom1, hom2):
        self.name, self.src, self.dst = name, src, dst
        self.obj, self.hom1, self.hom2 = obj, hom1, hom2

    def __repr__(self):
        return f"BaseMorphism({self.name})"

    def spot_check(self, cells: Sequence) -> list[str]:
        """Check preservation of identities, composites and coproducts on samples."""
        problems = []
        s, d = self.src, self.dst
        for f in cells:
            if d.iso1(self.hom1(s.id1(f.src)), d.id1(self.obj(f.src))) is None:
                problems.append(f"identity on {f.src!r} not preserved")
            for g in cells:
                if f.dst == g.src:
                    if d.iso1(self.hom1(s.compose1(g, f)), d.compose1(self.hom1(g), self.hom1(f))) is None:
                        problems.append("composite not preserved")
                if (f.src, f.dst) == (g.src, g.dst):
                    total = s.coproduct([f, g], f.src, f.dst)[0]
                    image = d.coproduct([self.hom1(f), self.hom1(g)], self.obj(f.src), self.obj(f.dst))[0]
                    if d.iso1(self.hom1(total), image) is None:
                        problems.append("binary coproduct not preserved")
            empty = self.hom1(s.initial(f.src, f.dst))
            if not d.is_initial(empty):
                problems.append("initial 1-cell not preserved")
        return problems


def identity_morphism(base: Base) -> BaseMorphism:
    return BaseMorphism("identity", base, base, lambda a: a, lambda f: f, lambda a: a)


def span_to_rel(span: SpanBase, rel: QuantaloidBase) -> BaseMorphism:
    """Send a span to the relation it images onto (truth of 'some apex element')."""

    def hom1(f):
        hit = set(zip(f.data[0], f.data[1]))
        return Hom1(f.src, f.dst, tuple(tuple((i, j) in hit for i in range(f.src)) for j in range(f.dst)))

    def hom2(a):
        return Hom2(hom1(a.src1), hom1(a.dst1), None)

    return BaseMorphism("span-to-rel", span, rel, lambda a: a, hom1, hom2)


def quantale_map(src: QuantaloidBase, dst: QuantaloidBase, fn, name: str = "quantale-map") -> BaseMorphism:
    """Apply a join- and tensor-preserving map of quantales entrywise."""
    for a in src.q.elements:
        for b in src.q.elements:
            if fn(src.q.join(a, b)) != dst.q.join(fn(a), fn(b)) or fn(src.q.tensor(a, b)) != dst.q.tensor(fn(a), fn(b)):
                raise BaseError(f"{name} is not a quantale homomorphism")
    if fn(src.q.unit) != dst.q.unit or fn(src.q.bottom) != dst.q.bottom:
        raise BaseError(f"{name} does not preserve unit and bottom")

    def hom1(f):
        return Hom1(f.src, f.dst, tuple(tuple(fn(v) for v in r) for r in f.data))

    def hom2(a):
        return Hom2(hom1(a.src1), hom1(a.dst1), None)

    return BaseMorphism(name, src, dst, lambda a: a, hom1, hom2)


def minplus_truncation(k_from: int, k_to: int) -> BaseMorphism:
    """Truncate distances from cap ``k_from`` down to cap ``k_to``."""
    if k_to > k_from:
        raise BaseError("truncation must lower the cap")
    src = QuantaloidBase(minplus_quantale(k_from))
    dst = QuantaloidBase(minplus_quantale(k_to))
    return quantale_map(src, dst, lambda v: v if v <= k_to else INF, f"minplus-{k_from}-to-{k_to}")
