"""Brute-force oracles that share no colimit code with the rest of the package.

Finite categories, functors, transformations and profunctors are stored as
plain tables.  Profunctor composition is computed by closing the coend
relation with a breadth-first search over pairs.  A seeded generator of
concrete categories (sets and functions closed under composition) feeds the
test corpus.

Conventions: a profunctor ``P`` from ``K`` to ``L`` has elements over pairs
``(u, x)`` with ``u`` in ``L`` and ``x`` in ``K``; think of an element as an
arrow ``u -> x``.  ``K`` acts by post-composition and ``L`` by
pre-composition.
"""
from __future__ import annotations

import itertools
import math
import random
from collections import deque
from dataclasses import dataclass, field


class OracleError(ValueError):
    pass


@dataclass
class FinCategory:
    """Objects ``0..n-1``; morphism ``i`` goes ``mor[i][0] -> mor[i][1]``.

    ``comp[(g, f)]`` is ``g o f`` whenever ``cod f == dom g``.
    """

    n_objects: int
    mor: tuple
    comp: dict
    ident: tuple
    name: str = "K"

    def __post_init__(self):
        self.mor = tuple(tuple(m) for m in self.mor)
        self.ident = tuple(self.ident)
        self.check()

    def hom(self, x, y) -> list[int]:
        return [i for i, (s, t) in enumerate(self.mor) if (s, t) == (x, y)]

    def check(self):
        n = len(self.mor)
        for x in range(self.n_objects):
            i = self.ident[x]
            if self.mor[i] != (x, x):
                raise OracleError(f"identity of {x} has the wrong type")
        for g in range(n):
            for f in range(n):
                composable = self.mor[f][1] == self.mor[g][0]
                if composable != ((g, f) in self.comp):
                    raise OracleError(f"composition table wrong at {(g, f)}")
                if composable:
                    h = self.comp[(g, f)]
                    if self.mor[h] != (self.mor[f][0], self.mor[g][1]):
                        raise OracleError("composite has the wrong type")
        for f in range(n):
            s, t = self.mor[f]
            if self.comp[(self.ident[t], f)] != f or self.comp[(f, self.ident[s])] != f:
                raise OracleError("unit law fails")
        for h, g, f in itertools.product(range(n), repeat=3):
            if (g, f) in self.comp and (h, g) in self.comp:
                if self.comp[(h, self.comp[(g, f)])] != self.comp[(self.comp[(h, g)], f)]:
                    raise OracleError("associativity fails")


@dataclass
class FinFunctor:
    src: FinCategory
    dst: FinCategory
    obj: tuple
    mor: tuple

    def check(self) -> bool:
        K, L = self.src, self.dst
        for i, (s, t) in enumerate(K.mor):
            if L.mor[self.mor[i]] != (self.obj[s], self.obj[t]):
                return False
        for x in range(K.n_objects):
            if self.mor[K.ident[x]] != L.ident[self.obj[x]]:
                return False
        return all(self.mor[h] == L.comp[(self.mor[g], self.mor[f])] for (g, f), h in K.comp.items())


@dataclass
class NatTransf:
    src: FinFunctor
    dst: FinFunctor
    comp: tuple

    def check(self) -> bool:
        D, E = self.src, self.dst
        L = D.dst
        for x, c in enumerate(self.comp):
            if L.mor[c] != (D.obj[x], E.obj[x]):
                return False
        for i, (s, t) in enumerate(D.src.mor):
            if L.comp[(self.comp[t], D.mor[i])] != L.comp[(E.mor[i], self.comp[s])]:
                return False
        return True


@dataclass
class Profunctor:
    """Elements ``elems[e] = (u, x)``; ``act_src[(a, e)] = a o e`` and ``act_dst[(e, b)] = e o b``."""

    src: FinCategory
    dst: FinCategory
    elems: tuple
    act_src: dict
    act_dst: dict
    labels: tuple = field(default=())

    def __post_init__(self):
        self.elems = tuple(tuple(e) for e in self.elems)

    def component(self, u, x) -> list[int]:
        return [e for e, ux in enumerate(self.elems) if ux == (u, x)]

    def check(self) -> bool:
        K, L = self.src, self.dst
        for e, (u, x) in enumerate(self.elems):
            for a, (s, t) in enumerate(K.mor):
                if s == x and self.elems[self.act_src[(a, e)]] != (u, t):
                    return False
            for b, (s, t) in enumerate(L.mor):
                if t == u and self.elems[self.act_dst[(e, b)]] != (s, x):
                    return False
            if self.act_src[(K.ident[x], e)] != e or self.act_dst[(e, L.ident[u])] != e:
                return False
        for e, (u, x) in enumerate(self.elems):
            for (a2, a1), a in K.comp.items():
                if K.mor[a1][0] == x and self.act_src[(a2, self.act_src[(a1, e)])] != self.act_src[(a, e)]:
                    return False
            for (b2, b1), b in L.comp.items():
                if L.mor[b2][1] == u and self.act_dst[(self.act_dst[(e, b2)], b1)] != self.act_dst[(e, b)]:
                    return False
            for a, (s, _) in enumerate(K.mor):
                if s != x:
                    continue
                for b, (_, t) in enumerate(L.mor):
                    if t == u and self.act_src[(a, self.act_dst[(e, b)])] != self.act_dst[(self.act_src[(a, e)], b)]:
                        return False
        return True


def hom_profunctor(K: FinCategory) -> Profunctor:
    """The identity profunctor: elements are the morphisms of ``K``."""
    elems = tuple((s, t) for s, t in K.mor)
    act_src = {(a, e): K.comp[(a, e)] for a in range(len(K.mor)) for e in range(len(K.mor)) if (a, e) in K.comp}
    act_dst = {(e, b): K.comp[(e, b)] for e in range(len(K.mor)) for b in range(len(K.mor)) if (e, b) in K.comp}
    return Profunctor(K, K, elems, act_src, act_dst)


def prof_compose_coend(T: Profunctor, S: Profunctor) -> tuple[Profunctor, dict]:
    """Compose ``S: A -> B`` with ``T: B -> C``.

    Returns the composite and the map sending each pair ``(s, t)`` with
    matching middle object to its class index.
    """
    if S.dst is not T.src and S.dst != T.src:
        raise OracleError("profunctors are not composable")
    B = S.dst
    pairs = [(s, t) for s, (x, _) in enumerate(S.elems) for t, (_, x2) in enumerate(T.elems) if x == x2]
    index = {p: i for i, p in enumerate(pairs)}
    adj: list[list[int]] = [[] for _ in pairs]
    # (s, b o t) ~ (s o b, t) for b: x -> x'
    for s, (x1, w) in enumerate(S.elems):
        for b, (x, x1b) in enumerate(B.mor):
            if x1b != x1:
                continue
            sb = S.act_dst[(s, b)]
            for t, (u, xt) in enumerate(T.elems):
                if xt != x:
                    continue
                bt = T.act_src[(b, t)]
                i, j = index[(s, bt)], index[(sb, t)]
                adj[i].append(j)
                adj[j].append(i)
    cls = [-1] * len(pairs)
    reps = []
    for start in range(len(pairs)):
        if cls[start] >= 0:
            continue
        c = len(reps)
        reps.append(start)
        cls[start] = c
        todo = deque([start])
        while todo:
            i = todo.popleft()
            for j in adj[i]:
                if cls[j] < 0:
                    cls[j] = c
                    todo.append(j)
    elems = []
    for r in reps:
        s, t = pairs[r]
        elems.append((T.elems[t][0], S.elems[s][1]))
    A, C = S.src, T.dst
    act_src, act_dst = {}, {}
    for c, r in enumerate(reps):
        s, t = pairs[r]
        u, w = elems[c]
        for a, (w0, _) in enumerate(A.mor):
            if w0 == w:
                act_src[(a, c)] = cls[index[(S.act_src[(a, s)], t)]]
        for k, (_, u1) in enumerate(C.mor):
            if u1 == u:
                act_dst[(c, k)] = cls[index[(s, T.act_dst[(t, k)])]]
    out = Profunctor(A, C, tuple(elems), act_src, act_dst)
    return out, {p: cls[i] for p, i in index.items()}


def profunctor_bijection(P: Profunctor, Q: Profunctor, cap: int = 200_000) -> tuple | None:
    """Search an action-preserving bijection of elements, or None."""
    if P.src != Q.src or P.dst != Q.dst or sorted(P.elems) != sorted(Q.elems):
        return None
    order = sorted(range(len(P.elems)), key=lambda e: P.elems[e])
    image: dict[int, int] = {}
    used: set[int] = set()
    budget = [cap]

    def consistent(e):
        for (a, e0), e1 in P.act_src.items():
            if e0 in image and e1 in image and Q.act_src[(a, image[e0])] != image[e1]:
                return False
        for (e0, b), e1 in P.act_dst.items():
            if e0 in image and e1 in image and Q.act_dst[(image[e0], b)] != image[e1]:
                return False
        return True

    def go(k):
        budget[0] -= 1
        if budget[0] < 0:
            return False
        if k == len(order):
            return True
        e = order[k]
        for c in Q.component(*P.elems[e]):
            if c in used:
                continue
            image[e] = c
            used.add(c)
            if consistent(e) and go(k + 1):
                return True
            del image[e]
            used.discard(c)
        return False

    return tuple(image[e] for e in range(len(P.elems))) if go(0) else None


# ---------------------------------------------------------------------------
# enumeration


def enum_functors(K: FinCategory, L: FinCategory) -> list[FinFunctor]:
    out = []
    for obj in itertools.product(range(L.n_objects), repeat=K.n_objects):
        options = [L.hom(obj[s], obj[t]) for s, t in K.mor]
        assign: list[int] = [-1] * len(K.mor)

        def ok(i):
            for (g, f), h in K.comp.items():
                if i in (g, f, h) and min(assign[g], assign[f], assign[h]) >= 0:
                    if L.comp[(assign[g], assign[f])] != assign[h]:
                        return False
            return True

        def go(i):
            if i == len(K.mor):
                F = FinFunctor(K, L, obj, tuple(assign))
                if F.check():
                    out.append(F)
                return
            for m in options[i]:
                assign[i] = m
                if ok(i):
                    go(i + 1)
            assign[i] = -1

        go(0)
    return out


def enum_transformations(D: FinFunctor, E: FinFunctor) -> list[NatTransf]:
    L = D.dst
    options = [L.hom(D.obj[x], E.obj[x]) for x in range(D.src.n_objects)]
    out = []
    for comp in itertools.product(*options):
        t = NatTransf(D, E, comp)
        if t.check():
            out.append(t)
    return out


# ---------------------------------------------------------------------------
# metric oracle


def minplus_shortest(spaces, glue: dict, cap: int = 10) -> list[list]:
    """All-pairs tightest distances on a glued family of spaces.

    ``spaces[i]`` is a square distance matrix; ``glue[(i, j)]`` gives distances
    from points of space ``i`` to points of space ``j``.  Values above ``cap``
    become infinity.  Relaxation runs to a fixpoint.
    """
    inf = math.inf
    offsets, n = [], 0
    for d in spaces:
        offsets.append(n)
        n += len(d)

    def trunc(v):
        return inf if v > cap else v

    table = [[inf] * n for _ in range(n)]
    for i, d in enumerate(spaces):
        for a, row in enumerate(d):
            for b, v in enumerate(row):
                table[offsets[i] + a][offsets[i] + b] = trunc(v)
    for (i, j), d in glue.items():
        for a, row in enumerate(d):
            for b, v in enumerate(row):
                cell = offsets[i] + a, offsets[j] + b
                table[cell[0]][cell[1]] = min(table[cell[0]][cell[1]], trunc(v))
    changed = True
    while changed:
        changed = False
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    v = trunc(table[a][b] + table[b][c])
                    if v < table[a][c]:
                        table[a][c] = v
                        changed = True
    return table


# ---------------------------------------------------------------------------
# concrete generators


def concrete_category(sizes, generators, name="K", max_morphisms=12) -> FinCategory:
    """Close a set of functions between finite sets under composition.

    ``sizes[x]`` is the size of object ``x``; each generator is
    ``(src, dst, values)``.  Raises ``OracleError`` if the closure is too big.
    """
    mors = {}
    order = []

    def add(s, t, fn):
        key = (s, t, tuple(fn))
        if key not in mors:
            mors[key] = len(order)
            order.append(key)

    for x, k in enumerate(sizes):
        add(x, x, range(k))
    for s, t, fn in generators:
        add(s, t, fn)
    grown = True
    while grown:
        grown = False
        for f in list(order):
            for g in list(order):
                if f[1] == g[0]:
                    key = (f[0], g[1], tuple(g[2][v] for v in f[2]))
                    if key not in mors:
                        add(*key)
                        grown = True
                        if len(order) > max_morphisms:
                            raise OracleError("closure exceeds the morphism budget")
    comp = {}
    for gi, g in enumerate(order):
        for fi, f in enumerate(order):
            if f[1] == g[0]:
                comp[(gi, fi)] = mors[(f[0], g[1], tuple(g[2][v] for v in f[2]))]
    ident = tuple(mors[(x, x, tuple(range(k)))] for x, k in enumerate(sizes))
    cat = FinCategory(len(sizes), tuple((s, t) for s, t, _ in order), comp, ident, name)
    cat.functions = tuple(fn for _, _, fn in order)
    cat.sizes = tuple(sizes)
    return cat


def terminal_category() -> FinCategory:
    return concrete_category([1], [], "terminal")


def walking_arrow() -> FinCategory:
    return concrete_category([1, 1], [(0, 1, (0,))], "arrow")


def parallel_pair() -> FinCategory:
    return concrete_category([1, 2], [(0, 1, (0,)), (0, 1, (1,))], "parallel")


def cyclic_monoid() -> FinCategory:
    return concrete_category([2], [(0, 0, (1, 0))], "Z2")


def idempotent_monoid() -> FinCategory:
    return concrete_category([2], [(0, 0, (0, 0))], "idem")


def discrete_category(n: int) -> FinCategory:
    return concrete_category([1] * n, [], f"discrete{n}")


def random_category(rng: random.Random, max_objects=4, max_morphisms=12, tries=200) -> FinCategory:
    for _ in range(tries):
        k = rng.randint(1, max_objects)
        sizes = [rng.randint(1, 2) for _ in range(k)]
        gens = []
        for _ in range(rng.randint(0, 3)):
            s, t = rng.randrange(k), rng.randrange(k)
            gens.append((s, t, tuple(rng.randrange(sizes[t]) for _ in range(sizes[s]))))
        try:
            return concrete_category(sizes, gens, f"rand{k}", max_morphisms)
        except OracleError:
            continue
    return terminal_category()


def concrete_profunctor(K: FinCategory, L: FinCategory, generators, max_component=4) -> Profunctor:
    """Close heteromorphisms ``u -> x`` (functions ``L.sizes[u] -> K.sizes[x]``).

    Each generator is ``(u, x, values)``.
    """
    seen = {}
    order = []

    def add(u, x, fn):
        key = (u, x, tuple(fn))
        if key not in seen:
            seen[key] = len(order)
            order.append(key)

    for g in generators:
        add(*g)
    grown = True
    while grown:
        grown = False
        for u, x, fn in list(order):
            for a, (s, t) in enumerate(K.mor):
                if s == x:
                    key = (u, t, tuple(K.functions[a][v] for v in fn))
                    if key not in seen:
                        add(*key)
                        grown = True
            for b, (s, t) in enumerate(L.mor):
                if t == u:
                    key = (s, x, tuple(fn[v] for v in L.functions[b]))
                    if key not in seen:
                        add(*key)
                        grown = True
        counts = {}
        for u, x, _ in order:
            counts[(u, x)] = counts.get((u, x), 0) + 1
        if counts and max(counts.values()) > max_component:
            raise OracleError("profunctor component exceeds the budget")
    order.sort()
    seen = {key: i for i, key in enumerate(order)}
    act_src, act_dst = {}, {}
    for e, (u, x, fn) in enumerate(order):
        for a, (s, t) in enumerate(K.mor):
            if s == x:
                act_src[(a, e)] = seen[(u, t, tuple(K.functions[a][v] for v in fn))]
        for b, (s, t) in enumerate(L.mor):
            if t == u:
                act_dst[(e, b)] = seen[(s, x, tuple(fn[v] for v in L.functions[b]))]
    return Profunctor(K, L, tuple((u, x) for u, x, _ in order), act_src, act_dst)


def random_profunctor(rng: random.Random, K: FinCategory, L: FinCategory, tries=100) -> Profunctor:
    for _ in range(tries):
        gens = []
        for _ in range(rng.randint(0, 2)):
            u, x = rng.randrange(L.n_objects), rng.randrange(K.n_objects)
            gens.append((u, x, tuple(rng.randrange(K.sizes[x]) for _ in range(L.sizes[u]))))
        try:
            return concrete_profunctor(K, L, gens)
        except OracleError:
            continue
    return concrete_profunctor(K, L, [])


# ---------------------------------------------------------------------------
# Cat_1 over spans versus finite categories


def cat1_equiv_check(K: FinCategory, L: FinCategory) -> dict:
    """Compare functors and transformations ``K -> L`` with their enriched counterparts.

    Every oracle functor is sent to an enriched functor (which must validate),
    every validated enriched functor is read back, and both round trips must
    be exact; the same is done for transformations between each pair of
    functors.
    """
    from . import enriched as en

    A, B = en.fincat_to_ecat(K), en.fincat_to_ecat(L)
    oracle_functors = enum_functors(K, L)
    enriched_functors = en.enum_singleton_functors(A, B)
    report = {
        "pair": [K.name, L.name],
        "functors_oracle": len(oracle_functors),
        "functors_enriched": len(enriched_functors),
        "transformations_oracle": 0,
        "transformations_enriched": 0,
        "ok": True,
        "problems": [],
    }

    def fail(msg):
        report["ok"] = False
        report["problems"].append(msg)

    as_enriched = {}
    for F in oracle_functors:
        D = en.finfunctor_to_efunctor(F, A, B)
        if not en.validate(D).ok:
            fail(f"functor {F.obj}/{F.mor} does not validate")
        if en.efunctor_to_finfunctor(D, K, L).mor != F.mor:
            fail("functor round trip is not exact")
        as_enriched[(F.obj, F.mor)] = D
    read_back = set()
    for D in enriched_functors:
        F = en.efunctor_to_finfunctor(D, K, L)
        read_back.add((F.obj, F.mor))
        if en.finfunctor_to_efunctor(F, A, B) != D:
            fail("enriched functor round trip is not exact")
    if read_back != set(as_enriched):
        fail("functor sets differ")
    for F in oracle_functors:
        for G in oracle_functors:
            nat = enum_transformations(F, G)
            D, E = as_enriched[(F.obj, F.mor)], as_enriched[(G.obj, G.mor)]
            enr = en.enum_singleton_transformations(D, E)
            report["transformations_oracle"] += len(nat)
            report["transformations_enriched"] += len(enr)
            ours = set()
            for t in nat:
                th = en.nattransf_to_etrans(t, D, E)
                if not en.validate(th).ok:
                    fail("transformation does not validate")
                if en.etrans_to_nattransf(th, F, G).comp != t.comp:
                    fail("transformation round trip is not exact")
                ours.add(t.comp)
            back = {en.etrans_to_nattransf(th, F, G).comp for th in enr}
            if back != ours:
                fail("transformation sets differ")
    return report
