"""Seeded generators for the objects the suite and the tests sweep over.

Every generator takes an explicit seed and is deterministic.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .base import ArityClass, INF, QuantaloidBase, SpanBase, boolean_quantale, minplus_quantale
from .collage import discrete_bb, quantale_blocks, span_blocks
from .enriched import ECategory, fincat_to_ecat, fincat_to_finite_ecat, profunctor_to_emodule
from .modcat import enum_modules
from .oracle import (
    FinCategory,
    OracleError,
    concrete_profunctor,
    cyclic_monoid,
    discrete_category,
    idempotent_monoid,
    parallel_pair,
    random_category,
    terminal_category,
    walking_arrow,
)

SIZES = {"smoke": 1, "full": 3}


def named_categories() -> list[FinCategory]:
    return [
        terminal_category(),
        walking_arrow(),
        parallel_pair(),
        cyclic_monoid(),
        idempotent_monoid(),
        discrete_category(2),
    ]


def nonempty_profunctor(rng: random.Random, K: FinCategory, L: FinCategory, tries: int = 50):
    """A random profunctor generated by one or two heteromorphisms."""
    for _ in range(tries):
        gens = []
        for _ in range(rng.randint(1, 2)):
            u, x = rng.randrange(L.n_objects), rng.randrange(K.n_objects)
            gens.append((u, x, tuple(rng.randrange(K.sizes[x]) for _ in range(L.sizes[u]))))
        try:
            return concrete_profunctor(K, L, gens)
        except OracleError:
            continue
    return concrete_profunctor(K, L, [])


@dataclass
class ProfTriple:
    cats: tuple
    first: object
    second: object


def profunctor_triples(seed: int, n: int = 50) -> list[ProfTriple]:
    """``n`` composable pairs ``S: K -> L``, ``T: L -> M`` of random profunctors."""
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        K, L, M = (random_category(rng, 4, 12) for _ in range(3))
        out.append(ProfTriple((K, L, M), nonempty_profunctor(rng, K, L), nonempty_profunctor(rng, L, M)))
    return out


def category_pairs(seed: int, n_random: int = 4) -> list[tuple[FinCategory, FinCategory]]:
    named = named_categories()
    pairs = [(K, L) for K in named[:4] for L in named[:4]]
    rng = random.Random(seed)
    for _ in range(n_random):
        pairs.append((random_category(rng, 3, 8), random_category(rng, 3, 8)))
    return pairs


# ---------------------------------------------------------------------------
# base 1-cells


def span_pairs(seed: int, n: int = 30, max_apex: int = 4, max_obj: int = 3):
    """Composable spans ``f: a -> b``, ``g: b -> c`` with apexes at most ``max_apex``."""
    rng = random.Random(seed)
    C = SpanBase(ArityClass.FINITE)

    def span(a, b):
        k = rng.randint(0, max_apex) if a and b else 0
        return C.span(a, b, [rng.randrange(a) for _ in range(k)], [rng.randrange(b) for _ in range(k)])

    out = []
    for _ in range(n):
        a, b, c = (rng.randint(1, max_obj) for _ in range(3))
        out.append((C, span(a, b), span(b, c)))
    return out


def relation_pairs(seed: int, n: int = 20, max_obj: int = 3):
    rng = random.Random(seed)
    C = QuantaloidBase(boolean_quantale())
    out = []
    for _ in range(n):
        a, b, c = (rng.randint(1, max_obj) for _ in range(3))
        f = C.matrix(a, b, [[rng.random() < 0.4 for _ in range(a)] for _ in range(b)])
        g = C.matrix(b, c, [[rng.random() < 0.4 for _ in range(b)] for _ in range(c)])
        out.append((C, f, g))
    return out


def base_cell_pairs(seed: int, n: int = 30):
    return span_pairs(seed, n) + relation_pairs(seed + 1, max(10, n // 2))


# ---------------------------------------------------------------------------
# modules for coherence checks


def random_preorder(rng: random.Random, n: int) -> list[list[bool]]:
    rel = [[a == b or rng.random() < 0.3 for b in range(n)] for a in range(n)]
    for k, a, b in itertools.product(range(n), repeat=3):
        if rel[a][k] and rel[k][b]:
            rel[a][b] = True
    return rel


def preorder_category(C: QuantaloidBase, rel, name="P") -> ECategory:
    n = len(rel)
    q = C.q

    def one(v):
        return C.matrix(1, 1, [[v]])

    obs = tuple(range(n))
    hom = {(a, b): one(q.unit if rel[a][b] else q.bottom) for a in obs for b in obs}
    comp = {(a, b, c): C.cell(C.compose1(hom[(a, b)], hom[(b, c)]), hom[(a, c)]) for a in obs for b in obs for c in obs}
    unit = {a: C.cell(C.id1(1), hom[(a, a)]) for a in obs}
    return ECategory(C, obs, {a: 1 for a in obs}, hom, comp, unit, name)


def module_chain(seed: int, kind: str, length: int = 4):
    """A chain of composable modules ``A0 -|-> A1 -|-> ... `` over one base.

    ``kind`` is ``singleton`` (profunctors over one-object span categories),
    ``finite`` (spans, objects with extent 1) or ``boolean`` (preorders).
    """
    rng = random.Random(seed)
    if kind == "singleton":
        cats = [random_category(rng, 3, 8) for _ in range(length + 1)]
        ecats = [fincat_to_ecat(K) for K in cats]
        return [
            profunctor_to_emodule(nonempty_profunctor(rng, cats[i], cats[i + 1]), ecats[i], ecats[i + 1])
            for i in range(length)
        ]
    if kind == "finite":
        pool = named_categories()
        ecats = [fincat_to_finite_ecat(pool[rng.randrange(len(pool))]) for _ in range(length + 1)]
        cap = 2
    elif kind == "boolean":
        C = QuantaloidBase(boolean_quantale())
        ecats = [preorder_category(C, random_preorder(rng, rng.randint(1, 3)), f"P{i}") for i in range(length + 1)]
        cap = None
    else:
        raise ValueError(kind)
    chain = []
    for i in range(length):
        mods = list(itertools.islice(enum_modules(ecats[i], ecats[i + 1], cap), 200))
        chain.append(mods[rng.randrange(len(mods))])
    return chain


# ---------------------------------------------------------------------------
# module-enriched categories


@dataclass
class BBEntry:
    label: str
    kind: str  # span, boolean or minplus
    bb: ECategory


def _partition(rng, n, max_blocks=3):
    k = rng.randint(1, min(n, max_blocks))
    while True:
        labels = [rng.randrange(k) for _ in range(n)]
        if len(set(labels)) == k:
            break
    return [[z for z in range(n) if labels[z] == b] for b in range(k)]


def _identities(K):
    return [K.ident[x] for x in range(K.n_objects)]


def fixed_bbs() -> list[BBEntry]:
    F = SpanBase(ArityClass.FINITE)
    out = [
        BBEntry(
            "discrete-2-3",
            "span",
            discrete_bb(
                {
                    "X0": fincat_to_finite_ecat(discrete_category(2), F, "D2"),
                    "X1": fincat_to_finite_ecat(discrete_category(3), F, "D3"),
                }
            ),
        ),
        BBEntry("cograph", "span", span_blocks(parallel_pair(), [[0], [1]], name="cograph")),
        BBEntry("arrow-split", "span", span_blocks(walking_arrow(), [[0], [1]], name="arrow")),
    ]
    out += [BBEntry(f"kleisli-{lab}", "span", bb) for lab, bb in kleisli_bbs()]
    B = QuantaloidBase(boolean_quantale())
    chain = [[a <= b for b in range(3)] for a in range(3)]
    out.append(BBEntry("bool-chain", "boolean", quantale_blocks(B, chain, [[0], [1, 2]], name="chain")))
    out.append(BBEntry("metric-pair", "minplus", quantale_blocks(QuantaloidBase(minplus_quantale(10)), [[0, 3], [INF, 0]], [[0], [1]], name="pair")))
    return out


def kleisli_bbs() -> list[tuple[str, ECategory]]:
    """One-object module-enriched categories: a finite category over its discrete part."""
    out = []
    for K in (cyclic_monoid(), idempotent_monoid(), parallel_pair()):
        out.append((K.name, span_blocks(K, [list(range(K.n_objects))], sub=_identities(K), name=f"kl-{K.name}")))
    return out


def random_bbs(seed: int, n: int) -> list[BBEntry]:
    """Random span, Boolean and min-plus instances (at most 3 objects, extents of at most 3)."""
    rng = random.Random(seed)
    B = QuantaloidBase(boolean_quantale())
    M = QuantaloidBase(minplus_quantale(10))
    out = []
    for i in range(n):
        K = random_category(rng, 3, 8)
        sub = None if rng.random() < 0.5 else _identities(K)
        out.append(BBEntry(f"span-{i}", "span", span_blocks(K, _partition(rng, K.n_objects), sub=sub, name=f"s{i}")))
        k = rng.randint(1, 4)
        rel = random_preorder(rng, k)
        disc = [[a == b for b in range(k)] for a in range(k)]
        out.append(
            BBEntry(f"bool-{i}", "boolean", quantale_blocks(B, rel, _partition(rng, k), sub=disc if rng.random() < 0.5 else None, name=f"b{i}"))
        )
        spaces = random_spaces(rng, rng.randint(1, 3), 2)
        table, blocks = _metric_table(spaces, rng)
        out.append(BBEntry(f"metric-{i}", "minplus", quantale_blocks(M, table, blocks, name=f"m{i}")))
    return out


def bb_corpus(seed: int, scale: str = "smoke") -> list[BBEntry]:
    return fixed_bbs() + random_bbs(seed, 2 * SIZES[scale])


# ---------------------------------------------------------------------------
# metric spaces


def random_spaces(rng: random.Random, n: int, max_points: int = 3, cap: int = 10):
    spaces = []
    for _ in range(n):
        k = rng.randint(1, max_points)
        spaces.append([[0 if a == b else (rng.randint(1, cap) if rng.random() < 0.8 else INF) for b in range(k)] for a in range(k)])
    return spaces


def random_glue(rng: random.Random, spaces, cap: int = 10):
    glue = {}
    for i, j in itertools.permutations(range(len(spaces)), 2):
        if rng.random() < 0.6:
            glue[(i, j)] = [
                [rng.randint(0, cap) if rng.random() < 0.5 else INF for _ in spaces[j]] for _ in spaces[i]
            ]
    return glue


def _metric_table(spaces, rng, cap=10):
    # a closed table is easiest to get from the oracle itself, which keeps
    # these corpus entries independent of the gluing code under test
    from .oracle import minplus_shortest

    glue = random_glue(rng, spaces, cap)
    table = minplus_shortest(spaces, glue, cap)
    blocks, o = [], 0
    for d in spaces:
        blocks.append(list(range(o, o + len(d))))
        o += len(d)
    return table, blocks


def metric_gluings(seed: int, n: int = 10, cap: int = 10):
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        spaces = random_spaces(rng, rng.randint(2, 3), 3, cap)
        out.append((spaces, random_glue(rng, spaces, cap)))
    return out
