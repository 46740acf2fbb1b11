"""Categories, functors, transformations, icons and modules enriched in a base.

Direction conventions: ``A.hom[(x, y)]`` is a 1-cell ``ext(y) -> ext(x)``;
a module ``T`` from ``A`` to ``B`` has components ``T.comp[(u, x)]`` for
``u`` in ``B`` and ``x`` in ``A``, each a 1-cell ``ext(x) -> ext(u)``.  Its
right action uses homs of ``A`` and its left action homs of ``B``:

    ract[(u, x, y)]: T(u, x) o A(x, y) => T(u, y)
    lact[(u, v, x)]: B(u, v) o T(v, x) => T(u, x)

Tight cells are always handled as ordinary 1-cells that pass ``is_tight``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any

from .base import ArityClass, Base, BaseError, Chain, Comp, Hom1, SpanBase


@dataclass(eq=False)
class ECategory:
    base: Base
    objects: tuple
    extent: dict
    hom: dict
    comp: dict
    unit: dict
    name: str = "A"

    def ext(self, x):
        return self.extent[x]

    def h(self, x, y):
        return self.hom[(x, y)]

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, ECategory)
            and self.objects == other.objects
            and self.extent == other.extent
            and self.hom == other.hom
            and self.comp == other.comp
            and self.unit == other.unit
        )

    def __repr__(self):
        return f"ECategory({self.name}, {len(self.objects)} objects)"


@dataclass(eq=False)
class EFunctor:
    src: ECategory
    dst: ECategory
    obj: dict
    cell: dict
    sq: dict

    def __eq__(self, other):
        return (
            isinstance(other, EFunctor)
            and self.obj == other.obj
            and self.cell == other.cell
            and self.sq == other.sq
        )


@dataclass(eq=False)
class ETransformation:
    src: EFunctor
    dst: EFunctor
    comp: dict

    def __eq__(self, other):
        return isinstance(other, ETransformation) and self.comp == other.comp


@dataclass(eq=False)
class EIcon:
    src: EFunctor
    dst: EFunctor
    comp: dict


@dataclass(eq=False)
class EModule:
    src: ECategory
    dst: ECategory
    comp: dict
    ract: dict
    lact: dict
    name: str = "T"

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, EModule)
            and self.comp == other.comp
            and self.ract == other.ract
            and self.lact == other.lact
            and self.src == other.src
            and self.dst == other.dst
        )

    def __repr__(self):
        return f"EModule({self.name}: {self.src.name} -|-> {self.dst.name})"


@dataclass(eq=False)
class ModCell:
    src1: EModule
    dst1: EModule
    comp: dict

    @property
    def src(self):
        return self.src1

    @property
    def dst(self):
        return self.dst1

    def __eq__(self, other):
        return isinstance(other, ModCell) and self.comp == other.comp and self.src1 == other.src1 and self.dst1 == other.dst1


@dataclass
class Report:
    ok: bool
    status: str = "PASS"
    axiom: str = ""
    where: tuple = ()
    detail: str = ""

    def __bool__(self):
        return self.ok

    def to_dict(self) -> dict:
        return {"ok": self.ok, "status": self.status, "axiom": self.axiom, "where": [repr(w) for w in self.where], "detail": self.detail}


PASS = Report(True)


def _fail(axiom, where, detail=""):
    return Report(False, "FAIL", axiom, tuple(where), detail)


def _structural(axiom, where, detail=""):
    return Report(False, "STRUCTURAL", axiom, tuple(where), detail)


# ---------------------------------------------------------------------------
# validation


def validate(x: Any) -> Report:
    """Check every axiom of ``x``; the first failure (in object order) is reported."""
    try:
        if isinstance(x, ECategory):
            return _validate_category(x)
        if isinstance(x, EModule):
            return _validate_module(x)
        if isinstance(x, ModCell):
            return _validate_modcell(x)
        if isinstance(x, EFunctor):
            return _validate_functor(x)
        if isinstance(x, ETransformation):
            return _validate_transformation(x)
        if isinstance(x, EIcon):
            return _validate_icon(x)
    except (BaseError, KeyError) as exc:
        return _structural("boundary", (), f"{type(exc).__name__}: {exc}")
    raise TypeError(f"cannot validate {type(x).__name__}")


def _validate_category(A: ECategory) -> Report:
    C, obs = A.base, A.objects
    if not C.arity.allows(len(obs)):
        return _structural("arity", (len(obs),), "object set not allowed by the arity class")
    for x in obs:
        C.check_obj(A.ext(x))
    for x, y in itertools.product(obs, repeat=2):
        h = A.h(x, y)
        if (h.src, h.dst) != (A.ext(y), A.ext(x)):
            return _structural("hom boundary", (x, y))
    for x in obs:
        u = A.unit[x]
        if u.src1 != C.id1(A.ext(x)) or u.dst1 != A.h(x, x):
            return _structural("unit boundary", (x,))
    for x, y, z in itertools.product(obs, repeat=3):
        m = A.comp[(x, y, z)]
        if m.src1 != C.compose1(A.h(x, y), A.h(y, z)) or m.dst1 != A.h(x, z):
            return _structural("composition boundary", (x, y, z))
    for x, y, z, w in itertools.product(obs, repeat=4):
        if _empty(C, A.h(x, y), A.h(y, z), A.h(z, w)):
            continue
        t = Comp(Comp(A.h(x, y), A.h(y, z)), A.h(z, w))
        lhs = Chain(C, t).apply("g", A.comp[(x, y, z)]).apply("", A.comp[(x, z, w)]).done()
        rhs = (
            Chain(C, t)
            .regroup(Comp(A.h(x, y), Comp(A.h(y, z), A.h(z, w))))
            .apply("f", A.comp[(y, z, w)])
            .apply("", A.comp[(x, y, w)])
            .done()
        )
        if not C.eq2(lhs, rhs):
            return _fail("associativity", (x, y, z, w))
    for x, y in itertools.product(obs, repeat=2):
        one_x, one_y = C.id1(A.ext(x)), C.id1(A.ext(y))
        lhs = Chain(C, Comp(one_x, A.h(x, y))).apply("g", A.unit[x]).apply("", A.comp[(x, x, y)]).done()
        if not C.eq2(lhs, C.left_unitor(A.h(x, y))[0]):
            return _fail("left unit", (x, y))
        lhs = Chain(C, Comp(A.h(x, y), one_y)).apply("f", A.unit[y]).apply("", A.comp[(x, y, y)]).done()
        if not C.eq2(lhs, C.right_unitor(A.h(x, y))[0]):
            return _fail("right unit", (x, y))
    return PASS


def _validate_module(T: EModule) -> Report:
    A, B = T.src, T.dst
    C = A.base
    for u, x in itertools.product(B.objects, A.objects):
        c = T.comp[(u, x)]
        if (c.src, c.dst) != (A.ext(x), B.ext(u)):
            return _structural("component boundary", (u, x))
    for u, x, y in itertools.product(B.objects, A.objects, A.objects):
        r = T.ract[(u, x, y)]
        if r.src1 != C.compose1(T.comp[(u, x)], A.h(x, y)) or r.dst1 != T.comp[(u, y)]:
            return _structural("right action boundary", (u, x, y))
    for u, v, x in itertools.product(B.objects, B.objects, A.objects):
        l = T.lact[(u, v, x)]
        if l.src1 != C.compose1(B.h(u, v), T.comp[(v, x)]) or l.dst1 != T.comp[(u, x)]:
            return _structural("left action boundary", (u, v, x))
    for axiom, where, _, holds in module_checks(T):
        if not holds():
            return _fail(axiom, where)
    return PASS


def _empty(C, *cells) -> bool:
    # a composite with an initial factor is initial, so any two cells out of it agree
    return any(C.is_initial(c) for c in cells)


def module_checks(T: EModule):
    """Yield ``(axiom, where, keys, holds)`` for every module axiom.

    ``keys`` name the data each check reads: ``("c", u, x)`` for a component,
    ``("r", u, x, y)`` and ``("l", u, v, x)`` for action cells.  ``holds``
    reads ``T``'s dictionaries when called, so partial assignments work.
    """
    A, B = T.src, T.dst
    C = A.base

    def right_assoc(u, x, y, z):
        if _empty(C, T.comp[(u, x)], A.h(x, y), A.h(y, z)):
            return True
        t = Comp(Comp(T.comp[(u, x)], A.h(x, y)), A.h(y, z))
        lhs = Chain(C, t).apply("g", T.ract[(u, x, y)]).apply("", T.ract[(u, y, z)]).done()
        rhs = (
            Chain(C, t)
            .regroup(Comp(T.comp[(u, x)], Comp(A.h(x, y), A.h(y, z))))
            .apply("f", A.comp[(x, y, z)])
            .apply("", T.ract[(u, x, z)])
            .done()
        )
        return C.eq2(lhs, rhs)

    def right_unit(u, x):
        t = Comp(T.comp[(u, x)], C.id1(A.ext(x)))
        lhs = Chain(C, t).apply("f", A.unit[x]).apply("", T.ract[(u, x, x)]).done()
        return C.eq2(lhs, C.right_unitor(T.comp[(u, x)])[0])

    def left_unit(u, x):
        t = Comp(C.id1(B.ext(u)), T.comp[(u, x)])
        lhs = Chain(C, t).apply("g", B.unit[u]).apply("", T.lact[(u, u, x)]).done()
        return C.eq2(lhs, C.left_unitor(T.comp[(u, x)])[0])

    def left_assoc(u, v, w, x):
        if _empty(C, B.h(u, v), B.h(v, w), T.comp[(w, x)]):
            return True
        t = Comp(B.h(u, v), Comp(B.h(v, w), T.comp[(w, x)]))
        lhs = Chain(C, t).apply("f", T.lact[(v, w, x)]).apply("", T.lact[(u, v, x)]).done()
        rhs = (
            Chain(C, t)
            .regroup(Comp(Comp(B.h(u, v), B.h(v, w)), T.comp[(w, x)]))
            .apply("g", B.comp[(u, v, w)])
            .apply("", T.lact[(u, w, x)])
            .done()
        )
        return C.eq2(lhs, rhs)

    def commute(u, v, x, y):
        if _empty(C, B.h(u, v), T.comp[(v, x)], A.h(x, y)):
            return True
        t = Comp(Comp(B.h(u, v), T.comp[(v, x)]), A.h(x, y))
        lhs = Chain(C, t).apply("g", T.lact[(u, v, x)]).apply("", T.ract[(u, x, y)]).done()
        rhs = (
            Chain(C, t)
            .regroup(Comp(B.h(u, v), Comp(T.comp[(v, x)], A.h(x, y))))
            .apply("f", T.ract[(v, x, y)])
            .apply("", T.lact[(u, v, y)])
            .done()
        )
        return C.eq2(lhs, rhs)

    for u, x in itertools.product(B.objects, A.objects):
        keys = [("c", u, x), ("r", u, x, x)]
        yield "right action unit", (u, x), keys, lambda u=u, x=x: right_unit(u, x)
        keys = [("c", u, x), ("l", u, u, x)]
        yield "left action unit", (u, x), keys, lambda u=u, x=x: left_unit(u, x)
    for u, x, y, z in itertools.product(B.objects, A.objects, A.objects, A.objects):
        keys = [("c", u, x), ("r", u, x, y), ("r", u, y, z), ("r", u, x, z)]
        yield "right action associativity", (u, x, y, z), keys, lambda k=(u, x, y, z): right_assoc(*k)
    for u, v, w, x in itertools.product(B.objects, B.objects, B.objects, A.objects):
        keys = [("c", w, x), ("l", v, w, x), ("l", u, v, x), ("l", u, w, x)]
        yield "left action associativity", (u, v, w, x), keys, lambda k=(u, v, w, x): left_assoc(*k)
    for u, v, x, y in itertools.product(B.objects, B.objects, A.objects, A.objects):
        keys = [("c", v, x), ("l", u, v, x), ("r", u, x, y), ("r", v, x, y), ("l", u, v, y)]
        yield "actions commute", (u, v, x, y), keys, lambda k=(u, v, x, y): commute(*k)


def _validate_modcell(f: ModCell) -> Report:
    T, S = f.src1, f.dst1
    A, B = T.src, T.dst
    C = A.base
    for u, x in itertools.product(B.objects, A.objects):
        c = f.comp[(u, x)]
        if c.src1 != T.comp[(u, x)] or c.dst1 != S.comp[(u, x)]:
            return _structural("cell boundary", (u, x))
    for u, x, y in itertools.product(B.objects, A.objects, A.objects):
        t = Comp(T.comp[(u, x)], A.h(x, y))
        lhs = Chain(C, t).apply("", T.ract[(u, x, y)]).apply("", f.comp[(u, y)]).done()
        rhs = Chain(C, t).apply("g", f.comp[(u, x)]).apply("", S.ract[(u, x, y)]).done()
        if not C.eq2(lhs, rhs):
            return _fail("right equivariance", (u, x, y))
    for u, v, x in itertools.product(B.objects, B.objects, A.objects):
        t = Comp(B.h(u, v), T.comp[(v, x)])
        lhs = Chain(C, t).apply("", T.lact[(u, v, x)]).apply("", f.comp[(u, x)]).done()
        rhs = Chain(C, t).apply("f", f.comp[(v, x)]).apply("", S.lact[(u, v, x)]).done()
        if not C.eq2(lhs, rhs):
            return _fail("left equivariance", (u, v, x))
    return PASS


def _validate_functor(D: EFunctor) -> Report:
    A, B = D.src, D.dst
    C = A.base
    for x in A.objects:
        c = D.cell[x]
        if (c.src, c.dst) != (A.ext(x), B.ext(D.obj[x])):
            return _structural("cell boundary", (x,))
        if not C.is_tight(c):
            return _structural("tightness", (x,), "functor cell is not tight")
    for x, y in itertools.product(A.objects, repeat=2):
        s = D.sq[(x, y)]
        if s.src1 != C.compose1(D.cell[x], A.h(x, y)) or s.dst1 != C.compose1(B.h(D.obj[x], D.obj[y]), D.cell[y]):
            return _structural("square boundary", (x, y))
    for axiom, where, _, holds in functor_checks(D):
        if not holds():
            return _fail(axiom, where)
    return PASS


def functor_checks(D: EFunctor):
    """Yield ``(axiom, where, keys, holds)``; keys are ``("o", x)`` and ``("s", x, y)``."""
    A, B = D.src, D.dst
    C = A.base

    def composition(x, y, z):
        Dx, Dy, Dz = D.obj[x], D.obj[y], D.obj[z]
        t = Comp(D.cell[x], Comp(A.h(x, y), A.h(y, z)))
        lhs = Chain(C, t).apply("f", A.comp[(x, y, z)]).apply("", D.sq[(x, z)]).done()
        rhs = (
            Chain(C, t)
            .regroup(Comp(Comp(D.cell[x], A.h(x, y)), A.h(y, z)))
            .apply("g", D.sq[(x, y)], Comp(B.h(Dx, Dy), D.cell[y]))
            .regroup(Comp(B.h(Dx, Dy), Comp(D.cell[y], A.h(y, z))))
            .apply("f", D.sq[(y, z)], Comp(B.h(Dy, Dz), D.cell[z]))
            .regroup(Comp(Comp(B.h(Dx, Dy), B.h(Dy, Dz)), D.cell[z]))
            .apply("g", B.comp[(Dx, Dy, Dz)])
            .done()
        )
        return C.eq2(lhs, rhs)

    def unit(x):
        t = Comp(D.cell[x], C.id1(A.ext(x)))
        lhs = Chain(C, t).apply("f", A.unit[x]).apply("", D.sq[(x, x)]).done()
        rhs = Chain(C, t).apply("", C.right_unitor(D.cell[x])[0]).lam_inv("").apply("g", B.unit[D.obj[x]]).done()
        return C.eq2(lhs, rhs)

    for x in A.objects:
        yield "functor unit", (x,), [("o", x), ("s", x, x)], lambda x=x: unit(x)
    for x, y, z in itertools.product(A.objects, repeat=3):
        keys = [("o", x), ("o", y), ("o", z), ("s", x, y), ("s", y, z), ("s", x, z)]
        yield "functor composition", (x, y, z), keys, lambda k=(x, y, z): composition(*k)


def _validate_transformation(th: ETransformation) -> Report:
    D, E = th.src, th.dst
    A, B = D.src, D.dst
    C = A.base
    for x in A.objects:
        c = th.comp[x]
        if c.src1 != D.cell[x] or c.dst1 != C.compose1(B.h(D.obj[x], E.obj[x]), E.cell[x]):
            return _structural("component boundary", (x,))
    for x, y in itertools.product(A.objects, repeat=2):
        Dx, Dy, Ex, Ey = D.obj[x], D.obj[y], E.obj[x], E.obj[y]
        t = Comp(D.cell[x], A.h(x, y))
        lhs = (
            Chain(C, t)
            .apply("", D.sq[(x, y)], Comp(B.h(Dx, Dy), D.cell[y]))
            .apply("f", th.comp[y], Comp(B.h(Dy, Ey), E.cell[y]))
            .regroup(Comp(Comp(B.h(Dx, Dy), B.h(Dy, Ey)), E.cell[y]))
            .apply("g", B.comp[(Dx, Dy, Ey)])
            .done()
        )
        rhs = (
            Chain(C, t)
            .apply("g", th.comp[x], Comp(B.h(Dx, Ex), E.cell[x]))
            .regroup(Comp(B.h(Dx, Ex), Comp(E.cell[x], A.h(x, y))))
            .apply("f", E.sq[(x, y)], Comp(B.h(Ex, Ey), E.cell[y]))
            .regroup(Comp(Comp(B.h(Dx, Ex), B.h(Ex, Ey)), E.cell[y]))
            .apply("g", B.comp[(Dx, Ex, Ey)])
            .done()
        )
        if not C.eq2(lhs, rhs):
            return _fail("transformation naturality", (x, y))
    return PASS


def _validate_icon(g: EIcon) -> Report:
    D, E = g.src, g.dst
    A, B = D.src, D.dst
    C = A.base
    if D.obj != E.obj:
        return _structural("object maps", (), "icons need functors that agree on objects")
    for x in A.objects:
        c = g.comp[x]
        if c.src1 != D.cell[x] or c.dst1 != E.cell[x]:
            return _structural("component boundary", (x,))
    for x, y in itertools.product(A.objects, repeat=2):
        t = Comp(D.cell[x], A.h(x, y))
        lhs = Chain(C, t).apply("g", g.comp[x]).apply("", E.sq[(x, y)]).done()
        rhs = Chain(C, t).apply("", D.sq[(x, y)], Comp(B.h(D.obj[x], D.obj[y]), D.cell[y])).apply("f", g.comp[y]).done()
        if not C.eq2(lhs, rhs):
            return _fail("icon naturality", (x, y))
    return PASS


# ---------------------------------------------------------------------------
# constructions


STAR = "*"


def hat_cat(base: Base, v) -> ECategory:
    one = base.id1(v)
    return ECategory(
        base,
        (STAR,),
        {STAR: v},
        {(STAR, STAR): one},
        {(STAR, STAR, STAR): base.left_unitor(one)[0]},
        {STAR: base.id2(one)},
        f"hat({v!r})",
    )


def hat_mor(base: Base, f) -> EFunctor:
    if not base.is_tight(f):
        raise BaseError("hat_mor needs a tight 1-cell")
    sq = base.vcomp(base.left_unitor(f)[1], base.right_unitor(f)[0])
    return EFunctor(hat_cat(base, f.src), hat_cat(base, f.dst), {STAR: STAR}, {STAR: f}, {(STAR, STAR): sq})


def hat_loose(base: Base, f) -> EModule:
    return EModule(
        hat_cat(base, f.src),
        hat_cat(base, f.dst),
        {(STAR, STAR): f},
        {(STAR, STAR, STAR): base.right_unitor(f)[0]},
        {(STAR, STAR, STAR): base.left_unitor(f)[0]},
        "hat",
    )


def hat_2cell(base: Base, a) -> ModCell:
    return ModCell(hat_loose(base, a.src1), hat_loose(base, a.dst1), {(STAR, STAR): a})


def discrete_cat(base: Base, extents: dict, name: str = "discrete") -> ECategory:
    """Identity homs on the diagonal and initial 1-cells elsewhere."""
    obs = tuple(extents)
    hom = {
        (x, y): base.id1(extents[x]) if x == y else base.initial(extents[y], extents[x])
        for x in obs
        for y in obs
    }
    comp = {}
    for x, y, z in itertools.product(obs, repeat=3):
        src = base.compose1(hom[(x, y)], hom[(y, z)])
        if x == y == z:
            comp[(x, y, z)] = base.left_unitor(hom[(x, x)])[0]
        else:
            comp[(x, y, z)] = base.from_initial(src, hom[(x, z)])
    unit = {x: base.id2(hom[(x, x)]) for x in obs}
    return ECategory(base, obs, dict(extents), hom, comp, unit, name)


def efun_id(A: ECategory) -> EFunctor:
    C = A.base
    cell = {x: C.id1(A.ext(x)) for x in A.objects}
    sq = {}
    for x, y in itertools.product(A.objects, repeat=2):
        sq[(x, y)] = Chain(C, Comp(cell[x], A.h(x, y))).apply("", C.left_unitor(A.h(x, y))[0]).rho_inv("").done()
    return EFunctor(A, A, {x: x for x in A.objects}, cell, sq)


def efun_compose(E: EFunctor, D: EFunctor) -> EFunctor:
    A, B, Cc = D.src, D.dst, E.dst
    C = A.base
    if E.src is not B and E.src != B:
        raise BaseError("functors are not composable")
    obj = {x: E.obj[D.obj[x]] for x in A.objects}
    cell = {x: C.compose1(E.cell[D.obj[x]], D.cell[x]) for x in A.objects}
    sq = {}
    for x, y in itertools.product(A.objects, repeat=2):
        Dx, Dy = D.obj[x], D.obj[y]
        sq[(x, y)] = (
            Chain(C, Comp(Comp(E.cell[Dx], D.cell[x]), A.h(x, y)))
            .regroup(Comp(E.cell[Dx], Comp(D.cell[x], A.h(x, y))))
            .apply("f", D.sq[(x, y)], Comp(B.h(Dx, Dy), D.cell[y]))
            .regroup(Comp(Comp(E.cell[Dx], B.h(Dx, Dy)), D.cell[y]))
            .apply("g", E.sq[(Dx, Dy)], Comp(Cc.h(E.obj[Dx], E.obj[Dy]), E.cell[Dy]))
            .regroup(Comp(Cc.h(E.obj[Dx], E.obj[Dy]), Comp(E.cell[Dy], D.cell[y])))
            .done()
        )
    return EFunctor(A, Cc, obj, cell, sq)


def efun_associator_icon(E: EFunctor, D: EFunctor, F: EFunctor) -> EIcon:
    """The invertible icon ``(E D) F => E (D F)``."""
    C = F.src.base
    left, right = efun_compose(efun_compose(E, D), F), efun_compose(E, efun_compose(D, F))
    comp = {}
    for x in F.src.objects:
        Fx = F.obj[x]
        comp[x] = C.associator(F.cell[x], D.cell[Fx], E.cell[D.obj[Fx]])[0]
    return EIcon(left, right, comp)


def efun_unitor_icons(D: EFunctor) -> tuple[EIcon, EIcon]:
    """Icons ``1 D => D`` and ``D 1 => D``."""
    C = D.src.base
    one_d = efun_compose(efun_id(D.dst), D)
    d_one = efun_compose(D, efun_id(D.src))
    left = EIcon(one_d, D, {x: C.left_unitor(D.cell[x])[0] for x in D.src.objects})
    right = EIcon(d_one, D, {x: C.right_unitor(D.cell[x])[0] for x in D.src.objects})
    return left, right


def icon_to_trans(g: EIcon) -> ETransformation:
    D, E = g.src, g.dst
    B = D.dst
    C = B.base
    comp = {}
    for x in D.src.objects:
        comp[x] = Chain(C, D.cell[x]).apply("", g.comp[x]).lam_inv("").apply("g", B.unit[D.obj[x]]).done()
    return ETransformation(D, E, comp)


def etrans_id(D: EFunctor) -> ETransformation:
    C = D.src.base
    return icon_to_trans(EIcon(D, D, {x: C.id2(D.cell[x]) for x in D.src.objects}))


def etrans_vcompose(s: ETransformation, t: ETransformation) -> ETransformation:
    """``s . t`` for ``t: D => E`` and ``s: E => F``."""
    D, E, F = t.src, t.dst, s.dst
    B = D.dst
    C = B.base
    comp = {}
    for x in D.src.objects:
        Dx, Ex, Fx = D.obj[x], E.obj[x], F.obj[x]
        comp[x] = (
            Chain(C, D.cell[x])
            .apply("", t.comp[x], Comp(B.h(Dx, Ex), E.cell[x]))
            .apply("f", s.comp[x], Comp(B.h(Ex, Fx), F.cell[x]))
            .regroup(Comp(Comp(B.h(Dx, Ex), B.h(Ex, Fx)), F.cell[x]))
            .apply("g", B.comp[(Dx, Ex, Fx)])
            .done()
        )
    return ETransformation(D, F, comp)


def etrans_whisker_left(E: EFunctor, t: ETransformation) -> ETransformation:
    """``E t`` for ``t: D => D'`` and ``E`` after them."""
    D, D2 = t.src, t.dst
    B, Cc = D.dst, E.dst
    C = B.base
    comp = {}
    for x in D.src.objects:
        Dx, D2x = D.obj[x], D2.obj[x]
        comp[x] = (
            Chain(C, Comp(E.cell[Dx], D.cell[x]))
            .apply("f", t.comp[x], Comp(B.h(Dx, D2x), D2.cell[x]))
            .regroup(Comp(Comp(E.cell[Dx], B.h(Dx, D2x)), D2.cell[x]))
            .apply("g", E.sq[(Dx, D2x)], Comp(Cc.h(E.obj[Dx], E.obj[D2x]), E.cell[D2x]))
            .regroup(Comp(Cc.h(E.obj[Dx], E.obj[D2x]), Comp(E.cell[D2x], D2.cell[x])))
            .done()
        )
    return ETransformation(efun_compose(E, D), efun_compose(E, D2), comp)


def etrans_whisker_right(t: ETransformation, D: EFunctor) -> ETransformation:
    """``t D`` for ``t: E => E'`` and ``D`` before them."""
    E, E2 = t.src, t.dst
    Cc = E.dst
    C = Cc.base
    comp = {}
    for x in D.src.objects:
        Dx = D.obj[x]
        comp[x] = (
            Chain(C, Comp(E.cell[Dx], D.cell[x]))
            .apply("g", t.comp[Dx], Comp(Cc.h(E.obj[Dx], E2.obj[Dx]), E2.cell[Dx]))
            .regroup(Comp(Cc.h(E.obj[Dx], E2.obj[Dx]), Comp(E2.cell[Dx], D.cell[x])))
            .done()
        )
    return ETransformation(efun_compose(E, D), efun_compose(E2, D), comp)


def transport_category(A: ECategory, F) -> ECategory:
    """Apply a base morphism to every cell of ``A``."""
    return ECategory(
        F.dst,
        A.objects,
        {x: F.obj(v) for x, v in A.extent.items()},
        {k: F.hom1(v) for k, v in A.hom.items()},
        {k: F.hom2(v) for k, v in A.comp.items()},
        {k: F.hom2(v) for k, v in A.unit.items()},
        A.name,
    )


def transport_module(T: EModule, F, src=None, dst=None) -> EModule:
    return EModule(
        src if src is not None else transport_category(T.src, F),
        dst if dst is not None else transport_category(T.dst, F),
        {k: F.hom1(v) for k, v in T.comp.items()},
        {k: F.hom2(v) for k, v in T.ract.items()},
        {k: F.hom2(v) for k, v in T.lact.items()},
        T.name,
    )


def transport_functor(D: EFunctor, F, src=None, dst=None) -> EFunctor:
    return EFunctor(
        src if src is not None else transport_category(D.src, F),
        dst if dst is not None else transport_category(D.dst, F),
        dict(D.obj),
        {k: F.hom1(v) for k, v in D.cell.items()},
        {k: F.hom2(v) for k, v in D.sq.items()},
    )


# ---------------------------------------------------------------------------
# finite categories as enriched categories


def fincat_to_ecat(K, base: SpanBase | None = None) -> ECategory:
    """A finite category as a one-object category over spans (an internal category).

    The hom span has apex the morphisms, left leg the codomain and right leg
    the domain.
    """
    C = base or SpanBase(ArityClass.SINGLETON)
    n = K.n_objects
    hom = C.span(n, n, [t for _, t in K.mor], [s for s, _ in K.mor])
    src = C.compose1(hom, hom)
    comp = C.cell(src, hom, [K.comp[pq] for pq in C._pairs(hom, hom)])
    unit = C.cell(C.id1(n), hom, K.ident)
    return ECategory(C, (STAR,), {STAR: n}, {(STAR, STAR): hom}, {(STAR, STAR, STAR): comp}, {STAR: unit}, K.name)


def ecat_to_fincat(A: ECategory):
    from .oracle import FinCategory

    C = A.base
    hom = A.h(STAR, STAR)
    left, right = hom.data
    mor = tuple(zip(right, left))
    comp = {pq: v for pq, v in zip(C._pairs(hom, hom), A.comp[(STAR, STAR, STAR)].data)}
    return FinCategory(A.ext(STAR), mor, comp, A.unit[STAR].data, A.name)


def fincat_to_finite_ecat(K, base: Base | None = None, name: str | None = None) -> ECategory:
    """A finite category as a many-object category with one-element extents.

    Over spans ``A(x, y)`` is the set of morphisms ``x -> y``; over a
    quantale base it is the unit when that set is nonempty and bottom
    otherwise.
    """
    C = base or SpanBase(ArityClass.FINITE)
    obs = tuple(range(K.n_objects))
    hom, comp, unit = {}, {}, {}
    homs = {(x, y): K.hom(x, y) for x in obs for y in obs}
    if isinstance(C, SpanBase):
        for (x, y), ms in homs.items():
            hom[(x, y)] = C.span(1, 1, [0] * len(ms), [0] * len(ms))
        for x, y, z in itertools.product(obs, repeat=3):
            src = C.compose1(hom[(x, y)], hom[(y, z)])
            where = {m: i for i, m in enumerate(homs[(x, z)])}
            fn = [where[K.comp[(homs[(y, z)][p], homs[(x, y)][q])]] for p, q in C._pairs(hom[(x, y)], hom[(y, z)])]
            comp[(x, y, z)] = C.cell(src, hom[(x, z)], fn)
        for x in obs:
            unit[x] = C.cell(C.id1(1), hom[(x, x)], [homs[(x, x)].index(K.ident[x])])
    else:
        q = C.q
        for (x, y), ms in homs.items():
            hom[(x, y)] = Hom1(1, 1, ((q.unit if ms else q.bottom,),))
        for x, y, z in itertools.product(obs, repeat=3):
            comp[(x, y, z)] = C.cell(C.compose1(hom[(x, y)], hom[(y, z)]), hom[(x, z)])
        for x in obs:
            unit[x] = C.cell(C.id1(1), hom[(x, x)])
    return ECategory(C, obs, {x: 1 for x in obs}, hom, comp, unit, name or K.name)


def profunctor_to_emodule(P, A: ECategory, B: ECategory) -> EModule:
    """A profunctor between finite categories as a module between their one-object forms."""
    C = A.base
    span = C.span(A.ext(STAR), B.ext(STAR), [x for _, x in P.elems], [u for u, _ in P.elems])
    a, b = A.h(STAR, STAR), B.h(STAR, STAR)
    ract = C.cell(C.compose1(span, a), span, [P.act_src[(p, q)] for p, q in C._pairs(span, a)])
    lact = C.cell(C.compose1(b, span), span, [P.act_dst[(p, q)] for p, q in C._pairs(b, span)])
    return EModule(A, B, {(STAR, STAR): span}, {(STAR, STAR, STAR): ract}, {(STAR, STAR, STAR): lact}, "P")


def emodule_to_profunctor(T: EModule, K, L):
    """Read a one-object span module back as a profunctor ``K -> L``."""
    C = T.src.base
    span = T.comp[(STAR, STAR)]
    a, b = T.src.h(STAR, STAR), T.dst.h(STAR, STAR)
    r, l = T.ract[(STAR, STAR, STAR)], T.lact[(STAR, STAR, STAR)]
    elems = tuple(zip(span.data[1], span.data[0]))
    act_src = dict(zip(C._pairs(span, a), r.data))
    act_dst = dict(zip(C._pairs(b, span), l.data))
    from .oracle import Profunctor

    return Profunctor(K, L, elems, act_src, act_dst)


def finfunctor_to_efunctor(F, A: ECategory, B: ECategory) -> EFunctor:
    C = A.base
    n = A.ext(STAR)
    cell = C.span(n, B.ext(STAR), range(n), F.obj)
    a, b = A.h(STAR, STAR), B.h(STAR, STAR)
    src, dst = C.compose1(cell, a), C.compose1(b, cell)
    where = {pq: i for i, pq in enumerate(C._pairs(b, cell))}
    fn = [where[(a.data[0][m], F.mor[m])] for m, _ in C._pairs(cell, a)]
    return EFunctor(A, B, {STAR: STAR}, {STAR: cell}, {(STAR, STAR): C.cell(src, dst, fn)})


def efunctor_to_finfunctor(D: EFunctor, K, L):
    from .oracle import FinFunctor

    C = D.src.base
    cell = C.tighten(D.cell[STAR])
    pairs = C._pairs(D.dst.h(STAR, STAR), D.cell[STAR])
    mor = tuple(pairs[i][1] for i in D.sq[(STAR, STAR)].data)
    return FinFunctor(K, L, tuple(cell.data[1]), mor)


def nattransf_to_etrans(t, D: EFunctor, E: EFunctor) -> ETransformation:
    C = D.src.base
    b = D.dst.h(STAR, STAR)
    dst = C.compose1(b, E.cell[STAR])
    where = {pq: i for i, pq in enumerate(C._pairs(b, E.cell[STAR]))}
    fn = [where[(x, t.comp[x])] for x in range(D.src.ext(STAR))]
    return ETransformation(D, E, {STAR: C.cell(D.cell[STAR], dst, fn)})


def etrans_to_nattransf(th: ETransformation, F, G):
    from .oracle import NatTransf

    C = th.src.src.base
    pairs = C._pairs(th.src.dst.h(STAR, STAR), th.dst.cell[STAR])
    return NatTransf(F, G, tuple(pairs[i][1] for i in th.comp[STAR].data))


def enum_singleton_functors(A: ECategory, B: ECategory) -> list[EFunctor]:
    """All validated functors between one-object categories over spans.

    Candidate squares are all leg-preserving functions, except that the
    image of each identity is forced by the unit axiom; every candidate is
    then checked with ``validate``.
    """
    C = A.base
    a, b = A.h(STAR, STAR), B.h(STAR, STAR)
    out = []
    for cell in C.enum_tight(A.ext(STAR), B.ext(STAR)):
        src, dst = C.compose1(cell, a), C.compose1(b, cell)
        forced = _forced_by_unit(C, A, B, cell)
        if forced is None:
            continue
        fibers = C._fibers(dst)
        options = []
        for p, lr in enumerate(zip(*src.data)):
            opts = fibers.get(lr, [])
            if p in forced:
                opts = [forced[p]] if forced[p] in opts else []
            options.append(opts)
        for fn in itertools.product(*options):
            D = EFunctor(A, B, {STAR: STAR}, {STAR: cell}, {(STAR, STAR): C.cell(src, dst, fn)})
            if validate(D).ok:
                out.append(D)
    return out


def _forced_by_unit(C, A, B, cell):
    # the unit axiom fixes the square on the image of D o j
    t = Comp(cell, C.id1(A.ext(STAR)))
    into = Chain(C, t).apply("f", A.unit[STAR]).done()
    target = Chain(C, t).apply("", C.right_unitor(cell)[0]).lam_inv("").apply("g", B.unit[STAR]).done()
    forced = {}
    for i, p in enumerate(into.data):
        if forced.get(p, target.data[i]) != target.data[i]:
            return None
        forced[p] = target.data[i]
    return forced


def enum_singleton_transformations(D: EFunctor, E: EFunctor) -> list[ETransformation]:
    C = D.src.base
    dst = C.compose1(D.dst.h(STAR, STAR), E.cell[STAR])
    out = []
    for cell in C.enum_hom2(D.cell[STAR], dst):
        th = ETransformation(D, E, {STAR: cell})
        if validate(th).ok:
            out.append(th)
    return out
