"""JSON documents for bases, enriched categories, functors and modules.

Every document has ``"schema"`` and ``"version": 1``.  Objects are listed
once and all enriched data is stored in arrays indexed by object position,
so key order never depends on Python dict order.  Infinity is written as
the string ``"inf"``; tuples are written as arrays and read back as tuples.
"""
from __future__ import annotations

import json
import math

from . import __version__
from .base import ArityClass, BaseError, Hom1, Hom2, INF, MatrBase, Quantale, QuantaloidBase, SpanBase
from .enriched import ECategory, EFunctor, EModule, ModCell
from .modcat import ModBase

VERSION = 1
SCHEMAS = ("base", "ecategory", "efunctor", "emodule", "mod-enriched-category", "job")
CHECKS = ("representable", "adjoint", "equivalence", "collage", "tight-collage", "decompose", "idempotence", "absolute")


class DocumentError(ValueError):
    """A document that does not match its schema."""


def dumps(doc) -> str:
    """Canonical text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def enc_value(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    if isinstance(v, (tuple, list)):
        return [enc_value(x) for x in v]
    return v


def dec_value(v):
    if v == "inf":
        return INF
    if isinstance(v, list):
        return tuple(dec_value(x) for x in v)
    return v


# ---------------------------------------------------------------------------
# bases


def enc_base(C) -> dict:
    if isinstance(C, SpanBase):
        return {"kind": "span", "arity": C.arity.value}
    if isinstance(C, QuantaloidBase):
        q = C.q
        els = list(q.elements)
        return {
            "kind": "quantaloid",
            "arity": C.arity.value,
            "quantale": {
                "name": q.name,
                "elements": enc_value(els),
                "join": [[enc_value(q.join(a, b)) for b in els] for a in els],
                "tensor": [[enc_value(q.tensor(a, b)) for b in els] for a in els],
                "unit": enc_value(q.unit),
            },
        }
    if isinstance(C, MatrBase):
        return {"kind": "matr", "inner": enc_base(C.inner)}
    if isinstance(C, ModBase):
        return {"kind": "mod", "arity": C.arity.value, "inner": enc_base(C.inner)}
    raise DocumentError(f"no document form for {C!r}")


def dec_base(d):
    kind = d.get("kind")
    if kind == "span":
        return SpanBase(ArityClass(d["arity"]))
    if kind == "quantaloid":
        qd = d["quantale"]
        els = [dec_value(e) for e in qd["elements"]]
        join = {(a, b): dec_value(qd["join"][i][j]) for i, a in enumerate(els) for j, b in enumerate(els)}
        tensor = {(a, b): dec_value(qd["tensor"][i][j]) for i, a in enumerate(els) for j, b in enumerate(els)}
        q = Quantale(els, join, tensor, dec_value(qd["unit"]), qd.get("name", "Q"))
        return QuantaloidBase(q, ArityClass(d.get("arity", "finite")))
    if kind == "matr":
        return MatrBase(dec_base(d["inner"]))
    if kind == "mod":
        return ModBase(dec_base(d["inner"]), ArityClass(d.get("arity", "finite")))
    raise DocumentError(f"unknown base kind {kind!r}")


# ---------------------------------------------------------------------------
# objects, 1-cells and 2-cells of each base


def enc_obj(C, a):
    if isinstance(C, ModBase):
        return enc_ecat(a, with_base=False)
    if isinstance(C, MatrBase):
        return [enc_obj(C.inner, x) for x in a]
    return a


def dec_obj(C, d):
    if isinstance(C, ModBase):
        return dec_ecat(d, C.inner)
    if isinstance(C, MatrBase):
        return tuple(dec_obj(C.inner, x) for x in d)
    if not isinstance(d, int):
        raise DocumentError(f"object of {C!r} must be an integer, got {d!r}")
    return d


def enc_hom1(C, f):
    if isinstance(C, SpanBase):
        return {"apex": SpanBase.apex(f), "left": list(f.data[0]), "right": list(f.data[1])}
    if isinstance(C, QuantaloidBase):
        return {"rows": enc_value(f.data)}
    if isinstance(C, MatrBase):
        return {"entries": [[enc_hom1(C.inner, e) for e in row] for row in f.data]}
    if isinstance(C, ModBase):
        return enc_module(f, with_ends=False)
    raise DocumentError(f"no document form for 1-cells of {C!r}")


def dec_hom1(C, d, a, b):
    """Decode a 1-cell ``a -> b``."""
    if isinstance(C, SpanBase):
        if len(d["left"]) != d.get("apex", len(d["left"])):
            raise DocumentError("span apex does not match its legs")
        return C.span(a, b, d["left"], d["right"])
    if isinstance(C, QuantaloidBase):
        return C.matrix(a, b, dec_value(d["rows"]))
    if isinstance(C, MatrBase):
        rows = tuple(
            tuple(dec_hom1(C.inner, e, a[i], b[k]) for i, e in enumerate(row)) for k, row in enumerate(d["entries"])
        )
        return Hom1(a, b, rows)
    if isinstance(C, ModBase):
        return dec_module(d, C.inner, a, b)
    raise DocumentError(f"no document form for 1-cells of {C!r}")


def enc_hom2(C, a):
    if isinstance(C, SpanBase):
        return list(a.data)
    if isinstance(C, QuantaloidBase):
        return None
    if isinstance(C, MatrBase):
        return [[enc_hom2(C.inner, e) for e in row] for row in a.data]
    if isinstance(C, ModBase):
        T = a.src1
        return [[enc_hom2(C.inner, a.comp[(u, x)]) for x in T.src.objects] for u in T.dst.objects]
    raise DocumentError(f"no document form for 2-cells of {C!r}")


def dec_hom2(C, d, src, dst):
    if isinstance(C, SpanBase):
        return C.cell(src, dst, d)
    if isinstance(C, QuantaloidBase):
        return C.cell(src, dst)
    if isinstance(C, MatrBase):
        rows = tuple(
            tuple(dec_hom2(C.inner, e, src.data[k][i], dst.data[k][i]) for i, e in enumerate(row))
            for k, row in enumerate(d)
        )
        return Hom2(src, dst, rows)
    if isinstance(C, ModBase):
        comp = {
            (u, x): dec_hom2(C.inner, d[k][i], src.comp[(u, x)], dst.comp[(u, x)])
            for k, u in enumerate(src.dst.objects)
            for i, x in enumerate(src.src.objects)
        }
        return ModCell(src, dst, comp)
    raise DocumentError(f"no document form for 2-cells of {C!r}")


# ---------------------------------------------------------------------------
# enriched structures


def enc_ecat(A: ECategory, with_base: bool = True) -> dict:
    C, obs = A.base, A.objects
    d = {
        "name": A.name,
        "objects": enc_value(list(obs)),
        "extent": [enc_obj(C, A.ext(x)) for x in obs],
        "hom": [[enc_hom1(C, A.h(x, y)) for y in obs] for x in obs],
        "comp": [[[enc_hom2(C, A.comp[(x, y, z)]) for z in obs] for y in obs] for x in obs],
        "unit": [enc_hom2(C, A.unit[x]) for x in obs],
    }
    if with_base:
        d["base"] = enc_base(C)
    return d


def dec_ecat(d, C=None) -> ECategory:
    if C is None:
        C = dec_base(d["base"])
    obs = tuple(dec_value(x) for x in d["objects"])
    if len(set(obs)) != len(obs):
        raise DocumentError("repeated object name")
    n = len(obs)
    for key in ("extent", "unit"):
        if len(d[key]) != n:
            raise DocumentError(f"{key} has the wrong length")
    extent = {x: dec_obj(C, e) for x, e in zip(obs, d["extent"])}
    hom = {}
    for i, x in enumerate(obs):
        for j, y in enumerate(obs):
            hom[(x, y)] = dec_hom1(C, d["hom"][i][j], extent[y], extent[x])
    comp = {}
    for i, x in enumerate(obs):
        for j, y in enumerate(obs):
            for k, z in enumerate(obs):
                src = C.compose1(hom[(x, y)], hom[(y, z)])
                comp[(x, y, z)] = dec_hom2(C, d["comp"][i][j][k], src, hom[(x, z)])
    unit = {x: dec_hom2(C, d["unit"][i], C.id1(extent[x]), hom[(x, x)]) for i, x in enumerate(obs)}
    return ECategory(C, obs, extent, hom, comp, unit, d.get("name", "A"))


def enc_module(T: EModule, with_ends: bool = True) -> dict:
    A, B = T.src, T.dst
    C = A.base
    d = {
        "name": T.name,
        "components": [[enc_hom1(C, T.comp[(u, x)]) for x in A.objects] for u in B.objects],
        "ract": [[[enc_hom2(C, T.ract[(u, x, y)]) for y in A.objects] for x in A.objects] for u in B.objects],
        "lact": [[[enc_hom2(C, T.lact[(u, v, x)]) for x in A.objects] for v in B.objects] for u in B.objects],
    }
    if with_ends:
        d["src"] = enc_ecat(A, with_base=False)
        d["dst"] = enc_ecat(B, with_base=False)
        d["base"] = enc_base(C)
    return d


def dec_module(d, C=None, A=None, B=None) -> EModule:
    if C is None:
        C = dec_base(d["base"])
    A = A if A is not None else dec_ecat(d["src"], C)
    B = B if B is not None else dec_ecat(d["dst"], C)
    comp = {}
    for k, u in enumerate(B.objects):
        for i, x in enumerate(A.objects):
            comp[(u, x)] = dec_hom1(C, d["components"][k][i], A.ext(x), B.ext(u))
    ract, lact = {}, {}
    for k, u in enumerate(B.objects):
        for i, x in enumerate(A.objects):
            for j, y in enumerate(A.objects):
                src = C.compose1(comp[(u, x)], A.h(x, y))
                ract[(u, x, y)] = dec_hom2(C, d["ract"][k][i][j], src, comp[(u, y)])
        for j, v in enumerate(B.objects):
            for i, x in enumerate(A.objects):
                src = C.compose1(B.h(u, v), comp[(v, x)])
                lact[(u, v, x)] = dec_hom2(C, d["lact"][k][j][i], src, comp[(u, x)])
    return EModule(A, B, comp, ract, lact, d.get("name", "T"))


def enc_functor(D: EFunctor) -> dict:
    A, B = D.src, D.dst
    C = A.base
    return {
        "base": enc_base(C),
        "src": enc_ecat(A, with_base=False),
        "dst": enc_ecat(B, with_base=False),
        "obj": [B.objects.index(D.obj[x]) for x in A.objects],
        "cell": [enc_hom1(C, D.cell[x]) for x in A.objects],
        "sq": [[enc_hom2(C, D.sq[(x, y)]) for y in A.objects] for x in A.objects],
    }


def dec_functor(d) -> EFunctor:
    C = dec_base(d["base"])
    A, B = dec_ecat(d["src"], C), dec_ecat(d["dst"], C)
    obj = {x: B.objects[d["obj"][i]] for i, x in enumerate(A.objects)}
    cell = {x: dec_hom1(C, d["cell"][i], A.ext(x), B.ext(obj[x])) for i, x in enumerate(A.objects)}
    sq = {}
    for i, x in enumerate(A.objects):
        for j, y in enumerate(A.objects):
            src = C.compose1(cell[x], A.h(x, y))
            dst = C.compose1(B.h(obj[x], obj[y]), cell[y])
            sq[(x, y)] = dec_hom2(C, d["sq"][i][j], src, dst)
    return EFunctor(A, B, obj, cell, sq)


# ---------------------------------------------------------------------------
# documents


def to_document(x) -> dict:
    if isinstance(x, (SpanBase, QuantaloidBase, MatrBase, ModBase)):
        body, schema = enc_base(x), "base"
    elif isinstance(x, ECategory):
        body = enc_ecat(x)
        schema = "mod-enriched-category" if isinstance(x.base, ModBase) else "ecategory"
    elif isinstance(x, EModule):
        body, schema = enc_module(x), "emodule"
    elif isinstance(x, EFunctor):
        body, schema = enc_functor(x), "efunctor"
    else:
        raise DocumentError(f"no document form for {type(x).__name__}")
    return {"schema": schema, "version": VERSION, **body}


def job_document(check: str, inputs: list, cap: int = 4) -> dict:
    if check not in CHECKS:
        raise DocumentError(f"unknown check {check!r}")
    return {"schema": "job", "version": VERSION, "check": check, "cap": cap, "inputs": inputs}


def from_document(doc):
    """Validate the envelope and build the value (jobs come back as dicts)."""
    if not isinstance(doc, dict):
        raise DocumentError("a document is a JSON object")
    schema = doc.get("schema")
    if schema not in SCHEMAS:
        raise DocumentError(f"unknown schema {schema!r}")
    if doc.get("version") != VERSION:
        raise DocumentError(f"unsupported version {doc.get('version')!r}")
    try:
        if schema == "base":
            return dec_base(doc)
        if schema in ("ecategory", "mod-enriched-category"):
            A = dec_ecat(doc)
            if (schema == "mod-enriched-category") != isinstance(A.base, ModBase):
                raise DocumentError("schema does not match the base kind")
            return A
        if schema == "emodule":
            return dec_module(doc)
        if schema == "efunctor":
            return dec_functor(doc)
        if doc.get("check") not in CHECKS:
            raise DocumentError(f"unknown check {doc.get('check')!r}")
        return {
            "check": doc["check"],
            "cap": int(doc.get("cap", 4)),
            "inputs": [from_document(d) for d in doc.get("inputs", [])],
        }
    except (KeyError, IndexError, TypeError, BaseError) as exc:
        raise DocumentError(f"malformed {schema} document: {exc}") from exc


def load(path):
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{path}: not JSON ({exc})") from exc
    return from_document(doc)


def save(x, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(to_document(x) if not isinstance(x, dict) else x))


def report_envelope(command: str, **fields) -> dict:
    return {"schema": "report", "version": VERSION, "tool": f"collagekit {__version__}", "command": command, **fields}
