"""The property suite: one runner per acceptance criterion plus invariant sweeps.

Each runner returns a row ``{"id", "title", "status", "checked", "passed",
"unknown", "failures", ...}`` whose content depends only on the seed and
scale, so reports are byte-identical across runs.
"""
from __future__ import annotations

import ast
import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import corpus
from .base import QuantaloidBase, boolean_quantale, identity_morphism, minplus_truncation, span_to_rel
from .collage import (
    certify_collage,
    collage,
    coproduct_category,
    decompose_check,
    detects_tightness,
    idempotence_probe,
    absoluteness_probe,
    kleisli_check,
    metric_collage_demo,
    mutate_total,
)
from .enriched import (
    emodule_to_profunctor,
    fincat_to_ecat,
    hat_2cell,
    hat_loose,
    profunctor_to_emodule,
    validate,
)
from .modcat import (
    enum_modcells,
    mod_associator,
    mod_compose,
    mod_unitors,
    modcell_eq,
    modcell_id,
    modcell_vcompose,
    module_iso,
    pentagon_check,
    triangle_check,
)
from .oracle import cat1_equiv_check, prof_compose_coend, profunctor_bijection

TIGHT_CAP = 4
KLEISLI_CAP = 4
METRIC_CAP = 10


def threads() -> int:
    try:
        return max(1, int(os.environ.get("COLLAGEKIT_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn, items):
    n = threads()
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _row(ident, title, outcomes, **extra):
    """``outcomes`` are ``(label, status, detail)`` with status PASS/FAIL/UNKNOWN."""
    failures = [{"item": lab, "detail": det} for lab, st, det in outcomes if st == "FAIL"]
    unknown = [lab for lab, st, _ in outcomes if st == "UNKNOWN"]
    passed = sum(st == "PASS" for _, st, _ in outcomes)
    status = "FAIL" if failures else ("UNKNOWN" if unknown else "PASS")
    if not outcomes:
        status = "FAIL"
        failures = [{"item": "-", "detail": "nothing was checked"}]
    row = {
        "id": ident,
        "title": title,
        "status": status,
        "checked": len(outcomes),
        "passed": passed,
        "unknown": unknown,
        "failures": failures,
    }
    row.update(extra)
    return row


def _status(ok):
    return "PASS" if ok else "FAIL"


# ---------------------------------------------------------------------------
# acceptance criteria


def ac1_composition(seed: int, scale: str) -> dict:
    n = 50 * corpus.SIZES[scale]
    triples = corpus.profunctor_triples(seed, n)

    def one(i):
        t = triples[i]
        K, L, M = t.cats
        A, B, C = (fincat_to_ecat(X) for X in t.cats)
        S, T = profunctor_to_emodule(t.first, A, B), profunctor_to_emodule(t.second, B, C)
        composite = mod_compose(T, S).composite
        coend, _ = prof_compose_coend(t.second, t.first)
        read = emodule_to_profunctor(composite, K, M)
        bij = profunctor_bijection(coend, read) if read.check() else None
        ok = validate(composite).ok and bij is not None
        return (f"triple-{i}", _status(ok), "" if ok else f"coend {len(coend.elems)} vs module {len(read.elems)}")

    outcomes = _map(one, range(len(triples)))
    sizes = [len(prof_compose_coend(t.second, t.first)[0].elems) for t in triples]
    return _row("AC1", "module composition agrees with the coend oracle", outcomes, nonempty=sum(s > 0 for s in sizes))


def _laws(chain):
    R, S, T, U = chain
    problems = []
    for M in chain:
        (lam, lam_inv), (rho, rho_inv) = mod_unitors(M)
        for f, g in ((lam, lam_inv), (rho, rho_inv)):
            if not (modcell_eq(modcell_vcompose(g, f), modcell_id(f.src1)) and modcell_eq(modcell_vcompose(f, g), modcell_id(f.dst1))):
                problems.append("unitor not invertible")
    for a, b, c in ((R, S, T), (S, T, U)):
        f, g = mod_associator(a, b, c)
        if not (modcell_eq(modcell_vcompose(g, f), modcell_id(f.src1)) and modcell_eq(modcell_vcompose(f, g), modcell_id(f.dst1))):
            problems.append("associator not invertible")
    if not pentagon_check(R, S, T, U):
        problems.append("pentagon")
    if not triangle_check(R, S):
        problems.append("triangle")
    return problems


def ac2_bicategory(seed: int, scale: str) -> dict:
    n = 20 * corpus.SIZES[scale]
    outcomes, per_base = [], {}
    for kind in ("singleton", "finite", "boolean"):
        chains = [corpus.module_chain(seed * 1000 + i, kind) for i in range(n)]

        def one(i, kind=kind, chains=chains):
            problems = _laws(chains[i])
            return (f"{kind}-{i}", _status(not problems), ", ".join(problems))

        got = _map(one, range(n))
        per_base[kind] = sum(st == "PASS" for _, st, _ in got)
        outcomes += got
    return _row("AC2", "unitors, associators, pentagon and triangle in modules", outcomes, per_base=per_base)


def ac3_hat(seed: int, scale: str) -> dict:
    pairs = corpus.base_cell_pairs(seed, 30 * corpus.SIZES[scale])

    def one(i):
        C, f, g = pairs[i]
        problems = []
        composite = mod_compose(hat_loose(C, g), hat_loose(C, f)).composite
        if module_iso(composite, hat_loose(C, C.compose1(g, f))) is None:
            problems.append("composite")
        # local full faithfulness on f against f and against f + f
        for h in (f, C.coproduct([f, f], f.src, f.dst)[0]):
            base_cells = list(C.enum_hom2(f, h))
            mod_cells = list(enum_modcells(hat_loose(C, f), hat_loose(C, h)))
            # cells with equal boundaries are equal exactly when their components are
            images = {tuple(hat_2cell(C, a).comp.items()) for a in base_cells}
            found = {tuple(m.comp.items()) for m in mod_cells}
            if len(images) != len(base_cells) or images != found or len(found) != len(mod_cells):
                problems.append("2-cells")
        return (f"{C.kind.lower()}-{i}", _status(not problems), ", ".join(problems))

    return _row("AC3", "the hat embedding preserves composites and is locally fully faithful", _map(one, range(len(pairs))))


def ac4_cat1(seed: int, scale: str) -> dict:
    pairs = corpus.category_pairs(seed, 4 * corpus.SIZES[scale])

    def one(i):
        K, L = pairs[i]
        rep = cat1_equiv_check(K, L)
        detail = "" if rep["ok"] else "; ".join(rep["problems"][:3])
        return (f"{K.name}->{L.name}#{i}", _status(rep["ok"]), detail)

    return _row("AC4", "internal categories over spans match finite categories", _map(one, range(len(pairs))))


def _bbs(seed, scale):
    return corpus.bb_corpus(seed, scale)


def ac5_collages(seed: int, scale: str) -> dict:
    entries = _bbs(seed, scale)

    def one(e):
        if not validate(e.bb).ok:
            return (e.label, "FAIL", "input invalid")
        r = collage(e.bb)
        cert = certify_collage(r)
        bad = [c["stage"] + " at " + c["object"] for c in cert["checks"] if not c["ok"]]
        return (e.label, _status(cert["ok"]), "; ".join(bad))

    outcomes = _map(one, entries)
    controls = []
    for e in entries:
        m = mutate_total(collage(e.bb))
        if m is not None:
            cert = certify_collage(m)
            controls.append({"item": e.label, "rejected": not cert["ok"]})
            break
    if not controls or not controls[0]["rejected"]:
        outcomes.append(("negative-control", "FAIL", "mutated collage was not rejected"))
    return _row("AC5", "collages certify; coprojections are maps; the universal module is an equivalence", outcomes, negative_control=controls)


def ac6_special(seed: int, scale: str) -> dict:
    outcomes = []
    for e in corpus.fixed_bbs():
        if e.label.startswith("discrete"):
            r = collage(e.bb)
            same = r.total == coproduct_category(dict(e.bb.extent))
            outcomes.append((e.label, _status(same), "" if same else "total differs from the coproduct"))
    rows = []
    for lab, bb in corpus.kleisli_bbs():
        rep = kleisli_check(collage(bb), cap=KLEISLI_CAP)
        rows.append({"item": lab, "verdict": rep["verdict"], "rows": rep["rows"]})
        st = {"YES": "PASS", "NO": "FAIL", "UNKNOWN": "UNKNOWN"}[rep["verdict"]]
        outcomes.append((f"kleisli-{lab}", st, "" if st == "PASS" else repr(rep["rows"])))
    return _row("AC6", "discrete collages are coproducts; one-object collages are Kleisli objects", outcomes, kleisli=rows, cap=KLEISLI_CAP)


def ac7_decompose(seed: int, scale: str) -> dict:
    entries = _bbs(seed, scale)

    def one(e):
        r = collage(e.bb)
        rep = decompose_check(r.total)
        extra = [decompose_check(E)["ok"] for E in e.bb.extent.values()]
        ok = rep["ok"] and all(extra)
        return (e.label, _status(ok), "" if ok else repr([c for c in rep["checks"] if not c["ok"]]))

    return _row("AC7", "categories and module composites survive the passage through matrices", _map(one, entries))


def ac8_idempotence(seed: int, scale: str) -> dict:
    entries = _bbs(seed, scale)

    def one(e):
        rep = idempotence_probe(e.bb)
        return (e.label, _status(rep["ok"]), "" if rep["ok"] else "equivalence not certified")

    return _row("AC8", "every module-enriched category is equivalent to the hat of its collage", _map(one, entries))


def ac9_tightness(seed: int, scale: str) -> dict:
    entries = [e for e in _bbs(seed, scale) if e.kind in ("span", "boolean")]

    def one(e):
        rep = detects_tightness(collage(e.bb), cap=TIGHT_CAP)
        st = {"YES": "PASS", "NO": "FAIL", "UNKNOWN": "UNKNOWN"}[rep["verdict"]]
        detail = ""
        if st == "FAIL":
            detail = repr(rep["counterexamples"][:1] or rep["coprojections"])
        return (e.label, st, detail)

    outcomes = _map(one, entries)
    return _row("AC9", "collages are tight and their coprojections detect tightness", outcomes, cap=TIGHT_CAP)


def _morphisms_for(r, kind):
    out = [identity_morphism(r.inner)]
    if kind == "span":
        out.append(span_to_rel(r.inner, QuantaloidBase(boolean_quantale())))
    if kind == "minplus":
        out.append(minplus_truncation(METRIC_CAP, METRIC_CAP // 2))
    return out


def ac10_absolute(seed: int, scale: str) -> dict:
    entries = _bbs(seed, scale)

    def one(e):
        r = collage(e.bb)
        got = []
        for F in _morphisms_for(r, e.kind):
            rep = absoluteness_probe(r, F)
            got.append((f"{e.label}/{F.name}", _status(rep["ok"]), rep.get("detail", "")))
        return got

    outcomes = [o for group in _map(one, entries) for o in group]
    used = sorted({lab.split("/")[1] for lab, _, _ in outcomes})
    return _row("AC10", "base morphisms carry collages to collages", outcomes, morphisms=used)


def ac11_metric(seed: int, scale: str) -> dict:
    gluings = corpus.metric_gluings(seed, 10 * corpus.SIZES[scale], METRIC_CAP)

    def one(i):
        spaces, glue = gluings[i]
        rep = metric_collage_demo(spaces, glue, METRIC_CAP)
        ok = rep["agree"] and rep["valid"]
        return (f"gluing-{i}", _status(ok), "" if ok else "distance tables differ")

    return _row("AC11", "glued metric spaces match the shortest-path oracle", _map(one, range(len(gluings))), cap=METRIC_CAP)


# ---------------------------------------------------------------------------
# invariants outside the numbered criteria


def inv_serialization(seed: int, scale: str) -> dict:
    import json

    from .serialize import dumps, from_document, to_document

    def one(e):
        r = collage(e.bb)
        ok = True
        for x in (e.bb, r.total, r.left(e.bb.objects[0])):
            text = dumps(to_document(x))
            back = from_document(json.loads(text))
            ok = ok and back == x and dumps(to_document(back)) == text
        return (e.label, _status(ok), "")

    return _row("INV-serialization", "documents re-load to equal values", _map(one, _bbs(seed, scale)))


def inv_oracle_independence(seed: int, scale: str) -> dict:
    tree = ast.parse(Path(__file__).with_name("oracle.py").read_text(encoding="utf-8"))
    top = []
    for node in tree.body:
        if isinstance(node, ast.ImportFrom) and node.level:
            top.append(node.module or "")
        if isinstance(node, ast.Import):
            top += [a.name for a in node.names]
    bad = [m for m in top if m.split(".")[-1] in ("base", "modcat", "collage", "enriched")]
    return _row("INV-oracle", "the oracle imports none of the colimit code", [("oracle.py", _status(not bad), ", ".join(bad))])


def inv_corpus_valid(seed: int, scale: str) -> dict:
    def one(e):
        r = collage(e.bb)
        ok = validate(r.total).ok and all(validate(D).ok for D in r.coprojections.values())
        return (e.label, _status(ok), "")

    return _row("INV-valid", "collages and coprojections validate", _map(one, _bbs(seed, scale)))


CRITERIA = [
    ac1_composition,
    ac2_bicategory,
    ac3_hat,
    ac4_cat1,
    ac5_collages,
    ac6_special,
    ac7_decompose,
    ac8_idempotence,
    ac9_tightness,
    ac10_absolute,
    ac11_metric,
]
INVARIANTS = [inv_corpus_valid, inv_serialization, inv_oracle_independence]


def run_suite(seed: int = 7, scale: str = "smoke", only=None) -> dict:
    if scale not in corpus.SIZES:
        raise ValueError(f"unknown scale {scale!r}")
    rows = []
    for fn in CRITERIA + INVARIANTS:
        row_id = fn.__name__.split("_")[0].upper()
        if only is not None and row_id not in only:
            continue
        rows.append(fn(seed, scale))
    statuses = {r["status"] for r in rows}
    overall = "FAIL" if "FAIL" in statuses else ("UNKNOWN" if "UNKNOWN" in statuses else "PASS")
    return {
        "seed": seed,
        "scale": scale,
        "caps": {"tightness": TIGHT_CAP, "kleisli": KLEISLI_CAP, "metric": METRIC_CAP},
        "status": overall,
        "results": rows,
    }
