"""Command line interface.

Exit codes: 0 all checks passed, 1 a check failed (the report carries the
witness), 2 structural or usage error, 3 UNKNOWN results with ``--strict``.
Reports are canonical JSON (``--format json``) or a short text summary.
Paths of the form ``fixture:NAME`` refer to the documents shipped with the
package.
"""
from __future__ import annotations

import csv
import json
import math
import sys
from importlib import resources
from pathlib import Path

import click

from . import serialize
from .base import BaseError, Verdict
from .enriched import ECategory, EFunctor, EModule, validate
from .modcat import ModBase, find_right_adjoint, find_tightening, is_equivalence, mod_compose

OK, FAILED, STRUCTURAL, UNKNOWN = 0, 1, 2, 3
MORPHISMS = ("identity", "span-to-rel", "minplus-truncation")


class Structural(click.ClickException):
    exit_code = STRUCTURAL


def _resolve(path: str) -> Path:
    if path.startswith("fixture:"):
        name = path.split(":", 1)[1]
        p = resources.files("collagekit") / "fixtures" / f"{name}.json"
        if not p.is_file():
            raise Structural(f"no shipped fixture named {name!r}")
        return Path(str(p))
    return Path(path)


def _read(path: str):
    p = _resolve(path)
    try:
        with open(p, encoding="utf-8") as fh:
            raw = json.load(fh)
        return raw, serialize.from_document(raw)
    except OSError as exc:
        raise Structural(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise Structural(f"{path}: not JSON ({exc})") from exc
    except serialize.DocumentError as exc:
        raise Structural(f"{path}: {exc}") from exc


def _label(x) -> str:
    if isinstance(x, EModule):
        return f"{x.src.name} -|-> {x.dst.name}"
    if isinstance(x, EFunctor):
        return f"{x.src.name} -> {x.dst.name}"
    if isinstance(x, ECategory):
        return x.name
    return type(x).__name__


def _code(statuses, strict: bool) -> int:
    statuses = set(statuses)
    if "FAIL" in statuses:
        return FAILED
    if "UNKNOWN" in statuses and strict:
        return UNKNOWN
    return OK


def _emit(report: dict, fmt: str, lines) -> None:
    if fmt == "json":
        sys.stdout.write(serialize.dumps(report))
    else:
        for line in lines:
            click.echo(line)


def _finish(report: dict, fmt: str, lines, strict: bool, statuses) -> None:
    code = _code(statuses, strict)
    report["exit_code"] = code
    _emit(report, fmt, lines)
    sys.exit(code)


fmt_option = click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json", show_default=True)
strict_option = click.option("--strict", is_flag=True, help="Exit 3 when any result is UNKNOWN.")


@click.group()
@click.version_option(package_name="artifact", prog_name="collagekit")
def main():
    """Enriched categories, modules and collages over finite bases."""


# ---------------------------------------------------------------------------
# validate / compose / collage


@main.command("validate")
@click.argument("paths", nargs=-1, required=True)
@fmt_option
def cmd_validate(paths, fmt):
    """Check every axiom of the documents at PATHS."""
    items, lines = [], []
    for path in paths:
        _, x = _read(path)
        if isinstance(x, dict):
            reps = [(f"{path}#{i}", validate(v)) for i, v in enumerate(x["inputs"])]
        elif isinstance(x, (ECategory, EModule, EFunctor)):
            reps = [(path, validate(x))]
        else:
            reps = [(path, None)]
        for name, rep in reps:
            if rep is None:
                items.append({"path": name, "status": "PASS", "detail": "base document"})
            elif rep.status == "STRUCTURAL":
                raise Structural(f"{name}: {rep.axiom} {rep.detail}".strip())
            else:
                items.append({"path": name, "status": "PASS" if rep.ok else "FAIL", **({} if rep.ok else {"witness": rep.to_dict()})})
            it = items[-1]
            lines.append(f"{it['status']}  {name}" + ("" if rep is None or rep.ok else f"  ({rep.axiom} at {', '.join(map(repr, rep.where))})"))
    report = serialize.report_envelope("validate", items=items)
    _finish(report, fmt, lines, False, [i["status"] for i in items])


@main.command("compose")
@click.argument("paths", nargs=-1, required=True)
@click.option("-o", "--out", type=click.Path(dir_okay=False), help="Write the composite document here.")
@fmt_option
def cmd_compose(paths, out, fmt):
    """Compose modules given in path order: the first is applied first."""
    mods = []
    for path in paths:
        _, x = _read(path)
        if not isinstance(x, EModule):
            raise Structural(f"{path}: expected an emodule document")
        mods.append(x)
    current, steps = mods[0], []
    for nxt in mods[1:]:
        if nxt.src != current.dst:
            raise Structural(f"cannot compose {_label(current)} with {_label(nxt)}")
        w = mod_compose(nxt, current)
        current = w.composite
        steps.append({"composite": _label(current), "valid": validate(current).ok, "component_sizes": _sizes(current)})
    doc = serialize.to_document(current)
    if out:
        serialize.save(current, out)
    report = serialize.report_envelope("compose", inputs=[_label(m) for m in mods], steps=steps, composite=doc)
    lines = [f"composite {_label(current)}"] + [f"  step {i + 1}: {s['composite']} valid={s['valid']}" for i, s in enumerate(steps)]
    _finish(report, fmt, lines, False, ["PASS" if all(s["valid"] for s in steps) else "FAIL"])


def _sizes(T: EModule):
    C = T.src.base
    return [[repr(u), repr(x), C.size(T.comp[(u, x)])] for (u, x) in sorted(T.comp, key=repr)]


@main.command("collage")
@click.argument("path")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), help="Directory for the collage documents.")
@click.option("--shallow", is_flag=True, help="Skip validating the equivalence data.")
@fmt_option
def cmd_collage(path, out_dir, shallow, fmt):
    """Build the collage of a module-enriched category and certify it."""
    from .collage import certify_collage, collage

    _, BB = _read(path)
    if not (isinstance(BB, ECategory) and isinstance(BB.base, ModBase)):
        raise Structural(f"{path}: expected a mod-enriched-category document")
    rep = validate(BB)
    if not rep.ok:
        report = serialize.report_envelope("collage", input=BB.name, status="FAIL", witness=rep.to_dict())
        _finish(report, fmt, [f"FAIL  input is not valid: {rep.axiom}"], False, ["FAIL"])
    r = collage(BB)
    cert = certify_collage(r, deep=not shallow)
    written = []
    if out_dir:
        d = Path(out_dir)
        d.mkdir(parents=True, exist_ok=True)
        serialize.save(r.total, d / "total.json")
        written.append("total.json")
        for i, X in enumerate(r.source.objects):
            name = f"coprojection-{i}.json"
            serialize.save(r.coprojections[X], d / name)
            written.append(name)
    status = "PASS" if cert["ok"] else "FAIL"
    report = serialize.report_envelope(
        "collage",
        input=BB.name,
        status=status,
        total_objects=len(r.total.objects),
        certificate=cert,
        written=written,
    )
    lines = [f"{status}  collage of {BB.name}: {len(r.total.objects)} objects"]
    lines += [f"  {'ok ' if c['ok'] else 'BAD'} {c['stage']} {c['object']}: {c['detail']}" for c in cert["checks"]]
    _finish(report, fmt, lines, False, [status])


# ---------------------------------------------------------------------------
# check


_VERDICT_STATUS = {"YES": "PASS", "NO": "FAIL", "UNKNOWN": "UNKNOWN"}


def _morphism(name: str, inner):
    from .base import QuantaloidBase, SpanBase, boolean_quantale, identity_morphism, minplus_truncation, span_to_rel

    if name == "identity":
        return identity_morphism(inner)
    if name == "span-to-rel":
        if not isinstance(inner, SpanBase):
            raise Structural("span-to-rel needs a span base")
        return span_to_rel(inner, QuantaloidBase(boolean_quantale()))
    if name == "minplus-truncation":
        finite = [v for v in getattr(getattr(inner, "q", None), "elements", ()) if not (isinstance(v, float) and math.isinf(v))]
        if not finite or not getattr(inner.q, "name", "").startswith("minplus"):
            raise Structural("minplus-truncation needs a min-plus base")
        top = max(finite)
        return minplus_truncation(top, top // 2)
    raise Structural(f"unknown morphism {name!r}")


def _need(inputs, kinds, check):
    if len(inputs) < len(kinds) or not all(k(x) for k, x in zip(kinds, inputs)):
        raise Structural(f"{check}: wrong inputs")


def _is_module(x):
    return isinstance(x, EModule)


def _is_bb(x):
    return isinstance(x, ECategory) and isinstance(x.base, ModBase)


def _is_cat(x):
    return isinstance(x, ECategory) and not isinstance(x.base, ModBase)


def run_check(kind: str, inputs: list, cap: int, morphism: str = "identity") -> dict:
    """Run one check and return ``{"status", ...}`` with a witness for YES and NO."""
    from .collage import certify_collage, collage, decompose_check, detects_tightness, idempotence_probe, absoluteness_probe

    if kind == "representable":
        _need(inputs, [_is_module], kind)
        res = find_tightening(inputs[0])
        out = {"verdict": res.verdict.value, "explored": res.explored, "note": res.note}
        if res.verdict is Verdict.YES:
            out["witness"] = serialize.to_document(res.witness[0])
        return {"status": _VERDICT_STATUS[res.verdict.value], **out}
    if kind in ("adjoint", "equivalence"):
        _need(inputs, [_is_module], kind)
        res = (find_right_adjoint if kind == "adjoint" else is_equivalence)(inputs[0], cap)
        out = {"verdict": res.verdict.value, "explored": res.explored, "note": res.note}
        if res.verdict is Verdict.YES:
            other = res.witness.right if kind == "adjoint" else res.witness[0]
            out["witness"] = serialize.to_document(other)
        elif isinstance(res.witness, dict):
            out["witness"] = res.witness
        return {"status": _VERDICT_STATUS[res.verdict.value], **out}
    if kind == "collage":
        _need(inputs, [_is_bb], kind)
        cert = certify_collage(collage(inputs[0]))
        return {"status": "PASS" if cert["ok"] else "FAIL", "certificate": cert}
    if kind == "tight-collage":
        _need(inputs, [_is_bb], kind)
        rep = detects_tightness(collage(inputs[0]), cap=cap)
        rep.pop("cap")
        return {"status": _VERDICT_STATUS[rep["verdict"]], **rep}
    if kind == "decompose":
        _need(inputs, [_is_cat], kind)
        mods = inputs[1:]
        if len(mods) % 2 or not all(map(_is_module, mods)):
            raise Structural("decompose: modules come in composable pairs S, T")
        pairs = [(mods[i + 1], mods[i]) for i in range(0, len(mods), 2)]
        rep = decompose_check(inputs[0], pairs or None)
        return {"status": "PASS" if rep["ok"] else "FAIL", **rep}
    if kind == "idempotence":
        _need(inputs, [_is_bb], kind)
        rep = idempotence_probe(inputs[0], deep=True)
        return {"status": "PASS" if rep["ok"] else "FAIL", **rep}
    if kind == "absolute":
        _need(inputs, [_is_bb], kind)
        r = collage(inputs[0])
        rep = absoluteness_probe(r, _morphism(morphism, r.inner))
        return {"status": "PASS" if rep["ok"] else "FAIL", **rep}
    raise Structural(f"unknown check {kind!r}")


@main.command("check")
@click.argument("args", nargs=-1, required=True)
@click.option("--cap", type=click.IntRange(min=1), default=None, help="Search cap (default 4, or the job's cap).")
@click.option("--morphism", type=click.Choice(MORPHISMS), default=None, help="Base morphism for the absolute check.")
@strict_option
@fmt_option
def cmd_check(args, cap, morphism, strict, fmt):
    """Run a check: ``check KIND INPUT...`` or ``check JOB``.

    KIND is one of representable, adjoint, equivalence, collage,
    tight-collage, decompose, idempotence, absolute.
    """
    if args[0] in serialize.CHECKS:
        kind, inputs = args[0], [_read(p)[1] for p in args[1:]]
        job_cap = 4
    else:
        if len(args) != 1:
            raise Structural(f"unknown check {args[0]!r}; expected one of {', '.join(serialize.CHECKS)} or a job document")
        raw, job = _read(args[0])
        if not isinstance(job, dict):
            raise Structural(f"{args[0]}: expected a job document")
        kind, inputs, job_cap = job["check"], job["inputs"], job["cap"]
        morphism = morphism or raw.get("morphism")
    cap = cap or job_cap
    for i, x in enumerate(inputs):
        if isinstance(x, (ECategory, EModule, EFunctor)):
            rep = validate(x)
            if rep.status == "STRUCTURAL":
                raise Structural(f"input {i}: {rep.axiom} {rep.detail}".strip())
            if not rep.ok:
                report = serialize.report_envelope("check", check=kind, cap=cap, status="FAIL", witness=rep.to_dict())
                _finish(report, fmt, [f"FAIL  input {i} is not valid: {rep.axiom}"], strict, ["FAIL"])
    try:
        result = run_check(kind, inputs, cap, morphism or "identity")
    except BaseError as exc:
        raise Structural(f"{kind}: {exc}") from exc
    report = serialize.report_envelope("check", check=kind, cap=cap, inputs=[_label(x) for x in inputs], **result)
    lines = [f"{result['status']}  {kind} (cap {cap})"]
    if "verdict" in result:
        lines.append(f"  verdict {result['verdict']}" + (f": {result['note']}" if result.get("note") else ""))
    _finish(report, fmt, lines, strict, [result["status"]])


# ---------------------------------------------------------------------------
# suite


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


@main.command("suite")
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--scale", type=click.Choice(["smoke", "full"]), default="smoke", show_default=True)
@click.option("--only", multiple=True, help="Run only these rows (AC1 ... AC11, INV).")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), help="Write results.csv and summary.png here.")
@strict_option
@fmt_option
def cmd_suite(seed, scale, only, out_dir, strict, fmt):
    """Run every acceptance criterion and invariant sweep."""
    from .suite import run_suite

    res = run_suite(seed, scale, only=set(only) if only else None)
    if not res["results"]:
        raise Structural("no suite rows selected")
    if out_dir:
        from .plotting import summary_bars

        d = Path(out_dir)
        d.mkdir(parents=True, exist_ok=True)
        rows = res["results"]
        _write_csv(
            d / "results.csv",
            ["id", "status", "checked", "passed", "unknown", "failed", "title"],
            [[r["id"], r["status"], r["checked"], r["passed"], len(r["unknown"]), len(r["failures"]), r["title"]] for r in rows],
        )
        summary_bars(rows, d / "summary.png", title=f"suite seed={seed} scale={scale}")
    report = serialize.report_envelope("suite", **res)
    lines = [f"{r['status']:<8}{r['id']:<20}{r['passed']}/{r['checked']}  {r['title']}" for r in res["results"]]
    lines.append(f"overall {res['status']} (seed {seed}, scale {scale})")
    _finish(report, fmt, lines, strict, [r["status"] for r in res["results"]])


# ---------------------------------------------------------------------------
# demos


DEMO_SPACES = [
    [[0, 2, 5], [2, 0, 3], [5, 3, 0]],
    [[0, 4], [4, 0]],
]
DEMO_GLUE = {(0, 1): [[1, float("inf")], [float("inf"), float("inf")], [float("inf"), 2]], (1, 0): [[float("inf"), float("inf"), 6], [3, float("inf"), float("inf")]]}


def _fmt_dist(v):
    return "inf" if isinstance(v, float) and math.isinf(v) else v


def _demo_metric(out_dir):
    from .collage import metric_collage_demo

    rep = metric_collage_demo(DEMO_SPACES, DEMO_GLUE, 10)
    labels = [f"X{i}.{p}" for i, s in enumerate(DEMO_SPACES) for p in range(len(s))]
    table = [[_fmt_dist(v) for v in row] for row in rep["distances"]]
    status = "PASS" if rep["agree"] and rep["valid"] else "FAIL"
    written = []
    if out_dir:
        from .plotting import distance_heatmap

        d = Path(out_dir)
        d.mkdir(parents=True, exist_ok=True)
        _write_csv(d / "distances.csv", ["from"] + labels, [[labels[i]] + row for i, row in enumerate(table)])
        distance_heatmap(rep["distances"], labels, d / "distances.png", title="glued metric space")
        written = ["distances.csv", "distances.png"]
    report = serialize.report_envelope(
        "demo",
        demo="metric",
        cap=10,
        status=status,
        points=labels,
        distances=table,
        agrees_with_shortest_paths=rep["agree"],
        written=written,
    )
    lines = ["      " + " ".join(f"{lab:>5}" for lab in labels)]
    lines += [f"{labels[i]:>5} " + " ".join(f"{str(v):>5}" for v in row) for i, row in enumerate(table)]
    lines.append(f"{status}  collage distances {'equal' if rep['agree'] else 'differ from'} the shortest-path oracle")
    return report, lines, status


def _demo_fincat():
    import random

    from .corpus import nonempty_profunctor
    from .enriched import emodule_to_profunctor, fincat_to_ecat, profunctor_to_emodule
    from .oracle import cat1_equiv_check, parallel_pair, prof_compose_coend, profunctor_bijection, walking_arrow

    rng = random.Random(0)
    K, L, M = walking_arrow(), parallel_pair(), walking_arrow()
    P, Q = nonempty_profunctor(rng, K, L), nonempty_profunctor(rng, L, M)
    A, B, C = (fincat_to_ecat(X) for X in (K, L, M))
    S, T = profunctor_to_emodule(P, A, B), profunctor_to_emodule(Q, B, C)
    composite = mod_compose(T, S).composite
    coend, _ = prof_compose_coend(Q, P)
    read = emodule_to_profunctor(composite, K, M)
    agree = profunctor_bijection(coend, read) is not None
    equiv = cat1_equiv_check(K, K)
    status = "PASS" if agree and validate(composite).ok else "FAIL"
    report = serialize.report_envelope(
        "demo",
        demo="fincat",
        status=status,
        categories=[K.name, L.name, M.name],
        composite_elements=len(read.elems),
        coend_elements=len(coend.elems),
        composites_agree=agree,
        self_equivalence=equiv,
    )
    lines = [
        f"profunctors {K.name} -|-> {L.name} -|-> {M.name}",
        f"  module composite: {len(read.elems)} elements, coend: {len(coend.elems)} elements",
        f"{status}  composites {'agree' if agree else 'differ'}",
    ]
    return report, lines, status


@main.command("demo")
@click.argument("which", type=click.Choice(["metric", "fincat"]))
@click.option("--out", "out_dir", type=click.Path(file_okay=False), help="Directory for tables and figures (metric).")
@fmt_option
def cmd_demo(which, out_dir, fmt):
    """Worked examples: a glued metric space, or finite categories and profunctors."""
    report, lines, status = _demo_metric(out_dir) if which == "metric" else _demo_fincat()
    _finish(report, fmt, lines, False, [status])


if __name__ == "__main__":
    main()
