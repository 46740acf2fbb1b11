"""One test per acceptance criterion, run at the smoke scale with seed 7.

Each test prints a single ``PASS``/``FAIL`` line with the numbers it was
judged on.  Thresholds are pinned below; exact agreement is required
wherever a criterion asks for equality.
"""
import shutil
import subprocess
import sys

from collagekit import suite

SEED, SCALE = 7, "smoke"

MIN_TRIPLES = 50  # AC1
MIN_PER_BASE = 20  # AC2
MAX_APEX = 4  # AC3
KLEISLI_CAP = 4  # AC6
TIGHT_CAP = 4  # AC9
METRIC_CAP = 10  # AC11
MIN_GLUINGS = 10  # AC11
MORPHISMS = {"identity", "span-to-rel", "minplus-10-to-5"}  # AC10


def report(row, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} {row['id']}: {row['passed']}/{row['checked']} {detail}"
    print(line)
    if not ok:
        print(f"  failures: {row['failures'][:3]} unknown: {row['unknown'][:3]}")
    return ok


def everything_passed(row):
    return row["status"] == "PASS" and row["passed"] == row["checked"] and not row["unknown"]


def test_ac01_composition_matches_coend():
    row = suite.ac1_composition(SEED, SCALE)
    ok = everything_passed(row) and row["checked"] >= MIN_TRIPLES
    assert report(row, ok, f"triples agree with the coend (need 100% of >= {MIN_TRIPLES}; {row['nonempty']} nonempty)")


def test_ac02_bicategory_laws():
    row = suite.ac2_bicategory(SEED, SCALE)
    per_base = row["per_base"]
    ok = everything_passed(row) and len(per_base) == 3 and min(per_base.values()) >= MIN_PER_BASE
    assert report(row, ok, f"chains per base {per_base} (need >= {MIN_PER_BASE} each)")


def test_ac03_hat_embedding():
    from collagekit.corpus import base_cell_pairs

    row = suite.ac3_hat(SEED, SCALE)
    pairs = base_cell_pairs(SEED, 30)
    spans = [(f, g) for C, f, g in pairs if C.kind == "SPAN_FINSET"]
    apexes_ok = bool(spans) and all(len(f.data[0]) <= MAX_APEX and len(g.data[0]) <= MAX_APEX for f, g in spans)
    ok = everything_passed(row) and apexes_ok
    assert report(row, ok, f"pairs preserve composites and 2-cells (apexes <= {MAX_APEX})")


def test_ac04_internal_categories():
    row = suite.ac4_cat1(SEED, SCALE)
    assert report(row, everything_passed(row), "category pairs with functor and transformation bijections")


def test_ac05_collages_certify():
    row = suite.ac5_collages(SEED, SCALE)
    control = row["negative_control"]
    ok = everything_passed(row) and len(control) == 1 and control[0]["rejected"]
    assert report(row, ok, f"collages certified; negative control rejected: {bool(control and control[0]['rejected'])}")


def test_ac06_special_cases():
    row = suite.ac6_special(SEED, SCALE)
    ok = everything_passed(row) and row["cap"] == KLEISLI_CAP and all(k["verdict"] == "YES" for k in row["kleisli"])
    assert report(row, ok, f"coproduct and Kleisli checks (cap {KLEISLI_CAP})")


def test_ac07_matrix_decomposition():
    row = suite.ac7_decompose(SEED, SCALE)
    assert report(row, everything_passed(row), "round trips through matrices (need 100%)")


def test_ac08_idempotence():
    row = suite.ac8_idempotence(SEED, SCALE)
    assert report(row, everything_passed(row), "equivalences certified")


def test_ac09_tightness():
    row = suite.ac9_tightness(SEED, SCALE)
    ok = everything_passed(row) and row["cap"] == TIGHT_CAP
    assert report(row, ok, f"span and Boolean collages detect tightness (cap {TIGHT_CAP})")


def test_ac10_absoluteness():
    row = suite.ac10_absolute(SEED, SCALE)
    ok = everything_passed(row) and set(row["morphisms"]) == MORPHISMS
    assert report(row, ok, f"morphism applications preserve collages; morphisms {row['morphisms']}")


def test_ac11_metric_demo():
    row = suite.ac11_metric(SEED, SCALE)
    ok = everything_passed(row) and row["checked"] >= MIN_GLUINGS and row["cap"] == METRIC_CAP
    assert report(row, ok, f"gluings equal the shortest-path oracle exactly (need >= {MIN_GLUINGS}, cap {METRIC_CAP})")


def _suite_command():
    exe = shutil.which("collagekit")
    return [exe] if exe else [sys.executable, "-m", "collagekit.cli"]


def test_ac12_determinism(tmp_path):
    outputs = []
    for _ in range(2):
        proc = subprocess.run(_suite_command() + ["suite", "--seed", str(SEED), "--scale", SCALE], capture_output=True, timeout=600)
        outputs.append((proc.returncode, proc.stdout))
    same = outputs[0][1] == outputs[1][1] and len(outputs[0][1]) > 0
    ok = same and outputs[0][0] == 0
    print(f"{'PASS' if ok else 'FAIL'} AC12: two suite runs, {len(outputs[0][1])} bytes each, identical={same}, exit={outputs[0][0]}")
    assert ok
