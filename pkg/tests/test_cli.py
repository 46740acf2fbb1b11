import json

import pytest
from click.testing import CliRunner

from collagekit import serialize
from collagekit.cli import main
from collagekit.corpus import fixed_bbs


def run(*args):
    return CliRunner().invoke(main, list(args))


def test_validate_hat_fixture():
    res = run("validate", "fixture:hat-category")
    assert res.exit_code == 0, res.output
    assert json.loads(res.output)["items"][0]["status"] == "PASS"


def test_compose_boolean_fixtures_gives_the_matrix_product(tmp_path):
    out = tmp_path / "c.json"
    res = run("compose", "fixture:bool-f", "fixture:bool-g", "-o", str(out))
    assert res.exit_code == 0, res.output
    # f: 2 -> 3 then g: 3 -> 2, composed with or-and
    f = [[True, False], [False, True], [True, True]]
    g = [[True, False, False], [False, False, True]]
    product = [[any(g[k][j] and f[j][i] for j in range(3)) for i in range(2)] for k in range(2)]
    doc = json.loads(out.read_text())
    assert doc["schema"] == "emodule"
    assert doc["components"][0][0]["rows"] == product
    assert json.loads(res.output)["composite"] == doc


def test_compose_rejects_mismatched_modules():
    res = run("compose", "fixture:bool-f", "fixture:bool-f")
    assert res.exit_code == 2


def test_collage_writes_documents(tmp_path):
    res = run("collage", "fixture:cograph", "--out", str(tmp_path))
    assert res.exit_code == 0, res.output
    assert sorted(p.name for p in tmp_path.iterdir()) == ["coprojection-0.json", "coprojection-1.json", "total.json"]
    assert serialize.load(tmp_path / "total.json") is not None


@pytest.mark.parametrize(
    "args, code",
    [
        (["representable", "fixture:bool-function"], 0),
        (["representable", "fixture:bool-f"], 1),
        (["adjoint", "fixture:bool-function"], 0),
        (["equivalence", "fixture:bool-function"], 1),
        (["collage", "fixture:cograph"], 0),
        (["idempotence", "fixture:cograph"], 0),
        (["absolute", "fixture:cograph", "--morphism", "span-to-rel"], 0),
        (["absolute", "fixture:cograph", "--morphism", "minplus-truncation"], 2),
        (["decompose", "fixture:hat-category"], 0),
        (["fixture:job-tight-collage"], 0),
        (["collage", "fixture:bool-f"], 2),
        (["nonsense"], 2),
    ],
)
def test_check_exit_codes(args, code):
    res = run("check", *args)
    assert res.exit_code == code, res.output


def test_witness_on_yes():
    res = run("check", "representable", "fixture:bool-function")
    assert json.loads(res.output)["witness"]["schema"] == "efunctor"


def test_unknown_is_exit_three_only_when_strict(monkeypatch):
    import collagekit.cli as cli

    monkeypatch.setattr(cli, "run_check", lambda *a, **k: {"status": "UNKNOWN", "verdict": "UNKNOWN", "note": "cap"})
    assert run("check", "collage", "fixture:cograph").exit_code == 0
    assert run("check", "collage", "fixture:cograph", "--strict").exit_code == 3


def test_invalid_input_fails_with_a_witness(tmp_path):
    bb = next(e.bb for e in fixed_bbs() if e.label == "cograph")
    doc = serialize.to_document(bb)
    text = serialize.dumps(doc)
    path = tmp_path / "bad.json"
    path.write_text(text.replace('"version": 1', '"version": 9', 1))
    assert run("validate", str(path)).exit_code == 2


def test_missing_file_is_structural():
    assert run("validate", "/no/such/file.json").exit_code == 2


def test_demo_metric_writes_table_and_figure(tmp_path):
    res = run("demo", "metric", "--out", str(tmp_path))
    assert res.exit_code == 0, res.output
    assert (tmp_path / "distances.png").stat().st_size > 0
    rows = (tmp_path / "distances.csv").read_text().splitlines()
    assert rows[0].startswith("from,") and len(rows) == 6
    assert json.loads(res.output)["agrees_with_shortest_paths"]


def test_demo_fincat():
    res = run("demo", "fincat", "--format", "text")
    assert res.exit_code == 0
    assert "composites agree" in res.output


def test_suite_single_row_with_outputs(tmp_path):
    res = run("suite", "--only", "AC11", "--out", str(tmp_path))
    assert res.exit_code == 0, res.output
    rep = json.loads(res.output)
    assert rep["seed"] == 7 and rep["caps"]["metric"] == 10 and rep["tool"].startswith("collagekit")
    assert (tmp_path / "results.csv").read_text().splitlines()[1].startswith("AC11,PASS")
    assert (tmp_path / "summary.png").exists()


def test_suite_rejects_unknown_rows():
    assert run("suite", "--only", "AC99").exit_code == 2
