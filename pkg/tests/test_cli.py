import json
import subprocess
import sys

import pytest

import golden_8_20 as G
from khtree import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_trefoil(capsys):
    code, out, _ = run(capsys, "verify", "--knot", "trefoil", "--format", "table")
    assert code == 0
    assert out.splitlines() == [f"{v}: st == cube: OK" for v in cli.ALL_VARIANTS]


def test_trees_trefoil(capsys):
    code, out, _ = run(capsys, "trees", "--knot", "trefoil")
    rep = json.loads(out)
    assert code == 0 and rep["count"] == 3
    assert sorted(r["word"] for r in rep["trees"]) == ["LLd", "LdD", "lDD"]
    assert {r["word"]: r["partial_smoothing"] for r in rep["trees"]} == \
        {"LdD": "*BA", "LLd": "**B", "lDD": "*AA"}


def test_homology_8_20(capsys):
    code, out, _ = run(capsys, "homology", "--knot", "8_20", "--method", "both")
    rep = json.loads(out)
    assert code == 0 and rep["agree"]
    got = {(g["i"], g["j"]): (g["rank"], tuple(g["torsion"])) for g in rep["st"]}
    assert got == G.HOMOLOGY


def test_homology_table_format(capsys):
    code, out, _ = run(capsys, "homology", "--knot", "trefoil", "--format", "table")
    assert code == 0 and "Z2" in out


def test_stcomplex_names_follow_reference_words(capsys):
    code, out, _ = run(capsys, "stcomplex", "--knot", "8_20")
    rep = json.loads(out)
    assert code == 0 and len(rep["generators"]) == 42
    assert any(line.startswith("T11+ ↦ 2T6-") for line in rep["lines"])


def test_export_writes_matrix_market(capsys, tmp_path):
    code, out, _ = run(capsys, "stcomplex", "--knot", "trefoil", "--export", str(tmp_path))
    assert code == 0 and list(tmp_path.glob("*.mtx"))


@pytest.mark.parametrize("argv", [
    ("s-invariant", "--knot", "trefoil"),
    ("s-invariant", "--knot", "left_trefoil", "--oracle"),
    ("euler", "--knot", "5_2"),
    ("tait", "--pd", "[[1,2,2,1]]"),
    ("tait", "--dt", "4 6 2"),
    ("homology", "--knot", "4_1", "--variant", "lee", "--method", "both"),
    ("trees", "--knot", "trefoil", "--edge-order", "random", "--seed", "3"),
    ("trees", "--knot", "trefoil", "--edge-order", "3,1,2"),
])
def test_commands_succeed(capsys, argv):
    assert run(capsys, *argv)[0] == 0


def test_s_invariant_values(capsys):
    _, out, _ = run(capsys, "s-invariant", "--knot", "left_trefoil")
    assert json.loads(out)["s"] == -2


@pytest.mark.parametrize("argv", [
    ("tait", "--knot", "no_such_knot"),
    ("tait", "--pd", "[[1,2,3,4]]"),
    ("tait", "--pd", "not json"),
    ("trees", "--knot", "trefoil", "--edge-order", "1,1,2"),
    ("s-invariant", "--knot", "hopf"),
    ("homology", "--knot", "trefoil", "--variant", "all"),
])
def test_errors_exit_one(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err.startswith("error:")


def test_mismatch_exits_two(capsys, monkeypatch):
    monkeypatch.setattr(cli, "jones_khovanov", lambda d: {0: 1})
    code, _, err = run(capsys, "euler", "--knot", "trefoil")
    assert code == 2 and "mismatch" in err


def test_empty_corpus_sweep(capsys, tmp_path):
    path = tmp_path / "empty.json"
    path.write_text('{"knots": []}')
    code, out, _ = run(capsys, "sweep", "--corpus", str(path))
    assert code == 0
    assert json.loads(out)["entries"] == 0


def test_sweep_torsion_small_knots(capsys):
    code, out, _ = run(capsys, "sweep", "--check", "torsion,euler", "--max-crossings", "5")
    rep = json.loads(out)
    assert code == 0 and not rep["failed"]
    for name, res in rep["results"].items():
        assert res["euler"]
        if name in ("trefoil", "left_trefoil", "4_1", "5_1", "5_2"):
            assert res["torsion"] == "Z2"


def test_sweep_rejects_unknown_check(capsys):
    assert run(capsys, "sweep", "--check", "colour")[0] == 1


def test_output_is_byte_deterministic():
    cmd = [sys.executable, "-m", "khtree.cli", "stcomplex", "--knot", "4_1", "--dump-matching"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
