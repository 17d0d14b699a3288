import json

import pytest

from heapkit import cli
from heapkit.catalog import TEST_MATRIX


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_catalog_list(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].split()[:2] == ["family", "rank"]
    assert len(lines) == 1 + len(TEST_MATRIX)
    assert all(line == line.rstrip() for line in lines)
    code, again, _ = run(capsys, "catalog", "list")
    assert again == out


def test_catalog_show_json_roundtrip(capsys):
    from heapkit.heap import PeriodicHeap
    code, out, _ = run(capsys, "catalog", "show", "--family", "E6", "--variant", "dual", "--format", "json")
    assert code == 0
    h = PeriodicHeap.from_json(out)
    assert len(h.height_zero_ideals) == 27


def test_catalog_synth(capsys):
    code, out, _ = run(capsys, "catalog", "synth", "--family", "F4", "--format", "json")
    assert code == 0
    assert json.loads(out)["classes"] == 0
    code, _, err = run(capsys, "catalog", "synth", "--family", "A")
    assert code == 2 and "--rank" in err


def test_verify_e7_relations(capsys):
    code, out, _ = run(capsys, "verify", "--family", "E7", "--suite", "relations")
    assert code == 0
    assert out.startswith("relations: PASS")


@pytest.mark.parametrize("family", ["F4affine", "E8affine", "E6twisted"])
def test_no_full_heap(capsys, family):
    code, out, err = run(capsys, "verify", "--family", family)
    assert code == 2
    assert out == ""
    assert "no full heap exists" in err


@pytest.mark.parametrize("argv", [
    ["verify", "--family", "G2"],
    ["verify", "--family", "A_nat", "--rank", "1"],
    ["verify", "--family", "A_nat", "--rank", "2", "--suite", "nonsense"],
    ["verify", "--family", "A_nat", "--rank", "2", "--window", "0"],
    ["verify", "--family", "A_nat", "--rank", "3", "--orientation", "0>2"],
    ["render", "heap", "--family", "A_nat", "--rank", "2", "--format", "svg"],
    ["render", "crystal", "--family", "A_nat", "--rank", "2", "--format", "text"],
    ["roots", "heaps", "--family", "A_nat", "--rank", "2", "--root", "1,2"],
    ["fold", "--family", "A_nat", "--rank", "3", "--mu", "1,0,2,3"],
    [],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err


def test_verify_json_wrapper(capsys):
    code, out, _ = run(capsys, "verify", "--family", "C_fold", "--rank", "2", "--suite", "quantum", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert {"suite", "passed", "checks", "failures"} <= set(d)
    assert d["suite"] == "quantum" and d["passed"] and d["failures"] == []


def test_verify_all(capsys):
    code, out, _ = run(capsys, "verify", "--family", "A_nat", "--rank", "2")
    assert code == 0
    assert [line.split(":")[0] for line in out.strip().splitlines()] == list(cli.SUITES)


def test_verify_all_fails_iff_a_suite_fails(capsys, monkeypatch):
    real = cli.run_suite

    def broken(name, heap, *a, **k):
        rep = real(name, heap, *a, **k)
        if name == "weyl":
            rep.check(False, "planted", {"ideal": [1, 0, 0]})
        return rep

    monkeypatch.setattr(cli, "run_suite", broken)
    code, out, _ = run(capsys, "verify", "--family", "A_nat", "--rank", "2")
    assert code == 1
    reports = json.loads(out)
    assert [r["passed"] for r in reports].count(False) == 1
    bad = next(r for r in reports if not r["passed"])
    assert bad["failures"][0]["witness"] == {"ideal": [1, 0, 0]}


def test_orientation_flag(capsys):
    code, out, _ = run(capsys, "verify", "--family", "A_nat", "--rank", "3", "--suite", "chevalley",
                       "--orientation", "2>1,3>2")
    assert code == 0
    code, a, _ = run(capsys, "render", "chevalley", "--family", "A_nat", "--rank", "3")
    code, b, _ = run(capsys, "render", "chevalley", "--family", "A_nat", "--rank", "3", "--orientation", "2>1")
    assert a != b


def test_render_heap_text(capsys):
    code, out, _ = run(capsys, "render", "heap", "--family", "A_nat", "--rank", "2")
    lines = out.rstrip("\n").splitlines()
    assert code == 0 and len(lines) == 9
    assert [line.startswith("|") for line in lines] == [False] * 3 + [True] * 3 + [False] * 3


def test_render_chevalley_csv(capsys):
    code, out, _ = run(capsys, "render", "chevalley", "--family", "A_nat", "--rank", "3", "--format", "csv")
    rows = out.strip().splitlines()
    assert code == 0 and len(rows) == 1 + 12 + 6


def test_render_crystal_dot_is_reproducible(capsys, tmp_path):
    argv = ["render", "crystal", "--family", "E6", "--variant", "heap"]
    code, out, _ = run(capsys, *argv)
    assert code == 0
    nodes = [line for line in out.splitlines() if line.endswith('";')]
    assert len(nodes) == 27
    target = tmp_path / "e6.dot"
    code, stdout, _ = run(capsys, *argv, "--out", str(target))
    assert stdout == "" and target.read_text() == out


def test_render_crystal_quotient(capsys):
    code, out, _ = run(capsys, "render", "crystal", "--family", "A_nat", "--rank", "3", "--quotient")
    assert code == 0 and "style=dashed" in out


def test_ideals(capsys):
    code, out, _ = run(capsys, "ideals", "count", "--family", "D_spin", "--rank", "6", "--variant", "plain")
    assert (code, out.strip()) == (0, "32")
    code, out, _ = run(capsys, "ideals", "list", "--family", "A_nat", "--rank", "2", "--heights", "-1", "1",
                       "--format", "json")
    assert len(json.loads(out)) == 9


def test_roots(capsys):
    code, out, _ = run(capsys, "roots", "list", "--family", "A_nat", "--rank", "3")
    assert code == 0 and len(out.strip().splitlines()) == 6
    code, out, _ = run(capsys, "roots", "heaps", "--family", "A_nat", "--rank", "2", "--root", "0,1,1",
                       "--format", "json")
    found = json.loads(out)
    assert found and all(sorted(x[0] for x in L) == [1, 2] for L in found)


def test_fold(capsys):
    code, out, _ = run(capsys, "fold", "--family", "A_nat", "--rank", "3", "--mu", "0,3,2,1")
    assert code == 0
    assert "C2^(1)" in out and "PASS" in out
