import json
import subprocess
import sys

import pytest

from artin_deligne.cli import EXIT_BOUND, EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK, run


def _graph(tmp_path, name, edges, vertices="abc"):
    p = tmp_path / f"{name}.json"
    p.write_text(json.dumps({"vertices": list(vertices), "edges": edges}))
    return str(p)


@pytest.fixture
def g333(tmp_path):
    return _graph(tmp_path, "t333", [["a", "b", 3], ["a", "c", 3], ["b", "c", 3]])


@pytest.fixture
def g345(tmp_path):
    return _graph(tmp_path, "t345", [["a", "b", 3], ["a", "c", 4], ["b", "c", 5]])


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_aut_out(g333, capsys):
    assert run(["aut", "out", "--graph", g333]) == EXIT_OK
    rep = _json(capsys)
    assert rep["order"] == 12
    assert rep["config"]["command"] == "aut out"


def test_oracle_equal(g333, capsys):
    assert run(["oracle", "equal", "--graph", g333, "--u", "aba", "--v", "bab"]) == EXIT_OK
    assert run(["oracle", "equal", "--graph", g333, "--u", "abcabc", "--v", "bcabca"]) == EXIT_NEGATIVE


def test_oracle_equal_on_edge_names(tmp_path):
    g = _graph(tmp_path, "st", [["s", "t", 3], ["s", "u", 3], ["t", "u", 3]], "stu")
    assert run(["oracle", "equal", "--graph", g, "--u", "s t s", "--v", "t s t"]) == EXIT_OK


def test_radius_zero_is_input_error(g345):
    assert run(["deligne", "build", "--graph", g345, "--radius", "0"]) == EXIT_INPUT


def test_low_cap_is_input_error(g345):
    assert run(["oracle", "equal", "--graph", g345, "--u", "a", "--v", "a", "--cap", "10"]) == EXIT_INPUT


def test_malformed_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"vertices": ["a", "b"], "edges": [')
    assert run(["graph", "check", "--graph", str(p)]) == EXIT_INPUT
    assert "line" in capsys.readouterr().err


def test_bad_word_position(g333, capsys):
    assert run(["oracle", "equal", "--graph", g333, "--u", "a ^", "--v", "a"]) == EXIT_INPUT
    assert "position" in capsys.readouterr().err


def test_unknown_command():
    assert run(["nonsense"]) == EXIT_INPUT


def test_graph_commands(g333, g345, capsys):
    assert run(["graph", "check", "--graph", g345]) == EXIT_OK
    rep = _json(capsys)
    assert rep["large_type"] is True
    assert run(["graph", "iso", "--g1", g333, "--g2", g345]) == EXIT_NEGATIVE
    capsys.readouterr()
    assert run(["graph", "auts", "--graph", g333]) == EXIT_OK


def test_dihedral_commands(capsys):
    assert run(["dihedral", "nf", "--m", "3", "--word", "s t s"]) == EXIT_OK
    a = _json(capsys)
    assert run(["dihedral", "nf", "--m", "3", "--word", "t s t"]) == EXIT_OK
    b = _json(capsys)
    assert (a["delta_power"], a["tail"]) == (b["delta_power"], b["tail"]) == (1, "1")
    assert run(["dihedral", "nf", "--m", "2", "--word", "s"]) == EXIT_INPUT
    capsys.readouterr()
    assert run(["dihedral", "trivial-tuples", "--m", "3", "--bound", "1"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    header = json.loads(lines[0])
    rows = [json.loads(x) for x in lines[1:]]
    assert header["count"] == len(rows) and header["config"]["command"] == "dihedral trivial-tuples"
    assert [1, 1, 1, -1, -1, -1] in rows


def test_deligne_build_and_audit(g345, tmp_path, capsys):
    ball = tmp_path / "ball.json"
    assert run(["deligne", "build", "--graph", g345, "--radius", "1", "--length-bound", "2",
                "--ball-out", str(ball)]) == EXIT_OK
    assert json.loads(ball.read_text())["radius"] == 1
    capsys.readouterr()
    assert run(["deligne", "audit", "--graph", g345, "--radius", "2", "--length-bound", "2",
                "--max-pairs", "10"]) == EXIT_OK
    rep = _json(capsys)
    assert rep["ok"] is True


def test_hexagon_commands(capsys):
    assert run(["hexagon", "classify", "--exponents", "1,1,1,-1,-1,-1"]) == EXIT_OK
    assert run(["hexagon", "classify", "--exponents", "2,1,1,-3,-1,-1"]) == EXIT_NEGATIVE
    assert run(["hexagon", "classify", "--arrows", "2,1,1,-2,-1,-1"]) == EXIT_OK
    assert run(["hexagon", "classify", "--exponents", "1,x"]) == EXIT_INPUT
    assert run(["hexagon", "complete", "--strip", "4"]) == EXIT_OK
    assert run(["hexagon", "complete", "--triangle", "1"]) == EXIT_OK
    assert run(["hexagon", "complete", "--triangle", "2"]) == EXIT_NEGATIVE


def test_classify_commands(g333, g345, capsys):
    assert run(["classify", "exotic", "--graph", g333, "--triple", "a,b,c"]) == EXIT_OK
    rep = _json(capsys)
    assert rep["A4_relation"] and rep["presentation_checks"]["ok"]
    assert rep["centre"]["z"] == "a b c a b c"
    assert run(["classify", "exotic", "--graph", g345, "--triple", "abc"]) == EXIT_INPUT
    assert run(["classify", "probe", "--graph", g345, "--letters", "ab", "--radius", "1",
                "--length-bound", "2"]) == EXIT_BOUND
    capsys.readouterr()
    assert run(["classify", "probe", "--graph", g333, "--letters", "abc", "--radius", "1",
                "--length-bound", "2"]) == EXIT_OK
    assert _json(capsys)["verdict"] == "has_isolated_witness"


def test_reconstruct(g345, tmp_path, capsys):
    cx = tmp_path / "cx.json"
    assert run(["reconstruct", "--graph", g345, "--radius", "2", "--length-bound", "2", "--verify-F",
                "--complex-out", str(cx)]) == EXIT_OK
    rep = _json(capsys)
    assert rep["F1"]["ok"] and rep["F"]["bijective"]
    assert json.loads(cx.read_text())["ball"]["radius"] == 2


def test_aut_commands(g333, g345, tmp_path, capsys):
    m = tmp_path / "iota.json"
    m.write_text(json.dumps({"images": {"a": "a^-1", "b": "b^-1", "c": "c^-1"}}))
    assert run(["aut", "apply", "--graph", g333, "--map", str(m), "--word", "a b"]) == EXIT_OK
    rep = _json(capsys)
    assert rep["image"] == "a^-1 b^-1" and rep["height_tag"] == "inversion_composite"
    m.write_text(json.dumps({"images": {"a": "a", "b": "b^-1", "c": "c"}}))
    assert run(["aut", "apply", "--graph", g333, "--map", str(m), "--word", "a"]) == EXIT_NEGATIVE
    assert any("mixed heights" in r for r in _json(capsys)["validation_failures"])
    m.write_text("{")
    assert run(["aut", "apply", "--graph", g333, "--map", str(m), "--word", "a"]) == EXIT_INPUT
    assert run(["aut", "decide-iso", "--g1", g345, "--g2", g345]) == EXIT_OK


def test_infinite_label_is_scope_diagnostic(tmp_path):
    g = _graph(tmp_path, "inf", [["a", "b", 3], ["b", "c", 3]])
    assert run(["aut", "out", "--graph", g]) == EXIT_BOUND


def test_text_format_and_out_file(g333, tmp_path):
    out = tmp_path / "r.txt"
    assert run(["aut", "out", "--graph", g333, "--format", "text", "--out", str(out)]) == EXIT_OK
    assert "order: 12" in out.read_text()


def test_deterministic_reports(g345, tmp_path):
    outs = []
    p = tmp_path / "r.json"
    for _ in range(2):
        run(["deligne", "build", "--graph", g345, "--radius", "1", "--length-bound", "2", "--out", str(p)])
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


def test_env_cap(g345, monkeypatch, capsys):
    monkeypatch.setenv("ARTIN_ORACLE_CAP", "20000")
    assert run(["oracle", "equal", "--graph", g345, "--u", "a", "--v", "a"]) == EXIT_OK
    assert _json(capsys)["config"]["cap"] == 20000


def test_module_entry_point(g333):
    proc = subprocess.run([sys.executable, "-m", "artin_deligne", "aut", "out", "--graph", g333],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["order"] == 12
