import json
import re
from pathlib import Path

import pytest

from dvt import report as report_mod
from dvt.cli import main
from dvt.viability import StatementResult

GOLDEN = Path(__file__).parent / "golden"

SEG = {
    "name": "seg",
    "points": ["a", "b", "ab"],
    "hasse": [["a", "ab"], ["b", "ab"]],
    "C": ["a"],
    "map_kind": "function",
    "map": {"a": ["b"]},
}


def write(tmp_path, **extra):
    d = dict(SEG, **extra)
    p = tmp_path / "seg.json"
    p.write_text(json.dumps(d), encoding="utf-8")
    return str(p)


def test_analyze_ok(tmp_path, capsys):
    assert main(["analyze", write(tmp_path, expected={"iter": 1})]) == 0
    out = capsys.readouterr().out
    assert "iter       1" in out and "exit       0" in out


def test_analyze_mismatch_exit_code(tmp_path, capsys):
    assert main(["analyze", write(tmp_path, expected={"iter": 3})]) == 2
    assert "MISMATCH   iter: expected 3, got 1" in capsys.readouterr().out


def test_analyze_falsified_exit_code(tmp_path, capsys, monkeypatch):
    def broken(space, C, f, rep):
        return [StatementResult("nested", "fails", ("a",))]

    monkeypatch.setattr(report_mod, "verify_propositions", broken)
    assert main(["analyze", write(tmp_path), "--propositions"]) == 3
    assert "FALSIFIED  proposition nested" in capsys.readouterr().out


def test_analyze_errors(tmp_path, capsys):
    assert main(["analyze", str(tmp_path / "missing.json")]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{", encoding="utf-8")
    assert main(["analyze", str(bad)]) == 1
    assert "error:" in capsys.readouterr().err


def test_analyze_warns_on_non_closed_domain(tmp_path, capsys):
    assert main(["analyze", write(tmp_path, C=["ab"], map={"ab": ["a"]})]) == 0
    cap = capsys.readouterr()
    assert "warning:" in cap.err and "NOT closed" in cap.out


def test_all_outputs(tmp_path, capsys):
    out_dir = tmp_path / "out"
    code = main(["analyze", str(GOLDEN / "ex_circle_d_5.json"), "--all", "--out-dir", str(out_dir)])
    assert code == 0
    stem = out_dir / "ex_circle_d_5"
    for ext in ("txt", "json", "tsv", "dot", "png"):
        assert (stem.parent / f"{stem.name}.{ext}").stat().st_size > 0
    doc = json.loads((out_dir / "ex_circle_d_5.json").read_text())
    assert doc["iter"] == 4 and doc["gate"]["status"] == "fails"
    assert doc["betti"] == {"b0": 1, "b1": 1}
    assert doc["bounds"]["asserted"] == 4
    assert (out_dir / "ex_circle_d_5.png").read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    text = capsys.readouterr().out
    assert "orbit      v2 -> v4 -> v1 -> v3 -> v0" in text


def test_dot_lists_each_cell_once(tmp_path):
    dot = tmp_path / "g.dot"
    assert main(["analyze", str(GOLDEN / "ex_corr_main.json"), "--dot", str(dot)]) == 0
    text = dot.read_text()
    nodes = re.findall(r'^    ("[^"]+") \[fillcolor', text, flags=re.M)
    points = json.loads((GOLDEN / "ex_corr_main.json").read_text())["points"]
    assert sorted(json.loads(n) for n in nodes) == sorted(points)
    assert text.startswith("digraph") and text.rstrip().endswith("}")


def test_tsv_layers(tmp_path):
    tsv = tmp_path / "l.tsv"
    main(["analyze", str(GOLDEN / "ex_4_2.json"), "--tsv", str(tsv)])
    rows = tsv.read_text().splitlines()
    assert rows[0] == "layer\tsize\tcells"
    assert rows[-1] == "3\t2\tx2,x4"


def test_analyze_is_deterministic(tmp_path, capsys):
    outs = []
    for k in range(2):
        main(["analyze", str(GOLDEN / "ex_stargate_bis.json"), "--all",
              "--json", str(tmp_path / f"r{k}.json")])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]
    assert (tmp_path / "r0.json").read_bytes() == (tmp_path / "r1.json").read_bytes()


def test_gallery_commands(tmp_path, capsys):
    assert main(["gallery", "list"]) == 0
    assert "ex_ndim_torus(5,7)" in capsys.readouterr().out
    assert main(["gallery", "run", "ex_4_1"]) == 0
    assert main(["gallery", "run"]) == 1
    assert main(["gallery", "run", "nope"]) == 1
    target = tmp_path / "c.json"
    assert main(["gallery", "export", "ex_circle_d(5)", str(target)]) == 0
    assert target.read_text() == (GOLDEN / "ex_circle_d_5.json").read_text()
    assert main(["gallery", "export", "ex_4_1"]) == 1


def test_cohomology_command(capsys):
    assert main(["cohomology", str(GOLDEN / "ex_circle_d_5.json")]) == 0
    out = capsys.readouterr().out
    assert "b1 1" in out and "gate fails: open set e0 has boundary v0 v1" in out
    assert main(["cohomology", str(GOLDEN / "ex_ndim_torus_5_7.json")]) == 0
    out = capsys.readouterr().out
    assert "b1 2" in out and "gate undecided" in out


def test_search_command(tmp_path, capsys):
    args = ["search", "--seed", "3", "--instances", "50", "--mode", "oracle"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first
    assert "violations 0" in first


def test_search_limits(capsys):
    assert main(["search", "--max-cells", "20"]) == 1
    assert main(["search", "--instances", "0"]) == 1
    with pytest.raises(SystemExit):
        main(["search", "--mode", "bogus"])
