"""Command-line tests.  Run this file as a script to regenerate the golden outputs."""

import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from divgraph.cli import main
from divgraph.io import divisor_from_json, divisor_to_json, dumps, load_graph

HERE = Path(__file__).parent
FIX = HERE / "fixtures"
GOLDEN = HERE / "golden"

# name -> (arguments with fixture names, expected exit code)
COMMANDS = {
    "rho_path": (["rho", "path", "d_v0", "d_v1"], 0),
    "rho_circle": (["rho", "circle", "d_v0", "d_v1"], 0),
    "sfunc_circle": (["sfunc", "circle", "d_v0", "d_v1"], 0),
    "resistance_circle": (["resistance", "circle", "--p", "v0", "--q", "e1:0.25"], 0),
    "jfun_path": (["jfun", "path", "--p", "v1", "--q", "v0", "--samples", "4"], 0),
    "tpath_circle": (["tpath", "circle", "d_v0", "d_v1", "--t", "0.5"], 0),
    "tpath_path_start": (["tpath", "path", "d_v0", "d_v1", "--t", "0"], 0),
    "segment_contains_true": (["segment-contains", "path", "d_v0", "d_v1", "path_e05"], 0),
    "segment_contains_false": (["segment-contains", "circle", "d_v0", "d_v1", "circle_e0"], 1),
    "segment_intersect": (["segment-intersect", "path", "d_v0", "path_e06", "path_e04", "d_v1"], 0),
    "segment_intersect_empty": (["segment-intersect", "path", "d_v0", "path_e04", "path_e06", "d_v1"], 0),
    "reduce_segment": (["reduce", "path", "d_v1", "--hull", "d_v0", "path_e04"], 0),
    "reduce_hull": (["reduce", "circle", "circle_mix", "--hull", "d_v0", "d_v1", "circle_e0"], 0),
    "member_false": (["member", "circle", "circle_e0", "--hull", "d_v0", "d_v1"], 1),
    "member_true": (["member", "path", "path_e05", "--hull", "d_v0", "d_v1"], 0),
    "extremals_path": (["extremals", "path", "--hull", "d_v0", "d_v1", "path_e05"], 0),
    "project_path": (["project", "path", "d_v1_double", "--hull", "d_v0", "path_e04"], 0),
    "retract_path": (["retract", "path", "d_v1", "--hull", "path_e04", "--t", "0.5", "--kappa", "0.6"], 0),
    "retract_default_kappa": (["retract", "path", "d_v1", "--hull", "path_e04", "--t", "0.5"], 0),
}


def _expand(args):
    """Replace fixture names by paths; options, numbers and point specs pass through."""
    out = []
    for a in args:
        path = FIX / f"{a}.json"
        out.append(str(path) if path.exists() else a)
    return out


def run(args):
    out, err = io.StringIO(), io.StringIO()
    code = main(_expand(args), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name", sorted(COMMANDS))
def test_golden_output(name):
    args, expected_code = COMMANDS[name]
    first = run(args)
    second = run(args)
    assert first == second
    code, out, err = first
    assert code == expected_code, err
    assert err == ""
    assert out == (GOLDEN / f"{name}.txt").read_text(encoding="utf-8")


def test_documented_examples():
    assert run(["rho", "path", "d_v0", "d_v1"])[:2] == (0, "1.0\n")
    assert run(["member", "circle", "circle_e0", "--hull", "d_v0", "d_v1"])[:2] == (1, "false\n")
    code, out, _ = run(["tpath", "path", "d_v0", "d_v1", "--t", "0"])
    assert json.loads(out) == json.loads((FIX / "d_v0.json").read_text())


def test_invalid_inputs_exit_2(tmp_path):
    cases = [
        ["rho", "bad_graph", "d_v0", "d_v1"],
        ["rho", "path", "negative", "d_v1"],
        ["rho", "path", "d_v0", str(tmp_path / "missing.json")],
        ["rho", "path", "d_v0", "d_v1_double"],
        ["tpath", "path", "d_v0", "d_v1", "--t", "1.5"],
        ["tpath", "path", "d_v0", "d_v1", "--t", "abc"],
        ["resistance", "path", "--p", "e:7", "--q", "v0"],
        ["retract", "path", "d_v1", "--hull", "path_e04", "--t", "0.5", "--kappa", "0.1"],
        ["nonsense"],
        [],
    ]
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    cases.append(["rho", "path", str(broken), "d_v1"])
    for args in cases:
        code, out, err = run(args)
        assert code == 2, args
        assert out == ""
        assert err.startswith("divgraph: error:") and err.count("\n") == 1


def test_strict_certificate_failure_exit_3(monkeypatch):
    import divgraph.reduced as reduced_mod

    real = reduced_mod.reduced_certificate

    def broken(*args, **kwargs):
        report = real(*args, **kwargs)
        return reduced_mod.CertificateReport(report.generators, False)

    monkeypatch.setattr(reduced_mod, "reduced_certificate", broken)
    args = ["reduce", "circle", "circle_mix", "--hull", "d_v0", "d_v1", "circle_e0"]
    code, out, err = run(args)
    assert code == 0 and json.loads(out)["status"] == "best-effort"
    code, out, err = run(args + ["--strict"])
    assert code == 3
    assert "certificate failed" in err
    assert json.loads(out)["status"] == "best-effort"


def test_tolerance_flags():
    code, out, _ = run(["--tol-val", "1e-7", "--tol-len", "1e-10", "rho", "path", "d_v0", "d_v1"])
    assert (code, out) == (0, "1.0\n")


def test_jfun_csv_and_plot(tmp_path):
    csv_path, svg_path = tmp_path / "j.csv", tmp_path / "f.svg"
    code, out, _ = run(["jfun", "path", "--p", "v1", "--q", "v0", "--csv", str(csv_path), "--samples", "2"])
    assert code == 0 and out == ""
    rows = csv_path.read_text().splitlines()
    assert rows[0] == "edge_id,offset,value"
    assert rows[1:] == ["e,0.0,0.0", "e,0.5,0.5", "e,1.0,1.0"]
    code, out, _ = run(["plot", "circle", "d_v0", "d_v1", "--svg", str(svg_path), "--csv", str(tmp_path / "f.csv")])
    assert code == 0
    assert svg_path.read_text().lstrip().startswith("<?xml")
    assert (tmp_path / "f.csv").read_text().startswith("edge_id,offset,value\n")


def test_divisor_json_round_trip():
    g = load_graph(FIX / "circle.json")
    for name in ("d_v0", "circle_e0", "circle_mix"):
        text = (FIX / f"{name}.json").read_text()
        once = dumps(divisor_to_json(divisor_from_json(g, json.loads(text))))
        twice = dumps(divisor_to_json(divisor_from_json(g, json.loads(once))))
        assert once == twice


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "divgraph.cli", "rho", str(FIX / "circle.json"), str(FIX / "d_v0.json"), str(FIX / "d_v1.json")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == "0.25\n"


if __name__ == "__main__":
    GOLDEN.mkdir(exist_ok=True)
    for name, (args, _) in sorted(COMMANDS.items()):
        (GOLDEN / f"{name}.txt").write_text(run(args)[1], encoding="utf-8")
