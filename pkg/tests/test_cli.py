from __future__ import annotations

import json

import pytest

from bredon.cli import build_parser, config_from_args, main, parse_report, render_json, run

S3_FILE = "degree 3\ngen (1 2)\ngen (1 2 3)\n"
C2_FILE = "degree 2\ngen (1 2)\n"


@pytest.fixture
def groups(tmp_path):
    (tmp_path / "s3.grp").write_text(S3_FILE)
    (tmp_path / "c2.grp").write_text(C2_FILE)
    return tmp_path


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_homology_c2_free(groups, capsys):
    code, out, _ = _run(capsys, "homology", "--group", str(groups / "c2.grp"), "--family", "trivial", "--degree", "3")
    assert code == 0
    assert "H_1 = Z/2" in out and "H_3 = Z/2" in out and "H_2 = 0" in out


def test_homology_s3_all(groups, capsys):
    code, out, _ = _run(capsys, "homology", "--group", str(groups / "s3.grp"), "--family", "all", "--degree", "3")
    assert code == 0
    assert [ln for ln in out.splitlines() if ln.startswith("H_")] == ["H_0 = Z", "H_1 = 0", "H_2 = 0", "H_3 = 0"]


def test_homology_degree_zero(groups, capsys):
    code, out, _ = _run(capsys, "homology", "--group", str(groups / "c2.grp"), "--family", "all", "--degree", "0")
    assert code == 0 and "H_0 = Z" in out


def test_cohomology_and_dry_run(capsys):
    code, out, _ = _run(capsys, "cohomology", "--group", "C3", "--degree", "2")
    assert code == 0 and "H^2 = Z/3" in out
    code, out, _ = _run(capsys, "cohomology", "--group", "S3", "--family", "all", "--degree", "6", "--dry-run")
    assert code == 0 and "dry run" in out


def test_build_z2_join_writes_file(tmp_path, capsys):
    path = tmp_path / "z2.qcw"
    code, out, _ = _run(capsys, "build", "z2-join", "--pieces", "3", "--output", str(path))
    assert code == 0 and "H_3 = Z^3" in out and path.exists()
    code, out2, _ = _run(capsys, "quotient-homology", "--cw", str(path))
    assert code == 0 and "H_3 = Z^3" in out2


def test_build_jpl_loop(capsys):
    code, out, _ = _run(capsys, "build", "jpl", "--base", "loop", "--cells", "5", "--format", "json")
    rep = json.loads(out)
    assert code == 0
    assert next(r for r in rep["degrees"] if r["n"] == 2)["rank"] >= 4


def test_build_telescope_point(capsys):
    code, out, _ = _run(capsys, "build", "telescope", "--base", "point", "--window", "2")
    assert code == 0 and "reduced homology vanishes: yes" in out


def test_checks(capsys):
    assert _run(capsys, "check", "yoneda", "--group", "S3", "--family", "all", "--trials", "3", "--seed", "1")[0] == 0
    assert _run(capsys, "check", "kunneth", "--group", "C2", "--degree", "2")[0] == 0
    assert _run(capsys, "check", "shapiro", "--group", "S3", "--subgroup", "{(1 2 3)}", "--degree", "2")[0] == 0
    code, out, _ = _run(capsys, "check", "cd-zero", "--group", "S3", "--family", "all")
    assert code == 0


def test_exit_codes(tmp_path, capsys):
    assert _run(capsys, "homology", "--group", str(tmp_path / "missing.grp"))[0] == 2
    bad = tmp_path / "bad.grp"
    bad.write_text("degree x\n")
    assert _run(capsys, "homology", "--group", str(bad))[0] == 2
    assert _run(capsys, "homology", "--group", "S3", "--family", "all", "--degree", "5",
                "--budget-cells", "100")[0] == 3
    sq = tmp_path / "sq.qcw"
    sq.write_text("[dim 0] cells 1\n[dim 1] cells 1\nd 0 = 1*0\n[dim 2] cells 1\nd 0 = 1*0\n")
    assert _run(capsys, "quotient-homology", "--cw", str(sq))[0] == 1
    assert _run(capsys, "homology", "--group", "S3", "--threads", "0")[0] == 2


def test_text_output_is_deterministic(capsys):
    argv = ["homology", "--group", "S3", "--family", "all", "--degree", "2"]
    a = _run(capsys, *argv)[1]
    b = _run(capsys, *argv)[1]
    c = _run(capsys, *argv, "--threads", "3")[1]
    assert a == b == c


def test_json_round_trip():
    ns = build_parser().parse_args(["homology", "--group", "C4", "--degree", "3", "--format", "json"])
    code, rep = run(config_from_args(ns))
    assert code == 0
    assert parse_report(render_json(rep)) == rep
