from __future__ import annotations

import json
import subprocess
import sys

import pytest

from cubical_cumulants import cli

SMALL = ["--samples", "2", "--kmax", "3"]


def run(argv):
    return cli.main(argv)


@pytest.fixture(scope="module")
def default_report(tmp_path_factory):
    path = tmp_path_factory.mktemp("default") / "verify.json"
    code = run(["verify", "--out", str(path)])
    return code, json.loads(path.read_text())


def test_default_verify_passes(default_report):
    code, report = default_report
    assert code == 0
    assert report["summary"]["failed"] == []
    assert report["config"]["n"] == 2 and report["config"]["seed"] == 0
    assert report["schema"] == cli.SCHEMA and report["version"] == cli.SCHEMA_VERSION
    suites = {c["suite"] for c in report["checks"]}
    assert suites == {"coalgebra", "lattice", "brackets", "multiscale"}
    assert all(c["anchor"] for c in report["checks"])


def test_verify_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["verify", "--n", "1", *SMALL, "--out", str(a)])
    run(["verify", "--n", "1", *SMALL, "--out", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_negative_control_fails_with_witness(tmp_path):
    path = tmp_path / "bad.json"
    assert run(["verify", "--n", "1", *SMALL, "--corrupt-products", "--out", str(path)]) == 1
    report = json.loads(path.read_text())
    assert report["summary"]["failed"] == ["coalgebra.algebra_axioms"]
    (bad,) = [c for c in report["checks"] if not c["pass"]]
    assert bad["detail"]["witnesses"][0]["axiom"] == "graded-commutativity"


def test_homology_in_three_dimensions(tmp_path):
    path = tmp_path / "n3.json"
    assert run(["verify", "--n", "3", *SMALL, "--out", str(path)]) == 0
    report = json.loads(path.read_text())
    (row,) = [c for c in report["checks"] if c["id"] == "lattice.homology_degree0_n3"]
    assert row["detail"]["rank"] == 8


def test_window_mode_verify(tmp_path):
    path = tmp_path / "w.json"
    assert run(["verify", "--n", "2", *SMALL, "--mode", "window", "--out", str(path)]) == 0


def test_output_directory_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUTPUT_ENV, str(tmp_path / "reports"))
    assert run(["converge", "--n", "1", "--levels", "3", "4", "5"]) == 0
    report = json.loads((tmp_path / "reports" / "converge.json").read_text())
    assert {c["id"] for c in report["checks"]} == {
        "converge.delta2", "converge.partial3", "converge.delta1_vs_d", "converge.partial2_vs_schouten",
    }


def test_converge_needs_three_levels(tmp_path):
    with pytest.raises(SystemExit):
        run(["converge", "--levels", "3", "4", "--out", str(tmp_path / "c.json")])


def test_invalid_config_is_rejected(tmp_path):
    with pytest.raises(SystemExit):
        run(["verify", "--n", "5", "--out", str(tmp_path / "x.json")])


# report merging


@pytest.fixture
def two_reports(tmp_path):
    a, b = tmp_path / "verify.json", tmp_path / "converge.json"
    run(["verify", "--n", "1", *SMALL, "--out", str(a)])
    run(["converge", "--n", "1", "--levels", "3", "4", "5", "--out", str(b)])
    return a, b


def test_report_identity_merge(two_reports, tmp_path, capsys):
    a, _ = two_reports
    out = tmp_path / "merged.json"
    assert run(["report", str(a), "--out", str(out)]) == 0
    assert json.loads(out.read_text())["checks"] == json.loads(a.read_text())["checks"]
    assert "lattice.wedge_associative" in capsys.readouterr().out


def test_report_union_is_sorted(two_reports, tmp_path):
    a, b = two_reports
    out1, out2 = tmp_path / "m1.json", tmp_path / "m2.json"
    run(["report", str(a), str(b), "--out", str(out1)])
    run(["report", str(b), str(a), "--out", str(out2)])
    m1, m2 = json.loads(out1.read_text()), json.loads(out2.read_text())
    ids = [c["id"] for c in m1["checks"]]
    assert ids == sorted(ids)
    assert len(ids) == len(json.loads(a.read_text())["checks"]) + 4
    assert m1["checks"] == m2["checks"]


def test_report_conflict_names_both_sources(two_reports, tmp_path, capsys):
    a, _ = two_reports
    data = json.loads(a.read_text())
    data["checks"][0]["pass"] = not data["checks"][0]["pass"]
    c = tmp_path / "conflict.json"
    c.write_text(json.dumps(data))
    assert run(["report", str(a), str(c)]) == 2
    err = capsys.readouterr().err
    assert str(a) in err and str(c) in err


def test_report_schema_mismatch(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"schema": "other", "version": 1, "checks": []}))
    assert run(["report", str(bad)]) == 2
    assert "schema mismatch" in capsys.readouterr().err


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "cubical_cumulants.cli", "converge", "--n", "1", "--levels", "3", "4", "5", "--out", str(tmp_path / "c.json")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "4/4 checks passed" in proc.stdout
