import csv
import json

import pytest

from specgeom import cli


def _rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_boundary_measure_table_command(tmp_path, capsys):
    assert cli.run(["tables", "theorem2v", "--m-max", "26", "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "theorem2v.csv")
    assert list(rows[0]) == ["m", "k", "beta", "kind", "omega_max", "applicable", "ratio", "err_flag"]
    assert [int(r["omega_max"]) for r in rows] == [1] * 3 + [2] * 19 + [3] * 2
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert set(manifest) == {"command", "parameters", "tool_version", "outputs", "wall_time_seconds"}
    assert manifest["parameters"]["m_max"] == 26


def test_torsion_table_command(tmp_path):
    assert cli.run(["tables", "corollary5", "--beta", "m+2", "--m-max", "27", "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "corollary5_beta_m_plus_2.csv")
    assert rows[0]["omega_max"] == "n/a" and rows[0]["applicable"] == "false"
    assert (rows[-2]["m"], rows[-2]["omega_max"]) == ("26", "4")
    assert (rows[-1]["m"], rows[-1]["omega_max"]) == ("27", "5")


def test_csv_is_byte_identical_across_runs(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert cli.run(["tables", "corollary5", "--beta", "m", "--m-max", "40", "--out", str(out)]) == 0
    assert (a / "corollary5_beta_m.csv").read_bytes() == (b / "corollary5_beta_m.csv").read_bytes()


def test_certify(capsys):
    assert cli.run(["certify", "ball-not-minimiser", "--m", "3"]) == 0
    assert capsys.readouterr().out.strip() == "true"
    assert cli.run(["certify", "ball-not-minimiser", "--asymptotic"]) == 0
    assert capsys.readouterr().out.strip() == "true"


def test_certify_planar_case_is_usage_error(capsys):
    assert cli.run(["certify", "ball-not-minimiser", "--m", "2"]) == 2
    assert "m >= 3" in capsys.readouterr().err


def test_configs(tmp_path, capsys):
    assert cli.run(["configs", "--m", "8", "--k", "5", "--beta", "8", "--refined", "--out", str(tmp_path)]) == 0
    assert capsys.readouterr().out.split() == ["0,1", "1,1", "2,1"]
    assert _rows(tmp_path / "configs.csv")[2] == {"k1": "2", "k2": "1", "omega": "3"}


def test_bounds_lambda2star(capsys):
    assert cli.run(["bounds", "lambda2star", "--m", "2"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["gap"] == pytest.approx(2.0)


def test_experiment_quadrature(tmp_path):
    assert cli.run(["experiment", "quadrature", "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "quadrature.jsonl").read_text())
    assert abs(rep["ratio"] - 0.75) <= 1e-8
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["outputs"] == [str(tmp_path / "quadrature.jsonl"), str(tmp_path / "quadrature.csv")]


def test_torsion_check(tmp_path):
    assert cli.run(["torsion-check", "--shape", "disk", "--h", "0.05", "--k-max", "50", "--out", str(tmp_path)]) == 0
    assert len(_rows(tmp_path / "torsion_disk_bound.csv")) == 50


def test_failed_verification_exits_one(tmp_path):
    # at t = 0.5 the normalized slope is far from its small-t limit
    code = cli.run(["experiment", "ellipse", "--t-values", "0.5", "--h", "0.2", "--out", str(tmp_path)])
    rep = json.loads((tmp_path / "ellipse.jsonl").read_text())
    assert not rep["checks"]["slope"]
    assert code == 1
    assert (tmp_path / "manifest.json").exists()


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["tables"],
        ["tables", "theorem2v"],
        ["tables", "theorem2v", "--m-max", "10"],  # --out missing
        ["experiment", "nonsense", "--out", "x"],
        ["certify", "ball-not-minimiser"],
        ["optimize", "--k", "two", "--out", "x"],
    ],
)
def test_usage_errors(argv, capsys):
    assert cli.run(argv) == 2
    assert capsys.readouterr().err


def test_domain_error_is_usage_error(tmp_path):
    assert cli.run(["tables", "theorem2v", "--m-max", "2", "--out", str(tmp_path)]) == 2
