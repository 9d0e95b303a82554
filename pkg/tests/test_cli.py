import json
import subprocess
import sys

import numpy as np
import pytest

from jacobiflow import double_tangent as dt
from jacobiflow.cli import EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, EXIT_VERIFY, run
from jacobiflow.output import read_csv, read_json
from jacobiflow.spray_flow import integrate_geodesic
from jacobiflow.zoo import sphere
from test_zoo import SPHERE_DEN


def test_geodesic_csv(tmp_path, capsys):
    out = tmp_path / "geo.csv"
    argv = ["geodesic", "--model", "sphere", "--radius", "1", "--x0", "0,0", "--v0", "1,0",
            "--t-max", "1.4", "--h", "0.001", "--out", str(out)]
    assert run(argv) == EXIT_OK
    assert "geodesic sphere(R=1)" in capsys.readouterr().out
    columns, rows = read_csv(out)
    assert columns == ["t", "x1", "x2", "v1", "v2"]
    # x(t) = tan t along the axis through the chart origin
    np.testing.assert_allclose(rows[:, 1], np.tan(rows[:, 0]), rtol=1e-9)


def test_geodesic_past_the_antipode_leaves_chart(tmp_path, capsys):
    out = tmp_path / "geo.csv"
    argv = ["geodesic", "--model", "sphere", "--radius", "1", "--x0", "0,0", "--v0", "1,0",
            "--t-max", "3.14159", "--h", "0.001", "--out", str(out)]
    assert run(argv) == EXIT_DOMAIN
    assert "left the chart domain" in capsys.readouterr().err
    assert not out.exists()


def test_csv_roundtrip_exact(tmp_path):
    out = tmp_path / "geo.csv"
    run(["geodesic", "--model", "sphere", "--x0", "0.1,-0.3", "--v0", "0.7,0.2", "--t-max", "0.5", "--h", "0.01",
         "--out", str(out)])
    _, rows = read_csv(out)
    traj = integrate_geodesic(sphere(1.0), dt.TangentVector([0.1, -0.3], [0.7, 0.2]), 0.5, 0.01)
    assert np.array_equal(rows, np.column_stack([traj.times, traj.states]))


def test_csv_bytes_deterministic(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        run(["jacobi", "--model", "half-plane", "--x0", "0,1", "--v0", "1,0", "--J0", "0,0", "--nablaJ0", "0,1",
             "--t-max", "0.2", "--h", "0.01", "--out", str(p)])
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_jacobi_flat_summary(tmp_path, capsys):
    out = tmp_path / "jac.csv"
    argv = ["jacobi", "--model", "euclidean", "--dim", "2", "--x0", "0,0", "--v0", "1,0", "--J0", "0,0",
            "--nablaJ0", "0,1", "--t-max", "1", "--h", "0.01", "--out", str(out)]
    assert run(argv) == EXIT_OK
    assert "J=(0, 1)" in capsys.readouterr().out
    columns, rows = read_csv(out)
    assert columns == ["t", "x1", "x2", "v1", "v2", "J1", "J2", "Jdot1", "Jdot2", "nablaJ1", "nablaJ2"]
    assert rows.shape == (101, 11)


def test_jacobi_raw_and_variation(capsys):
    argv = ["jacobi", "--model", "torsion-demo", "--beta", "0.5", "--x0", "0,0", "--v0", "1,0.5", "--J0", "0.1,0",
            "--Jdot0", "0,1", "--t-max", "0.5", "--h", "0.01", "--s-eps", "1e-4"]
    assert run(argv) == EXIT_OK
    line = capsys.readouterr().out
    mismatch = float(line.split("variation_mismatch=")[1])
    assert mismatch <= 1e-8


def test_json_output(tmp_path):
    out = tmp_path / "g.json"
    assert run(["geodesic", "--model", "euclidean", "--x0", "0,0", "--v0", "1,2", "--t-max", "0.1", "--h", "0.05",
                "--out", str(out)]) == EXIT_OK
    columns, rows = read_json(out)
    assert columns[0] == "t" and rows[-1].tolist() == [0.1, 0.1, 0.2, 1.0, 2.0]
    assert json.loads(out.read_text())["model"]["kind"] == "euclidean"


def test_negative_vector_values(capsys):
    assert run(["geodesic", "--model", "euclidean", "--x0", "-1,-2", "--v0", "-1,0", "--t-max", "1", "--h", "0.5"]) == 0
    assert "x=(-2, -2)" in capsys.readouterr().out


def test_curvature_and_torsion(tmp_path, capsys):
    assert run(["curvature", "--model", "half-plane", "--x0", "0.3,1.2"]) == EXIT_OK
    assert "K(e1,e2)=-1" in capsys.readouterr().out
    out = tmp_path / "tor.csv"
    assert run(["torsion", "--model", "torsion-demo", "--beta", "1", "--x0", "0,0", "--out", str(out)]) == EXIT_OK
    columns, rows = read_csv(out)
    assert columns == ["j", "k", "T1", "T2"]
    assert rows[1].tolist() == [1, 2, 0, 2]


def test_metric_file(tmp_path, capsys):
    cfg = tmp_path / "m.json"
    cfg.write_text(json.dumps({"kind": "custom_metric", "dim": 2,
                               "params": {"numerator": [[4, [0, 0]]], "denominator": SPHERE_DEN}}))
    assert run(["curvature", "--model", "custom", "--metric-file", str(cfg), "--x0", "0.2,0.1"]) == EXIT_OK
    assert "K(e1,e2)=1" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["geodesic", "--model", "sphere", "--x0", "0,0", "--v0", "1,0"],
        ["geodesic", "--model", "sphere", "--x0", "0,a", "--v0", "1,0", "--t-max", "1"],
        ["geodesic", "--model", "sphere", "--x0", "0,0", "--v0", "1,0,0", "--t-max", "1"],
        ["geodesic", "--model", "mobius", "--x0", "0,0", "--v0", "1,0", "--t-max", "1"],
        ["geodesic", "--model", "custom", "--x0", "0,0", "--v0", "1,0", "--t-max", "1"],
        ["geodesic", "--model", "sphere", "--x0", "0,0", "--v0", "1,0", "--t-max", "1", "--h", "-1"],
        ["geodesic", "--x0", "0,0", "--v0", "1,0", "--t-max", "1"],
        ["geodesic", "--metric-file", "/nonexistent.json", "--x0", "0,0", "--v0", "1,0", "--t-max", "1"],
        ["jacobi", "--model", "sphere", "--x0", "0,0", "--v0", "1,0", "--J0", "0,0", "--t-max", "1"],
        ["verify", "--suite", "geometry"],
        ["verify", "--suite", "double_tangent", "--tol", "bogus=1"],
        ["verify", "--suite", "double_tangent", "--tol", "flip_involution"],
    ],
)
def test_usage_errors(argv, capsys):
    assert run(argv) == EXIT_USAGE


def test_domain_error_exit(capsys):
    assert run(["geodesic", "--model", "half-plane", "--x0", "0,-1", "--v0", "1,0", "--t-max", "1"]) == EXIT_DOMAIN


def test_verify_suite(tmp_path, capsys):
    assert run(["verify", "--suite", "double_tangent", "--seed", "7", "--probes", "20"]) == EXIT_OK
    report = capsys.readouterr().out
    assert report.startswith("# jacobiflow verify suite=double_tangent seed=7")
    assert "FAIL" not in report and "7/7 passed" in report
    out = tmp_path / "r.json"
    assert run(["verify", "--suite", "double_tangent", "--probes", "5", "--out", str(out)]) == EXIT_OK
    doc = json.loads(out.read_text())
    assert all(r["passed"] for r in doc["results"])


def test_verify_failure_exit(capsys):
    argv = ["verify", "--suite", "double_tangent", "--probes", "20", "--tol", "flip_naturality=1e-30"]
    assert run(argv) == EXIT_VERIFY
    assert "FAIL double_tangent.flip_naturality" in capsys.readouterr().out


def test_verify_parallel_matches_serial(capsys):
    argv = ["verify", "--suite", "connection", "--probes", "3", "--model", "sphere"]
    run(argv)
    serial = capsys.readouterr().out
    run(argv + ["--parallel", "2"])
    assert capsys.readouterr().out == serial


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "jacobiflow", "torsion", "--model", "euclidean", "--dim", "3", "--x0", "0,0,0"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and "max|Tor|=0" in proc.stdout
