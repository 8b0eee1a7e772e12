import sys
import os
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))
import json
import pytest
from radonkit.main import main
from radonkit.core.sinogram_io import read_sinogram

DISK = json.dumps({"dimension": 2, "kind": "ball", "center": [0.3, -0.2], "radius": 1.0})
ELLIPSE = json.dumps({"dimension": 2, "kind": "ellipsoid", "center": [0.0, 0.0], "semi_axes": [1.5, 1.0]})
REULEAUX = json.dumps({"dimension": 2, "kind": "reuleaux", "center": [0.0, 0.0], "width": 1.0})
BALL3 = json.dumps({"dimension": 3, "kind": "ball", "center": [0.0, 0.1, 0.0], "radius": 1.0})


def _run_json(args, capsys):
    code = main(args)
    return code, json.loads(capsys.readouterr().out)


def test_sinogram_writes_csv_and_sidecar(tmp_path):
    out = tmp_path / "disk.csv"
    code = main(["sinogram", "--body", DISK, "--function", "constant-xray", "--dirs", "8", "--offsets", "16",
                 "--out", str(out), "--threads", "1"])
    assert code == 0
    assert out.is_file()
    assert out.with_suffix(".json").is_file()


def test_sinogram_bytes_do_not_depend_on_threads(tmp_path):
    outputs = []
    for threads in (1, 4, 8):
        out = tmp_path / f"ellipse_{threads}.csv"
        assert main(["sinogram", "--body", ELLIPSE, "--function", "indicator", "--dirs", "16", "--offsets", "32",
                     "--out", str(out), "--threads", str(threads)]) == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]


def test_rigidity_from_written_sinogram(tmp_path, capsys):
    out = tmp_path / "disk.csv"
    main(["sinogram", "--body", DISK, "--function", "constant-xray", "--dirs", "32", "--offsets", "64",
          "--out", str(out), "--threads", "2"])
    code, report = _run_json(["rigidity", "--sinogram", str(out)], capsys)
    assert code == 0
    assert report["verdict"] == "ball"
    assert report["estimates"]["center"] == pytest.approx([0.3, -0.2], abs=1e-10)


def test_rigidity_ellipse_exits_one(capsys):
    code, report = _run_json(["rigidity", "--body", ELLIPSE, "--function", "indicator", "--dirs", "32",
                              "--offsets", "64", "--threads", "2"], capsys)
    assert code == 1
    assert report["verdict"] == "obstruction"
    assert report["obstruction"] == "G-collapse"


def test_rigidity_reuleaux_synthetic(capsys):
    code, report = _run_json(["rigidity", "--body", REULEAUX, "--function", "synthetic", "--dirs", "60",
                              "--offsets", "64"], capsys)
    assert code == 1
    assert report["obstruction"] == "g-linearity"


def test_rigidity_tolerance_flags(capsys):
    code, report = _run_json(["rigidity", "--body", ELLIPSE, "--function", "indicator", "--dirs", "16",
                              "--offsets", "32", "--tol-width", "0.5", "--tol-g", "100", "--tol-k", "1",
                              "--tol-linearity", "1", "--tol-centered", "1"], capsys)
    assert code == 0
    assert report["verdict"] == "ball"


def test_rigidity_in_space(tmp_path):
    out = tmp_path / "report.json"
    code = main(["rigidity", "--body", BALL3, "--function", "gamma:1", "--dirs", "12", "--offsets", "32",
                 "--angular-nodes", "32", "--seed", "4", "--out", str(out)])
    assert code == 0
    assert json.loads(out.read_text())["verdict"] == "ball"


def test_moments_report(capsys):
    code, report = _run_json(["moments", "--body", DISK, "--function", "constant-xray", "--dirs", "16",
                              "--offsets", "32"], capsys)
    assert code == 0
    assert report["K_mean"] == pytest.approx(2.0, abs=1e-12)
    assert report["center"] == pytest.approx([0.3, -0.2], abs=1e-12)


@pytest.mark.parametrize("args", [
    ["verify-oracle"],
    ["verify-oracle", "--dimension", "3"],
    ["verify-oracle", "--mode", "moments"],
    ["verify-oracle", "--mode", "moments", "--dimension", "3"],
    ["verify-oracle", "--mode", "kernel"],
    ["verify-oracle", "--mode", "xray", "--dimension", "3", "--chords", "200"],
    ["verify-oracle", "--mode", "fourier-slice"],
    ["fourier-slice"],
])
def test_oracle_modes_pass(args, capsys):
    assert main(args) == 0
    header = capsys.readouterr().out.splitlines()[0]
    assert "error" in header.split(",")


def test_oracle_designed_to_fail(capsys):
    assert main(["verify-oracle", "--tol", "1e-15", "--nodes", "4"]) == 1


def test_radon_table_columns(capsys):
    main(["verify-oracle", "--gammas", "0", "--distances", "0", "0.5"])
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "n,gamma,d,numeric,oracle,error"
    assert len(lines) == 3


@pytest.mark.parametrize("args", [
    ["sinogram", "--body", "{broken", "--function", "indicator", "--out", "x.csv"],
    ["sinogram", "--body", DISK, "--function", "indicator"],
    ["sinogram", "--body", DISK, "--function", "paraboloid", "--out", "x.csv"],
    ["rigidity", "--sinogram", "does-not-exist.csv"],
    ["rigidity", "--body", ELLIPSE, "--function", "constant-xray"],
    ["rigidity", "--body", DISK, "--function", "indicator", "--dirs", "3"],
    ["verify-oracle", "--dimension", "4"],
])
def test_bad_input_exits_two(args, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(args) == 2


def test_malformed_sinogram_file_exits_two(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("omega_1,omega_2,p,value\n1,0,0,1\n")
    assert main(["rigidity", "--sinogram", str(path)]) == 2


def test_numeric_failure_exits_three(tmp_path):
    function = json.dumps({"kind": "radial-profile", "radii": [0.0, 0.5, 1.0], "values": [1.0, float("nan"), 1.0]})
    code = main(["sinogram", "--body", DISK, "--function", function, "--dirs", "8", "--offsets", "16",
                 "--out", str(tmp_path / "nan.csv"), "--threads", "2"])
    assert code == 3


def test_oracle_table_at_the_support_boundary(capsys):
    assert main(["verify-oracle", "--distances", "0.5", "1.0"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 1 + 2 * 4
    rows = [[float(x) for x in line.split(",")] for line in lines[1:]]
    tangent = [row for row in rows if row[2] == 1.0]
    assert len(tangent) == 4
    assert all(row[4] == 0.0 and row[5] == 0.0 for row in tangent)


def test_xray_sinogram_in_the_plane(tmp_path):
    radon_out, xray_out = tmp_path / "radon.csv", tmp_path / "xray.csv"
    for kind, out in (("radon", radon_out), ("xray", xray_out)):
        assert main(["sinogram", "--body", DISK, "--function", "gamma:1", "--dirs", "8", "--offsets", "16",
                     "--out", str(out), "--threads", "1", "--transform", kind]) == 0
    radon_lines, xray_lines = radon_out.read_text().splitlines(), xray_out.read_text().splitlines()
    assert xray_lines[0].startswith("# transform=xray dimension=2")
    assert xray_lines[1:] == radon_lines[1:]
    assert read_sinogram(xray_out).transform == "xray"


def test_xray_sinogram_in_space_exits_two(tmp_path):
    assert main(["sinogram", "--body", BALL3, "--function", "gamma:1", "--dirs", "8", "--offsets", "16",
                 "--out", str(tmp_path / "x.csv"), "--transform", "xray"]) == 2
