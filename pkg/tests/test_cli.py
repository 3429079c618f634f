import csv
import json
import math
import subprocess
import sys

import pytest

from polypart.cli import EXIT_CONFIG, EXIT_INPUT, EXIT_OK, EXIT_VERIFY, main
from polypart.generate import rect


def _poly(tmp_path, ring, name="poly.json"):
    p = tmp_path / name
    p.write_text(json.dumps({"polygon": [list(v) for v in ring]}))
    return str(p)


@pytest.fixture
def square(tmp_path):
    return _poly(tmp_path, rect(1, 1))


def test_partition_unit_square_aligned(tmp_path, square):
    out, svg = tmp_path / "out.json", tmp_path / "out.svg"
    code = main(["partition", square, "--type", "aligned-square", "-o", str(out), "--svg", str(svg)])
    assert code == EXIT_OK
    d = json.loads(out.read_text())
    assert d["kind"] == "aligned-square"
    assert len(d["pieces"]) == 1
    assert d["pieces"][0]["measured_size"] <= 1.0 + 1e-6
    assert d["report"]["passed"] is True
    assert svg.read_text().count("<path") == 1


def test_partition_area_mode(tmp_path, square):
    out = tmp_path / "out.json"
    assert main(["partition", square, "--type", "area", "--areas", "0.5,0.5", "-o", str(out)]) == EXIT_OK
    d = json.loads(out.read_text())
    areas = [abs(p["measured_size"]) for p in d["pieces"]]
    assert len(areas) == 2 and all(math.isclose(a, 0.5, rel_tol=1e-9) for a in areas)


def test_bowtie_is_input_error(tmp_path, capsys):
    bow = _poly(tmp_path, [(0, 0), (1, 1), (1, 0), (0, 1)])
    assert main(["partition", bow, "--type", "disk"]) == EXIT_INPUT
    assert "(0.5, 0.5)" in capsys.readouterr().err


def test_malformed_json_is_input_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["partition", str(bad), "--type", "disk"]) == EXIT_INPUT
    bad.write_text(json.dumps({"polygon": [[0, 0], [1, 0]]}))
    assert main(["partition", str(bad), "--type", "disk"]) == EXIT_INPUT


def test_clockwise_input_warns(tmp_path, capsys):
    cw = _poly(tmp_path, rect(1, 1)[::-1])
    assert main(["partition", cw, "--type", "disk", "-o", str(tmp_path / "o.json")]) == EXIT_OK
    assert "clockwise" in capsys.readouterr().err


@pytest.mark.parametrize("args", [
    ["--type", "geodesic-diameter", "--delta", "0.5"],
    ["--type", "disk", "--gamma", "0.1"],
    ["--type", "area", "--areas", "0.5,0.4"],
    ["--type", "area", "--areas", "a,b"],
    ["--type", "area"],
    ["--type", "disk", "--areas", "1"],
    ["--type", "hexagon"],
    ["--type", "disk", "--bound", "0"],
])
def test_config_errors(square, args):
    assert main(["partition", square] + args) == EXIT_CONFIG


def test_estimate(tmp_path, capsys):
    poly = _poly(tmp_path, rect(2, 1))
    assert main(["estimate", poly, "--type", "aligned-square"]) == EXIT_OK
    d = json.loads(capsys.readouterr().out)
    assert d["lower_bound"] == 2
    assert d["estimate"] >= d["lower_bound"]
    assert d["method"] == "multiplier"
    assert main(["estimate", poly, "--type", "area"]) == EXIT_CONFIG


def test_verify_round_trip_and_tamper(tmp_path):
    poly = _poly(tmp_path, rect(3, 2))
    out = tmp_path / "part.json"
    assert main(["partition", poly, "--type", "disk", "-o", str(out)]) == EXIT_OK
    rep = tmp_path / "rep.json"
    assert main(["verify", str(out), "-o", str(rep)]) == EXIT_OK
    assert json.loads(rep.read_text())["passed"] is True
    d = json.loads(out.read_text())
    d["pieces"].pop()
    out.write_text(json.dumps(d))
    assert main(["verify", str(out), "-o", str(rep)]) == EXIT_VERIFY
    assert json.loads(rep.read_text())["covered_area_residual"] > 0


def test_generate_and_render(tmp_path):
    poly = tmp_path / "g.json"
    assert main(["generate", "--family", "star", "-n", "12", "--area", "5", "-o", str(poly)]) == EXIT_OK
    ring = json.loads(poly.read_text())["polygon"]
    assert len(ring) == 12
    part = tmp_path / "p.json"
    assert main(["partition", str(poly), "--type", "straight-diameter", "-o", str(part)]) == EXIT_OK
    n = len(json.loads(part.read_text())["pieces"])
    svg = tmp_path / "p.svg"
    assert main(["render", str(part), "-o", str(svg)]) == EXIT_OK
    assert svg.read_text().count("<path") == n
    assert main(["generate", "-n", "2"]) == EXIT_CONFIG


def test_report_writes_csv_and_pngs(tmp_path):
    a = _poly(tmp_path, rect(2, 1), "a.json")
    b = _poly(tmp_path, [(0, 0), (3, 0), (3, 1), (1, 1), (1, 2), (0, 2)], "b.json")
    out = tmp_path / "rep"
    assert main(["report", a, b, "--types", "aligned-square,disk", "--out-dir", str(out)]) == EXIT_OK
    rows = list(csv.DictReader(open(out / "report.csv")))
    assert len(rows) == 4
    assert all(r["passed"] == "True" for r in rows)
    assert all(int(r["estimate"]) >= int(r["lower_bound"]) for r in rows)
    pngs = sorted(p.name for p in out.glob("*.png"))
    assert "counts.png" in pngs and len(pngs) == 5
    assert (out / "a_disk.png").read_bytes()[:4] == b"\x89PNG"


def test_module_entry_point(tmp_path, square):
    r = subprocess.run([sys.executable, "-m", "polypart", "partition", square, "--type", "rotated-square"],
                       capture_output=True, text=True, timeout=120)
    assert r.returncode == 0
    assert len(json.loads(r.stdout)["pieces"]) == 1


def test_input_snapped_unless_disabled(tmp_path):
    poly = _poly(tmp_path, [(0.0, 0.0), (0.1, 0.0), (0.1, 0.1), (0.0, 0.1)])
    out = tmp_path / "o.json"
    assert main(["partition", poly, "--type", "disk", "-o", str(out)]) == EXIT_OK
    x = json.loads(out.read_text())["polygon"][1][0]
    assert x != 0.1 and x * 2**30 == round(0.1 * 2**30)
    assert main(["partition", poly, "--type", "disk", "--no-snap", "-o", str(out)]) == EXIT_OK
    assert json.loads(out.read_text())["polygon"][1][0] == 0.1
