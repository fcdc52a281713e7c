import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from twistdeform import __version__
from twistdeform.cli import ConfigError, parse_combination, parse_range, parse_twist, run
from twistdeform.exterior import Multivector, decomposable_twist
from twistdeform.lie import build_su


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    text = out.getvalue()
    return code, (json.loads(text) if text else None), text


def test_rmatrix_example():
    code, rep, _ = call("rmatrix", "--algebra", "su3", "--twist", "Y23^(2Z1-Z2):0.5")
    assert code == 0
    assert rep["result"]["is_r_matrix"] and rep["result"]["square_zero"]
    assert rep["version"] == __version__ and rep["tolerance"] == "exact"
    assert rep["config"]["twist"] == "Y23^(2Z1-Z2):0.5"


def test_rmatrix_false_exit_one():
    code, rep, _ = call("rmatrix", "--algebra", "su3", "--twist", "X12^X13")
    assert code == 1 and not rep["result"]["is_r_matrix"]


def test_admissible_example():
    code, rep, _ = call("admissible", "--algebra", "su2", "--twist", "l12=0.9", "--image", "sphere:0.5", "--samples", "10000")
    assert code == 0 and rep["verdict"]
    assert rep["result"]["n_samples"] == 10014
    assert abs(rep["result"]["min_abs"] - 0.01) < 1e-9
    code, rep, _ = call("admissible", "--twist", "l12=1.1")
    assert code == 1 and not rep["verdict"]


def test_admissible_moment_image(tmp_path):
    code, rep, _ = call("admissible", "--algebra", "su3", "--twist", "Y23^(2Z1-Z2):0.3", "--image", "moment:3")
    assert code == 0 and rep["result"]["n_samples"] == 81
    pts = tmp_path / "pts.csv"
    pts.write_text("0,0,0.5\n0.5,0,0\n")
    code, rep, _ = call("admissible", "--twist", "l12=0.5", "--image", str(pts))
    assert code == 0 and rep["result"]["n_samples"] == 2


def test_volume_example():
    code, rep, _ = call("volume", "--lambda", "0")
    assert code == 0
    assert abs(rep["result"]["numeric_volume"] - 3.141592653589793) < 1e-12
    assert rep["result"]["rel_error"] < 1e-8


def test_volume_pole_is_config_error(capsys):
    code, rep, _ = call("volume", "--lambda", "2")
    assert code == 2 and rep is None
    diag = json.loads(capsys.readouterr().err)
    assert diag["error"]["field"] == "lambda"


def test_grassmann_and_sweeps():
    code, rep, _ = call("grassmann")
    assert code == 0 and len(rep["result"]["instances"]) == 6
    code, rep, _ = call("sweep", "volume", "--range=-0.9:0.9:0.3")
    rows = rep["result"]["rows"]
    assert code == 0 and len(rows) == 7 and all(r["rel_error"] < 1e-6 for r in rows)
    code, rep, _ = call("sweep", "admissible", "--range", "0.5,0.9,1.1", "--samples", "2000")
    assert [r["verdict"] for r in rep["result"]["rows"]] == [True, True, False]
    code, rep, _ = call("sweep", "grassmann", "--max-n", "4")
    assert code == 0 and all(i["quotient_vanishes"] for i in rep["result"]["instances"])


def test_deform_command(tmp_path, monkeypatch):
    monkeypatch.setenv("TWISTDEFORM_OUTPUT_DIR", str(tmp_path))
    code, rep, _ = call("deform", "--algebra", "su3", "--twist", "Y23^(2Z1-Z2):0.3", "--random", "20", "--csv", "f.csv")
    assert code == 0 and rep["result"]["closed"] and rep["result"]["nondegeneracy"]["nondegenerate"]
    assert (tmp_path / "f.csv").read_text().startswith("x1,y1,x2,y2,m12")


def test_output_file_and_env(tmp_path, monkeypatch):
    monkeypatch.setenv("TWISTDEFORM_OUTPUT_DIR", str(tmp_path))
    code, rep, text = call("-o", "r.json", "validate-algebra", "--algebra", "su4")
    assert code == 0 and text == ""
    saved = json.loads((tmp_path / "r.json").read_text())
    assert saved["result"]["ok"] and saved["result"]["dim"] == 15


def test_determinism():
    argv = ("admissible", "--twist", "l12=0.3 l23=-0.4", "--samples", "500")
    assert call(*argv)[2] == call(*argv)[2]


@pytest.mark.parametrize(
    "argv,field",
    [
        (("rmatrix", "--algebra", "su3", "--twist", "Q1^X12"), "twist"),
        (("rmatrix", "--algebra", "sux", "--twist", "l12=1"), "algebra"),
        (("admissible", "--twist", "l12=1", "--tol", "0"), "tol"),
        (("admissible", "--twist", "l12=1", "--samples", "0"), "samples"),
        (("admissible", "--algebra", "su3", "--twist", "0"), "image"),
        (("sweep", "volume", "--range", "1:0:0.1"), "range"),
        (("rmatrix",), "arguments"),
        (("frobnicate",), "arguments"),
    ],
)
def test_malformed_config(argv, field, capsys):
    code, _, _ = call(*argv)
    assert code == 2
    assert json.loads(capsys.readouterr().err)["error"]["field"] == field


def test_parse_twist_forms():
    g = build_su(3)
    t = parse_twist(g, "l12=1/2; l1_3=2")
    assert t.terms == {(0, 1): Fraction(1, 4), (0, 2): Fraction(1)}
    Y23 = [1 if s == "Y23" else 0 for s in g.labels]
    assert parse_twist(g, "Y23^(2Z1-Z2):0.5") == decomposable_twist(g, Y23, [0] * 6 + [2, -1], Fraction(1, 2))
    assert parse_twist(g, "X12^Y12") == Multivector.basis(g, "X12", "Y12", coeff=Fraction(1, 2))
    assert parse_twist(g, "canonical").coefficient(0, 3) == Fraction(1, 12)
    assert not parse_twist(g, "0")
    with pytest.raises(ConfigError):
        parse_twist(g, "l11=1")
    with pytest.raises(ConfigError):
        parse_twist(g, "X12 Y12")


def test_parse_combination_and_range():
    g = build_su(2)
    assert parse_combination(g, "(X12 + 1/2 Y12 - 3*Z1)") == (1, Fraction(1, 2), -3)
    with pytest.raises(ConfigError):
        parse_combination(g, "X12 Y12")
    assert parse_range("-0.9:0.9:0.3") == pytest.approx([-0.9, -0.6, -0.3, 0, 0.3, 0.6, 0.9])
    assert parse_range("0.5,0.9,1.1") == [0.5, 0.9, 1.1]
    with pytest.raises(ConfigError):
        parse_range("")


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "twistdeform.cli", "volume", "--lambda", "0.5"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["rel_error"] < 1e-6
