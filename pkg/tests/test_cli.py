import csv
import io
import json
import subprocess
import sys

import jsonschema
import pytest

from catalan_moments import report_schema
from catalan_moments.cli import run

SCHEMA = report_schema()


def call(capsys, *argv):
    code = run(list(argv))
    return code, capsys.readouterr().out


def call_json(capsys, *argv):
    code, out = call(capsys, *argv)
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMA)
    return code, doc


def test_gen_csv_example(capsys):
    code, out = call(capsys, "gen", "--family", "catalan", "--n", "5", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["n", "numerator", "denominator"]
    assert rows[1:] == [["0", "1", "1"], ["1", "1", "1"], ["2", "2", "1"],
                        ["3", "5", "1"], ["4", "14", "1"], ["5", "42", "1"]]


def test_gen_json_defaults(capsys):
    code, doc = call_json(capsys, "gen", "--family", "fuss-catalan", "--k", "3")
    assert code == 0 and doc["N"] == 32 and doc["precision_bits"] == 256
    assert len(doc["rows"]) == 33


def test_gen_real_power(capsys):
    code, doc = call_json(capsys, "gen", "--family", "factorial", "--n", "4", "--c", "1/2")
    assert code == 0 and set(doc["rows"][2]) == {"n", "decimal", "errbound"}


def test_hankel_example(capsys):
    code, doc = call_json(capsys, "hankel", "--family", "catalan", "--order", "10")
    assert code == 0
    for cert in doc["certificates"]:
        assert cert["verdict"] == "CertifiedNonnegative"
        assert all(m == {"numerator": "1", "denominator": "1"} for m in cert["minors"])


def test_hankel_inconclusive_exits_one(capsys):
    code, doc = call_json(capsys, "hankel", "--family", "catalan", "--order", "10", "--c", "0.1",
                          "--precision", "64", "--pmax", "64")
    assert code == 1
    assert doc["error"]["type"] == "Failure"
    assert any(c["verdict"] == "Inconclusive" for c in doc["certificates"])


def test_hankel_power(capsys):
    code, doc = call_json(capsys, "hankel", "--family", "double-factorial", "--order", "6", "--c", "0.75")
    assert code == 0 and all("value" in m for m in doc["certificates"][0]["minors"])


def test_probe(capsys):
    code, doc = call_json(capsys, "probe", "--family", "factorial", "--order", "5", "--c-grid", "1.5,0.1")
    assert code == 0 and doc["supported"]
    assert [r["c"] for r in doc["rows"]] == ["1/10", "1/10", "3/2", "3/2"]


def test_mellin(capsys):
    code, doc = call_json(capsys, "mellin", "--family", "catalan", "--s-grid", "0,1,2", "--n", "10")
    assert code == 0
    assert [r["s"] for r in doc["rows"]] == ["0", "1", "2"]
    assert float(doc["consistency_residual"]) < 1e-50


def test_mellin_out_of_range(capsys):
    code, doc = call_json(capsys, "mellin", "--family", "factorial", "--c", "3")
    assert code == 1 and doc["error"]["type"] == "MellinRangeError"
    code, doc = call_json(capsys, "mellin", "--family", "factorial", "--c", "3", "--uncertified", "--n", "5")
    assert code == 0


def test_density_with_plot_data_and_figure(capsys, tmp_path):
    grid = tmp_path / "grid.csv"
    fig = tmp_path / "d.png"
    code, doc = call_json(capsys, "density", "--model", "fuss-catalan-2", "--n", "4",
                          "--plot-data", str(grid), "--figure", str(fig))
    assert code == 0
    assert all(float(r["residual"]) < 1e-12 for r in doc["rows"])
    lines = grid.read_text().splitlines()
    assert lines[0] == "x,density" and len(lines) == 201
    assert fig.read_bytes()[:4] == b"\x89PNG"


def test_density_inline_grid(capsys):
    code, doc = call_json(capsys, "density", "--model", "catalan", "--n", "2", "--grid-points", "5")
    assert code == 0 and len(doc["grid"]) == 5


def test_carleman(capsys, tmp_path):
    fig = tmp_path / "c.png"
    code, doc = call_json(capsys, "carleman", "--family", "factorial", "--c", "3", "--figure", str(fig))
    assert code == 0
    assert doc["verdict"] == "ConvergesLikely" and doc["theorem_verdict"] == "S-indet" and doc["agrees"]
    assert fig.exists()


def test_bernstein(capsys):
    code, doc = call_json(capsys, "bernstein", "--name", "fuss-binomial", "--k", "4", "--n", "50")
    assert code == 0 and doc["product_check"] and len(doc["h_functions"]) == 4


def test_classify_example(capsys):
    code, doc = call_json(capsys, "classify", "--family", "double-factorial", "--c", "2.5")
    assert code == 0 and doc["verdict"] == "S-indet" and doc["citation"]


def test_domain_errors_are_structured(capsys):
    code, doc = call_json(capsys, "gen", "--family", "fuss-catalan")
    assert code == 1 and doc["error"]["type"] == "DomainError"


@pytest.mark.parametrize("argv", [
    ["gen", "--family", "nope"],
    ["gen"],
    ["classify", "--family", "catalan", "--c", "-1"],
    ["mellin", "--family", "catalan", "--s-grid", "3:1:1"],
    ["gen", "--family", "catalan", "--precision", "10"],
    ["frobnicate"],
])
def test_parse_errors_exit_two(argv):
    with pytest.raises(SystemExit) as exc:
        run(argv)
    assert exc.value.code == 2


def test_output_file_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert run(["probe", "--family", "catalan", "--order", "4", "--c-grid", "0.5", "--output", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()
    jsonschema.validate(json.loads(a.read_text()), SCHEMA)


def test_precision_environment_override(capsys, monkeypatch):
    monkeypatch.setenv("CATALAN_MOMENTS_PRECISION", "80")
    code, doc = call_json(capsys, "gen", "--family", "gamma-power", "--a", "1/2", "--n", "2")
    assert doc["precision_bits"] == 80
    code, doc = call_json(capsys, "gen", "--family", "catalan", "--n", "2", "--precision", "300")
    assert doc["precision_bits"] == 300


def test_console_script_help():
    out = subprocess.run([sys.executable, "-m", "catalan_moments.cli", "--help"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "verify-all" in out.stdout


def test_verify_all_subset(capsys):
    code, doc = call_json(capsys, "verify-all", "--check", "catalan-hankel-identity",
                          "--check", "antu-identity")
    assert code == 0 and [c["name"] for c in doc["checks"]] == ["catalan-hankel-identity", "antu-identity"]
