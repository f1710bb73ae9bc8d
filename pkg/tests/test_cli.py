import json
import subprocess
import sys

import numpy as np
import pytest

from lanczoslab import cli, orthopoly
from lanczoslab.spectra import Spectrum


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_predict_uniform_m2(capsys):
    code, out, _ = run(capsys, "predict", "--density", "uniform", "--a", "0", "--b", "1", "--m", "2")
    assert code == 0
    m, pred, _ = out.splitlines()[1].split(",")
    assert m == "2" and float(pred) == pytest.approx(0.2113, abs=1e-4)


def test_predict_range_and_spectrum_file(capsys, tmp_path):
    p = tmp_path / "s.txt"
    p.write_text("1 1\n0.5 1\n0 1\n")
    code, out, _ = run(capsys, "predict", "--spectrum-file", str(p), "--m-min", "1", "--m-max", "3")
    rows = out.splitlines()[1:]
    assert code == 0 and len(rows) == 3
    assert float(rows[-1].split(",")[1]) == pytest.approx(0.0, abs=1e-14)


def test_spectrum_stdout_and_file(capsys, tmp_path, monkeypatch):
    code, out, _ = run(capsys, "spectrum", "--kind", "legendre-hard", "--n", "101", "--m", "2")
    assert code == 0
    assert Spectrum.from_text(out).mults.tolist() == [1, 33, 33, 34]
    monkeypatch.setenv("LANCZOSLAB_OUTDIR", str(tmp_path / "out"))
    code, _, _ = run(capsys, "spectrum", "--kind", "unif", "--n", "5", "--out", "u.txt")
    assert code == 0
    assert Spectrum.load(tmp_path / "out" / "u.txt").values.tolist() == [1.0, 0.75, 0.5, 0.25, 0.0]


def test_bounds_json(capsys):
    code, out, _ = run(capsys, "bounds", "--name", "main-upper", "--n", "100", "--m", "10", "--p", "1")
    d = json.loads(out)
    assert code == 0 and d["value"] == pytest.approx(0.413108, abs=1e-6)
    assert all(h["met"] for h in d["hypotheses"])
    code, out, _ = run(capsys, "bounds", "--name", "main-lower", "--n", "1000000", "--m", "20")
    assert [r["name"] for r in json.loads(out)] == ["lower-msquared", "lower-log"]


def test_bounds_cluster_hypothesis_flag(capsys):
    code, out, _ = run(capsys, "bounds", "--name", "clustered", "--m", "11", "--alpha", "2",
                       "--kind", "lap", "--spectrum-n", "100000")
    hyps = {h["name"]: h["met"] for h in json.loads(out)["hypotheses"]}
    assert code == 0 and hyps["cluster-count"] is True


def test_run_writes_csv_json_svg(capsys, tmp_path):
    code, out, _ = run(capsys, "run", "--kind", "unif", "--n", "500", "--m-max", "12", "--trials", "4",
                       "--csv", str(tmp_path / "r.csv"), "--json", str(tmp_path / "r.json"),
                       "--svg", str(tmp_path / "r.svg"))
    assert code == 0 and out == ""
    csv = (tmp_path / "r.csv").read_text().splitlines()
    assert csv[0].startswith("m,mean,median") and len(csv) == 13
    man = json.loads((tmp_path / "r.json").read_text())
    assert man["config"]["n"] == 500 and "wall_clock_seconds" in man
    for name in ("r_mean.svg", "r_box.svg"):
        assert (tmp_path / name).read_text().lstrip().startswith("<?xml")


def test_run_reproducible_from_manifest(capsys, tmp_path):
    args = ["run", "--kind", "lap", "--n", "300", "--m-max", "8", "--trials", "3", "--seed", "9"]
    code, first, _ = run(capsys, *args, "--json", str(tmp_path / "m.json"))
    code2, second, _ = run(capsys, "run", "--config", str(tmp_path / "m.json"))
    assert code == code2 == 0 and first == second
    # flags override the file
    code3, third, _ = run(capsys, "run", "--config", str(tmp_path / "m.json"), "--seed", "10")
    assert third != first


def test_run_flat_config(capsys, tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"kind": "unif", "n": 200, "m-max": 5, "trials": 2}))
    code, out, _ = run(capsys, "run", "--config", str(p))
    assert code == 0 and len(out.splitlines()) == 6
    p.write_text(json.dumps({"kind": "unif", "colour": 1}))
    code, _, err = run(capsys, "run", "--config", str(p))
    assert code == 2 and "colour" in err


@pytest.mark.parametrize("argv", [
    ["run", "--n", "5"],
    ["run", "--kind", "unif", "--n", "10", "--m-max", "20"],
    ["predict"],
    ["bounds", "--name", "kw-expected", "--n", "100"],
    ["spectrum", "--kind", "lap"],
    ["frobnicate"],
    ["run", "--kind", "unif", "--n", "10", "--path", "gpu"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_io_error_exit_3(capsys, tmp_path):
    code, _, err = run(capsys, "spectrum", "--kind", "file", "--spectrum-file", str(tmp_path / "missing.txt"))
    assert code == 3 and "I/O" in err


def test_verify_quick_passes(capsys):
    code, out, _ = run(capsys, "verify", "--level", "quick")
    assert code == 0
    assert out.count("PASS") == 8 and "FAIL" not in out


def test_verify_detects_corrupted_gauss_weights(capsys, monkeypatch):
    real = orthopoly.gauss_legendre

    def corrupted(k):
        rule = real(k)
        return orthopoly.QuadratureRule(rule.nodes, rule.weights * (1 + 1e-6))

    monkeypatch.setattr(orthopoly, "gauss_legendre", corrupted)
    code, out, _ = run(capsys, "verify")
    assert code == 1
    failed = [line for line in out.splitlines() if line.startswith("FAIL")]
    assert any("gauss-legendre-exactness" in line for line in failed)


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lanczoslab.cli", "predict", "--density", "semicircle", "--m", "3"],
                          capture_output=True, text=True, check=True)
    assert float(proc.stdout.splitlines()[1].split(",")[1]) == pytest.approx((1 - np.sqrt(0.5)) / 2, abs=1e-10)
