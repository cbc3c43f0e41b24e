import json

import numpy as np
import pytest

from myller.cli import main
from myller.io import read_curve_csv, write_curve_csv
from myller.presets import default_grid, preset_spec
from myller.synthesis import synthesize


def run(*argv):
    return main(list(argv))


def parse_report(path):
    out = {}
    for line in path.read_text().splitlines():
        key, _, value = line.partition(" = ")
        out[key] = value
    return out


@pytest.fixture(scope="module")
def slant_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("curves") / "slant.csv"
    assert run("synthesize", "--preset", "slant", "--out", str(path)) == 0
    return path


# ---------------------------------------------------------------------------
# synthesize
# ---------------------------------------------------------------------------

def test_synthesize_writes_curve_and_sidecar(slant_csv):
    curve = read_curve_csv(slant_csv)
    assert curve.grid.n == 4001
    sidecar = parse_report(slant_csv.parent / (slant_csv.name + ".report.txt"))
    assert float(sidecar["roundtrip.max_rel_err"]) <= 1e-5


def test_synthesize_from_spec_file(tmp_path):
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps({
        "grid": {"s0": 0.0, "h": 1e-3, "n": 1001},
        "preset": {"name": "circular", "params": {"K1": 0.5, "K2": 0.5}},
    }))
    out = tmp_path / "circ.csv"
    assert run("synthesize", "--spec", str(spec_path), "--out", str(out)) == 0
    assert read_curve_csv(out).grid.n == 1001


def test_synthesize_sampled_array_spec(tmp_path):
    n = 101
    s = 1e-2 * np.arange(n)
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps({
        "grid": {"s0": 0.0, "h": 1e-2, "n": n},
        "K1": [1.0] * n, "K2": list(s),
        "a1": [1.0] * n, "a2": [0.0] * n, "a3": [0.0] * n,
    }))
    out = tmp_path / "c.csv"
    assert run("synthesize", "--spec", str(spec_path), "--out", str(out)) == 0


def test_synthesize_rejects_bad_tangent_norm(tmp_path, capsys):
    n = 11
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps({
        "grid": {"s0": 0.0, "h": 1e-2, "n": n},
        "K1": [1.0] * n, "K2": [0.0] * n,
        "a1": [0.9] * n, "a2": [0.3] * n, "a3": [0.0] * n,
    }))
    code = run("synthesize", "--spec", str(spec_path), "--out", str(tmp_path / "x.csv"))
    assert code == 1
    assert "a1" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# analyze / classify / residuals
# ---------------------------------------------------------------------------

def test_analyze_report_values(slant_csv, tmp_path):
    out = tmp_path / "report.txt"
    assert run("analyze", str(slant_csv), "--out", str(out)) == 0
    report = parse_report(out)
    assert abs(float(report["p.mean"]) - 1.0) <= 1e-4
    assert abs(float(report["q.mean"]) - 0.25) <= 1e-4
    assert float(report["moving_equations.max_residual"]) <= 1e-7
    assert float(report["unit_speed.max_deviation"]) <= 1e-8


def test_analyze_circular_means(tmp_path):
    path = tmp_path / "helix.csv"
    assert run("synthesize", "--preset", "circular", "--out", str(path)) == 0
    out = tmp_path / "report.txt"
    assert run("analyze", str(path), "--out", str(out)) == 0
    report = parse_report(out)
    assert abs(float(report["K1.mean"]) - 0.5) <= 1e-6
    assert abs(float(report["K2.mean"]) - 0.5) <= 1e-6


def test_analyze_plot_exports(slant_csv, tmp_path):
    out = tmp_path / "report.txt"
    assert run("analyze", str(slant_csv), "--out", str(out), "--plot") == 0
    plot = tmp_path / "report_K1.csv"
    assert plot.exists()
    lines = plot.read_text().splitlines()
    assert lines[0] == "s,value"
    assert len(lines) == 4002


def test_classify_report(slant_csv, tmp_path):
    out = tmp_path / "report.txt"
    assert run("classify", str(slant_csv), "--out", str(out)) == 0
    report = parse_report(out)
    assert report["slant_helix.verdict"] == "true"
    assert report["darboux_helix.verdict"] == "true"
    assert report["xi1_helix.verdict"] == "false"
    assert abs(float(report["slant_helix.sigma.mean"]) - 0.25) <= 1e-4


def test_classify_circular_degenerate(tmp_path):
    path = tmp_path / "helix.csv"
    assert run("synthesize", "--preset", "circular", "--out", str(path)) == 0
    out = tmp_path / "report.txt"
    assert run("classify", str(path), "--out", str(out)) == 0
    report = parse_report(out)
    assert report["xi1_helix.verdict"] == "true"
    assert report["darboux_helix.degenerate_general_helix"] == "true"


def test_classify_nonhelix_all_false(tmp_path):
    path = tmp_path / "nh.csv"
    assert run("synthesize", "--preset", "nonhelix", "--out", str(path)) == 0
    out = tmp_path / "report.txt"
    assert run("classify", str(path), "--tol", "1e-3", "--out", str(out)) == 0
    report = parse_report(out)
    assert report["xi1_helix.verdict"] == "false"
    assert report["slant_helix.verdict"] == "false"
    assert report["darboux_helix.verdict"] == "false"


def test_residuals_report(slant_csv, tmp_path):
    out = tmp_path / "report.txt"
    assert run("residuals", str(slant_csv), "--out", str(out)) == 0
    report = parse_report(out)
    assert report["kinds.Y_FULL.status"] == "degenerate"
    assert report["agreement.all"] == "true"


def test_residuals_kind_subset_fd(slant_csv, tmp_path):
    out = tmp_path / "report.txt"
    assert run("residuals", str(slant_csv), "--kinds", "XI1_FRENET,XI3_REDUCED",
               "--mode", "fd", "--out", str(out)) == 0
    report = parse_report(out)
    assert "kinds.XI1_FRENET.normalized" in report
    assert "kinds.XI2_ALT.status" not in report


def test_residuals_unknown_kind(slant_csv, capsys):
    assert run("residuals", str(slant_csv), "--kinds", "NOPE") == 1
    assert "unknown equation kind" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# error handling and exit codes
# ---------------------------------------------------------------------------

def test_missing_file_is_parse_failure(capsys):
    assert run("analyze", "/nonexistent/path.csv") == 2


def test_too_few_rows(tmp_path, capsys):
    path = tmp_path / "short.csv"
    path.write_text("s,rx,ry,rz,xix,xiy,xiz\n"
                    + "".join(f"{i * 0.1},0,0,0,1,0,0\n" for i in range(4)))
    assert run("analyze", str(path)) == 1
    assert "too few samples" in capsys.readouterr().err


def test_shuffled_s_column(tmp_path, capsys):
    grid = default_grid(h=1e-2, length=0.5)
    curve = synthesize(preset_spec("circular", grid))
    path = tmp_path / "bad.csv"
    write_curve_csv(path, curve)
    lines = path.read_text().splitlines()
    lines[5], lines[9] = lines[9], lines[5]
    path.write_text("\n".join(lines) + "\n")
    assert run("analyze", str(path)) == 1
    err = capsys.readouterr().err
    assert "row" in err and "non-uniform" in err.lower()


def test_bad_header(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("s,x,y,z\n0,0,0,0\n")
    assert run("analyze", str(path)) == 2
    assert "header" in capsys.readouterr().err


def test_non_numeric_field(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("s,rx,ry,rz,xix,xiy,xiz\n"
                    + "".join(f"{i * 0.1},0,0,0,1,0,0\n" for i in range(3))
                    + "0.3,zero,0,0,1,0,0\n"
                    + "".join(f"{0.4 + i * 0.1},0,0,0,1,0,0\n" for i in range(2)))
    assert run("analyze", str(path)) == 2
    assert ":5:" in capsys.readouterr().err


def test_bad_json_spec(tmp_path, capsys):
    path = tmp_path / "spec.json"
    path.write_text("{not json")
    assert run("synthesize", "--spec", str(path), "--out", str(tmp_path / "x.csv")) == 2


# ---------------------------------------------------------------------------
# determinism and formatting
# ---------------------------------------------------------------------------

def test_reports_are_byte_identical(slant_csv, tmp_path):
    pairs = []
    for i in (1, 2):
        a = tmp_path / f"analyze{i}.txt"
        c = tmp_path / f"classify{i}.txt"
        r = tmp_path / f"residuals{i}.txt"
        assert run("analyze", str(slant_csv), "--out", str(a)) == 0
        assert run("classify", str(slant_csv), "--out", str(c)) == 0
        assert run("residuals", str(slant_csv), "--out", str(r)) == 0
        pairs.append((a.read_bytes(), c.read_bytes(), r.read_bytes()))
    assert pairs[0] == pairs[1]


def test_synthesize_deterministic(tmp_path):
    outs = []
    for i in (1, 2):
        path = tmp_path / f"c{i}.csv"
        assert run("synthesize", "--preset", "slant", "--out", str(path)) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_float_format_env_override(slant_csv, tmp_path, monkeypatch):
    out17 = tmp_path / "r17.txt"
    assert run("classify", str(slant_csv), "--out", str(out17)) == 0
    monkeypatch.setenv("MYLLER_FLOAT_FORMAT", "6")
    out6 = tmp_path / "r6.txt"
    assert run("classify", str(slant_csv), "--out", str(out6)) == 0
    v17 = parse_report(out17)["slant_helix.sigma.mean"]
    v6 = parse_report(out6)["slant_helix.sigma.mean"]
    assert v6 == "0.25"
    assert len(v17) > len(v6)
