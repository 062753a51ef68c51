import csv
import io
import json
import math
import subprocess
import sys

import pytest

from hankelpot.cli import main, parse_grid


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_kernel_table_is_bracketed(capsys):
    code, out, _ = run(capsys, "kernel", "--setting", "modified", "--kind", "riesz", "--alpha", "0", "--sigma", "0.25",
                       "--grid", "1e-2:1e2:20", "--format", "csv")
    assert code == 0
    table = rows(out)
    assert len(table) == 400
    assert list(table[0]) == ["x", "y", "kernel", "envelope_shape", "exp_arg", "ratio"]
    ratios = [float(r["ratio"]) for r in table if r["x"] != r["y"]]
    assert all(r > 0 for r in ratios) and max(ratios) / min(ratios) < 10


def test_kernel_json_format(capsys):
    code, out, _ = run(capsys, "kernel", "--grid", "1:2:2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert len(data) == 4 and set(data[0]) >= {"x", "y", "kernel", "ratio"}


def test_dunkl_kernel_below_admissible_order(capsys):
    code, _, err = run(capsys, "kernel", "--setting", "dunkl", "--kind", "riesz", "--alpha", "-0.8", "--sigma", "0.1",
                       "--grid", "1:2:2")
    assert code == 2 and "alpha >= -1/2" in err


def test_infinite_riesz_kernel(capsys):
    code, out, _ = run(capsys, "kernel", "--alpha", "0.2", "--sigma", "1.5", "--grid", "1:2:3", "--format", "csv")
    assert code == 0
    assert {r["kernel"] for r in rows(out)} == {"inf"}
    code, _, err = run(capsys, "kernel", "--alpha", "0.2", "--sigma", "1.5", "--grid", "1:2:3", "--require-finite")
    assert code == 2 and "sigma < alpha + 1" in err


def test_dunkl_kernel_has_both_signs(capsys):
    code, out, _ = run(capsys, "kernel", "--setting", "dunkl", "--alpha", "0.5", "--sigma", "0.25", "--grid",
                       "0.5:2:2", "--format", "csv")
    assert code == 0
    table = rows(out)
    assert len(table) == 8
    opposite = [r for r in table if float(r["y"]) < 0]
    assert len(opposite) == 4
    assert all(0 < float(r["kernel"]) < math.inf and r["sign"] == "1" for r in opposite)


def test_heat_kernel_needs_time(capsys):
    assert run(capsys, "kernel", "--kind", "heat", "--grid", "1:2:2")[0] == 2
    code, out, _ = run(capsys, "kernel", "--kind", "heat", "--t", "0.5", "--grid", "1:2:2", "--format", "csv")
    assert code == 0 and all(float(r["kernel"]) > 0 for r in rows(out))


@pytest.mark.parametrize("bad", ["1:2", "a:b:3", "2:1:3", "0:1:3", "1:2:1"])
def test_bad_grid(capsys, bad):
    with pytest.raises(ValueError):
        parse_grid(bad)
    assert run(capsys, "kernel", "--grid", bad)[0] == 2


def test_verify_single_estimate(capsys):
    code, out, _ = run(capsys, "verify", "--theorem", "bessel", "--alpha", "1", "--sigma", "0.75", "--region", "local")
    assert code == 0
    reports = json.loads(out)
    assert len(reports) == 1 and reports[0]["status"] == "PASS"
    assert reports[0]["region"] == "same-local"


def test_verify_dunkl_bessel_reports_fitted_constants(capsys):
    code, out, _ = run(capsys, "verify", "--theorem", "bessel-dunkl", "--alpha", "0.5", "--sigma", "0.75",
                       "--region", "opposite-global")
    assert code == 0
    (report,) = json.loads(out)
    assert report["status"] == "PASS"
    assert report["c_lower"] > 0 and report["c_upper"] > 0


def test_verify_dunkl_bessel_requires_positive_multiplicity(capsys):
    code, _, err = run(capsys, "verify", "--theorem", "bessel-dunkl", "--alpha", "-0.6", "--sigma", "0.5",
                       "--region", "opposite-global")
    assert code == 2 and "alpha > -1/2" in err


def test_verify_failure_exit_code(capsys, monkeypatch):
    from hankelpot import cli

    real = cli.ratio_verify

    def failing(*args, **kwargs):
        report = real(*args, **kwargs)
        report.passed = False
        return report

    monkeypatch.setattr(cli, "ratio_verify", failing)
    code, out, _ = run(capsys, "verify", "--theorem", "riesz", "--alpha", "0", "--sigma", "0.25", "--grid", "1e-1:1e1:6")
    assert code == 1 and json.loads(out)[0]["status"] == "FAIL"


def test_lplq_grid_table(capsys):
    code, out, _ = run(capsys, "lplq", "--setting", "modified", "--alpha", "0", "--sigma", "0.5", "--grid-pq", "8",
                       "--format", "csv")
    assert code == 0
    table = rows(out)
    assert len(table) == 64
    cell = {(r["p"], r["q"]): r for r in table}
    # 1/2 is not a multiple of 1/7, so no cell lies on the scaling line
    assert not any(r["bounded"] == "true" for r in table)
    assert cell[("1", "inf")]["failed_conditions"] == "b;e"
    assert cell[("7/4", "7/4")]["failed_conditions"] == "b"
    code, out, _ = run(capsys, "lplq", "--alpha", "0", "--sigma", "0.5", "--grid-pq", "9", "--format", "csv")
    cell = {(r["p"], r["q"]): r for r in rows(out)}
    assert cell[("2", "inf")]["failed_conditions"] == "d"
    assert cell[("4/3", "4")]["bounded"] == "true"
    assert cell[("1", "2")]["failed_conditions"] == "c"


def test_lplq_weighted_grid(capsys):
    code, out, _ = run(capsys, "lplq", "--alpha", "0", "--sigma", "0.5", "--grid-pq", "3", "--a", "1/2", "--b", "1/2",
                       "--format", "csv")
    cell = {(r["p"], r["q"]): r for r in rows(out)}
    assert code == 0 and cell[("2", "2")]["bounded"] == "true" and cell[("2", "2")]["a"] == "1/2"


def test_lplq_empirical_column(capsys):
    code, out, _ = run(capsys, "lplq", "--alpha", "0", "--sigma", "0.25", "--grid-pq", "5", "--empirical",
                       "--format", "csv")
    assert code == 0
    cell = {(r["p"], r["q"]): r for r in rows(out)}
    assert 0 < float(cell[("2", "4")]["worst_ratio"]) < math.inf


def test_counterexample_commands(capsys):
    code, out, _ = run(capsys, "lplq", "--counterexample", "S-endpoint", "--format", "json")
    assert code == 0 and '"diverged": true' in out
    code, _, err = run(capsys, "lplq", "--counterexample", "no-such-tag")
    assert code == 2 and "unknown counterexample" in err
    code, out, _ = run(capsys, "lplq", "--list-counterexamples", "--format", "json")
    assert code == 0 and "bes-glob-diag" in out


def test_radial_report(capsys):
    code, out, _ = run(capsys, "lplq", "--radial", "--n", "3", "--sigma", "0.5", "--format", "json")
    assert code == 0
    (report,) = json.loads(out)
    assert report["max_rel_dev"] < 1e-3 and report["passed"] is True
    assert run(capsys, "lplq", "--radial", "--sigma", "0.5")[0] == 2


@pytest.mark.parametrize("argv", [
    ("kernel", "--setting", "dunkl", "--alpha", "0.5", "--sigma", "0.3", "--grid", "1e-1:1e1:6"),
    ("lplq", "--alpha", "0", "--sigma", "0.25", "--grid-pq", "5"),
])
def test_output_is_independent_of_threads(tmp_path, argv):
    paths = []
    for threads in ("1", "3"):
        path = tmp_path / f"out{threads}.json"
        assert main([*argv, "--threads", threads, "--output", str(path)]) == 0
        paths.append(path)
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_thread_env_variable(monkeypatch, capsys):
    for bad in ("0", "many"):
        monkeypatch.setenv("HANKELPOT_THREADS", bad)
        code, _, err = run(capsys, "kernel", "--grid", "1:2:2")
        assert code == 2 and "thread" in err.lower()
    monkeypatch.setenv("HANKELPOT_THREADS", "2")
    assert run(capsys, "kernel", "--grid", "1:2:2")[0] == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hankelpot", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "verify" in proc.stdout
