import argparse
import json

import pytest

import main
from src.core.errors import CertificateViolationError
from src.reports.structured import IsingReport
from src.reports.writer import TIMESTAMP_FIELDS


def load(path):
    return json.loads(path.read_text(encoding="utf-8"))


def test_no_command_is_a_usage_error():
    assert main.main([]) == main.EXIT_USAGE


def test_count_accepts_scientific_notation():
    assert main.count("1e6") == 1_000_000
    with pytest.raises(argparse.ArgumentTypeError):
        main.count("1.5")
    with pytest.raises(SystemExit):
        main.main(["simulate", "--steps", "many"])


def test_test_monotone_on_the_standard_example(capsys):
    assert main.main(["test-monotone", "--set", "explicit(2:00,01)"]) == main.EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["tool"] == "monomix"
    assert report["command"] == "test-monotone"
    gglrs = report["result"]["gglrs"]
    assert gglrs["violating_pairs"] == gglrs["epsilon_count"] == 2
    assert gglrs["delta"] == {"num": 1, "den": 4}


def test_test_monotone_needs_a_set():
    assert main.main(["test-monotone"]) == main.EXIT_USAGE


def test_analyze_slow_family(tmp_path):
    out = tmp_path / "analyze.json"
    assert main.main(["analyze", "--set", "subcube-union(6,3)", "--out", str(out)]) == main.EXIT_OK
    result = load(out)["result"]
    assert result["probability"] == {"num": 15, "den": 64}
    assert result["conductance"]["phi"] is not None
    assert result["mixing"]["mixing_time"] > 0


def test_analyze_curve(tmp_path):
    curve = tmp_path / "tv.csv"
    code = main.main(["analyze", "--set", "full(2)", "--mix", "--curve-out", str(curve), "--t-max", "3", "--out", str(tmp_path / "r.json")])
    assert code == main.EXIT_OK
    assert curve.read_text().splitlines() == ["t,d", "1,0.25", "2,0.125", "3,0.0625"]


@pytest.mark.parametrize("argv", [
    ["analyze", "--set", "cube(3)"],
    ["analyze", "--set", "threshold(30,15)"],
    ["simulate"],
    ["simulate", "--set", "threshold(3,2)", "--x0", "000"],
])
def test_input_errors(argv, tmp_path):
    assert main.main([*argv, "--out", str(tmp_path / "r.json")]) == main.EXIT_USAGE


def test_simulate_is_reproducible(tmp_path):
    reports = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        argv = ["simulate", "--set", "threshold(6,3)", "--steps", "2e3", "--seed", "5", "--replicas", "2", "--out", str(out)]
        assert main.main(argv) == main.EXIT_OK
        report = load(out)
        for field in TIMESTAMP_FIELDS:
            report.pop(field)
        reports.append(report)
    assert reports[0] == reports[1]
    result = reports[0]["result"]
    assert result["x0"] == "111111"
    assert all(r["all_in_set"] for r in result["replicas"])
    assert result["monotone_fast_path"]


def test_simulate_csv(tmp_path):
    out = tmp_path / "traj.csv"
    argv = ["simulate", "--set", "dictator(3,0)", "--steps", "100", "--thin", "10", "--format", "csv", "--out", str(out)]
    assert main.main(argv) == main.EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == "step,state,event"
    assert len(lines) == 11
    assert all(line.split(",")[1][0] == "1" for line in lines[1:])


def test_config_file_and_flag_precedence(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"set": "threshold(3,2)", "steps": 100, "seed": 4}))
    out = tmp_path / "r.json"
    assert main.main(["simulate", "--config", str(config), "--steps", "50", "--out", str(out)]) == main.EXIT_OK
    report = load(out)
    assert report["result"]["steps"] == 50
    assert report["seed"] == 4


def test_config_file_rejects_unknown_keys(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"set": "full(2)", "colour": "blue"}))
    assert main.main(["analyze", "--config", str(config)]) == main.EXIT_USAGE


def test_percolation_writes_configuration_and_report(tmp_path):
    cfg, rep = tmp_path / "cfg.txt", tmp_path / "report.json"
    argv = ["percolation", "--L", "3", "--steps", "200", "--seed", "2", "--mode", "exact", "--out", str(cfg), "--report", str(rep)]
    assert main.main(argv) == main.EXIT_OK
    assert len(cfg.read_text().splitlines()) == 3
    result = load(rep)["result"]
    assert result["final_crossing"]
    assert result["crossing_probability"]["value"] == {"num": 1, "den": 2}


def test_ising_sweep(tmp_path):
    out = tmp_path / "ising.json"
    assert main.main(["ising", "--n", "4", "--sweep", "0:2:1", "--out", str(out)]) == main.EXIT_OK
    result = load(out)["result"]
    assert [p["beta"] for p in result["points"]] == [0.0, 1.0, 2.0]


def test_failed_bound_exits_with_one(monkeypatch, tmp_path):
    failed = IsingReport(n=4, points=[], delta_strictly_decreasing=False, passed=False)
    monkeypatch.setitem(main.HANDLERS, "ising", lambda cfg: failed)
    assert main.main(["ising", "--out", str(tmp_path / "r.json")]) == main.EXIT_FAILED


def test_certificate_violation_exits_with_one(monkeypatch):
    def broken(cfg):
        raise CertificateViolationError("cut value disagrees with witness")

    monkeypatch.setitem(main.HANDLERS, "analyze", broken)
    assert main.main(["analyze", "--set", "full(2)"]) == main.EXIT_FAILED


def test_verify_all_subset(tmp_path):
    out = tmp_path / "verify.json"
    assert main.main(["verify-all", "--n-max", "2", "--suites", "gglrs,example", "--out", str(out)]) == main.EXIT_OK
    result = load(out)["result"]
    assert [s["name"] for s in result["suites"]] == ["gglrs", "example"]


def test_verify_all_is_reproducible(tmp_path):
    reports = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        argv = ["verify-all", "--n-max", "3", "--suites", "gglrs,theorem1", "--out", str(out)]
        assert main.main(argv) == main.EXIT_OK
        report = load(out)
        for field in TIMESTAMP_FIELDS:
            report.pop(field)
        reports.append(report)
    assert reports[0] == reports[1]
    assert all("seconds" not in s for s in reports[0]["result"]["suites"])
