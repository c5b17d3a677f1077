import json

import pytest

from bellsel import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_simulate_v1_summary(capsys):
    code, out, _ = run(capsys, "simulate", "--experiment", "v1", "--n", "100000", "--seed", "7")
    assert code == 0
    summary = json.loads(out)
    assert summary["schema_version"] == 1
    assert summary["rates"]["P(A=B|a=b)"] == 1.0


def test_simulate_bigv_rate_within_three_sigma(capsys):
    code, out, _ = run(capsys, "simulate", "--experiment", "bigv", "--n", "100000", "--seed", "7")
    assert code == 0
    assert abs(json.loads(out)["rates"]["P(A=B)"] - 0.5) <= 3 * (0.25 / 100_000) ** 0.5


@pytest.mark.parametrize("argv", [
    ["simulate", "--n", "0"],
    ["simulate", "--experiment", "v7"],
    ["simulate", "--policy", "[[1]]"],
    ["simulate", "--seed", "-3"],
    ["frobnicate"],
    [],
])
def test_usage_errors_exit_1(capsys, argv):
    assert run(capsys, *argv)[0] == 1


def test_unwritable_output_exits_2(capsys, tmp_path):
    code, _, err = run(capsys, "simulate", "--n", "10", "--out", str(tmp_path / "missing" / "d.csv"))
    assert code == 2 and "cannot write" in err


def test_config_file_and_env_seed(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"experiment": "v2", "n": 5000, "out": str(tmp_path / "a.csv")}))
    monkeypatch.setenv(cli.SEED_ENV, "11")
    assert run(capsys, "simulate", "--config", str(cfg))[0] == 0
    assert run(capsys, "simulate", "--config", str(cfg), "--seed", "11", "--out", str(tmp_path / "b.csv"))[0] == 0
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 5, "colour": "red"}))
    assert run(capsys, "simulate", "--config", str(bad))[0] == 1
    assert run(capsys, "simulate", "--config", str(tmp_path / "nope.json"))[0] == 2


def test_byte_identical_across_runs_and_workers(capsys, tmp_path):
    paths = []
    for i, workers in enumerate(("1", "1", "4", "4")):
        path = tmp_path / f"d{i}.csv"
        assert run(capsys, "simulate", "--n", "140000", "--seed", "5", "--workers", workers, "--out", str(path))[0] == 0
        paths.append(path)
    first = paths[0].read_bytes()
    assert all(p.read_bytes() == first for p in paths[1:])


@pytest.fixture
def bigv_csv(tmp_path, capsys):
    path = tmp_path / "bigv.csv"
    assert run(capsys, "simulate", "--experiment", "bigv", "--n", "100000", "--seed", "7", "--out", str(path))[0] == 0
    return path


def test_analyze_pairwise_independent(capsys, bigv_csv):
    code, out, err = run(capsys, "analyze", str(bigv_csv), "--ci", "a:B")
    assert code == 0 and err == ""
    assert json.loads(out)["ci"][0]["verdict"] == "independent"


def test_analyze_preselect_recovers_dependence(capsys, bigv_csv, tmp_path):
    report = tmp_path / "r.json"
    code, _, _ = run(capsys, "analyze", str(bigv_csv), "--preselect", "I1", "--ci", "A:B:a,b",
                     "--posteriors", "--no-signalling", "--out", str(report))
    assert code == 0
    doc = json.loads(report.read_text())
    assert doc["ci"][0]["verdict"] == "dependent"
    assert doc["posteriors"]["settings equal, outcomes equal"]["I1"] == 1.0
    assert doc["no_signalling"]["max_deviation"] < 0.05


def test_analyze_json_dataset(capsys, tmp_path):
    path = tmp_path / "d.json"
    assert run(capsys, "simulate", "--n", "300", "--format", "json", "--out", str(path))[0] == 0
    assert run(capsys, "analyze", str(path), "--ci", "a:b")[0] == 0


def test_analyze_missing_header_exit_2(capsys, bigv_csv, tmp_path):
    body = tmp_path / "nohdr.csv"
    body.write_text("".join(bigv_csv.read_text().splitlines(keepends=True)[1:]))
    code, _, err = run(capsys, "analyze", str(body))
    assert code == 2 and "line 1" in err


def test_analyze_bad_row_reports_line(capsys, tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("trial,a,b,A,B,I\n0,0,0,0,0,1\n1,0,9,0,0,1\n")
    code, _, err = run(capsys, "analyze", str(path))
    assert code == 2 and "line 3" in err


@pytest.mark.parametrize("argv", [["--run", "bogus"], ["--ci", "a:Q"], ["--ci", "a"], ["--preselect", "I9"]])
def test_analyze_usage_errors(capsys, bigv_csv, argv):
    assert run(capsys, "analyze", str(bigv_csv), *argv)[0] == 1


def test_scenario_damascus(capsys):
    code, out, _ = run(capsys, "scenario", "damascus")
    assert code == 0 and json.loads(out)["support"]["classification"] == "selection artefact"
    code, out, _ = run(capsys, "scenario", "damascus", "--constrained")
    assert code == 0 and json.loads(out)["support"]["classification"] == "CCC"


def test_scenario_bigv_retro(capsys):
    code, out, _ = run(capsys, "scenario", "bigv-retro", "--mode", "locked-compatible", "--trials", "20")
    doc = json.loads(out)
    assert code == 0 and doc["faithfulness"]["unfaithful"]
    assert doc["sweep"]["surviving_fraction"] == 0.0
    code, out, _ = run(capsys, "scenario", "bigv-retro", "--mode", "unlocked-demo", "--trials", "5")
    doc = json.loads(out)
    assert code == 0 and "skipped" in doc["sweep"]
    assert doc["setting_independence"]["a"] > 0.1


def test_scenario_unknown_name(capsys):
    assert run(capsys, "scenario", "atlantis")[0] == 1
