import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from torus_mreg.cli import EXIT_ERROR, EXIT_FAIL, EXIT_PASS, SCENARIOS, ConfigError, dumps, main, run

HEAT = {"dim": 1, "P": [[0]], "B": [[1]], "A": [[1]], "K": 32}

CONFIGS = {
    "jodeit-verify": {},
    "symbol-check": {"K": 32},
    "besov-norm": {"s": 0.5, "q": 2},
    "multiplier-bound": {"K": 32, "n_probes": 4},
    "weights-lab": {},
    "extrapolate": {"G": 128, "n_pairs": 2},
    "deleeuw": {"order": 6, "n_probes": 6, "G": 128},
    "aee-solve": {"problem": HEAT},
    "aee-characterize": {"problem": HEAT},
    "aee-mr-experiment": {"problem": HEAT, "n_probes": 3},
}

EXPECTED = {name: "PASS" for name in SCENARIOS} | {"besov-norm": "INFO"}


def test_config_table_covers_all_scenarios():
    assert set(CONFIGS) == set(SCENARIOS)


@pytest.mark.parametrize("scenario", SCENARIOS)
def test_scenario_verdicts(scenario):
    report, verdict, _ = run(scenario, {"params": CONFIGS[scenario]}, seed=3)
    assert verdict == EXPECTED[scenario]
    payload = report["payload"]
    assert payload["scenario"] == scenario and payload["seed"] == 3
    assert payload["verdict"] == verdict and payload["traceability"]
    json.dumps(report, allow_nan=False)


@pytest.mark.parametrize("scenario", SCENARIOS)
def test_determinism_across_threads(scenario):
    cfg = {"params": CONFIGS[scenario]}
    one = dumps(run(scenario, cfg, seed=11, threads=1)[0]["payload"])
    four = dumps(run(scenario, cfg, seed=11, threads=4)[0]["payload"])
    assert one == four


def test_seed_changes_random_inputs():
    a = run("besov-norm", {}, seed=1)[0]["payload"]["results"]["norm"]
    b = run("besov-norm", {}, seed=2)[0]["payload"]["results"]["norm"]
    assert a != b


@pytest.mark.parametrize("config, fragment", [
    ({"params": {"problem": {"dim": 1, "P": [[0]], "B": [[1]]}}}, "params.problem: missing key 'A'"),
    ({"params": {"K": "many"}}, "params.K"),
    ({"params": {"problem": {"dim": 2, "P": [[0]], "B": [[1]], "A": [[1]]}}}, "params.problem"),
])
def test_config_errors_name_the_path(config, fragment):
    scenario = "symbol-check" if "K" in config["params"] else "aee-solve"
    with pytest.raises(ConfigError) as info:
        run(scenario, config)
    assert fragment in str(info.value)


def test_bad_seed_and_scenario():
    with pytest.raises(ConfigError):
        run("deleeuw", {}, seed=-1)
    with pytest.raises(ConfigError):
        run("nonsense", {})


def test_bare_problem_file_is_accepted(tmp_path):
    path = tmp_path / "heat.json"
    path.write_text(json.dumps(HEAT))
    out = tmp_path / "out.json"
    assert main(["aee-characterize", "--config", str(path), "--out", str(out)]) == EXIT_PASS
    rep = json.loads(out.read_text())["payload"]
    assert rep["results"]["report"]["mr_flag"] is True
    assert rep["results"]["report"]["mr_flag_R"]["marker"] == "PROXY"


def test_relative_file_references(tmp_path):
    (tmp_path / "prob.json").write_text(json.dumps(HEAT))
    (tmp_path / "cfg.json").write_text(json.dumps({"scenario": "aee-solve", "seed": 5,
                                                     "params": {"problem": "prob.json"}}))
    out = tmp_path / "r.json"
    assert main(["aee-solve", "--config", str(tmp_path / "cfg.json"), "--out", str(out)]) == EXIT_PASS
    assert json.loads(out.read_text())["payload"]["seed"] == 5


def test_exit_codes(tmp_path, capsys):
    assert main(["bogus"]) == EXIT_ERROR
    assert "unknown scenario" in capsys.readouterr().err
    (tmp_path / "bad.json").write_text("{not json")
    assert main(["deleeuw", "--config", str(tmp_path / "bad.json")]) == EXIT_ERROR
    w = tmp_path / "w.json"
    w.write_text(json.dumps({"kind": "power", "alpha": 2.0, "G": 256}))
    assert main(["weights", "apconst", "--w", str(w), "--p", "2", "--out", str(tmp_path / "a.json")]) == EXIT_FAIL
    w.write_text(json.dumps({"kind": "power", "alpha": 0.5, "G": 256}))
    assert main(["weights", "apconst", "--w", str(w), "--out", str(tmp_path / "a.json")]) == EXIT_PASS


def test_singular_problem_is_an_error_for_solve(tmp_path, capsys):
    path = tmp_path / "sq.json"
    path.write_text(json.dumps({"dim": 1, "P": [[1]], "B": [[0]], "A": [[4]], "K": 8}))
    assert main(["aee", "solve", "--config", str(path)]) == EXIT_ERROR
    assert "SingularSymbol" in capsys.readouterr().err
    out = tmp_path / "c.json"
    assert main(["aee", "characterize", "--config", str(path), "--out", str(out)]) == EXIT_PASS
    rep = json.loads(out.read_text())["payload"]["results"]["report"]
    assert rep["mr_flag"] is False and rep["singular_frequencies"] == [-2, 2]


def test_group_commands(tmp_path):
    out = tmp_path / "j.json"
    assert main(["jodeit", "verify", "--grid", "2048", "--out", str(out), "--csv"]) == EXIT_PASS
    assert json.loads(out.read_text())["payload"]["inputs"]["grid"] == 2048
    with open(tmp_path / "j.identities.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["identity", "residual"] and len(rows) > 1
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"samples": np.abs(np.sin(np.arange(128))).tolist()}))
    assert main(["weights", "rdf", "--g", str(g), "--out", str(tmp_path / "r.json")]) == EXIT_PASS


def test_csv_sidecar_default_location(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    assert main(["symbol-check", "--csv", "--seed", "1"]) == EXIT_PASS
    json.loads(capsys.readouterr().out)
    assert (tmp_path / "symbol-check.per_k.csv").exists()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "torus_mreg", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "torus-mreg" in res.stdout


def test_group_command_reads_any_file_name(tmp_path):
    path = tmp_path / "heat.problem"
    path.write_text(json.dumps(HEAT))
    out = tmp_path / "c.json"
    assert main(["aee", "characterize", "--config", str(path), "--out", str(out)]) == EXIT_PASS
    assert json.loads(out.read_text())["payload"]["inputs"]["problem"]["dim"] == 1
