import json

import pytest

from quclab.errors import ConfigInvalid
from quclab.harness import CATALOG, Experiment, ExperimentConfig, Recorder, load_config, run_experiment
from quclab.harness import experiments
from quclab.harness.cli import main
from quclab.harness.experiments import hash_pairs
from quclab.netexec import ExactTree, ExecConfig
from quclab.otproto import ProtocolParams

NAMES = [
    "correctness", "corrupted-alice-tv", "trivial-cases-tv", "cheat-bob-abort", "sender-privacy",
    "receiver-privacy", "composition-equivalence", "lifting-wrapper", "hash-universality",
]


def test_catalog_names_are_stable():
    assert list(CATALOG) == NAMES
    assert sorted(e.criterion for e in CATALOG.values()) == list(range(1, 10))


def test_config_validation():
    with pytest.raises(ConfigInvalid):
        ExperimentConfig("no-such-experiment")
    with pytest.raises(ConfigInvalid):
        ExperimentConfig("correctness", n=2, m=3)
    with pytest.raises(ConfigInvalid):
        ExperimentConfig("correctness", n=3, m=3, ell=1)
    with pytest.raises(ConfigInvalid):
        ExperimentConfig("correctness", mode="fast")
    with pytest.raises(ConfigInvalid):
        ExperimentConfig("correctness", trials=0)
    with pytest.raises(ConfigInvalid):
        ExperimentConfig("correctness", k=2, n=8, m=16, ell=1)
    with pytest.raises(ConfigInvalid):
        ExperimentConfig.from_dict({"experiment": "correctness", "colour": 1})


def test_config_round_trip_and_params():
    cfg = ExperimentConfig("correctness", k=2, seed=5, trials=10)
    assert ExperimentConfig.from_dict(cfg.as_dict()) == cfg
    assert cfg.params() == ProtocolParams.from_security(2)
    assert ExperimentConfig("correctness").params() is None
    assert cfg.with_overrides(seed=None, trials=3).trials == 3


def test_load_config_from_toml(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text('experiment = "hash-universality"\ntrials = 500\nseed = 4\nn = 4\nm = 6\nell = 2\n')
    cfg = load_config(str(path), seed=9)
    assert (cfg.experiment, cfg.trials, cfg.seed, cfg.params()) == ("hash-universality", 500, 9, ProtocolParams(4, 6, 2))
    path.write_text("trials = [")
    with pytest.raises(ConfigInvalid):
        load_config(str(path), "hash-universality")
    with pytest.raises(ConfigInvalid):
        load_config(str(tmp_path / "missing.toml"), "hash-universality")


def test_hash_pairs_are_distinct():
    pairs = hash_pairs(6, 100, 0)
    assert len({(x.tobytes(), y.tobytes()) for x, y in pairs}) == 100
    assert all((x != y).any() for x, y in pairs)


def test_sampled_report_is_reproducible():
    cfg = ExperimentConfig("hash-universality", trials=2000, seed=3, n=4, m=6, ell=2)
    a, b = run_experiment(cfg), run_experiment(cfg)
    assert a.to_json() == b.to_json()
    assert a.passed
    assert json.loads(a.to_json())["measured"]["max_exact_collision"] == "1/4"


def test_exact_report_is_byte_identical(tmp_path):
    corpus = tmp_path / "corpus.json"
    corpus.write_text(json.dumps([{"name": "a", "seed": 1}, {"name": "b", "c": "1", "announce": "lie"}]))
    cfg = ExperimentConfig("corrupted-alice-tv", corpus=str(corpus))
    first, second = run_experiment(cfg), run_experiment(cfg)
    assert first.to_json() == second.to_json()
    assert first.wall_time > 0 and "wall_time" not in first.to_json()
    assert first.hygiene["mass_ok"] and first.hygiene["executions"] > 0
    assert not first.passed  # two scripts are fewer than the required ten
    assert [c.name for c in first.failed_checks()] == ["corpus-size"]
    assert first.to_csv().splitlines()[0] == "script,tv"


def test_cli_list(capsys):
    assert main(["list"]) == 0
    assert [line.split()[0] for line in capsys.readouterr().out.splitlines()] == NAMES


def test_cli_run_writes_reports(tmp_path, capsys):
    out, csv = tmp_path / "r.json", tmp_path / "r.csv"
    code = main(["run", "hash-universality", "--trials", "1000", "--n", "4", "--m", "6", "--ell", "1",
                 "--out", str(out), "--csv", str(csv)])
    assert code == 0
    assert json.loads(out.read_text())["passed"] is True
    assert csv.read_text().startswith("pair,rate")
    assert "hash-universality: PASS" in capsys.readouterr().out


def test_cli_exit_codes(monkeypatch, capsys):
    def failing(cfg, rec):
        rec.check("always", False, "fails on purpose")

    monkeypatch.setitem(CATALOG, "correctness", Experiment("correctness", 1, "", failing, None))
    assert main(["run", "correctness"]) == 1
    assert main(["run", "bogus"]) == 2
    assert main(["run", "correctness", "--n", "3", "--m", "2", "--ell", "1"]) == 2
    assert "configuration error" in capsys.readouterr().err


def test_cli_branch_cap_guidance(monkeypatch, capsys):
    monkeypatch.setattr(experiments, "EXACT", ExecConfig(mode=ExactTree(branch_cap=500)))
    assert main(["run", "receiver-privacy", "--n", "3", "--m", "4", "--ell", "1"]) == 2
    assert "n=2, m=3, ell=1" in capsys.readouterr().err


def test_cli_trace(capsys):
    assert main(["trace", "correctness", "--seed", "1", "--n", "2", "--m", "3", "--ell", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    first = json.loads(lines[0])
    assert set(first) == {"step", "sender", "recipient", "payload", "qsize", "note"}
    assert [json.loads(line)["step"] for line in lines] == list(range(1, len(lines) + 1))
    assert any(json.loads(line)["qsize"] == 3 for line in lines)


def test_recorder_hygiene_flags_bad_mass():
    from fractions import Fraction

    from quclab.netexec import OutcomeDistribution

    rec = Recorder()
    rec.hygiene(OutcomeDistribution({b"a": Fraction(1, 2)}, branches=1))
    assert rec.hygiene_summary()["mass_ok"] is False
