"""Tests for the command-line interface."""

import json

import pandas as pd
import pytest
from click.testing import CliRunner

from meanfield.cli import main
from meanfield.solvers.storage import load_expert


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def test_env_list(runner):
    """Test the environment table."""
    result = runner.invoke(main, ["env", "list"])

    assert result.exit_code == 0
    for name in ["invest", "malware", "virus", "rps", "lr"]:
        assert name in result.output


def test_env_describe_json(runner):
    """Test that the environment description is JSON by default."""
    result = runner.invoke(main, ["env", "describe", "virus", "--variant", "new"])

    assert result.exit_code == 0
    description = json.loads(result.output)
    assert description["num_states"] == 2
    assert description["parameters"]["infection"] == pytest.approx(0.64)


def test_env_describe_table(runner):
    """Test the tabular environment description."""
    result = runner.invoke(main, ["env", "describe", "lr", "--table"])

    assert result.exit_code == 0
    assert "Cooperative" in result.output
    with pytest.raises(json.JSONDecodeError):
        json.loads(result.output)


def test_unknown_env_is_rejected(runner):
    """Test argument validation of environment names."""
    result = runner.invoke(main, ["env", "describe", "chess"])

    assert result.exit_code != 0


def test_info(runner):
    """Test the settings table."""
    result = runner.invoke(main, ["info"])

    assert result.exit_code == 0
    assert "Settings" in result.output


def _invoke(runner, *args):
    return runner.invoke(main, [str(arg) for arg in args])


def test_expert_sample_train_eval(runner, tmp_path):
    """Test the full individual-reward workflow through artifacts on disk."""
    expert = tmp_path / "expert.json"
    demos = tmp_path / "demos.jsonl"
    reward = tmp_path / "reward.json"
    log = tmp_path / "log.csv"
    report = tmp_path / "report.json"

    result = _invoke(
        runner, "expert", "--env", "lr", "--solver", "mfso", "--horizon", 3, "--out", expert
    )
    assert result.exit_code == 0, result.output
    assert expert.exists()

    result = _invoke(
        runner, "sample", "--expert", expert, "--plays", 2, "--agents", 10, "--out", demos
    )
    assert result.exit_code == 0, result.output
    assert len(demos.read_text().splitlines()) == 21

    result = _invoke(
        runner,
        *["train", "mfirl", "--demos", demos, "--env", "lr", "--epochs", 3, "--arch", "linear"],
        *["--trunc", 2, "--mode", "exact", "--out", reward, "--log", log],
    )
    assert result.exit_code == 0, result.output
    assert json.loads(reward.read_text())["metadata"]["plays"] == 2
    assert list(pd.read_csv(log).columns) == ["epoch", "L", "grad-norm"]
    assert len(pd.read_csv(log)) == 3

    result = _invoke(
        runner, "eval", "--reward", reward, "--env", "lr", "--horizon", 3, "--out", report
    )
    assert result.exit_code == 0, result.output
    metrics = json.loads(report.read_text())
    assert metrics["algorithm"] == "mfirl"
    assert metrics["dev_mf"] >= 0.0


def test_expert_damping_options(runner, tmp_path):
    """Test that the damped fixed point yields a converged virus expert at T = 50."""
    expert = tmp_path / "expert.json"

    result = _invoke(runner, "expert", "--env", "virus", "--damping", 0.5, "--out", expert)
    assert result.exit_code == 0, result.output
    artifact = load_expert(expert)
    assert artifact.horizon == 50
    assert artifact.result.converged
    assert artifact.result.exploitability <= 1e-6

    soft = tmp_path / "soft.json"
    result = _invoke(
        runner, "expert", "--env", "virus", "--horizon", 5, "--beta-soft", 2.0, "--out", soft
    )
    assert result.exit_code == 0, result.output
    assert load_expert(soft).result.policy.probs.min() > 0.0

    result = _invoke(runner, "expert", "--env", "virus", "--damping", 1.0, "--out", expert)
    assert result.exit_code != 0


def test_train_rejects_undecodable_demos(runner, tmp_path):
    """Test that invalid UTF-8 in a demonstration file is reported without a traceback."""
    demos = tmp_path / "demos.jsonl"
    demos.write_bytes(b"\xff\xfe\n")

    result = _invoke(
        runner,
        *["train", "mfirl", "--demos", demos, "--env", "lr", "--epochs", 1],
        *["--out", tmp_path / "reward.json"],
    )

    assert result.exit_code != 0
    assert "line 1" in result.output
    assert not isinstance(result.exception, UnicodeDecodeError)


def test_train_plirl(runner, tmp_path):
    """Test societal reward training and evaluation."""
    expert = tmp_path / "expert.json"
    demos = tmp_path / "demos.jsonl"
    reward = tmp_path / "societal.json"

    _invoke(runner, "expert", "--env", "lr", "--horizon", 3, "--out", expert)
    _invoke(runner, "sample", "--expert", expert, "--plays", 1, "--agents", 10, "--out", demos)
    result = _invoke(
        runner, "train", "plirl", "--demos", demos, "--env", "lr", "--epochs", 2, "--out", reward
    )
    assert result.exit_code == 0, result.output
    assert json.loads(reward.read_text())["target"] == "societal"

    result = _invoke(runner, "eval", "--reward", reward, "--env", "lr", "--horizon", 3)
    assert result.exit_code == 0, result.output


def test_train_rejects_mismatched_env(runner, tmp_path):
    """Test that demonstrations of another game are refused."""
    expert = tmp_path / "expert.json"
    demos = tmp_path / "demos.jsonl"
    _invoke(runner, "expert", "--env", "virus", "--horizon", 3, "--out", expert)
    _invoke(runner, "sample", "--expert", expert, "--plays", 1, "--agents", 5, "--out", demos)

    result = _invoke(
        runner,
        *["train", "mfirl", "--demos", demos, "--env", "lr", "--epochs", 1],
        *["--out", tmp_path / "reward.json"],
    )

    assert result.exit_code != 0


def test_experiment_command(runner, tmp_path):
    """Test a ground-truth sweep and its summary."""
    config = tmp_path / "config.json"
    config.write_text(
        json.dumps(
            {
                "envs": ["lr"],
                "algorithms": ["ground_truth"],
                "plays": [1],
                "seeds": [0, 1],
                "horizon": 3,
                "workers": 1,
                "mfso": {"max_steps": 10},
            }
        )
    )
    out = tmp_path / "results.csv"
    summary = tmp_path / "summary.csv"

    result = runner.invoke(
        main,
        ["experiment", "--config", str(config), "--out", str(out), "--summary", str(summary)],
    )

    assert result.exit_code == 0, result.output
    assert len(pd.read_csv(out)) == 2
    assert pd.read_csv(summary)["runs"].tolist() == [2]


def test_experiment_rejects_bad_config(runner, tmp_path):
    """Test that an invalid sweep fails before running."""
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"envs": ["chess"], "plays": [1], "seeds": [0]}))

    result = runner.invoke(
        main, ["experiment", "--config", str(config), "--out", str(tmp_path / "out.csv")]
    )

    assert result.exit_code != 0
    assert not (tmp_path / "out.csv").exists()
