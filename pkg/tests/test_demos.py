"""Tests for demonstration sampling, estimation and storage."""

import json

import numpy as np
import pytest

from meanfield.core import propagate_flow
from meanfield.demos import (
    estimate_empirical,
    estimate_empirical_policy,
    estimate_mean_field_flow,
    estimate_per_play,
    load_demos,
    sample_trajectories,
    save_demos,
    state_action_counts,
)
from meanfield.envs import make_env
from meanfield.models.demos import DemoSet
from meanfield.models.game import TimeVaryingPolicy
from meanfield.utils.errors import ArgumentError, DemoIntegrityError, DemoParseError


def _uniform_demos(spec, plays=2, agents=5, seed=0) -> DemoSet:
    policy = TimeVaryingPolicy.uniform(spec.horizon, spec.num_states, spec.num_actions)
    flow = propagate_flow(spec, policy)
    return sample_trajectories(spec, flow, policy, plays, agents, seed)


def test_sampling_is_seeded(virus_spec):
    """Test reproducibility and shapes of sampled demonstrations."""
    first = _uniform_demos(virus_spec, seed=3)
    second = _uniform_demos(virus_spec, seed=3)
    other = _uniform_demos(virus_spec, plays=20, agents=20, seed=4)

    assert first == second
    assert first.states.shape == (10, virus_spec.horizon + 1)
    assert first.env_name == "virus"
    assert other.num_trajectories == 400
    assert other.states.max() < 2


def test_sampling_follows_the_policy(lr_spec, always_left):
    """Test deterministic moves in sampled trajectories."""
    flow = propagate_flow(lr_spec, always_left)
    demos = sample_trajectories(lr_spec, flow, always_left, plays=1, agents=30, seed=0)

    assert np.all(demos.actions == 0)
    assert np.all(demos.states[:, 1:] == 1)
    assert set(demos.states[:, 0].tolist()) <= {1, 2}


def test_sampling_rejects_bad_arguments(lr_spec, always_left):
    """Test argument validation of the sampler."""
    flow = propagate_flow(lr_spec, always_left)

    with pytest.raises(ArgumentError):
        sample_trajectories(lr_spec, flow, always_left, plays=0, agents=10, seed=0)
    with pytest.raises(ArgumentError):
        sample_trajectories(
            lr_spec, flow, TimeVaryingPolicy.uniform(2, 3, 2), plays=1, agents=10, seed=0
        )


def test_estimators_on_hand_built_demos():
    """Test counts, empirical flow and empirical policy."""
    demos = DemoSet(
        states=[[0, 1], [0, 0], [1, 1]],
        actions=[[1, 0], [1, 1], [0, 0]],
        env_name="custom",
        variant="original",
        num_states=3,
        num_actions=2,
        horizon=1,
        seed=0,
        agents_per_play=3,
        plays=1,
    )

    counts = state_action_counts(demos)
    assert counts[0].tolist() == [[0, 2], [1, 0], [0, 0]]

    flow = estimate_mean_field_flow(demos)
    np.testing.assert_allclose(flow.probs, [[2 / 3, 1 / 3, 0.0], [1 / 3, 2 / 3, 0.0]])

    policy = estimate_empirical_policy(demos)
    np.testing.assert_allclose(policy.probs[0], [[0.0, 1.0], [1.0, 0.0], [0.5, 0.5]])
    np.testing.assert_allclose(policy.probs[1, 1], [1.0, 0.0])

    estimates = estimate_empirical(demos)
    assert estimates.mean_field_flow == flow


def test_per_play_estimates(virus_spec):
    """Test one estimate per game play."""
    demos = _uniform_demos(virus_spec, plays=3, agents=4)
    per_play = estimate_per_play(demos)

    assert len(per_play) == 3
    np.testing.assert_allclose(
        per_play[1].mean_field_flow.probs, estimate_mean_field_flow(demos.play(1)).probs
    )


@pytest.mark.slow
def test_empirical_flow_tracks_expert_flow():
    """Test that many demonstrations recover the expert flow."""
    spec = make_env("lr", "new", horizon=5)
    demos = _uniform_demos(spec, plays=50, agents=100, seed=2)
    expert = propagate_flow(
        spec, TimeVaryingPolicy.uniform(spec.horizon, spec.num_states, spec.num_actions)
    )

    error = np.abs(estimate_mean_field_flow(demos).probs - expert.probs).max()
    assert error < 0.03


def test_save_and_load(tmp_path, virus_spec):
    """Test lossless JSONL persistence."""
    demos = _uniform_demos(virus_spec)
    path = save_demos(demos, tmp_path / "demos.jsonl")

    lines = path.read_text().splitlines()
    assert json.loads(lines[0])["num_trajectories"] == 10
    assert len(lines) == 11
    assert load_demos(path) == demos


def test_load_reports_bad_lines(tmp_path, virus_spec):
    """Test parse errors carry their line numbers."""
    demos = _uniform_demos(virus_spec)
    path = save_demos(demos, tmp_path / "demos.jsonl")
    lines = path.read_text().splitlines()

    broken = tmp_path / "broken.jsonl"
    broken.write_text("\n".join(lines[:3] + ["{not json"] + lines[4:]) + "\n")
    with pytest.raises(DemoParseError) as excinfo:
        load_demos(broken)
    assert excinfo.value.line_number == 4

    header = tmp_path / "header.jsonl"
    header.write_text("\n".join(["{}"] + lines[1:]) + "\n")
    with pytest.raises(DemoParseError) as excinfo:
        load_demos(header)
    assert excinfo.value.line_number == 1


def test_load_reports_integrity_errors(tmp_path, virus_spec):
    """Test trajectory counts and lengths are checked against the metadata."""
    demos = _uniform_demos(virus_spec)
    path = save_demos(demos, tmp_path / "demos.jsonl")
    lines = path.read_text().splitlines()

    missing = tmp_path / "missing.jsonl"
    missing.write_text("\n".join(lines[:-1]) + "\n")
    with pytest.raises(DemoIntegrityError):
        load_demos(missing)

    short = tmp_path / "short.jsonl"
    short.write_text("\n".join(lines[:1] + ['{"s": [0], "a": [0]}'] + lines[2:]) + "\n")
    with pytest.raises(DemoIntegrityError):
        load_demos(short)


def test_load_reports_invalid_utf8(tmp_path, virus_spec):
    """Test undecodable bytes are reported as a parse error with their line number."""
    demos = _uniform_demos(virus_spec)
    path = save_demos(demos, tmp_path / "demos.jsonl")
    lines = path.read_bytes().splitlines()

    broken = tmp_path / "broken.jsonl"
    broken.write_bytes(b"\n".join(lines[:1] + [b'{"s\xff": [0]}'] + lines[2:]) + b"\n")
    with pytest.raises(DemoParseError) as excinfo:
        load_demos(broken)
    assert excinfo.value.line_number == 2
    assert "UTF-8" in str(excinfo.value)


@pytest.mark.parametrize("seed", range(6))
def test_save_and_load_random_sets(tmp_path, seed):
    """Test persistence of demonstration sets drawn from random games and sizes."""
    rng = np.random.default_rng(seed)
    name = str(rng.choice(["invest", "malware", "virus", "rps", "lr"]))
    variant = str(rng.choice(["original", "new"]))
    spec = make_env(name, variant, horizon=int(rng.integers(1, 6)))
    demos = _uniform_demos(
        spec, plays=int(rng.integers(1, 4)), agents=int(rng.integers(1, 8)), seed=seed
    )

    path = save_demos(demos, tmp_path / f"{name}.jsonl")
    assert load_demos(path) == demos


def test_empirical_flow_is_unbiased(virus_spec):
    """Test the flow estimate averages to the expert flow over many seeds."""
    policy = TimeVaryingPolicy.uniform(
        virus_spec.horizon, virus_spec.num_states, virus_spec.num_actions
    )
    expert = propagate_flow(virus_spec, policy)

    estimates = [
        estimate_mean_field_flow(
            sample_trajectories(virus_spec, expert, policy, plays=1, agents=10, seed=seed)
        ).probs
        for seed in range(400)
    ]
    np.testing.assert_allclose(np.mean(estimates, axis=0), expert.probs, atol=0.03)
