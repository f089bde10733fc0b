"""Tests for domain models."""

import numpy as np
import pytest
from pydantic import ValidationError

from meanfield.models import (
    ActionValueTable,
    DemoSet,
    ExperimentConfig,
    MeanField,
    MeanFieldFlow,
    MetricsReport,
    PerStepPolicy,
    RewardArchitecture,
    RewardKind,
    RewardParams,
    SocietalRewardModel,
    TimeVaryingPolicy,
)
from meanfield.models.experiment import CSV_COLUMNS
from meanfield.models.oracles import TabularKernel
from meanfield.models.spec import MfgSpec


def test_mean_field_must_be_a_distribution():
    """Test mean field simplex validation."""
    MeanField(probs=[0.25, 0.75])

    with pytest.raises(ValidationError):
        MeanField(probs=[0.5, 0.6])
    with pytest.raises(ValidationError):
        MeanField(probs=[1.5, -0.5])
    with pytest.raises(ValidationError):
        MeanField(probs=[np.nan, 1.0])


def test_mean_field_is_immutable():
    """Test that stored arrays cannot be written in place."""
    mu = MeanField.uniform(4)

    with pytest.raises(ValueError):
        mu.probs[0] = 1.0


def test_flow_and_policy_shapes():
    """Test flow and policy containers."""
    flow = MeanFieldFlow(probs=np.full((4, 2), 0.5))
    assert flow.horizon == 3
    assert flow[2].num_states == 2

    policy = TimeVaryingPolicy.uniform(horizon=3, num_states=2, num_actions=3)
    assert policy.horizon == 3
    assert policy[0] == PerStepPolicy.uniform(2, 3)

    with pytest.raises(ValidationError):
        MeanFieldFlow(probs=np.full((1, 2), 0.5))
    with pytest.raises(ValidationError):
        TimeVaryingPolicy(probs=np.full((3, 2, 2), 0.4))


def test_flow_and_policy_from_per_step_parts():
    """Test rebuilding flows and policies from their per-step pieces."""
    flow = MeanFieldFlow(probs=np.array([[0.5, 0.5], [0.2, 0.8], [0.9, 0.1]]))
    rebuilt = MeanFieldFlow.from_fields(flow.fields)
    assert rebuilt == flow
    assert rebuilt[1] == MeanField(probs=np.array([0.2, 0.8]))

    steps = [PerStepPolicy.uniform(2, 3), PerStepPolicy(probs=np.array([[1.0, 0.0, 0.0]] * 2))]
    policy = TimeVaryingPolicy.from_steps(steps)
    assert policy.horizon == 1
    assert policy[1] == steps[1]
    assert TimeVaryingPolicy.from_steps(policy.steps) == policy

    with pytest.raises(ValidationError):
        MeanFieldFlow.from_fields([MeanField(probs=np.array([1.0, 0.0]))])


def test_action_values_have_zero_terminal_slice():
    """Test the terminal condition of action-value tables."""
    values = np.zeros((3, 2, 2))
    values[0] = 1.0
    assert ActionValueTable(values=values).horizon == 2

    values[-1, 0, 0] = 0.1
    with pytest.raises(ValidationError):
        ActionValueTable(values=values)


def test_spec_dimensions_must_agree():
    """Test game dimension checks."""
    kernel = TabularKernel(np.full((2, 2, 2), 0.5))

    with pytest.raises(ValidationError):
        MfgSpec(
            num_states=3,
            num_actions=2,
            horizon=2,
            discount=0.9,
            initial_mean_field=MeanField.uniform(3),
            transition=kernel,
        )
    with pytest.raises(ValidationError):
        MfgSpec(
            num_states=2,
            num_actions=2,
            horizon=0,
            discount=0.9,
            initial_mean_field=MeanField.uniform(2),
            transition=kernel,
        )


def _demos(states, actions, plays=1, agents=2) -> DemoSet:
    return DemoSet(
        states=states,
        actions=actions,
        env_name="custom",
        variant="original",
        num_states=2,
        num_actions=2,
        horizon=1,
        seed=0,
        agents_per_play=agents,
        plays=plays,
    )


def test_demo_set_validates_indices_and_counts():
    """Test demonstration index ranges and counts."""
    demos = _demos([[0, 1], [1, 1]], [[0, 0], [1, 0]])
    assert demos.num_trajectories == 2
    assert len(demos.trajectories) == 2

    with pytest.raises(ValidationError):
        _demos([[0, 2], [1, 1]], [[0, 0], [1, 0]])
    with pytest.raises(ValidationError):
        _demos([[0, 1], [1, 1]], [[0, 0], [1, -1]])
    with pytest.raises(ValidationError):
        _demos([[0, 1], [1, 1]], [[0, 0], [1, 0]], plays=2)


def test_demo_set_play_selection():
    """Test play slicing helpers."""
    demos = _demos([[0, 1], [1, 1], [0, 0], [1, 0]], [[0, 0]] * 4, plays=2)

    first = demos.first_plays(1)
    assert first.plays == 1
    assert first.states.tolist() == [[0, 1], [1, 1]]
    assert demos.play(1).states.tolist() == [[0, 0], [1, 0]]

    with pytest.raises(ValueError):
        demos.play(2)
    with pytest.raises(ValueError):
        demos.first_plays(3)


def test_reward_architecture_sizes():
    """Test parameter counts of reward architectures."""
    linear = RewardArchitecture(kind=RewardKind.LINEAR, input_dim=8)
    mlp = RewardArchitecture(kind=RewardKind.MLP, input_dim=8, hidden=(64, 64))

    assert linear.num_parameters == 8
    assert mlp.num_parameters == 8 * 64 + 64 + 64 * 64 + 64 + 64 + 1
    assert mlp.layer_shapes == [(8, 64), (64, 64), (64, 1)]

    with pytest.raises(ValidationError):
        RewardParams(theta=np.zeros(7), architecture=linear)
    with pytest.raises(ValidationError):
        RewardArchitecture(kind=RewardKind.MLP, input_dim=8, hidden=(0, 4))


def test_societal_model_input_size():
    """Test that a societal reward reads [mu, pi]."""
    architecture = RewardArchitecture(kind=RewardKind.LINEAR, input_dim=3 + 3 * 2)
    params = RewardParams(theta=np.zeros(9), architecture=architecture)
    SocietalRewardModel(params=params, num_states=3, num_actions=2)

    with pytest.raises(ValidationError):
        SocietalRewardModel(params=params, num_states=3, num_actions=3)


def test_metrics_report_row_and_constraints():
    """Test CSV row export of metric reports."""
    report = MetricsReport(
        env="lr",
        variant="original",
        algorithm="mfirl",
        plays=10,
        seed=3,
        dev_policy=0.1,
        dev_mf=0.2,
        return_learned=-1.0,
        return_expert=-0.9,
    )
    assert list(report.as_row()) == CSV_COLUMNS
    assert report.as_row()["env"] == "lr"
    assert report.key == ("lr", "original", "mfirl", 10, 3)

    with pytest.raises(ValidationError):
        MetricsReport(env="lr", variant="original", algorithm="mfirl", plays=1, seed=0, dev_mf=-1)


def test_experiment_config_requires_non_empty_sweeps():
    """Test experiment sweep validation."""
    config = ExperimentConfig(envs=["lr"], plays=[1, 2], seeds=[0])
    assert config.algorithms[0].value == "mfirl"

    with pytest.raises(ValidationError):
        ExperimentConfig(envs=[], plays=[1], seeds=[0])
    with pytest.raises(ValidationError):
        ExperimentConfig(envs=["lr"], plays=[0], seeds=[0])
    with pytest.raises(ValidationError):
        ExperimentConfig(envs=["nowhere"], plays=[1], seeds=[0])
