"""Linear and leaky-ReLU MLP reward models with exact gradients."""

from __future__ import annotations

import numpy as np

from meanfield.envs.features import encode_features, feature_dim, feature_table
from meanfield.models.oracles import MeanFieldLike, RewardOracle
from meanfield.models.reward import RewardArchitecture, RewardKind, RewardParams
from meanfield.models.spec import MfgSpec
from meanfield.utils.errors import ContractViolationError


def init_params(architecture: RewardArchitecture, seed: int = 0) -> RewardParams:
    """
    Initial parameters for ``architecture``.

    Linear weights start at zero. MLP weights are drawn uniformly from
    [-sqrt(6 / (fan_in + fan_out)), +sqrt(6 / (fan_in + fan_out))] and biases start at zero.
    """
    if architecture.kind == RewardKind.LINEAR:
        return RewardParams(theta=np.zeros(architecture.input_dim), architecture=architecture)
    rng = np.random.default_rng(seed)
    chunks = []
    for fan_in, fan_out in architecture.layer_shapes:
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        chunks.append(rng.uniform(-limit, limit, size=fan_in * fan_out))
        chunks.append(np.zeros(fan_out))
    return RewardParams(theta=np.concatenate(chunks), architecture=architecture)


def unpack_layers(params: RewardParams) -> list[tuple[np.ndarray, np.ndarray]]:
    """Split the flat MLP vector into (weight, bias) pairs in layer order."""
    layers = []
    offset = 0
    for fan_in, fan_out in params.architecture.layer_shapes:
        weight = params.theta[offset : offset + fan_in * fan_out].reshape(fan_in, fan_out)
        offset += fan_in * fan_out
        bias = params.theta[offset : offset + fan_out]
        offset += fan_out
        layers.append((weight, bias))
    return layers


def _check_inputs(params: RewardParams, features: np.ndarray) -> None:
    if features.ndim != 2 or features.shape[1] != params.architecture.input_dim:
        raise ContractViolationError(
            f"features must have shape (N, {params.architecture.input_dim}), got {features.shape}"
        )


def _mlp_pass(params: RewardParams, features: np.ndarray) -> dict[str, np.ndarray]:
    (w1, b1), (w2, b2), (w3, b3) = unpack_layers(params)
    slope = params.architecture.negative_slope
    z1 = features @ w1 + b1
    h1 = np.where(z1 > 0, z1, slope * z1)
    z2 = h1 @ w2 + b2
    h2 = np.where(z2 > 0, z2, slope * z2)
    out = h2 @ w3[:, 0] + b3[0]
    return {"z1": z1, "h1": h1, "z2": z2, "h2": h2, "out": out}


def _mlp_deltas(
    params: RewardParams, cache: dict[str, np.ndarray]
) -> tuple[np.ndarray, np.ndarray]:
    _, (w2, _), (w3, _) = unpack_layers(params)
    slope = params.architecture.negative_slope
    delta2 = w3[:, 0] * np.where(cache["z2"] > 0, 1.0, slope)
    delta1 = (delta2 @ w2.T) * np.where(cache["z1"] > 0, 1.0, slope)
    return delta1, delta2


def forward_batch(params: RewardParams, features: np.ndarray) -> np.ndarray:
    """Rewards of N feature vectors, shape (N,)."""
    _check_inputs(params, features)
    if params.architecture.kind == RewardKind.LINEAR:
        return features @ params.theta
    return _mlp_pass(params, features)["out"]


def param_grad_batch(params: RewardParams, features: np.ndarray) -> np.ndarray:
    """Per-sample gradients with respect to theta, shape (N, d)."""
    _check_inputs(params, features)
    if params.architecture.kind == RewardKind.LINEAR:
        return np.array(features, dtype=np.float64)
    cache = _mlp_pass(params, features)
    delta1, delta2 = _mlp_deltas(params, cache)
    n = features.shape[0]
    return np.concatenate(
        [
            (features[:, :, None] * delta1[:, None, :]).reshape(n, -1),
            delta1,
            (cache["h1"][:, :, None] * delta2[:, None, :]).reshape(n, -1),
            delta2,
            cache["h2"],
            np.ones((n, 1)),
        ],
        axis=1,
    )


def input_grad_batch(params: RewardParams, features: np.ndarray) -> np.ndarray:
    """Per-sample gradients with respect to the input features, shape (N, input_dim)."""
    _check_inputs(params, features)
    if params.architecture.kind == RewardKind.LINEAR:
        return np.broadcast_to(params.theta, features.shape).copy()
    cache = _mlp_pass(params, features)
    delta1, _ = _mlp_deltas(params, cache)
    (w1, _), _, _ = unpack_layers(params)
    return delta1 @ w1.T


def reward_forward(
    params: RewardParams, spec: MfgSpec, s: int, a: int, mu: MeanFieldLike
) -> float:
    """r_omega(s, a, mu) on the feature encoding of (s, a, mu)."""
    return float(forward_batch(params, encode_features(spec, s, a, mu)[None, :])[0])


def reward_grad(
    params: RewardParams, spec: MfgSpec, s: int, a: int, mu: MeanFieldLike
) -> np.ndarray:
    """Exact gradient of r_omega(s, a, mu) with respect to theta."""
    return param_grad_batch(params, encode_features(spec, s, a, mu)[None, :])[0]


def individual_architecture(
    spec: MfgSpec, kind: RewardKind = RewardKind.MLP
) -> RewardArchitecture:
    """Architecture over the [onehot(s), onehot(a), mu] encoding of ``spec``."""
    return RewardArchitecture(kind=kind, input_dim=feature_dim(spec))


class ParametricReward(RewardOracle):
    """A learned reward r_omega used as a reward oracle, e.g. to re-solve equilibria."""

    def __init__(self, params: RewardParams, spec: MfgSpec) -> None:
        if params.architecture.input_dim != feature_dim(spec):
            raise ContractViolationError("reward parameters do not match the game's feature size")
        super().__init__(spec.num_states, spec.num_actions)
        self.params = params
        self.spec = spec

    def _features(self, mu: MeanFieldLike) -> np.ndarray:
        return feature_table(self.spec, mu).reshape(self.num_states * self.num_actions, -1)

    def table(self, mu: MeanFieldLike) -> np.ndarray:
        values = forward_batch(self.params, self._features(mu))
        return values.reshape(self.num_states, self.num_actions)

    def mean_field_jacobian(self, mu: MeanFieldLike) -> np.ndarray:
        grads = input_grad_batch(self.params, self._features(mu))
        offset = self.num_states + self.num_actions
        return grads[:, offset:].reshape(self.num_states, self.num_actions, self.num_states)
