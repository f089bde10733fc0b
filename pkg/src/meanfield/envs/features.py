"""One-hot state/action features concatenated with the mean field."""

from __future__ import annotations

import numpy as np

from meanfield.models.oracles import MeanFieldLike, as_probs
from meanfield.models.spec import MfgSpec
from meanfield.utils.errors import ArgumentError


def feature_dim(spec: MfgSpec) -> int:
    return 2 * spec.num_states + spec.num_actions


def encode_features(spec: MfgSpec, s: int, a: int, mu: MeanFieldLike) -> np.ndarray:
    """
    Feature vector [onehot(s), onehot(a), mu] of length 2|S| + |A|.

    Raises:
        ArgumentError: If ``s`` or ``a`` is out of range
    """
    if not 0 <= s < spec.num_states:
        raise ArgumentError(f"state {s} out of range [0, {spec.num_states})")
    if not 0 <= a < spec.num_actions:
        raise ArgumentError(f"action {a} out of range [0, {spec.num_actions})")
    probs = as_probs(mu)
    if probs.shape != (spec.num_states,):
        raise ArgumentError(f"mean field must have {spec.num_states} entries")
    features = np.zeros(feature_dim(spec))
    features[s] = 1.0
    features[spec.num_states + a] = 1.0
    features[spec.num_states + spec.num_actions :] = probs
    return features


def feature_table(spec: MfgSpec, mu: MeanFieldLike) -> np.ndarray:
    """Features of every (s, a) pair under ``mu``, shape (|S|, |A|, 2|S| + |A|)."""
    return flow_features(spec, as_probs(mu)[None, :])[0]


def flow_features(spec: MfgSpec, flow: np.ndarray) -> np.ndarray:
    """Features of every (t, s, a) for a (K, |S|) stack of mean fields, shape (K, |S|, |A|, D)."""
    num_steps = flow.shape[0]
    S, A = spec.num_states, spec.num_actions
    features = np.zeros((num_steps, S, A, feature_dim(spec)))
    features[:, np.arange(S), :, np.arange(S)] = 1.0
    features[:, :, np.arange(A), S + np.arange(A)] = 1.0
    features[..., S + A :] = flow[:, None, None, :]
    return features
