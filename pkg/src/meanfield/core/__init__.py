"""MFG calculus: oracle interfaces, mean-field propagation, returns and best responses."""

from meanfield.core.backward import (
    boltzmann_backward,
    boltzmann_rows,
    exploitability,
    greedy_rows,
    q_backward_optimal,
)
from meanfield.core.dynamics import (
    check_compatible,
    expected_return,
    kernel_matrix,
    mkv_step,
    monte_carlo_return,
    propagate_flow,
    propagate_probs,
    simulate_population,
    societal_reward,
    visitation_return,
)
from meanfield.models.oracles import (
    ConstantReward,
    RewardOracle,
    TabularKernel,
    TabularReward,
    TransitionKernel,
)

__all__ = [
    "TransitionKernel",
    "RewardOracle",
    "TabularKernel",
    "TabularReward",
    "ConstantReward",
    "check_compatible",
    "kernel_matrix",
    "mkv_step",
    "propagate_flow",
    "propagate_probs",
    "societal_reward",
    "expected_return",
    "visitation_return",
    "monte_carlo_return",
    "simulate_population",
    "greedy_rows",
    "boltzmann_rows",
    "q_backward_optimal",
    "boltzmann_backward",
    "exploitability",
]
