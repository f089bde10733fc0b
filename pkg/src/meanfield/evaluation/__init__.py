"""Evaluation metrics and the experiment pipeline."""

from meanfield.evaluation.metrics import cumulative_kl, dev_mf, dev_policy
from meanfield.evaluation.orchestrator import (
    append_reports,
    expand_rows,
    learned_equilibrium,
    load_reports,
    run_experiment,
    run_row,
    solve_expert,
    summarize_results,
)

__all__ = [
    "cumulative_kl",
    "dev_policy",
    "dev_mf",
    "expand_rows",
    "solve_expert",
    "learned_equilibrium",
    "run_row",
    "load_reports",
    "append_reports",
    "run_experiment",
    "summarize_results",
]
