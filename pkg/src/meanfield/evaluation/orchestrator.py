"""
Experiment pipeline: expert, demonstrations, reward recovery, re-solve and metrics.

Each row of a sweep is an independent (env, variant, algorithm, plays, seed) job. Experts
are solved and demonstrations sampled on the ORIGINAL dynamics; the learned reward is then
re-solved for its social optimum on the requested variant and compared with the
ground-truth social optimum of that variant.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Union

import pandas as pd

from meanfield.core.dynamics import expected_return
from meanfield.demos.estimators import estimate_per_play
from meanfield.demos.sampling import sample_trajectories
from meanfield.envs.catalog import make_env
from meanfield.evaluation.metrics import dev_mf, dev_policy
from meanfield.irl.mfirl import mfirl_train
from meanfield.irl.plirl import plirl_equilibrium, plirl_train
from meanfield.models.experiment import (
    CSV_COLUMNS,
    Algorithm,
    ExperimentConfig,
    MetricsReport,
    SolverKind,
)
from meanfield.models.results import EquilibriumResult
from meanfield.models.spec import EnvName, EnvVariant, MfgSpec
from meanfield.rewards.networks import ParametricReward, individual_architecture
from meanfield.solvers.fixed_point import solve_mfne_fixed_point
from meanfield.solvers.mfso import solve_mfso
from meanfield.utils.logger import configure_logging, get_logger

logger = get_logger(__name__)

RowKey = tuple[str, str, str, int, int]
METRIC_COLUMNS = ["dev_policy", "dev_mf", "return_learned", "return_expert", "return_gap"]
GROUP_COLUMNS = ["env", "variant", "algorithm", "plays"]


def expand_rows(config: ExperimentConfig) -> list[RowKey]:
    """All rows of the sweep in output order."""
    return [
        (env.value, variant.value, algorithm.value, plays, seed)
        for env, variant, algorithm, plays, seed in itertools.product(
            config.envs, config.variants, config.algorithms, config.plays, config.seeds
        )
    ]


def _spec(config: ExperimentConfig, env: EnvName, variant: EnvVariant) -> MfgSpec:
    return make_env(env, variant, horizon=config.horizon, discount=config.discount)


def solve_expert(config: ExperimentConfig, spec: MfgSpec) -> EquilibriumResult:
    """Expert equilibrium of ``spec`` with the solver configured for its environment."""
    solver = config.expert_solvers.get(EnvName(spec.name), SolverKind.MFNE)
    if solver == SolverKind.MFSO:
        return solve_mfso(spec, config.mfso)
    return solve_mfne_fixed_point(spec, config.fixed_point)


def learned_equilibrium(
    config: ExperimentConfig,
    algorithm: Algorithm,
    train_spec: MfgSpec,
    eval_spec: MfgSpec,
    plays: int,
    seed: int,
    expert: Optional[EquilibriumResult] = None,
) -> EquilibriumResult:
    """
    Recover a reward from demonstrations of ``train_spec`` and re-solve it on ``eval_spec``.

    ``expert`` is the demonstrating equilibrium of ``train_spec``; it is solved when omitted.
    """
    if algorithm == Algorithm.GROUND_TRUTH:
        return solve_mfso(eval_spec, config.mfso)

    if expert is None:
        expert = solve_expert(config, train_spec)
    demos = sample_trajectories(
        train_spec, expert.flow, expert.policy, plays, config.agents_per_play, seed
    )
    dynamics = train_spec.without_reward()
    if algorithm == Algorithm.MFIRL:
        opts = config.mfirl.model_copy(update={"seed": seed})
        result = mfirl_train(
            dynamics, demos, individual_architecture(dynamics, config.reward_kind), opts
        )
        learned_spec = eval_spec.with_reward(ParametricReward(result.params, eval_spec))
        return solve_mfso(learned_spec, config.mfso)

    opts = config.plirl.model_copy(update={"seed": seed})
    result = plirl_train(estimate_per_play(demos), dynamics, opts)
    return plirl_equilibrium(result.model, eval_spec, config.plirl.inner)


def run_row(config: ExperimentConfig, key: RowKey) -> MetricsReport:
    """
    Evaluate one row; failures are recorded in the ``error`` field instead of raised.
    """
    env, variant, algorithm, plays, seed = key
    base = {"env": env, "variant": variant, "algorithm": algorithm, "plays": plays, "seed": seed}
    try:
        train_spec = _spec(config, EnvName(env), EnvVariant.ORIGINAL)
        eval_spec = _spec(config, EnvName(env), EnvVariant(variant))
        reference = solve_mfso(eval_spec, config.mfso)
        expert = solve_expert(config, train_spec)
        if not expert.converged:
            logger.warning(
                f"Row {key}: {expert.solver} expert did not converge, "
                f"exploitability {expert.exploitability:.3g}"
            )
        learned = learned_equilibrium(
            config, Algorithm(algorithm), train_spec, eval_spec, plays, seed, expert=expert
        )
        reward = eval_spec.require_reward()
        report = MetricsReport(
            **base,
            dev_policy=dev_policy(reference.policy, learned.policy),
            dev_mf=dev_mf(reference.flow, learned.flow),
            return_learned=expected_return(eval_spec, learned.flow, learned.policy, reward),
            return_expert=reference.expected_return,
            expert_converged=expert.converged,
            expert_exploitability=expert.exploitability,
        )
        logger.info(f"Row {key}: dev_mf={report.dev_mf:.4g} dev_policy={report.dev_policy:.4g}")
        return report
    except Exception as e:
        logger.error(f"Row {key} failed: {e}")
        return MetricsReport(**base, error=f"{type(e).__name__}: {e}")


def load_reports(path: Union[str, Path]) -> list[MetricsReport]:
    """Rows already present in a results CSV; an absent or empty file has none."""
    path = Path(path)
    if not path.exists() or path.stat().st_size == 0:
        return []
    frame = pd.read_csv(path, dtype={"error": "string", "expert_converged": "boolean"})
    frame = frame.astype(object).where(frame.notna(), None)
    return [MetricsReport.model_validate(row) for row in frame.to_dict(orient="records")]


def append_reports(path: Union[str, Path], reports: list[MetricsReport]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    write_header = not path.exists() or path.stat().st_size == 0
    frame = pd.DataFrame([report.as_row() for report in reports], columns=CSV_COLUMNS)
    frame.to_csv(path, mode="a", header=write_header, index=False)


def run_experiment(
    config: ExperimentConfig, output: Optional[Union[str, Path]] = None
) -> list[MetricsReport]:
    """
    Run every row of ``config`` and append each report to ``output``.

    Rows already present in ``output`` are skipped, so an interrupted run resumes where it
    stopped. Rows are written in sweep order even when ``config.workers > 1``.

    Returns:
        Reports of every row of the sweep, in sweep order
    """
    done = {report.key: report for report in load_reports(output)} if output else {}
    pending = [key for key in expand_rows(config) if key not in done]
    logger.info(
        f"Experiment: {len(pending)} rows to run, {len(done)} already present in the output"
    )

    def record(report: MetricsReport) -> None:
        done[report.key] = report
        if output is not None:
            append_reports(output, [report])

    if config.workers > 1 and len(pending) > 1:
        with ProcessPoolExecutor(
            max_workers=config.workers, initializer=configure_logging
        ) as executor:
            futures = [executor.submit(run_row, config, key) for key in pending]
            for future in futures:
                record(future.result())
    else:
        for key in pending:
            record(run_row(config, key))

    return [done[key] for key in expand_rows(config) if key in done]


def summarize_results(results: Union[str, Path, pd.DataFrame]) -> pd.DataFrame:
    """
    Median, standard deviation and variance of each metric per (env, variant, algorithm, plays).

    Failed rows are excluded. ``return_gap`` is |return_learned - return_expert|. Output
    columns are labelled ``<metric>_median``, ``<metric>_std`` and ``<metric>_var``.
    """
    frame = results if isinstance(results, pd.DataFrame) else pd.read_csv(results)
    frame = frame[frame["error"].isna()].copy()
    frame["return_gap"] = (frame["return_learned"] - frame["return_expert"]).abs()
    summary = frame.groupby(GROUP_COLUMNS)[METRIC_COLUMNS].agg(["median", "std", "var"])
    summary.columns = [f"{metric}_{stat}" for metric, stat in summary.columns]
    summary["runs"] = frame.groupby(GROUP_COLUMNS).size()
    return summary.reset_index()
