"""Command-line interface for the mean field toolkit."""

import sys
from pathlib import Path
from typing import NoReturn, Optional

import click
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from meanfield.core.dynamics import expected_return
from meanfield.demos.estimators import estimate_per_play
from meanfield.demos.sampling import sample_trajectories
from meanfield.demos.storage import load_demos, save_demos
from meanfield.envs.catalog import describe_env, list_envs, make_env
from meanfield.evaluation.metrics import dev_mf, dev_policy
from meanfield.evaluation.orchestrator import run_experiment, summarize_results
from meanfield.irl.mfirl import mfirl_train
from meanfield.irl.plirl import plirl_equilibrium, plirl_train, societal_model
from meanfield.irl.training_log import write_training_log
from meanfield.models.experiment import ExperimentConfig, MetricsReport, SolverKind
from meanfield.models.options import (
    DynamicsMode,
    FixedPointOptions,
    MfirlOptions,
    PlirlOptions,
)
from meanfield.models.reward import RewardKind
from meanfield.models.spec import EnvName, EnvVariant
from meanfield.rewards.networks import ParametricReward, individual_architecture
from meanfield.rewards.storage import load_reward, save_reward
from meanfield.solvers.fixed_point import solve_mfne_fixed_point
from meanfield.solvers.mfso import solve_mfso
from meanfield.solvers.storage import load_expert, save_expert
from meanfield.utils.config import get_settings
from meanfield.utils.errors import MeanFieldError
from meanfield.utils.logger import get_logger

logger = get_logger(__name__)
settings = get_settings()
console = Console()

ENV_CHOICE = click.Choice([env.value for env in EnvName])
VARIANT_CHOICE = click.Choice([variant.value for variant in EnvVariant])


def _fail(error: Exception) -> NoReturn:
    console.print(f"[bold red]✗ Error: {error}[/bold red]")
    raise click.Abort() from error


@click.group()
def main() -> None:
    """Mean field game toolkit - equilibria, demonstrations and reward recovery."""
    pass


@main.group()
def env() -> None:
    """Inspect the benchmark environments."""
    pass


@env.command("list")
def env_list() -> None:
    """List the benchmark environments."""
    table = Table(title="Environments")
    table.add_column("Name", style="cyan")
    table.add_column("|S|", style="green")
    table.add_column("|A|", style="green")
    table.add_column("Cooperative", style="green")

    for name in list_envs():
        description = describe_env(name)
        table.add_row(
            name.value,
            str(description.num_states),
            str(description.num_actions),
            "yes" if description.cooperative else "no",
        )

    console.print(table)


@env.command("describe")
@click.argument("name", type=ENV_CHOICE)
@click.option("--variant", type=VARIANT_CHOICE, default="original", help="Dynamics variant")
@click.option("--table", "as_table", is_flag=True, help="Print a table instead of JSON")
@click.option("--json", "as_json", is_flag=True, hidden=True, help="Print JSON (the default)")
def env_describe(name: str, variant: str, as_table: bool, as_json: bool) -> None:
    """Describe one environment variant as JSON."""
    description = describe_env(name, variant)
    if as_json or not as_table:
        click.echo(description.model_dump_json(indent=2))
        return

    table = Table(title=f"{name} ({variant})")
    table.add_column("Property", style="cyan")
    table.add_column("Value", style="green")
    table.add_row("States", ", ".join(description.state_labels))
    table.add_row("Actions", ", ".join(description.action_labels))
    table.add_row("Horizon", str(description.horizon))
    table.add_row("Discount", str(description.discount))
    table.add_row("Cooperative", "yes" if description.cooperative else "no")
    table.add_row("mu0", ", ".join(f"{p:.3g}" for p in description.initial_mean_field))
    for key, value in description.parameters.items():
        table.add_row(key, f"{value:.6g}")

    console.print(table)


@main.command()
@click.option("--env", "env_name", type=ENV_CHOICE, required=True, help="Environment")
@click.option("--variant", type=VARIANT_CHOICE, default="original", help="Dynamics variant")
@click.option(
    "--solver",
    type=click.Choice([solver.value for solver in SolverKind]),
    default="mfne",
    help="Equilibrium concept",
)
@click.option("--horizon", type=int, default=None, help="Override the horizon T")
@click.option(
    "--damping",
    type=click.FloatRange(0.0, 1.0, max_open=True),
    default=None,
    help="MFNE flow damping (default from MEANFIELD_FIXED_POINT_EXPERT_DAMPING)",
)
@click.option("--beta-soft", type=float, default=None, help="Boltzmann best responses for MFNE")
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="expert.json path")
def expert(
    env_name: str,
    variant: str,
    solver: str,
    horizon: Optional[int],
    damping: Optional[float],
    beta_soft: Optional[float],
    out: str,
) -> None:
    """Solve the ground-truth equilibrium of an environment."""
    damping = damping if damping is not None else settings.fixed_point_expert_damping
    console.print(f"[bold blue]Solving {solver.upper()} for {env_name} ({variant})...[/bold blue]")

    try:
        spec = make_env(env_name, variant, horizon=horizon)
        with console.status("[bold green]Solving...[/bold green]"):
            if solver == SolverKind.MFSO.value:
                result = solve_mfso(spec)
            else:
                opts = FixedPointOptions(damping=damping, beta_soft=beta_soft)
                result = solve_mfne_fixed_point(spec, opts)
        save_expert(result, spec, out)
    except (MeanFieldError, ValidationError) as e:
        _fail(e)

    table = Table(title="Expert Equilibrium")
    table.add_column("Metric", style="cyan")
    table.add_column("Value", style="green")
    table.add_row("Expected Return", f"{result.expected_return:.6g}")
    table.add_row("Exploitability", f"{result.exploitability:.3e}")
    table.add_row("Iterations", str(result.iterations))
    table.add_row("Converged", str(result.converged))
    console.print(table)
    if not result.converged:
        console.print("[yellow]⚠ The solver did not converge[/yellow]")
    console.print(f"[bold green]✓ Saved to {out}[/bold green]")


@main.command()
@click.option("--expert", "expert_path", type=click.Path(exists=True), required=True)
@click.option("--plays", type=int, required=True, help="Number of game plays")
@click.option("--agents", type=int, default=None, help="Agents per game play")
@click.option("--seed", type=int, default=0, help="Random seed")
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="demos.jsonl path")
def sample(expert_path: str, plays: int, agents: Optional[int], seed: int, out: str) -> None:
    """Sample demonstrations from a saved expert."""
    agents = agents if agents is not None else settings.agents_per_play
    try:
        artifact = load_expert(expert_path)
        spec = make_env(
            artifact.env, artifact.variant, horizon=artifact.horizon, discount=artifact.discount
        )
        demos = sample_trajectories(
            spec, artifact.result.flow, artifact.result.policy, plays, agents, seed
        )
        save_demos(demos, out)
    except (MeanFieldError, ValidationError) as e:
        _fail(e)

    console.print(
        f"[bold green]✓ Sampled {demos.num_trajectories} trajectories to {out}[/bold green]"
    )


@main.group()
def train() -> None:
    """Recover rewards from demonstrations."""
    pass


@train.command("mfirl")
@click.option("--demos", "demos_path", type=click.Path(exists=True), required=True)
@click.option("--env", "env_name", type=ENV_CHOICE, required=True, help="Environment")
@click.option("--epochs", type=int, default=None, help="Training epochs")
@click.option("--lr", type=float, default=None, help="Adam learning rate")
@click.option("--beta", type=float, default=None, help="Boltzmann inverse temperature")
@click.option(
    "--trunc", "--truncation", "trunc", type=int, default=None, help="Truncation horizon H"
)
@click.option(
    "--mode",
    "--dynamics",
    "mode",
    type=click.Choice([mode.value for mode in DynamicsMode]),
    default="exact",
    help="Exact or Monte-Carlo next-state expectations",
)
@click.option(
    "--arch",
    "--kind",
    "arch",
    type=click.Choice([kind.value for kind in RewardKind]),
    default="mlp",
    help="Reward model family",
)
@click.option("--seed", type=int, default=0, help="Random seed")
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="reward.json path")
@click.option("--log", "log_path", type=click.Path(dir_okay=False), help="Training log CSV")
def train_mfirl(
    demos_path: str,
    env_name: str,
    epochs: Optional[int],
    lr: Optional[float],
    beta: Optional[float],
    trunc: Optional[int],
    mode: str,
    arch: str,
    seed: int,
    out: str,
    log_path: Optional[str],
) -> None:
    """Train an individual reward with MFIRL."""
    overrides = {"epochs": epochs, "lr": lr, "beta": beta}
    try:
        demos = load_demos(demos_path)
        spec = make_env(env_name, demos.variant, horizon=demos.horizon).without_reward()
        opts = MfirlOptions(
            **{key: value for key, value in overrides.items() if value is not None},
            truncation_horizon=trunc,
            dynamics_mode=DynamicsMode(mode),
            seed=seed,
        )
        console.print(
            f"[bold blue]Training MFIRL on {env_name} for {opts.epochs} epochs...[/bold blue]"
        )
        architecture = individual_architecture(spec, RewardKind(arch))
        with console.status("[bold green]Training...[/bold green]"):
            result = mfirl_train(spec, demos, architecture, opts)
        save_reward(
            result.params,
            out,
            spec.num_states,
            spec.num_actions,
            metadata={
                "env": env_name,
                "algorithm": "mfirl",
                "plays": demos.plays,
                "seed": seed,
                "epochs": opts.epochs,
            },
        )
        if log_path:
            write_training_log(result.log, log_path)
    except (MeanFieldError, ValidationError) as e:
        _fail(e)

    console.print(f"Final objective: {result.log[-1].objective:.6g}")
    console.print(f"[bold green]✓ Saved reward to {out}[/bold green]")


@train.command("plirl")
@click.option("--demos", "demos_path", type=click.Path(exists=True), required=True)
@click.option("--env", "env_name", type=ENV_CHOICE, required=True, help="Environment")
@click.option("--epochs", type=int, default=None, help="Outer epochs")
@click.option("--lr", type=float, default=None, help="Outer Adam learning rate")
@click.option("--seed", type=int, default=0, help="Random seed")
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Societal reward path")
@click.option("--log", "log_path", type=click.Path(dir_okay=False), help="Training log CSV")
def train_plirl(
    demos_path: str,
    env_name: str,
    epochs: Optional[int],
    lr: Optional[float],
    seed: int,
    out: str,
    log_path: Optional[str],
) -> None:
    """Train a societal reward with PLIRL."""
    overrides = {"outer_epochs": epochs, "outer_lr": lr}
    try:
        demos = load_demos(demos_path)
        spec = make_env(env_name, demos.variant, horizon=demos.horizon).without_reward()
        opts = PlirlOptions(
            **{key: value for key, value in overrides.items() if value is not None}, seed=seed
        )
        console.print(
            f"[bold blue]Training PLIRL on {env_name} for {opts.outer_epochs} epochs...[/bold blue]"
        )
        with console.status("[bold green]Training...[/bold green]"):
            result = plirl_train(estimate_per_play(demos), spec, opts)
        save_reward(
            result.model.params,
            out,
            spec.num_states,
            spec.num_actions,
            metadata={"env": env_name, "algorithm": "plirl", "plays": demos.plays, "seed": seed},
            target="societal",
        )
        if log_path:
            write_training_log(result.log, log_path)
    except (MeanFieldError, ValidationError) as e:
        _fail(e)

    console.print(f"Final margin: {result.log[-1].objective:.6g}")
    console.print(f"[bold green]✓ Saved societal reward to {out}[/bold green]")


@main.command("eval")
@click.option("--reward", "reward_path", type=click.Path(exists=True), required=True)
@click.option("--env", "env_name", type=ENV_CHOICE, required=True, help="Environment")
@click.option("--variant", type=VARIANT_CHOICE, default="original", help="Dynamics variant")
@click.option("--horizon", type=int, default=None, help="Override the horizon T")
@click.option("--out", type=click.Path(dir_okay=False), help="Write the report as JSON")
def evaluate(
    reward_path: str, env_name: str, variant: str, horizon: Optional[int], out: Optional[str]
) -> None:
    """Compare the social optimum of a learned reward with the ground truth."""
    try:
        artifact = load_reward(reward_path)
        spec = make_env(env_name, variant, horizon=horizon)
        with console.status("[bold green]Solving equilibria...[/bold green]"):
            reference = solve_mfso(spec)
            if artifact.target == "societal":
                learned = plirl_equilibrium(societal_model(artifact.params, spec), spec)
            else:
                learned_spec = spec.with_reward(ParametricReward(artifact.params, spec))
                learned = solve_mfso(learned_spec)
        reward = spec.require_reward()
        report = MetricsReport(
            env=EnvName(env_name),
            variant=EnvVariant(variant),
            algorithm=artifact.metadata.get("algorithm", "mfirl"),
            plays=int(artifact.metadata.get("plays", 0)),
            seed=int(artifact.metadata.get("seed", 0)),
            dev_policy=dev_policy(reference.policy, learned.policy),
            dev_mf=dev_mf(reference.flow, learned.flow),
            return_learned=expected_return(spec, learned.flow, learned.policy, reward),
            return_expert=reference.expected_return,
        )
    except (MeanFieldError, ValidationError) as e:
        _fail(e)

    table = Table(title=f"Evaluation on {env_name} ({variant})")
    table.add_column("Metric", style="cyan")
    table.add_column("Value", style="green")
    table.add_row("dev_policy", f"{report.dev_policy:.6g}")
    table.add_row("dev_mf", f"{report.dev_mf:.6g}")
    table.add_row("Return (learned)", f"{report.return_learned:.6g}")
    table.add_row("Return (expert)", f"{report.return_expert:.6g}")
    console.print(table)

    if out:
        Path(out).write_text(report.model_dump_json(indent=2), encoding="utf-8")
        console.print(f"[bold green]✓ Saved report to {out}[/bold green]")


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), required=True)
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="results.csv path")
@click.option("--summary", type=click.Path(dir_okay=False), help="Aggregated summary CSV")
def experiment(config_path: str, out: str, summary: Optional[str]) -> None:
    """Run a full sweep; exits non-zero if any row failed."""
    try:
        text = Path(config_path).read_text(encoding="utf-8")
        config = ExperimentConfig.model_validate_json(text)
    except (MeanFieldError, ValidationError) as e:
        _fail(e)

    console.print(f"[bold blue]Running experiment {config_path}...[/bold blue]")
    reports = run_experiment(config, out)
    failed = [report for report in reports if report.error is not None]

    table = Table(title="Experiment")
    table.add_column("Metric", style="cyan")
    table.add_column("Value", style="green")
    table.add_row("Rows", str(len(reports)))
    table.add_row("Failed", str(len(failed)))
    console.print(table)

    if summary:
        summarize_results(out).to_csv(summary, index=False)
        console.print(f"[bold green]✓ Saved summary to {summary}[/bold green]")

    if failed:
        for report in failed:
            console.print(f"[red]  • {report.key}: {report.error}[/red]")
        sys.exit(1)
    console.print(f"[bold green]✓ Results written to {out}[/bold green]")


@main.command()
def info() -> None:
    """Display toolkit settings."""
    table = Table(title="Mean Field Toolkit - Settings")
    table.add_column("Property", style="cyan")
    table.add_column("Value", style="green")

    table.add_row("Default Horizon", str(settings.default_horizon))
    table.add_row("Default Discount", str(settings.default_discount))
    table.add_row("Agents per Play", str(settings.agents_per_play))
    table.add_row("MFNE Max Iterations", str(settings.fixed_point_max_iters))
    table.add_row("Expert MFNE Damping", str(settings.fixed_point_expert_damping))
    table.add_row("MFSO Learning Rate", str(settings.mfso_learning_rate))
    table.add_row("MFIRL Epochs", str(settings.mfirl_epochs))
    table.add_row("MFIRL Learning Rate", str(settings.mfirl_learning_rate))
    table.add_row("PLIRL Outer Epochs", str(settings.plirl_outer_epochs))
    table.add_row("Reward Hidden Width", str(settings.reward_hidden_width))
    table.add_row("Experiment Workers", str(settings.experiment_workers))
    table.add_row("Log Level", settings.log_level)

    console.print(table)


if __name__ == "__main__":
    main()
