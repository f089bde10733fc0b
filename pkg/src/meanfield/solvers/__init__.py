"""Forward equilibrium solvers."""

from meanfield.solvers.fixed_point import flow_mse, solve_mfne_fixed_point
from meanfield.solvers.mfso import equilibrium_from_solution, solve_mfso
from meanfield.solvers.reduced_mdp import (
    GroundTruthObjective,
    SocietalObjective,
    optimize_reduced_mdp,
    reduced_mdp_value_and_grad,
)
from meanfield.solvers.storage import ExpertArtifact, load_expert, save_expert

__all__ = [
    "solve_mfne_fixed_point",
    "flow_mse",
    "solve_mfso",
    "equilibrium_from_solution",
    "SocietalObjective",
    "GroundTruthObjective",
    "optimize_reduced_mdp",
    "reduced_mdp_value_and_grad",
    "ExpertArtifact",
    "save_expert",
    "load_expert",
]
