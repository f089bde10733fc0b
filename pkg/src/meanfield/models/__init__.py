"""Domain models for the mean field toolkit."""

from meanfield.models.base import ArrayModel
from meanfield.models.demos import DemoMetadata, DemoSet, EmpiricalEstimates, Trajectory
from meanfield.models.experiment import (
    Algorithm,
    ExperimentConfig,
    MetricsReport,
    SolverKind,
)
from meanfield.models.game import (
    ActionValueTable,
    MeanField,
    MeanFieldFlow,
    PerStepPolicy,
    TimeVaryingPolicy,
)
from meanfield.models.options import (
    DynamicsMode,
    FixedPointOptions,
    MfirlOptions,
    MfsoOptions,
    PlirlOptions,
)
from meanfield.models.oracles import (
    ConstantReward,
    RewardOracle,
    TabularKernel,
    TabularReward,
    TransitionKernel,
)
from meanfield.models.results import (
    EquilibriumResult,
    GradientTables,
    MfirlResult,
    PlirlResult,
    ReducedMdpSolution,
    TrainingLogEntry,
)
from meanfield.models.reward import (
    AdamState,
    RewardArchitecture,
    RewardKind,
    RewardParams,
    SocietalRewardModel,
)
from meanfield.models.spec import EnvName, EnvVariant, MfgSpec

__all__ = [
    "ArrayModel",
    "MeanField",
    "MeanFieldFlow",
    "PerStepPolicy",
    "TimeVaryingPolicy",
    "ActionValueTable",
    "TransitionKernel",
    "RewardOracle",
    "TabularKernel",
    "TabularReward",
    "ConstantReward",
    "MfgSpec",
    "EnvName",
    "EnvVariant",
    "Trajectory",
    "DemoMetadata",
    "DemoSet",
    "EmpiricalEstimates",
    "RewardKind",
    "RewardArchitecture",
    "RewardParams",
    "AdamState",
    "SocietalRewardModel",
    "FixedPointOptions",
    "MfsoOptions",
    "MfirlOptions",
    "PlirlOptions",
    "DynamicsMode",
    "EquilibriumResult",
    "ReducedMdpSolution",
    "MfirlResult",
    "PlirlResult",
    "GradientTables",
    "TrainingLogEntry",
    "SolverKind",
    "Algorithm",
    "ExperimentConfig",
    "MetricsReport",
]
