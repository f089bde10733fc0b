"""Mean field game toolkit - equilibrium solvers and mean field inverse reinforcement learning."""

__version__ = "1.0.0"
__author__ = "meanfield-irl developers"
__license__ = "MIT"
