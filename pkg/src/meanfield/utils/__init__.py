"""Utility modules for the mean field toolkit."""

from meanfield.utils.config import get_settings
from meanfield.utils.logger import get_logger

__all__ = ["get_settings", "get_logger"]
