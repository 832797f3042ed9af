"""Wireless link-activation simulator with queue-driven power control and
outage-masked GCN training."""

from .errors import IngestionError, ParameterError, SolverError

__all__ = ["IngestionError", "ParameterError", "SolverError"]
__version__ = "0.1.0"
