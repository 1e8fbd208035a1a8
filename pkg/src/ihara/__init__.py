"""Ihara zeta functions of finite graphs, free quotients and periodic graphs."""

from .errors import *  # noqa: F401,F403
from .graphs import GroupAction, PeriodicGraph, SimpleGraph, quotient, unroll, validate
from .catalog import named_actions

__version__ = "0.1.0"

__all__ = ["GroupAction", "PeriodicGraph", "SimpleGraph", "quotient", "unroll", "validate", "named_actions"]
