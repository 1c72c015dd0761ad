"""Exact p-cause analysis of discrete-time Markov chains.

Rationals cross the boundary as ``"num/den"`` strings; causes and results are the same
dictionaries the command line tool prints as JSON.
"""

from ._core import (
    CauseError,
    Error,
    LimitError,
    Model,
    ModelError,
    Monitor,
    PreparedModel,
    UnsupportedError,
    brute_force_minimum,
    canonical_cause,
    compile_monitor,
    cost_of,
    level_table_csv,
    minimize,
    minimize_instantaneous,
    prepare,
    product_cause,
    verify,
)

__all__ = [
    "CauseError",
    "Error",
    "LimitError",
    "Model",
    "ModelError",
    "Monitor",
    "PreparedModel",
    "UnsupportedError",
    "brute_force_minimum",
    "canonical_cause",
    "compile_monitor",
    "cost_of",
    "level_table_csv",
    "minimize",
    "minimize_instantaneous",
    "prepare",
    "product_cause",
    "verify",
]
