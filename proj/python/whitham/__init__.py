"""Periodic traveling waves of bidirectional Whitham models."""

from ._core import (
    Branch,
    NumericalError,
    Point,
    ValidationError,
    WhithamError,
    WhithamIOError,
    c_kappa,
    continue_branch,
    evolve,
    khat,
    positive_branch_point,
    refine,
    run,
    spectrum,
    tail_energy,
)

__all__ = [
    "Branch",
    "NumericalError",
    "Point",
    "ValidationError",
    "WhithamError",
    "WhithamIOError",
    "c_kappa",
    "continue_branch",
    "evolve",
    "khat",
    "positive_branch_point",
    "refine",
    "run",
    "spectrum",
    "tail_energy",
]
