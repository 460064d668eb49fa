"""Density of the positivity set of linear recurrence sequences, in exact arithmetic."""

from .density import (
    DensityReport,
    approximate_density,
    arccos_rational_multiple,
    decide_density_one,
    decide_density_zero,
    decide_rational_one_pair,
    finite_positivity_diagonalisable,
    grid_density,
    monte_carlo_density,
    monte_carlo_sequence_density,
)
from .errors import DegreeCapExceeded, EndpointRootError, LoopSyntaxError, LrsError, PrecisionError, Undecided
from .estimator import PositivityDensity
from .loop import LinearLoop, compile_loop, loop_to_lrs, parse_loop, to_source
from .lrs import Lrs, evaluate, minimize_order, power_sum_decomposition, split_subsequences, terms
from .normalize import compute_P1, compute_P2, normalize, preprocess, relation_basis, verify_relation
from .oracle import SignProfile, empirical_density, sign_profile
from .trigpoly import TrigPoly

__version__ = "0.1.0"

__all__ = [
    "DegreeCapExceeded",
    "DensityReport",
    "EndpointRootError",
    "LinearLoop",
    "LoopSyntaxError",
    "Lrs",
    "LrsError",
    "PositivityDensity",
    "PrecisionError",
    "SignProfile",
    "TrigPoly",
    "Undecided",
    "approximate_density",
    "arccos_rational_multiple",
    "compile_loop",
    "compute_P1",
    "compute_P2",
    "decide_density_one",
    "decide_density_zero",
    "decide_rational_one_pair",
    "empirical_density",
    "evaluate",
    "finite_positivity_diagonalisable",
    "grid_density",
    "loop_to_lrs",
    "minimize_order",
    "monte_carlo_density",
    "monte_carlo_sequence_density",
    "normalize",
    "parse_loop",
    "power_sum_decomposition",
    "preprocess",
    "relation_basis",
    "sign_profile",
    "split_subsequences",
    "terms",
    "to_source",
    "verify_relation",
]
