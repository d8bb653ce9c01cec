"""Exact toolkit for the two-player cooperative hat-stack game.

Finite strategies are evaluated exactly (arbitrary-precision rationals),
searched (exhaustively for small heights, by seeded hill climbing
beyond), extended to recursive strategies on unbounded stacks with
closed-form values, deformed to biased hat measures with exact
polynomial bounds, generalized to the continuous game, and rendered to
deterministic images.

Hot numeric loops run through numba when available; set
``LEVINEHAT_BACKEND=numpy`` for the pure-numpy twin implementations
(bit-identical results, slower).
"""

from ._kernels import backend
from .core import (
    BiasedMeasure,
    DeltaGrid,
    HStrategy,
    Rat,
    Stack,
    delta_grids,
    embed_check,
    load_strategy,
    save_strategy,
    stack_from_index,
    stack_index,
    win_prob,
    win_prob_biased,
    win_prob_joint_poly,
)
from .presets import K33_PAIR, K55_PAIR, K55_STRATEGY, NONSYM5_PAIR, fbh_strategy, preset_pair
from .ratpoly import Poly, RationalFn
from .recursive import (
    FBH_RECURSIVE,
    K3_RECURRENCE,
    K3_RECURSIVE,
    K5_RECURRENCE,
    K5_RECURSIVE,
    NONSYM5_RECURSIVE,
    RecurrenceCoeffs,
    RecursivePair,
    fbh_value,
    finite_decomposition_check,
    gap_lemma_check,
    joint_nonmono_poly,
    kt_parity_feasible,
    published_base,
    propagate_lower_bounds,
    propagate_rows,
    recursive_coefficients,
    recursive_value,
    required_base_prob,
)
from .search import (
    DEFAULT_SEED,
    GridState,
    SearchConfig,
    SearchResult,
    best_response,
    brute_force_optimal,
    hill_climb,
)

__version__ = "0.1.0"

__all__ = [
    "BiasedMeasure",
    "DeltaGrid",
    "HStrategy",
    "Poly",
    "Rat",
    "RationalFn",
    "RecurrenceCoeffs",
    "RecursivePair",
    "SearchConfig",
    "SearchResult",
    "Stack",
    "backend",
    "best_response",
    "brute_force_optimal",
    "delta_grids",
    "embed_check",
    "fbh_strategy",
    "fbh_value",
    "finite_decomposition_check",
    "gap_lemma_check",
    "hill_climb",
    "joint_nonmono_poly",
    "kt_parity_feasible",
    "load_strategy",
    "published_base",
    "preset_pair",
    "propagate_lower_bounds",
    "propagate_rows",
    "recursive_coefficients",
    "recursive_value",
    "required_base_prob",
    "save_strategy",
    "stack_from_index",
    "stack_index",
    "win_prob",
    "win_prob_biased",
    "win_prob_joint_poly",
]
