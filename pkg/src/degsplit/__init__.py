"""Degree splittings of typed multigraphs, arbitrary red-blue splittings and
unbalanced orientations, with independent checkers and brute-force oracles."""

from .graph import (
    B,
    C,
    O,
    R,
    Labeling,
    Orientation,
    RangeError,
    TypedMultiGraph,
    build_graph,
    gen_random_max_degree,
    gen_random_regular,
    gen_structured,
    read_json,
    write_json,
)
from .orient import derive_params, empirical_means, lll_orient
from .pi import pi_plan, solve_pi
from .splitting import balanced_split, eps_split, exact_split, lemma31_split, reduce_degree
from .subroutines import CostLedger
from .verify import (
    brute_force_labeling,
    brute_force_orientation,
    check_eq1,
    check_eq2,
    check_lemma31,
    check_pi,
    check_types,
    check_unbalanced,
)

__all__ = [
    "B",
    "C",
    "O",
    "R",
    "CostLedger",
    "Labeling",
    "Orientation",
    "RangeError",
    "TypedMultiGraph",
    "balanced_split",
    "brute_force_labeling",
    "brute_force_orientation",
    "build_graph",
    "check_eq1",
    "check_eq2",
    "check_lemma31",
    "check_pi",
    "check_types",
    "check_unbalanced",
    "derive_params",
    "empirical_means",
    "eps_split",
    "exact_split",
    "gen_random_max_degree",
    "gen_random_regular",
    "gen_structured",
    "lemma31_split",
    "lll_orient",
    "pi_plan",
    "read_json",
    "reduce_degree",
    "solve_pi",
    "write_json",
]
