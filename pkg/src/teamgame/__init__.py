"""Adversarial team games: poker generators, the coordinator transformation,
CFR solvers and a team-maxmin oracle."""

from .efg import (GameTree, Kind, PlayerId, TreeBuilder, count_nodes, dump_lines,
                  expected_value, random_profile, single_terminal, uniform_profile, validate)
from .games import InstanceError, InstanceSpec, generate, parse_instance
from .oracle import (enumerate_plans, map_profile, payoff_matrix, solve_matrix_game,
                     solve_tmecor, verify_equivalence)
from .refine import merge_infosets, prune, transform
from .solve import best_response_value, exploitability, profile_value, solve
from .transform import check_pipb, mpta

__all__ = [
    "GameTree", "Kind", "PlayerId", "TreeBuilder", "count_nodes", "dump_lines",
    "expected_value", "random_profile", "single_terminal", "uniform_profile", "validate",
    "InstanceError", "InstanceSpec", "generate", "parse_instance",
    "enumerate_plans", "map_profile", "payoff_matrix", "solve_matrix_game", "solve_tmecor",
    "verify_equivalence", "merge_infosets", "prune", "transform",
    "best_response_value", "exploitability", "profile_value", "solve",
    "check_pipb", "mpta",
]
