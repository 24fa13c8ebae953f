from .reduced import ReducedState, ReducedArc, ReducedNetwork, build_reduced_network
from .relaxation import build_relaxation, solve_relaxation
from .skeleton import build_skeleton_lp, evaluate_skeleton, skeleton_states
from .greedy import greedy_completion, recoverable_windows, upper_bound_completion
from .search import (BnbConfig, BnbNode, BnbResult, BnbStats, TraceLog, branch, make_root,
                     relax_lower_bound, solve_bnb)
from .commitment import CommitmentBound, skeleton_modes
