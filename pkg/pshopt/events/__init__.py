from .state import EventState, EventAction, origin, enumerate_events, transition, boundary_cost, offline_trajectory
from .blocks import (RampRule, Ref, BlockBoundary, BlockResult, BlockVars, add_block_lp, ramp_end_rule, read_block,
                     solve_block, solve_block_lp, solve_generating_block, solve_pumping_block, solve_offline_block,
                     solve_hsc_block)
from .stitch import stitch
from .network import Arc, EventNetwork, build_grid_network, node_state, screen
from .arc_costs import SharedArcCosts, precompute_arc_costs
from .dp import DpResult, solve_dp, backward_values, optimal_path, path_schedule
