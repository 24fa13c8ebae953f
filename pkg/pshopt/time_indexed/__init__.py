from .schedule import Schedule, CostBreakdown, make_schedule, evaluate_schedule_cost, audit, offline_schedule
from .builder import Layout, layout, build_time_indexed, extract_schedule, solve_time_indexed, relaxation_bound
