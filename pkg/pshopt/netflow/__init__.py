from .builder import NetworkLpIndex, build_network_lp
from .extract import extract_path, decompose, path_cost
from .solve import solve_network_lp
