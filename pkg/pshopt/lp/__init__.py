from .program import LinearProgram, LpSolution, Sense, Status
from .solve import solve_lp, set_default_backend
from .mip import solve_binary_mip
from .lpformat import lp_format, write_lp_format
