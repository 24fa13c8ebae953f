from .oracle import OracleLimits, OracleResult, admissible, brute_force_oracle, mode_sequences, price_sequence
from .methods import METHODS, MethodResult, run_method
from .experiments import (ExperimentSpec, experiment_from_dict, fuzz_agreement, load_experiment, run_experiment,
                          scale_volatility)
from .reports import gap_percent, plot_scaling, read_table, terminal_plot, write_table
