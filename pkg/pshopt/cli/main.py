"""
pshopt command line: solve an instance, run an experiment, check an
instance against the brute-force oracle or validate an instance file.
"""

import logging
import os
import sys

import attr

from pshopt.errors import (GridExcludesBoundary, Infeasible, LimitsExceeded, MalformedDocument, MissingField,
                           NoFeasiblePath, PshoptError, TimeBudgetExceeded, UnitRangeError)
from pshopt.lp import set_default_backend

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INFEASIBLE = 2
EXIT_BUDGET = 3
EXIT_INPUT = 4

INPUT_ERRORS = (MalformedDocument, MissingField, UnitRangeError, GridExcludesBoundary, LimitsExceeded,
                FileNotFoundError)

STATUS_EXIT = {
    'ok': EXIT_OK,
    'infeasible': EXIT_INFEASIBLE,
    'budget': EXIT_BUDGET,
    'limits': EXIT_INPUT,
}


def exit_code(error):
    if isinstance(error, (Infeasible, NoFeasiblePath)):
        return EXIT_INFEASIBLE
    if isinstance(error, TimeBudgetExceeded):
        return EXIT_BUDGET
    if isinstance(error, INPUT_ERRORS):
        return EXIT_INPUT
    return EXIT_FAILURE


def _settings(args):
    from pshopt.settings import Settings
    overrides = {name: getattr(args, name, None)
                 for name in ('lp_backend', 'mip_backend', 'threads', 'time_budget', 'dump_lp', 'bnb_log')}
    if getattr(args, 'no_cache', False):
        overrides['use_cache'] = False
    if getattr(args, 'strict_terminal_h', False):
        overrides['strict_terminal_h'] = True
    settings = Settings.from_env(**overrides)
    set_default_backend(settings.lp_backend)
    return settings


def _instance(args):
    from pshopt.instance import load_instance, require_valid
    inst = load_instance(args.instance)
    if getattr(args, 'jmax', None) is not None:
        inst = attr.evolve(inst, j_max=args.jmax)
    if getattr(args, 'hsc', False):
        inst = attr.evolve(inst, hsc_enabled=True)
    return require_valid(inst)


def _summary(label, schedule, objective):
    b = schedule.breakdown
    print(f"{label}: objective {objective:.6f} (net profit {-objective:.2f})")
    print(f"  modes     {schedule.mode_string()}")
    print(f"  switches  {schedule.switches}")
    print(f"  energy {b.energy_net:.2f}  start-up {b.startup:.2f}  shut-down {b.shutdown:.2f}  "
          f"physical {b.physical:.2f}  water value {b.water_value:.2f}")


def cmd_solve(args):
    from pshopt.harness.methods import GRID_METHODS, run_method
    from pshopt.harness.reports import terminal_plot
    settings = _settings(args)
    inst = _instance(args)
    if args.grid_refine != 1 and args.method not in GRID_METHODS:
        logger.warning("--grid-refine has no effect on method %s", args.method)
    result = run_method(args.method, inst, settings, args.grid_refine)
    if result.schedule is None:
        print(f"{args.method}: {result.status} {result.extra.get('reason', '')}".rstrip())
        return STATUS_EXIT.get(result.status, EXIT_FAILURE)
    _summary(args.method, result.schedule, result.audited if result.audited is not None else result.objective)
    if result.status == 'budget':
        print(f"  time budget exceeded, gap {result.extra.get('gap', float('inf')):.3%}")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, f"{args.method}_schedule.csv")
        result.schedule.to_csv(path)
        print(f"  schedule written to {path}")
    if args.plot:
        print(terminal_plot(result.schedule))
    return STATUS_EXIT.get(result.status, EXIT_FAILURE)


def cmd_experiment(args):
    from pshopt.harness.experiments import load_experiment, run_experiment
    settings = _settings(args)
    spec = load_experiment(args.spec)
    if args.out:
        spec = attr.evolve(spec, out=args.out)
    for path in run_experiment(spec, settings):
        print(path)
    return EXIT_OK


def cmd_oracle(args):
    from pshopt.harness.oracle import OracleLimits, brute_force_oracle
    settings = _settings(args)
    inst = _instance(args)
    limits = OracleLimits(T_max=args.max_horizon, seq_max=args.max_sequences)
    result = brute_force_oracle(inst, limits, lp_backend=settings.lp_backend)
    _summary(f"oracle ({result.sequences} sequences)", result.schedule, result.value)
    return EXIT_OK


def cmd_validate(args):
    from pshopt.instance import build_grid, load_instance, validate
    inst = load_instance(args.instance)
    report = validate(inst)
    for line in report:
        print(f"invalid: {line}")
    if report:
        return EXIT_INPUT
    grid = build_grid(inst)
    print(f"{inst.name or args.instance}: T={inst.horizon}, modes {''.join(m.name[0] for m in inst.modes)}, "
          f"{len(grid.reservoir_points)} reservoir and {len(grid.ramp_points)} ramp grid points")
    return EXIT_OK


def main(argv=None):
    import argparse
    from pshopt.harness.methods import METHODS
    from pshopt.settings import LP_BACKENDS, MIP_BACKENDS

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--debug', '-d', action='store_true', help='Enable debug output')
    common.add_argument('--verbose', '-v', action='store_true', help='Report solver phases')
    common.add_argument('--lp-backend', choices=LP_BACKENDS, help='LP solver (default: highs)')
    common.add_argument('--mip-backend', choices=MIP_BACKENDS, help='MIP solver of the time-indexed model (default: bnb)')
    common.add_argument('--threads', type=int, help='Worker processes for the arc costs')
    common.add_argument('--no-cache', action='store_true', help='Ignore the arc-cost cache')
    common.add_argument('--strict-terminal-h', action='store_true',
                        help='Pin the ramping boundary at every event end')
    common.add_argument('--time-budget', type=float, help='Seconds granted to the MIP and the B&B')

    parser = argparse.ArgumentParser(description='Single-unit pumped-storage scheduling.')
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    solve = sub.add_parser('solve', parents=[common], help='Solve an instance with one method')
    solve.add_argument('--instance', '-i', required=True, help='Instance JSON file')
    solve.add_argument('--method', '-m', choices=METHODS, default='bnb', help='Solution method (default: %(default)s)')
    solve.add_argument('--grid-refine', type=int, default=1, metavar='K', help='Reservoir grid refinement (default: %(default)s)')
    solve.add_argument('--jmax', type=int, help='Override the longest online event')
    solve.add_argument('--hsc', action='store_true', help='Enable the short-circuit mode')
    solve.add_argument('--out', '-o', help='Directory for the schedule CSV')
    solve.add_argument('--dump-lp', metavar='FILE', help='Write the solved LP/MIP model in LP format')
    solve.add_argument('--bnb-log', metavar='FILE', help='Write the B&B node trace as CSV')
    solve.add_argument('--plot', action='store_true', help='Plot the reservoir trajectory in the terminal')
    solve.set_defaults(func=cmd_solve)

    experiment = sub.add_parser('experiment', parents=[common], help='Run an experiment spec')
    experiment.add_argument('--spec', '-s', required=True, help='Experiment JSON file')
    experiment.add_argument('--out', '-o', help='Override the output directory')
    experiment.set_defaults(func=cmd_experiment)

    oracle = sub.add_parser('oracle', parents=[common], help='Brute-force optimum of a small instance')
    oracle.add_argument('--instance', '-i', required=True, help='Instance JSON file')
    oracle.add_argument('--max-horizon', type=int, default=8, help='Largest horizon accepted (default: %(default)s)')
    oracle.add_argument('--max-sequences', type=int, default=20000,
                        help='Most mode sequences priced (default: %(default)s)')
    oracle.set_defaults(func=cmd_oracle)

    validate = sub.add_parser('validate', parents=[common], help='Check an instance file')
    validate.add_argument('--instance', '-i', required=True, help='Instance JSON file')
    validate.set_defaults(func=cmd_validate)

    args = parser.parse_args(argv)

    if args.debug:
        logging.basicConfig(format='%(levelname)s:%(message)s', level='DEBUG')
    elif args.verbose:
        logging.basicConfig(format='%(levelname)s:%(message)s', level='INFO')
    else:
        logging.basicConfig(format='%(levelname)s:%(message)s', level='WARNING')

    try:
        return args.func(args)
    except PshoptError as e:
        print(f"error: {e}", file=sys.stderr)
        return exit_code(e)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except KeyboardInterrupt:
        print('\nInterrupted.', file=sys.stderr)
        return 130


if __name__ == "__main__":
    sys.exit(main())
