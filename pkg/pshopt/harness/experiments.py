"""
Experiment runners. Each kind sweeps one parameter over a ladder, runs
the selected methods at every rung and writes one CSV table (and, for
horizon scaling, one SVG plot) into the output directory. Runs are
sequential so that CPU columns are comparable.
"""

import json
import logging
import os

import attr
import numpy as np
import pandas as pd

from pshopt.errors import MalformedDocument, MissingField
from pshopt.events import SharedArcCosts
from pshopt.harness.methods import METHODS, run_method
from pshopt.harness.reports import gap_percent, plot_scaling, write_table
from pshopt.instance import build_grid, load_instance, random_instance
from pshopt.modes import Mode
from pshopt.settings import DEFAULT_SETTINGS
from pshopt.time_indexed import relaxation_bound

logger = logging.getLogger(__name__)

KINDS = ('exactness', 'grid_refinement', 'volatility', 'jmax_sweep',
         'horizon_scaling', 'hsc', 'oracle_fuzz')

DEFAULT_METHODS = {
    'exactness': ('dp', 'gridlp', 'bnb_grid', 'bnb', 'milp'),
    'grid_refinement': ('gridlp',),
    'volatility': ('gridlp', 'bnb', 'milp'),
    'jmax_sweep': ('bnb',),
    'horizon_scaling': ('gridlp', 'bnb', 'milp'),
    'hsc': ('milp', 'bnb', 'gridlp'),
    'oracle_fuzz': ('oracle', 'milp', 'bnb', 'dp', 'gridlp'),
}

DEFAULT_LADDER = {
    'grid_refinement': (1, 2, 5, 10, 20),
    'volatility': (0.5, 1.0, 1.5, 2.0),
    'jmax_sweep': (1, 2, 3, 4, 6),
    'horizon_scaling': (24, 48, 96, 168, 240),
}

#: relative tolerance of the cross-method comparisons
AGREEMENT_TOL = 1e-6


def _kind(instance, attribute, value):
    if value not in KINDS:
        raise MalformedDocument(f"experiment kind must be one of {KINDS}, got {value!r}")


def _methods(instance, attribute, value):
    unknown = [m for m in value if m not in METHODS]
    if unknown:
        raise MalformedDocument(f"unknown methods {unknown}, expected a subset of {METHODS}")


def _ladder(instance, attribute, value):
    if any(v <= 0 for v in value):
        raise MalformedDocument(f"ladder values must be positive, got {list(value)}")


@attr.s(frozen=True)
class ExperimentSpec():

    kind = attr.ib(type=str, validator=_kind)
    #: instance document (not used by oracle_fuzz)
    instance = attr.ib(default=None)
    methods = attr.ib(type=tuple, default=(), converter=tuple, validator=_methods)
    #: refinements, volatility scales, J_max values or horizons
    ladder = attr.ib(type=tuple, default=(), converter=tuple, validator=_ladder)
    seed = attr.ib(type=int, default=0)
    out = attr.ib(type=str, default='results')
    #: number of random instances (oracle_fuzz)
    count = attr.ib(type=int, default=50)
    #: horizon of the random instances (oracle_fuzz)
    horizon = attr.ib(type=int, default=4)
    #: grid refinement used by grid methods outside the refinement sweep
    refinement = attr.ib(type=int, default=1)
    name = attr.ib(type=str, default='')

    def __attrs_post_init__(self):
        if self.kind != 'oracle_fuzz' and self.instance is None:
            raise MissingField('instance')

    @property
    def selected_methods(self):
        return self.methods or DEFAULT_METHODS[self.kind]

    @property
    def rungs(self):
        return self.ladder or DEFAULT_LADDER.get(self.kind, ())

    @property
    def label(self):
        return self.name or self.kind


def experiment_from_dict(doc, base_dir='.'):
    if not isinstance(doc, dict):
        raise MalformedDocument("experiment: top level must be an object")
    if 'kind' not in doc:
        raise MissingField('kind')
    known = set(attr.fields_dict(ExperimentSpec))
    extra = set(doc) - known
    if extra:
        raise MalformedDocument(f"experiment: unknown keys {sorted(extra)}")
    values = dict(doc)
    for key in ('instance', 'out'):
        if values.get(key) is not None and not os.path.isabs(values[key]):
            values[key] = os.path.join(base_dir, values[key])
    return ExperimentSpec(**values)


def load_experiment(path):
    try:
        with open(path, encoding='utf-8') as f:
            doc = json.load(f)
    except ValueError as e:
        raise MalformedDocument(str(e))
    return experiment_from_dict(doc, os.path.dirname(os.path.abspath(path)))


def scale_volatility(prices, scale):
    """ Spread prices around their mean by `scale`; the mean is kept. """
    prices = np.asarray(prices, dtype=float)
    mean = prices.mean()
    return tuple(mean + scale * (prices - mean))


def _reference(results):
    """ Objective of the continuous optimum: B&B if it finished, else the MILP. """
    for method in ('bnb', 'milp', 'oracle'):
        for r in results:
            if r.method == method and r.ok:
                return r.audited
    return None


def _rows(results, reference=None, **columns):
    rows = []
    for r in results:
        row = dict(columns)
        row.update(r.row())
        row['gap_pct'] = gap_percent(row['objective'], reference) if r.ok else None
        rows.append(row)
    return rows


def _run_all(methods, inst, settings, refinement=1):
    return [run_method(m, inst, settings, refinement) for m in methods]


def _exactness(spec, inst, settings):
    results = _run_all(spec.selected_methods, inst, settings, spec.refinement)
    frame = pd.DataFrame(_rows(results, _reference(results)))
    notes = [f"instance {inst.name or spec.instance}, grid refinement {spec.refinement}"]
    return {'exactness.csv': (frame, notes)}


def _grid_refinement(spec, inst, settings):
    reference = _reference([run_method('bnb', inst, settings)])
    rows = []
    coarser = None
    previous = {}
    for k in spec.rungs:
        k = int(k)
        grid = build_grid(inst, k)
        nested = coarser is None or set(coarser.reservoir_points) <= set(grid.reservoir_points)
        for r in _run_all(spec.selected_methods, inst, settings, k):
            row = {'refinement': k, 'reservoir_points': len(grid.reservoir_points),
                   'nodes': r.extra.get('nodes'), 'arcs': r.extra.get('arcs')}
            row.update(_rows([r], reference)[0])
            objective, before = row['objective'], previous.get(r.method)
            row['nested'] = nested
            row['monotone'] = (before is None or objective is None
                               or objective <= before + AGREEMENT_TOL * max(1.0, abs(before)))
            if objective is not None:
                previous[r.method] = objective
            rows.append(row)
        coarser = grid
    notes = [f"reference (continuous B&B) objective {reference}"]
    return {'grid_refinement.csv': (pd.DataFrame(rows), notes)}


def _volatility(spec, inst, settings):
    rows = []
    for scale in spec.rungs:
        scaled = inst.with_prices(scale_volatility(inst.prices, scale))
        results = _run_all(spec.selected_methods, scaled, settings, spec.refinement)
        relaxed = relaxation_bound(scaled, settings)
        rows += _rows(results, _reference(results), scale=scale, milp_relaxation=relaxed)
    notes = ["prices scaled as mean + scale * (price - mean)"]
    return {'volatility.csv': (pd.DataFrame(rows), notes)}


def _jmax_sweep(spec, inst, settings):
    rows = []
    base = None
    for j in spec.rungs:
        results = _run_all(spec.selected_methods, attr.evolve(inst, j_max=int(j)), settings, spec.refinement)
        for row in _rows(results, jmax=int(j)):
            if base is None and row['status'] == 'ok':
                base = row['cpu_s']
            row['time_ratio_pct'] = 100.0 * row['cpu_s'] / base if base else None
            rows.append(row)
    notes = ["time_ratio_pct is relative to the first finished run"]
    return {'jmax_sweep.csv': (pd.DataFrame(rows), notes)}


def _horizon_scaling(spec, inst, settings):
    rows = []
    for T in spec.rungs:
        results = _run_all(spec.selected_methods, inst.with_horizon(int(T)), settings, spec.refinement)
        rows += _rows(results, _reference(results), horizon=int(T))
    frame = pd.DataFrame(rows)
    notes = [f"prices tiled from the {inst.horizon}-stage vector"]
    return {'horizon_scaling.csv': (frame, notes), 'horizon_scaling.svg': (frame, None)}


def _hsc(spec, inst, settings):
    rows = []
    for variant, hsc in (('with SC', True), ('without SC', False)):
        results = _run_all(spec.selected_methods, attr.evolve(inst, hsc_enabled=hsc), settings, spec.refinement)
        for r, row in zip(results, _rows(results, _reference(results), variant=variant)):
            row['sc_stages'] = sum(m is Mode.SC for m in r.schedule.modes) if r.schedule is not None else None
            rows.append(row)
    return {'hsc.csv': (pd.DataFrame(rows), [])}


def _close(a, b):
    return a is not None and b is not None and abs(a - b) <= AGREEMENT_TOL * max(1.0, abs(a), abs(b))


def fuzz_agreement(results):
    """ Cross-method checks on one random instance; None where a method is missing. """
    value = {r.method: r.audited for r in results if r.ok}
    checks = {}
    exact = [m for m in ('oracle', 'milp', 'bnb') if m in value]
    if len(exact) > 1:
        checks['continuous_equal'] = all(_close(value[exact[0]], value[m]) for m in exact[1:])
    if 'dp' in value and 'gridlp' in value:
        checks['grid_equal'] = _close(value['dp'], value['gridlp'])
    if 'gridlp' in value and 'oracle' in value:
        checks['grid_restriction'] = value['gridlp'] >= value['oracle'] - AGREEMENT_TOL * max(1.0, abs(value['oracle']))
    return checks


def _oracle_fuzz(spec, inst, settings):
    rows = []
    for k in range(spec.count):
        seed = spec.seed + k
        sample = random_instance(seed, horizon=spec.horizon)
        results = _run_all(spec.selected_methods, sample, settings, spec.refinement)
        checks = fuzz_agreement(results)
        for row in _rows(results, seed=seed):
            row.update(checks)
            rows.append(row)
    frame = pd.DataFrame(rows)
    failed = sorted({row['seed'] for row in rows
                     if any(row.get(c) is False for c in ('continuous_equal', 'grid_equal', 'grid_restriction'))})
    if failed:
        logger.warning("oracle fuzz: disagreement on seeds %s", failed)
    notes = [f"{spec.count} random instances, horizon {spec.horizon}, seeds from {spec.seed}",
             f"disagreeing seeds: {failed}"]
    return {'oracle_fuzz.csv': (frame, notes)}


RUNNERS = {
    'exactness': _exactness,
    'grid_refinement': _grid_refinement,
    'volatility': _volatility,
    'jmax_sweep': _jmax_sweep,
    'horizon_scaling': _horizon_scaling,
    'hsc': _hsc,
    'oracle_fuzz': _oracle_fuzz,
}


def run_experiment(spec, settings=DEFAULT_SETTINGS):
    """ Run one experiment and return the paths of the written reports. """
    inst = load_instance(spec.instance) if spec.instance is not None else None
    logger.info("experiment %s: methods %s, ladder %s", spec.label, spec.selected_methods, spec.rungs)
    with SharedArcCosts():
        outputs = RUNNERS[spec.kind](spec, inst, settings)
    paths = []
    for filename, (frame, notes) in outputs.items():
        path = os.path.join(spec.out, filename)
        if filename.endswith('.svg'):
            paths.append(plot_scaling(frame, path))
        else:
            paths.append(write_table(frame, path, notes))
    return paths
