"""
Instance files: UTF-8 JSON documents. Scalars broadcast to per-stage
vectors. The schema is documented in docs/instance_schema.md.
"""

import json
import logging
import numbers

from pshopt.errors import MalformedDocument, MissingField
from pshopt.instance.model import Instance

logger = logging.getLogger(__name__)

REQUIRED = ('horizon', 'prices', 'gen_bounds', 'pump_bounds', 'ramp_limit',
            'reservoir', 'min_up', 'min_down', 'j_max')


def _number(value, field):
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise MalformedDocument(f"{field}: expected a number, got {value!r}")
    return float(value)


def _integer(value, field):
    number = _number(value, field)
    if number != int(number):
        raise MalformedDocument(f"{field}: expected an integer, got {value!r}")
    return int(number)


def _vector(value, T, field):
    if isinstance(value, list):
        if len(value) != T:
            raise MalformedDocument(f"{field}: expected {T} values, got {len(value)}")
        return tuple(_number(v, field) for v in value)
    return (_number(value, field),) * T


def _pair(value, field):
    if not isinstance(value, list) or len(value) != 2:
        raise MalformedDocument(f"{field}: expected a [lower, upper] pair, got {value!r}")
    return (_number(value[0], field), _number(value[1], field))


def _bounds(value, T, field):
    if isinstance(value, list) and value and isinstance(value[0], list):
        if len(value) != T:
            raise MalformedDocument(f"{field}: expected {T} pairs, got {len(value)}")
        return tuple(_pair(v, field) for v in value)
    return (_pair(value, field),) * T


def _pieces(value, T, field):
    if not isinstance(value, list) or not value:
        raise MalformedDocument(f"{field}: expected a non-empty list of [slope, intercept] pairs")
    if isinstance(value[0], list) and value[0] and isinstance(value[0][0], list):
        if len(value) != T:
            raise MalformedDocument(f"{field}: expected {T} per-stage piece lists, got {len(value)}")
        return tuple(tuple(_pair(p, field) for p in stage) for stage in value)
    pieces = tuple(_pair(p, field) for p in value)
    return (pieces,) * T


def _grid(value, field):
    if value is None:
        return None
    if not isinstance(value, list):
        raise MalformedDocument(f"{field}: expected a list of points")
    return tuple(sorted(set(_number(v, field) for v in value)))


def instance_from_dict(doc):
    if not isinstance(doc, dict):
        raise MalformedDocument("top level must be an object")
    for field in REQUIRED:
        if field not in doc:
            raise MissingField(field)
    T = _integer(doc['horizon'], 'horizon')
    if T < 1:
        raise MalformedDocument(f"horizon: must be >= 1, got {T}")
    reservoir = doc['reservoir']
    if not isinstance(reservoir, dict):
        raise MalformedDocument("reservoir: expected an object")
    for field in ('capacity', 'initial'):
        if field not in reservoir:
            raise MissingField(f"reservoir.{field}")
    if not isinstance(doc['prices'], list):
        raise MalformedDocument("prices: expected a list")
    terminal = reservoir.get('terminal')
    grids = doc.get('grids') or {}
    if not isinstance(grids, dict):
        raise MalformedDocument("grids: expected an object")
    return Instance(
        horizon=T,
        prices=_vector(doc['prices'], T, 'prices'),
        gen_bounds=_bounds(doc['gen_bounds'], T, 'gen_bounds'),
        pump_bounds=_bounds(doc['pump_bounds'], T, 'pump_bounds'),
        ramp_limit=_number(doc['ramp_limit'], 'ramp_limit'),
        capacity=_number(reservoir['capacity'], 'reservoir.capacity'),
        initial_level=_number(reservoir['initial'], 'reservoir.initial'),
        terminal_level=None if terminal is None else _number(terminal, 'reservoir.terminal'),
        efficiency_gen=_vector(doc.get('efficiency_gen', 1.0), T, 'efficiency_gen'),
        efficiency_pump=_vector(doc.get('efficiency_pump', 1.0), T, 'efficiency_pump'),
        inflow=_vector(doc.get('inflow', 0.0), T, 'inflow'),
        spillage=_vector(doc.get('spillage', 0.0), T, 'spillage'),
        min_up=_integer(doc['min_up'], 'min_up'),
        min_down=_integer(doc['min_down'], 'min_down'),
        startup=_vector(doc.get('startup', 0.0), T, 'startup'),
        shutdown=_vector(doc.get('shutdown', 0.0), T, 'shutdown'),
        water_value=_number(doc.get('water_value', 0.0), 'water_value'),
        gen_cost_pieces=_pieces(doc.get('gen_cost_pieces', [[0.0, 0.0]]), T, 'gen_cost_pieces'),
        pump_cost_pieces=_pieces(doc.get('pump_cost_pieces', [[0.0, 0.0]]), T, 'pump_cost_pieces'),
        j_max=_integer(doc['j_max'], 'j_max'),
        hsc_enabled=bool(doc.get('hsc', False)),
        terminal_offline=bool(doc.get('terminal_offline', False)),
        initial_counter=_integer(doc.get('initial_counter', 0), 'initial_counter'),
        grid_reservoir=_grid(grids.get('reservoir'), 'grids.reservoir'),
        grid_ramp=_grid(grids.get('ramp'), 'grids.ramp'),
        name=str(doc.get('name', '')),
    )


def loads_instance(text):
    try:
        doc = json.loads(text)
    except ValueError as e:
        raise MalformedDocument(str(e))
    return instance_from_dict(doc)


def load_instance(source):
    """ Load an instance from a path or an open text file. """
    if hasattr(source, 'read'):
        return loads_instance(source.read())
    with open(source, 'r', encoding='utf-8') as f:
        inst = loads_instance(f.read())
    logger.info("loaded instance %s (T=%d) from %s", inst.name or '<unnamed>', inst.horizon, source)
    return inst


def _compact(values):
    """ Write a per-stage vector as a scalar when all entries agree. """
    values = list(values)
    if all(v == values[0] for v in values):
        return values[0]
    return values


def instance_to_dict(inst):
    def pieces(per_stage):
        if all(p == per_stage[0] for p in per_stage):
            return [list(p) for p in per_stage[0]]
        return [[list(p) for p in stage] for stage in per_stage]

    def bounds(per_stage):
        if all(b == per_stage[0] for b in per_stage):
            return list(per_stage[0])
        return [list(b) for b in per_stage]

    reservoir = {'capacity': inst.capacity, 'initial': inst.initial_level}
    if inst.terminal_level is not None:
        reservoir['terminal'] = inst.terminal_level
    doc = {
        'name': inst.name,
        'horizon': inst.horizon,
        'prices': list(inst.prices),
        'gen_bounds': bounds(inst.gen_bounds),
        'pump_bounds': bounds(inst.pump_bounds),
        'ramp_limit': inst.ramp_limit,
        'efficiency_gen': _compact(inst.efficiency_gen),
        'efficiency_pump': _compact(inst.efficiency_pump),
        'reservoir': reservoir,
        'inflow': _compact(inst.inflow),
        'spillage': _compact(inst.spillage),
        'min_up': inst.min_up,
        'min_down': inst.min_down,
        'startup': _compact(inst.startup),
        'shutdown': _compact(inst.shutdown),
        'water_value': inst.water_value,
        'gen_cost_pieces': pieces(inst.gen_cost_pieces),
        'pump_cost_pieces': pieces(inst.pump_cost_pieces),
        'j_max': inst.j_max,
        'hsc': inst.hsc_enabled,
        'terminal_offline': inst.terminal_offline,
        'initial_counter': inst.initial_counter,
    }
    grids = {}
    if inst.grid_reservoir is not None:
        grids['reservoir'] = list(inst.grid_reservoir)
    if inst.grid_ramp is not None:
        grids['ramp'] = list(inst.grid_ramp)
    if grids:
        doc['grids'] = grids
    return doc


def dumps_instance(inst, indent=2):
    return json.dumps(instance_to_dict(inst), indent=indent)

