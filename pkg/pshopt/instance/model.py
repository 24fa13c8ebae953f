import attr

from pshopt.modes import modes_for


def _tuple(values):
    return tuple(float(v) for v in values)


@attr.s(frozen=True)
class Instance():
    """
    All data of one single-unit scheduling problem. Per-stage quantities
    are tuples of length `horizon`; index 0 is stage 1. Stage length is
    one hour, so MW and MWh are numerically interchangeable.
    """

    #: number of stages T
    horizon = attr.ib(type=int)
    #: electricity price per MWh, per stage
    prices = attr.ib(type=tuple, converter=_tuple)
    #: (lower, upper) generation output in MW, per stage
    gen_bounds = attr.ib(type=tuple)
    #: (lower, upper) pumping power in MW, per stage
    pump_bounds = attr.ib(type=tuple)
    #: maximal turbine ramp in MW per stage
    ramp_limit = attr.ib(type=float, converter=float)
    #: reservoir capacity in MWh-equivalent
    capacity = attr.ib(type=float, converter=float)
    #: reservoir level at the start of stage 1
    initial_level = attr.ib(type=float, converter=float)
    #: reservoir level required at T+1 (None: free)
    terminal_level = attr.ib(default=None)
    #: water released per MWh generated, per stage
    efficiency_gen = attr.ib(type=tuple, default=None)
    #: water stored per MWh pumped, per stage
    efficiency_pump = attr.ib(type=tuple, default=None)
    #: exogenous inflow per stage
    inflow = attr.ib(type=tuple, default=None)
    #: exogenous spillage per stage
    spillage = attr.ib(type=tuple, default=None)
    #: minimum up time L in stages
    min_up = attr.ib(type=int, default=1)
    #: minimum down time l in stages
    min_down = attr.ib(type=int, default=1)
    #: start-up cost charged at the stage the unit comes online
    startup = attr.ib(type=tuple, default=None)
    #: shut-down cost charged at the stage the unit goes offline
    shutdown = attr.ib(type=tuple, default=None)
    #: value of stored water per MWh-equivalent
    water_value = attr.ib(type=float, default=0.0, converter=float)
    #: per stage, tuple of (slope, intercept) pieces of the generation cost
    gen_cost_pieces = attr.ib(type=tuple, default=None)
    #: per stage, tuple of (slope, intercept) pieces of the pumping cost
    pump_cost_pieces = attr.ib(type=tuple, default=None)
    #: longest admissible online event in stages
    j_max = attr.ib(type=int, default=1)
    #: hydraulic short circuit (simultaneous generation and pumping) allowed
    hsc_enabled = attr.ib(type=bool, default=False)
    #: unit must be offline (ramping boundary 0) at T+1
    terminal_offline = attr.ib(type=bool, default=False)
    #: number of leading stages the unit must stay offline
    initial_counter = attr.ib(type=int, default=0)
    #: explicit reservoir grid (None: uniform)
    grid_reservoir = attr.ib(default=None)
    #: explicit ramping-boundary grid (None: uniform)
    grid_ramp = attr.ib(default=None)
    #: free-form label
    name = attr.ib(type=str, default='')

    def __attrs_post_init__(self):
        T = self.horizon
        for field, default in (('efficiency_gen', 1.0), ('efficiency_pump', 1.0),
                               ('inflow', 0.0), ('spillage', 0.0),
                               ('startup', 0.0), ('shutdown', 0.0)):
            if getattr(self, field) is None:
                object.__setattr__(self, field, (default,) * T)
        for field in ('gen_cost_pieces', 'pump_cost_pieces'):
            if getattr(self, field) is None:
                object.__setattr__(self, field, (((0.0, 0.0),),) * T)

    @property
    def modes(self):
        return modes_for(self.hsc_enabled)

    @property
    def tau_max(self):
        return max(self.min_up - 1, self.min_down - 1)

    @property
    def gen_max(self):
        """ Uniform upper bound of the ramping boundary. """
        return max(hi for _, hi in self.gen_bounds)

    def drift(self, start, end):
        """ Sum of inflow minus spillage over stages start..end-1 (1-based). """
        return sum(self.inflow[i - 1] - self.spillage[i - 1] for i in range(start, end))

    def with_prices(self, prices):
        return attr.evolve(self, prices=prices)

    def with_horizon(self, horizon):
        """ Tile every per-stage vector to a new horizon. """
        def tile(values):
            return tuple(values[i % self.horizon] for i in range(horizon))
        per_stage = ('prices', 'gen_bounds', 'pump_bounds', 'efficiency_gen',
                     'efficiency_pump', 'inflow', 'spillage', 'startup',
                     'shutdown', 'gen_cost_pieces', 'pump_cost_pieces')
        return attr.evolve(self, horizon=horizon,
                           **{field: tile(getattr(self, field)) for field in per_stage})
