"""
Single-unit pumped-storage hydropower scheduling.

Four cross-checked solution routes over one instance format: the
time-indexed mixed-integer model, the event-based dynamic program on a
finite grid, the all-in-one network-flow LP and the continuous-state
event branch-and-bound.
"""

__version__ = '1.0.dev0'
