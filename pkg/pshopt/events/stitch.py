import logging

import numpy as np

from pshopt.time_indexed.schedule import make_schedule

logger = logging.getLogger(__name__)


def stitch(inst, pieces, strict=False):
    """
    Concatenate block trajectories into an audited Schedule.

    pieces: (mode, start, end, BlockResult) covering stages 1..T in
    order; zero-length pieces are skipped.
    """
    T = inst.horizon
    modes = [None] * T
    h_out = np.zeros(T)
    h_in = np.zeros(T)
    levels = np.zeros(T + 1)
    levels[0] = inst.initial_level
    covered = 1
    for mode, start, end, result in pieces:
        if end <= start:
            continue
        if start != covered:
            raise ValueError(f"block {start}-{end} does not continue at stage {covered}")
        for i in range(start, end):
            modes[i - 1] = mode
        h_out[start - 1:end - 1] = result.h_out
        h_in[start - 1:end - 1] = result.h_in
        levels[start:end] = result.levels[1:]
        covered = end
    if covered != T + 1:
        raise ValueError(f"blocks end at stage {covered}, expected {T + 1}")
    return make_schedule(inst, modes, h_out, h_in, levels, strict)
