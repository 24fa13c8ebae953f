"""
CSV tables and SVG plots of experiment results.
"""

import logging
import os

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
import pandas as pd

logger = logging.getLogger(__name__)


def write_table(frame, path, notes=()):
    """ CSV with optional leading '# ' comment lines. """
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        for note in notes:
            f.write(f"# {note}\n")
        frame.to_csv(f, index=False, float_format='%.6f')
    logger.info("wrote %s (%d rows)", path, len(frame))
    return path


def read_table(path):
    return pd.read_csv(path, comment='#')


def gap_percent(value, reference):
    """ Relative distance of `value` above `reference` in percent. """
    if value is None or reference is None:
        return None
    return 100.0 * (value - reference) / max(1.0, abs(reference))


def plot_scaling(frame, path, x='horizon', y='cpu_s', by='method', title='Runtime versus horizon'):
    """ Line plot of `y` over `x`, one line per `by` group, log-scaled y axis. """
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for label, group in frame.dropna(subset=[y]).groupby(by, sort=False):
        group = group.sort_values(x)
        ax.plot(group[x], group[y], marker='o', label=str(label))
    ax.set_yscale('log')
    ax.set_xlabel('horizon T [h]' if x == 'horizon' else x)
    ax.set_ylabel('CPU time [s]' if y == 'cpu_s' else y)
    ax.set_title(title)
    ax.grid(True, which='both', alpha=0.3)
    ax.legend()
    fig.tight_layout()
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.savefig(path, format='svg')
    plt.close(fig)
    logger.info("wrote %s", path)
    return path


def terminal_plot(schedule, width=60, height=15):
    """ Reservoir trajectory as text, for `pshopt solve --plot`. """
    import plotille
    stages = list(range(1, len(schedule.levels) + 1))
    return plotille.plot(stages, list(schedule.levels), width=width, height=height,
                         X_label='t', Y_label='M [MWh]', x_min=1, x_max=stages[-1])
