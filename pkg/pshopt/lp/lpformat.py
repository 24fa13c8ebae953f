"""
CPLEX LP-format text dump of a LinearProgram, for cross-checks with
external solvers.
"""

import logging
import math
import re

logger = logging.getLogger(__name__)

_unsafe = re.compile(r'[^A-Za-z0-9_.]')


def _name(text):
    name = _unsafe.sub('_', text)
    if not name or name[0].isdigit() or name[0] in '.eE':
        name = 'v_' + name
    return name


def _term(coef, name, first):
    sign = '-' if coef < 0 else ('' if first else '+')
    mag = abs(coef)
    body = name if mag == 1.0 else f"{mag:.17g} {name}"
    return f"{sign} {body}" if sign else body


def _expression(pairs, names):
    parts = [_term(v, names[k], i == 0) for i, (k, v) in enumerate(pairs)]
    return ' '.join(parts)


def lp_format(model):
    names = [_name(n) for n in model.names]
    c, A, senses, rhs, lb, ub = model.matrices()
    lines = [f"\\ {model.name}", "Minimize"]
    objective = [(k, v) for k, v in enumerate(c) if v != 0.0]
    lines.append(" obj: " + (_expression(objective, names) if objective else f"0 {names[0]}" if names else "0"))
    lines.append("Subject To")
    for i in range(A.shape[0]):
        start, end = A.indptr[i], A.indptr[i + 1]
        pairs = list(zip(A.indices[start:end].tolist(), A.data[start:end].tolist()))
        expr = _expression(pairs, names) if pairs else f"0 {names[0]}"
        lines.append(f" {_name(model.row_names[i])}: {expr} {senses[i]} {rhs[i]:.17g}")
    lines.append("Bounds")
    for k, name in enumerate(names):
        lo, hi = lb[k], ub[k]
        if math.isinf(lo) and math.isinf(hi):
            lines.append(f" {name} free")
        elif math.isinf(hi):
            lines.append(f" {lo:.17g} <= {name} <= +inf" if lo != 0.0 else f" {name} >= 0")
        elif math.isinf(lo):
            lines.append(f" -inf <= {name} <= {hi:.17g}")
        else:
            lines.append(f" {lo:.17g} <= {name} <= {hi:.17g}")
    binaries = [names[k] for k in model.binary_indices()]
    if binaries:
        lines.append("Binaries")
        for k in range(0, len(binaries), 8):
            lines.append(" " + " ".join(binaries[k:k + 8]))
    lines.append("End")
    return "\n".join(lines) + "\n"


def write_lp_format(model, path):
    with open(path, 'w') as f:
        f.write(lp_format(model))
    logger.info("wrote %r to %s", model, path)
