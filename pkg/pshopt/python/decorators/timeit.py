import functools
import logging
import time

logger = logging.getLogger(__name__)


def timeit(method):
    """
    Wall-clock timing of a call.

    Pass `log_time={}` to collect the duration (in ms) under
    `log_name` (default: the upper-cased function name); otherwise
    the duration is logged at DEBUG level.
    """
    @functools.wraps(method)
    def timed(*args, **kw):
        log_time = kw.pop('log_time', None)
        name = kw.pop('log_name', method.__name__.upper())
        ts = time.perf_counter()
        result = method(*args, **kw)
        te = time.perf_counter()

        if log_time is not None:
            log_time[name] = (te - ts) * 1000
        else:
            logger.debug('%r  %2.2f ms', method.__name__, (te - ts) * 1000)
        return result

    return timed
