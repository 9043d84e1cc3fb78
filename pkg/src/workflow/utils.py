import time
from contextlib import contextmanager

FINISH = "summarize"


def next_suite(step_count: int, plan):
    if step_count < len(plan):
        return plan[step_count]
    return FINISH


@contextmanager
def stopwatch():
    """Yields a callable returning seconds since entry."""
    t0 = time.perf_counter()
    yield lambda: round(time.perf_counter() - t0, 3)
