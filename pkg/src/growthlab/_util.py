"""Small shared helpers: replicate running and order-independent statistics."""

from __future__ import annotations

import math
import os


def replicate_map(fn, replicates: int, threads: int = 1) -> list:
    """Order-preserving replicate runner. Threads pay off only when the hot
    kernel releases the GIL (compiled backend); results are merged in index
    order so aggregation is scheduling-independent."""
    if threads <= 1:
        return [fn(r) for r in range(replicates)]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, range(replicates)))


def default_threads() -> int:
    env = os.environ.get("GROWTHLAB_THREADS")
    if env:
        return max(1, int(env))
    return max(1, min(4, os.cpu_count() or 1))


def mean_stderr(values) -> tuple[float, float]:
    """Compensated (order-independent) sample mean and standard error."""
    n = len(values)
    mean = math.fsum(values) / n
    if n < 2:
        return mean, float("nan")
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var / n)


def variance_stderr(values) -> tuple[float, float]:
    """Sample variance and its standard error from the fourth central moment
    (se^2 = (m4 - (n-3)/(n-1) s^4) / n)."""
    n = len(values)
    mean = math.fsum(values) / n
    s2 = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    if n < 4:
        return s2, float("nan")
    m4 = math.fsum((v - mean) ** 4 for v in values) / n
    se2 = (m4 - (n - 3) / (n - 1) * s2 * s2) / n
    return s2, math.sqrt(max(se2, 0.0))


def ols_loglog(xs, ys) -> tuple[float, float]:
    """Least-squares slope of log(y) on log(x), with its standard error."""
    import numpy as np

    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.asarray(ys, dtype=float))
    n = len(lx)
    if n < 3:
        raise ValueError("need at least 3 points for a slope with stderr")
    vx = lx - lx.mean()
    slope = float(np.dot(vx, ly) / np.dot(vx, vx))
    resid = ly - (ly.mean() + slope * vx)
    se = math.sqrt(float(resid @ resid) / (n - 2) / float(vx @ vx))
    return slope, se
