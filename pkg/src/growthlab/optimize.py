"""Grid-plus-golden-section optimization for the variational layer.

All objectives here are piecewise smooth with finitely many kinks, so a
coarse grid localizes the optimum and golden-section refinement inside the
best cells finishes the job. `vtol` is the refinement tolerance in the
argument; near-optimal grid cells are clustered so flat or multi-valley
objectives report every minimizer."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_PHI = (math.sqrt(5.0) - 1.0) / 2.0

VALUE_TOL = 1e-7   # grid minima within this of the optimum join the cluster pass
CLUSTER_GAP = 1e-3  # argument gap separating distinct minimizer clusters


def golden_min(f, a: float, b: float, vtol: float = 1e-9) -> tuple[float, float]:
    """Golden-section minimum of f on [a, b] to argument tolerance vtol."""
    x1 = b - _PHI * (b - a)
    x2 = a + _PHI * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > vtol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _PHI * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _PHI * (b - a)
            f2 = f(x2)
    x = 0.5 * (a + b)
    return x, f(x)


@dataclass(frozen=True)
class GridMinResult:
    value: float
    minimizers: list  # refined cluster representatives, ascending


def grid_min(f, a: float, b: float, n_grid: int = 2049, vtol: float = 1e-9,
             value_tol: float = VALUE_TOL, cluster_gap: float = CLUSTER_GAP) -> GridMinResult:
    """Global minimum of f on [a, b] with a minimizer set.

    Grid points within value_tol of the grid optimum are merged into clusters
    separated by more than cluster_gap; each cluster is refined by golden
    section over its grid neighborhood."""
    if b < a:
        raise ValueError("empty interval")
    if b == a:
        return GridMinResult(value=f(a), minimizers=[a])
    ys = np.linspace(a, b, n_grid)
    vals = np.array([f(y) for y in ys])
    vbest = vals.min()
    # candidate pass uses a discretization-aware tolerance: a near-tied
    # valley's grid sample can sit O(step^2 * curvature) above the optimum,
    # far beyond value_tol; extra candidates only cost a refinement each
    cand_tol = max(value_tol, 1e-4 * float(vals.max() - vbest) + 1e-12)
    cand = np.flatnonzero(vals <= vbest + cand_tol)
    step = (b - a) / (n_grid - 1)
    # adjacent grid candidates always share a cluster: minimizers closer than
    # ~1.5 steps are unresolvable at this resolution (raise n_grid to split)
    eff_gap = max(cluster_gap, 1.5 * step)
    clusters = []
    start = cand[0]
    prev = cand[0]
    for idx in cand[1:]:
        if ys[idx] - ys[prev] > eff_gap:
            clusters.append((start, prev))
            start = idx
        prev = idx
    clusters.append((start, prev))
    refined = []
    best_val = math.inf
    for lo_i, hi_i in clusters:
        lo = max(a, ys[lo_i] - step)
        hi = min(b, ys[hi_i] + step)
        x, v = golden_min(f, lo, hi, vtol)
        refined.append((x, v))
        best_val = min(best_val, v)
    # spec tolerance applies to refined values; merge refinements that
    # landed within one gap of each other
    keep = sorted(x for x, v in refined if v <= best_val + value_tol)
    minimizers = [keep[0]]
    for x in keep[1:]:
        if x - minimizers[-1] > cluster_gap:
            minimizers.append(x)
    return GridMinResult(value=best_val, minimizers=minimizers)


def grid_max(f, a: float, b: float, **kw) -> GridMinResult:
    res = grid_min(lambda y: -f(y), a, b, **kw)
    return GridMinResult(value=-res.value, minimizers=res.minimizers)
