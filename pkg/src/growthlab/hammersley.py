"""Increasing-subsequence counts (Ulam's problem), their width inverse, and
the graphical particle construction they embed into.

A point (x, s) of the driving planar Poisson field instantaneously pulls the
leftmost particle strictly right of x to position x. Running the construction
on a finite sorted container reproduces, site by site, the variational
formula
    z_i(t) = min over k <= i of { z_k(0) + min-width((z_k(0), 0), t, i-k) },
where min-width((a,s),t,w) is the least h >= 0 such that the rectangle
(a, a+h] x (s, t] contains an increasing chain of w points. The equality is
exact on shared point realizations, provided the container is wide enough;
check_variational guards the truncation explicitly.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass

import numpy as np

from growthlab._backend import kernels
from growthlab._util import mean_stderr, replicate_map
from growthlab.randkit import PlanarPoints, SeedSpec, sample_poisson_points


class GammaUndecidableError(RuntimeError):
    """The point container ran out before the requested chain count; widen it."""

    def __init__(self, achieved: int, wanted: int):
        super().__init__(
            f"undecidable within container: chain count reached {achieved} "
            f"of {wanted}; widen the container")
        self.achieved = achieved
        self.wanted = wanted


class TruncationError(RuntimeError):
    """Finite-container truncation is suspect; widen and retry."""


@dataclass(frozen=True)
class UlamQuery:
    rect: tuple  # (a, s, b, t)
    points: PlanarPoints


def lis_count(query: UlamQuery) -> int:
    """Maximal number of points on a chain strictly increasing in both
    coordinates, within the query rectangle. Patience method, O(P log P);
    ties (possible only for injected non-Poisson data) break toward
    strictness via the x-ascending, t-descending presort."""
    a, s, b, t = query.rect
    pts = query.points.in_rect(a, s, b, t)
    if len(pts) == 0:
        return 0
    order = np.lexsort((-pts.ts, pts.xs))
    return int(kernels.lis_strict(np.ascontiguousarray(pts.ts[order])))


def lis_count_dp(query: UlamQuery) -> int:
    """Quadratic DP reference for lis_count (kept independent on purpose)."""
    a, s, b, t = query.rect
    pts = query.points.in_rect(a, s, b, t)
    P = len(pts)
    if P == 0:
        return 0
    order = np.lexsort((pts.ts, pts.xs))
    xs, ts = pts.xs[order], pts.ts[order]
    best = np.ones(P, dtype=np.int64)
    for i in range(P):
        for j in range(i):
            if xs[j] < xs[i] and ts[j] < ts[i] and best[j] + 1 > best[i]:
                best[i] = best[j] + 1
    return int(best.max())


def gamma_inverse(points: PlanarPoints, anchor: tuple, t: float, w: int,
                  on_exhausted: str = "raise") -> float:
    """Least horizontal extent h >= 0 with an increasing w-chain inside
    (a, a+h] x (s, t], for anchor (a, s).

    When the container is exhausted first the default is to raise
    GammaUndecidableError (never a silent answer); on_exhausted="inf" opts
    into a +inf sentinel for callers that handle truncation themselves."""
    if w < 0:
        raise ValueError("w must be >= 0")
    a, s = anchor
    if t <= s:
        raise ValueError("need t > anchor time")
    if w == 0:
        return 0.0
    achieved, x_at = _chain_achievements(points, a, s, t, w)
    if achieved >= w:
        return float(x_at[w - 1] - a)
    if on_exhausted == "inf":
        return math.inf
    raise GammaUndecidableError(achieved, w)


def _chain_achievements(points: PlanarPoints, a: float, s: float, t: float,
                        w_max: int) -> tuple[int, np.ndarray]:
    """Sweep candidates right of `a` in x order; x_at[w-1] is the coordinate
    at which the patience pile count first reaches w (<= w_max)."""
    m = (points.xs > a) & (points.ts > s) & (points.ts <= t)
    xs, ts = points.xs[m], points.ts[m]
    order = np.lexsort((-ts, xs))
    xs, ts = xs[order], ts[order]
    x_at = np.full(w_max, np.nan)
    tails: list[float] = []
    for x, tt in zip(xs, ts):
        pos = bisect_left(tails, tt)
        if pos == len(tails):
            tails.append(tt)
            if len(tails) <= w_max:
                x_at[len(tails) - 1] = x
            if len(tails) >= w_max:
                break
        else:
            tails[pos] = tt
    return len(tails), x_at


# ---------------------------------------------------------------------------
# graphical construction


@dataclass
class HammersleyState:
    """Sorted particle positions labeled i_min .. i_min+len-1."""

    positions: np.ndarray
    i_min: int = 0
    time: float = 0.0

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=np.float64)
        if np.any(np.diff(self.positions) < 0):
            raise ValueError("positions must be sorted")

    def position(self, i: int) -> float:
        idx = i - self.i_min
        if not 0 <= idx < len(self.positions):
            raise ValueError(f"label {i} outside container")
        return float(self.positions[idx])

    def copy(self) -> "HammersleyState":
        return HammersleyState(self.positions.copy(), self.i_min, self.time)


@dataclass(frozen=True)
class HammersleyTrajectory:
    initial: HammersleyState
    final: HammersleyState
    moves: list  # (time, particle label, new position); label None for misses
    boundary_misses: int


def evolve_hammersley(initial: HammersleyState, points: PlanarPoints,
                      horizon: float) -> HammersleyTrajectory:
    """Apply the Poisson points with time in (initial.time, horizon] in time
    order. A pull that finds no particle right of its x is a flagged boundary
    event (container too short on the right)."""
    m = (points.ts > initial.time) & (points.ts <= horizon)
    xs, ts = points.xs[m], points.ts[m]
    order = np.argsort(ts)
    xs, ts = np.ascontiguousarray(xs[order]), ts[order]
    pos = initial.positions.copy()
    out_idx = np.empty(len(xs), dtype=np.int64)
    misses = int(kernels.hammersley_pulls(pos, xs, out_idx))
    moves = [
        (float(ts[k]),
         None if out_idx[k] < 0 else initial.i_min + int(out_idx[k]),
         float(xs[k]))
        for k in range(len(xs))
    ]
    final = HammersleyState(pos, initial.i_min, horizon)
    return HammersleyTrajectory(initial=initial.copy(), final=final,
                                moves=moves, boundary_misses=misses)


@dataclass(frozen=True)
class VariationalReport:
    sites: list
    simulated: list
    variational: list
    argmin_k: list
    max_abs_diff: float
    equal: bool
    truncation_margin: int


def check_variational(initial: HammersleyState, points: PlanarPoints,
                      horizon: float, sites=None,
                      guard_margin: int = 3, tol: float = 1e-12) -> VariationalReport:
    """Exact coupling check of the graphical construction against its
    variational formula on a shared point realization.

    Raises TruncationError when a point falls at or left of the leftmost
    initial particle (the finite container then diverges from the truncated
    formula) or when any site's minimizing anchor sits within guard_margin of
    the container's left end ("widen and retry")."""
    if len(points) and points.xs.min() <= initial.positions[0]:
        raise TruncationError(
            "point set extends to or beyond the leftmost particle; "
            "widen the container to the left")
    traj = evolve_hammersley(initial, points, horizon)
    i_min = initial.i_min
    i_max = i_min + len(initial.positions) - 1
    if sites is None:
        sites = list(range(i_min + guard_margin, i_max + 1))
    sim, var, arg = [], [], []
    max_diff = 0.0
    min_margin = len(initial.positions)
    for i in sites:
        z_sim = traj.final.position(i)
        best, best_k = initial.position(i), i  # k = i term: w = 0
        w_max = i - i_min
        if w_max > 0:
            for k in range(i_min, i):
                zk = initial.position(k)
                achieved, x_at = _chain_achievements(points, zk, 0.0, horizon, i - k)
                if achieved >= i - k:
                    # z_k(0) + (x* - z_k(0)) collapses to x* exactly
                    cand = float(x_at[i - k - 1])
                    if cand < best:
                        best, best_k = cand, k
        sim.append(z_sim)
        var.append(best)
        arg.append(best_k)
        max_diff = max(max_diff, abs(z_sim - best))
        min_margin = min(min_margin, best_k - i_min)
    if min_margin < guard_margin:
        raise TruncationError(
            f"minimizing anchor within {min_margin} of the container edge; "
            f"widen and retry")
    return VariationalReport(sites=list(sites), simulated=sim, variational=var,
                             argmin_k=arg, max_abs_diff=max_diff,
                             equal=max_diff <= tol,
                             truncation_margin=min_margin)


# ---------------------------------------------------------------------------
# Ulam constant estimation


def ulam_estimate(n: float, replicates: int, seed: int,
                  threads: int = 1) -> dict:
    """Mean and stderr of L/n for fresh rate-1 points over (0,n]^2."""
    if n <= 0 or replicates < 1:
        raise ValueError("need n > 0 and replicates >= 1")

    def one(rep: int) -> int:
        pts = sample_poisson_points((0.0, 0.0, n, n), 1.0, SeedSpec(seed, rep))
        return lis_count(UlamQuery((0.0, 0.0, n, n), pts))

    ls = replicate_map(one, replicates, threads)
    mean, se = mean_stderr([l / n for l in ls])
    return {"mean": mean, "stderr": se, "n": n, "replicates": replicates,
            "samples": ls, "seed": seed}
