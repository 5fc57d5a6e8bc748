"""Large-deviation layer: exact rate functions for the planar
increasing-chain count, the random-walk entropy rate and its Legendre
duality, naive Monte Carlo tail estimates, and the Hopf-Lax composition of
rate functions.

Upper tail: lim n^-1 log P{L_n >= nx} = -I(x), I(x) = 2x acosh(x/2) - 2 sqrt(x^2-4).
Lower tail: lim n^-2 log P{L_n <= nx} = -U(x), U(x) = integral_x^2 R2(s) ds,
with R2(s) = s log(s/2) - s + 2 the rate of IID mean-2 Poisson variables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from growthlab._backend import kernels
from growthlab._util import replicate_map
from growthlab.optimize import golden_min
from growthlab.randkit import SeedSpec

PURPOSE_MC = 8


def ulam_upper_rate(x: float) -> float:
    """Upper-tail rate; 0 for x < 2 (there P{L_n >= nx} -> 1, so the decay
    rate vanishes; returning 0 rather than +inf is deliberate)."""
    if x < 2.0:
        return 0.0
    return 2.0 * x * math.acosh(x / 2.0) - 2.0 * math.sqrt(x * x - 4.0)


def poisson_mean2_rate(s: float) -> float:
    """R2(s) = s log(s/2) - s + 2 on [0, inf); R2(0) = 2 by continuity."""
    if s < 0:
        raise ValueError("rate defined for s >= 0")
    if s == 0.0:
        return 2.0
    return s * math.log(s / 2.0) - s + 2.0


def adaptive_simpson(f, a: float, b: float, tol: float = 1e-10,
                     max_depth: int = 50) -> float:
    """Adaptive Simpson quadrature with absolute tolerance."""
    def simpson(lo, hi, flo, fmid, fhi):
        return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)

    def recurse(lo, hi, flo, fmid, fhi, whole, eps, depth):
        mid = 0.5 * (lo + hi)
        lm, rm = 0.5 * (lo + mid), 0.5 * (mid + hi)
        flm, frm = f(lm), f(rm)
        left = simpson(lo, mid, flo, flm, fmid)
        right = simpson(mid, hi, fmid, frm, fhi)
        if depth >= max_depth or abs(left + right - whole) <= 15.0 * eps:
            return left + right + (left + right - whole) / 15.0
        return (recurse(lo, mid, flo, flm, fmid, left, eps / 2.0, depth + 1)
                + recurse(mid, hi, fmid, frm, fhi, right, eps / 2.0, depth + 1))

    if a == b:
        return 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, tol, 0)


def ulam_lower_rate(x: float) -> float:
    """U(x) = integral_x^2 R2(s) ds by adaptive Simpson to 1e-10."""
    if not 0.0 <= x <= 2.0:
        raise ValueError("lower-tail rate defined on [0, 2]")
    if x == 2.0:
        return 0.0
    return adaptive_simpson(poisson_mean2_rate, x, 2.0, tol=1e-10)


# ---------------------------------------------------------------------------
# random-walk rate function and Legendre duality


def rw_rate(x: float, p: float) -> float:
    """Entropy rate of the +-1 walk with up-probability p; +inf off [-1, 1]."""
    if not 0 < p < 1:
        raise ValueError("p must be in (0, 1)")
    if x < -1.0 or x > 1.0:
        return math.inf
    out = 0.0
    if x < 1.0:
        out += (1.0 - x) / 2.0 * math.log((1.0 - x) / (2.0 * (1.0 - p)))
    if x > -1.0:
        out += (1.0 + x) / 2.0 * math.log((1.0 + x) / (2.0 * p))
    return out


def rw_log_mgf(theta: float, p: float) -> float:
    return math.log(p * math.exp(theta) + (1.0 - p) * math.exp(-theta))


def rw_legendre_check(p: float, grid=None) -> float:
    """Max over the grid of |rw_rate(x) - sup_theta {theta x - mgf(theta)}|,
    the sup computed numerically."""
    if grid is None:
        grid = np.linspace(-1.0, 1.0, 43)[1:-1]
    worst = 0.0
    for x in grid:
        x = float(x)
        lo, hi = -1.0, 1.0
        while _dual_slope(hi, x, p) > 0:
            hi *= 2.0
        while _dual_slope(lo, x, p) < 0:
            lo *= 2.0
        _, neg = golden_min(lambda th: -(th * x - rw_log_mgf(th, p)), lo, hi,
                            vtol=1e-12)
        worst = max(worst, abs(rw_rate(x, p) - (-neg)))
    return worst


def _dual_slope(theta: float, x: float, p: float) -> float:
    e, em = math.exp(theta), math.exp(-theta)
    return x - (p * e - (1.0 - p) * em) / (p * e + (1.0 - p) * em)


# named evaluators with their domains, for table-driven callers
RATE_FUNCTIONS = {
    "ulam_upper": {"fn": ulam_upper_rate,
                   "domain": "[2, inf); 0 below 2 by convention"},
    "ulam_lower": {"fn": ulam_lower_rate, "domain": "[0, 2]"},
    "poisson_mean2": {"fn": poisson_mean2_rate, "domain": "[0, inf)"},
    "rw": {"fn": rw_rate, "domain": "[-1, 1], +inf outside; args (x, p)"},
    "rw_log_mgf": {"fn": rw_log_mgf, "domain": "R; args (theta, p)"},
}


# ---------------------------------------------------------------------------
# Monte Carlo tails


@dataclass(frozen=True)
class TailResult:
    model: str
    n: float
    x: float
    hits: int
    replicates: int
    estimate: float | None  # log P divided by the model's rate scale
    reason: str = ""

    @property
    def rate_scale(self) -> float:
        return self.n if self.model == "ulam_upper" else self.n * self.n


MIN_HITS = 10


def mc_tail(model: str, n: float, x: float, replicates: int, seed: int,
            threads: int = 1) -> TailResult:
    """Naive Monte Carlo estimate of log P{L_n >= nx} / n (upper) or
    log P{L_n <= nx} / n^2 (lower). Fewer than MIN_HITS observed hits yields
    an explicit non-estimate, never a fabricated value."""
    if model not in ("ulam_upper", "ulam_lower"):
        raise ValueError(f"unknown tail model {model!r}")
    if replicates < 1:
        raise ValueError("replicates must be >= 1")
    lower = model == "ulam_lower"
    if lower:
        thresh = int(math.floor(n * x + 1e-9))
    else:
        thresh = int(math.ceil(n * x - 1e-9))
    hits = _tail_hits(n, n, thresh, replicates, seed, lower, threads)
    if hits < MIN_HITS:
        return TailResult(model, n, x, hits, replicates, None,
                          reason=f"insufficient hits ({hits} < {MIN_HITS})")
    log_p = math.log(hits / replicates)
    scale = n if not lower else n * n
    return TailResult(model, n, x, hits, replicates, log_p / scale)


_TAIL_CHUNKS = 16


def _tail_hits(width: float, height: float, thresh: int, replicates: int,
               seed: int, lower: bool, threads: int) -> int:
    # chunk layout is fixed so results do not depend on the thread count
    chunks = max(1, min(_TAIL_CHUNKS, replicates))
    sizes = [replicates // chunks + (1 if c < replicates % chunks else 0)
             for c in range(chunks)]

    def one(c: int) -> int:
        key = SeedSpec(seed, c, PURPOSE_MC).key()
        hits, _ = kernels.lis_tail_hits(key, 0, float(width), float(height),
                                        thresh, sizes[c], int(lower))
        return hits

    return sum(replicate_map(one, chunks, threads))


def psi_estimate(w: float, r: float, n_grid, reps: int, seed: int,
                 threads: int = 1) -> dict:
    """Finite-n estimates of -n^-1 log P{min-width((0,0), n, ceil(nw)) <= nr}
    on the grid, with monotonicity diagnostics; no limit is claimed (the
    paper gives only superadditive existence).

    The event is equivalent to {L over (0, nr] x (0, n] >= ceil(nw)}."""
    if w < 0 or r < 0:
        raise ValueError("need w, r >= 0")
    rows = []
    for n in n_grid:
        thresh = int(math.ceil(n * w - 1e-9))
        if thresh == 0:
            rows.append({"n": n, "hits": reps, "estimate": 0.0, "reason": ""})
            continue
        hits = _tail_hits(n * r, n, thresh, reps, seed, lower=False,
                          threads=threads)
        if hits < MIN_HITS:
            rows.append({"n": n, "hits": hits, "estimate": None,
                         "reason": f"insufficient hits ({hits})"})
        else:
            rows.append({"n": n, "hits": hits,
                         "estimate": -math.log(hits / reps) / n, "reason": ""})
    ests = [row["estimate"] for row in rows if row["estimate"] is not None]
    nonincreasing = all(b <= a + 1e-12 for a, b in zip(ests, ests[1:]))
    return {"w": w, "r": r, "rows": rows,
            "diagnostics": {"nonincreasing_in_n": nonincreasing,
                            "n_estimates": len(ests)}}


# ---------------------------------------------------------------------------
# Hopf-Lax composition of rate functions


class GridTooNarrowError(RuntimeError):
    """The composed infimum localized on the search boundary; widen the grid."""


def compose_rate(j0, psi, t: float, x: float, r: float,
                 y_span: float = 8.0, s_span: float = 8.0,
                 n_grid: int = 161, refine_rounds: int = 2) -> float:
    """Numerical inf over {y <= x, s <= r} of J0(y,s) + t*Psi((x-y)/t, (r-s)/t).

    Grid search plus local subgrid refinement; an infimum attained on the
    far (lower/left) edge of the search box raises GridTooNarrowError."""
    if t <= 0:
        raise ValueError("t must be > 0")
    ys = np.linspace(x - y_span, x, n_grid)
    ss = np.linspace(r - s_span, r, n_grid)
    vals = np.empty((n_grid, n_grid))
    for a, y in enumerate(ys):
        for b, s in enumerate(ss):
            vals[a, b] = j0(y, s) + t * psi((x - y) / t, (r - s) / t)
    if not np.isfinite(vals).any():
        raise GridTooNarrowError("no finite values in the search box")
    a, b = np.unravel_index(np.nanargmin(np.where(np.isfinite(vals), vals, np.inf)),
                            vals.shape)
    if a == 0 or b == 0:
        raise GridTooNarrowError(
            "infimum on the search boundary; widen y_span/s_span")
    best = float(vals[a, b])
    y_lo, y_hi = ys[max(a - 1, 0)], ys[min(a + 1, n_grid - 1)]
    s_lo, s_hi = ss[max(b - 1, 0)], ss[min(b + 1, n_grid - 1)]
    for _ in range(refine_rounds):
        ys2 = np.linspace(y_lo, min(y_hi, x), 17)
        ss2 = np.linspace(s_lo, min(s_hi, r), 17)
        sub = np.empty((17, 17))
        for a2, y in enumerate(ys2):
            for b2, s in enumerate(ss2):
                sub[a2, b2] = j0(y, s) + t * psi((x - y) / t, (r - s) / t)
        a2, b2 = np.unravel_index(
            np.nanargmin(np.where(np.isfinite(sub), sub, np.inf)), sub.shape)
        best = min(best, float(sub[a2, b2]))
        dy, ds = ys2[1] - ys2[0], ss2[1] - ss2[0]
        y_lo, y_hi = ys2[a2] - dy, ys2[a2] + dy
        s_lo, s_hi = ss2[b2] - ds, ss2[b2] + ds
    return best
