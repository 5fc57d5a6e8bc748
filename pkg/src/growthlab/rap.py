"""Random average process: each step replaces every height by a random
convex combination of its neighbors, with IID weight vectors per (site, step).

Weight draws are counter-based (pure functions of seed, step, site, and
vector coordinate), so a height's value depends only on its backward light
cone: padding beyond M*steps cannot change interior values, and the quenched
random-walk representation
    h_i(tau) = E^w[ h_{X_tau}(0) ]   (backward walk X in the fixed weights w)
is checkable against the iterated averaging to float accuracy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sp_special

from growthlab._util import mean_stderr, ols_loglog, replicate_map
from growthlab.randkit import (
    PURPOSE_ENV,
    PURPOSE_INIT,
    SeedSpec,
    _GOLDEN,
    _SALT,
    _mix_array,
    _mix_scalar,
)

LAWS = ("two_point_beta", "dirichlet", "identity", "symmetric_pair")


@dataclass(frozen=True)
class RapWeightScheme:
    """Law of the per-(site, step) probability vector over offsets -M..M.

    two_point_beta: mass B ~ Beta(alpha, beta) on offset 0 and 1-B on +1
        (the stationary fractional-Brownian example; parameters exposed).
    dirichlet: flat Dirichlet over all 2M+1 offsets.
    identity / symmetric_pair: deterministic test laws. identity violates
        non-degeneracy and symmetric_pair the no-sublattice condition by
        design; they exist for exactness tests only.
    kappa is the limit-covariance parameter; the paper leaves its dependence
    on the weight law unspecified, so it is user-supplied (or fitted).
    """

    law: str = "dirichlet"
    M: int = 1
    alpha: float = 1.0
    beta: float = 1.0
    kappa: float | None = None

    def __post_init__(self):
        if self.law not in LAWS:
            raise ValueError(f"unknown law {self.law!r}; choose from {LAWS}")
        if self.M < 1:
            raise ValueError("M must be >= 1")
        if self.law in ("two_point_beta", "symmetric_pair", "identity") and self.M != 1:
            raise ValueError(f"{self.law} uses M=1")
        if self.law == "two_point_beta" and (self.alpha <= 0 or self.beta <= 0):
            raise ValueError("beta parameters must be positive")

    @property
    def width(self) -> int:
        return 2 * self.M + 1

    def mean_weights(self) -> np.ndarray:
        if self.law == "two_point_beta":
            abar = self.alpha / (self.alpha + self.beta)
            return np.array([0.0, abar, 1.0 - abar])
        if self.law == "dirichlet":
            return np.full(self.width, 1.0 / self.width)
        if self.law == "identity":
            return np.array([0.0, 1.0, 0.0])
        return np.array([0.5, 0.0, 0.5])

    def drift(self) -> float:
        """Characteristic speed b = -sum_j j p(j)."""
        j = np.arange(-self.M, self.M + 1)
        return float(-(j * self.mean_weights()).sum())

    def sigma_a2(self) -> float:
        """Variance of the mean-weight distribution p(.)."""
        j = np.arange(-self.M, self.M + 1)
        p = self.mean_weights()
        return float((j * j * p).sum() - (j * p).sum() ** 2)

    def nondegenerate(self) -> bool:
        """P{max_j u_j < 1} > 0."""
        return self.law != "identity"

    def lattice_ok(self) -> bool:
        """Support of p(.) not contained in a proper sublattice b + hZ."""
        support = np.flatnonzero(self.mean_weights() > 0) - self.M
        if len(support) < 2:
            return False
        g = 0
        for d in np.diff(support):
            g = math.gcd(g, int(d))
        return g == 1


def _weights_row(scheme: RapWeightScheme, key: int, tau: int,
                 sites: np.ndarray) -> np.ndarray:
    """Weight vectors for every site at one step; pure function of
    (key, tau, site, coordinate)."""
    if scheme.law == "identity":
        out = np.zeros((len(sites), 3))
        out[:, 1] = 1.0
        return out
    if scheme.law == "symmetric_pair":
        out = np.zeros((len(sites), 3))
        out[:, 0] = 0.5
        out[:, 2] = 0.5
        return out
    base = _mix_scalar(key + tau * _GOLDEN)
    h_site = _mix_array(np.uint64(base)
                        + sites.astype(np.int64).view(np.uint64) * np.uint64(_SALT))
    if scheme.law == "two_point_beta":
        u = _unit(_mix_array(h_site + np.uint64(_GOLDEN)))
        b_draw = sp_special.betaincinv(scheme.alpha, scheme.beta, u)
        out = np.zeros((len(sites), 3))
        out[:, 1] = b_draw
        out[:, 2] = 1.0 - b_draw
        return out
    # flat Dirichlet: normalized exponentials, one counter stream per coord
    es = np.empty((len(sites), scheme.width))
    for c in range(scheme.width):
        u = _unit(_mix_array(h_site + np.uint64((c + 1) * _GOLDEN & ((1 << 64) - 1))))
        es[:, c] = -np.log(u)
    es /= es.sum(axis=1, keepdims=True)
    return es


def _unit(h: np.ndarray) -> np.ndarray:
    return ((h >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


@dataclass
class RapState:
    """Heights over the absolute site window [left, left + len - 1]."""

    heights: np.ndarray
    left: int
    tau: int = 0

    def site_index(self, i: int) -> int:
        idx = i - self.left
        if not 0 <= idx < len(self.heights):
            raise ValueError(f"site {i} outside window")
        return idx

    def height(self, i: int) -> float:
        return float(self.heights[self.site_index(i)])


class WindowExhaustedError(RuntimeError):
    def __init__(self, needed: int):
        super().__init__(
            f"window exhausted: initial width of at least {needed} required")
        self.needed = needed


def rap_step(state: RapState, scheme: RapWeightScheme, seed: SeedSpec) -> RapState:
    """One averaging step; the window shrinks by M per side so remaining
    interior values are exact."""
    M = scheme.M
    n_new = len(state.heights) - 2 * M
    if n_new < 1:
        raise WindowExhaustedError(len(state.heights) + 2 * M)
    tau_new = state.tau + 1
    key = seed.with_(purpose_tag=PURPOSE_ENV).key()
    sites = np.arange(state.left + M, state.left + M + n_new)
    w = _weights_row(scheme, key, tau_new, sites)
    new = np.zeros(n_new)
    for j in range(-M, M + 1):
        new += w[:, j + M] * state.heights[M + j: M + j + n_new]
    return RapState(heights=new, left=state.left + M, tau=tau_new)


def run_rap(state: RapState, scheme: RapWeightScheme, seed: SeedSpec,
            steps: int) -> RapState:
    for _ in range(steps):
        state = rap_step(state, scheme, seed)
    return state


def environment_row(scheme: RapWeightScheme, seed: SeedSpec, tau: int,
                    site_lo: int, site_hi: int) -> np.ndarray:
    """Materialize the weight vectors u(site, tau) for an inclusive site
    range; identical to what rap_step consumes at that step."""
    key = seed.with_(purpose_tag=PURPOSE_ENV).key()
    return _weights_row(scheme, key, tau, np.arange(site_lo, site_hi + 1))


def rwre_quenched_height(initial: RapState, scheme: RapWeightScheme,
                         seed: SeedSpec, i: int, tau: int) -> float:
    """Expectation of the initial heights under the backward walk's quenched
    occupation law after tau steps: exact convolution, no sampling.

    The walk started at (i, tau) uses the same fixed weights as rap_step, so
    this equals iterating the averaging; the two computations differ only in
    float summation order."""
    if tau < 0:
        raise ValueError("tau must be >= 0")
    M = scheme.M
    lo_needed, hi_needed = i - M * tau, i + M * tau
    if lo_needed < initial.left or \
            hi_needed > initial.left + len(initial.heights) - 1:
        raise ValueError("environment/initial coverage insufficient for the "
                         "backward light cone")
    if tau == 0:
        return initial.height(i)
    dist = np.array([1.0])
    lo = i
    for s in range(tau):
        level = tau - s
        row = environment_row(scheme, seed, level, lo - M, lo + M + len(dist) - 1)
        new = np.zeros(len(dist) + 2 * M)
        for off in range(scheme.width):
            j = off - M
            # walk at x (index k, site lo+k) moves to x+j with weight u_j(x)
            new[M + j: M + j + len(dist)] += dist * row[M: M + len(dist), off]
        dist = new
        lo -= M
    sl = initial.heights[lo - initial.left: lo - initial.left + len(dist)]
    return float(np.dot(dist, sl))


# ---------------------------------------------------------------------------
# characteristic current


def initial_increment_heights(n_sites: int, rho: float, v: float,
                              seed: SeedSpec, bounded: bool = False) -> np.ndarray:
    """Heights with IID increments of mean rho and variance v: Gaussian by
    default, uniform (bounded support) alternative for conservative moments."""
    rng = seed.with_(purpose_tag=PURPOSE_INIT).generator()
    if bounded:
        half = math.sqrt(3.0 * v)
        inc = rho + rng.uniform(-half, half, size=n_sites - 1)
    else:
        inc = rho + math.sqrt(v) * rng.standard_normal(n_sites - 1)
    h = np.zeros(n_sites)
    np.cumsum(inc, out=h[1:])
    return h


def current_z(scheme: RapWeightScheme, rho: float, v: float, y_bar: float,
              n: int, t: float, r: float, seed: SeedSpec,
              bounded: bool = False) -> float:
    """One sample of the net current across the characteristic:
    h at site [n*y_bar] + [r*sqrt(n)] + [n*t*b] and step [n*t], minus the
    time-zero height at [n*y_bar] + [r*sqrt(n)]."""
    b = scheme.drift()
    tau = int(math.floor(n * t))
    site0 = int(math.floor(n * y_bar)) + int(math.floor(r * math.sqrt(n)))
    site_end = site0 + int(math.floor(n * t * b))
    if tau == 0:
        return 0.0
    M = scheme.M
    left = min(site_end - M * tau, site0)
    right = max(site_end + M * tau, site0)
    heights = initial_increment_heights(right - left + 1, rho, v, seed, bounded)
    state = RapState(heights=heights, left=left, tau=0)
    h_start = state.height(site0)
    # trim to the exact backward cone of site_end before stepping
    state = _clip(state, site_end - M * tau, site_end + M * tau)
    state = run_rap(state, scheme, seed, tau)
    return state.height(site_end) - h_start


def _clip(state: RapState, lo: int, hi: int) -> RapState:
    a = state.site_index(lo)
    b = state.site_index(hi)
    return RapState(state.heights[a: b + 1].copy(), left=lo, tau=state.tau)


def current_scaling(scheme: RapWeightScheme, rho: float, v: float,
                    n_grid, t: float, r: float, reps, seed: int,
                    threads: int = 1) -> dict:
    """Log-log slope of Var Z_n(t, r) against n; order-sqrt(n) variance is
    the n^{1/4}-fluctuation signature. reps may be an int or a per-n list."""
    n_grid = [int(n) for n in n_grid]
    if isinstance(reps, int):
        reps = [reps] * len(n_grid)
    variances = []
    for n, rep_count in zip(n_grid, reps):
        base = (n % 97) * 10_000_000

        def one(k: int, _n=n, _b=base) -> float:
            return current_z(scheme, rho, v, 0.0, _n, t, r,
                             SeedSpec(seed, _b + k))

        zs = replicate_map(one, rep_count, threads)
        m = math.fsum(zs) / len(zs)
        variances.append(math.fsum((z - m) ** 2 for z in zs) / (len(zs) - 1))
    slope, se = ols_loglog(n_grid, variances)
    return {"slope": slope, "stderr": se, "n_grid": n_grid,
            "variances": variances}


# ---------------------------------------------------------------------------
# limit covariance (fractional Brownian motion, Hurst 1/4)


def limit_covariance(s: float, t: float, r: float, rho_bar: float,
                     v_bar: float, sigma_a: float, kappa: float) -> float:
    """Temporal covariance of the limit current at fixed r in the special
    case v_bar = kappa * rho_bar^2:
        (sigma_a*kappa*rho_bar^2/sqrt(2*pi)) * (sqrt(s)+sqrt(t)-sqrt(|t-s|)),
    the covariance of fractional Brownian motion with Hurst parameter 1/4
    (up to the constant)."""
    if s < 0 or t < 0:
        raise ValueError("times must be >= 0")
    if abs(v_bar - kappa * rho_bar**2) > 1e-9:
        raise ValueError("special case requires v_bar == kappa * rho_bar^2")
    c = sigma_a * kappa * rho_bar**2 / math.sqrt(2.0 * math.pi)
    return c * (math.sqrt(s) + math.sqrt(t) - math.sqrt(abs(t - s)))


def fit_kappa(z_samples: np.ndarray, times, n: int, rho_bar: float,
              sigma_a: float) -> dict:
    """Least-squares fit of kappa from simulated currents.

    z_samples: (reps, len(times)) matrix of Z_n(t_k, r) samples. The fit
    matches the empirical covariance of n^{-1/4} Z to the limit formula and
    is an estimate, not an exact value (the paper gives no closed form)."""
    z = np.asarray(z_samples, dtype=float) * n ** -0.25
    times = np.asarray(list(times), dtype=float)
    emp = np.cov(z, rowvar=False)
    base = np.empty_like(emp)
    for a, s in enumerate(times):
        for b_i, t in enumerate(times):
            base[a, b_i] = (sigma_a * rho_bar**2 / math.sqrt(2 * math.pi)
                            * (math.sqrt(s) + math.sqrt(t) - math.sqrt(abs(t - s))))
    kappa = float((emp * base).sum() / (base * base).sum())
    resid = emp - kappa * base
    return {"kappa": kappa, "flag": "estimate",
            "rms_residual": float(np.sqrt((resid**2).mean()))}


def current_z_path(scheme: RapWeightScheme, rho: float, v: float, n: int,
                   times, r: float, seed: SeedSpec) -> np.ndarray:
    """Z_n(t_k, r) along one trajectory for an increasing time grid."""
    b = scheme.drift()
    M = scheme.M
    times = sorted(float(t) for t in times)
    taus = [int(math.floor(n * t)) for t in times]
    site0 = int(math.floor(r * math.sqrt(n)))
    sites_end = [site0 + int(math.floor(n * t * b)) for t in times]
    tau_max = taus[-1]
    lo = min(min(s - M * (tau_max - 0), site0) for s in sites_end)
    hi = max(max(s + M * tau_max, site0) for s in sites_end)
    heights = initial_increment_heights(hi - lo + 1, rho, v, seed)
    state = RapState(heights=heights, left=lo, tau=0)
    h_start = state.height(site0)
    out = np.empty(len(times))
    for k, (tau, s_end) in enumerate(zip(taus, sites_end)):
        while state.tau < tau:
            state = rap_step(state, scheme, seed)
        out[k] = state.height(s_end) - h_start
    return out
