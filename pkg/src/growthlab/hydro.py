"""Variational PDE layer: the exact wedge-shape and flux oracles, their
convex duality, Hopf-Lax evaluators for both growth families, minimizer sets
and shocks, the fluctuation transform, and simulation-vs-formula comparison.

Exclusion heights obey u_t + f(u_x) = 0 with f(r) = r(1-r) (TASEP rates) and
sup-form Hopf-Lax solution u(t,x) = sup_y { u0(y) + t g((x-y)/t) }.
Hammersley particle positions obey u_t + (u_x)^2 = 0 with inf-form solution
u(t,x) = inf_{y<=x} { u0(y) + (x-y)^2 / 4t }.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from growthlab import exclusion as _exc
from growthlab import hammersley as _ham
from growthlab._util import mean_stderr, replicate_map
from growthlab.optimize import GridMinResult, grid_max, grid_min
from growthlab.randkit import SeedSpec, sample_poisson_points


@dataclass(frozen=True)
class Profile:
    """Piecewise-linear profile: breakpoints xs (ascending) with values ys,
    extended beyond the ends at constant slope."""

    xs: np.ndarray
    ys: np.ndarray

    @staticmethod
    def make(xs, ys) -> "Profile":
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape or len(xs) < 1:
            raise ValueError("need equal-length 1-d breakpoint arrays")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        return Profile(xs, ys)

    @staticmethod
    def from_callable(f, lo: float, hi: float, n: int = 513) -> "Profile":
        xs = np.linspace(lo, hi, n)
        return Profile.make(xs, [f(x) for x in xs])

    def edge_slopes(self) -> tuple[float, float]:
        if len(self.xs) == 1:
            return 0.0, 0.0
        s_left = (self.ys[1] - self.ys[0]) / (self.xs[1] - self.xs[0])
        s_right = (self.ys[-1] - self.ys[-2]) / (self.xs[-1] - self.xs[-2])
        return float(s_left), float(s_right)

    def __call__(self, y):
        y_arr = np.asarray(y, dtype=float)
        out = np.interp(y_arr, self.xs, self.ys)
        s_left, s_right = self.edge_slopes()
        out = np.where(y_arr < self.xs[0],
                       self.ys[0] + s_left * (y_arr - self.xs[0]), out)
        out = np.where(y_arr > self.xs[-1],
                       self.ys[-1] + s_right * (y_arr - self.xs[-1]), out)
        return float(out) if np.isscalar(y) else out

    def slopes(self) -> np.ndarray:
        return np.diff(self.ys) / np.diff(self.xs)

    def is_nondecreasing(self) -> bool:
        s_left, s_right = self.edge_slopes()
        sl = self.slopes()
        lo = sl.min() if len(sl) else 0.0
        return bool(min(lo, s_left, s_right) >= -1e-12)

    def slopes_within(self, lo: float, hi: float) -> bool:
        s_left, s_right = self.edge_slopes()
        sl = np.concatenate([self.slopes(), [s_left, s_right]]) if len(self.xs) > 1 \
            else np.array([0.0])
        return bool(sl.min() >= lo - 1e-12 and sl.max() <= hi + 1e-12)


def wedge_profile() -> Profile:
    """min(0, y): the macroscopic wedge initial condition."""
    return Profile.make([-1.0, 0.0, 1.0], [-1.0, 0.0, 0.0])


def flat_profile(rho: float) -> Profile:
    """rho * y: the stationary slope-rho initial condition."""
    return Profile.make([0.0, 1.0], [0.0, rho])


def wedge_shape(x: float) -> float:
    """Exact interface limit of the wedge-started process at rates 1:
    -(1-x)^2 / 4 on [-1, 1] and min(0, x) outside."""
    if -1.0 <= x <= 1.0:
        return -0.25 * (1.0 - x) ** 2
    return min(0.0, x)


@dataclass(frozen=True)
class ShapeAndFlux:
    """Paired wedge shape g (concave) and flux f with f(0) = f(1) = 0."""

    g: object
    f: object
    asymmetry: float = 1.0


def tasep_shape_flux() -> ShapeAndFlux:
    return ShapeAndFlux(g=wedge_shape, f=lambda r: _exc.flux(r), asymmetry=1.0)


def duality_check(g, rho: float, y_range: tuple = (-3.0, 3.0),
                  n_grid: int = 4097, vtol: float = 1e-9) -> float:
    """Numerical sup over y of { rho*y + g(-y) }; convex duality makes this
    equal -f(rho) when g is the wedge shape."""
    if not 0 <= rho <= 1:
        raise ValueError("rho must be in [0, 1]")
    res = grid_max(lambda y: rho * y + g(-y), y_range[0], y_range[1],
                   n_grid=n_grid, vtol=vtol)
    return res.value


def hopf_lax_height(u0: Profile, g, t: float, x: float,
                    n_grid: int = 2049, vtol: float = 1e-9) -> float:
    """sup over y of { u0(y) + t g((x-y)/t) } for exclusion-type profiles.

    The sup restricts to y in [x-t, x+t]: outside [-1,1] the wedge shape is
    min(0, .), which makes wider y non-improving for profiles with slopes in
    [0, 1]."""
    if t <= 0:
        raise ValueError("t must be > 0")
    if not u0.slopes_within(0.0, 1.0):
        raise ValueError("exclusion profiles need slopes in [0, 1]")
    res = grid_max(lambda y: u0(y) + t * g((x - y) / t), x - t, x + t,
                   n_grid=n_grid, vtol=vtol)
    return res.value


@dataclass(frozen=True)
class MinimizerSet:
    ys: list

    def __post_init__(self):
        if not self.ys:
            raise ValueError("minimizer set must be nonempty")

    @property
    def diameter(self) -> float:
        return max(self.ys) - min(self.ys)

    def __len__(self) -> int:
        return len(self.ys)


def hopf_lax_hammersley(u0: Profile, t: float, x: float,
                        n_grid: int = 2049, vtol: float = 1e-9) -> tuple[float, MinimizerSet]:
    """inf over y <= x of { u0(y) + (x-y)^2 / 4t } with its minimizer set.

    The search window grows leftward by doubling until the linear-extension
    tail bound proves containment; a profile whose left extension decreases
    (tail hypothesis violated) is rejected as unbounded below."""
    if t <= 0:
        raise ValueError("t must be > 0")
    if not u0.is_nondecreasing():
        raise ValueError("hammersley profiles must be nondecreasing")
    s_left, _ = u0.edge_slopes()
    if s_left < 0:
        raise ValueError("left extension slope < 0: objective unbounded below")

    def phi(y):
        return float(u0(y) + (x - y) ** 2 / (4.0 * t))

    b0 = float(u0.xs[0])
    span = max(1.0, float(u0.xs[-1] - u0.xs[0]))
    lo = min(b0, x) - 2.0 * t * s_left - span
    while True:
        res = grid_min(phi, lo, x, n_grid=n_grid, vtol=vtol)
        if lo >= min(b0, x):
            lo_tail_min = phi(lo)
        else:
            # below lo <= b0 the profile is exactly linear with slope s_left,
            # so the tail objective is a convex quadratic minimized at
            # y* = x - 2 t s_left
            y_star = x - 2.0 * t * s_left
            lo_tail_min = phi(min(lo, y_star))
        if lo_tail_min >= res.value - 1e-12:
            return res.value, MinimizerSet(res.minimizers)
        lo = x - 2.0 * (x - lo)


def shock_detect(u0: Profile, t: float, x: float, tol: float = 1e-2,
                 **hl_kwargs) -> bool:
    """True when the Hopf-Lax minimizer set has diameter above tol."""
    _, mins = hopf_lax_hammersley(u0, t, x, **hl_kwargs)
    return mins.diameter > tol


def fluctuation_transform(zeta0, minimizers: MinimizerSet) -> float:
    """inf of the initial fluctuation field over the minimizer set.

    zeta0 may be a callable or sampled (xs, values) pairs; sampled fields are
    linearly interpolated between lattice sites."""
    if callable(zeta0):
        f = zeta0
    else:
        xs, vals = zeta0
        f = Profile.make(xs, vals)
    return min(float(f(y)) for y in minimizers.ys)


# ---------------------------------------------------------------------------
# simulation vs Hopf-Lax


def hydro_compare(model: str, u0: Profile, n: int, t: float, x_grid,
                  reps: int, seed: int, threads: int = 1) -> dict:
    """Compare scaled simulated observables at ([nx], nt) against the
    Hopf-Lax value on x_grid; returns per-x rows and the max abs error."""
    x_grid = [float(x) for x in x_grid]
    if model == "tasep-wedge":
        sim = _simulate_tasep_profile(u0, n, t, x_grid, reps, seed, threads)
        exact = [hopf_lax_height(u0, wedge_shape, t, x) for x in x_grid]
    elif model == "hammersley":
        sim = _simulate_hammersley_profile(u0, n, t, x_grid, reps, seed, threads)
        exact = [hopf_lax_hammersley(u0, t, x)[0] for x in x_grid]
    else:
        raise ValueError(f"unknown model {model!r}")
    rows = []
    for x, u_hl, u_sim in zip(x_grid, exact, sim):
        rows.append({"t": t, "x": x, "u_hopf_lax": u_hl, "u_simulated": u_sim,
                     "n": n, "error": u_sim - u_hl})
    max_err = max(abs(r["error"]) for r in rows)
    return {"rows": rows, "max_abs_error": max_err, "model": model, "n": n,
            "t": t, "reps": reps, "seed": seed}


def _simulate_tasep_profile(u0, n, t, x_grid, reps, seed, threads):
    horizon = n * t
    obs = int(math.ceil(max(abs(x) for x in x_grid) * n)) + 1
    W = _exc.safe_window(horizon, _exc.TASEP, obs_extent=obs)
    base = _exc.heights_from_profile(u0, n, W)

    def one(rep: int):
        traj = _exc.evolve(base, _exc.TASEP, horizon, SeedSpec(seed, rep),
                           check_boundary=False)
        return [traj.final.height(int(math.floor(n * x))) / n for x in x_grid]

    samples = np.array(replicate_map(one, reps, threads))
    return samples.mean(axis=0).tolist()


def _simulate_hammersley_profile(u0, n, t, x_grid, reps, seed, threads):
    s_left, s_right = u0.edge_slopes()
    s_max = max(float(np.max(u0.slopes())) if len(u0.xs) > 1 else 0.0,
                s_left, s_right)
    pad = 2.0 * t * s_max + 1.0
    i_lo = int(math.floor(n * (min(x_grid) - 2.0 * pad)))
    i_hi = int(math.ceil(n * (max(x_grid) + pad)))
    labels = np.arange(i_lo, i_hi + 1)
    z0 = np.asarray(u0(labels / n)) * n
    z0 = np.maximum.accumulate(z0)  # guard rounding-level monotonicity
    x_lo = float(z0[0])
    x_hi = float(z0[-1])

    def one(rep: int):
        pts = sample_poisson_points((x_lo + 1e-9, 0.0, x_hi, n * t), 1.0,
                                    SeedSpec(seed, rep))
        st = _ham.HammersleyState(z0.copy(), i_min=i_lo)
        traj = _ham.evolve_hammersley(st, pts, horizon=n * t)
        return [traj.final.position(int(math.floor(n * x))) / n for x in x_grid]

    samples = np.array(replicate_map(one, reps, threads))
    return samples.mean(axis=0).tolist()
