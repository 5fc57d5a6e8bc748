"""The acceptance gate: twelve criteria with pinned sizes, seeds, and
tolerances (see thresholds.py). Each criterion returns a CriterionResult;
the CLI `verify` subcommand and tests/test_acceptance.py both run these."""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass

import numpy as np

from growthlab import exclusion as exc
from growthlab import hammersley as ham
from growthlab import hydro, ldp, lpp, rap
from growthlab._util import default_threads
from growthlab.randkit import (
    EXPONENTIAL,
    QUADRANT,
    TASEP_WEDGE,
    SeedSpec,
    WeightField,
    sample_poisson_points,
)
from growthlab.thresholds import ACCEPTANCE


@dataclass(frozen=True)
class CriterionResult:
    cid: int
    name: str
    passed: bool
    value: object
    bounds: str
    seconds: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} criterion {self.cid:2d} {self.name}: "
                f"value={self.value} bounds={self.bounds} "
                f"[{self.seconds:.1f}s]{' ' + self.detail if self.detail else ''}")


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def c1_corner_shape(threads: int) -> CriterionResult:
    cfg = ACCEPTANCE["corner_shape"]

    def run():
        return lpp.estimate_shape(EXPONENTIAL, (1.0, 1.0), cfg["n"],
                                  cfg["replicates"], cfg["seed"], threads=threads)

    est, secs = _timed(run)
    ok = cfg["lo"] <= est.mean <= cfg["hi"]
    return CriterionResult(1, "corner growth limit shape", ok,
                           round(est.mean, 5), f"[{cfg['lo']}, {cfg['hi']}]",
                           secs, f"stderr={est.stderr:.4f}")


def c2_wedge_shape(threads: int) -> CriterionResult:
    cfg = ACCEPTANCE["wedge_shape"]

    def run():
        from growthlab._util import mean_stderr, replicate_map

        t = cfg["t"]
        W = exc.safe_window(t, exc.TASEP)

        def one(rep):
            traj = exc.evolve(exc.init_wedge(W), exc.TASEP, t,
                              SeedSpec(cfg["seed"], rep))
            return traj.final.height(0) / t

        return mean_stderr(replicate_map(one, cfg["replicates"], threads))

    (mean, se), secs = _timed(run)
    ok = cfg["lo"] <= mean <= cfg["hi"]
    return CriterionResult(2, "wedge interface speed at origin", ok,
                           round(mean, 5), f"[{cfg['lo']}, {cfg['hi']}]",
                           secs, f"stderr={se:.4f}")


def c3_stationary_current(threads: int) -> CriterionResult:
    cfg = ACCEPTANCE["stationary_current"]

    def run():
        from growthlab._util import mean_stderr, replicate_map

        t = cfg["t"]
        W = exc.safe_window(t, exc.TASEP)

        def one(rep):
            sd = SeedSpec(cfg["seed"], rep)
            st = exc.init_stationary(cfg["rho"], W, sd)
            traj = exc.evolve(st, exc.TASEP, t, sd, check_boundary=False)
            return traj.final.height(0) / t

        return mean_stderr(replicate_map(one, cfg["replicates"], threads))

    (mean, se), secs = _timed(run)
    ok = cfg["lo"] <= mean <= cfg["hi"]
    return CriterionResult(3, "stationary mean current", ok, round(mean, 5),
                           f"[{cfg['lo']}, {cfg['hi']}]", secs,
                           f"stderr={se:.4f}")


def c4_second_class_drift(threads: int) -> CriterionResult:
    cfg = ACCEPTANCE["second_class_drift"]
    out, secs = _timed(lambda: exc.second_class_drift(
        cfg["rho"], exc.TASEP, cfg["t"], cfg["replicates"], cfg["seed"],
        threads=threads))
    ok = cfg["lo"] <= out["mean"] <= cfg["hi"] and out["n_discarded"] == 0
    return CriterionResult(4, "second-class particle drift", ok,
                           round(out["mean"], 5), f"[{cfg['lo']}, {cfg['hi']}]",
                           secs, f"stderr={out['stderr']:.4f} "
                                 f"discarded={out['n_discarded']}")


def c5_variance_identity(threads: int) -> CriterionResult:
    cfg = ACCEPTANCE["variance_identity"]
    out, secs = _timed(lambda: exc.variance_identity_check(
        cfg["rho"], exc.TASEP, cfg["v"], cfg["t"], cfg["replicates"],
        cfg["seed"], threads=threads))
    ok = cfg["lo"] <= out["ratio"] <= cfg["hi"]
    return CriterionResult(5, "variance-coupling identity ratio", ok,
                           round(out["ratio"], 4), f"[{cfg['lo']}, {cfg['hi']}]",
                           secs, f"lhs={out['lhs']:.3f} rhs={out['rhs']:.3f}")


def c6_kpz_exponent(threads: int) -> CriterionResult:
    cfg = ACCEPTANCE["kpz_exponent"]

    def run():
        on = exc.characteristic_variance_exponent(
            cfg["rho"], exc.TASEP, cfg["t_grid"], cfg["replicates"],
            cfg["seed"], threads=threads)
        off = exc.characteristic_variance_exponent(
            cfg["rho"], exc.TASEP, cfg["t_grid"], cfg["off_replicates"],
            cfg["seed"] + 1, v=cfg["off_v"], threads=threads)
        return on, off

    (on, off), secs = _timed(run)
    ok = (cfg["lo"] <= on["slope"] <= cfg["hi"]
          and cfg["off_lo"] <= off["slope"] <= cfg["off_hi"])
    return CriterionResult(
        6, "variance growth exponents (characteristic / off)", ok,
        (round(on["slope"], 3), round(off["slope"], 3)),
        f"[{cfg['lo']}, {cfg['hi']}] / [{cfg['off_lo']}, {cfg['off_hi']}]",
        secs, f"se=({on['stderr']:.3f}, {off['stderr']:.3f})")


def c7_ulam_constant(threads: int) -> CriterionResult:
    cfg = ACCEPTANCE["ulam_constant"]
    out, secs = _timed(lambda: ham.ulam_estimate(
        cfg["n"], cfg["replicates"], cfg["seed"], threads=threads))
    ok = cfg["lo"] <= out["mean"] <= cfg["hi"]
    return CriterionResult(7, "Ulam constant", ok, round(out["mean"], 5),
                           f"[{cfg['lo']}, {cfg['hi']}]", secs,
                           f"stderr={out['stderr']:.4f}")


# ---------------------------------------------------------------------------
# criterion 8: exact-equality oracles


def _c8_recursion_vs_enumeration(seed: int) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    for K, L in [(1, 1), (3, 2), (5, 7), (7, 7)]:
        w = rng.exponential(size=(K, L))
        grid = lpp.grid_from_weights(w)
        for k in range(1, K + 1):
            for l in range(1, L + 1):
                best = -math.inf
                for rights in itertools.combinations(range(k + l - 2), k - 1):
                    i = j = 1
                    tot = w[0, 0]
                    for s in range(k + l - 2):
                        if s in rights:
                            i += 1
                        else:
                            j += 1
                        tot += w[i - 1, j - 1]
                    best = max(best, tot)
                if abs(grid.value(k, l) - best) > 1e-12:
                    return False, f"recursion!=enumeration at {(k, l)}"
    return True, "recursion==enumeration (<=7x7 exhaustive)"


def _c8_superadditivity(seed: int, instances: int) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    for _ in range(instances):
        fld = WeightField(SeedSpec(int(rng.integers(1 << 62))))
        m, n = int(rng.integers(2, 14)), int(rng.integers(2, 14))
        k, l = int(rng.integers(0, m)), int(rng.integers(0, n))
        g = lpp.passage_times_corner(fld, m, n)
        lhs = g.value(k, l) + lpp.passage_between(fld, (k, l), (m, n))
        if lhs > g.value(m, n) + 1e-9:
            return False, f"superadditivity violated at {(k, l, m, n)}"
    return True, f"superadditivity holds on {instances} instances"


def _c8_bijection(seed: int, extent: int) -> tuple[bool, str]:
    wedge = WeightField(SeedSpec(seed), orientation=TASEP_WEDGE)
    quad = WeightField(SeedSpec(seed), orientation=QUADRANT)
    gw = lpp.passage_times_wedge(wedge, k_max=extent, ell_min=-extent)
    gq = lpp.passage_times_corner(quad, 2 * extent + 1, extent)
    worst = 0.0
    for l in range(-extent, 0):
        for k in range(l + 1, extent + 1):
            worst = max(worst, abs(gw.value(k, l) - gq.value(k - l, -l)))
    return worst == 0.0, f"wedge/corner bijection max|diff|={worst}"


def _c8_envelope(seed: int, W: int, horizon: float) -> tuple[bool, str]:
    st = exc.init_stationary(0.5, W, SeedSpec(seed))
    rep = exc.envelope_coupled_run(st, horizon, SeedSpec(seed + 1))
    return rep.equal, (f"envelope equality over {rep.attempts_checked} attempts, "
                       f"max|diff|={rep.max_abs_diff}")


def _c8_variational(seed: int, instances: int) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for inst in range(instances):
        z0 = np.sort(rng.uniform(0, 25, 40))
        st = ham.HammersleyState(z0, i_min=0)
        rect = (float(z0[0]) + 1e-9, 0.0, 26.0, 2.0)
        pts = sample_poisson_points(rect, 50 / ((rect[2] - rect[0]) * 2.0),
                                    SeedSpec(seed + inst))
        rep = ham.check_variational(st, pts, horizon=2.0,
                                    sites=range(22, 40), guard_margin=3)
        worst = max(worst, rep.max_abs_diff)
    return worst <= 1e-12, (f"variational equality on {instances} instances, "
                            f"max|diff|={worst:.1e}")


def _c8_rap_rwre(seed: int, tol: float) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for law, kw, tau in [("two_point_beta", dict(alpha=1.5, beta=0.9), 3),
                         ("dirichlet", dict(M=1), 4),
                         ("dirichlet", dict(M=2), 3)]:
        scheme = rap.RapWeightScheme(law, **kw)
        st = rap.RapState(rng.normal(size=45).cumsum(), left=-22)
        sd = SeedSpec(seed + tau)
        direct = rap.run_rap(st, scheme, sd, steps=tau)
        M = scheme.M
        for i in range(-22 + M * tau, 23 - M * tau):
            worst = max(worst, abs(direct.height(i)
                                   - rap.rwre_quenched_height(st, scheme, sd, i, tau)))
    return worst <= tol, f"rap vs quenched-walk max|diff|={worst:.2e}"


def _c8_lis_cross(seed: int, instances: int) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    for _ in range(instances):
        P = int(rng.integers(1, 400))
        xs, ts = rng.random(P) * 5, rng.random(P) * 3
        from growthlab.randkit import PlanarPoints

        q = ham.UlamQuery((0, 0, 5, 3), PlanarPoints((0, 0, 5, 3), xs, ts))
        if ham.lis_count(q) != ham.lis_count_dp(q):
            return False, "patience != quadratic DP"
    return True, f"patience==DP on {instances} instances"


def c8_exact_suite(threads: int) -> CriterionResult:
    cfg = ACCEPTANCE["exact_suite"]

    def run():
        seed = cfg["seed"]
        return [
            _c8_recursion_vs_enumeration(seed),
            _c8_superadditivity(seed + 1, cfg["superadd_instances"]),
            _c8_bijection(seed + 2, cfg["bijection_extent"]),
            _c8_envelope(seed + 3, cfg["envelope_W"], cfg["envelope_horizon"]),
            _c8_variational(seed + 4, cfg["variational_instances"]),
            _c8_rap_rwre(seed + 5, cfg["rap_rwre_tol"]),
            _c8_lis_cross(seed + 6, cfg["lis_cross_instances"]),
        ]

    checks, secs = _timed(run)
    ok = all(c[0] for c in checks)
    detail = "; ".join(c[1] for c in checks)
    return CriterionResult(8, "exact-equality oracle suite", ok,
                           f"{sum(c[0] for c in checks)}/{len(checks)}",
                           "all exact", secs, detail)


def c9_analytic_suite(threads: int) -> CriterionResult:
    cfg = ACCEPTANCE["analytic_suite"]

    def run():
        checks = []
        worst = max(abs(hydro.duality_check(hydro.wedge_shape, float(r))
                        + r * (1 - r))
                    for r in np.linspace(0, 1, cfg["duality_grid"]))
        checks.append((worst <= cfg["duality_tol"], f"duality max err={worst:.1e}"))
        vt = cfg["value_tol"]
        checks.append((ldp.ulam_upper_rate(2.0) == 0.0, "I(2)=0"))
        checks.append((abs(ldp.ulam_upper_rate(2.5) - (5 * math.log(2) - 3)) <= vt,
                       "I(2.5)=5ln2-3"))
        checks.append((ldp.ulam_lower_rate(2.0) == 0.0, "U(2)=0"))
        checks.append((abs(ldp.ulam_lower_rate(0.0) - 1.0) <= vt, "U(0)=1"))
        lw = max(ldp.rw_legendre_check(0.3), ldp.rw_legendre_check(0.7))
        checks.append((lw <= cfg["legendre_tol"], f"legendre max err={lw:.1e}"))
        h = 1e-6
        w1 = max(abs((ldp.ulam_lower_rate(x + h) - ldp.ulam_lower_rate(x - h))
                     / (2 * h) + ldp.poisson_mean2_rate(x))
                 for x in np.linspace(0.1, 1.9, 30))
        checks.append((w1 <= cfg["deriv_tol"], f"U'=-R2 max err={w1:.1e}"))
        w2 = max(abs((ldp.ulam_upper_rate(x + h) - ldp.ulam_upper_rate(x - h))
                     / (2 * h) - 2 * math.acosh(x / 2))
                 for x in np.linspace(2.05, 6.0, 40))
        checks.append((w2 <= cfg["deriv_tol"], f"I'=2acosh(x/2) max err={w2:.1e}"))
        return checks

    checks, secs = _timed(run)
    ok = all(c[0] for c in checks)
    return CriterionResult(9, "analytic evaluator suite", ok,
                           f"{sum(c[0] for c in checks)}/{len(checks)}",
                           "all within tolerance", secs,
                           "; ".join(c[1] for c in checks))


def c10_ldp_tails(threads: int) -> CriterionResult:
    cfg = ACCEPTANCE["ldp_tails"]

    def run():
        lower = ldp.mc_tail("ulam_lower", cfg["lower_n"], 0.0,
                            cfg["lower_replicates"], cfg["seed"], threads=threads)
        uppers = [ldp.mc_tail("ulam_upper", n, cfg["upper_x"],
                              cfg["upper_replicates"], cfg["seed"] + n,
                              threads=threads)
                  for n in cfg["upper_n_grid"]]
        return lower, uppers

    (lower, uppers), secs = _timed(run)
    lower_ok = (lower.estimate is not None
                and abs(lower.estimate + 1.0) <= cfg["lower_tol"])
    rates = [None if u.estimate is None else -u.estimate for u in uppers]
    have_all = all(r is not None for r in rates)
    increasing = have_all and all(b > a for a, b in zip(rates, rates[1:]))
    final_in = have_all and cfg["upper_final_lo"] <= rates[-1] <= cfg["upper_final_hi"]
    upper_ok = increasing and final_in
    ok = lower_ok and upper_ok
    detail = (f"lower={None if lower.estimate is None else round(lower.estimate, 4)} "
              f"(exact -1); upper rates={[(None if r is None else round(r, 4)) for r in rates]} "
              f"toward {ldp.ulam_upper_rate(cfg['upper_x']):.4f}; "
              f"increasing={increasing} final_in={final_in}")
    return CriterionResult(
        10, "Monte Carlo tail estimates", ok,
        (None if lower.estimate is None else round(lower.estimate, 4),
         None if rates[-1] is None else round(rates[-1], 4)),
        f"lower -1+-{cfg['lower_tol']}; upper increasing, final in "
        f"[{cfg['upper_final_lo']}, {cfg['upper_final_hi']}]", secs, detail)


def c11_hydro_compare(threads: int) -> CriterionResult:
    cfg = ACCEPTANCE["hydro_compare"]

    def run():
        small = hydro.hydro_compare("tasep-wedge", hydro.wedge_profile(),
                                    cfg["n_small"], cfg["t"], cfg["x_grid"],
                                    cfg["replicates"], cfg["seed"],
                                    threads=threads)
        big = hydro.hydro_compare("tasep-wedge", hydro.wedge_profile(),
                                  cfg["n_big"], cfg["t"], cfg["x_grid"],
                                  cfg["replicates"], cfg["seed"] + 1,
                                  threads=threads)
        return small, big

    (small, big), secs = _timed(run)
    ok = (big["max_abs_error"] <= cfg["max_err"]
          and big["max_abs_error"] < small["max_abs_error"])
    return CriterionResult(
        11, "hydrodynamic comparison (wedge)", ok,
        (round(float(small["max_abs_error"]), 4),
         round(float(big["max_abs_error"]), 4)),
        f"n={cfg['n_big']} err<={cfg['max_err']} and < n={cfg['n_small']} err",
        secs)


def c12_rap_scaling(threads: int) -> CriterionResult:
    cfg = ACCEPTANCE["rap_scaling"]
    scheme = rap.RapWeightScheme("dirichlet", M=1)
    out, secs = _timed(lambda: rap.current_scaling(
        scheme, cfg["rho"], cfg["v"], cfg["n_grid"], 1.0, 0.0,
        list(cfg["replicates"]), cfg["seed"], threads=threads))
    ok = cfg["lo"] <= out["slope"] <= cfg["hi"]
    return CriterionResult(12, "RAP current variance scaling", ok,
                           round(out["slope"], 3), f"[{cfg['lo']}, {cfg['hi']}]",
                           secs, f"stderr={out['stderr']:.3f}")


CRITERIA = {
    1: c1_corner_shape, 2: c2_wedge_shape, 3: c3_stationary_current,
    4: c4_second_class_drift, 5: c5_variance_identity, 6: c6_kpz_exponent,
    7: c7_ulam_constant, 8: c8_exact_suite, 9: c9_analytic_suite,
    10: c10_ldp_tails, 11: c11_hydro_compare, 12: c12_rap_scaling,
}

SUITES = {
    "deterministic": [8],
    "analytic": [9],
    "fast": [1, 2, 3, 8, 9],
    "statistical": [1, 2, 3, 4, 5, 6, 7, 10, 11, 12],
    "full": list(range(1, 13)),
}


def run_suite(name: str, threads: int | None = None, echo=print) -> list[CriterionResult]:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    threads = default_threads() if threads is None else threads
    results = []
    for cid in SUITES[name]:
        res = CRITERIA[cid](threads)
        results.append(res)
        if echo:
            echo(res.line())
    return results
