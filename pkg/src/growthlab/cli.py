"""Command-line front door.

Subcommands: shape, simulate, fluct, coupling, hydro, ldp, verify.
Configuration is a flat key=value text file (--config) whose entries become
argument defaults; explicit command-line flags override them. Every run
writes a JSON summary {config, estimates, stderr, pass} (and CSV when
--csv is given) with the full configuration echoed, so artifacts are exactly
regenerable. Exit codes: 0 pass, 1 fail, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from growthlab import exclusion as exc
from growthlab import hammersley as ham
from growthlab import hydro as hyd
from growthlab import ldp as ldp_mod
from growthlab import lpp, rap
from growthlab import acceptance, exports
from growthlab._util import default_threads
from growthlab.randkit import EXPONENTIAL, GEOMETRIC, SeedSpec, sample_poisson_points

LAW_NAMES = {"exp": EXPONENTIAL, "geo": GEOMETRIC}


class ConfigError(Exception):
    pass


def read_config(path: str) -> dict:
    """Flat key=value lines; '#' starts a comment; values stay strings and
    are coerced by argparse types."""
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"bad config line (need key=value): {raw!r}")
        key, val = line.split("=", 1)
        out[key.strip().replace("-", "_")] = val.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="growthlab",
        description="Simulation and verification lab for directed random "
                    "growth models on the plane.")
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--threads", type=int, default=default_threads())
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", help="JSON summary path (default: stdout only)")
    p.add_argument("--csv", help="CSV output path")
    sub = p.add_subparsers(dest="command", required=True)

    sh = sub.add_parser("shape", help="limit-shape estimates (corner LPP / Ulam)")
    sh.add_argument("--model", choices=["corner", "ulam"], default="corner")
    sh.add_argument("--law", choices=["exp", "geo"], default="exp")
    sh.add_argument("--param", type=float, default=1.0)
    sh.add_argument("--x", type=float, default=1.0)
    sh.add_argument("--y", type=float, default=1.0)
    sh.add_argument("--n", type=int, default=200)
    sh.add_argument("--reps", type=int, default=50)

    si = sub.add_parser("simulate", help="trajectory runs with CSV export")
    si.add_argument("--model", choices=["tasep", "asep", "kexclusion", "hammersley"],
                    default="tasep")
    si.add_argument("--init", choices=["wedge", "stationary", "flat"],
                    default="stationary")
    si.add_argument("--rho", type=float, default=0.5)
    si.add_argument("--p", type=float, default=1.0)
    si.add_argument("--q", type=float, default=0.0)
    si.add_argument("--K", type=int, default=1)
    si.add_argument("--L", type=int, default=256, help="ring size (kexclusion)")
    si.add_argument("--W", type=int, default=0, help="window half-width (0=auto)")
    si.add_argument("--horizon", type=float, default=50.0)
    si.add_argument("--snapshots", default="", help="comma-separated times")
    si.add_argument("--sites", default="-10:10", help="site range lo:hi for CSV")
    si.add_argument("--particles", type=int, default=50)
    si.add_argument("--reps", type=int, default=1)

    fl = sub.add_parser("fluct", help="fluctuation exponent estimation")
    fl.add_argument("--model", choices=["asep", "rap"], default="asep")
    fl.add_argument("--rho", type=float, default=0.5)
    fl.add_argument("--p", type=float, default=1.0)
    fl.add_argument("--q", type=float, default=0.0)
    fl.add_argument("--v", type=float, default=None,
                    help="observer speed (default: characteristic)")
    fl.add_argument("--t-grid", default="128,256,512,1024,2048,4096")
    fl.add_argument("--n-grid", default="64,128,256,512,1024")
    fl.add_argument("--var", type=float, default=0.25,
                    help="initial increment variance (rap)")
    fl.add_argument("--reps", type=int, default=200)

    co = sub.add_parser("coupling", help="second-class / envelope / variational checks")
    co.add_argument("--check", choices=["second-class", "envelope", "variational"],
                    default="second-class")
    co.add_argument("--rho", type=float, default=0.3)
    co.add_argument("--p", type=float, default=1.0)
    co.add_argument("--q", type=float, default=0.0)
    co.add_argument("--horizon", type=float, default=100.0)
    co.add_argument("--W", type=int, default=40)
    co.add_argument("--reps", type=int, default=100)
    co.add_argument("--snapshots", default="", help="comma-separated times")
    co.add_argument("--shared-clocks", type=int, default=1)

    hy = sub.add_parser("hydro", help="simulation vs Hopf-Lax comparison")
    hy.add_argument("--model", choices=["tasep-wedge", "hammersley"],
                    default="tasep-wedge")
    hy.add_argument("--profile", default="wedge",
                    help="wedge | flat:<rho> | pl:<x1:y1,x2:y2,...>")
    hy.add_argument("--n", type=int, default=125)
    hy.add_argument("--t", type=float, default=1.0)
    hy.add_argument("--x-grid", default="-0.8,-0.4,0,0.4,0.8")
    hy.add_argument("--reps", type=int, default=20)
    hy.add_argument("--max-err", type=float, default=None,
                    help="pass/fail bound on the max abs error")

    ld = sub.add_parser("ldp", help="rate functions and Monte Carlo tails")
    ld.add_argument("--action", choices=["rates", "tail", "psi"], default="rates")
    ld.add_argument("--x", type=float, default=2.5)
    ld.add_argument("--n", type=int, default=8)
    ld.add_argument("--tail", choices=["upper", "lower"], default="upper")
    ld.add_argument("--reps", type=int, default=100_000)
    ld.add_argument("--w", type=float, default=1.0)
    ld.add_argument("--r", type=float, default=0.5)
    ld.add_argument("--n-grid", default="16,32,64")
    ld.add_argument("--grid", default="0:6:25", help="rates grid lo:hi:count")

    ve = sub.add_parser("verify", help="acceptance suite with fixed seeds")
    ve.add_argument("--suite", choices=sorted(acceptance.SUITES), default="full")
    return p


def _parse_floats(text: str) -> list:
    return [float(tok) for tok in text.split(",") if tok.strip() != ""]


def _parse_profile(spec: str) -> hyd.Profile:
    if spec == "wedge":
        return hyd.wedge_profile()
    if spec.startswith("flat:"):
        return hyd.flat_profile(float(spec.split(":", 1)[1]))
    if spec.startswith("pl:"):
        pts = [tuple(map(float, tok.split(":"))) for tok in spec[3:].split(",")]
        xs, ys = zip(*pts)
        return hyd.Profile.make(xs, ys)
    raise ConfigError(f"bad profile spec {spec!r}")


def _params(p: float, q: float) -> exc.AsymmetryParams:
    return exc.AsymmetryParams(p, q)


# ---------------------------------------------------------------------------
# command implementations: return (payload, passed, csv_kind, csv_rows)


def cmd_shape(args):
    if args.model == "corner":
        est = lpp.estimate_shape(LAW_NAMES[args.law], (args.x, args.y), args.n,
                                 args.reps, args.seed, param=args.param,
                                 threads=args.threads)
        payload = {"estimates": {"mean": est.mean}, "stderr": est.stderr}
        return payload, True, "shape", [est.csv_row()]
    out = ham.ulam_estimate(args.n, args.reps, args.seed, threads=args.threads)
    rows = [[args.n, rep, L, args.seed] for rep, L in enumerate(out["samples"])]
    payload = {"estimates": {"mean": out["mean"]}, "stderr": out["stderr"]}
    return payload, True, "ulam", rows


def cmd_simulate(args):
    if args.model == "kexclusion":
        out = exc.k_exclusion_flux_estimate(args.K, args.rho, args.L,
                                            args.horizon, args.seed,
                                            reps=args.reps, threads=args.threads)
        return ({"estimates": {"flux": out["flux"]}, "stderr": out["stderr"]},
                True, None, None)
    if args.model == "hammersley":
        rows = []
        for rep in range(args.reps):
            z0 = np.arange(args.particles, dtype=float)
            pts = sample_poisson_points((0.0, 0.0, float(args.particles),
                                         args.horizon), 1.0,
                                        SeedSpec(args.seed, rep))
            traj = ham.evolve_hammersley(ham.HammersleyState(z0), pts,
                                         args.horizon)
            for (t, label, z) in traj.moves:
                if label is not None:
                    rows.append([t, label, z, rep])
        return ({"estimates": {"moves": len(rows)}, "stderr": None},
                True, "particles", rows)
    params = _params(args.p, args.q) if args.model == "asep" else exc.TASEP
    snaps = _parse_floats(args.snapshots) or [args.horizon]
    lo, hi = (int(tok) for tok in args.sites.split(":"))
    W = args.W or exc.safe_window(args.horizon, params,
                                  obs_extent=max(abs(lo), abs(hi)))
    rows = []
    finals = []
    for rep in range(args.reps):
        sd = SeedSpec(args.seed, rep)
        if args.init == "wedge":
            st = exc.init_wedge(W)
        elif args.init == "flat":
            st = exc.init_flat(W, K=args.K)
        else:
            st = exc.init_stationary(args.rho, W, sd)
        traj = exc.evolve(st, params, args.horizon, sd, snapshot_times=snaps,
                          check_boundary=(args.init == "wedge"))
        for (t, h) in traj.snapshots:
            for site in range(lo, hi + 1):
                rows.append([t, site, int(h[st.idx(site)]), rep, args.seed])
        finals.append(traj.final.height(0) / args.horizon)
    payload = {"estimates": {"mean_h0_over_t": float(np.mean(finals))},
               "stderr": float(np.std(finals, ddof=1) / np.sqrt(len(finals)))
               if len(finals) > 1 else None}
    return payload, True, "heights", rows


def cmd_fluct(args):
    if args.model == "asep":
        out = exc.characteristic_variance_exponent(
            args.rho, _params(args.p, args.q), _parse_floats(args.t_grid),
            args.reps, args.seed, v=args.v, threads=args.threads)
        payload = {"estimates": {"slope": out["slope"],
                                 "variances": out["variances"]},
                   "stderr": out["stderr"]}
        return payload, True, None, None
    scheme = rap.RapWeightScheme("dirichlet", M=1)
    n_grid = [int(v) for v in _parse_floats(args.n_grid)]
    out = rap.current_scaling(scheme, args.rho, args.var, n_grid, 1.0, 0.0,
                              args.reps, args.seed, threads=args.threads)
    payload = {"estimates": {"slope": out["slope"],
                             "variances": out["variances"]},
               "stderr": out["stderr"]}
    return payload, True, None, None


def cmd_coupling(args):
    params = _params(args.p, args.q)
    if args.check == "second-class":
        snaps = _parse_floats(args.snapshots) or [args.horizon]
        rows = []
        finals = []
        discarded = 0
        for rep in range(args.reps):
            res = exc.second_class_run(args.rho, params, args.horizon,
                                       SeedSpec(args.seed, rep),
                                       snapshot_times=snaps)
            if not res.valid:
                discarded += 1
                continue
            for (t, q_pos) in res.positions:
                rows.append([t, q_pos, rep, args.seed])
            finals.append(res.final_q / args.horizon)
        payload = {"estimates": {"mean_Q_over_t": float(np.mean(finals)),
                                 "expected": exc.characteristic_speed(args.rho, params),
                                 "discarded": discarded},
                   "stderr": float(np.std(finals, ddof=1) / np.sqrt(len(finals)))}
        return payload, True, "second_class", rows
    if args.check == "envelope":
        st = exc.init_stationary(args.rho, args.W, SeedSpec(args.seed))
        rep = exc.envelope_coupled_run(st, args.horizon, SeedSpec(args.seed + 1),
                                       shared_clocks=bool(args.shared_clocks))
        payload = {"estimates": {"attempts": rep.attempts_checked,
                                 "violations": rep.violations,
                                 "max_abs_diff": rep.max_abs_diff},
                   "stderr": None}
        return payload, rep.equal, None, None
    rng = np.random.default_rng(args.seed)
    z0 = np.sort(rng.uniform(0, 25, 40))
    st = ham.HammersleyState(z0, i_min=0)
    pts = sample_poisson_points((float(z0[0]) + 1e-9, 0.0, 26.0, args.horizon),
                                50.0 / (26.0 * args.horizon), SeedSpec(args.seed))
    rep = ham.check_variational(st, pts, horizon=args.horizon,
                                sites=range(22, 40))
    payload = {"estimates": {"max_abs_diff": rep.max_abs_diff,
                             "sites": len(rep.sites)}, "stderr": None}
    return payload, rep.equal, None, None


def cmd_hydro(args):
    u0 = _parse_profile(args.profile)
    out = hyd.hydro_compare(args.model, u0, args.n, args.t,
                            _parse_floats(args.x_grid), args.reps, args.seed,
                            threads=args.threads)
    rows = [[r["t"], r["x"], r["u_hopf_lax"], r["u_simulated"], r["n"],
             r["error"]] for r in out["rows"]]
    passed = True if args.max_err is None else out["max_abs_error"] <= args.max_err
    payload = {"estimates": {"max_abs_error": out["max_abs_error"]},
               "stderr": None}
    return payload, passed, "hydro", rows


def cmd_ldp(args):
    if args.action == "rates":
        lo, hi, count = args.grid.split(":")
        xs = np.linspace(float(lo), float(hi), int(count))
        payload = {"estimates": {
            "x": xs.tolist(),
            "ulam_upper": [ldp_mod.ulam_upper_rate(float(x)) for x in xs],
            "ulam_lower": [ldp_mod.ulam_lower_rate(float(x))
                           if 0 <= x <= 2 else None for x in xs],
        }, "stderr": None}
        return payload, True, None, None
    if args.action == "tail":
        model = "ulam_upper" if args.tail == "upper" else "ulam_lower"
        out = ldp_mod.mc_tail(model, args.n, args.x, args.reps, args.seed,
                              threads=args.threads)
        rows = [[args.n, args.x, args.tail, out.hits, args.reps,
                 out.estimate if out.estimate is not None else "", args.seed]]
        payload = {"estimates": {"log_p_over_rate_scale": out.estimate,
                                 "hits": out.hits, "reason": out.reason},
                   "stderr": None}
        return payload, out.estimate is not None, "ldp", rows
    out = ldp_mod.psi_estimate(args.w, args.r,
                               [int(v) for v in _parse_floats(args.n_grid)],
                               args.reps, args.seed, threads=args.threads)
    payload = {"estimates": out["rows"], "stderr": None,
               "diagnostics": out["diagnostics"]}
    return payload, True, None, None


def cmd_verify(args):
    results = acceptance.run_suite(args.suite, threads=args.threads)
    payload = {"estimates": {f"criterion_{r.cid}": {
        "name": r.name, "passed": r.passed, "value": str(r.value),
        "bounds": r.bounds, "seconds": round(r.seconds, 2)}
        for r in results}, "stderr": None}
    return payload, all(r.passed for r in results), None, None


COMMANDS = {
    "shape": cmd_shape, "simulate": cmd_simulate, "fluct": cmd_fluct,
    "coupling": cmd_coupling, "hydro": cmd_hydro, "ldp": cmd_ldp,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    pre, _ = parser.parse_known_args(argv)
    if pre.config:
        try:
            cfg = read_config(pre.config)
        except (OSError, ConfigError) as e:
            print(json.dumps({"error": "config", "message": str(e)}),
                  file=sys.stderr)
            return 2
        known = {a.dest for a in parser._actions}
        for sp in parser._subparsers._group_actions[0].choices.values():
            known |= {a.dest for a in sp._actions}
        unknown = set(cfg) - known
        if unknown:
            print(json.dumps({"error": "config",
                              "message": f"unknown config keys: {sorted(unknown)}"}),
                  file=sys.stderr)
            return 2
        parser.set_defaults(**cfg)
        for sp in parser._subparsers._group_actions[0].choices.values():
            sp.set_defaults(**{k: v for k, v in cfg.items()
                               if k in {a.dest for a in sp._actions}})
    args = parser.parse_args(argv)
    try:
        payload, passed, csv_kind, csv_rows = COMMANDS[args.command](args)
    except (ValueError, ConfigError) as e:
        print(json.dumps({"error": "invalid configuration", "message": str(e)}),
              file=sys.stderr)
        return 2
    config_echo = {k: v for k, v in sorted(vars(args).items())
                   if k not in ("config",)}
    summary = {"config": config_echo}
    summary.update(payload)
    summary["pass"] = bool(passed)
    text = json.dumps(summary, indent=2, sort_keys=True, default=exports._coerce)
    print(text)
    if args.json:
        Path(args.json).parent.mkdir(parents=True, exist_ok=True)
        Path(args.json).write_text(text + "\n")
    if args.csv and csv_kind is not None:
        exports.write_csv(args.csv, csv_kind, csv_rows)
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
