import math

import numpy as np
import pytest

from growthlab import ldp


def closed_form_lower(x: float) -> float:
    """Independent oracle: antiderivative of R2 is
    F(s) = s^2/2 log(s/2) - 3 s^2/4 + 2 s, so U(x) = F(2) - F(x) = 1 - F(x)."""
    if x == 0.0:
        return 1.0
    F = x * x / 2.0 * math.log(x / 2.0) - 0.75 * x * x + 2.0 * x
    return 1.0 - F


def test_upper_rate_values():
    assert ldp.ulam_upper_rate(2.0) == 0.0
    assert ldp.ulam_upper_rate(1.3) == 0.0  # documented convention below 2
    assert ldp.ulam_upper_rate(2.5) == pytest.approx(5 * math.log(2) - 3, abs=1e-9)


def test_upper_rate_convex_increasing():
    xs = np.linspace(2.0, 6.0, 200)
    vals = np.array([ldp.ulam_upper_rate(x) for x in xs])
    assert np.all(np.diff(vals) >= -1e-12)
    assert np.all(np.diff(vals, 2) >= -1e-9)
    # I'(2+) = 0: first difference quotient near 2 vanishes
    assert (ldp.ulam_upper_rate(2.001) - ldp.ulam_upper_rate(2.0)) / 0.001 < 0.1


def test_upper_rate_derivative_formula():
    # I'(x) = 2 acosh(x/2), finite differences on [2.05, 6]
    h = 1e-6
    for x in np.linspace(2.05, 6.0, 40):
        fd = (ldp.ulam_upper_rate(x + h) - ldp.ulam_upper_rate(x - h)) / (2 * h)
        assert abs(fd - 2.0 * math.acosh(x / 2.0)) <= 1e-6


def test_poisson_rate_values():
    assert ldp.poisson_mean2_rate(2.0) == 0.0
    assert ldp.poisson_mean2_rate(0.0) == 2.0
    for s in np.linspace(0.05, 1.95, 30):
        assert ldp.poisson_mean2_rate(s) > 0.0


def test_lower_rate_values_and_quadrature():
    assert ldp.ulam_lower_rate(2.0) == 0.0
    assert ldp.ulam_lower_rate(0.0) == pytest.approx(1.0, abs=1e-9)
    for x in np.linspace(0.0, 2.0, 21):
        assert ldp.ulam_lower_rate(float(x)) == pytest.approx(
            closed_form_lower(float(x)), abs=1e-9)
    with pytest.raises(ValueError):
        ldp.ulam_lower_rate(2.5)


def test_lower_rate_derivative_is_minus_integrand():
    h = 1e-6
    for x in np.linspace(0.1, 1.9, 30):
        fd = (ldp.ulam_lower_rate(x + h) - ldp.ulam_lower_rate(x - h)) / (2 * h)
        assert abs(fd + ldp.poisson_mean2_rate(x)) <= 1e-6


def test_rate_functions_vanish_at_lln_point():
    assert ldp.ulam_upper_rate(2.0) == 0.0
    assert ldp.ulam_lower_rate(2.0) == 0.0
    for p in (0.2, 0.5, 0.8):
        assert ldp.rw_rate(2 * p - 1, p) == pytest.approx(0.0, abs=1e-12)


def test_rw_rate_values():
    assert ldp.rw_rate(1.0, 0.5) == pytest.approx(math.log(2))
    assert ldp.rw_rate(1.5, 0.5) == math.inf
    assert ldp.rw_rate(-1.0, 0.5) == pytest.approx(math.log(2))
    xs = np.linspace(-0.99, 0.99, 101)
    vals = np.array([ldp.rw_rate(x, 0.3) for x in xs])
    assert np.all(np.diff(vals, 2) >= -1e-9)  # convex


def test_rw_legendre_duality():
    assert ldp.rw_legendre_check(0.3) <= 1e-6
    assert ldp.rw_legendre_check(0.5) <= 1e-6


def test_mc_tail_lower_exact_law():
    # P{L_n <= 0} = P{no points} = exp(-n^2): the estimate is -1 exactly in
    # the limit, up to binomial sampling error
    out = ldp.mc_tail("ulam_lower", 2, 0.0, replicates=60_000, seed=17)
    assert out.hits > 500
    se = math.sqrt((1 - math.exp(-4)) / (60_000 * math.exp(-4))) / 4
    assert out.estimate == pytest.approx(-1.0, abs=4 * se + 0.01)


def test_mc_tail_upper_near_lln():
    # at the LLN point the decay rate is 0; at small n the mean of L sits
    # c*n^{1/3} below 2n, so the finite-n estimate is moderately negative
    out = ldp.mc_tail("ulam_upper", 6, 2.0, replicates=20_000, seed=18)
    assert out.estimate is not None
    assert -0.6 < out.estimate < 0.0


def test_mc_tail_insufficient_hits():
    out = ldp.mc_tail("ulam_upper", 10, 4.0, replicates=2_000, seed=19)
    assert out.estimate is None
    assert "insufficient" in out.reason
    assert out.hits < 10


def test_mc_tail_threads_consistent():
    a = ldp.mc_tail("ulam_lower", 2, 0.5, replicates=20_000, seed=20, threads=1)
    b = ldp.mc_tail("ulam_lower", 2, 0.5, replicates=20_000, seed=20, threads=2)
    assert a.hits == b.hits


def test_psi_zero_requirement():
    out = ldp.psi_estimate(0.0, 1.0, [8, 16], reps=100, seed=1)
    assert all(row["estimate"] == 0.0 for row in out["rows"])


def test_psi_zero_set_when_r_large():
    # r > w^2/4: the LLN makes the event typical, so estimates head to 0
    out = ldp.psi_estimate(1.0, 0.5, [16, 32, 64], reps=4_000, seed=2)
    ests = [row["estimate"] for row in out["rows"]]
    assert all(e is not None for e in ests)
    assert ests[-1] < 0.05
    assert out["diagnostics"]["nonincreasing_in_n"]


def test_psi_nonincreasing_in_r():
    lo = ldp.psi_estimate(1.0, 0.20, [24], reps=30_000, seed=3)
    hi = ldp.psi_estimate(1.0, 0.30, [24], reps=30_000, seed=4)
    e_lo = lo["rows"][0]["estimate"]
    e_hi = hi["rows"][0]["estimate"]
    assert e_lo is not None and e_hi is not None
    assert e_lo >= e_hi - 0.02


def test_compose_point_mass():
    j0 = lambda y, s: 0.0 if (y == 0.0 and s == 0.0) else math.inf
    psi = lambda w, r: w * w + math.exp(-r)
    t, x, r = 2.0, 1.0, 1.0
    got = ldp.compose_rate(j0, psi, t, x, r, y_span=2.0, s_span=2.0, n_grid=41)
    assert got == pytest.approx(t * psi(x / t, r / t), rel=1e-12)


def test_compose_nonincreasing_in_r():
    j0 = lambda y, s: y * y + s * s
    psi = lambda w, r: w * w + 2.0 * math.exp(-max(r, 0.0))
    vals = [ldp.compose_rate(j0, psi, 1.0, 0.5, r, n_grid=201) for r in (0.5, 1.5, 3.0)]
    assert vals[0] >= vals[1] - 1e-6 >= vals[2] - 2e-6


def test_compose_degenerate_psi_zero():
    j0 = lambda y, s: y * y + s * s
    got = ldp.compose_rate(j0, lambda w, r: 0.0, 1.0, 2.0, 3.0,
                           y_span=4.0, s_span=5.0, n_grid=201)
    assert got == pytest.approx(0.0, abs=1e-9)  # envelope reaches (0, 0)


def test_compose_widen_error():
    j0 = lambda y, s: (y + 50.0) ** 2 + s * s  # minimum far outside the box
    with pytest.raises(ldp.GridTooNarrowError):
        ldp.compose_rate(j0, lambda w, r: 0.0, 1.0, 0.0, 0.0,
                         y_span=3.0, s_span=3.0)


def test_rate_function_registry():
    assert set(ldp.RATE_FUNCTIONS) == {"ulam_upper", "ulam_lower",
                                       "poisson_mean2", "rw", "rw_log_mgf"}
    assert ldp.RATE_FUNCTIONS["ulam_upper"]["fn"](2.0) == 0.0
    assert "domain" in ldp.RATE_FUNCTIONS["rw"]
