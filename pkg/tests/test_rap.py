import math

import numpy as np
import pytest

from growthlab import rap
from growthlab.randkit import SeedSpec


def test_scheme_validation_and_derived():
    s = rap.RapWeightScheme("two_point_beta", alpha=2.0, beta=3.0)
    assert s.drift() == pytest.approx(-3.0 / 5.0)  # -(1 - E B)
    p1 = 1 - 2.0 / 5.0
    assert s.sigma_a2() == pytest.approx(p1 - p1 * p1)
    d = rap.RapWeightScheme("dirichlet", M=2)
    assert d.drift() == pytest.approx(0.0, abs=1e-15)
    assert d.sigma_a2() == pytest.approx(2 * (1 + 4) / 5.0)
    with pytest.raises(ValueError):
        rap.RapWeightScheme("nope")
    with pytest.raises(ValueError):
        rap.RapWeightScheme("two_point_beta", alpha=-1.0)


def test_scheme_regularity_flags():
    assert rap.RapWeightScheme("two_point_beta").nondegenerate()
    assert rap.RapWeightScheme("two_point_beta").lattice_ok()
    assert rap.RapWeightScheme("dirichlet", M=3).lattice_ok()
    assert not rap.RapWeightScheme("identity").nondegenerate()
    assert not rap.RapWeightScheme("identity").lattice_ok()
    assert rap.RapWeightScheme("symmetric_pair").nondegenerate()
    assert not rap.RapWeightScheme("symmetric_pair").lattice_ok()


def test_sampled_weights_are_probability_vectors():
    for law, kw in [("two_point_beta", dict(alpha=0.7, beta=1.9)),
                    ("dirichlet", dict(M=2))]:
        scheme = rap.RapWeightScheme(law, **kw)
        row = rap.environment_row(scheme, SeedSpec(5), tau=3,
                                  site_lo=-500, site_hi=499)
        assert row.min() >= 0
        assert np.allclose(row.sum(axis=1), 1.0, atol=1e-12)
        # empirical mean weights match the law
        assert np.allclose(row.mean(axis=0), scheme.mean_weights(), atol=0.05)


def test_environment_is_counter_deterministic():
    scheme = rap.RapWeightScheme("dirichlet")
    a = rap.environment_row(scheme, SeedSpec(9), 4, -10, 10)
    b = rap.environment_row(scheme, SeedSpec(9), 4, -20, 20)
    assert np.array_equal(a, b[10:31])  # same sites, same draws


def test_identity_law_keeps_heights():
    scheme = rap.RapWeightScheme("identity")
    st = rap.RapState(np.array([1.0, -2.0, 3.5, 0.0, 7.0]), left=-2)
    out = rap.rap_step(st, scheme, SeedSpec(1))
    assert np.array_equal(out.heights, st.heights[1:-1])


def test_symmetric_pair_preserves_linear_profile():
    scheme = rap.RapWeightScheme("symmetric_pair")
    c = 0.7
    st = rap.RapState(c * np.arange(-10, 11, dtype=float), left=-10)
    out = rap.run_rap(st, scheme, SeedSpec(1), steps=4)
    sites = np.arange(out.left, out.left + len(out.heights))
    assert np.allclose(out.heights, c * sites, atol=1e-12)


def test_constant_profile_stays_constant():
    for law in ("two_point_beta", "dirichlet"):
        scheme = rap.RapWeightScheme(law)
        st = rap.RapState(np.full(41, 2.25), left=-20)
        out = rap.run_rap(st, scheme, SeedSpec(3), steps=6)
        assert np.allclose(out.heights, 2.25, atol=1e-12)


def test_window_exhaustion_error():
    scheme = rap.RapWeightScheme("dirichlet")
    st = rap.RapState(np.zeros(2), left=0)
    with pytest.raises(rap.WindowExhaustedError):
        rap.rap_step(st, scheme, SeedSpec(1))


def test_rwre_tau0_and_constant():
    scheme = rap.RapWeightScheme("dirichlet")
    st = rap.RapState(np.arange(11, dtype=float), left=-5)
    assert rap.rwre_quenched_height(st, scheme, SeedSpec(2), 1, 0) == st.height(1)
    const = rap.RapState(np.full(31, 4.0), left=-15)
    for tau in (1, 3, 5):
        assert rap.rwre_quenched_height(const, scheme, SeedSpec(2), 0, tau) \
            == pytest.approx(4.0, abs=1e-12)


def test_rwre_matches_rap_iteration_exactly():
    # the module's hard oracle: same fixed weights, two summation orders
    rng = np.random.default_rng(8)
    for law, kw, tau in [("two_point_beta", dict(alpha=1.3, beta=0.8), 3),
                         ("dirichlet", dict(M=1), 3),
                         ("dirichlet", dict(M=2), 4)]:
        scheme = rap.RapWeightScheme(law, **kw)
        st = rap.RapState(rng.normal(size=41).cumsum(), left=-20)
        sd = SeedSpec(1000 + tau)
        direct = rap.run_rap(st, scheme, sd, steps=tau)
        M = scheme.M
        for i in range(-20 + M * tau, 21 - M * tau):
            assert direct.height(i) == pytest.approx(
                rap.rwre_quenched_height(st, scheme, sd, i, tau), abs=1e-10)


def test_rwre_coverage_error():
    scheme = rap.RapWeightScheme("dirichlet")
    st = rap.RapState(np.zeros(5), left=0)
    with pytest.raises(ValueError, match="coverage"):
        rap.rwre_quenched_height(st, scheme, SeedSpec(1), 2, 4)


def test_light_cone_padding_independence():
    scheme = rap.RapWeightScheme("dirichlet")
    rng = np.random.default_rng(12)
    base_heights = rng.normal(size=81).cumsum()
    sd = SeedSpec(77)
    tight = rap.RapState(base_heights[30:51].copy(), left=-10)
    padded = rap.RapState(base_heights.copy(), left=-40)
    out_tight = rap.run_rap(tight, scheme, sd, steps=10)
    out_padded = rap.run_rap(padded, scheme, sd, steps=10)
    assert out_tight.height(0) == pytest.approx(out_padded.height(0), abs=1e-12)


def test_current_z_zero_horizon():
    scheme = rap.RapWeightScheme("dirichlet")
    assert rap.current_z(scheme, 0.5, 0.25, 0.0, 64, 0.0, 0.0, SeedSpec(1)) == 0.0


def test_current_z_mean_translation_consistency():
    # E Z_n collapses to rounding-level terms; |mean|/n must be small
    scheme = rap.RapWeightScheme("two_point_beta", alpha=2.0, beta=2.0)
    n, reps = 256, 300
    zs = [rap.current_z(scheme, 0.5, 0.25, 0.0, n, 1.0, 0.0, SeedSpec(40, k))
          for k in range(reps)]
    mean = np.mean(zs)
    se = np.std(zs, ddof=1) / math.sqrt(reps)
    assert abs(mean) / n < max(4 * se, 0.6) / n + 0.01


@pytest.mark.slow
def test_current_scaling_slope_small_grid():
    scheme = rap.RapWeightScheme("dirichlet")
    out = rap.current_scaling(scheme, 0.5, 0.25, [16, 32, 64, 128, 256],
                              1.0, 0.0, reps=400, seed=99)
    assert 0.25 < out["slope"] < 0.75


def test_limit_covariance_values():
    sigma_a, kappa, rho = 0.7, 1.3, 0.5
    v = kappa * rho * rho
    c = sigma_a * kappa * rho * rho / math.sqrt(2 * math.pi)
    got = rap.limit_covariance(2.0, 2.0, 0.0, rho, v, sigma_a, kappa)
    assert got == pytest.approx(c * 2 * math.sqrt(2.0))
    assert rap.limit_covariance(0.0, 3.0, 0.0, rho, v, sigma_a, kappa) == pytest.approx(0.0)
    with pytest.raises(ValueError):
        rap.limit_covariance(1.0, 1.0, 0.0, rho, 0.9, sigma_a, kappa)


def test_limit_covariance_self_similarity():
    sigma_a, kappa, rho = 1.1, 0.8, 0.4
    v = kappa * rho * rho
    rng = np.random.default_rng(5)
    for _ in range(20):
        s, t, a = rng.uniform(0.1, 5, size=3)
        lhs = rap.limit_covariance(a * s, a * t, 0.0, rho, v, sigma_a, kappa)
        rhs = math.sqrt(a) * rap.limit_covariance(s, t, 0.0, rho, v, sigma_a, kappa)
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_fit_kappa_recovers_synthetic():
    # synthesize Gaussian currents with the exact limit covariance at a known
    # kappa; the fit must recover it closely
    rho, sigma_a, kappa_true, n = 0.5, 0.8, 1.7, 4096
    times = [0.5, 1.0, 2.0, 4.0]
    cov = np.array([[rap.limit_covariance(s, t, 0.0, rho, kappa_true * rho**2,
                                          sigma_a, kappa_true)
                     for t in times] for s in times])
    rng = np.random.default_rng(31)
    z_scaled = rng.multivariate_normal(np.zeros(len(times)), cov, size=4000)
    out = rap.fit_kappa(z_scaled * n**0.25, times, n, rho, sigma_a)
    assert out["flag"] == "estimate"
    assert out["kappa"] == pytest.approx(kappa_true, rel=0.1)


def test_current_z_path_consistent_with_single():
    scheme = rap.RapWeightScheme("dirichlet")
    sd = SeedSpec(321)
    path = rap.current_z_path(scheme, 0.5, 0.25, 64, [0.5, 1.0], 0.0, sd)
    assert path.shape == (2,)
    assert np.isfinite(path).all()
