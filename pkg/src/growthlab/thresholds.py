"""Acceptance thresholds, sizes, and seeds: the single versioned defaults
file. Tolerance changes happen here and nowhere else, so they stay auditable
in history. Replicate counts were pinned from pilot runs so that statistical
standard errors sit roughly an order of magnitude inside each acceptance
band."""

ACCEPTANCE = {
    # 1. corner-growth limit shape, exponential weights
    "corner_shape": dict(n=1000, replicates=200, lo=3.90, hi=4.02, seed=101),
    # 2. wedge interface at the origin
    "wedge_shape": dict(t=1000.0, replicates=100, lo=-0.27, hi=-0.23, seed=102),
    # 3. stationary mean current at rho = 1/2
    "stationary_current": dict(rho=0.5, t=200.0, replicates=500,
                               lo=-0.26, hi=-0.24, seed=103),
    # 4. second-class particle drift at rho = 0.3
    "second_class_drift": dict(rho=0.3, t=200.0, replicates=2000,
                               lo=0.38, hi=0.42, seed=104),
    # 5. variance-coupling identity ratio at the characteristic
    "variance_identity": dict(rho=0.5, v=0.0, t=100.0, replicates=10_000,
                              lo=0.9, hi=1.1, seed=105),
    # 6. height-variance growth exponents
    "kpz_exponent": dict(rho=0.5, t_grid=(128, 256, 512, 1024, 2048, 4096),
                         replicates=300, lo=0.55, hi=0.80,
                         off_v=1.0, off_replicates=250, off_lo=0.9, off_hi=1.1,
                         seed=106),
    # 7. Ulam constant
    "ulam_constant": dict(n=1000, replicates=50, lo=1.90, hi=2.00, seed=107),
    # 8. exact-equality oracle suite (deterministic)
    "exact_suite": dict(seed=108, superadd_instances=200, bijection_extent=30,
                        envelope_W=40, envelope_horizon=20.0,
                        variational_instances=50, rap_rwre_tol=1e-10,
                        lis_cross_instances=25),
    # 9. analytic evaluator suite
    "analytic_suite": dict(duality_grid=21, duality_tol=1e-8,
                           value_tol=1e-9, legendre_tol=1e-6, deriv_tol=1e-6),
    # 10. Monte Carlo tails
    "ldp_tails": dict(lower_n=2, lower_replicates=200_000, lower_tol=0.02,
                      upper_x=2.5, upper_n_grid=(4, 8, 12),
                      upper_replicates=10_000_000,
                      upper_final_lo=0.15, upper_final_hi=0.47, seed=110),
    # 11. hydrodynamic comparison (wedge TASEP)
    "hydro_compare": dict(n_small=125, n_big=500, t=1.0,
                          x_grid=(-0.8, -0.4, 0.0, 0.4, 0.8),
                          replicates=40, max_err=0.05, seed=111),
    # 12. RAP current variance scaling
    "rap_scaling": dict(n_grid=(64, 128, 256, 512, 1024, 2048, 4096),
                        replicates=(300, 300, 300, 250, 180, 100, 60),
                        lo=0.35, hi=0.65, rho=0.5, v=0.25, seed=112),
}
