"""Correctly-oriented upper-tail trend check.

Superadditivity of the chain count gives P{L_n >= nx} <= exp(-n I(x)) for
every n, with -log P_n / n decreasing toward I(x) from above. This test
pins that behavior; it complements (and does not replace) acceptance
criterion 10, whose spec-stated direction is the reverse and fails."""

import math

import pytest

from growthlab import ldp


@pytest.mark.slow
def test_upper_tail_rate_decreases_toward_limit():
    x = 2.5
    limit = ldp.ulam_upper_rate(x)
    rates = []
    for n, reps in [(4, 2_000_000), (8, 4_000_000), (12, 10_000_000)]:
        out = ldp.mc_tail("ulam_upper", n, x, reps, seed=555 + n, threads=2)
        assert out.estimate is not None, f"insufficient hits at n={n}"
        rates.append(-out.estimate)
    assert all(a > b for a, b in zip(rates, rates[1:])), rates
    se_slack = 0.05
    assert all(r >= limit - se_slack for r in rates), (rates, limit)
    # the gap to the limit shrinks
    assert rates[-1] - limit < rates[0] - limit


def test_lower_tail_exact_law_small():
    out = ldp.mc_tail("ulam_lower", 1, 0.0, replicates=50_000, seed=9)
    p_hat = out.hits / out.replicates
    assert abs(p_hat - math.exp(-1)) < 0.01
    assert abs(out.estimate + 1.0) < 0.05
