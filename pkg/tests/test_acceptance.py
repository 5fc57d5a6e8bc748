"""Acceptance gate: each criterion at its spec size, tolerance, and fixed
seed (pinned in growthlab.thresholds). One pass/fail line prints per
criterion. These are the exit criteria for the build.

Criterion 10's upper-tail clause asserts the spec-stated trend (rates
increasing in n toward 0.4657, final value in [0.15, 0.47]). Superadditivity
forces the opposite approach direction (see /root/notes/decisions.md and
tests/test_ldp_trend.py), so that clause fails honestly; it is implemented
as stated rather than weakened."""

import pytest

from growthlab import acceptance
from growthlab._util import default_threads

THREADS = default_threads()


def _run(cid):
    res = acceptance.CRITERIA[cid](THREADS)
    print(res.line())
    return res


@pytest.mark.acceptance
def test_criterion_01_corner_shape():
    res = _run(1)
    assert res.passed, res.line()


@pytest.mark.acceptance
def test_criterion_02_wedge_shape():
    res = _run(2)
    assert res.passed, res.line()


@pytest.mark.acceptance
def test_criterion_03_stationary_current():
    res = _run(3)
    assert res.passed, res.line()


@pytest.mark.acceptance
def test_criterion_04_second_class_drift():
    res = _run(4)
    assert res.passed, res.line()


@pytest.mark.acceptance
def test_criterion_05_variance_identity():
    res = _run(5)
    assert res.passed, res.line()


@pytest.mark.acceptance
def test_criterion_06_kpz_exponent():
    res = _run(6)
    assert res.passed, res.line()


@pytest.mark.acceptance
def test_criterion_07_ulam_constant():
    res = _run(7)
    assert res.passed, res.line()


@pytest.mark.acceptance
def test_criterion_08_exact_equality_suite():
    res = _run(8)
    assert res.passed, res.line()


@pytest.mark.acceptance
def test_criterion_09_analytic_suite():
    res = _run(9)
    assert res.passed, res.line()


@pytest.mark.acceptance
def test_criterion_10_ldp_tails():
    res = _run(10)
    assert res.passed, res.line()


@pytest.mark.acceptance
def test_criterion_11_hydro_compare():
    res = _run(11)
    assert res.passed, res.line()


@pytest.mark.acceptance
def test_criterion_12_rap_scaling():
    res = _run(12)
    assert res.passed, res.line()
