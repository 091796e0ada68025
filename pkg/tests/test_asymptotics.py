import math

import numpy as np
import pytest
from scipy.optimize import brentq
from scipy.special import gammaln

from specbound.asymptotics import (EXP_POWER, LOG_POWER, POWER_LAW, AsymptoticModel,
                                   asym_inverse, asym_log_inverse, exp_sandwich,
                                   log_phi_E_lower, log_phi_E_upper, log_phi_L_lower,
                                   log_phi_L_upper, log_stirling_bounds, phi_E_asymptote,
                                   phi_L_asymptote, phi_L_upper, predict_H_smallr,
                                   predict_logF, sl_sandwich)
from specbound.bounds import BoundFunction
from specbound.errors import TailNotConverged
from specbound.weights import WeightSpec


def _direct_log_series(logc, log_x, K):
    k = np.arange(K, dtype=float)
    t = logc(k) + k * log_x
    m = t.max()
    return m + math.log(np.exp(t - m).sum())


def test_phi_L_p1_is_exponential():
    for r in (0.0, 0.5, 3.0, 10.0, 20.0):
        assert phi_L_upper(1.0, r) == pytest.approx(math.exp(r), rel=1e-12)


@pytest.mark.parametrize("p", [0.5, 1.0, 2.0, 3.0])
def test_phi_L_against_direct_sum(p):
    for r in (0.3, 2.0, 15.0):
        want = _direct_log_series(lambda k: -gammaln(k + 1) / p, math.log(r), 5000)
        assert log_phi_L_upper(p, r) == pytest.approx(want, rel=1e-13)
        want_l = _direct_log_series(lambda k: -gammaln(k + 1) / p - 2 * np.sqrt(k), math.log(r), 5000)
        assert log_phi_L_lower(p, 2.0, r) == pytest.approx(want_l, rel=1e-13)


def test_phi_lower_below_upper():
    for r in np.logspace(-2, 3, 25):
        assert log_phi_L_lower(1.5, 0.7, r) <= log_phi_L_upper(1.5, r)
        assert log_phi_E_lower(1.0, 1.0, 0.5, r) <= log_phi_E_upper(1.0, 1.0, r)
    assert log_phi_E_upper(2.0, 0.5, 0.0) == 0.0
    assert log_phi_E_lower(2.0, 0.5, 1.0, 0.0) == 0.0


def test_phi_E_against_direct_sum():
    for a, alpha in ((1.0, 1.0), (0.25, 0.5), (0.5, 2.0)):
        for r in (0.5, 10.0, 1e4):
            want = _direct_log_series(lambda k: -a * k ** (alpha + 1), math.log(r), 4000)
            assert log_phi_E_upper(a, alpha, r) == pytest.approx(want, rel=1e-13)


def test_series_cap():
    with pytest.raises(TailNotConverged):
        log_phi_L_upper(1.0, 1e6, max_terms=1000)


@pytest.mark.parametrize("p", [0.5, 1.0, 2.0])
def test_phi_L_asymptote(p):
    ratio = log_phi_L_upper(p, 1e3) / phi_L_asymptote(p, 1e3)
    assert abs(ratio - 1) <= 0.15


def test_phi_E_asymptote():
    ratio = log_phi_E_upper(1.0, 1.0, 1e6) / phi_E_asymptote(1.0, 1.0, 1e6)
    assert abs(ratio - 1) <= 0.2


def test_stirling_bracket():
    k = np.arange(1, 171)
    lo, hi = log_stirling_bounds(k)
    lf = np.array([math.log(math.factorial(int(x))) for x in k])
    assert np.all(lo <= lf + 1e-12) and np.all(lf <= hi + 1e-12)


def test_predictor_plug_ins():
    m = AsymptoticModel.schatten_lorentz(1.0, 2.0)
    assert predict_logF(m, 10.0) == pytest.approx(80 * math.e, rel=1e-14)
    e = AsymptoticModel.exponential(1.0, 1.0)
    assert predict_logF(e, math.e) == pytest.approx(4.0, rel=1e-14)
    assert predict_H_smallr(m, log_r=-4 * math.e * 100) == pytest.approx(0.02, rel=1e-14)
    L = np.logspace(0, 4, 30)
    h = [predict_H_smallr(e, log_r=-x) for x in L]
    assert np.all(np.diff(h) < 0)


def test_logF_ratio_approaches_one():
    m = AsymptoticModel.schatten_lorentz(1.0)
    bf = m.bound_function
    ratios = [bf.log_F(r) / predict_logF(m, r) for r in (10.0, 100.0, 1000.0)]
    assert ratios[0] < ratios[1] < ratios[2] < 1.0
    assert abs(ratios[-1] - 1) < 0.01


def test_H_smallr_ratio_approaches_one():
    m = AsymptoticModel.schatten_lorentz(1.0)
    bf = m.bound_function
    L = [10.0, 100.0, 1000.0, 10000.0]
    ratios = [bf.H_log(-x) / predict_H_smallr(m, log_r=-x) for x in L]
    assert all(a < b for a, b in zip(ratios, ratios[1:]))
    assert abs(ratios[-1] - 1) < 0.02
    # at r = 1e-12 the leading term is still far off: the ratio is about 0.56
    r12 = bf.H(1e-12) / predict_H_smallr(m, 1e-12)
    assert 0.5 < r12 < 0.6


def test_asym_inverse():
    for r in (1.0, 7.5, 1e3):
        assert asym_inverse(POWER_LAW, 1, 1, r) == pytest.approx(r)
        assert asym_inverse(POWER_LAW, 2, 3, 2 * r**3) / r == pytest.approx(1.0, rel=1e-14)
    # exp_power: log f(r) = 2 r^1.5 is exact
    r = 40.0
    assert asym_inverse(EXP_POWER, 2, 1.5, math.exp(2 * r**1.5)) == pytest.approx(r, rel=1e-12)
    # log_power against a bisection inverse of log f(r) = 3 (log r)^2 + log r
    prev = None
    for Y in (1e2, 1e4, 1e6):
        true = brentq(lambda t: 3 * t * t + t - Y, 0, Y)
        pred = asym_log_inverse(3, 2, log_r=Y)
        ratio = pred / true
        if prev is not None:
            assert abs(ratio - 1) < abs(prev - 1)
        prev = ratio
    assert abs(prev - 1) < 1e-3
    assert asym_inverse(LOG_POWER, 3, 2, math.exp(300.0)) == pytest.approx(math.exp(10.0))


@pytest.mark.parametrize("p", [0.5, 1.0, 2.0])
def test_sl_sandwich(p):
    bf = BoundFunction.for_weight(WeightSpec.schatten_lorentz(p), max_terms=10**7)
    for r in (0.1, 1.0, 10.0, 100.0):
        assert sl_sandwich(p, r, bf=bf).holds


@pytest.mark.parametrize("a,alpha", [(1.0, 1.0), (0.5, 0.5), (2.0, 1.0), (1.0, 2.0)])
def test_exp_sandwich(a, alpha):
    for r in (1.0, 2.0, 10.0, 100.0, 1000.0):
        assert exp_sandwich(a, alpha, r).holds


def test_exp_sandwich_literal_prefactor_overshoots_at_one():
    s = exp_sandwich(1.0, 1.0, 1.0, literal_prefactor=True)
    assert s.log_lower > s.log_F
    assert exp_sandwich(1.0, 1.0, 10.0, literal_prefactor=True).holds
