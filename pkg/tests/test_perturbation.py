import json

import numpy as np
import pytest

from specbound import linalg_core as lc
from specbound.bounds import BoundFunction, NonNormalityBudget, departure_budget
from specbound.errors import BadTruncationSize, GaugeInfinite
from specbound.perturbation import (bauer_fike_radius, spectral_distance_bound,
                                    spectral_variation_bound, truncation_certify)
from specbound.weights import WeightSpec

from conftest import ginibre, random_normal

SL1 = WeightSpec.schatten_lorentz(1)
EXP11 = WeightSpec.exponential(1, 1)


def test_bauer_fike_radius():
    ident = lambda y: y
    for d in (0.0, 1e-3, 0.5, 4.0):
        assert bauer_fike_radius(ident, 2.0, d) == pytest.approx(d)
    bf = BoundFunction.for_weight(SL1)
    deltas = np.linspace(0, 3, 40)
    r = [bauer_fike_radius(bf.F_tilde_inverse, 0.7, d) for d in deltas]
    assert np.all(np.diff(r) >= 0)
    assert r[5] == pytest.approx(bf.scaled_H(0.7, deltas[5]), rel=1e-14)


def test_variation_trivial_cases(rng):
    A = ginibre(rng, 5)
    c = spectral_variation_bound(A, A, SL1)
    assert c.value == 0.0
    N = random_normal(rng, 5)
    B = N + 0.1 * ginibre(rng, 5)
    c = spectral_variation_bound(N, B, SL1, verify=True)
    assert c.bound_kind == "normal_exact"
    assert c.value == lc.operator_norm(N - B)
    assert c.holds


def test_distance_normal_pairs():
    A = np.diag([1.0, 2.0, 3.0])
    B = np.diag([1.1, 2.0, 3.0])
    c = spectral_distance_bound(A, B, SL1, verify=True)
    assert c.bound_kind == "normal_exact"
    assert c.observed == pytest.approx(0.1, rel=1e-12)
    assert c.value == pytest.approx(0.1, rel=1e-12)


def test_distance_symmetric(rng):
    A, B = ginibre(rng, 6), ginibre(rng, 6)
    c1 = spectral_distance_bound(A, B, SL1)
    c2 = spectral_distance_bound(B, A, SL1)
    assert c1.to_dict() == c2.to_dict()


def test_variation_dominates(rng):
    for _ in range(40):
        A = ginibre(rng, 8)
        A /= lc.w_gauge(A, SL1)
        E = ginibre(rng, 8)
        B = A + 1e-3 * E / lc.operator_norm(E)
        c = spectral_variation_bound(A, B, SL1, ordering="modulus", verify=True)
        assert c.holds


def test_certificate_shrinks_along_path(rng):
    A = ginibre(rng, 6)
    A /= lc.w_gauge(A, EXP11)
    E = ginibre(rng, 6)
    b = departure_budget(A, EXP11)
    vals = [spectral_variation_bound(A, A + t * E, EXP11, budget=b).value
            for t in (1e-1, 1e-2, 1e-3, 1e-4, 1e-6)]
    assert all(x > y for x, y in zip(vals, vals[1:]))
    assert vals[-1] < 0.1


def test_larger_budget_never_decreases(rng):
    A = ginibre(rng, 5)
    B = A + 0.01 * ginibre(rng, 5)
    b = departure_budget(A, SL1)
    c1 = spectral_variation_bound(A, B, SL1, budget=b)
    c2 = spectral_variation_bound(A, B, SL1, budget=NonNormalityBudget(2 * b.nu_upper, b.source, b.gauge))
    assert c2.value >= c1.value


def test_key_lemma(rng):
    # eigenvalues of B outside sigma(A) have ||R(A; z)|| >= 1 / ||A - B||
    A = ginibre(rng, 6)
    for _ in range(10):
        B = A + 0.2 * ginibre(rng, 6)
        delta = lc.operator_norm(A - B)
        for z in lc.eigenvalues(B):
            smin = lc.singular_values(z * np.eye(6) - A)[-1]
            assert 1 / delta <= 1 / smin * (1 + 1e-10)


def test_certificate_json_order(rng):
    A = ginibre(rng, 3)
    c = spectral_distance_bound(A, A + 0.01, SL1, verify=True)
    keys = list(json.loads(json.dumps(c.to_dict())).keys())
    assert keys == ["bound_kind", "value", "budget_used", "weight", "dostanic_C",
                    "perturbation_norm", "inputs_digest", "observed", "holds"]


def test_gauge_infinite():
    with pytest.raises(GaugeInfinite):
        spectral_variation_bound(np.diag([1, .5, .2]), np.eye(3), WeightSpec.explicit([1, 1]))


def test_truncation(rng):
    n = 12
    A = np.diag(0.5 ** np.arange(n))
    res = truncation_certify(A, n - 2, SL1, verify=True)
    assert res.certificate.holds
    assert truncation_certify(A, n, SL1).radius == 0.0
    with pytest.raises(BadTruncationSize):
        truncation_certify(A, 0, SL1)
    with pytest.raises(BadTruncationSize):
        truncation_certify(A, n + 1, SL1)
    T = np.triu(ginibre(rng, 20), 1) * 0.05 + np.diag(1 / np.arange(1, 21))
    res = truncation_certify(T, 10, SL1, verify=True)
    assert res.certificate.holds
    assert 0 in res.centers
