import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from specbound import linalg_core as lc
from specbound.errors import (EmptySpectrum, NonFiniteError, NonSquareError,
                              OrderingLengthMismatch)
from specbound.weights import WeightSpec

from conftest import TWO_SCHUR_A, TWO_SCHUR_N1, TWO_SCHUR_N2, TWO_SCHUR_D2, ginibre, random_normal

SL1 = WeightSpec.schatten_lorentz(1)


def test_operator_matrix_validation():
    m = lc.OperatorMatrix(np.eye(2))
    assert m.rows == 2 and m.cols == 2
    assert not m.data.flags.writeable
    with pytest.raises(NonFiniteError):
        lc.OperatorMatrix(np.array([[np.nan]]))
    with pytest.raises(NonSquareError):
        lc.as_array(np.ones((2, 3)), square=True)


def test_singular_values_and_norms(rng):
    A = ginibre(rng, 5, 3)
    s = lc.singular_values(A)
    assert s.shape == (3,) and np.all(np.diff(s) <= 0)
    assert lc.operator_norm(A) == pytest.approx(s[0], rel=1e-14)
    assert lc.schatten_norm(A, 2) == pytest.approx(np.linalg.norm(A), rel=1e-13)
    assert lc.schatten_norm(A, np.inf) == pytest.approx(s[0], rel=1e-14)


def test_two_schur_schatten_norms():
    assert lc.schatten_norm(TWO_SCHUR_N1, 4) ** 4 == pytest.approx(112.0, rel=1e-12)
    assert lc.schatten_norm(TWO_SCHUR_N2, 4) ** 4 == pytest.approx(80.0, rel=1e-12)


def test_w_gauge_examples():
    assert lc.w_gauge(np.eye(3), WeightSpec.explicit([1, 1, 1])) == pytest.approx(1.0)
    assert lc.w_gauge(np.diag([1, .5, .25]), WeightSpec.explicit([1, .5])) == np.inf
    # a zero singular value never costs anything
    assert lc.w_gauge(np.diag([1, .5, 0]), WeightSpec.explicit([1, .5])) == pytest.approx(1.0)
    s = lc.singular_values(TWO_SCHUR_N1)
    k = np.arange(1, 4)
    want = np.max(s[s > 1e-12] * k[s > 1e-12] ** 0.25)
    assert lc.w_gauge(TWO_SCHUR_N1, WeightSpec.schatten_lorentz(4)) == pytest.approx(want, rel=1e-13)


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 12), st.integers(0, 2**32 - 1))
def test_multiplicative_weyl(n, seed):
    rng = np.random.default_rng(seed)
    A = ginibre(rng, n)
    lam = np.sort(np.abs(np.linalg.eigvals(A)))[::-1]
    s = lc.singular_values(A)
    for m in range(1, n + 1):
        assert np.sum(np.log(lam[:m])) <= np.sum(np.log(s[:m])) + 1e-9 * (1 + abs(np.sum(np.log(s[:m]))))


def test_sort_by_modulus_is_deterministic():
    v = np.array([1j, -1, 1, 0.5, -1j])
    out = lc.sort_by_modulus(v)
    np.testing.assert_array_equal(out, [1, 1j, -1j, -1, 0.5])


def test_distances():
    a = np.array([0, 1])
    b = np.array([0, 1, 3])
    assert lc.spectral_variation(b, a) == pytest.approx(2.0)
    assert lc.spectral_variation(a, b) == 0.0
    assert lc.hausdorff(a, b) == pytest.approx(2.0)
    assert lc.hausdorff(b, a) == lc.hausdorff(a, b)
    with pytest.raises(EmptySpectrum):
        lc.hausdorff([], a)
    assert lc.multiset_match([1, 1, 2], [2, 1, 1 + 1e-12], 1e-9)
    assert not lc.multiset_match([1, 1, 2], [1, 2, 2], 1e-9)


def test_two_schur_eigenvalues_and_decompositions():
    ev = lc.eigenvalues(TWO_SCHUR_A)
    np.testing.assert_allclose(ev, [2, 0, 0], atol=1e-12)
    p1 = lc.schur_decompose(TWO_SCHUR_A, "modulus")
    np.testing.assert_allclose(p1.nilpotent_part, TWO_SCHUR_N1, atol=1e-12)
    p2 = lc.schur_decompose(TWO_SCHUR_A, "explicit", permutation=[1, 0, 2])
    np.testing.assert_allclose(p2.normal_part, TWO_SCHUR_D2, atol=1e-12)
    assert lc.schatten_norm(p2.nilpotent_part, 4) ** 4 == pytest.approx(80.0, rel=1e-9)
    for p in (p1, p2):
        assert lc.check_schur_parts(TWO_SCHUR_A, p)["ok"]


@pytest.mark.parametrize("ordering", ["modulus", "search"])
def test_schur_parts_invariants(rng, ordering):
    for n in (1, 2, 4, 7):
        A = ginibre(rng, n)
        p = lc.schur_decompose(A, ordering, weight=SL1.bar().dot())
        chk = lc.check_schur_parts(A, p)
        assert chk["ok"], chk


def test_search_never_worse_than_modulus(rng):
    v = SL1.bar().dot()
    for n in (3, 5, 6):
        A = ginibre(rng, n)
        g_mod = lc.w_gauge(lc.schur_decompose(A, "modulus").nilpotent_part, v)
        g_s = lc.w_gauge(lc.schur_decompose(A, "search", weight=v).nilpotent_part, v)
        assert g_s <= g_mod * (1 + 1e-9)


def test_search_matches_brute_force(rng):
    import itertools
    v = SL1.bar().dot()
    A = ginibre(rng, 4)
    best = min(lc.w_gauge(lc.schur_decompose(A, "explicit", permutation=p).nilpotent_part, v)
               for p in itertools.permutations(range(4)))
    got = lc.w_gauge(lc.schur_decompose(A, "search", weight=v).nilpotent_part, v)
    assert got == pytest.approx(best, rel=1e-9)


def test_normal_matrix_has_zero_nilpotent_part(rng):
    A = random_normal(rng, 6)
    p = lc.schur_decompose(A)
    assert np.max(lc.singular_values(p.nilpotent_part)) < 1e-13 * np.linalg.norm(A)


def test_ordering_errors(rng):
    A = ginibre(rng, 3)
    with pytest.raises(OrderingLengthMismatch):
        lc.schur_decompose(A, "explicit", permutation=[0, 1])
    T, U = lc.complex_schur(A)
    with pytest.raises(OrderingLengthMismatch):
        lc.reorder_schur(T, U, [1, 2])


@pytest.mark.parametrize("w", [SL1, WeightSpec.exponential(1, 1), WeightSpec.exponential(3, 1)],
                         ids=str)
def test_screened_search_equals_exact_search(rng, w):
    from specbound import kernels
    v = w.bar().dot()
    for n in (5, 7):
        T, _ = lc.complex_schur(ginibre(rng, n))
        uppers, _ = kernels.sweep_orderings_numpy(T.copy(), kernels.plain_changes(n))
        s = np.linalg.svd(uppers, compute_uv=False)
        lv = np.log(v.values(n))
        with np.errstate(divide="ignore"):
            exact = np.exp(np.min(np.max(np.log(s) - lv, axis=1)))
        _, got = lc.search_orderings(T, v)
        assert got == pytest.approx(exact, rel=1e-12)
