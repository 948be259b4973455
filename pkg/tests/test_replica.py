import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fmipsd import (JointDistribution, PairwiseJoint, RadiusExceeded, ZeroMarginal,
                    centered_correlation, f_mutual_information, get_generator, mixture_mi,
                    monomial_mi, pairwise_joint, power_series, taylor_at_one,
                    verify_gram_psd)
from fmipsd.replica import monomial_matrix

from helpers import random_joint, random_pair, weak_joint


def test_centered_correlation_example():
    p = PairwiseJoint(np.diag([0.5, 0.5]))
    cc = centered_correlation(p)
    np.testing.assert_allclose(cc.table, [[0.5, -0.5], [-0.5, 0.5]], atol=1e-15)
    assert monomial_mi(p, 2) == pytest.approx(1.0, abs=1e-15)


def test_zero_marginal_support():
    p = PairwiseJoint(np.array([[0.5, 0.0], [0.5, 0.0]]))
    with pytest.raises(ZeroMarginal):
        centered_correlation(p, support=([0, 1], [0, 1]))
    cc = centered_correlation(p)
    assert not cc.right_support[1]
    assert monomial_mi(p, 3) == 0.0


def test_order_below_two_rejected():
    with pytest.raises(ValueError):
        monomial_mi(PairwiseJoint(np.full((2, 2), 0.25)), 1)


def test_centering_and_vanishing_linear_term():
    rng = np.random.default_rng(1)
    for _ in range(200):
        p = random_pair(rng)
        cc = centered_correlation(p)
        assert cc.centering_defect() <= 1e-14
        # order one: sum of (p - q) over the table is zero
        mask = np.outer(cc.left_support, cc.right_support)
        assert abs(np.sum(cc.table[mask] * np.sqrt(p.product[mask]))) <= 1e-14


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_monomial_matches_direct(m):
    rng = np.random.default_rng(100 + m)
    f = power_series([0.0] * m + [1.0])
    for _ in range(200):
        p = random_pair(rng)
        assert monomial_mi(p, m) == pytest.approx(f_mutual_information(p, f), abs=1e-10)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_gram_matrix_is_psd(m):
    rng = np.random.default_rng(40 + m)
    for _ in range(30):
        j = random_joint(rng, int(rng.integers(1, 6)))
        report = verify_gram_psd(j, m)
        assert report.psd, report.min_eigenvalue


def test_gram_cauchy_schwarz():
    # Gram matrices satisfy |M_il|^2 <= M_ii M_ll
    rng = np.random.default_rng(9)
    for _ in range(30):
        M = monomial_matrix(random_joint(rng, 4), 3)
        d = np.diag(M)
        assert np.all(M ** 2 <= np.outer(d, d) + 1e-13)


def test_mixture_kl_matches_direct():
    kl = get_generator("kl")
    coeffs = taylor_at_one(kl, 14).values
    rng = np.random.default_rng(17)
    for _ in range(100):
        j = weak_joint(rng, 2, delta=0.1)
        p = pairwise_joint(j, 0, 1)
        mv = mixture_mi(p, coeffs)
        assert mv.delta <= 0.1 + 1e-12
        direct = f_mutual_information(p, kl)
        assert abs(mv.value - direct) <= 1e-9
        assert abs(mv.value - direct) <= mv.tail_bound + 1e-15


def test_mixture_radius():
    p = PairwiseJoint(np.diag([0.5, 0.5]))
    with pytest.raises(RadiusExceeded):
        mixture_mi(p, [0, 0, 1, -1])
    mv = mixture_mi(p, [0, 0, 1], radius=np.inf)
    assert mv.value == pytest.approx(1.0) and mv.tail_bound == 0.0


def test_mixture_ignores_low_orders():
    p = PairwiseJoint(np.array([[0.3, 0.2], [0.2, 0.3]]))
    a = mixture_mi(p, [5.0, -3.0, 1.0, 0.5], radius=10.0).value
    b = mixture_mi(p, [0.0, 0.0, 1.0, 0.5], radius=10.0).value
    assert a == b


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, (3, 4), elements=st.just(0.0) | st.floats(1e-6, 1)),
       st.integers(2, 6))
def test_relabeling_invariance(raw, m):
    if raw.sum() < 1e-3:
        raw = raw + 0.1
    p = PairwiseJoint(raw / raw.sum())
    v = monomial_mi(p, m)
    close = pytest.approx(v, rel=1e-9, abs=1e-10)
    assert monomial_mi(PairwiseJoint(p.joint[::-1, ::-1]), m) == close
    assert monomial_mi(p.swapped(), m) == close
    if m % 2 == 0:
        assert v >= -1e-14


def test_independent_joint_gives_zero_matrix():
    j = JointDistribution.independent([[0.2, 0.8], [0.5, 0.25, 0.25]])
    M = monomial_matrix(j, 2)
    assert M[0, 1] == pytest.approx(0.0, abs=1e-15)
    assert M[0, 0] == pytest.approx(1.0)  # chi2 of a binary self pair = alphabet - 1
    assert M[1, 1] == pytest.approx(2.0)
