import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fmipsd import (DeltaNotPSD, ShapeMismatch, assemble_block, block_spectrum, delta_matrix,
                    get_generator, kernel_matrix, min_replicas_for_indefiniteness, paper_preset)
from fmipsd.forcing import replica_mi_matrix

from helpers import random_family


def random_instance(rng, n_max=5):
    n = int(rng.integers(1, n_max + 1))
    A = rng.normal(size=(n, n))
    K = (A + A.T) / 2
    D = np.diag(rng.uniform(0, 2, size=n))
    return K, D


def test_preset_kernel_is_scaled_circulant():
    K = kernel_matrix(get_generator("tv"), paper_preset())
    s = math.sqrt(2) / 2
    expected = np.array([[1, s, 0, s], [s, 1, s, 0], [0, s, 1, s], [s, 0, s, 1]]) / 9
    np.testing.assert_allclose(K, expected, atol=1e-12)
    np.testing.assert_allclose(np.diag(delta_matrix(get_generator("tv"), paper_preset())),
                               1 / 3, atol=1e-12)


def test_preset_forcing():
    f = get_generator("tv")
    fam = paper_preset()
    K, D = kernel_matrix(f, fam), delta_matrix(f, fam)
    res = min_replicas_for_indefiniteness(K, D)
    assert res.R == 8 and res.certified
    assert res.quadratic_form < 0
    B = assemble_block(K, D, 8)
    assert res.witness @ B @ res.witness == pytest.approx(res.quadratic_form, abs=1e-12)
    assert np.linalg.eigvalsh(assemble_block(K, D, 7))[0] > 0


def test_block_layout():
    K = np.array([[1.0, 2.0], [2.0, 3.0]])
    D = np.diag([10.0, 20.0])
    B = assemble_block(K, D, 3)
    assert B.shape == (6, 6)
    assert B[0, 0] == 11.0 and B[1, 1] == 23.0 and B[0, 2] == 1.0 and B[1, 5] == 3.0
    assert B[0, 3] == 2.0


def test_block_identity():
    rng = np.random.default_rng(12)
    for _ in range(100):
        K, D = random_instance(rng)
        R = int(rng.integers(1, 9))
        direct = np.linalg.eigvalsh(assemble_block(K, D, R))
        np.testing.assert_allclose(block_spectrum(K, D, R), direct, atol=1e-9)


@pytest.mark.parametrize("name", ["kl", "js", "tv", "chi2"])
def test_block_matches_replica_information(name):
    f = get_generator(name)
    rng = np.random.default_rng(7)
    for _ in range(5):
        fam = random_family(rng, max_n=3)
        K, D = kernel_matrix(f, fam), delta_matrix(f, fam)
        for R in (1, 2, 3):
            np.testing.assert_allclose(assemble_block(K, D, R), replica_mi_matrix(f, fam, R),
                                       atol=1e-12)


def test_chi2_kernel_psd():
    f = get_generator("chi2")
    rng = np.random.default_rng(3)
    for _ in range(100):
        fam = random_family(rng)
        K, D = kernel_matrix(f, fam), delta_matrix(f, fam)
        assert np.linalg.eigvalsh(K)[0] >= -1e-10
        assert np.min(np.diag(D)) >= -1e-10
        assert min_replicas_for_indefiniteness(K, D) is None


def test_errors():
    with pytest.raises(DeltaNotPSD):
        min_replicas_for_indefiniteness(np.eye(2), np.diag([1.0, -0.1]))
    with pytest.raises(ShapeMismatch):
        assemble_block(np.eye(2), np.ones((2, 2)), 2)
    with pytest.raises(ShapeMismatch):
        block_spectrum(np.eye(2), np.eye(3), 2)
    with pytest.raises(ShapeMismatch):
        assemble_block(np.eye(2), np.eye(2), 0)


def test_budget_too_small():
    K = np.array([[1.0, -1.01], [-1.01, 1.0]])
    D = np.eye(2)
    assert min_replicas_for_indefiniteness(K, D, R_max=10) is None
    assert min_replicas_for_indefiniteness(K, D).R == 101


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, (3, 3), elements=st.floats(-1, 1)),
       arrays(np.float64, 3, elements=st.floats(0, 1)))
def test_forcing_is_sound_and_minimal(a, d):
    K = (a + a.T) / 2
    D = np.diag(d)
    res = min_replicas_for_indefiniteness(K, D, R_max=200)
    if res is None:
        return
    spec = block_spectrum(K, D, res.R)
    assert spec[0] < 0
    assert res.witness @ assemble_block(K, D, res.R) @ res.witness < 0
    if res.R > 1:
        below = block_spectrum(K, D, res.R - 1)
        assert below[0] >= -1e-8 * max(1.0, np.max(np.abs(below)))
    # the most negative direction of K already works past the Rayleigh bound
    assert res.R <= math.floor(res.rayleigh_bound) + 1
