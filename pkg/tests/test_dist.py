import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fmipsd import (IndexOutOfRange, JointDistribution, NegativeProbability, NormalizationError,
                    PairwiseJoint, ShapeMismatch, pair_dependence, pairwise_joint, ratio_table,
                    validate, weak_dependence_radius)
from fmipsd.latent import pair_table

from helpers import perfectly_dependent, random_joint


def test_uniform_square_is_valid():
    validate(JointDistribution(np.full((2, 2), 0.25)))


def test_normalization_and_sign_errors():
    with pytest.raises(NormalizationError):
        JointDistribution(np.array([0.5, 0.499]))
    with pytest.raises(NegativeProbability):
        JointDistribution(np.array([1.1, -0.1]))
    with pytest.raises(ShapeMismatch):
        JointDistribution.from_atoms([2, 2], [((0, 0, 1), 1.0)])
    with pytest.raises(ShapeMismatch):
        JointDistribution.from_atoms([2, 2], [((0, 2), 1.0)])


def test_table_is_read_only():
    j = JointDistribution(np.full(4, 0.25))
    with pytest.raises(ValueError):
        j.table[0] = 1.0


def test_json_round_trip(tmp_path):
    j = JointDistribution.from_atoms([2, 3], [((0, 0), 0.5), ((1, 2), 0.25), ((1, 1), 0.25)])
    path = tmp_path / "d.json"
    path.write_text(json.dumps(j.to_dict()))
    back = JointDistribution.load(path)
    np.testing.assert_array_equal(back.table, j.table)
    assert back.to_dict()["alphabet_sizes"] == [2, 3]


def test_pairwise_joint_examples():
    j = perfectly_dependent()
    np.testing.assert_allclose(pairwise_joint(j, 0, 1).joint, np.diag([0.5, 0.5]))
    three = JointDistribution.independent([[0.5, 0.5]] * 3)
    np.testing.assert_allclose(pairwise_joint(three, 0, 2).joint, np.full((2, 2), 0.25))


def test_self_pair_is_diagonal():
    j = JointDistribution(np.array([[0.1, 0.2], [0.3, 0.4]]))
    p = pairwise_joint(j, 1, 1)
    np.testing.assert_allclose(p.joint, np.diag(j.marginal(1)))


def test_transposed_order():
    rng = np.random.default_rng(3)
    j = random_joint(rng, 3)
    np.testing.assert_allclose(pairwise_joint(j, 2, 0).joint, pairwise_joint(j, 0, 2).joint.T)


def test_bad_index():
    j = perfectly_dependent()
    with pytest.raises(IndexOutOfRange):
        pairwise_joint(j, 0, 2)
    with pytest.raises(IndexOutOfRange):
        j.marginal(-1)


def test_ratio_examples():
    r = ratio_table(pairwise_joint(perfectly_dependent(), 0, 1))
    np.testing.assert_allclose(r, [[2, 0], [0, 2]])
    # latent pair a = 1/3, rho = 2/9 at (-1, -1) -> index (1, 1)
    assert ratio_table(pair_table(1 / 3, 2 / 9))[1, 1] == pytest.approx(1.5, abs=1e-14)


def test_ratio_marks_zero_product_as_absent():
    p = PairwiseJoint(np.array([[0.5, 0.0], [0.5, 0.0]]))
    r = ratio_table(p)
    assert np.isnan(r[:, 1]).all()
    assert not np.isnan(r[:, 0]).any()


def test_dependence_radius_examples():
    assert weak_dependence_radius(JointDistribution.independent([[0.3, 0.7], [0.5, 0.5]])) == 0
    assert weak_dependence_radius(perfectly_dependent()) == pytest.approx(1.0)
    assert pair_dependence(pair_table(1 / 3, 2 / 9)) == pytest.approx(0.5)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, (2, 3, 2), elements=st.floats(0, 1)), st.permutations([0, 1, 2]))
def test_marginal_consistency_and_relabeling(raw, perm):
    if raw.sum() < 1e-3:
        raw = raw + 0.1
    j = JointDistribution(raw / raw.sum())
    for i in range(3):
        for l in range(3):
            np.testing.assert_allclose(pairwise_joint(j, i, l).left, j.marginal(i), atol=1e-12)
    reordered = JointDistribution(np.transpose(j.table, perm))
    relabeled = JointDistribution(j.table[::-1, :, ::-1])
    radius = weak_dependence_radius(j)
    assert weak_dependence_radius(reordered) == pytest.approx(radius, abs=1e-12)
    assert weak_dependence_radius(relabeled) == pytest.approx(radius, abs=1e-12)
