"""Random instance builders shared by the test modules."""

import numpy as np

from fmipsd import JointDistribution, LatentFamily, PairwiseJoint, weak_dependence_radius


def random_table(rng, shape, zero_prob=0.0):
    """Normalized nonnegative table; each cell is zeroed with probability ``zero_prob``."""
    t = rng.gamma(1.0, size=shape)  # Dirichlet(1) after normalizing
    if zero_prob:
        t[rng.random(shape) < zero_prob] = 0.0
    if t.sum() == 0:
        t.flat[0] = 1.0
    return t / t.sum()


def random_pair(rng, max_alphabet=5, zero_prob=0.2):
    shape = tuple(rng.integers(1, max_alphabet + 1, size=2))
    return PairwiseJoint(random_table(rng, shape, zero_prob))


def random_joint(rng, n, max_alphabet=3, zero_prob=0.1):
    shape = tuple(rng.integers(1, max_alphabet + 1, size=n))
    return JointDistribution(random_table(rng, shape, zero_prob))


def weak_joint(rng, n, max_alphabet=4, delta=0.5):
    """Random joint with dependence radius at most ``delta`` and unchanged marginals.

    Mixing ``Q`` with the product of its own marginals by weight ``lam`` keeps
    every marginal and scales each ratio's distance from 1 by ``lam``.
    """
    shape = tuple(rng.integers(2, max_alphabet + 1, size=n))
    q = JointDistribution(random_table(rng, shape))
    product = JointDistribution.independent([q.marginal(i) for i in range(n)])
    radius = weak_dependence_radius(q)
    lam = rng.uniform(0.0, 1.0) * (min(1.0, delta / radius) if radius > 0 else 1.0)
    return JointDistribution((1 - lam) * product.table + lam * q.table)


def random_family(rng, max_n=5, max_k=4, a=None, strict=False):
    """Random admissible latent family; ``strict`` keeps loadings off the boundary."""
    n = int(rng.integers(1, max_n + 1))
    k = int(rng.integers(1, max_k + 1))
    a = float(rng.uniform(-0.9, 0.9)) if a is None else a
    bound = 1.0 - abs(a)
    if strict:
        bound *= 0.99
    U = rng.uniform(-bound, bound, size=(n, k))
    if not strict and rng.random() < 0.3:
        # push one coordinate onto the admissibility boundary
        U[0, 0] = bound * np.sign(U[0, 0] or 1.0)
    return LatentFamily(a, k, U)


def perfectly_dependent():
    return JointDistribution(np.diag([0.5, 0.5]))
