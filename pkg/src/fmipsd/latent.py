"""Binary variables driven by a shared one-hot latent with a common bias.

Each ``Y_i`` in {-1, +1} satisfies

    Pr(Y_i = y | U) = (1 + y (a + <u_i, U>)) / 2,

where ``U`` is uniform over the ``2k`` signed basis vectors of R^k.  Pairwise
laws depend only on ``a`` and ``rho_ij = <u_i, u_j> / k``, which gives closed
forms for the f-MI of any pair (a three-point weighted sum of ``f``) and of a
variable with itself.

Symbols are encoded as ``+1 -> index 0`` and ``-1 -> index 1`` whenever a table
leaves this module.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .dist import JointDistribution, PairwiseJoint
from .errors import InadmissibleFamily, IndexOutOfRange, InfiniteDivergence, TooLarge
from .generators import FGenerator, evaluate

ADMISSIBILITY_SLACK = 1e-12
MAX_ENUMERATED_VARS = 16
SIGNS = (1, -1)  # index 0 <-> +1, index 1 <-> -1
PAPER_PRESET = "paper-tvd-relu-4"


@dataclass(frozen=True, eq=False)
class LatentFamily:
    """Bias ``a``, latent dimension ``k`` and one loading vector per variable."""

    a: float
    k: int
    loadings: np.ndarray

    def __post_init__(self):
        a = float(self.a)
        k = int(self.k)
        U = np.array(self.loadings, dtype=float)
        if U.ndim == 1 and U.size == 0:
            U = U.reshape(0, k)
        if U.ndim != 2:
            raise InadmissibleFamily(f"loadings must be an n x k array, got shape {U.shape}")
        if k < 1 or U.shape[1] != k:
            raise InadmissibleFamily(f"loadings have {U.shape[1]} columns but k = {k}")
        if not -1.0 < a < 1.0:
            raise InadmissibleFamily(f"bias must lie in (-1, 1), got {a}")
        if not np.all(np.isfinite(U)):
            raise InadmissibleFamily("loadings must be finite")
        sup = np.max(np.abs(U), axis=1) if U.size else np.zeros(U.shape[0])
        worst = int(np.argmax(sup)) if sup.size else 0
        if sup.size and abs(a) + sup[worst] > 1.0 + ADMISSIBILITY_SLACK:
            raise InadmissibleFamily(
                f"|a| + max|u_{worst}| = {abs(a) + sup[worst]:.12g} exceeds 1")
        U.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "loadings", U)

    @property
    def n(self) -> int:
        return self.loadings.shape[0]

    def gram(self) -> np.ndarray:
        """All ``rho_ij`` at once, diagonal included."""
        return self.loadings @ self.loadings.T / self.k

    def scaled(self, factor: float) -> "LatentFamily":
        return LatentFamily(self.a, self.k, factor * self.loadings)

    def to_dict(self) -> dict:
        return {"a": self.a, "k": self.k, "loadings": self.loadings.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "LatentFamily":
        try:
            return cls(data["a"], data["k"], data["loadings"])
        except KeyError as exc:
            raise InadmissibleFamily(f"family JSON is missing {exc}") from exc

    @classmethod
    def load(cls, path) -> "LatentFamily":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def paper_preset(loading_scale: float = 1.0) -> LatentFamily:
    """Four loadings at 45-degree steps on a circle, bias 1/3, k = 2.

    Loadings have length 2/3, which is ``sqrt 2`` times a reference length of
    ``2 / (3 sqrt 2)``; then ``rho_ij = <u_i, u_j> / 2`` equals the plain inner
    product of the reference vectors.  They touch the admissibility bound exactly;
    ``loading_scale`` multiplies them further (values above 1 are inadmissible).
    """
    r = 2.0 / 3.0 * loading_scale
    s = 1.0 / math.sqrt(2.0)
    dirs = np.array([[1.0, 0.0], [s, s], [0.0, 1.0], [-s, s]])
    return LatentFamily(1.0 / 3.0, 2, r * dirs)


PRESETS = {PAPER_PRESET: paper_preset}


def get_preset(name: str, **kwargs) -> LatentFamily:
    try:
        return PRESETS[name](**kwargs)
    except KeyError:
        raise KeyError(f"unknown family preset {name!r}; known: {sorted(PRESETS)}") from None


def _index(fam: LatentFamily, i) -> int:
    if not isinstance(i, (int, np.integer)) or not 0 <= i < fam.n:
        raise IndexOutOfRange(f"variable index {i!r} out of range for {fam.n} variables")
    return int(i)


def rho(fam: LatentFamily, i: int, j: int) -> float:
    i, j = _index(fam, i), _index(fam, j)
    return float(fam.loadings[i] @ fam.loadings[j]) / fam.k


def pair_table(a: float, r: float) -> PairwiseJoint:
    """2 x 2 law of two distinct, conditionally independent coordinates with parameter ``r``."""
    y = np.array(SIGNS, dtype=float)
    yi, yj = np.meshgrid(y, y, indexing="ij")
    joint = 0.25 * (1.0 + a * (yi + yj) + (a * a + r) * yi * yj)
    marg = 0.5 * (1.0 + a * y)
    return PairwiseJoint(joint, marg, marg)


def pairwise_joint_closed_form(fam: LatentFamily, i: int, j: int) -> PairwiseJoint:
    """Law of ``(Y_i, Y_j)`` for ``i != j``."""
    if _index(fam, i) == _index(fam, j):
        raise ValueError("closed-form pairwise joint needs i != j; use a self pair for i == j")
    return pair_table(fam.a, rho(fam, i, j))


def _ratio(t):
    # families on the admissibility boundary have ratios that are exactly 0
    # in exact arithmetic but can land a few ulps below it
    return np.where((t < 0) & (t > -1e-12), 0.0, t)


def kernel_value(f: FGenerator, a: float, z):
    """Three-point kernel ``H_a(z)``: the f-MI of a pair with parameter ``z``.

    Vectorized over ``z``.
    """
    z = np.asarray(z, dtype=float)
    wp, wm, wx = (1 + a) ** 2, (1 - a) ** 2, 1 - a * a
    out = (wp / 4.0 * evaluate(f, _ratio(1.0 + z / wp))
           + wm / 4.0 * evaluate(f, _ratio(1.0 + z / wm))
           + wx / 2.0 * evaluate(f, _ratio(1.0 - z / wx)))
    return float(out) if np.ndim(out) == 0 else out


def diagonal_value(f: FGenerator, a: float) -> float:
    """``d_a = I_f(Y_i; Y_i)``, which depends only on the bias."""
    if not math.isfinite(f.f_zero):
        raise InfiniteDivergence(f"{f.name}: f(0) is infinite, so I_f(Y; Y) diverges")
    return float((1 + a) ** 2 / 4.0 * evaluate(f, 2.0 / (1 + a))
                 + (1 - a) ** 2 / 4.0 * evaluate(f, 2.0 / (1 - a))
                 + (1 - a * a) / 2.0 * f.f_zero)


def enumerate_full_joint(fam: LatentFamily) -> JointDistribution:
    """Explicit joint of ``(Y_1, ..., Y_n)`` by summing over the ``2k`` latent atoms."""
    n = fam.n
    if n > MAX_ENUMERATED_VARS:
        raise TooLarge(f"{n} variables exceed the enumeration limit of {MAX_ENUMERATED_VARS}")
    if n == 0:
        raise TooLarge("family has no variables")
    latents = np.vstack([np.eye(fam.k), -np.eye(fam.k)])
    y = np.array(SIGNS, dtype=float)
    table = np.zeros((2,) * n)
    for U in latents:
        eta = fam.a + fam.loadings @ U
        # conditional law of each coordinate, axis 0 <-> +1; the clip only
        # absorbs the admissibility slack
        cond = np.clip(0.5 * (1.0 + np.outer(eta, y)), 0.0, 1.0)
        term = np.ones(())
        for row in cond:
            term = np.multiply.outer(term, row)
        table += term
    return JointDistribution(table / table.sum())


def replica_pairwise_joint(fam: LatentFamily, first: tuple, second: tuple) -> PairwiseJoint:
    """Law of two replica-indexed variables ``Y_i^(r)`` and ``Y_j^(s)``.

    Replicas are conditionally independent given the shared latent, so the law
    depends only on ``rho_ij`` (``rho_ii`` for two replicas of one variable) and
    not on the replica labels.
    """
    (i, r), (j, s) = first, second
    i, j = _index(fam, i), _index(fam, j)
    if (i, r) == (j, s):
        raise ValueError("replica_pairwise_joint needs two distinct replica variables")
    return pair_table(fam.a, rho(fam, i, j))


def family_dependence_radius(fam: LatentFamily, include_replicas: bool = True) -> float:
    """Largest ``|r - 1|`` over pairs of distinct variables and sign patterns.

    With ``include_replicas`` the pairs of replicas of one variable (parameter
    ``rho_ii``) count too, which is the relevant radius for block matrices.
    """
    G = fam.gram()
    if include_replicas:
        zs = np.abs(G[np.triu_indices(fam.n)])
    else:
        zs = np.abs(G[np.triu_indices(fam.n, 1)])
    if zs.size == 0:
        return 0.0
    return float(np.max(zs)) / (1.0 - abs(fam.a)) ** 2

