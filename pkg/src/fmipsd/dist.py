"""Finite discrete joint distributions, pairwise marginals and dependence ratios.

A :class:`JointDistribution` is a dense probability table with one axis per
variable.  Everything here is exact up to double precision; there is no
estimation from samples.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import IndexOutOfRange, NegativeProbability, NormalizationError, ShapeMismatch

NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Joint law of ``n`` finite-alphabet variables stored as a dense table.

    ``table[x_1, ..., x_n]`` is the probability of the atom ``(x_1, ..., x_n)``.
    Construction validates the table and makes it read-only.
    """

    table: np.ndarray

    def __post_init__(self):
        arr = np.array(self.table, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "table", arr)
        validate(self)

    @property
    def alphabet_sizes(self) -> tuple[int, ...]:
        return tuple(self.table.shape)

    @property
    def n_vars(self) -> int:
        return self.table.ndim

    def marginal(self, i: int) -> np.ndarray:
        _check_index(i, self.n_vars)
        axes = tuple(ax for ax in range(self.n_vars) if ax != i)
        return self.table.sum(axis=axes)

    def atoms(self):
        """Yield ``(index_tuple, probability)`` for every atom with p > 0."""
        for idx in zip(*np.nonzero(self.table)):
            yield tuple(int(v) for v in idx), float(self.table[idx])

    # construction helpers

    @classmethod
    def from_atoms(cls, alphabet_sizes: Sequence[int], atoms: Iterable) -> "JointDistribution":
        """Build from ``(index_tuple, p)`` pairs; omitted atoms get probability 0."""
        sizes = tuple(int(s) for s in alphabet_sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise ShapeMismatch(f"alphabet sizes must be positive integers, got {sizes}")
        table = np.zeros(sizes)
        for x, p in atoms:
            x = tuple(int(v) for v in x)
            if len(x) != len(sizes):
                raise ShapeMismatch(f"atom {x} has {len(x)} indices, expected {len(sizes)}")
            for v, s in zip(x, sizes):
                if not 0 <= v < s:
                    raise ShapeMismatch(f"atom {x} is outside the alphabets {sizes}")
            table[x] += float(p)
        return cls(table)

    @classmethod
    def independent(cls, marginals: Sequence[Sequence[float]]) -> "JointDistribution":
        table = np.ones(())
        for m in marginals:
            table = np.multiply.outer(table, np.asarray(m, dtype=float))
        return cls(table)

    @classmethod
    def from_dict(cls, data: dict) -> "JointDistribution":
        try:
            sizes = data["alphabet_sizes"]
            atoms = [(a["x"], a["p"]) for a in data["atoms"]]
        except (KeyError, TypeError) as exc:
            raise ShapeMismatch(f"malformed distribution JSON: {exc!r}") from exc
        return cls.from_atoms(sizes, atoms)

    def to_dict(self) -> dict:
        return {
            "alphabet_sizes": list(self.alphabet_sizes),
            "atoms": [{"x": list(x), "p": p} for x, p in self.atoms()],
        }

    @classmethod
    def load(cls, path) -> "JointDistribution":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass(frozen=True, eq=False)
class PairwiseJoint:
    """Two-variable joint table with its row and column marginals."""

    joint: np.ndarray
    left: np.ndarray = field(default=None)
    right: np.ndarray = field(default=None)

    def __post_init__(self):
        joint = np.array(self.joint, dtype=float)
        if joint.ndim != 2:
            raise ShapeMismatch(f"pairwise joint must be 2-D, got shape {joint.shape}")
        left = joint.sum(axis=1) if self.left is None else np.array(self.left, dtype=float)
        right = joint.sum(axis=0) if self.right is None else np.array(self.right, dtype=float)
        if left.shape != (joint.shape[0],) or right.shape != (joint.shape[1],):
            raise ShapeMismatch("marginal lengths do not match the joint table")
        if (np.max(np.abs(left - joint.sum(axis=1))) > NORMALIZATION_TOL
                or np.max(np.abs(right - joint.sum(axis=0))) > NORMALIZATION_TOL):
            raise ShapeMismatch("marginals are not the row/column sums of the joint table")
        for arr in (joint, left, right):
            arr.setflags(write=False)
        object.__setattr__(self, "joint", joint)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    @property
    def product(self) -> np.ndarray:
        return np.outer(self.left, self.right)

    def swapped(self) -> "PairwiseJoint":
        return PairwiseJoint(self.joint.T, self.right, self.left)

    @classmethod
    def self_pair(cls, marginal: Sequence[float]) -> "PairwiseJoint":
        """Joint of ``(X, X)``: ``p(x, y) = p(x) 1{x = y}``."""
        m = np.asarray(marginal, dtype=float)
        return cls(np.diag(m), m, m)


def _check_index(i, n):
    if not isinstance(i, (int, np.integer)) or not 0 <= i < n:
        raise IndexOutOfRange(f"variable index {i!r} out of range for {n} variables")


def validate(j: JointDistribution) -> None:
    """Check nonnegativity, shape and normalization of ``j``; raise on failure."""
    table = np.asarray(j.table)
    if table.ndim == 0 or any(s < 1 for s in table.shape):
        raise ShapeMismatch(f"probability table has invalid shape {table.shape}")
    if not np.all(np.isfinite(table)):
        raise NormalizationError("probability table contains non-finite entries")
    if np.any(table < 0):
        raise NegativeProbability(f"negative probability {table.min():.3g}")
    total = table.sum()
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise NormalizationError(f"probabilities sum to {total!r}, not 1")


def pairwise_joint(j: JointDistribution, i: int, l: int) -> PairwiseJoint:
    """Exact marginal of ``j`` on coordinates ``(i, l)``.

    ``i == l`` gives the self-pair table, diagonal with the marginal of ``X_i``.
    """
    _check_index(i, j.n_vars)
    _check_index(l, j.n_vars)
    if i == l:
        return PairwiseJoint.self_pair(j.marginal(i))
    others = tuple(ax for ax in range(j.n_vars) if ax not in (i, l))
    joint = j.table.sum(axis=others)
    if i > l:
        joint = joint.T
    return PairwiseJoint(joint)


def ratio_table(p: PairwiseJoint) -> np.ndarray:
    """Joint-to-product ratios ``r(x, y)``; NaN marks atoms with zero product mass."""
    q = p.product
    out = np.full(q.shape, np.nan)
    mask = q > 0
    out[mask] = p.joint[mask] / q[mask]
    return out


def pair_dependence(p: PairwiseJoint) -> float:
    """``max |r - 1|`` over the atoms of one pair with positive product mass."""
    r = ratio_table(p)
    finite = r[~np.isnan(r)]
    return float(np.max(np.abs(finite - 1.0))) if finite.size else 0.0


def weak_dependence_radius(j: JointDistribution) -> float:
    """Smallest ``delta*`` such that ``j`` is delta-pairwise-weakly-dependent for all delta > delta*."""
    best = 0.0
    for i, l in itertools.combinations(range(j.n_vars), 2):
        best = max(best, pair_dependence(pairwise_joint(j, i, l)))
    return best
