"""Monomial f-MI through centered indicator correlations.

For ``f_m(t) = (t - 1)^m`` the f-MI of a pair equals a sum over the table of
centered, scaled indicator correlations

    C(a, b) = (p(a, b) - p_X(a) p_Y(b)) / sqrt(p_X(a) p_Y(b)),

namely ``sum C^m / (p_X p_Y)^(m/2 - 1)``.  The same sum is an inner product of
tensor-power feature vectors, which is why the monomial f-MI matrix is a Gram
matrix.  Those feature vectors are never built here; only the sum is.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .dist import JointDistribution, PairwiseJoint, pair_dependence, pairwise_joint
from .errors import RadiusExceeded, ZeroMarginal
from .fmi import KernelReport, psd_check


@dataclass(frozen=True, eq=False)
class CenteredCorrelation:
    """``C(a, b)`` over the supported symbols; rows/columns outside the support are zero."""

    table: np.ndarray
    left: np.ndarray
    right: np.ndarray
    left_support: np.ndarray = field(repr=False)
    right_support: np.ndarray = field(repr=False)

    def centering_defect(self) -> float:
        """Largest weighted row/column sum; zero up to roundoff for any valid pair."""
        cols = np.sqrt(self.left) @ self.table
        rows = self.table @ np.sqrt(self.right)
        return float(max(np.max(np.abs(cols)), np.max(np.abs(rows))))


def _support_mask(marginal: np.ndarray, requested, side: str) -> np.ndarray:
    if requested is None:
        return marginal > 0
    mask = np.zeros(marginal.shape, dtype=bool)
    mask[np.asarray(list(requested), dtype=int)] = True
    zero = np.nonzero(mask & (marginal <= 0))[0]
    if zero.size:
        raise ZeroMarginal(f"{side} symbol(s) {zero.tolist()} have zero marginal probability")
    return mask


def centered_correlation(p: PairwiseJoint, support: Optional[tuple] = None) -> CenteredCorrelation:
    """Centered correlation table of one pair.

    ``support`` optionally names ``(left_symbols, right_symbols)`` to use;
    by default every symbol with positive marginal mass is used.  Requesting a
    zero-mass symbol raises :class:`ZeroMarginal`.
    """
    req_left, req_right = (None, None) if support is None else support
    lmask = _support_mask(p.left, req_left, "left")
    rmask = _support_mask(p.right, req_right, "right")
    q = p.product
    mask = np.outer(lmask, rmask) & (q > 0)  # a product can underflow to zero
    C = np.zeros(q.shape)
    C[mask] = (p.joint[mask] - q[mask]) / np.sqrt(q[mask])
    return CenteredCorrelation(C, p.left, p.right, lmask, rmask)


def monomial_mi(p: PairwiseJoint, m: int) -> float:
    """``I_f`` for ``f(t) = (t - 1)^m`` evaluated as ``sum C^m / (p_X p_Y)^(m/2 - 1)``."""
    if m < 2:
        raise ValueError(f"monomial order must be >= 2, got {m}")
    cc = centered_correlation(p)
    q = p.product
    mask = np.outer(cc.left_support, cc.right_support) & (q > 0)
    q = q[mask]
    c = cc.table[mask]
    # C^m / q^(m/2 - 1) written as C^2 (C / sqrt q)^(m - 2) so tiny q cannot give 0/0
    return float(np.sum(c * c * (c / np.sqrt(q)) ** (m - 2)))


def monomial_matrix(j: JointDistribution, m: int) -> np.ndarray:
    """n x n matrix of :func:`monomial_mi`, diagonal from the self-pairs."""
    n = j.n_vars
    M = np.zeros((n, n))
    for i, l in itertools.combinations_with_replacement(range(n), 2):
        M[i, l] = M[l, i] = monomial_mi(pairwise_joint(j, i, l), m)
    return M


def verify_gram_psd(j: JointDistribution, m: int, tau: Optional[float] = None) -> KernelReport:
    """PSD report for the monomial f-MI matrix of order ``m``.

    ``psd`` is expected to be true for every valid input; a false verdict means a
    bug or a tolerance breach, not a counterexample.
    """
    return psd_check(monomial_matrix(j, m), tau)


@dataclass(frozen=True)
class MixtureValue:
    """Truncated power-series f-MI with an estimate of the neglected tail."""

    value: float
    tail_bound: float
    delta: float
    order: int


def mixture_mi(p: PairwiseJoint, coeffs: Sequence[float], radius: float = 1.0) -> MixtureValue:
    """``sum_{m=2}^{M} a_m I_{(t-1)^m}`` for one pair.

    Parameters
    ----------
    p : PairwiseJoint
    coeffs : sequence of float
        Taylor coefficients indexed by order, ``coeffs[m] = a_m``.  Entries at
        orders 0 and 1 are ignored: the constant term vanishes with ``f(1) = 0``
        and the linear term integrates to zero.
    radius : float
        Convergence radius ``eta`` of the series.  Every ratio of the pair must
        satisfy ``|r - 1| < eta``.

    Returns
    -------
    MixtureValue
        ``tail_bound`` uses ``|I_{(t-1)^m}| <= delta^m`` together with the
        Cauchy-type estimate ``|a_m| <= c / eta^m``, where ``c`` is the largest
        ``|a_m| eta^m`` seen among the supplied orders.  With an infinite
        radius only the supplied terms exist and the bound is zero.
    """
    a = np.asarray(coeffs, dtype=float)
    M = a.size - 1
    delta = pair_dependence(p)
    if delta >= radius:
        raise RadiusExceeded(f"max |r - 1| = {delta:.6g} is outside the series radius {radius:.6g}")
    value = sum(a[m] * monomial_mi(p, m) for m in range(2, M + 1) if a[m] != 0.0)

    if M < 2 or not np.isfinite(radius):
        tail = 0.0
    elif delta == 0.0:
        tail = 0.0
    else:
        orders = np.arange(2, M + 1)
        c = float(np.max(np.abs(a[2:]) * radius ** orders.astype(float)))
        x = delta / radius
        tail = c * x ** (M + 1) / (1.0 - x)
    return MixtureValue(float(value), float(tail), delta, M)
