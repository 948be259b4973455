"""f-mutual information, the variable-indexed f-MI matrix, and PSD checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import linalg

from .dist import JointDistribution, PairwiseJoint, pairwise_joint
from .errors import DomainError, InfiniteDivergence, NotSymmetric
from .generators import FGenerator, evaluate

SYMMETRY_TOL = 1e-10
RELATIVE_PSD_TOL = 1e-8
ABSOLUTE_PSD_FLOOR = 1e-12


def f_mutual_information(p: PairwiseJoint, f: FGenerator) -> float:
    """``I_f(X; Y) = D_f(P_XY || P_X x P_Y)`` for one pairwise joint.

    Only atoms with positive product mass contribute; where the joint vanishes on
    such an atom the generator contributes ``f(0)``.
    """
    q = p.product
    mask = q > 0
    qv = q[mask]
    ratios = p.joint[mask] / qv
    if np.any(ratios == 0) and not np.isfinite(f.f_zero):
        raise InfiniteDivergence(f"{f.name}: f(0) is infinite and the joint vanishes "
                                 "on an atom of the product measure")
    try:
        vals = evaluate(f, ratios)
    except DomainError as exc:
        raise InfiniteDivergence(str(exc)) from exc
    return float(np.dot(qv, vals))


def mi_matrix(j: JointDistribution, f: FGenerator) -> np.ndarray:
    """Symmetric matrix ``M[i, l] = I_f(X_i; X_l)``, each unordered pair computed once.

    The diagonal uses the self-pair joint, so off-diagonal atoms of ``(X_i, X_i)``
    contribute ``q f(0)``.
    """
    n = j.n_vars
    M = np.zeros((n, n))
    for i, l in itertools.combinations_with_replacement(range(n), 2):
        try:
            value = f_mutual_information(pairwise_joint(j, i, l), f)
        except InfiniteDivergence as exc:
            raise InfiniteDivergence(f"pair ({i}, {l}): {exc}", pair=(i, l)) from exc
        M[i, l] = M[l, i] = value
    return M


@dataclass(frozen=True, eq=False)
class KernelReport:
    """Spectral summary of a symmetric matrix and its PSD verdict."""

    matrix: np.ndarray
    eigenvalues: np.ndarray
    min_eigenvalue: float
    psd: bool
    witness: np.ndarray
    tolerance: float

    def to_dict(self) -> dict:
        return {
            "matrix": self.matrix.tolist(),
            "eigenvalues": self.eigenvalues.tolist(),
            "min_eigenvalue": float(self.min_eigenvalue),
            "psd": bool(self.psd),
            "witness": self.witness.tolist(),
            "tolerance": float(self.tolerance),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "KernelReport":
        return cls(
            matrix=np.asarray(data["matrix"], dtype=float),
            eigenvalues=np.asarray(data["eigenvalues"], dtype=float),
            min_eigenvalue=float(data["min_eigenvalue"]),
            psd=bool(data["psd"]),
            witness=np.asarray(data["witness"], dtype=float),
            tolerance=float(data["tolerance"]),
        )


def default_tolerance(eigenvalues) -> float:
    """``1e-8`` times the spectral radius, floored at ``1e-12``."""
    ev = np.asarray(eigenvalues, dtype=float)
    radius = float(np.max(np.abs(ev))) if ev.size else 0.0
    return max(RELATIVE_PSD_TOL * radius, ABSOLUTE_PSD_FLOOR)


def symmetrize(m, tol: float = SYMMETRY_TOL) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {m.shape}")
    gap = float(np.max(np.abs(m - m.T))) if m.size else 0.0
    if gap > tol:
        raise NotSymmetric(f"matrix is not symmetric (max |m - m^T| = {gap:.3g})")
    return (m + m.T) / 2.0


def psd_check(m, tau: Optional[float] = None) -> KernelReport:
    """Full symmetric eigendecomposition and PSD verdict ``min eigenvalue >= -tau``."""
    sym = symmetrize(m)
    w, V = linalg.eigh(sym)
    tol = default_tolerance(w) if tau is None else float(tau)
    witness = V[:, 0] / np.linalg.norm(V[:, 0])
    return KernelReport(sym, w, float(w[0]), bool(w[0] >= -tol), witness, tol)
