"""Replica block matrices ``B_R = J_R (x) K + I_R (x) Delta`` and indefiniteness certificates.

``R`` conditionally independent replicas of a latent family give an f-MI
matrix of exactly this block form.  Conjugating by an orthogonal matrix whose
first column is ``1_R / sqrt(R)`` splits it into ``R K + Delta`` plus ``R - 1``
copies of ``Delta``, so a negative direction of ``K`` becomes a negative
direction of ``B_R`` once ``R`` is large enough.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import linalg

from . import fmi
from .dist import PairwiseJoint
from .errors import DeltaNotPSD, ShapeMismatch
from .generators import FGenerator
from .latent import (LatentFamily, diagonal_value, kernel_value, replica_pairwise_joint)

DELTA_TOL = 1e-10
DEFAULT_R_MAX = 1024
MAX_CERTIFIED_SIZE = 4096


def kernel_matrix(f: FGenerator, fam: LatentFamily) -> np.ndarray:
    """``K[i, j] = H_a(rho_ij)``, diagonal included."""
    K = np.asarray(kernel_value(f, fam.a, fam.gram()), dtype=float).reshape(fam.n, fam.n)
    return (K + K.T) / 2.0


def delta_matrix(f: FGenerator, fam: LatentFamily) -> np.ndarray:
    """``Delta = diag(d_a - H_a(rho_ii))``."""
    d = diagonal_value(f, fam.a)
    h = np.atleast_1d(kernel_value(f, fam.a, np.diag(fam.gram())))
    return np.diag(d - h)


def _check_inputs(K, delta):
    K = fmi.symmetrize(K)
    delta = np.asarray(delta, dtype=float)
    if delta.shape != K.shape:
        raise ShapeMismatch(f"Delta has shape {delta.shape}, K has {K.shape}")
    if np.any(delta - np.diag(np.diag(delta))):
        raise ShapeMismatch("Delta must be diagonal")
    return K, np.diag(delta).copy()


def assemble_block(K, delta, R: int) -> np.ndarray:
    """Explicit ``(R n) x (R n)`` matrix; replica ``r`` of variable ``i`` sits at ``r n + i``."""
    if int(R) != R or R < 1:
        raise ShapeMismatch(f"replica count must be a positive integer, got {R}")
    K, d = _check_inputs(K, delta)
    R = int(R)
    return np.kron(np.ones((R, R)), K) + np.kron(np.eye(R), np.diag(d))


def block_spectrum(K, delta, R: int) -> np.ndarray:
    """Sorted eigenvalues of ``assemble_block(K, delta, R)`` without forming it."""
    if int(R) != R or R < 1:
        raise ShapeMismatch(f"replica count must be a positive integer, got {R}")
    K, d = _check_inputs(K, delta)
    top = linalg.eigh(R * K + np.diag(d), eigvals_only=True)
    return np.sort(np.concatenate([top, np.tile(d, int(R) - 1)]))


def replica_mi_matrix(f: FGenerator, fam: LatentFamily, R: int) -> np.ndarray:
    """f-MI matrix of all ``R n`` replica variables computed pair by pair.

    Independent of the Kronecker algebra; used to cross-check
    :func:`assemble_block` on small instances.
    """
    n = fam.n
    size = R * n
    marg = 0.5 * (1.0 + fam.a * np.array([1.0, -1.0]))
    B = np.zeros((size, size))
    for p in range(size):
        for q in range(p, size):
            first, second = (p % n, p // n), (q % n, q // n)
            if p == q:
                pair = PairwiseJoint.self_pair(marg)
            else:
                pair = replica_pairwise_joint(fam, first, second)
            B[p, q] = B[q, p] = fmi.f_mutual_information(pair, f)
    return B


@dataclass(frozen=True, eq=False)
class ForcingResult:
    """Smallest replica count making ``B_R`` indefinite, with a witness.

    ``witness`` is a unit vector of length ``R n`` and ``quadratic_form`` its
    Rayleigh quotient, the smallest eigenvalue of ``R K + Delta``.
    ``certified`` records that full eigendecompositions at ``R`` and ``R - 1``
    confirmed the boundary (skipped above 4096 rows).
    """

    R: int
    witness: np.ndarray
    quadratic_form: float
    rayleigh_bound: float
    certified: bool


def _block_tolerance(top: np.ndarray, d: np.ndarray) -> float:
    return fmi.default_tolerance(np.concatenate([top, d]))


def _top_min(K, d, R):
    w, V = linalg.eigh(R * K + np.diag(d))
    return w[0], V[:, 0], _block_tolerance(w, d)


def _assembled_is_psd(K, d, R) -> bool:
    # same verdict as psd_check, eigenvalues only
    w = linalg.eigh(assemble_block(K, np.diag(d), R), eigvals_only=True)
    return bool(w[0] >= -fmi.default_tolerance(w))


def min_replicas_for_indefiniteness(K, delta, R_max: int = DEFAULT_R_MAX) -> Optional[ForcingResult]:
    """Smallest ``R <= R_max`` for which ``B_R`` has an eigenvalue below ``-tau``.

    ``tau`` is the default relative tolerance of :func:`fmipsd.fmi.psd_check`
    applied to the block spectrum.  The search starts from the Rayleigh bound
    along the most negative eigenvector ``v`` of ``K``, then bisects: the
    smallest eigenvalue of ``R K + Delta`` is concave in ``R`` and nonnegative at
    ``R = 0``, so once negative it stays negative.

    Returns ``None`` when ``K`` is PSD within tolerance or ``R_max`` is too small.

    Raises
    ------
    DeltaNotPSD
        Some diagonal entry of ``Delta`` is below ``-1e-10``.
    """
    K, d = _check_inputs(K, delta)
    if d.size and d.min() < -DELTA_TOL:
        i = int(np.argmin(d))
        raise DeltaNotPSD(f"Delta[{i}] = {d[i]:.6g} is negative")
    d = np.maximum(d, 0.0)

    wK, VK = linalg.eigh(K)
    if wK[0] >= -fmi.default_tolerance(wK):
        return None
    v = VK[:, 0]
    bound = float(v @ (d * v)) / -wK[0]

    hi = max(1, math.floor(bound) + 1)
    while True:
        if hi > R_max:
            return None
        lam, _, tol = _top_min(K, d, hi)
        if lam < -tol:
            break
        hi += 1
    lo = 0  # B_0 := Delta, PSD by the check above
    while hi - lo > 1:
        mid = (lo + hi) // 2
        lam, _, tol = _top_min(K, d, mid)
        if lam < -tol:
            hi = mid
        else:
            lo = mid

    R = hi
    lam, w, _ = _top_min(K, d, R)
    witness = np.kron(np.ones(R) / math.sqrt(R), w)
    witness /= np.linalg.norm(witness)

    certified = False
    if R * K.shape[0] <= MAX_CERTIFIED_SIZE:
        below = R == 1 or _assembled_is_psd(K, d, R - 1)
        certified = bool(below and not _assembled_is_psd(K, d, R))
    return ForcingResult(R, witness, float(lam), bound, certified)


@dataclass(frozen=True, eq=False)
class CounterexampleCertificate:
    """A latent family and replica count whose f-MI matrix is indefinite.

    ``quadratic_form = witness^T B_R witness`` is negative.
    """

    family: LatentFamily
    generator: dict
    R: int
    witness: np.ndarray
    quadratic_form: float
    delta_star: float
    provenance: str

    def to_dict(self) -> dict:
        return {
            "family": self.family.to_dict(),
            "generator": dict(self.generator),
            "R": int(self.R),
            "witness": np.asarray(self.witness).tolist(),
            "quadratic_form": float(self.quadratic_form),
            "delta_star": float(self.delta_star),
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CounterexampleCertificate":
        return cls(
            family=LatentFamily.from_dict(data["family"]),
            generator=dict(data["generator"]),
            R=int(data["R"]),
            witness=np.asarray(data["witness"], dtype=float),
            quadratic_form=float(data["quadratic_form"]),
            delta_star=float(data["delta_star"]),
            provenance=str(data["provenance"]),
        )

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    def with_changes(self, **changes) -> "CounterexampleCertificate":
        fields = {k: getattr(self, k) for k in self.to_dict()}
        fields.update(changes)
        return CounterexampleCertificate(**fields)
