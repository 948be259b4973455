"""Power-series coefficients of the three-point kernel ``H_a``.

Substituting ``f(1 + u) = sum a_m u^m`` into ``H_a`` gives
``H_a(z) = sum d_m(a) z^m`` with ``d_m(a) = T_m(a) a_m`` and

    T_m(a) = [(1 + a)^(2 - 2m) + (1 - a)^(2 - 2m)] / 4 - (a^2 - 1)^(1 - m) / 2.

Since ``T_m(a) > 0`` for ``m >= 2`` and ``0 < |a| < 1``, the sign pattern of the
generator's coefficients carries over to the kernel's.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _cheb
from .errors import NumericUnstable
from .generators import FGenerator, taylor_at_one
from .latent import kernel_value

FIT_RADIUS_FRACTION = 0.8
FIT_MAX_DEGREE = 64
NONPOLYNOMIAL_RESIDUAL = 1e-3
DEFAULT_A_GRID = tuple(np.round(np.arange(0.05, 0.951, 0.05), 2))


def T(m: int, a):
    """Multiplier ``T_m(a)``; vectorized over ``a``.

    The displayed closed form gives ``T_0 = 1`` and ``T_1 = 0``.  ``d_0`` still
    vanishes because ``a_0 = f(1) = 0``.
    """
    a = np.asarray(a, dtype=float)
    m = int(m)
    out = (0.25 * ((1 + a) ** (2 - 2 * m) + (1 - a) ** (2 - 2 * m))
           - 0.5 * (a * a - 1) ** (1 - m))
    return float(out) if out.ndim == 0 else out


def T_reduced(m: int, a):
    """Rescaled multiplier ``((1 + a)(1 - a))^(m - 1) T_m(a)``.

    Equals ``(r^k + r^-k) / 4 - (-1)^k / 2`` with ``r = (1 + a) / (1 - a)`` and
    ``k = m - 1``, which is visibly positive for odd ``k`` and, for even ``k``,
    positive whenever ``r != 1``.
    """
    a = np.asarray(a, dtype=float)
    k = int(m) - 1
    r = (1 + a) / (1 - a)
    out = 0.25 * (r ** k + r ** (-k)) - 0.5 * (-1) ** k
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class PositivityReport:
    """Outcome of checking ``T_m(a) > 0`` on a grid of orders and biases.

    ``direct`` and ``reduced`` are ``(len(orders), len(a_grid))`` arrays.
    """

    orders: np.ndarray
    a_grid: np.ndarray
    direct: np.ndarray
    reduced: np.ndarray

    @property
    def all_positive(self) -> bool:
        return bool(np.all(self.reduced > 0) and np.all(self.direct > 0))

    @property
    def min_reduced(self) -> float:
        return float(np.min(self.reduced))

    def failures(self) -> list[tuple[int, float]]:
        bad = np.argwhere((self.reduced <= 0) | (self.direct <= 0))
        return [(int(self.orders[i]), float(self.a_grid[j])) for i, j in bad]

    def __bool__(self):
        return self.all_positive


def verify_T_positivity(m_max: int = 30, a_grid: Sequence[float] = DEFAULT_A_GRID) -> PositivityReport:
    """Evaluate both forms of ``T_m(a)`` for ``m = 2..m_max`` over ``a_grid``."""
    if m_max < 2:
        raise ValueError("m_max must be at least 2")
    orders = np.arange(2, m_max + 1)
    grid = np.asarray(a_grid, dtype=float)
    direct = np.array([T(m, grid) for m in orders]).reshape(len(orders), grid.size)
    reduced = np.array([T_reduced(m, grid) for m in orders]).reshape(len(orders), grid.size)
    return PositivityReport(orders, grid, direct, reduced)


def predicted_coefficients(f: FGenerator, a: float, M: int):
    """``d_m(a) = T_m(a) a_m`` for ``m = 0..M``.

    ``d_0 = a_0 = f(1)`` and ``d_1 = 0`` come out of the same product.

    Returns ``(values, errors)``; errors are zero for closed-form generators and
    scaled numeric Taylor error bars otherwise.
    """
    coeffs = taylor_at_one(f, M)
    mult = np.array([T(m, a) for m in range(M + 1)])
    return mult * coeffs.values, np.abs(mult) * coeffs.errors


@dataclass(frozen=True)
class EmpiricalFit:
    values: np.ndarray
    errors: np.ndarray
    radius: float
    residual: float
    nonpolynomial: bool


def empirical_coefficients(f: FGenerator, a: float, M: int) -> EmpiricalFit:
    """Least-squares Chebyshev fit of ``z -> H_a(z)`` on ``|z| <= 0.8 (1 - |a|)^2``.

    ``nonpolynomial`` is set when a plain degree-``M`` fit leaves a residual above
    ``1e-3``, the signature of a kink such as ``|z| / 2``.  Coefficients are
    returned in that case too, but carry no meaning beyond the flag.

    Raises
    ------
    NumericUnstable
        A smooth kernel's coefficient error bar exceeds both its magnitude and
        ``1e-4``.
    """
    h = FIT_RADIUS_FRACTION * (1 - abs(a)) ** 2

    def H(z):
        return kernel_value(f, a, z)

    residual = _cheb.fit_residual(H, 0.0, h, M)
    nonpoly = residual > NONPOLYNOMIAL_RESIDUAL
    fit = _cheb.local_fit(H, 0.0, h, M, max_degree=FIT_MAX_DEGREE)
    if not nonpoly:
        bad = np.nonzero((fit.noise > np.abs(fit.coeffs)) & (fit.noise > 1e-4))[0]
        if bad.size:
            m = int(bad[0])
            raise NumericUnstable(
                f"kernel coefficient d_{m} = {fit.coeffs[m]:.3g} has error bar {fit.noise[m]:.3g}")
    return EmpiricalFit(fit.coeffs, fit.noise, h, residual, bool(nonpoly))


@dataclass(frozen=True)
class CoefficientTable:
    """Predicted and fitted kernel coefficients at one bias, orders ``0..M``."""

    a: float
    M: int
    T: np.ndarray
    predicted: np.ndarray
    empirical: np.ndarray
    empirical_error: np.ndarray
    nonpolynomial: bool
    residual: float

    @property
    def gap(self) -> np.ndarray:
        return np.abs(self.predicted - self.empirical)

    def agrees(self, floor: float = 1e-7, factor: float = 10.0) -> bool:
        return bool(np.all(self.gap <= np.maximum(floor, factor * self.empirical_error)))

    def to_dict(self) -> dict:
        entries = [
            {"m": m, "T": float(self.T[m]), "predicted": _num(self.predicted[m]),
             "empirical": float(self.empirical[m]), "error": float(self.empirical_error[m]),
             "gap": _num(self.gap[m])}
            for m in range(self.M + 1)
        ]
        return {"a": self.a, "M": self.M, "nonpolynomial": self.nonpolynomial,
                "fit_residual": self.residual, "entries": entries}


def _num(x) -> Optional[float]:
    return float(x) if np.isfinite(x) else None


def coefficient_table(f: FGenerator, a: float, M: int = 8) -> CoefficientTable:
    """Side-by-side predicted and fitted coefficients of ``H_a``.

    Generators without a usable Taylor expansion at 1 (kinks) get NaN
    predictions; the fit and its non-polynomial flag are still reported.
    """
    mult = np.array([T(m, a) for m in range(M + 1)])
    emp = empirical_coefficients(f, a, M)
    try:
        pred, _ = predicted_coefficients(f, a, M)
    except ArithmeticError:
        pred = np.full(M + 1, np.nan)
    return CoefficientTable(float(a), M, mult, pred, emp.values, emp.errors,
                            emp.nonpolynomial, emp.residual)
