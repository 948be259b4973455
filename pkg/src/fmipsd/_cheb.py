"""Least-squares Chebyshev fits used to extract Taylor coefficients numerically.

High-order finite-difference stencils lose every digit past order ~6 in double
precision, so derivatives are read off a polynomial fitted on Chebyshev nodes.
Trailing Chebyshev coefficients that sit on the roundoff plateau are chopped
before converting to the monomial basis; that keeps the degree (and hence the
noise amplification) as low as the function allows.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np
from numpy.polynomial import chebyshev as C

EPS = np.finfo(float).eps


def chebyshev_nodes(n: int) -> np.ndarray:
    """First-kind Chebyshev points on [-1, 1]."""
    k = np.arange(n)
    return np.cos(np.pi * (k + 0.5) / n)


@dataclass(frozen=True)
class LocalFit:
    """Monomial coefficients of ``g(center + h s)`` around ``s = 0``, rescaled to ``u = h s``.

    ``coeffs[m]`` estimates the m-th Taylor coefficient of ``g`` at ``center``;
    ``noise[m]`` bounds the roundoff propagated into it.
    """

    coeffs: np.ndarray
    noise: np.ndarray
    degree: int
    plateau: float
    halfwidth: float


def _derivative_functionals(degree: int, max_order: int) -> np.ndarray:
    # W[m, j] = (d^m T_j / ds^m)(0) / m!
    W = np.zeros((max_order + 1, degree + 1))
    eye = np.eye(degree + 1)
    for m in range(min(max_order, degree) + 1):
        for j in range(m, degree + 1):
            W[m, j] = C.chebval(0.0, C.chebder(eye[j], m)) / factorial(m)
    return W


def local_fit(func, center: float, halfwidth: float, max_order: int,
              max_degree: int = 32, oversample: int = 4, noise_factor: float = 4.0) -> LocalFit:
    """Fit ``func`` on ``[center - h, center + h]`` and return Taylor coefficient estimates.

    The fit starts at ``max_degree``; the degree is then cut back to just above
    the last Chebyshev coefficient that clears the roundoff plateau, and the
    reduced fit is re-solved.  Orders above the kept degree get zero with a
    noise bound taken from the plateau.
    """
    n = oversample * max_degree
    s = chebyshev_nodes(n)
    y = np.asarray(func(center + halfwidth * s), dtype=float)
    if not np.all(np.isfinite(y)):
        raise FloatingPointError("non-finite function values on the fitting grid")

    c = C.chebfit(s, y, max_degree)
    tail = np.abs(c[-max(max_degree // 4, 2):])
    plateau = float(max(3.0 * np.median(tail), np.max(tail) / 3.0, EPS * EPS))
    sigma = max(plateau * np.sqrt(n / 2.0), EPS * float(np.max(np.abs(y))))

    big = np.nonzero(np.abs(c) > 10.0 * plateau)[0]
    degree = min(max_degree, int(big[-1]) + 2 if big.size else 2)

    V = C.chebvander(s, degree)
    pinv = np.linalg.pinv(V)
    W = _derivative_functionals(degree, max_order)
    scale = halfwidth ** -np.arange(max_order + 1.0)
    L = scale[:, None] * (W @ pinv)
    coeffs = L @ y
    noise = noise_factor * sigma * np.linalg.norm(L, axis=1)
    if degree < max_order:
        hi = np.arange(degree + 1, max_order + 1.0)
        noise[degree + 1:] = 10.0 * plateau * (2.0 / halfwidth) ** hi
    return LocalFit(coeffs, noise, degree, plateau, halfwidth)


def fit_residual(func, center: float, halfwidth: float, degree: int, n: int = 256) -> float:
    """Max residual of a plain degree-``degree`` least-squares fit on Chebyshev nodes."""
    s = chebyshev_nodes(n)
    y = np.asarray(func(center + halfwidth * s), dtype=float)
    c = C.chebfit(s, y, degree)
    return float(np.max(np.abs(C.chebval(s, c) - y)))


def taylor_ladder(func, center: float, max_order: int, halfwidths=(0.2, 0.1, 0.05),
                  max_degree: int = 32):
    """Taylor coefficients at ``center`` refined over a ladder of window sizes.

    Each consecutive pair of windows gives a Richardson estimate; for every order
    the pair with the smallest combined error (window disagreement plus
    propagated roundoff) wins.  When the disagreement is at the roundoff level
    the wider, less noisy fit is kept instead of the extrapolant.

    Returns ``(coeffs, errors)``.
    """
    fits = [local_fit(func, center, h, max_order, max_degree) for h in halfwidths]
    orders = np.arange(max_order + 1)
    best = np.zeros(max_order + 1)
    err = np.full(max_order + 1, np.inf)
    for wide, narrow in zip(fits, fits[1:]):
        ratio = wide.halfwidth / narrow.halfwidth
        p = np.maximum(wide.degree + 1 - orders, 1)
        diff = narrow.coeffs - wide.coeffs
        extrapolated = narrow.coeffs + diff / (ratio ** p - 1.0)
        roundoff = wide.noise + narrow.noise
        value = np.where(np.abs(diff) > 2.0 * roundoff, extrapolated, wide.coeffs)
        e = np.abs(diff) + roundoff
        take = e < err
        best[take] = value[take]
        err[take] = e[take]
    return best, err


def one_sided_derivatives(func, center: float, halfwidth: float = 0.1, degree: int = 12,
                          orders=(1, 2)):
    """First/second derivatives of ``func`` at ``center`` from each side separately.

    Returns ``(left, right)`` arrays indexed like ``orders``.  Each side is fit on
    ``[center - h, center]`` or ``[center, center + h]`` only, so a kink at
    ``center`` shows up as a left/right mismatch.
    """
    n = 4 * degree
    s = chebyshev_nodes(n)
    out = []
    for sign in (-1.0, 1.0):
        # map s in [-1, 1] to t in [center, center + sign*h]
        t = center + sign * halfwidth * (s + 1.0) / 2.0
        y = np.asarray(func(t), dtype=float)
        c = C.chebfit(s, y, degree)
        vals = []
        for m in orders:
            d = C.chebval(-1.0, C.chebder(c, m))
            vals.append(d * (2.0 / (sign * halfwidth)) ** m)
        out.append(np.array(vals))
    return out[0], out[1]
