"""f-divergence generators: evaluation, Taylor coefficients at t = 1, cone verdicts.

A generator ``f`` is convex on ``(0, inf)`` with ``f(1) = 0``.  It produces PSD
f-MI matrices near independence exactly when its expansion at 1 is a
nonnegative mixture of ``(t - 1)**m`` for ``m >= 2``; :func:`classify` checks
that condition up to a finite order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from . import _cheb
from .errors import DomainError, NotDifferentiable, NumericUnstable, UnknownGenerator

NUMERIC_MAX_ORDER = 12
CLOSED_FORM_TOL = 1e-9
NUMERIC_TOL = 1e-4
SLOPE_TOL = 1e-6
CURVATURE_TOL = 1e-4


@dataclass(frozen=True, eq=False)
class FGenerator:
    """An f-divergence generator.

    Parameters
    ----------
    name : str
        Catalog identifier.
    func : callable
        Vectorized rule ``t -> f(t)`` for ``t > 0``.
    f_zero : float
        ``lim_{t -> 0+} f(t)``; may be ``inf``.
    taylor : callable, optional
        Closed form ``m -> f^(m)(1) / m!``.
    analytic_at_one : {"yes", "no", "unknown"}
    radius : float, optional
        Convergence radius of the expansion at 1 when known.  For
        ``power-series`` generators it also bounds the evaluation domain.
    params : dict
        Extra fields of the JSON spec (``alpha``, ``coeffs``, ...).
    """

    name: str
    func: Callable
    f_zero: float
    taylor: Optional[Callable[[int], float]] = None
    analytic_at_one: str = "unknown"
    radius: Optional[float] = None
    params: dict = field(default_factory=dict)
    domain_radius: float = math.inf

    def __call__(self, t):
        return evaluate(self, t)

    def taylor_at_one(self, order: int = NUMERIC_MAX_ORDER):
        return taylor_at_one(self, order)

    def to_spec(self) -> dict:
        return {"name": self.name, **self.params}

    def __repr__(self):
        extra = "".join(f", {k}={v!r}" for k, v in self.params.items())
        return f"FGenerator({self.name!r}{extra})"


def evaluate(f: FGenerator, t):
    """Evaluate ``f`` at ``t`` (scalar or array); ``t = 0`` returns ``f_zero``."""
    arr = np.asarray(t, dtype=float)
    if np.any(np.isnan(arr)) or np.any(arr < 0):
        raise DomainError(f"{f.name}: argument must be >= 0")
    if np.any(np.abs(arr - 1.0) > f.domain_radius * (1 + 1e-12)):
        raise DomainError(f"{f.name}: argument outside |t - 1| <= {f.domain_radius}")
    zero = arr == 0
    if np.any(zero) and not np.isfinite(f.f_zero):
        raise DomainError(f"{f.name}: f(0) is infinite")
    if not np.any(zero):
        out = np.asarray(f.func(arr), dtype=float)
    else:
        out = np.empty_like(arr)
        out[zero] = f.f_zero
        if np.any(~zero):
            out[~zero] = f.func(arr[~zero])
    return float(out) if out.ndim == 0 else out


# catalog


def _xlogx(t):
    t = np.asarray(t, dtype=float)
    return t * np.log(t)


def _kl():
    def taylor(m):
        if m == 1:
            return 1.0
        return 0.0 if m < 2 else (-1.0) ** m / (m * (m - 1))
    return FGenerator("kl", _xlogx, 0.0, taylor, "yes", 1.0)


def _reverse_kl():
    def taylor(m):
        return 0.0 if m < 1 else (-1.0) ** m / m
    return FGenerator("reverse-kl", lambda t: -np.log(t), math.inf, taylor, "yes", 1.0)


def _chi2():
    return FGenerator("chi2", lambda t: (np.asarray(t) - 1.0) ** 2, 1.0,
                      lambda m: 1.0 if m == 2 else 0.0, "yes", math.inf)


def _js():
    def func(t):
        t = np.asarray(t, dtype=float)
        return 0.5 * (t * np.log(t) - (t + 1.0) * np.log((t + 1.0) / 2.0))

    def taylor(m):
        if m < 2:
            return 0.0
        return (-1.0) ** m * (1.0 - 2.0 ** (1 - m)) / (2.0 * m * (m - 1))

    return FGenerator("js", func, 0.5 * math.log(2.0), taylor, "yes", 1.0)


def _tv():
    return FGenerator("tv", lambda t: 0.5 * np.abs(np.asarray(t) - 1.0), 0.5, None, "no", None)


def _relu():
    return FGenerator("relu", lambda t: np.maximum(0.0, np.asarray(t) - 1.0), 0.0, None, "no", None)


def _cosh():
    def taylor(m):
        return 1.0 / math.factorial(m) if m >= 2 and m % 2 == 0 else 0.0
    return FGenerator("cosh", lambda t: np.cosh(np.asarray(t) - 1.0) - 1.0,
                      math.cosh(1.0) - 1.0, taylor, "yes", math.inf)


def cressie_read(alpha: float) -> FGenerator:
    """Power divergence ``(t**alpha - 1 - alpha (t - 1)) / (alpha (alpha - 1))``.

    ``alpha = 1`` and ``alpha = 0`` are the continuous limits
    ``t log t - t + 1`` and ``-log t + t - 1``.
    """
    alpha = float(alpha)
    if alpha == 1.0:
        def func(t):
            t = np.asarray(t, dtype=float)
            return t * np.log(t) - t + 1.0
    elif alpha == 0.0:
        def func(t):
            t = np.asarray(t, dtype=float)
            return -np.log(t) + t - 1.0
    else:
        def func(t):
            t = np.asarray(t, dtype=float)
            return (t ** alpha - 1.0 - alpha * (t - 1.0)) / (alpha * (alpha - 1.0))

    def taylor(m):
        # binom(alpha, m) / (alpha (alpha - 1)) with the alpha (alpha - 1) factor cancelled
        if m < 2:
            return 0.0
        prod = 1.0
        for j in range(2, m):
            prod *= alpha - j
        return prod / math.factorial(m)

    f_zero = 1.0 / alpha if alpha > 0 else math.inf
    integer = alpha.is_integer() and alpha >= 2
    return FGenerator("cressie-read", func, f_zero, taylor, "yes",
                      math.inf if integer else 1.0, {"alpha": alpha})


def power_series(coeffs: Sequence[float], radius: float = math.inf) -> FGenerator:
    """Polynomial generator ``sum_m coeffs[m] (t - 1)**m`` valid on ``|t - 1| <= radius``.

    ``coeffs[0]`` must vanish so that ``f(1) = 0``.  Convexity is not enforced;
    use :func:`check_convexity` when it matters.
    """
    c = np.array([float(v) for v in coeffs]) if len(coeffs) else np.zeros(1)
    radius = float(radius)
    if radius <= 0:
        raise ValueError("radius must be positive")
    if abs(c[0]) > 1e-12:
        raise ValueError(f"power-series generator needs coeffs[0] = 0, got {c[0]}")

    def func(t):
        return np.polynomial.polynomial.polyval(np.asarray(t, dtype=float) - 1.0, c)

    def taylor(m):
        return float(c[m]) if m < len(c) else 0.0

    f_zero = float(func(0.0)) if radius >= 1.0 else math.inf
    spec_radius = radius if math.isfinite(radius) else None
    params = {"coeffs": c.tolist()}
    if spec_radius is not None:
        params["radius"] = spec_radius
    return FGenerator("power-series", func, f_zero, taylor, "yes", radius, params,
                      domain_radius=radius)


_BUILDERS = {
    "kl": _kl,
    "reverse-kl": _reverse_kl,
    "chi2": _chi2,
    "js": _js,
    "tv": _tv,
    "relu": _relu,
    "cosh": _cosh,
}

CATALOG_NAMES = tuple(_BUILDERS) + ("cressie-read", "power-series")


def catalog() -> list[FGenerator]:
    """Every catalog generator; parametric families use alpha = 2 and ``(t - 1)**2``."""
    return [build() for build in _BUILDERS.values()] + [cressie_read(2.0), power_series([0, 0, 1])]


def get_generator(name: str, **params) -> FGenerator:
    """Look up a generator by name.

    ``cressie-read`` takes ``alpha``; ``power-series`` takes ``coeffs`` and an optional ``radius``.
    """
    key = name.strip().lower()
    if key in _BUILDERS:
        if params:
            raise ValueError(f"generator {key!r} takes no parameters")
        return _BUILDERS[key]()
    if key == "cressie-read":
        if "alpha" not in params:
            raise ValueError("cressie-read needs an 'alpha' parameter")
        return cressie_read(params["alpha"])
    if key == "power-series":
        if "coeffs" not in params:
            raise ValueError("power-series needs a 'coeffs' list")
        return power_series(params["coeffs"], params.get("radius", math.inf))
    raise UnknownGenerator(name)


def from_spec(spec) -> FGenerator:
    """Build a generator from a JSON spec dict, a JSON string, or a bare catalog name."""
    if isinstance(spec, FGenerator):
        return spec
    if isinstance(spec, str):
        text = spec.strip()
        if text.startswith("{"):
            spec = json.loads(text)
        else:
            return get_generator(text)
    if not isinstance(spec, dict) or "name" not in spec:
        raise ValueError(f"generator spec needs a 'name' field: {spec!r}")
    params = {k: v for k, v in spec.items() if k != "name"}
    return get_generator(spec["name"], **params)


def check_convexity(f: FGenerator, lo: float = 0.05, hi: float = 5.0, n: int = 40,
                    slack: float = 1e-10) -> bool:
    """Midpoint-style convexity probe on a log grid inside ``(lo, hi)``."""
    if math.isfinite(f.domain_radius):
        lo = max(lo, 1.0 - f.domain_radius)
        hi = min(hi, 1.0 + f.domain_radius)
    grid = np.geomspace(lo, hi, n)
    t1, t2 = np.meshgrid(grid, grid, indexing="ij")
    keep = t1 < t2
    t1, t2 = t1[keep], t2[keep]
    f1, f2 = evaluate(f, t1), evaluate(f, t2)
    for lam in (0.25, 0.5, 0.75):
        mid = evaluate(f, lam * t1 + (1 - lam) * t2)
        if np.any(mid > lam * f1 + (1 - lam) * f2 + slack):
            return False
    return True


# Taylor coefficients


@dataclass(frozen=True)
class TaylorCoefficients:
    """Coefficients ``a_0..a_M`` of ``f`` at ``t = 1`` with per-order error estimates.

    ``errors`` is all zeros on the closed-form path.
    """

    values: np.ndarray
    errors: np.ndarray
    closed_form: bool

    def __getitem__(self, m):
        return self.values[m]

    def __len__(self):
        return len(self.values)


def _kink_check(f: FGenerator, slope_tol: float = SLOPE_TOL):
    left, right = _cheb.one_sided_derivatives(lambda t: evaluate(f, t), 1.0)
    return left, right, abs(right[0] - left[0]) > slope_tol


def _numeric_taylor(f: FGenerator, order: int):
    order = min(order, NUMERIC_MAX_ORDER)
    left, right, kinked = _kink_check(f)
    if kinked:
        raise NotDifferentiable(
            f"{f.name}: one-sided slopes at 1 differ ({left[0]:.6g} vs {right[0]:.6g})")
    halfwidths = np.array([0.2, 0.1, 0.05])
    if math.isfinite(f.domain_radius):
        halfwidths = halfwidths * min(1.0, 0.9 * f.domain_radius / 0.2)
    vals, errs = _cheb.taylor_ladder(lambda t: evaluate(f, t), 1.0, order, tuple(halfwidths))
    bad = np.nonzero((errs > np.abs(vals)) & (errs > 1e-4))[0]
    return vals, errs, bad


def taylor_at_one(f: FGenerator, order: int) -> TaylorCoefficients:
    """Taylor coefficients ``a_m = f^(m)(1) / m!`` for ``m = 0..order``.

    Closed form when ``f.taylor`` is set, otherwise a Chebyshev least-squares
    ladder over half-widths 0.2, 0.1, 0.05 (order capped at 12).

    Raises
    ------
    NotDifferentiable
        One-sided slopes at 1 disagree by more than 1e-6.
    NumericUnstable
        A numeric coefficient's error estimate exceeds both its magnitude and 1e-4.
    """
    if order < 2:
        raise ValueError("order must be at least 2")
    if f.taylor is not None:
        vals = np.array([float(f.taylor(m)) for m in range(order + 1)])
        return TaylorCoefficients(vals, np.zeros(order + 1), True)

    vals, errs, bad = _numeric_taylor(f, order)
    if bad.size:
        m = int(bad[0])
        raise NumericUnstable(
            f"{f.name}: coefficient a_{m} = {vals[m]:.3g} has error estimate {errs[m]:.3g}")
    return TaylorCoefficients(vals, errs, False)


# classification


class VerdictKind(str, Enum):
    PSD_GENERATING = "PSDGenerating"
    NEGATIVE_COEFFICIENT = "NegativeCoefficient"
    NON_ANALYTIC = "NonAnalytic"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class ConeVerdict:
    kind: VerdictKind
    checked_up_to: int
    order: Optional[int] = None
    detail: str = ""
    coefficients: Optional[TaylorCoefficients] = None

    @property
    def psd_generating(self) -> bool:
        return self.kind is VerdictKind.PSD_GENERATING

    def to_dict(self) -> dict:
        out = {"kind": self.kind.value, "order": self.order,
               "checked_up_to": self.checked_up_to, "detail": self.detail}
        if self.coefficients is not None:
            out["coefficients"] = self.coefficients.values.tolist()
            out["coefficient_errors"] = self.coefficients.errors.tolist()
            out["closed_form"] = self.coefficients.closed_form
        return out


def classify(f: FGenerator, order: int = NUMERIC_MAX_ORDER, tol: Optional[float] = None) -> ConeVerdict:
    """Place ``f`` relative to the cone of absolutely monotone generators at 1.

    A PSDGenerating verdict only speaks for orders ``2..order`` of a closed-form
    expansion; numeric coefficients can refute membership but never confirm it.
    """
    if order < 2:
        raise ValueError("order must be at least 2")

    if f.taylor is None:
        try:
            left, right, kinked = _kink_check(f)
        except (DomainError, FloatingPointError) as exc:
            return ConeVerdict(VerdictKind.INCONCLUSIVE, 0, detail=f"cannot probe t=1: {exc}")
        slope_gap = abs(right[0] - left[0])
        curv_gap = abs(right[1] - left[1])
        if kinked or curv_gap > CURVATURE_TOL or f.analytic_at_one == "no":
            return ConeVerdict(
                VerdictKind.NON_ANALYTIC, 1 if kinked else 2,
                detail=(f"one-sided derivatives at t=1: f' {left[0]:.6g}|{right[0]:.6g}, "
                        f"f'' {left[1]:.6g}|{right[1]:.6g} (slope gap {slope_gap:.3g})"))

    tol = (CLOSED_FORM_TOL if f.taylor is not None else NUMERIC_TOL) if tol is None else tol
    note = ""
    if f.taylor is not None:
        coeffs = taylor_at_one(f, order)
    else:
        # a significant negative coefficient at low order refutes membership even
        # when the highest requested orders are too noisy, so keep the stable prefix
        try:
            vals, errs, bad = _numeric_taylor(f, order)
        except (NotDifferentiable, DomainError, FloatingPointError) as exc:
            return ConeVerdict(VerdictKind.INCONCLUSIVE, 0, detail=str(exc))
        if bad.size:
            stable = int(bad[0]) - 1
            if stable < 2:
                return ConeVerdict(VerdictKind.INCONCLUSIVE, 0,
                                   detail=f"numeric coefficient a_{int(bad[0])} is unstable")
            note = f"; orders above {stable} numerically unstable"
            vals, errs = vals[:stable + 1], errs[:stable + 1]
        coeffs = TaylorCoefficients(vals, errs, False)
    checked = len(coeffs) - 1

    for m in range(2, checked + 1):
        value, err = coeffs.values[m], coeffs.errors[m]
        if value < -tol and value + err < 0:
            return ConeVerdict(VerdictKind.NEGATIVE_COEFFICIENT, checked, m,
                               f"a_{m} = {value:.12g}{note}", coeffs)

    if coeffs.closed_form:
        return ConeVerdict(VerdictKind.PSD_GENERATING, checked,
                           detail=f"a_m >= -{tol:g} for 2 <= m <= {checked}", coefficients=coeffs)
    return ConeVerdict(VerdictKind.INCONCLUSIVE, checked,
                       detail=f"numeric coefficients nonnegative through order {checked}; "
                              f"analyticity not certified{note}", coefficients=coeffs)
