"""Search latent families for replica-amplified counterexamples and re-verify them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np
from scipy import linalg

from . import fmi
from .dist import PairwiseJoint
from .errors import (BudgetExhausted, DomainError, FMIError, InadmissibleFamily,
                     InfiniteDivergence)
from .forcing import (DEFAULT_R_MAX, DELTA_TOL, MAX_CERTIFIED_SIZE, CounterexampleCertificate,
                      assemble_block, block_spectrum, delta_matrix, kernel_matrix,
                      min_replicas_for_indefiniteness)
from .generators import FGenerator, classify
from .latent import (LatentFamily, family_dependence_radius, paper_preset,
                     replica_pairwise_joint)

CERTIFY_TOL = 1e-9


@dataclass(frozen=True)
class SearchConfig:
    """Budget and templates for :func:`find_counterexample`.

    ``gamma_fractions`` scale circle templates relative to ``(1 - |a|) sqrt(k)``;
    inadmissible scalings are skipped.  ``delta`` (optional) rescales every
    candidate so its dependence radius is at most ``delta``.
    """

    n_max: int = 8
    a_grid: tuple = (1.0 / 3.0, 0.2, 0.5, 0.1)
    gamma_fractions: tuple = (1.0, 1.0 / math.sqrt(2.0), 0.5, 0.25, 0.1)
    phases: tuple = (0.0, math.pi / 4.0)
    n_random: int = 200
    k_random: tuple = (2, 3, 4)
    R_max: int = DEFAULT_R_MAX
    delta: Optional[float] = None
    seed: int = 0
    order: int = 12

    def to_dict(self) -> dict:
        return {f: getattr(self, f) for f in self.__dataclass_fields__}

    @classmethod
    def from_dict(cls, data: dict) -> "SearchConfig":
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        for key in ("a_grid", "gamma_fractions", "phases", "k_random"):
            if key in known:
                known[key] = tuple(known[key])
        return cls(**known)


@dataclass
class SearchLog:
    evaluated: int = 0
    best_lambda_min: float = math.inf
    best_provenance: str = ""
    delta_violations: int = 0
    notes: list = field(default_factory=list)


def _circle_family(a, n, gamma, phase, full):
    step = (2.0 if full else 1.0) * math.pi / n
    angles = phase + step * np.arange(n)
    return LatentFamily(a, 2, gamma * np.column_stack([np.cos(angles), np.sin(angles)]))


def _limit_dependence(fam: LatentFamily, delta: Optional[float]) -> LatentFamily:
    if delta is None:
        return fam
    current = family_dependence_radius(fam)
    if current <= delta:
        return fam
    # rho is quadratic in the loadings
    return fam.scaled(math.sqrt(delta / current) * (1.0 - 1e-12))


def candidate_families(cfg: SearchConfig) -> Iterator[tuple[LatentFamily, str]]:
    """Structured circle templates first, then random admissible loadings.

    Per bias and size, points spread over the full circle come before points
    spread over a half circle (the latter include antipodal-free circulants
    such as the four-variable preset).
    """
    for a in cfg.a_grid:
        for n in range(4, cfg.n_max + 1):
            for full in (True, False):
                for phase in cfg.phases:
                    for frac in cfg.gamma_fractions:
                        gamma = frac * (1.0 - abs(a)) * math.sqrt(2.0)
                        try:
                            fam = _circle_family(a, n, gamma, phase, full)
                        except InadmissibleFamily:
                            continue
                        kind = "full-circle" if full else "half-circle"
                        yield (_limit_dependence(fam, cfg.delta),
                               f"{kind} template n={n} a={a:.6g} gamma={gamma:.6g} phase={phase:.6g}")
    rng = np.random.default_rng(cfg.seed)
    for t in range(cfg.n_random):
        a = float(rng.choice(cfg.a_grid))
        n = int(rng.integers(4, cfg.n_max + 1))
        k = int(rng.choice(cfg.k_random))
        bound = 1.0 - abs(a)
        U = rng.uniform(-bound, bound, size=(n, k)) * rng.uniform(0.2, 1.0)
        yield (_limit_dependence(LatentFamily(a, k, U), cfg.delta),
               f"random loadings #{t} (seed {cfg.seed}) n={n} k={k} a={a:.6g}")


def _quadratic_form(K, delta, R, witness) -> float:
    # w^T (J_R (x) K + I_R (x) Delta) w without assembling the block
    W = np.asarray(witness, dtype=float).reshape(R, -1)
    s = W.sum(axis=0)
    d = np.diag(delta)
    return float(s @ K @ s + np.sum(W * W * d))


def _entry_check(cert: CounterexampleCertificate, f: FGenerator, B, rng, count=2) -> list[str]:
    fam, n = cert.family, cert.family.n
    marg = 0.5 * (1.0 + fam.a * np.array([1.0, -1.0]))
    issues = []
    for p, q in rng.integers(0, cert.R * n, size=(count, 2)):
        first, second = (int(p) % n, int(p) // n), (int(q) % n, int(q) // n)
        pair = PairwiseJoint.self_pair(marg) if p == q else replica_pairwise_joint(fam, first, second)
        direct = fmi.f_mutual_information(pair, f)
        if abs(direct - B[p, q]) > CERTIFY_TOL * max(1.0, abs(direct)):
            issues.append(f"B[{p},{q}] = {B[p, q]:.12g} but the replica pair gives {direct:.12g}")
    return issues


def certification_issues(cert: CounterexampleCertificate, f: FGenerator) -> list[str]:
    """Everything that fails when ``cert`` is rebuilt from scratch; empty means valid."""
    issues = []
    try:
        fam = LatentFamily.from_dict(cert.family.to_dict())
    except InadmissibleFamily as exc:
        return [f"family is inadmissible: {exc}"]
    if cert.generator.get("name") != f.name:
        issues.append(f"certificate is for {cert.generator.get('name')!r}, not {f.name!r}")
    n, R = fam.n, int(cert.R)
    w = np.asarray(cert.witness, dtype=float)
    if R < 1 or w.shape != (R * n,):
        return issues + [f"witness has shape {w.shape}, expected ({R * n},)"]
    norm = float(np.linalg.norm(w))
    if abs(norm - 1.0) > CERTIFY_TOL:
        issues.append(f"witness norm is {norm:.12g}, not 1")

    try:
        K, D = kernel_matrix(f, fam), delta_matrix(f, fam)
    except FMIError as exc:
        return issues + [f"cannot rebuild K and Delta: {exc}"]
    if np.min(np.diag(D)) < -DELTA_TOL:
        issues.append("Delta has a negative entry")
    q = _quadratic_form(K, D, R, w)
    if abs(q - cert.quadratic_form) > CERTIFY_TOL:
        issues.append(f"quadratic form recomputes to {q:.12g}, "
                      f"certificate says {cert.quadratic_form:.12g}")
    if not q < 0:
        issues.append(f"quadratic form {q:.12g} is not negative")
    spectrum = block_spectrum(K, D, R)
    tol = fmi.default_tolerance(spectrum)
    if not spectrum[0] < -tol:
        issues.append(f"B_{R} has smallest eigenvalue {spectrum[0]:.12g}, not below -{tol:.3g}")
    ds = family_dependence_radius(fam)
    if abs(ds - cert.delta_star) > CERTIFY_TOL:
        issues.append(f"dependence radius recomputes to {ds:.12g}, "
                      f"certificate says {cert.delta_star:.12g}")
    return issues


def certify(cert: CounterexampleCertificate, f: FGenerator) -> bool:
    """Independent re-verification of a certificate (tolerance 1e-9)."""
    return not certification_issues(cert, f)


def _build_certificate(f, fam, K, D, provenance, R_max=DEFAULT_R_MAX):
    forcing = min_replicas_for_indefiniteness(K, D, R_max)
    if forcing is None:
        return None, None
    cert = CounterexampleCertificate(fam, f.to_spec(), forcing.R, forcing.witness,
                                     forcing.quadratic_form, family_dependence_radius(fam),
                                     provenance)
    return cert, forcing


def _verify_new(cert, forcing, f, rng) -> list[str]:
    issues = certification_issues(cert, f)
    if cert.R * cert.family.n <= MAX_CERTIFIED_SIZE:
        if not forcing.certified:
            issues.append(f"full eigendecompositions do not confirm R = {cert.R}")
        K, D = kernel_matrix(f, cert.family), delta_matrix(f, cert.family)
        issues += _entry_check(cert, f, assemble_block(K, D, cert.R), rng)
    return issues


def reproduce_paper_example(generator: FGenerator,
                            loading_scale: float = 1.0) -> CounterexampleCertificate:
    """Certificate for the four-variable circulant family at bias 1/3 (expected ``R = 8``)."""
    fam = paper_preset(loading_scale)
    K, D = kernel_matrix(generator, fam), delta_matrix(generator, fam)
    cert, _ = _build_certificate(generator, fam, K, D, "preset paper-tvd-relu-4")
    if cert is None:
        raise BudgetExhausted(f"{generator.name}: the preset kernel is PSD",
                              float(linalg.eigh(K, eigvals_only=True)[0]), 1)
    return cert


def find_counterexample(f: FGenerator, cfg: SearchConfig = SearchConfig(),
                        log: Optional[SearchLog] = None) -> Optional[CounterexampleCertificate]:
    """First verified certificate over the configured templates.

    Returns ``None`` when ``f`` classifies as PSD-generating up to ``cfg.order``.

    Raises
    ------
    BudgetExhausted
        ``f`` is not PSD-generating but no certificate was found; carries the
        most negative ``lambda_min(K_a)`` seen.
    InfiniteDivergence
        ``f(0)`` is infinite, so the diagonal of every latent f-MI matrix diverges.
    """
    log = SearchLog() if log is None else log
    verdict = classify(f, cfg.order)
    if verdict.psd_generating:
        log.notes.append(f"classified PSDGenerating up to order {verdict.checked_up_to}")
        return None

    if not math.isfinite(f.f_zero):
        raise InfiniteDivergence(f"{f.name}: f(0) is infinite, so I_f(Y; Y) diverges "
                                 "for every latent family")
    rng = np.random.default_rng(cfg.seed + 1)
    for fam, provenance in candidate_families(cfg):
        log.evaluated += 1
        try:
            K = kernel_matrix(f, fam)
        except DomainError as exc:
            log.notes.append(f"{provenance}: skipped ({exc})")
            continue
        lam = float(linalg.eigh(K, eigvals_only=True)[0])
        if lam < log.best_lambda_min:
            log.best_lambda_min, log.best_provenance = lam, provenance
        if lam >= -fmi.default_tolerance([lam, np.max(np.abs(K))]):
            continue
        D = delta_matrix(f, fam)
        if np.min(np.diag(D)) < -DELTA_TOL:
            log.delta_violations += 1
            continue
        cert, forcing = _build_certificate(f, fam, K, D, provenance, cfg.R_max)
        if cert is None:
            continue
        issues = _verify_new(cert, forcing, f, rng)
        if issues:
            log.notes.append(f"{provenance}: rejected ({'; '.join(issues)})")
            continue
        return cert
    raise BudgetExhausted(
        f"{f.name} is {verdict.kind.value} but no certificate was found in "
        f"{log.evaluated} families (best lambda_min(K) = {log.best_lambda_min:.6g})",
        log.best_lambda_min, log.evaluated)
