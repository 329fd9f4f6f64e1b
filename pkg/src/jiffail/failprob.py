"""Probability that a random paper from journal B is cited at least as often
as a random paper from journal A.

With A the higher-JIF journal this is the chance that ranking the two papers
by JIF contradicts ranking them by citations. Five estimators are provided:

* ``failure_probability_quadrature``: numerical integration of
  P = int_0^inf p_a(c) * S_b(c) dc, with S_b the survival function of B.
* ``failure_probability_closed_form``: ln C_b - ln C_a is normal, so
  P = Phi((mu_b - mu_a) / sqrt(sigma_a**2 + sigma_b**2)).
* ``failure_probability_discrete``: integer-valued lognormals.
* ``failure_probability_monte_carlo``: seeded sampling.
* ``empirical_failure_probability``: pair counting on raw samples.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import integrate, special

from .lognormal import LogNormalFit, normal_cdf, normal_sf

# Standard-normal tail beyond +-10 is ~1.5e-23, far below any tolerance used here.
_Z_SPAN = 10.0
_MC_CHUNK = 1 << 18
DISCRETE_TAIL_MASS = 1e-9
DISCRETE_MAX_C_LIMIT = 5_000_000


class QuadratureError(ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message: str, estimate: float, abs_error: float):
        super().__init__(f"{message} (estimate={estimate!r}, abs_error={abs_error!r})")
        self.estimate = estimate
        self.abs_error = abs_error


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tolerance: float = 1e-8
    max_subdivisions: int = 1000

    def __post_init__(self):
        if not self.abs_tolerance > 0:
            raise ValueError("abs_tolerance must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be positive")


@dataclass(frozen=True)
class ComparisonResult:
    journal_a: str
    journal_b: str
    p_quadrature: float
    p_closed_form: float
    quadrature_abs_error_estimate: float
    p_discrete: float | None = None
    p_monte_carlo: float | None = None
    mc_std_error: float | None = None
    p_empirical: float | None = None


def _clamp(p: float) -> float:
    return min(1.0, max(0.0, p))


def quadrature_with_error(fit_a: LogNormalFit, fit_b: LogNormalFit,
                          cfg: QuadratureConfig | None = None) -> tuple[float, float]:
    """Return ``(P, abs_error_estimate)`` from adaptive quadrature.

    Integrates in log space. With x = ln c = mu_a + sigma_a * z the integrand
    p_a(c) dc becomes the standard normal density phi(z) dz, and
    S_b(c) = Phi((mu_b - x) / sigma_b). The range z in [-10, 10] is used.
    """
    cfg = cfg or QuadratureConfig()
    mu_a, s_a, mu_b, s_b = fit_a.mu, fit_a.sigma, fit_b.mu, fit_b.sigma
    inv_sqrt2pi = 1.0 / math.sqrt(2.0 * math.pi)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)

    def integrand(z: float) -> float:
        x = mu_a + s_a * z
        survival_b = 0.5 * special.erfc((x - mu_b) / s_b * inv_sqrt2)
        return inv_sqrt2pi * math.exp(-0.5 * z * z) * survival_b

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, abserr, info, *rest = integrate.quad(
            integrand, -_Z_SPAN, _Z_SPAN,
            epsabs=cfg.abs_tolerance, epsrel=0.0,
            limit=cfg.max_subdivisions, full_output=1,
        )
    ier = rest[0] if rest else 0
    if ier != 0 or abserr > cfg.abs_tolerance:
        raise QuadratureError("quadrature did not converge", value, abserr)
    return _clamp(value), abserr


def failure_probability_quadrature(fit_a: LogNormalFit, fit_b: LogNormalFit,
                                   cfg: QuadratureConfig | None = None) -> float:
    return quadrature_with_error(fit_a, fit_b, cfg)[0]


def failure_probability_closed_form(fit_a: LogNormalFit, fit_b: LogNormalFit) -> float:
    scale = math.hypot(fit_a.sigma, fit_b.sigma)
    return _clamp(normal_cdf((fit_b.mu - fit_a.mu) / scale))


def required_max_c(fit: LogNormalFit, tail_mass: float = DISCRETE_TAIL_MASS) -> int:
    """Smallest integer cut-off whose upper tail carries less than ``tail_mass``."""
    z = float(special.ndtri(1.0 - tail_mass))
    log_c = fit.mu + fit.sigma * z
    if log_c > math.log(DISCRETE_MAX_C_LIMIT):
        return DISCRETE_MAX_C_LIMIT + 1
    return max(2, math.ceil(math.exp(log_c)))


def _binned_pmf(fit: LogNormalFit, k: np.ndarray) -> np.ndarray:
    """P(round(C) = k | C >= 1/2) for integer k >= 1, half-integer bins."""
    lo = (np.log(k - 0.5) - fit.mu) / fit.sigma
    hi = (np.log(k + 0.5) - fit.mu) / fit.sigma
    # Differences of upper tails keep precision far out in the tail.
    mass = normal_sf(lo) - normal_sf(hi)
    return mass / normal_sf((math.log(0.5) - fit.mu) / fit.sigma)


def failure_probability_discrete(fit_a: LogNormalFit, fit_b: LogNormalFit,
                                 max_c: int | None = None, *,
                                 ties_fail: bool = False) -> float:
    """Failure probability for integer citation counts.

    Each lognormal is discretised onto k = 1, 2, ... with bins
    [k - 1/2, k + 1/2) and renormalised over k >= 1.

    Parameters
    ----------
    max_c : int, optional
        Largest count summed over. Both distributions must put less than
        1e-9 of their mass above it. Chosen automatically when omitted.
    ties_fail : bool
        Whether C_b == C_a counts as a failure. The default (strict
        C_b > C_a) is the variant that comes out slightly below the
        continuous value. Counting ties pushes it above.
    """
    if max_c is None:
        max_c = max(required_max_c(fit_a), required_max_c(fit_b))
        if max_c > DISCRETE_MAX_C_LIMIT:
            raise ValueError("distributions too wide for the discrete estimator")
    if max_c < 1:
        raise ValueError("max_c must be a positive integer")
    for f in (fit_a, fit_b):
        beyond = normal_sf((math.log(max_c + 0.5) - f.mu) / f.sigma)
        if beyond >= DISCRETE_TAIL_MASS:
            raise ValueError(f"max_c={max_c} too small: {beyond:.3g} of the mass lies above it")

    k = np.arange(1, max_c + 1, dtype=float)
    q_a = _binned_pmf(fit_a, k)
    q_b = _binned_pmf(fit_b, k)
    # at_least[k] = P(C_b >= k); reverse cumulative sum of the pmf.
    at_least = np.cumsum(q_b[::-1])[::-1]
    wins_b = at_least if ties_fail else at_least - q_b
    return _clamp(float(np.dot(q_a, wins_b)))


def failure_probability_monte_carlo(fit_a: LogNormalFit, fit_b: LogNormalFit,
                                    samples: int = 1_000_000,
                                    seed: int = 42) -> tuple[float, float]:
    """Fraction of sampled pairs with C_b >= C_a, and its binomial standard error.

    Draws are made in log space (ln is monotone, so the comparison is
    unchanged). The generator is created per call, so results depend only
    on the arguments.
    """
    if samples < 1000:
        raise ValueError("samples must be at least 1000")
    rng = np.random.default_rng(seed)
    hits = 0
    remaining = samples
    while remaining:
        m = min(remaining, _MC_CHUNK)
        log_a = rng.normal(fit_a.mu, fit_a.sigma, m)
        log_b = rng.normal(fit_b.mu, fit_b.sigma, m)
        hits += int(np.count_nonzero(log_b >= log_a))
        remaining -= m
    p = hits / samples
    return p, math.sqrt(p * (1.0 - p) / samples)


def empirical_failure_probability(counts_a: Sequence[int], counts_b: Sequence[int], *,
                                  ties_fail: bool = True) -> float:
    """Share of all (paper in A, paper in B) pairs where B's paper has >= citations.

    Equivalent to the common-language effect size with ties counted as
    failures. Runs in O((n + m) log m).
    """
    a = np.asarray(counts_a, dtype=float)
    b = np.sort(np.asarray(counts_b, dtype=float))
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be non-empty")
    side = "left" if ties_fail else "right"
    wins = b.size - np.searchsorted(b, a, side=side)
    return float(wins.sum()) / (a.size * b.size)


def compare(fit_a: LogNormalFit, fit_b: LogNormalFit, *,
            journal_a: str = "a", journal_b: str = "b",
            cfg: QuadratureConfig | None = None,
            discrete: bool = True,
            mc_samples: int | None = None, seed: int = 42,
            counts_a: Sequence[int] | None = None,
            counts_b: Sequence[int] | None = None) -> ComparisonResult:
    """Run every applicable estimator on one pair of journals."""
    p_quad, err = quadrature_with_error(fit_a, fit_b, cfg)
    p_disc = failure_probability_discrete(fit_a, fit_b) if discrete else None
    p_mc = se = None
    if mc_samples:
        p_mc, se = failure_probability_monte_carlo(fit_a, fit_b, mc_samples, seed)
    p_emp = None
    if counts_a is not None and counts_b is not None:
        p_emp = empirical_failure_probability(counts_a, counts_b)
    return ComparisonResult(
        journal_a=journal_a,
        journal_b=journal_b,
        p_quadrature=p_quad,
        p_closed_form=failure_probability_closed_form(fit_a, fit_b),
        quadrature_abs_error_estimate=err,
        p_discrete=p_disc,
        p_monte_carlo=p_mc,
        mc_std_error=se,
        p_empirical=p_emp,
    )
