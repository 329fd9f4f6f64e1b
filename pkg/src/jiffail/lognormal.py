"""Lognormal citation models.

A journal's citation counts C are modelled with ln C ~ Normal(mu, sigma).
The parameters are the mean and sample standard deviation of the
log-transformed counts. Goodness of fit is checked by comparing the
empirical mean of the counts against the model mean exp(mu + sigma**2 / 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import special

from .dataset import (
    CitationSample,
    DatasetError,
    DegenerateSampleError,
    ZeroPolicy,
    apply_zero_policy,
)

DEFAULT_DEVIATION_THRESHOLD = 0.06

_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)


def normal_cdf(z):
    """Standard normal CDF via the complementary error function.

    ``0.5 * erfc(-z / sqrt(2))`` keeps full relative precision in the lower
    tail, where ``0.5 * (1 + erf(z / sqrt(2)))`` would cancel.
    """
    out = 0.5 * special.erfc(-np.asarray(z, dtype=float) / _SQRT2)
    return float(out) if out.ndim == 0 else out


def normal_sf(z):
    """Upper tail ``1 - normal_cdf(z)`` without cancellation."""
    out = 0.5 * special.erfc(np.asarray(z, dtype=float) / _SQRT2)
    return float(out) if out.ndim == 0 else out


def implied_mean(mu: float, sigma: float) -> float:
    """Arithmetic mean of a lognormal: exp(mu + sigma**2 / 2)."""
    if sigma < 0:
        raise ValueError("sigma must be non-negative")
    try:
        return math.exp(mu + 0.5 * sigma * sigma)
    except OverflowError:
        raise OverflowError(f"implied mean overflows for mu={mu}, sigma={sigma}") from None


@dataclass(frozen=True)
class LogNormalFit:
    """Fitted lognormal parameters plus the mean-deviation diagnostic.

    ``empirical_mean``, ``deviation`` and ``zero_fraction`` are ``None`` for
    fits built from published parameters rather than raw counts.
    """

    mu: float
    sigma: float
    n: int | None = None
    empirical_mean: float | None = None
    zero_fraction: float | None = None
    implied_mean: float = field(init=False)
    deviation: float | None = field(init=False)

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.sigma)):
            raise ValueError("mu and sigma must be finite")
        if not self.sigma > 0:
            raise DegenerateSampleError("sigma undefined or zero")
        m = implied_mean(self.mu, self.sigma)
        object.__setattr__(self, "implied_mean", m)
        dev = None if self.empirical_mean is None else abs(self.empirical_mean - m) / m
        object.__setattr__(self, "deviation", dev)

    @classmethod
    def from_params(cls, mu: float, sigma: float, n: int | None = None) -> "LogNormalFit":
        return cls(mu=float(mu), sigma=float(sigma), n=n)

    @property
    def median(self) -> float:
        return math.exp(self.mu)


def fit(sample: CitationSample | Sequence[float],
        policy: ZeroPolicy = ZeroPolicy.EXCLUDE_ZEROS) -> LogNormalFit:
    """Fit a lognormal to a citation sample.

    Parameters
    ----------
    sample : CitationSample or sequence of numbers
        Raw counts. Plain sequences may hold non-integer positive values,
        which is convenient for checking the estimator on exact inputs.
    policy : ZeroPolicy
        How uncited papers are handled before taking logarithms.

    Returns
    -------
    LogNormalFit
        ``mu`` is the mean of ln(counts), ``sigma`` their sample standard
        deviation (n - 1 denominator). The empirical mean is taken over the
        same post-policy counts.
    """
    if isinstance(sample, CitationSample):
        zero_fraction = sample.zero_fraction
        values = np.asarray(apply_zero_policy(sample, policy).counts, dtype=float)
    else:
        raw = np.asarray(sample, dtype=float)
        if raw.ndim != 1 or raw.size == 0:
            raise DatasetError("sample must be a non-empty 1-d sequence")
        if np.any(raw < 0) or not np.all(np.isfinite(raw)):
            raise DatasetError("counts must be finite and non-negative")
        zero_fraction = float(np.mean(raw == 0))
        if policy is ZeroPolicy.EXCLUDE_ZEROS:
            values = raw[raw > 0]
            if values.size == 0:
                raise DegenerateSampleError("no positive counts")
        else:
            values = raw + 1.0

    if values.size < 2:
        raise DegenerateSampleError("sigma undefined or zero: fewer than 2 counts")
    logs = np.log(values)
    sigma = float(np.std(logs, ddof=1))
    if np.all(values == values[0]) or sigma == 0.0:
        raise DegenerateSampleError("sigma undefined or zero: all counts equal")
    return LogNormalFit(
        mu=float(np.mean(logs)),
        sigma=sigma,
        n=int(values.size),
        empirical_mean=float(np.mean(values)),
        zero_fraction=zero_fraction,
    )


def deviation_gate(fit: LogNormalFit, threshold: float = DEFAULT_DEVIATION_THRESHOLD) -> bool:
    """True when the empirical and model means differ by at most ``threshold`` (relative)."""
    if fit.deviation is None:
        raise ValueError("fit has no empirical mean; the deviation gate needs raw counts")
    return fit.deviation <= threshold


def _check_positive(c):
    arr = np.asarray(c, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError("citation value must be positive")
    return arr


def pdf(fit: LogNormalFit, c):
    c = _check_positive(c)
    z = (np.log(c) - fit.mu) / fit.sigma
    out = np.exp(-0.5 * z * z) / (_SQRT2PI * c * fit.sigma)
    return float(out) if out.ndim == 0 else out


def cdf(fit: LogNormalFit, c):
    c = _check_positive(c)
    return normal_cdf((np.log(c) - fit.mu) / fit.sigma)


def tail_probability(fit: LogNormalFit, c0):
    """P(C >= c0), e.g. the chance that a paper reaches 50 citations."""
    c0 = _check_positive(c0)
    return normal_sf((np.log(c0) - fit.mu) / fit.sigma)
