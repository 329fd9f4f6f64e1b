"""Failure probability of judging papers by their journal's impact factor.

Typical use::

    from jiffail import LogNormalFit, failure_probability_closed_form

    water_research = LogNormalFit.from_params(3.05, 0.87)
    env_tox_pharm = LogNormalFit.from_params(1.88, 0.91)
    failure_probability_closed_form(water_research, env_tox_pharm)  # ~0.176
"""

from .analysis import (
    FailureMatrix,
    HistogramSpec,
    Method,
    QuartileReport,
    build_matrix,
    build_quartile_report,
    compare_topic_sets,
    histogram_bins,
    pearson_correlation,
    rank_discordance,
)
from .dataset import (
    CitationSample,
    DatasetError,
    DegenerateSampleError,
    JournalRecord,
    ZeroPolicy,
    apply_zero_policy,
    load_counts,
    load_journal_metadata,
    load_params,
)
from .failprob import (
    ComparisonResult,
    QuadratureConfig,
    QuadratureError,
    compare,
    empirical_failure_probability,
    failure_probability_closed_form,
    failure_probability_discrete,
    failure_probability_monte_carlo,
    failure_probability_quadrature,
)
from .lognormal import (
    LogNormalFit,
    cdf,
    deviation_gate,
    fit,
    implied_mean,
    pdf,
    tail_probability,
)

__version__ = "0.1.0"
