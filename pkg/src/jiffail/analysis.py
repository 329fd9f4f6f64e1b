"""Journal-level deliverables built from lognormal fits.

Pairwise failure matrices, quartile reports, prestige-vs-specialised
comparisons, JIF/mean correlation, rank discordance and histogram bins,
plus the CSV and Markdown renderers used by the CLI.
"""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

import numpy as np

from .dataset import DatasetError, JournalRecord, ParamsRow
from .failprob import (
    ComparisonResult,
    QuadratureConfig,
    compare,
    failure_probability_quadrature,
)
from .lognormal import LogNormalFit, normal_cdf

Journal = tuple[JournalRecord, LogNormalFit]


class Method(enum.Enum):
    CLOSED_FORM = "closed-form"
    QUADRATURE = "quadrature"


def journals_from_params(rows: Sequence[ParamsRow],
                         metadata: Sequence[JournalRecord] = ()) -> list[Journal]:
    """Pair each params row with a fit, taking category/quartile from ``metadata`` when given."""
    meta = {m.journal_id: m for m in metadata}
    out = []
    for r in rows:
        m = meta.get(r.journal_id)
        rec = JournalRecord(
            journal_id=r.journal_id,
            name=r.name,
            jif=r.jif,
            category=m.category if m else "",
            quartile=m.quartile if m else None,
            rank_in_category=m.rank_in_category if m else None,
        )
        out.append((rec, LogNormalFit.from_params(r.mu, r.sigma, r.n)))
    return out


def jif_order(journals: Sequence[Journal]) -> list[Journal]:
    """Descending JIF; equal JIFs fall back to journal id."""
    return sorted(journals, key=lambda j: (-j[0].jif, j[0].journal_id))


def _check_unique(journals: Sequence[Journal]) -> None:
    ids = [rec.journal_id for rec, _ in journals]
    dup = {i for i in ids if ids.count(i) > 1}
    if dup:
        raise DatasetError(f"duplicate journal ids: {', '.join(sorted(dup))}")


@dataclass(frozen=True)
class FailureMatrix:
    """Pairwise failure probabilities over journals in descending-JIF order.

    ``cells[i, j]`` is P(paper from journal j gets >= citations than a paper
    from journal i). Both triangles are filled. Renderers emit the upper one.
    """

    journal_ids: tuple[str, ...]
    cells: np.ndarray
    method: Method = Method.CLOSED_FORM

    def __post_init__(self):
        n = len(self.journal_ids)
        if self.cells.shape != (n, n):
            raise ValueError("cells must be a square matrix matching journal_ids")
        self.cells.setflags(write=False)

    def __len__(self) -> int:
        return len(self.journal_ids)

    def index(self, journal_id: str) -> int:
        return self.journal_ids.index(journal_id)

    def __getitem__(self, key: tuple[str, str]) -> float:
        a, b = key
        return float(self.cells[self.index(a), self.index(b)])

    def upper(self):
        """Yield ``(i, j, value)`` for i < j."""
        n = len(self)
        for i in range(n):
            for j in range(i + 1, n):
                yield i, j, float(self.cells[i, j])


def build_matrix(journals: Sequence[Journal], method: Method = Method.CLOSED_FORM,
                 cfg: QuadratureConfig | None = None) -> FailureMatrix:
    if len(journals) < 2:
        raise ValueError("need at least two journals")
    _check_unique(journals)
    ordered = jif_order(journals)
    n = len(ordered)
    cells = np.full((n, n), 0.5)
    if method is Method.CLOSED_FORM:
        mu = np.array([f.mu for _, f in ordered])
        sigma = np.array([f.sigma for _, f in ordered])
        d = (mu[None, :] - mu[:, None]) / np.hypot(sigma[:, None], sigma[None, :])
        cells = np.asarray(normal_cdf(d), dtype=float)
        np.fill_diagonal(cells, 0.5)
    else:
        for i in range(n):
            for j in range(n):
                if i != j:
                    cells[i, j] = failure_probability_quadrature(ordered[i][1], ordered[j][1], cfg)
    return FailureMatrix(tuple(rec.journal_id for rec, _ in ordered), cells, method)


@dataclass(frozen=True)
class QuartileRow:
    journal_id: str
    jif: float
    position: int  # 1-3 upper/middle/lower Q1, 4-6 upper/middle/lower Q2
    quartile: str


@dataclass(frozen=True)
class QuartileReport:
    category: str
    rows: tuple[QuartileRow, ...]
    matrix: FailureMatrix


def build_quartile_report(category: str, journals: Sequence[Journal]) -> QuartileReport:
    """Six-journal (three Q1, three Q2) failure matrix for one JCR category.

    ``journals`` may contain journals from other categories; only those whose
    record carries ``category`` are used.
    """
    members = [j for j in journals if j[0].category == category]
    if len(members) != 6:
        raise DatasetError(f"category {category!r} has {len(members)} journals, expected 6")
    quartiles = sorted(rec.quartile or "-" for rec, _ in members)
    if quartiles != ["Q1"] * 3 + ["Q2"] * 3:
        raise DatasetError(f"category {category!r} must hold three Q1 and three Q2 journals, "
                           f"got {', '.join(quartiles)}")
    ordered = jif_order(members)
    if [rec.quartile for rec, _ in ordered] != ["Q1"] * 3 + ["Q2"] * 3:
        raise DatasetError(f"category {category!r}: a Q2 journal out-ranks a Q1 journal by JIF")
    rows = tuple(QuartileRow(rec.journal_id, rec.jif, pos, rec.quartile)
                 for pos, (rec, _) in enumerate(ordered, start=1))
    return QuartileReport(category, rows, build_matrix(ordered, Method.CLOSED_FORM))


def quartile_categories(journals: Sequence[Journal]) -> list[str]:
    """Categories with exactly three Q1 and three Q2 journals, in first-seen order."""
    seen: dict[str, list[str]] = {}
    for rec, _ in journals:
        if rec.category:
            seen.setdefault(rec.category, []).append(rec.quartile or "-")
    return [c for c, qs in seen.items() if sorted(qs) == ["Q1"] * 3 + ["Q2"] * 3]


def compare_topic_sets(fit_top: LogNormalFit, fit_specialized: LogNormalFit, *,
                       top_id: str = "top", specialized_id: str = "specialized",
                       cfg: QuadratureConfig | None = None,
                       mc_samples: int | None = None, seed: int = 42) -> ComparisonResult:
    """Failure probability of ranking a prestige-journal paper above a specialised-journal paper."""
    return compare(fit_top, fit_specialized, journal_a=top_id, journal_b=specialized_id,
                   cfg=cfg, mc_samples=mc_samples, seed=seed)


def pearson_correlation(x: Sequence[float], y: Sequence[float]) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-d and of equal length")
    if x.size < 3:
        raise ValueError("need at least three points")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise ValueError("zero variance")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, r))


@dataclass(frozen=True)
class RankRow:
    journal_id: str
    jif_rank: int
    mean_rank: int


def rank_discordance(journals: Sequence[Journal]) -> list[RankRow]:
    """Positions of each journal by descending JIF and by descending model mean.

    Rows come back in JIF order. Ties in either key are broken by journal id.
    """
    if len(journals) < 2:
        raise ValueError("need at least two journals")
    by_jif = jif_order(journals)
    by_mean = sorted(journals, key=lambda j: (-j[1].implied_mean, j[0].journal_id))
    mean_pos = {rec.journal_id: k for k, (rec, _) in enumerate(by_mean, start=1)}
    return [RankRow(rec.journal_id, k, mean_pos[rec.journal_id])
            for k, (rec, _) in enumerate(by_jif, start=1)]


def discordant_pairs(rows: Sequence[RankRow]) -> int:
    """Number of journal pairs ordered one way by JIF and the other way by mean."""
    n = 0
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            if (rows[i].jif_rank - rows[j].jif_rank) * (rows[i].mean_rank - rows[j].mean_rank) < 0:
                n += 1
    return n


@dataclass(frozen=True)
class HistogramSpec:
    bin_width: int
    max_citations: int
    bins: tuple[tuple[int, int, int, int], ...]  # (low, high, count_a, count_b), [low, high)


def histogram_bins(counts_a: Sequence[int], counts_b: Sequence[int], bin_width: int) -> HistogramSpec:
    if bin_width < 1:
        raise ValueError("bin_width must be a positive integer")
    a = np.asarray(counts_a, dtype=np.int64)
    b = np.asarray(counts_b, dtype=np.int64)
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be non-empty")
    if a.min() < 0 or b.min() < 0:
        raise ValueError("counts must be non-negative")
    top = int(max(a.max(), b.max()))
    nbins = top // bin_width + 1
    ca = np.bincount(a // bin_width, minlength=nbins)
    cb = np.bincount(b // bin_width, minlength=nbins)
    bins = tuple((k * bin_width, (k + 1) * bin_width, int(ca[k]), int(cb[k])) for k in range(nbins))
    return HistogramSpec(bin_width, top, bins)


# Rendering

def round_half_away(x: float, digits: int = 2) -> str:
    """Format ``x`` with ``digits`` decimals, rounding halves away from zero."""
    q = Decimal(1).scaleb(-digits)
    return str(Decimal(repr(float(x))).quantize(q, rounding=ROUND_HALF_UP))


def matrix_to_csv(matrix: FailureMatrix) -> str:
    buf = io.StringIO()
    ids = matrix.journal_ids
    buf.write("," + ",".join(ids) + "\n")
    for i, jid in enumerate(ids):
        cells = ["" if j < i else f"{matrix.cells[i, j]:.6f}" for j in range(len(ids))]
        buf.write(jid + "," + ",".join(cells) + "\n")
    return buf.getvalue()


def _md_table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    lines = ["| " + " | ".join(header) + " |",
             "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(r) + " |" for r in rows]
    return "\n".join(lines) + "\n"


def matrix_to_markdown(matrix: FailureMatrix, digits: int = 2) -> str:
    """Upper-triangular table with journals numbered 1..n in JIF order."""
    n = len(matrix)
    header = ["#"] + [str(k) for k in range(1, n + 1)]
    rows = []
    for i in range(n):
        rows.append([str(i + 1)] + ["" if j < i else round_half_away(matrix.cells[i, j], digits)
                                    for j in range(n)])
    return _md_table(header, rows)


def journal_key_markdown(journals: Sequence[Journal], digits: int = 2) -> str:
    rows = []
    for k, (rec, f) in enumerate(jif_order(journals), start=1):
        rows.append([str(k), rec.journal_id, rec.name, f"{rec.jif:.2f}", f"{f.mu:.2f}",
                     f"{f.sigma:.2f}", "" if f.n is None else str(f.n),
                     round_half_away(f.implied_mean, digits)])
    return _md_table(["#", "id", "journal", "JIF", "mu", "sigma", "n", "model mean"], rows)


def quartile_report_to_markdown(report: QuartileReport, digits: int = 2) -> str:
    header = ["journal", "JIF", "position", "quartile"] + [str(k) for k in range(1, 7)]
    rows = []
    for i, r in enumerate(report.rows):
        cells = ["" if j < i else round_half_away(report.matrix.cells[i, j], digits) for j in range(6)]
        rows.append([r.journal_id, f"{r.jif:.2f}", str(r.position), r.quartile] + cells)
    return f"### {report.category}\n\n" + _md_table(header, rows)


def comparison_to_text(res: ComparisonResult, digits: int = 2) -> str:
    fmt = lambda p: round_half_away(p, digits)  # noqa: E731
    lines = [
        f"journal A (higher JIF): {res.journal_a}",
        f"journal B:              {res.journal_b}",
        f"quadrature:   {fmt(res.p_quadrature)}  ({res.p_quadrature:.6f}, abs err <= {res.quadrature_abs_error_estimate:.1e})",
        f"closed form:  {fmt(res.p_closed_form)}  ({res.p_closed_form:.6f})",
    ]
    if res.p_discrete is not None:
        lines.append(f"discrete:     {fmt(res.p_discrete)}  ({res.p_discrete:.6f})")
    if res.p_monte_carlo is not None:
        lines.append(f"monte carlo:  {fmt(res.p_monte_carlo)}  ({res.p_monte_carlo:.6f} +- {res.mc_std_error:.6f})")
    if res.p_empirical is not None:
        lines.append(f"empirical:    {fmt(res.p_empirical)}  ({res.p_empirical:.6f})")
    return "\n".join(lines) + "\n"


def histogram_to_csv(spec: HistogramSpec) -> str:
    buf = io.StringIO()
    buf.write("bin_low,bin_high,count_a,count_b\n")
    for low, high, ca, cb in spec.bins:
        buf.write(f"{low},{high},{ca},{cb}\n")
    return buf.getvalue()


def full_report(journals: Sequence[Journal], digits: int = 2) -> str:
    """Markdown document: journal key, failure matrix, quartile reports, correlations."""
    matrix = build_matrix(journals)
    ranks = rank_discordance(journals)
    ordered = jif_order(journals)
    jif = [rec.jif for rec, _ in ordered]
    means = [f.implied_mean for _, f in ordered]
    out = ["# Failure probabilities of JIF-based paper comparisons\n",
           "## Journals\n", journal_key_markdown(journals, digits),
           "## Failure matrix\n",
           "Cell (i, j): probability that a paper in journal j is cited at least as often "
           "as a paper in journal i.\n",
           matrix_to_markdown(matrix, digits)]
    cats = quartile_categories(journals)
    if cats:
        out.append("## Quartile comparisons\n")
        for c in cats:
            out.append(quartile_report_to_markdown(build_quartile_report(c, journals), digits))
    out.append("## JIF versus model mean\n")
    if len(journals) >= 3:
        out.append(f"Pearson r (JIF, exp(mu + sigma^2/2)): {pearson_correlation(jif, means):.3f}\n")
    out.append(f"Discordant pairs (JIF order vs model-mean order): {discordant_pairs(ranks)} "
               f"of {len(ranks) * (len(ranks) - 1) // 2}\n")
    out.append(_md_table(["journal", "JIF rank", "mean rank"],
                         [[r.journal_id, str(r.jif_rank), str(r.mean_rank)] for r in ranks]))
    return "\n".join(out)
