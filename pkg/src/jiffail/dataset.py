"""Loading and validating citation-count samples and journal metadata.

Three comma-separated formats are understood:

* counts CSV, header ``journal,citations``: one row per paper.
* journals CSV, header ``id,name,jif,category,quartile,rank``.
* params CSV, header ``id,name,jif,mu,sigma,n``: journals with pre-fitted
  lognormal parameters. The bundled 2012 data set uses this form.
"""

from __future__ import annotations

import csv
import enum
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

COUNTS_HEADER = ("journal", "citations")
JOURNALS_HEADER = ("id", "name", "jif", "category", "quartile", "rank")
PARAMS_HEADER = ("id", "name", "jif", "mu", "sigma", "n")

QUARTILES = ("Q1", "Q2", "Q3", "Q4")

DATA_DIR_ENV = "FAILPROB_DATA_DIR"
BUNDLED_PARAMS = "params_2012.csv"
BUNDLED_JOURNALS = "journals_2012.csv"


class DatasetError(ValueError):
    """Raised for malformed, missing or inconsistent input data."""


class DegenerateSampleError(DatasetError):
    """The sample cannot support a lognormal fit (no positive counts, or zero spread)."""


class ZeroPolicy(enum.Enum):
    EXCLUDE_ZEROS = "exclude"
    ADD_ONE_TO_ALL = "add-one"


@dataclass(frozen=True)
class CitationSample:
    journal_id: str
    counts: tuple[int, ...]
    year: int | None = None
    window: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if not self.counts:
            raise DatasetError(f"empty citation sample for {self.journal_id!r}")
        if any(c < 0 for c in self.counts):
            raise DatasetError(f"negative count in sample {self.journal_id!r}")

    def __len__(self) -> int:
        return len(self.counts)

    @property
    def zero_fraction(self) -> float:
        """Share of uncited papers; surfaced as a diagnostic, never used to reject."""
        return sum(1 for c in self.counts if c == 0) / len(self.counts)


@dataclass(frozen=True)
class JournalRecord:
    journal_id: str
    name: str
    jif: float
    category: str = ""
    quartile: str | None = None
    rank_in_category: int | None = None

    def __post_init__(self):
        if not self.jif >= 0:
            raise DatasetError(f"{self.journal_id}: JIF must be non-negative, got {self.jif}")
        if self.quartile is not None and self.quartile not in QUARTILES:
            raise DatasetError(f"{self.journal_id}: unknown quartile {self.quartile!r}")
        if self.rank_in_category is not None and self.rank_in_category < 1:
            raise DatasetError(f"{self.journal_id}: rank must be a positive integer")


def _open_csv(path) -> tuple[list[str], list[dict[str, str]]]:
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = [h.strip() for h in (reader.fieldnames or [])]
        reader.fieldnames = header
        rows = list(reader)
    return header, rows


def _check_header(path, header: Sequence[str], expected: Sequence[str]) -> None:
    if header and list(header) != list(expected):
        raise DatasetError(f"{path}: expected header {','.join(expected)}, got {','.join(header)}")


def _parse_int(text: str, what: str, lineno: int) -> int:
    try:
        return int(text.strip())
    except (ValueError, AttributeError):
        raise DatasetError(f"line {lineno}: {what} is not an integer: {text!r}") from None


def _parse_float(text: str, what: str, lineno: int) -> float:
    try:
        return float(text.strip())
    except (ValueError, AttributeError):
        raise DatasetError(f"line {lineno}: cannot parse {what}: {text!r}") from None


def read_counts(path) -> dict[str, list[int]]:
    """Read every journal in a counts CSV, keeping file order within each journal."""
    header, rows = _open_csv(path)
    _check_header(path, header, COUNTS_HEADER)
    out: dict[str, list[int]] = {}
    for lineno, row in enumerate(rows, start=2):
        jid = (row.get("journal") or "").strip()
        if not jid:
            raise DatasetError(f"line {lineno}: missing journal id")
        c = _parse_int(row.get("citations"), "citation count", lineno)
        if c < 0:
            raise DatasetError(f"line {lineno}: negative count {c}")
        out.setdefault(jid, []).append(c)
    return out


def load_counts(path, journal_id: str, year: int | None = None,
                window: str | None = None) -> CitationSample:
    counts = read_counts(path)
    if journal_id not in counts:
        raise DatasetError(f"journal {journal_id!r} not found in {path}")
    return CitationSample(journal_id, counts[journal_id], year=year, window=window)


def write_counts(path, samples: Iterable[CitationSample]) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COUNTS_HEADER)
        for s in samples:
            for c in s.counts:
                w.writerow((s.journal_id, c))


def apply_zero_policy(sample: CitationSample, policy: ZeroPolicy = ZeroPolicy.EXCLUDE_ZEROS) -> CitationSample:
    if policy is ZeroPolicy.EXCLUDE_ZEROS:
        kept = [c for c in sample.counts if c > 0]
        if not kept:
            raise DegenerateSampleError(f"no positive counts in sample {sample.journal_id!r}")
    elif policy is ZeroPolicy.ADD_ONE_TO_ALL:
        kept = [c + 1 for c in sample.counts]
    else:
        raise TypeError(f"unknown zero policy {policy!r}")
    return CitationSample(sample.journal_id, kept, year=sample.year, window=sample.window)


def load_journal_metadata(path) -> list[JournalRecord]:
    header, rows = _open_csv(path)
    _check_header(path, header, JOURNALS_HEADER)
    records: list[JournalRecord] = []
    seen: set[str] = set()
    for lineno, row in enumerate(rows, start=2):
        jid = (row.get("id") or "").strip()
        if not jid:
            raise DatasetError(f"line {lineno}: missing journal id")
        if jid in seen:
            raise DatasetError(f"line {lineno}: duplicate journal id {jid!r}")
        seen.add(jid)
        quartile = (row.get("quartile") or "").strip() or None
        if quartile is not None and quartile not in QUARTILES:
            raise DatasetError(f"line {lineno}: unknown quartile {quartile!r}")
        rank_text = (row.get("rank") or "").strip()
        rank = _parse_int(rank_text, "rank", lineno) if rank_text else None
        records.append(JournalRecord(
            journal_id=jid,
            name=(row.get("name") or "").strip(),
            jif=_parse_float(row.get("jif"), "JIF", lineno),
            category=(row.get("category") or "").strip(),
            quartile=quartile,
            rank_in_category=rank,
        ))
    return records


@dataclass(frozen=True)
class ParamsRow:
    """One line of a params CSV: journal metadata plus a pre-computed fit."""

    journal_id: str
    name: str
    jif: float
    mu: float
    sigma: float
    n: int | None


def load_params(path) -> list[ParamsRow]:
    header, rows = _open_csv(path)
    _check_header(path, header, PARAMS_HEADER)
    out: list[ParamsRow] = []
    seen: set[str] = set()
    for lineno, row in enumerate(rows, start=2):
        jid = (row.get("id") or "").strip()
        if not jid:
            raise DatasetError(f"line {lineno}: missing journal id")
        if jid in seen:
            raise DatasetError(f"line {lineno}: duplicate journal id {jid!r}")
        seen.add(jid)
        n_text = (row.get("n") or "").strip()
        p = ParamsRow(
            journal_id=jid,
            name=(row.get("name") or "").strip(),
            jif=_parse_float(row.get("jif"), "JIF", lineno),
            mu=_parse_float(row.get("mu"), "mu", lineno),
            sigma=_parse_float(row.get("sigma"), "sigma", lineno),
            n=_parse_int(n_text, "n", lineno) if n_text else None,
        )
        if p.jif < 0:
            raise DatasetError(f"line {lineno}: negative JIF")
        if not p.sigma > 0:
            raise DatasetError(f"line {lineno}: sigma must be positive")
        out.append(p)
    return out


def write_params(path, rows: Iterable[ParamsRow]) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(PARAMS_HEADER)
        for r in rows:
            w.writerow((r.journal_id, r.name, repr(r.jif), repr(r.mu), repr(r.sigma),
                        "" if r.n is None else r.n))


def data_path(filename: str) -> Path:
    """Locate a bundled data file, honouring ``$FAILPROB_DATA_DIR``."""
    override = os.environ.get(DATA_DIR_ENV)
    if override:
        return Path(override) / filename
    return Path(str(resources.files("jiffail") / "data" / filename))


def default_params_path() -> Path:
    return data_path(BUNDLED_PARAMS)


def default_journals_path() -> Path:
    return data_path(BUNDLED_JOURNALS)
