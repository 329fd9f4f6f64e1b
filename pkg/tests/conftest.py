import csv
from pathlib import Path

import pytest

from jiffail import analysis, dataset

DATA = Path(__file__).parent / "data"


def _rows(name):
    with open(DATA / name, newline="") as fh:
        return list(csv.DictReader(fh))


@pytest.fixture(scope="session")
def params_rows():
    return dataset.load_params(dataset.default_params_path())


@pytest.fixture(scope="session")
def paper_ids(params_rows):
    """Paper's row number (1-39) -> journal id. The bundled file keeps the paper's order."""
    return {k: r.journal_id for k, r in enumerate(params_rows, start=1)}


@pytest.fixture(scope="session")
def journals():
    meta = dataset.load_journal_metadata(dataset.default_journals_path())
    return analysis.journals_from_params(dataset.load_params(dataset.default_params_path()), meta)


@pytest.fixture(scope="session")
def fits(journals):
    return {rec.journal_id: f for rec, f in journals}


@pytest.fixture(scope="session")
def table2_cells():
    return [(int(r["row"]), int(r["col"]), float(r["value"])) for r in _rows("table2_cells.csv")]


@pytest.fixture(scope="session")
def table3_cells():
    return [(r["category"], int(r["row"]), int(r["col"]), float(r["value"]))
            for r in _rows("table3_cells.csv")]


@pytest.fixture(scope="session")
def table1_means():
    return {int(r["row"]): float(r["mean"]) for r in _rows("table1_means.csv")}


_ACCEPTANCE: list[str] = []


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(label, ok, detail)``; asserts ``ok``."""
    def record(label, ok, detail=""):
        _ACCEPTANCE.append(f"[{'PASS' if ok else 'FAIL'}] {label}" + (f" -- {detail}" if detail else ""))
        assert ok, f"{label}: {detail}"
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
