import os
from pathlib import Path

import pytest

from zetaphase.argtrack import PathConfig, phase_batch
from zetaphase.zeros import find_zeros, import_zeros

DATA = Path(__file__).parent / "data"
JOBS = int(os.environ.get("ZP_TEST_JOBS", os.cpu_count() or 1))
N_ZEROS = 10_000

_acceptance: dict[str, dict] = {}


def pytest_collection_finish(session):
    for item in session.items:
        m = item.get_closest_marker("acceptance")
        if m:
            ac, desc = m.args
            e = _acceptance.setdefault(ac, {"desc": desc, "expected": 0, "passed": 0, "failed": 0})
            e["expected"] += 1


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    rep = (yield).get_result()
    m = item.get_closest_marker("acceptance")
    if m is None:
        return
    e = _acceptance[m.args[0]]
    if rep.failed:
        e["failed"] += 1
    elif rep.when == "call" and rep.passed:
        e["passed"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for ac in sorted(_acceptance, key=lambda a: int(a[2:])):
        e = _acceptance[ac]
        if e["failed"]:
            status = "FAIL"
        elif e["passed"] == e["expected"]:
            status = "PASS"
        else:
            status = "PARTIAL"
        tr.write_line(f"{ac:<5} {status:<7} {e['desc']}")


@pytest.fixture(scope="session")
def reference_zeros():
    with open(DATA / "zeros_1_100.txt", "rb") as fh:
        return import_zeros(fh, "indexed")


@pytest.fixture(scope="session")
def first_zeros():
    """gamma_1 .. gamma_10003 from the finder (k = 10000 sits near 9877.78)."""
    zs = find_zeros(10.0, 9880.0)
    assert zs[0].k == 1 and len(zs) > N_ZEROS
    return zs


@pytest.fixture(scope="session")
def records(first_zeros):
    return phase_batch(first_zeros[:N_ZEROS], PathConfig(), jobs=JOBS)


@pytest.fixture(scope="session")
def records_half(first_zeros):
    return phase_batch(first_zeros[:N_ZEROS], PathConfig().halved(), jobs=JOBS)
