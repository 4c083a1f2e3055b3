import io
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from floodml.synthetic import SyntheticSpec, generate_synthetic  # noqa: E402

_acceptance_lines = []


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line for the acceptance summary at the end of the run."""
    entry = {"name": request.node.name, "status": "FAIL", "detail": ""}
    _acceptance_lines.append(entry)

    def record(detail):
        entry["detail"] = detail

    yield record
    rep = getattr(request.node, "rep_call", None)
    if rep is not None:
        entry["status"] = "PASS" if rep.passed else "SKIP" if rep.skipped else "FAIL"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" or (rep.when == "setup" and rep.skipped):
        item.rep_call = rep
    # skipped before fixtures ran, so no line was recorded yet
    if rep.when == "setup" and rep.skipped and item.path.name == "test_acceptance.py":
        reason = rep.longrepr[2] if isinstance(rep.longrepr, tuple) else ""
        _acceptance_lines.append({"name": item.name, "status": "SKIP", "detail": reason})


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_lines:
        return
    terminalreporter.section("acceptance criteria")
    for e in _acceptance_lines:
        terminalreporter.write_line(f"{e['status']:4s}  {e['name']}  {e['detail']}")


@pytest.fixture(scope="session")
def synthetic_files(tmp_path_factory):
    """34 stations x 10 years (340 rows) with some missing cells and label noise."""
    root = tmp_path_factory.mktemp("synthetic")
    spec = SyntheticSpec(stations=34, start_year=2011, end_year=2020, missing_rate=0.01,
                         flood_noise=150.0)
    rain, flood = generate_synthetic(spec, seed=7)
    (root / "rainfall.csv").write_text(rain)
    (root / "flood.csv").write_text(flood)
    return root


def stream(text):
    return io.StringIO(text)
