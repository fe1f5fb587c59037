import csv
import io

import pytest
from hypothesis import HealthCheck, settings

from hilbert_period import cli
from hilbert_period.walls import ModuliPoint

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# coarse grid over the part of the (X, Y) plane where U0 lives
SCAN_GRID = cli.RunConfig(x_range=(0.3, 0.9), y_range=(0.2, 2.0), counts=(4, 5))


@pytest.fixture(scope="session")
def scan_rows():
    text = cli.run_scan(SCAN_GRID)
    return list(csv.DictReader(io.StringIO(text)))


@pytest.fixture(scope="session")
def u0_points(scan_rows):
    """Points of U0 as discovered by the scan subcommand, in grid order."""
    return [ModuliPoint(float(r["x"]), float(r["y"])) for r in scan_rows if r["in_u0"] == "1"]


@pytest.fixture(scope="session")
def base_point():
    return ModuliPoint(0.5, 0.5)


# one verdict line per acceptance criterion, collected by test_acceptance
VERDICTS: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[k])
