import re

import numpy as np
import pytest

from foldgrip.beams import ClipDesign, LowerLinkDesign
from foldgrip.linkage import ForceBudget, LinkageGeometry
from foldgrip.reference import TABLE2_MEASURED, TABLE2_THEORETICAL, table1_design


@pytest.fixture
def table1():
    return table1_design()


@pytest.fixture
def table2_theoretical(table1):
    return ForceBudget.from_forces(geom=table1.geom, **TABLE2_THEORETICAL)


@pytest.fixture
def table2_measured(table1):
    return ForceBudget.from_forces(geom=table1.geom, **TABLE2_MEASURED)


def random_clip(rng):
    r = rng.uniform(0.5, 3.0)
    return ClipDesign(
        l_nail=rng.uniform(1.0, 10.0),
        b_nail=rng.uniform(1.0, 10.0),
        h_nail=rng.uniform(0.2, 2.0),
        w_nail=2 * r * rng.uniform(0.05, 0.98),
        r_clip=r,
        E_nail=rng.uniform(500.0, 5000.0),
    )


def random_lower(rng, n_b=2):
    length = rng.uniform(10.0, 60.0)
    r_cp = rng.uniform(0.3, 2.0)
    span = 2 * r_cp
    return LowerLinkDesign(
        l_low=length,
        l_low1=rng.uniform(0.3, 1.0) * (length - span),
        l_low2=span,
        b_low=rng.uniform(1.0, 15.0),
        h_low=rng.uniform(0.2, 2.0),
        w_low=2 * r_cp * rng.uniform(0.05, 0.98),
        r_cp=r_cp,
        theta_pr=rng.uniform(0.1, 30.0),
        l_low11=rng.uniform(0.02, 0.9) * (length - span),
        E_low=rng.uniform(500.0, 5000.0),
        n_b=n_b,
    )


def random_budget(rng):
    geom = LinkageGeometry(
        l_clip=rng.uniform(3.0, 15.0),
        l_12=rng.uniform(20.0, 80.0),
        l_23=rng.uniform(20.0, 60.0),
        theta_2=rng.uniform(5.0, 85.0),
    )
    budget = ForceBudget.from_forces(
        snap=rng.uniform(0.0, 80.0),
        forward=rng.uniform(0.0, 15.0),
        reverse=rng.uniform(0.0, 10.0),
        motor_limit=rng.uniform(0.0, 150.0),
        geom=geom,
    )
    return budget, geom


@pytest.fixture
def rng():
    return np.random.default_rng(20221014)


# --- one line per acceptance criterion in the terminal summary ---------------

_criteria: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    m = re.search(r"test_criterion_(\w+)$", report.nodeid)
    if m:
        _criteria.append((m.group(1), report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _criteria:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  criterion {name}")
