from __future__ import annotations

import itertools
import os
from collections import defaultdict

import pytest
from hypothesis import HealthCheck, settings

from comfactor import Factor, RandomVariable, RangeSpec
from comfactor.cli import fixture_path
from comfactor.fileio import load

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

BOOL = RangeSpec(("high", "low"), "bool")
PHI3_TABLE = ("φ1", "φ2", "φ3", "φ4", "φ3", "φ4", "φ5", "φ6")


def bool_rvs(*names):
    return tuple(RandomVariable(n, BOOL) for n in names)


def counterexample_table():
    pair_swap = {(0, 0, 1, 1), (1, 1, 0, 0)}
    return tuple("φ1" if a in pair_swap else "φ2" for a in itertools.product((0, 1), repeat=4))


@pytest.fixture
def phi3() -> Factor:
    return load(fixture_path("phi3.json")).factor("phi3")


@pytest.fixture
def counterexample() -> Factor:
    return load(fixture_path("counterexample.json")).factor("phi")


@pytest.fixture
def phi3_numeric() -> Factor:
    return Factor.from_values("phi3", bool_rvs("ComA", "ComB", "Rev"), [1, 2, 3, 4, 3, 4, 5, 6])


# acceptance bookkeeping: one PASS/FAIL line per criterion in the summary

_CRITERIA: dict[int, str] = {}
_OUTCOMES: dict[int, list[bool]] = defaultdict(list)


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    number = getattr(report, "criterion_number", None)
    if number is not None:
        _OUTCOMES[number].append(report.passed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        number, title = marker.args
        _CRITERIA[number] = title
        outcome.get_result().criterion_number = number


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        results = _OUTCOMES.get(number, [])
        ok = bool(results) and all(results)
        tag = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"{tag}  criterion {number}: {_CRITERIA[number]} ({sum(results)}/{len(results)} checks)")
