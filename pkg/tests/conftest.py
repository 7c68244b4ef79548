import functools
import re

import pytest

from tamedgk.cli import fixture_names, fixture_text
from tamedgk.poisson import SkewEndo
from tamedgk.random_instances import random_skew_endomorphisms, random_tamed_packages
from tamedgk.report import load_package
from tamedgk.structure_file import parse_structure_file

RANDOM_PACKAGES = 50
RANDOM_SKEW = 100


@functools.lru_cache(maxsize=None)
def loaded(name):
    """(lie, pkg) for a shipped example."""
    return load_package(fixture_text(name))


@functools.lru_cache(maxsize=None)
def parsed(name):
    return parse_structure_file(fixture_text(name))


@functools.lru_cache(maxsize=None)
def random_packages(name, count=RANDOM_PACKAGES, seed=11):
    lie, pkg = loaded(name)
    return tuple(random_tamed_packages(lie, pkg.Jplus, count, seed=seed, base=pkg.Omega))


@functools.lru_cache(maxsize=None)
def random_skews(name, count=RANDOM_SKEW, seed=5, invertible=False):
    _, pkg = loaded(name)
    return tuple(SkewEndo(q, pkg.g)
                 for q in random_skew_endomorphisms(pkg.g, count, seed=seed, invertible=invertible))


@pytest.fixture(params=fixture_names())
def fixture_name(request):
    return request.param


@pytest.fixture
def solv6():
    return loaded("solv6")


@pytest.fixture
def hyper():
    return loaded("hyperelliptic")


@pytest.fixture
def torus():
    return loaded("torus4")


# ---------------------------------------------------------------------------
# one summary line per acceptance criterion

_CRITERION = re.compile(r"test_c(\d+)_(\w+)")
_acceptance: dict[int, dict[str, bool]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    m = _CRITERION.search(report.nodeid.split("::")[-1])
    if not m or (report.when != "call" and report.passed):
        return
    name = report.nodeid.split("::")[-1][m.start(2):]
    subs = _acceptance.setdefault(int(m.group(1)), {})
    subs[name] = subs.get(name, True) and report.passed


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_acceptance):
        subs = _acceptance[number]
        failed = [k for k, ok in subs.items() if not ok]
        status = "PASS" if not failed else "FAIL"
        detail = f" ({len(subs) - len(failed)}/{len(subs)} sub-checks; failing: {', '.join(failed)})" if failed \
            else f" ({len(subs)} sub-checks)"
        tr.write_line(f"criterion {number}: {status}{detail}")
