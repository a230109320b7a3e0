import os
import sys

import hypothesis
import pytest

sys.path.insert(0, os.path.dirname(__file__))

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

from hfdorders.core import make_order  # noqa: E402


@pytest.fixture
def zi():
    return make_order(-1)


@pytest.fixture
def z_sqrt_m3():
    """Z[sqrt(-3)], the non-maximal HFD order of conductor 2."""
    return make_order(-3, 2)


@pytest.fixture
def z_sqrt_m5():
    return make_order(-5)


@pytest.fixture
def z_sqrt_m14():
    return make_order(-14)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if not mod or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        ok, detail = mod.RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
