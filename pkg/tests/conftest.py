import math
import time

import os

import numpy as np
import pytest
from hypothesis import settings

# HYPOTHESIS_PROFILE=stress runs every property test with many more examples
settings.register_profile("stress", max_examples=1000, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def rotation(phi):
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def boost(eta):
    c, s = math.cosh(eta), math.sinh(eta)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [s, 0.0, c]])


def random_lorentz(rng, max_rapidity=1.0):
    """Orthochronous element of O(2,1) for the form diag(1, 1, -1)."""
    b = rotation(rng.uniform(0, 2 * math.pi)) @ boost(rng.uniform(-max_rapidity, max_rapidity)) \
        @ rotation(rng.uniform(0, 2 * math.pi))
    if rng.random() < 0.5:
        b = b @ np.diag([1.0, -1.0, 1.0])
    return b


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


# -- acceptance summary: one line per criterion, printed after the run --------------

ACCEPTANCE: dict[int, tuple[bool, str]] = {}
SUITE_BUDGET_S = 60.0
_START = [0.0]


def pytest_sessionstart(session):
    _START[0] = time.perf_counter()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    elapsed = time.perf_counter() - _START[0]
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        if n == 13:
            ok = ok and elapsed < SUITE_BUDGET_S
            detail += f"; suite wall time {elapsed:.1f} s (budget {SUITE_BUDGET_S:.0f} s)"
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
