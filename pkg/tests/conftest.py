import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ybekit.algebra import (
    FiniteBrace,
    brace_from_nilpotent_ring,
    make_truncated_polynomial_ring,
    multiples_ring,
    small_braces,
)

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def braces():
    return small_braces()


@pytest.fixture(scope="session")
def f2x3():
    """Brace of xF2[x]/(x^3): elements 0, x, x^2, x+x^2."""
    return brace_from_nilpotent_ring(make_truncated_polynomial_ring(2, 3))


@pytest.fixture(scope="session")
def f2x4():
    return brace_from_nilpotent_ring(make_truncated_polynomial_ring(2, 4))


@pytest.fixture(scope="session")
def z8even():
    """Brace of {0, 2, 4, 6} inside Z/8."""
    return brace_from_nilpotent_ring(multiples_ring(2, 8))


def z6_signed():
    """Z/6 with a o b = a + (-1)^a b: right nilpotent, not left nilpotent."""
    n = 6
    idx = np.arange(n)
    add = (idx[:, None] + idx[None, :]) % n
    sign = np.where(idx % 2 == 0, 1, -1)
    circ = (idx[:, None] + sign[:, None] * idx[None, :]) % n
    return FiniteBrace(add, circ)


def rng(seed=0):
    return np.random.default_rng(seed)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        ok, detail = results[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
