import math

import pytest


def trial_division_primes(limit):
    return [n for n in range(2, limit + 1) if all(n % d for d in range(2, math.isqrt(n) + 1))]


def trial_factor(n):
    out, d = [], 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1
    if n > 1:
        out.append((n, 1))
    return out


def brute_primitive(q, n):
    """Primitive prime divisors of q**n - 1 by factoring it outright."""
    value = q**n - 1
    return [p for p, _ in trial_factor(value)
            if all((q**k - 1) % p for k in range(1, n))]


@pytest.fixture(scope="session")
def small_admissible():
    from rhosigma.pisearch import enumerate_admissible
    return enumerate_admissible(2000)


ACCEPTANCE_RESULTS = {}


def pytest_runtest_makereport(item, call):
    crit = item.get_closest_marker("criterion")
    if crit and call.when == "call":
        ACCEPTANCE_RESULTS[crit.args[0]] = (call.excinfo is None, crit.args[1])


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        ok, title = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
