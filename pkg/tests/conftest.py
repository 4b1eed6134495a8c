import random

import pytest
from hypothesis import settings

from permcount.field import field_make
from permcount.oracles import SeriesRing, hc_brute, per_brute

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def rand_matrix(rng, F, n):
    return [[F.random(rng) for _ in range(n)] for _ in range(n)]


def rand_series_matrix(rng, F, k, r, A):
    """k x k series of order r whose constant terms are A."""
    return [[[A[i][j]] + [F.random(rng) for _ in range(r - 1)] for j in range(k)]
            for i in range(k)]


def series_per(F, r, Fm):
    return per_brute(Fm, SeriesRing(F, r))


def series_hc(F, r, Fm):
    return hc_brute(Fm, SeriesRing(F, r))


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture(params=[(2, 1), (3, 1), (7, 1), (2, 4), (3, 2)], ids=str)
def small_field(request):
    return field_make(*request.param)


ACCEPTANCE_LINES = []


def report(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
