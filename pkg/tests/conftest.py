import math
import random

import numpy as np
import pytest

from phaserank import NonnegMatrix, PhasedMatrix

D4_ROWS = [[0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0]]
GAP5_ROWS = [
    [7, 4, 9, 10, 0],
    [9, 2, 3, 0, 3],
    [3, 10, 6, 4, 8],
    [0, 4, 1, 6, 4],
    [0, 3, 3, 10, 2],
]
# column k of A P is column GAP5_PERM[k] of A
GAP5_PERM = (0, 2, 3, 1, 4)


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def ones(n, m=None):
    return [[1] * (n if m is None else m) for _ in range(n)]


def i_plus_j(n):
    return [[2 if i == j else 1 for j in range(n)] for i in range(n)]


def circulant(x, y):
    return [[1, x, y], [y, 1, x], [x, y, 1]]


def d4_rank_two_witness(theta=0.0):
    pi = math.pi
    phase = [
        [0, 0, 0, 0],
        [0, 0, theta + pi, theta + 2 * pi / 3],
        [0, theta, 0, theta + pi / 3],
        [0, theta - pi / 3, theta - 2 * pi / 3, 0],
    ]
    return PhasedMatrix(NonnegMatrix(D4_ROWS), phase)


def random_matrix(rng, n, m, high=5, boost=0.4):
    """Small-integer matrix; with probability ``boost`` a permuted diagonal is inflated
    so that maximal instances are well represented."""
    A = [[rng.randint(0, high) for _ in range(m)] for _ in range(n)]
    if rng.random() < boost:
        cols = rng.sample(range(m), min(n, m))
        for i, j in enumerate(cols):
            A[i][j] += rng.randint(2, 4 * high)
    if not any(any(r) for r in A):
        A[0][0] = 1
    return A


def random_z_matrix(rng, n):
    Z = [[-rng.randint(0, 4) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        Z[i][i] = rng.randint(0, 4 * n)
    return Z


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def np_rng():
    return np.random.default_rng(7)


_ACCEPTANCE = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None and rep.when == "call":
        number, title = marker.args
        _ACCEPTANCE.append((number, title, rep.passed, rep.duration))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, duration in sorted(_ACCEPTANCE):
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} criterion {number}: {title} ({duration:.2f}s)")
