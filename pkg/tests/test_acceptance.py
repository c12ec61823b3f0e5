"""Acceptance criteria 1-10.

Each test prints one PASS/FAIL line (visible with ``-s``); the terminal
summary lists every criterion regardless (see conftest.py).
"""
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest
import sympy

from phaserank import (
    GramWitness,
    Maximal,
    Method,
    Nonmaximal,
    NonnegMatrix,
    UpperSource,
    Verdict,
    all_determinants_nonpositive,
    bracket,
    close_polygon,
    cpsd_lift_witness,
    cpsd_upper_bound,
    decide_by_permutations,
    decide_by_submatrices,
    decide_nonmaximal,
    equiangular_certificate,
    hadamard_power,
    is_lopsided,
    is_nonsingular_m_matrix,
    LopsidedError,
    lower_bound_hadamard,
    mub_matrix,
    ngon,
    numerical_rank,
    polygon_residual,
    rational_rank,
    scan,
    semialg_3x3,
    semialg_4x4,
    semialg_general,
    signless_rank_bruteforce,
    slack_matrix,
    small_angle_equiangular_max,
    typical_rank_bounds,
    upper_bound_patching,
    verify_decision,
    verify_psd_witness,
)
from phaserank.mmatrix import verify_report
from phaserank.semialg import comparison_determinant

from conftest import (
    D4_ROWS,
    GAP5_PERM,
    GAP5_ROWS,
    circulant,
    d4_rank_two_witness,
    i_plus_j,
    random_matrix,
    random_z_matrix,
)


class Criterion:
    """Context manager that times a block, checks the runtime limit and prints the verdict."""

    def __init__(self, number, limit):
        self.number, self.limit = number, limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        ok = exc_type is None and elapsed < self.limit
        detail = f"{elapsed:.2f}s (limit {self.limit}s)"
        if exc_type is not None:
            detail += f", {exc_type.__name__}: {exc}"
        print(f"{'PASS' if ok else 'FAIL'} criterion {self.number}: {detail}")
        if exc_type is None:
            assert elapsed < self.limit, f"criterion {self.number} took {elapsed:.2f}s"
        return False


@pytest.mark.criterion(1, "D4 fixtures")
def test_criterion_1_d4_fixtures():
    with Criterion(1, 1.0):
        assert isinstance(decide_nonmaximal(D4_ROWS), Nonmaximal)
        assert numerical_rank(d4_rank_two_witness(), 1e-8) == 2
        assert signless_rank_bruteforce(D4_ROWS) == 4
        assert lower_bound_hadamard(D4_ROWS) == 2


@pytest.mark.criterion(2, "five-by-five matrix with a positive comparison determinant")
def test_criterion_2_positive_determinant_gap():
    with Criterion(2, 5.0):
        assert comparison_determinant(GAP5_ROWS, GAP5_PERM) == 3732
        d = decide_nonmaximal(GAP5_ROWS)
        assert isinstance(d, Nonmaximal) and verify_decision(GAP5_ROWS, d)
        assert semialg_general(GAP5_ROWS).member
        assert not all_determinants_nonpositive(GAP5_ROWS)


@pytest.mark.criterion(3, "oracle equivalence suites")
def test_criterion_3_oracles():
    rng = random.Random(3)
    with Criterion(3, 120.0):
        for n in range(3, 7):
            for _ in range(200):
                A = random_matrix(rng, n, n)
                assert decide_nonmaximal(A).is_nonmaximal == decide_by_permutations(A).is_nonmaximal, A
        for (n, m), count in (((3, 5), 100), ((4, 6), 50)):
            for _ in range(count):
                A = random_matrix(rng, n, m)
                assert decide_nonmaximal(A).is_nonmaximal == decide_by_submatrices(A), A
        for test, n, count in ((semialg_3x3, 3, 500), (semialg_4x4, 4, 500), (semialg_general, 5, 100)):
            for _ in range(count):
                A = random_matrix(rng, n, n)
                assert test(A).member == decide_nonmaximal(A).is_nonmaximal, A


@pytest.mark.criterion(4, "circulant region scan")
def test_criterion_4_circulant_region():
    with Criterion(4, 60.0):
        grid = scan("circulant3", 201)
        for i, j, s, t in grid.points():
            inside = s + t >= 1 and abs(s - t) <= 1
            assert (grid.cell(i, j) is Verdict.NONMAXIMAL) == inside, (s, t)
            if inside:
                assert rational_rank(circulant(s, t)) == 3, (s, t)
        # the singular point: the all-ones matrix, whose rank the sympy oracle gives as 1
        assert rational_rank(circulant(1, 1)) == sympy.Matrix(circulant(1, 1)).rank() == 1
        assert decide_nonmaximal(circulant(1, 1)).is_nonmaximal
        # uniqueness: on the orthant the determinant vanishes only at (1, 1)
        x, y = sympy.symbols("x y", nonnegative=True)
        det = sympy.Matrix(circulant(x, y)).det()
        assert sympy.expand(det - (1 + x + y) * ((1 - x) ** 2 + (x - y) ** 2 + (y - 1) ** 2) / 2) == 0


@pytest.mark.criterion(5, "patching tightness on identity plus ones")
def test_criterion_5_patching():
    with Criterion(5, 30.0):
        b = bracket(i_plus_j(5))
        assert (b.lower, b.upper) == (3, 3)
        assert b.lower == math.ceil(math.sqrt(5))
        assert b.upper_source is UpperSource.PATCHING and b.patching_k == 3
        assert numerical_rank(b.upper_witness, 1e-8) <= 3
        for n in range(4, 9):
            expected_upper = n - (n - 1) // 2
            bound, witness = upper_bound_patching(i_plus_j(n), 3)
            assert bound == expected_upper
            assert numerical_rank(witness, 1e-8) <= bound
            b = bracket(i_plus_j(n))
            assert b.upper == expected_upper and b.patching_k == 3
            # the known lower bound of three must fit under the computed upper bound
            assert b.lower >= math.ceil(math.sqrt(n)) and max(b.lower, 3) <= b.upper


@pytest.mark.criterion(6, "M-matrix characterization agreement")
def test_criterion_6_mmatrix():
    rng = random.Random(6)
    with Criterion(6, 60.0):
        verdicts = []
        for _ in range(500):
            Z = random_z_matrix(rng, rng.randint(2, 7))
            reports = [is_nonsingular_m_matrix(Z, m) for m in Method]
            assert len({r.verdict for r in reports}) == 1, Z
            verdicts.append(reports[0].verdict)
            for r in reports:
                if r.verdict and r.method is not Method.EIGENVALUE:
                    assert r.certificate is not None and verify_report(Z, r)
        assert any(verdicts) and not all(verdicts)


@pytest.mark.criterion(7, "polygon closure")
def test_criterion_7_polygon_closure():
    rng = np.random.default_rng(7)
    with Criterion(7, 10.0):
        closed = raised = 0
        while closed < 10_000:
            k = int(rng.integers(2, 13))
            v = rng.uniform(0, 10, size=k)
            if k == 2:
                v[1] = v[0]
            if is_lopsided(v):
                with pytest.raises(LopsidedError):
                    close_polygon(v)
                raised += 1
                continue
            phi = close_polygon(v)
            assert polygon_residual(v, phi) <= 1e-10 * v.sum()
            closed += 1
        for _ in range(1000):
            v = rng.uniform(0, 10, size=int(rng.integers(2, 13)))
            v[int(rng.integers(len(v)))] = v.sum() + rng.uniform(1e-6, 5)
            with pytest.raises(LopsidedError):
                close_polygon(v)


@pytest.mark.criterion(8, "polygon lift bounds")
def test_criterion_8_polytopes():
    with Criterion(8, 60.0):
        for n in range(3, 13):
            P = ngon(n)
            bound = cpsd_upper_bound(P)
            assert bound == math.ceil((2 * n + 1) / 3)
            w = cpsd_lift_witness(P)
            root = np.sqrt(slack_matrix(P).to_array())
            assert np.max(np.abs(np.abs(w.to_complex()) - root)) <= 1e-9
            assert numerical_rank(w, 1e-8) <= bound


@pytest.mark.criterion(9, "equiangular and MUB witnesses")
def test_criterion_9_equiangular_mub():
    with Criterion(9, 5.0):
        for d, alpha in ((2, Fraction(1, 4)), (3, Fraction(3, 10)), (4, Fraction(1, 5)),
                         (5, Fraction(1, 6) - Fraction(1, 100))):
            assert small_angle_equiangular_max(d, alpha) == d
            cert = equiangular_certificate(d, alpha)
            assert isinstance(cert, Maximal) and len(cert.permutation) == d + 1
            A = NonnegMatrix([[1 if i == j else alpha for j in range(d + 1)] for i in range(d + 1)])
            assert verify_decision(A, cert)
        s = 1 / math.sqrt(2)
        w = GramWitness.from_vectors([[1, 0], [0, 1], [s, s], [s, -s]])
        assert verify_psd_witness(w, mub_matrix(2, 2), 2)


@pytest.mark.criterion(10, "invariance suite")
def test_criterion_10_invariance():
    rng = random.Random(10)
    with Criterion(10, 60.0):
        for _ in range(100):
            n, m = rng.randint(2, 5), rng.randint(2, 6)
            A = random_matrix(rng, n, m)
            verdict = decide_nonmaximal(A).is_nonmaximal
            rows, cols = rng.sample(range(n), n), rng.sample(range(m), m)
            permuted = [[A[i][j] for j in cols] for i in rows]
            assert decide_nonmaximal(permuted).is_nonmaximal == verdict
            r = [Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(n)]
            c = [Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in range(m)]
            assert decide_nonmaximal(NonnegMatrix(A).scale(r, c)).is_nonmaximal == verdict
        found = 0
        while found < 100:
            n = rng.randint(2, 6)
            A = random_matrix(rng, n, n, boost=0.8)
            if decide_nonmaximal(A).is_nonmaximal:
                continue
            found += 1
            assert not decide_nonmaximal(hadamard_power(A, 2)).is_nonmaximal, A
        assert typical_rank_bounds(3, 3) == (2, 2)
        assert typical_rank_bounds(5, 100) == (3, 3)
