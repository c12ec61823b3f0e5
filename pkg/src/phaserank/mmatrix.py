"""Nonsingular M-matrix tests for Z-matrices (nonpositive off-diagonal).

Five equivalent characterizations are available so that they can be checked
against each other; only the exact ones produce certificates.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DimensionError
from .lp import Feasible, LinearProgram, lp_feasible
from .matrix import ComparisonMatrix, as_fraction, bareiss_leading_minors, integer_matrix

EIGENVALUE_TOL = 1e-9


class Method(enum.Enum):
    POSITIVE_VECTOR = "positive_vector"
    LEADING_MINORS = "leading_minors"
    REDUCED_MINORS = "reduced_minors"
    EIGENVALUE = "eigenvalue"
    DOMINANCE_SCALING = "dominance_scaling"


@dataclass(frozen=True)
class MMatrixReport:
    verdict: bool
    method: Method
    certificate: tuple = None

    def __bool__(self):
        return self.verdict


def _z_rows(Z):
    if isinstance(Z, ComparisonMatrix):
        return Z.rows
    rows = tuple(tuple(as_fraction(v) for v in row) for row in Z)
    n = len(rows)
    if n == 0 or any(len(r) != n for r in rows):
        raise DimensionError("Z-matrix must be square and nonempty")
    for i in range(n):
        for j in range(n):
            if i != j and rows[i][j] > 0:
                raise ValueError(f"positive off-diagonal entry at ({i}, {j})")
    return rows


def leading_principal_minors(Z):
    """Exact ``det_1, ..., det_n``."""
    rows = _z_rows(Z)
    ints, den = integer_matrix(rows)
    return [Fraction(m, den ** (k + 1)) for k, m in enumerate(bareiss_leading_minors(ints))]


def _positive_vector(rows, lower=0):
    # Z x >= 1 with x >= lower
    n = len(rows)
    G = [[-v for v in row] for row in rows]
    h = [-1] * n
    if lower:
        G += [[-int(i == j) for j in range(n)] for i in range(n)]
        h += [-lower] * n
    out = lp_feasible(LinearProgram(n, G=G, h=h))
    return out.point if isinstance(out, Feasible) else None


def positive_vector_certificate(Z):
    """Some ``x >= 0`` with ``Z x >= 1`` entrywise, or None."""
    return _positive_vector(_z_rows(Z))


def is_strictly_diagonally_dominant(rows):
    return all(abs(row[i]) > sum(abs(v) for j, v in enumerate(row) if j != i) for i, row in enumerate(rows))


def is_nonsingular_m_matrix(Z, method=Method.REDUCED_MINORS):
    """Decide whether the Z-matrix ``Z`` is a nonsingular M-matrix."""
    method = Method(method)
    rows = _z_rows(Z)
    n = len(rows)
    if method is Method.LEADING_MINORS:
        minors = leading_principal_minors(rows)
        return MMatrixReport(all(m > 0 for m in minors), method, tuple(minors))
    if method is Method.REDUCED_MINORS:
        if any(rows[i][i] <= 0 for i in range(n)):
            return MMatrixReport(False, method, ())
        minors = leading_principal_minors(rows)
        # sizes >= 3, and the full determinant when n < 3
        checked = [minors[k] for k in range(n) if k >= 2 or k == n - 1]
        return MMatrixReport(all(m > 0 for m in checked), method, tuple(minors))
    if method is Method.EIGENVALUE:
        arr = np.array([[float(v) for v in row] for row in rows])
        eig = np.linalg.eigvals(arr)
        scale = max(1.0, float(np.abs(arr).max()))
        real = eig[np.abs(eig.imag) <= 1e-9 * scale].real
        smallest = float(real.min()) if real.size else float(eig.real.min())
        return MMatrixReport(smallest > EIGENVALUE_TOL * scale, method, None)
    if method is Method.POSITIVE_VECTOR:
        x = _positive_vector(rows)
        return MMatrixReport(x is not None, method, x)
    if method is Method.DOMINANCE_SCALING:
        if any(rows[i][i] <= 0 for i in range(n)):
            return MMatrixReport(False, method, None)
        d = _positive_vector(rows, lower=1)
        if d is None:
            return MMatrixReport(False, method, None)
        scaled = [[v * d[j] for j, v in enumerate(row)] for row in rows]
        if not is_strictly_diagonally_dominant(scaled):
            raise RuntimeError("dominance scaling failed to verify")
        return MMatrixReport(True, method, d)
    raise ValueError(f"unknown method {method}")


def verify_report(Z, report):
    """Exact re-check of the certificate attached to a true verdict."""
    rows = _z_rows(Z)
    if not report.verdict:
        return True
    if report.method is Method.POSITIVE_VECTOR:
        x = report.certificate
        return all(v >= 0 for v in x) and all(sum(a * b for a, b in zip(row, x)) > 0 for row in rows)
    if report.method is Method.DOMINANCE_SCALING:
        d = report.certificate
        return all(v > 0 for v in d) and is_strictly_diagonally_dominant(
            [[v * d[j] for j, v in enumerate(row)] for row in rows])
    if report.method in (Method.LEADING_MINORS, Method.REDUCED_MINORS):
        return tuple(leading_principal_minors(rows)) == report.certificate
    return True
