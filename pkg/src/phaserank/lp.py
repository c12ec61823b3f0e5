"""Exact linear-programming feasibility with checkable certificates.

The solver is a phase-1 simplex on an integer-preserving tableau (every
entry is kept as an integer over one common positive denominator, as in
fraction-free elimination), using Bland's rule so degenerate systems cannot
cycle. A feasible outcome carries a rational point; an infeasible one carries
nonnegative row multipliers whose combination reads ``0 <= -1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionError
from .matrix import NonnegMatrix, as_fraction


def _vec(values):
    return tuple(as_fraction(v) for v in values)


def _mat(rows):
    return tuple(_vec(r) for r in rows)


@dataclass(frozen=True)
class LinearProgram:
    """Feasibility system ``G x <= h``, ``E x = f``, ``x_j >= 0`` where flagged."""

    n_vars: int
    G: tuple = ()
    h: tuple = ()
    E: tuple = ()
    f: tuple = ()
    nonneg: tuple = None

    def __post_init__(self):
        G, h, E, f = _mat(self.G), _vec(self.h), _mat(self.E), _vec(self.f)
        nonneg = tuple(True for _ in range(self.n_vars)) if self.nonneg is None else tuple(map(bool, self.nonneg))
        if len(G) != len(h) or len(E) != len(f):
            raise DimensionError("row counts of matrix and right-hand side differ")
        if any(len(r) != self.n_vars for r in G + E):
            raise DimensionError(f"constraint rows must have {self.n_vars} columns")
        if len(nonneg) != self.n_vars:
            raise DimensionError("one nonnegativity flag per variable")
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "E", E)
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "nonneg", nonneg)

    def satisfied_by(self, x):
        """Exact substitution check."""
        x = _vec(x)
        if len(x) != self.n_vars:
            return False
        if any(flag and v < 0 for flag, v in zip(self.nonneg, x)):
            return False
        if any(sum(a * v for a, v in zip(row, x)) > b for row, b in zip(self.G, self.h)):
            return False
        return all(sum(a * v for a, v in zip(row, x)) == b for row, b in zip(self.E, self.f))


@dataclass(frozen=True)
class Feasible:
    point: tuple

    feasible = True

    def verify(self, lp):
        return lp.satisfied_by(self.point)


@dataclass(frozen=True)
class Infeasible:
    """Multipliers ``y >= 0`` (inequalities) and ``z`` (equalities).

    The combination ``(y G + z E) x <= y h + z f`` has right side ``-1`` and a
    left side that is nonnegative for every admissible ``x``.
    """

    ineq_multipliers: tuple
    eq_multipliers: tuple

    feasible = False

    @property
    def certificate(self):
        return self.ineq_multipliers + self.eq_multipliers

    def combined(self, lp):
        coeffs = [Fraction(0)] * lp.n_vars
        rhs = Fraction(0)
        for y, row, b in zip(self.ineq_multipliers, lp.G, lp.h):
            if y:
                rhs += y * b
                for j, a in enumerate(row):
                    coeffs[j] += y * a
        for z, row, b in zip(self.eq_multipliers, lp.E, lp.f):
            if z:
                rhs += z * b
                for j, a in enumerate(row):
                    coeffs[j] += z * a
        return coeffs, rhs

    def verify(self, lp):
        if len(self.ineq_multipliers) != len(lp.G) or len(self.eq_multipliers) != len(lp.E):
            return False
        if any(y < 0 for y in self.ineq_multipliers):
            return False
        coeffs, rhs = self.combined(lp)
        for c, flag in zip(coeffs, lp.nonneg):
            if c < 0 or (c != 0 and not flag):
                return False
        return rhs < 0


def _redundant(row, rhs, nonneg):
    # implied by x >= 0 alone
    if rhs < 0:
        return False
    return all((a <= 0 if flag else a == 0) for a, flag in zip(row, nonneg))


def lp_feasible(lp):
    """Decide feasibility of ``lp`` exactly; the outcome verifies itself."""
    var_cols = []
    for j in range(lp.n_vars):
        var_cols.append((j, 1))
        if not lp.nonneg[j]:
            var_cols.append((j, -1))
    nx = len(var_cols)

    active = [i for i in range(len(lp.G)) if not _redundant(lp.G[i], lp.h[i], lp.nonneg)]
    n_ineq = len(active)
    n_rows = n_ineq + len(lp.E)

    # constraint rows as (coefficients over var_cols, rhs, is_inequality)
    raw = [([lp.G[i][j] * s for j, s in var_cols], lp.h[i], True) for i in active]
    raw += [([row[j] * s for j, s in var_cols], b, False) for row, b in zip(lp.E, lp.f)]

    scales, signs = [], []
    int_rows = []
    for coeffs, rhs, _ in raw:
        den = 1
        for v in coeffs:
            den = math.lcm(den, v.denominator)
        den = math.lcm(den, rhs.denominator)
        sign = -1 if rhs < 0 else 1
        scales.append(den)
        signs.append(sign)
        int_rows.append([int(v * den) * sign for v in coeffs] + [int(rhs * den) * sign])

    # columns: x | slacks (one per active inequality) | artificials | rhs
    art_rows = [r for r in range(n_rows) if not (r < n_ineq and signs[r] > 0)]
    n_art = len(art_rows)
    n_cols = nx + n_ineq + n_art
    T = []
    basis = []
    init_col = []
    art_of_row = {r: nx + n_ineq + k for k, r in enumerate(art_rows)}
    for r, row in enumerate(int_rows):
        full = row[:-1] + [0] * (n_ineq + n_art) + [row[-1]]
        if r < n_ineq:
            full[nx + r] = signs[r]
        if r in art_of_row:
            full[art_of_row[r]] = 1
            basis.append(art_of_row[r])
        else:
            basis.append(nx + r)
        init_col.append(basis[-1])
        T.append(full)

    obj = [0] * (n_cols + 1)
    for r in art_rows:
        row = T[r]
        for j in range(n_cols + 1):
            obj[j] -= row[j]
    for r in art_rows:
        obj[art_of_row[r]] = 0
    T.append(obj)
    D = 1
    first_art = nx + n_ineq

    while True:
        obj = T[-1]
        entering = next((j for j in range(first_art) if obj[j] < 0), None)
        if entering is None:
            break
        leave = None
        for r in range(n_rows):
            a = T[r][entering]
            if a > 0:
                b = T[r][-1]
                if leave is None:
                    leave = (r, b, a)
                    continue
                _, lb, la = leave
                lhs, rhs_ = b * la, lb * a
                if lhs < rhs_ or (lhs == rhs_ and basis[r] < basis[leave[0]]):
                    leave = (r, b, a)
        if leave is None:
            # phase 1 is bounded below by zero
            raise RuntimeError("unbounded phase-1 direction")
        r = leave[0]
        p = T[r][entering]
        pr = T[r]
        for i, row in enumerate(T):
            if i == r:
                continue
            fct = row[entering]
            if fct == 0:
                if p != D:
                    T[i] = [x * p // D for x in row]
            else:
                T[i] = [(x * p - fct * y) // D for x, y in zip(row, pr)]
        D = p
        basis[r] = entering

    obj = T[-1]
    if obj[-1] == 0:
        values = [Fraction(0)] * n_cols
        for r, col in enumerate(basis):
            values[col] = Fraction(T[r][-1], D)
        x = [Fraction(0)] * lp.n_vars
        for k, (j, s) in enumerate(var_cols):
            x[j] += s * values[k]
        outcome = Feasible(tuple(x))
    else:
        y_ineq = [Fraction(0)] * len(lp.G)
        y_eq = [Fraction(0)] * len(lp.E)
        for r in range(n_rows):
            col = init_col[r]
            cost = 1 if col >= first_art else 0
            pi = cost - Fraction(obj[col], D)
            y = -pi * signs[r] * scales[r]
            if r < n_ineq:
                y_ineq[active[r]] = y
            else:
                y_eq[r - n_ineq] = y
        cert = Infeasible(tuple(y_ineq), tuple(y_eq))
        _, rhs = cert.combined(lp)
        norm = -rhs
        outcome = Infeasible(tuple(y / norm for y in y_ineq), tuple(z / norm for z in y_eq))
    if not outcome.verify(lp):
        raise RuntimeError("simplex produced a certificate that does not verify")
    return outcome


def nonmax_system(A):
    """Weights making every column of ``A`` nonlopsided (rows <= columns).

    For each column ``j`` and row ``i``:
    ``A_ij * l_i - sum_{k != i} A_kj * l_k <= 0``, plus ``l >= 0`` and
    ``sum(l) == 1``.
    """
    if not isinstance(A, NonnegMatrix):
        A = NonnegMatrix(A)
    n, m = A.shape
    if n > m:
        raise DimensionError(f"expected rows <= columns, got {n}x{m}; transpose first")
    G = []
    for j in range(m):
        col = A.column(j)
        for i in range(n):
            G.append([col[k] if k == i else -col[k] for k in range(n)])
    return LinearProgram(n, G=G, h=[0] * len(G), E=[[1] * n], f=[1])
