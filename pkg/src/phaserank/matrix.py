"""Exact rational and phased complex matrix containers.

Nonnegative matrices are held as tuples of :class:`fractions.Fraction` so that
every certificate derived from them can be checked exactly. Phased matrices
pair such a modulus with a float phase array and are only ever used for
numerical witnesses.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import DimensionError

TWO_PI = 2.0 * math.pi

#: Relative rank tolerance used when the caller gives none.
DEFAULT_RANK_RTOL = 1e-9
#: Rationalization tolerance for floats and irrational values.
RATIONALIZE_TOL = 1e-12


def rationalize(x, tol=RATIONALIZE_TOL):
    """Smallest-denominator continued-fraction approximation within ``tol``."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot rationalize {x!r}")
    exact = Fraction(x)
    bound = 1
    while True:
        approx = exact.limit_denominator(bound)
        if abs(approx - exact) <= tol:
            return approx
        bound *= 10


def as_fraction(x):
    """Convert ints, rationals, decimal/``p/q`` strings and floats to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (float, np.floating)):
        return rationalize(x)
    if isinstance(x, np.integer):
        return Fraction(int(x))
    raise TypeError(f"unsupported entry type {type(x).__name__}")


def _lcm_denominator(values):
    den = 1
    for v in values:
        den = math.lcm(den, v.denominator)
    return den


def integer_rows(rows):
    """Scale every row by the lcm of its denominators (rank-preserving)."""
    out = []
    for row in rows:
        den = _lcm_denominator(row)
        out.append([int(v * den) for v in row])
    return out


def integer_matrix(rows):
    """Scale the whole matrix by one common denominator ``L``; returns (ints, L)."""
    den = 1
    for row in rows:
        den = math.lcm(den, _lcm_denominator(row))
    return [[int(v * den) for v in row] for row in rows], den


# -- fraction-free elimination on integer matrices ---------------------------

def bareiss_rank(rows):
    """Rank of an integer matrix by fraction-free elimination, full pivoting."""
    a = [list(r) for r in rows]
    n = len(a)
    m = len(a[0]) if n else 0
    prev = 1
    rank = 0
    for k in range(min(n, m)):
        pivot = None
        for i in range(k, n):
            row = a[i]
            for j in range(k, m):
                if row[j]:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        i, j = pivot
        a[k], a[i] = a[i], a[k]
        if j != k:
            for row in a:
                row[k], row[j] = row[j], row[k]
        p = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            f = ri[k]
            for j in range(k + 1, m):
                ri[j] = (ri[j] * p - f * rk[j]) // prev
            ri[k] = 0
        prev = p
        rank += 1
    return rank


def bareiss_det(rows):
    """Determinant of a square integer matrix (row pivoting, exact)."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        p = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            f = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * p - f * rk[j]) // prev
        prev = p
    return sign * a[n - 1][n - 1]


def bareiss_leading_minors(rows):
    """All leading principal minors of a square integer matrix."""
    a = [list(r) for r in rows]
    n = len(a)
    minors = []
    prev = 1
    for k in range(n):
        p = a[k][k]
        minors.append(p)
        if p == 0:
            # elimination cannot continue without pivoting; fall back
            for size in range(k + 2, n + 1):
                minors.append(bareiss_det([r[:size] for r in rows[:size]]))
            return minors
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            f = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * p - f * rk[j]) // prev
        prev = p
    return minors


def _rows_of(matrix):
    if isinstance(matrix, (NonnegMatrix, ComparisonMatrix)):
        return matrix.rows
    return tuple(tuple(as_fraction(x) for x in row) for row in matrix)


def rational_rank(matrix):
    """Exact rank of a rational matrix (fraction-free elimination)."""
    rows = _rows_of(matrix)
    if not rows or not rows[0]:
        return 0
    return bareiss_rank(integer_rows(rows))


def rational_det(matrix):
    """Exact determinant of a square rational matrix."""
    rows = _rows_of(matrix)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise DimensionError("determinant of a non-square matrix")
    ints, den = integer_matrix(rows)
    return Fraction(bareiss_det(ints), den ** n)


# -- containers ---------------------------------------------------------------

class NonnegMatrix:
    """Dense matrix of nonnegative rationals.

    ``approximate`` marks matrices whose entries are rationalizations of
    irrational values; ``square`` optionally carries the exact entrywise
    square when it is known even though the entries themselves are not.
    """

    __slots__ = ("_rows", "approximate", "_square")

    def __init__(self, entries, *, approximate=False, square=None):
        if isinstance(entries, NonnegMatrix):
            rows = entries.rows
        else:
            rows = tuple(tuple(as_fraction(x) for x in row) for row in entries)
        if not rows or not rows[0]:
            raise DimensionError("matrix must have at least one row and column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise DimensionError("ragged rows")
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                if v < 0:
                    raise ValueError(f"negative entry {v} at ({i}, {j})")
        if square is not None and square.shape != (len(rows), width):
            raise DimensionError("square has the wrong shape")
        self._rows = rows
        self.approximate = bool(approximate)
        self._square = square

    @classmethod
    def identity(cls, n):
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def ones(cls, n, m=None):
        return cls([[1] * (n if m is None else m) for _ in range(n)])

    @property
    def rows(self):
        return self._rows

    @property
    def shape(self):
        return len(self._rows), len(self._rows[0])

    @property
    def n_rows(self):
        return len(self._rows)

    @property
    def n_cols(self):
        return len(self._rows[0])

    def __getitem__(self, index):
        i, j = index
        return self._rows[i][j]

    def row(self, i):
        return self._rows[i]

    def column(self, j):
        return tuple(r[j] for r in self._rows)

    def columns(self):
        return [self.column(j) for j in range(self.n_cols)]

    @property
    def T(self):
        sq = self._square.T if self._square is not None else None
        return NonnegMatrix(tuple(zip(*self._rows)), approximate=self.approximate, square=sq)

    def submatrix(self, rows=None, cols=None):
        rows = range(self.n_rows) if rows is None else rows
        cols = range(self.n_cols) if cols is None else cols
        pick = lambda m: tuple(tuple(m._rows[i][j] for j in cols) for i in rows)  # noqa: E731
        sq = NonnegMatrix(pick(self._square)) if self._square is not None else None
        return NonnegMatrix(pick(self), approximate=self.approximate, square=sq)

    def permute_columns(self, perm):
        """Matrix ``A P`` whose column ``k`` is column ``perm[k]`` of ``A``."""
        return self.submatrix(cols=list(perm))

    def scale(self, row_scales=None, col_scales=None):
        r = [as_fraction(x) for x in row_scales] if row_scales is not None else [1] * self.n_rows
        c = [as_fraction(x) for x in col_scales] if col_scales is not None else [1] * self.n_cols
        return NonnegMatrix(
            [[v * r[i] * c[j] for j, v in enumerate(row)] for i, row in enumerate(self._rows)],
            approximate=self.approximate,
        )

    def hadamard_square(self):
        """Exact entrywise square (uses the recorded square when available)."""
        if self._square is not None:
            return self._square
        return NonnegMatrix([[v * v for v in row] for row in self._rows])

    @property
    def square(self):
        return self._square

    def zero_rows(self):
        return [i for i, row in enumerate(self._rows) if not any(row)]

    def is_zero(self):
        return all(not any(row) for row in self._rows)

    def to_array(self, dtype=float):
        return np.array([[float(v) for v in row] for row in self._rows], dtype=dtype)

    def tolist(self):
        return [list(row) for row in self._rows]

    def __eq__(self, other):
        if not isinstance(other, NonnegMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self):
        return hash(self._rows)

    def __repr__(self):
        body = "; ".join(" ".join(str(v) for v in row) for row in self._rows)
        flag = ", approximate" if self.approximate else ""
        return f"NonnegMatrix([{body}]{flag})"


class ComparisonMatrix:
    """Square rational matrix with nonnegative diagonal and nonpositive off-diagonal."""

    __slots__ = ("_rows",)

    def __init__(self, entries):
        rows = tuple(tuple(as_fraction(x) for x in row) for row in entries)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DimensionError("comparison matrix must be square and nonempty")
        for i in range(n):
            for j in range(n):
                v = rows[i][j]
                if i == j and v < 0:
                    raise ValueError(f"negative diagonal entry at {i}")
                if i != j and v > 0:
                    raise ValueError(f"positive off-diagonal entry at ({i}, {j})")
        self._rows = rows

    @property
    def rows(self):
        return self._rows

    @property
    def dimension(self):
        return len(self._rows)

    @property
    def shape(self):
        return (len(self._rows), len(self._rows))

    def __getitem__(self, index):
        i, j = index
        return self._rows[i][j]

    def abs(self):
        return NonnegMatrix([[abs(v) for v in row] for row in self._rows])

    def to_array(self):
        return np.array([[float(v) for v in row] for row in self._rows])

    def __eq__(self, other):
        if not isinstance(other, ComparisonMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self):
        return hash(self._rows)

    def __repr__(self):
        body = "; ".join(" ".join(str(v) for v in row) for row in self._rows)
        return f"ComparisonMatrix([{body}])"


class PhasedMatrix:
    """Complex matrix stored as modulus times ``exp(i * phase)``.

    Phases are normalized to ``[0, 2*pi)`` and forced to zero wherever the
    modulus vanishes, so two equal matrices have equal representations.
    """

    __slots__ = ("modulus", "_phase")

    def __init__(self, modulus, phase=None):
        if not isinstance(modulus, NonnegMatrix):
            modulus = NonnegMatrix(modulus)
        shape = modulus.shape
        if phase is None:
            ph = np.zeros(shape)
        else:
            ph = np.array(phase, dtype=float)
            if ph.shape != shape:
                raise DimensionError(f"phase shape {ph.shape} != modulus shape {shape}")
        ph = np.mod(ph, TWO_PI)
        ph[ph >= TWO_PI] = 0.0
        ph[modulus.to_array() == 0] = 0.0
        ph.setflags(write=False)
        self.modulus = modulus
        self._phase = ph

    @classmethod
    def real(cls, modulus):
        """Zero-phase embedding of a nonnegative matrix."""
        return cls(modulus)

    @property
    def phase(self):
        return self._phase

    @property
    def shape(self):
        return self.modulus.shape

    @property
    def T(self):
        return PhasedMatrix(self.modulus.T, self._phase.T)

    def to_complex(self):
        return self.modulus.to_array() * np.exp(1j * self._phase)

    def __repr__(self):
        return f"PhasedMatrix(shape={self.shape})"


def comparison_matrix(A):
    """Diagonal kept, off-diagonal negated."""
    if not isinstance(A, NonnegMatrix):
        A = NonnegMatrix(A)
    n, m = A.shape
    if n != m:
        raise DimensionError(f"comparison matrix needs a square input, got {n}x{m}")
    return ComparisonMatrix([[v if i == j else -v for j, v in enumerate(row)] for i, row in enumerate(A.rows)])


def _as_complex(B):
    if isinstance(B, PhasedMatrix):
        return B.to_complex()
    if isinstance(B, (NonnegMatrix, ComparisonMatrix)):
        return B.to_array().astype(complex)
    return np.asarray(B, dtype=complex)


def numerical_rank(B, tol=None, method="svd"):
    """Number of singular values above ``tol``.

    ``tol`` is an absolute threshold; by default it is ``1e-9`` times the
    largest singular value. ``method="elimination"`` counts pivots of complex
    Gaussian elimination with complete modulus pivoting instead.
    """
    arr = _as_complex(B)
    if arr.size == 0:
        return 0
    if method == "svd":
        s = np.linalg.svd(arr, compute_uv=False)
        if tol is None:
            tol = DEFAULT_RANK_RTOL * (s[0] if s.size else 0.0)
        return int(np.sum(s > tol))
    if method == "elimination":
        return _elimination_rank(arr, tol)
    raise ValueError(f"unknown rank method {method!r}")


def _elimination_rank(arr, tol):
    a = np.array(arr, dtype=complex)
    if tol is None:
        tol = DEFAULT_RANK_RTOL * np.linalg.norm(a, 2)
    n, m = a.shape
    rank = 0
    for k in range(min(n, m)):
        sub = np.abs(a[k:, k:])
        i, j = np.unravel_index(int(np.argmax(sub)), sub.shape)
        if sub[i, j] <= tol:
            break
        i += k
        j += k
        a[[k, i]] = a[[i, k]]
        a[:, [k, j]] = a[:, [j, k]]
        a[k + 1:, k:] -= np.outer(a[k + 1:, k] / a[k, k], a[k, k:])
        rank += 1
    return rank


def _exact_root(value, q):
    """Exact ``q``-th root of a nonnegative Fraction, or None."""
    def iroot(n):
        if n < 0:
            return None
        if q == 2:
            r = math.isqrt(n)
        else:
            try:
                r = int(round(n ** (1.0 / q)))
            except OverflowError:
                return None
        for c in (r - 1, r, r + 1):
            if c >= 0 and c ** q == n:
                return c
        return None

    num = iroot(value.numerator)
    den = iroot(value.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def hadamard_power(A, alpha, tol=RATIONALIZE_TOL):
    """Entrywise power ``A**alpha``.

    Integer powers are exact. Fractional powers are exact where the entries
    have rational roots and otherwise computed in double precision and
    rationalized at ``tol``; the result is then flagged approximate.
    """
    if not isinstance(A, NonnegMatrix):
        A = NonnegMatrix(A)
    alpha = as_fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if alpha == 1:
        return A
    if alpha.denominator == 1:
        if alpha == 2 and A.square is not None:
            return A.square
        p = int(alpha)
        return NonnegMatrix([[v ** p for v in row] for row in A.rows], approximate=A.approximate)
    p, q = alpha.numerator, alpha.denominator
    approximate = A.approximate
    out = []
    for row in A.rows:
        new = []
        for v in row:
            root = _exact_root(v, q)
            if root is not None:
                new.append(root ** p)
            else:
                new.append(rationalize(float(v) ** float(alpha), tol))
                approximate = True
        out.append(new)
    square = A if alpha == Fraction(1, 2) else None
    return NonnegMatrix(out, approximate=approximate, square=square)
