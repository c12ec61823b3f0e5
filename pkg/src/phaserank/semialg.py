"""Determinant-inequality membership tests for nonmaximal phaseless rank.

For a square ``A`` the nonmaximal set is the intersection over column
permutations ``P`` of the sets where ``comparison(A P)`` fails to be a
nonsingular M-matrix. For ``n <= 4`` this reduces to ``det <= 0`` for every
``P``; from ``n = 5`` on, smaller leading minors must be consulted too.
All arithmetic is exact.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import CapabilityError, DimensionError, DomainError
from .matrix import NonnegMatrix, bareiss_det, integer_matrix

MAX_PERMANENT_SIZE = 12
MAX_GENERAL_SIZE = 8


@dataclass(frozen=True)
class SemialgebraicReport:
    """``violated`` holds ``(permutation, minor size, value)`` triples."""

    member: bool
    violated: tuple = field(default_factory=tuple)
    boundary: tuple = field(default_factory=tuple)


def _square_ints(A, size=None):
    A = A if isinstance(A, NonnegMatrix) else NonnegMatrix(A)
    n, m = A.shape
    if n != m:
        raise DimensionError(f"expected a square matrix, got {n}x{m}")
    if size is not None and n != size:
        raise DimensionError(f"expected {size}x{size}, got {n}x{n}")
    if A.approximate:
        raise DomainError("semialgebraic tests need exact rational entries")
    ints, den = integer_matrix(A.rows)
    return ints, den


def _comparison_of_permuted(ints, perm, k=None):
    k = len(perm) if k is None else k
    return [[ints[i][perm[j]] if i == j else -ints[i][perm[j]] for j in range(k)] for i in range(k)]


def _comparison_det(ints, perm, k=None):
    return bareiss_det(_comparison_of_permuted(ints, perm, k))


def comparison_determinant(A, perm):
    """Exact ``det(comparison(A P))``; column ``k`` of ``A P`` is column ``perm[k]`` of ``A``."""
    ints, den = _square_ints(A)
    return Fraction(_comparison_det(ints, tuple(perm)), den ** len(ints))


def _all_determinants(A):
    ints, den = _square_ints(A)
    n = len(ints)
    scale = den ** n
    return [(p, Fraction(_comparison_det(ints, p), scale)) for p in itertools.permutations(range(n))]


def all_determinants_nonpositive(A):
    """Whether ``det(comparison(A P)) <= 0`` for every permutation ``P``."""
    return all(v <= 0 for _, v in _all_determinants(A))


def semialg_3x3(X):
    """Six determinant inequalities, one per permutation."""
    dets = _all_determinants(_checked(X, 3))
    violated = tuple((p, 3, v) for p, v in dets if v > 0)
    boundary = tuple(p for p, v in dets if v == 0)
    return SemialgebraicReport(not violated, violated, boundary)


def _checked(A, size):
    _square_ints(A, size)
    return A


def permanent(A):
    """Exact permanent by Ryser's inclusion-exclusion formula."""
    ints, den = _square_ints(A)
    n = len(ints)
    if n > MAX_PERMANENT_SIZE:
        raise CapabilityError(f"n={n} exceeds the permanent limit {MAX_PERMANENT_SIZE}")
    total = 0
    for mask in range(1, 1 << n):
        cols = [j for j in range(n) if mask >> j & 1]
        prod = 1
        for row in ints:
            s = sum(row[j] for j in cols)
            if s == 0:
                prod = 0
                break
            prod *= s
        total += (-1) ** len(cols) * prod
    total *= (-1) ** n
    return Fraction(total, den ** n)


def _compose(p, q):
    return tuple(p[q[i]] for i in range(len(q)))


@lru_cache(maxsize=None)
def determinant_classes(n):
    """Group the ``n!`` permutations by the polynomial ``det(comparison(A P))``.

    Each polynomial is stored as a mapping from monomial (the permutation
    ``rho`` standing for ``prod_i a[i][rho[i]]``) to its integer coefficient.
    Returns a list of ``(permutations, polynomial)`` in lexicographic order
    of the first permutation in each class.
    """
    perms = list(itertools.permutations(range(n)))

    def sign(t):
        s, seen = 1, set()
        for i in range(n):
            if i in seen:
                continue
            j, length = i, 0
            while j not in seen:
                seen.add(j)
                j = t[j]
                length += 1
            if length % 2 == 0:
                s = -s
        return s

    coeff = {t: sign(t) * (-1) ** sum(t[i] != i for i in range(n)) for t in perms}
    classes = {}
    for p in perms:
        poly = frozenset((_compose(p, t), c) for t, c in coeff.items())
        classes.setdefault(poly, []).append(p)
    out = [(tuple(ps), dict(poly)) for poly, ps in classes.items()]
    out.sort(key=lambda item: item[0][0])
    return out


def four_by_four_inequalities():
    """The six ``2 * (four monomials) - perm(A) <= 0`` inequalities as monomial sets."""
    result = []
    for perms, poly in determinant_classes(4):
        plus = frozenset(rho for rho, c in poly.items() if c == 1)
        minus = frozenset(rho for rho, c in poly.items() if c == -1)
        if len(plus) != 4 or len(minus) != 20:
            raise RuntimeError("unexpected determinant structure")
        result.append((perms[0], plus))
    return result


def _monomial(ints, rho):
    prod = 1
    for i, j in enumerate(rho):
        prod *= ints[i][j]
    return prod


def semialg_4x4(A):
    """Six inequalities ``2 * sum(monomials) - perm(A) <= 0`` using the permanent."""
    ints, den = _square_ints(A, 4)
    perm_value = permanent(A) * den ** 4
    violated, boundary = [], []
    for rep, monomials in four_by_four_inequalities():
        value = Fraction(2 * sum(_monomial(ints, rho) for rho in monomials) - perm_value, den ** 4)
        if value > 0:
            violated.append((rep, 4, value))
        elif value == 0:
            boundary.append(rep)
    return SemialgebraicReport(not violated, tuple(violated), tuple(boundary))


def semialg_general(A):
    """Membership via leading minors of size three and up, for every permutation.

    A permutation counts as a violation when ``comparison(A P)`` has a
    positive diagonal and every leading minor of size ``>= 3`` (the full
    determinant when ``n < 3``) is positive.
    """
    ints, den = _square_ints(A)
    n = len(ints)
    if n > MAX_GENERAL_SIZE:
        raise CapabilityError(f"n={n} exceeds the semialgebraic limit {MAX_GENERAL_SIZE}")
    first_checked = min(3, n)
    violated = []

    def search(prefix, used):
        k = len(prefix)
        if k >= first_checked and _comparison_det(ints, prefix, k) <= 0:
            return
        if k == n:
            p = tuple(prefix)
            violated.append((p, n, Fraction(_comparison_det(ints, p), den ** n)))
            return
        for c in range(n):
            if c not in used and ints[k][c] > 0:
                search(prefix + [c], used | {c})

    search([], frozenset())
    boundary = tuple(p for p in itertools.permutations(range(n)) if _comparison_det(ints, p) == 0)
    return SemialgebraicReport(not violated, tuple(violated), boundary)


def boundary_certificate(A):
    """First permutation (lexicographic) with ``det(comparison(A P)) == 0``, or None."""
    ints, _ = _square_ints(A)
    for p in itertools.permutations(range(len(ints))):
        if _comparison_det(ints, p) == 0:
            return p
    return None
