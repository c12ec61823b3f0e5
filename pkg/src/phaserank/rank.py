"""Decisions, certificates, witnesses and bounds for phaseless rank.

The phaseless rank of a nonnegative matrix ``A`` is the smallest rank of a
complex matrix whose entrywise modulus is ``A``. Whether it is smaller than
``min(n, m)`` is an exact LP question; everything else here is either a
bound with a verifiable witness or a brute-force oracle for testing.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BoundInapplicable, CapabilityError, DimensionError, DomainError, LopsidedError
from .lopsided import WeightVector, close_polygon, lop_membership
from .lp import Feasible, Infeasible, lp_feasible, nonmax_system
from .matrix import (
    NonnegMatrix,
    PhasedMatrix,
    bareiss_det,
    bareiss_rank,
    integer_matrix,
    integer_rows,
    numerical_rank,
    rational_rank,
    rationalize,
)
from .mmatrix import positive_vector_certificate

WITNESS_RESIDUAL_TOL = 1e-9
WITNESS_RANK_TOL = 1e-8
MAX_PERMUTATION_SIZE = 10
MAX_SIGN_BITS = 20
BOUNDARY_EPS = Fraction(1, 10 ** 10)


@dataclass(frozen=True)
class Nonmaximal:
    """Phaseless rank below ``min(n, m)``.

    ``weights`` and ``witness`` refer to the oriented matrix (rows <= cols);
    ``witness`` is always returned in the orientation of the input. Verdicts
    reached by exhaustive permutation search carry neither.
    """

    weights: WeightVector = None
    witness: PhasedMatrix = None
    transposed: bool = False
    boundary_uncertain: bool = False

    is_nonmaximal = True


@dataclass(frozen=True)
class Maximal:
    """Phaseless rank equals ``min(n, m)``.

    On the oriented matrix ``W`` (rows <= cols), the square submatrix
    ``S = W[:, columns]`` satisfies ``comparison(S P) @ scaling > 0`` where
    column ``k`` of ``S P`` is column ``permutation[k]`` of ``S``.
    """

    permutation: tuple
    scaling: tuple
    columns: tuple = None
    farkas: Infeasible = None
    transposed: bool = False
    boundary_uncertain: bool = False

    is_nonmaximal = False


RankDecision = Nonmaximal | Maximal


class LowerSource(enum.Enum):
    RANK_ONE = "rank_one"
    HADAMARD_SQUARE = "hadamard_square"
    MAXIMALITY = "maximality"


class UpperSource(enum.Enum):
    PATCHING = "patching"
    NONMAX_DIRECT = "nonmax_direct"
    TRIVIAL_MIN = "trivial_min"
    LOCAL_SEARCH = "local_search"


@dataclass(frozen=True)
class Bracket:
    lower: int
    upper: int
    lower_source: LowerSource
    upper_source: UpperSource
    patching_k: int = None
    upper_witness: PhasedMatrix = None

    @property
    def exact(self):
        return self.lower == self.upper


def _as_matrix(A):
    return A if isinstance(A, NonnegMatrix) else NonnegMatrix(A)


def _oriented(A):
    if A.n_rows > A.n_cols:
        return A.T, True
    return A, False


# -- witnesses ----------------------------------------------------------------

def build_witness(A, weights):
    """Equimodular matrix whose rows are annihilated by ``weights``.

    Each column's weighted entries are closed into a polygon; the column is
    then rotated so that its first nonzero entry is real and positive.
    """
    A = _as_matrix(A)
    lam = weights if isinstance(weights, WeightVector) else WeightVector(weights)
    n, m = A.shape
    if len(lam) != n:
        raise DimensionError(f"{len(lam)} weights for {n} rows")
    phase = np.zeros((n, m))
    lam_f = np.array([float(x) for x in lam])
    for j in range(m):
        col = A.column(j)
        if not lop_membership(col, lam):
            raise LopsidedError(f"column {j} is lopsided under the given weights", column=j)
        phi = close_polygon([lam[k] * col[k] for k in range(n)])
        first = next((k for k in range(n) if col[k] != 0), None)
        if first is not None:
            phi = phi - phi[first]
        phase[:, j] = phi
    witness = PhasedMatrix(A, phase)
    B = witness.to_complex()
    scale = np.maximum(1.0, A.to_array().T @ lam_f)
    residual = np.abs(lam_f @ B)
    if np.any(residual > WITNESS_RESIDUAL_TOL * scale):
        raise RuntimeError(f"witness residual {residual.max():.3e} exceeds tolerance")
    return witness


def witness_residuals(witness, weights):
    lam = np.array([float(x) for x in weights])
    return np.abs(lam @ witness.to_complex())


# -- exact permutation search ---------------------------------------------------

def _mmatrix_permutation(S):
    """First permutation (lexicographic) making comparison(S P) a nonsingular M-matrix."""
    ints, _ = integer_matrix(S.rows)
    n = len(ints)

    def minor_positive(prefix):
        k = len(prefix)
        sub = [[ints[i][prefix[j]] if i == j else -ints[i][prefix[j]] for j in range(k)] for i in range(k)]
        return bareiss_det(sub) > 0

    def search(prefix, used):
        if len(prefix) == n:
            return prefix
        for c in range(n):
            if c in used:
                continue
            cand = prefix + [c]
            if minor_positive(cand):
                found = search(cand, used | {c})
                if found:
                    return found
        return None

    return search([], frozenset())


def _maximal_certificate(S):
    perm = _mmatrix_permutation(S)
    if perm is None:
        return None
    Z = [[v if i == j else -v for j, v in enumerate(row)] for i, row in enumerate(S.permute_columns(perm).rows)]
    d = positive_vector_certificate(Z)
    if d is None:
        raise RuntimeError("leading minors positive but no positive vector found")
    return tuple(perm), tuple(d)


def decide_by_permutations(A):
    """Square-only oracle: search all column permutations for an M-matrix."""
    A = _as_matrix(A)
    n, m = A.shape
    if n != m:
        raise DimensionError("permutation search needs a square matrix")
    if n > MAX_PERMUTATION_SIZE:
        raise CapabilityError(f"n={n} exceeds the permutation search limit {MAX_PERMUTATION_SIZE}")
    cert = _maximal_certificate(A)
    if cert is None:
        return Nonmaximal()
    return Maximal(cert[0], cert[1], columns=tuple(range(n)))


# -- main decision ----------------------------------------------------------------

def _nonmax_weights(W):
    """Weights certifying nonmaximality of ``W`` (rows <= cols), or the Farkas outcome."""
    n = W.n_rows
    zero = W.zero_rows()
    if zero:
        return WeightVector.indicator(n, zero[0]), None
    uniform = WeightVector.uniform(n)
    if all(lop_membership(col, uniform) for col in W.columns()):
        return uniform, None
    out = lp_feasible(nonmax_system(W))
    if isinstance(out, Feasible):
        return WeightVector(out.point), None
    return None, out


def _decide_oriented(W, transposed, with_witness=True):
    lam, farkas = _nonmax_weights(W)
    if lam is not None:
        witness = None
        if with_witness:
            witness = build_witness(W, lam)
            if transposed:
                witness = witness.T
        return Nonmaximal(lam, witness, transposed)
    n, m = W.shape
    if n == m:
        cert = _maximal_certificate(W)
        if cert is None:
            raise RuntimeError("LP infeasible but no M-matrix permutation exists")
        return Maximal(cert[0], cert[1], tuple(range(n)), farkas, transposed)
    for cols in itertools.combinations(range(m), n):
        S = W.submatrix(cols=cols)
        if _nonmax_weights(S)[0] is None:
            cert = _maximal_certificate(S)
            return Maximal(cert[0], cert[1], cols, farkas, transposed)
    raise RuntimeError("LP infeasible but every square submatrix is nonmaximal")


def _perturbation_pattern(W, decision):
    n, m = W.shape
    if decision.is_nonmaximal:
        lam = decision.weights
        top = [max(range(n), key=lambda k: lam[k] * W[k, j]) for j in range(m)]
        return [[1 if top[j] == i else -1 for j in range(m)] for i in range(n)]
    diag = {(k, decision.columns[decision.permutation[k]]) for k in range(n)}
    return [[-1 if (i, j) in diag else 1 for j in range(m)] for i in range(n)]


def _boundary_uncertain(W, transposed, decision):
    sign = _perturbation_pattern(W, decision)
    moved = NonnegMatrix([[max(v + BOUNDARY_EPS * s, 0) for v, s in zip(row, srow)]
                          for row, srow in zip(W.rows, sign)])
    return _decide_oriented(moved, transposed, with_witness=False).is_nonmaximal != decision.is_nonmaximal


def decide_nonmaximal(A):
    """Decide whether the phaseless rank of ``A`` is below ``min(n, m)``.

    Returns :class:`Nonmaximal` with weights and an equimodular witness, or
    :class:`Maximal` with a permutation and scaling vector. For approximate
    (rationalized) inputs the verdict is flagged ``boundary_uncertain`` when
    an entry perturbation of ``1e-10`` flips it.
    """
    A = _as_matrix(A)
    W, transposed = _oriented(A)
    decision = _decide_oriented(W, transposed)
    if A.approximate and _boundary_uncertain(W, transposed, decision):
        decision = type(decision)(**{**decision.__dict__, "boundary_uncertain": True})
    return decision


def is_nonmaximal(A):
    """Verdict of :func:`decide_nonmaximal` without building certificates."""
    W, _ = _oriented(_as_matrix(A))
    return _nonmax_weights(W)[0] is not None


def verify_decision(A, decision):
    """Re-check a decision's certificate against ``A``."""
    A = _as_matrix(A)
    W, transposed = _oriented(A)
    if decision.transposed != transposed:
        return False
    if decision.is_nonmaximal:
        if decision.weights is None:
            return False
        if not all(lop_membership(col, decision.weights) for col in W.columns()):
            return False
        B = decision.witness.T if transposed else decision.witness
        if B.modulus != W:
            return False
        scale = np.maximum(1.0, W.to_array().T @ np.array([float(x) for x in decision.weights]))
        if np.any(witness_residuals(B, decision.weights) > WITNESS_RESIDUAL_TOL * scale):
            return False
        return numerical_rank(B, WITNESS_RANK_TOL) < min(A.shape)
    S = W.submatrix(cols=decision.columns).permute_columns(decision.permutation)
    d = decision.scaling
    if any(x <= 0 for x in d):
        return False
    for i, row in enumerate(S.rows):
        if sum((v if i == j else -v) * d[j] for j, v in enumerate(row)) <= 0:
            return False
    return True


def decide_by_submatrices(A):
    """True iff every maximal square column-submatrix has nonmaximal phaseless rank."""
    A = _as_matrix(A)
    W, _ = _oriented(A)
    n, m = W.shape
    return all(
        decide_nonmaximal(W.submatrix(cols=cols)).is_nonmaximal
        for cols in itertools.combinations(range(m), n)
    )


# -- bounds -------------------------------------------------------------------------

def upper_bound_patching(A, k, check_all=False):
    """Witness of rank at most ``n - (n-1)//(k-1)`` assembled from row blocks.

    The blocks are ``k``-row slices sharing the first nonzero row and
    otherwise disjoint; each must have nonmaximal phaseless rank. With
    ``check_all`` every ``k``-row slice is tested first, which is the full
    hypothesis of the bound.
    """
    A = _as_matrix(A)
    W, transposed = _oriented(A)
    n, m = W.shape
    if not 2 <= k <= n:
        raise DomainError(f"need 2 <= k <= {n}, got k={k}")
    shared = next((i for i in range(n) if any(W.row(i))), None)
    if shared is None:
        raise ValueError("the zero matrix has no patching witness")
    others = [i for i in range(n) if i != shared]
    q = (n - 1) // (k - 1)
    blocks = [[shared] + others[b * (k - 1):(b + 1) * (k - 1)] for b in range(q)]
    if check_all:
        for rows in itertools.combinations(range(n), k):
            if _nonmax_weights(W.submatrix(rows=rows))[0] is None:
                raise BoundInapplicable(f"rows {rows} have maximal phaseless rank", block=rows)
    phase = np.zeros((n, m))
    for rows in blocks:
        block = W.submatrix(rows=rows)
        lam, _ = _nonmax_weights(block)
        if lam is None:
            raise BoundInapplicable(f"rows {tuple(rows)} have maximal phaseless rank", block=tuple(rows))
        phase[rows, :] = build_witness(block, lam).phase
    witness = PhasedMatrix(W, phase)
    if transposed:
        witness = witness.T
    bound = n - q
    if numerical_rank(witness, WITNESS_RANK_TOL) > bound:
        raise RuntimeError("patched witness exceeds its rank bound")
    return bound, witness


def _ceil_sqrt(r):
    s = math.isqrt(r)
    return s if s * s == r else s + 1


def lower_bound_hadamard(A):
    """``ceil(sqrt(rank(A o A)))``."""
    A = _as_matrix(A)
    return _ceil_sqrt(rational_rank(A.hadamard_square()))


def signless_lower_bound(A):
    """Smallest ``s`` with ``s (s + 1) / 2 >= rank(A o A)``."""
    A = _as_matrix(A)
    r = rational_rank(A.hadamard_square())
    s = 0
    while s * (s + 1) // 2 < r:
        s += 1
    return s


def _sign_forest(nonzero, n, m):
    parent = list(range(n + m))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    free = []
    for i, j in nonzero:
        a, b = find(i), find(n + j)
        if a == b:
            free.append((i, j))
        else:
            parent[a] = b
    return free


def signless_rank_bruteforce(A, max_sign_bits=MAX_SIGN_BITS):
    """Minimum rank over all real sign patterns on the entries of ``A``.

    Signs on a spanning forest of the nonzero pattern can be fixed by row and
    column flips, so only the remaining entries are enumerated.
    """
    A = _as_matrix(A)
    n, m = A.shape
    base = integer_rows(A.rows)
    nonzero = [(i, j) for i in range(n) for j in range(m) if base[i][j]]
    if not nonzero:
        return 0
    free = _sign_forest(nonzero, n, m)
    if len(free) > max_sign_bits:
        raise CapabilityError(f"{len(free)} free signs exceed the limit {max_sign_bits}")
    floor = max(1, signless_lower_bound(A))
    best = bareiss_rank(base)
    for mask in range(1, 1 << len(free)):
        if best <= floor:
            break
        rows = [list(r) for r in base]
        for bit, (i, j) in enumerate(free):
            if mask >> bit & 1:
                rows[i][j] = -rows[i][j]
        best = min(best, bareiss_rank(rows))
    return best


def phase_local_search(A, target, restarts=20, seed=0, max_iter=3000):
    """Search phases for an equimodular matrix of rank at most ``target``.

    Alternates between the best rank-``target`` approximation and the
    nearest matrix with the prescribed moduli, which decreases the squared
    tail singular values monotonically. Returns a verified witness or None.
    """
    A = _as_matrix(A)
    n, m = A.shape
    if not 1 <= target < min(n, m):
        raise DomainError(f"target must lie in [1, {min(n, m) - 1}]")
    rng = np.random.default_rng(seed)
    M = A.to_array()
    for _ in range(restarts):
        theta = rng.uniform(0.0, 2.0 * np.pi, size=M.shape)
        prev_tail = np.inf
        for it in range(max_iter):
            B = M * np.exp(1j * theta)
            U, s, Vh = np.linalg.svd(B, full_matrices=False)
            tail = float(np.sum(s[target:] ** 2))
            if s[target] <= 1e-12 * max(s[0], 1.0):
                break
            if it % 200 == 199:
                if tail > 0.999 * prev_tail and tail > 1e-6 * s[0] ** 2:
                    break
                prev_tail = tail
            X = (U[:, :target] * s[:target]) @ Vh[:target]
            theta = np.angle(X)
        witness = PhasedMatrix(A, theta)
        if numerical_rank(witness, WITNESS_RANK_TOL) <= target:
            return witness
    return None


def bracket(A, effort="low", seed=0, restarts=20):
    """Lower and upper bounds on the phaseless rank, each with its source."""
    A = _as_matrix(A)
    if A.is_zero():
        raise ValueError("the zero matrix has phaseless rank 0")
    if effort not in ("low", "high"):
        raise ValueError(f"unknown effort {effort!r}")
    W, _ = _oriented(A)
    n = W.n_rows
    r = rational_rank(A)
    if r == 1:
        return Bracket(1, 1, LowerSource.RANK_ONE, UpperSource.TRIVIAL_MIN, upper_witness=PhasedMatrix.real(A))

    decision = decide_nonmaximal(A)
    lowers = [(2, LowerSource.RANK_ONE), (lower_bound_hadamard(A), LowerSource.HADAMARD_SQUARE)]
    if not decision.is_nonmaximal:
        lowers.append((n, LowerSource.MAXIMALITY))
    lower, lower_source = max(lowers, key=lambda t: t[0])

    # (bound, source, k, witness); the first minimum wins, so patching takes ties
    uppers = []
    if decision.is_nonmaximal:
        for k in range(2, n):
            try:
                bound, witness = upper_bound_patching(A, k)
            except BoundInapplicable:
                continue
            uppers.append((bound, UpperSource.PATCHING, k, witness))
        uppers.append((n - 1, UpperSource.NONMAX_DIRECT, None, decision.witness))
    if r < n:
        uppers.append((r, UpperSource.TRIVIAL_MIN, None, PhasedMatrix.real(A)))
    uppers.append((n, UpperSource.TRIVIAL_MIN, None, None))
    upper, upper_source, k_used, witness = min(uppers, key=lambda t: t[0])

    if effort == "high":
        for target in range(lower, upper):
            found = phase_local_search(A, target, restarts=restarts, seed=seed)
            if found is not None:
                upper, upper_source, k_used, witness = target, UpperSource.LOCAL_SEARCH, None, found
                break
    if lower > upper:
        raise RuntimeError(f"inconsistent bracket [{lower}, {upper}]")
    return Bracket(lower, upper, lower_source, upper_source, k_used, witness)


def typical_rank_bounds(n, m):
    """Bounds on the minimal typical phaseless rank of ``n x m`` matrices."""
    if not 3 <= n <= m:
        raise DomainError(f"need 3 <= n <= m, got ({n}, {m})")
    s = (n - 1) ** 2 + (m - 1) ** 2
    lower = 1
    # smallest k with n + m - 2k <= sqrt(s)
    while n + m - 2 * lower > 0 and (n + m - 2 * lower) ** 2 > s:
        lower += 1
    return lower, (n + 2) // 2


def amoeba_membership(point, n, m, log_scale=False):
    """Membership of an ``n*m`` point in the (unlog) amoeba of maximal minors."""
    values = list(point)
    if len(values) != n * m:
        raise DimensionError(f"point has {len(values)} coordinates, expected {n * m}")
    if log_scale:
        if not all(math.isfinite(float(v)) for v in values):
            raise ValueError("log coordinates must be finite (zero moduli have no logarithm)")
        entries = [rationalize(math.exp(float(v))) for v in values]
        approximate = True
    else:
        entries = [Fraction(v) if not isinstance(v, float) else rationalize(v) for v in values]
        approximate = False
    A = NonnegMatrix([entries[i * m:(i + 1) * m] for i in range(n)], approximate=approximate)
    return decide_nonmaximal(A).is_nonmaximal
