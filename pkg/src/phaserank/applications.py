"""Polytope slack matrices, complex psd lifts, equiangular and MUB matrices."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BoundInapplicable, DomainError, InvalidPolytopeError, WitnessInvalidError
from .matrix import NonnegMatrix, PhasedMatrix, _exact_root, as_fraction, hadamard_power, numerical_rank, rational_rank, rationalize
from .rank import decide_nonmaximal, upper_bound_patching

PSD_TOL = 1e-8
MODULUS_TOL = 1e-9


class PolytopeVH:
    """Vertices ``p_i`` and facets ``<a_j, x> <= b_j`` given together."""

    def __init__(self, vertices, facets):
        self.vertices = tuple(tuple(as_fraction(x) for x in v) for v in vertices)
        self.facets = tuple((tuple(as_fraction(x) for x in a), as_fraction(b)) for a, b in facets)
        if not self.vertices or not self.facets:
            raise InvalidPolytopeError("need at least one vertex and one facet")
        dim = len(self.vertices[0])
        if any(len(v) != dim for v in self.vertices) or any(len(a) != dim for a, _ in self.facets):
            raise InvalidPolytopeError("vertices and normals must share one dimension")
        for i, p in enumerate(self.vertices):
            for j, (a, b) in enumerate(self.facets):
                if b - sum(x * y for x, y in zip(a, p)) < 0:
                    raise InvalidPolytopeError(f"vertex {i} violates facet {j}")
        self.ambient_dim = dim

    def __repr__(self):
        return f"PolytopeVH({len(self.vertices)} vertices, {len(self.facets)} facets)"


def slack_matrix(P):
    """``S[i][j] = b_j - <a_j, p_i>``."""
    return NonnegMatrix([[b - sum(x * y for x, y in zip(a, p)) for a, b in P.facets] for p in P.vertices])


def ngon(n):
    """Regular ``n``-gon with vertices rationalized on the unit circle, counterclockwise."""
    if n < 3:
        raise DomainError("a polygon needs at least three vertices")
    pts = [(rationalize(math.cos(2 * math.pi * k / n)), rationalize(math.sin(2 * math.pi * k / n))) for k in range(n)]
    facets = []
    for k in range(n):
        (x0, y0), (x1, y1) = pts[k], pts[(k + 1) % n]
        a = (y1 - y0, x0 - x1)
        facets.append((a, a[0] * x0 + a[1] * y0))
    return PolytopeVH(pts, facets)


def _affine_dim(S):
    return rational_rank(S) - 1


def cpsd_upper_bound(P):
    """``m - (m-1)//(d+1)`` with ``m = min(#vertices, #facets)``."""
    S = slack_matrix(P)
    d = _affine_dim(S)
    m = min(S.shape)
    return m - (m - 1) // (d + 1)


def cpsd_lift_witness(P):
    """Equimodular matrix to the entrywise square root of the slack matrix,
    of rank at most :func:`cpsd_upper_bound`, assembled by row-block patching."""
    S = slack_matrix(P)
    root = hadamard_power(S, Fraction(1, 2))
    k = _affine_dim(S) + 2
    if k > min(S.shape):
        return PhasedMatrix.real(root)
    try:
        _, witness = upper_bound_patching(root, k)
    except BoundInapplicable as exc:
        raise BoundInapplicable(
            f"rationalized square root lost nonmaximality on rows {exc.block}", block=exc.block) from None
    return witness


def equiangular_matrix(n, alpha):
    """Ones on the diagonal, ``alpha`` elsewhere."""
    alpha = as_fraction(alpha)
    if not 0 <= alpha <= 1:
        raise DomainError("alpha must lie in [0, 1]")
    return NonnegMatrix([[1 if i == j else alpha for j in range(n)] for i in range(n)])


def equiangular_certificate(d, alpha):
    """Maximality certificate for the ``(d+1)``-square equiangular matrix when ``alpha < 1/d``."""
    alpha = as_fraction(alpha)
    if alpha < 0 or alpha >= Fraction(1, d):
        raise DomainError(f"only 0 <= alpha < 1/{d} is covered, got {alpha}")
    decision = decide_nonmaximal(equiangular_matrix(d + 1, alpha))
    if decision.is_nonmaximal:
        raise RuntimeError("lopsided columns should force maximal phaseless rank")
    return decision


def small_angle_equiangular_max(d, alpha):
    """Maximum number of complex equiangular lines in dimension ``d`` at small angle."""
    equiangular_certificate(d, alpha)
    return d


def mub_matrix(d, k):
    """``k x k`` blocks of size ``d``: identities on the diagonal, ``1/sqrt(d)`` elsewhere.

    The exact entrywise square (blocks of ``1``, ``0`` and ``1/d``) is kept
    alongside the possibly rationalized entries.
    """
    if d < 2 or k < 1:
        raise DomainError("need d >= 2 and k >= 1")
    inv = Fraction(1, d)
    root = _exact_root(inv, 2)
    approximate = root is None
    off = rationalize(1 / math.sqrt(d)) if approximate else root
    n = d * k

    def entry(i, j, val):
        if i // d != j // d:
            return val[1]
        return val[0] if i == j else 0

    sq = NonnegMatrix([[entry(i, j, (1, inv)) for j in range(n)] for i in range(n)])
    return NonnegMatrix([[entry(i, j, (1, off)) for j in range(n)] for i in range(n)],
                        approximate=approximate, square=sq)


@dataclass(frozen=True)
class GramWitness:
    gram: PhasedMatrix
    ambient_dim: int

    @classmethod
    def from_vectors(cls, vectors):
        """Gram matrix ``G[i][j] = sum_k v_i[k] * conj(v_j[k])`` of the given vectors."""
        V = np.asarray(vectors, dtype=complex)
        G = V @ V.conj().T
        modulus = [[rationalize(float(abs(z))) for z in row] for row in G]
        phase = np.angle(G)
        phase[np.abs(G) < 1e-14] = 0.0
        np.fill_diagonal(phase, 0.0)
        return cls(PhasedMatrix(NonnegMatrix(modulus, approximate=True), phase), V.shape[1])


def verify_psd_witness(w, A, d):
    """True when ``w`` is Hermitian psd with moduli ``A`` and numerical rank at most ``d``."""
    A = A if isinstance(A, NonnegMatrix) else NonnegMatrix(A)
    G = w.gram.to_complex()
    target = A.to_array()
    if G.shape != target.shape or np.max(np.abs(np.abs(G) - target)) > MODULUS_TOL:
        raise WitnessInvalidError("witness moduli do not match the matrix")
    scale = max(1.0, float(np.abs(G).max()))
    if np.max(np.abs(G - G.conj().T)) > MODULUS_TOL * scale:
        return False
    if np.linalg.eigvalsh((G + G.conj().T) / 2).min() < -PSD_TOL:
        return False
    return numerical_rank(G, PSD_TOL) <= d
