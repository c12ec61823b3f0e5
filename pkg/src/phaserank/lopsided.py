"""Lopsidedness, the weight polytope ``Lop(x)`` and polygon closure.

A list of nonnegative lengths closes into a planar polygon exactly when no
entry exceeds the sum of the others. :func:`close_polygon` constructs such a
polygon explicitly as a list of directions.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import DimensionError, LopsidedError
from .matrix import TWO_PI, as_fraction


class WeightVector:
    """Nonnegative rational weights summing to one."""

    __slots__ = ("weights",)

    def __init__(self, weights):
        w = tuple(as_fraction(x) for x in weights)
        if not w:
            raise DimensionError("empty weight vector")
        if any(x < 0 for x in w):
            raise ValueError("weights must be nonnegative")
        if sum(w) != 1:
            raise ValueError(f"weights sum to {sum(w)}, not 1")
        self.weights = w

    @classmethod
    def uniform(cls, n):
        return cls([Fraction(1, n)] * n)

    @classmethod
    def indicator(cls, n, i):
        return cls([int(k == i) for k in range(n)])

    def __len__(self):
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    def __getitem__(self, i):
        return self.weights[i]

    def __eq__(self, other):
        if isinstance(other, WeightVector):
            return self.weights == other.weights
        return NotImplemented

    def __hash__(self):
        return hash(self.weights)

    def __repr__(self):
        return f"WeightVector({', '.join(str(x) for x in self.weights)})"


def _dominant(values):
    i = max(range(len(values)), key=lambda k: values[k])
    return i, values[i], sum(values) - values[i]


def is_lopsided(values):
    """True when the largest entry exceeds the sum of the rest (exact)."""
    if len(values) == 0:
        raise DimensionError("empty list")
    _, top, rest = _dominant(list(values))
    return top > rest


def lop_membership(x, y):
    """Whether the products ``x_i * y_i`` satisfy all generalized triangle inequalities."""
    y = y.weights if isinstance(y, WeightVector) else tuple(as_fraction(v) for v in y)
    x = [as_fraction(v) for v in x]
    if len(x) != len(y):
        raise DimensionError(f"length mismatch {len(x)} != {len(y)}")
    prod = [a * b for a, b in zip(x, y)]
    total = sum(prod)
    return all(2 * p <= total for p in prod)


def close_polygon(values):
    """Directions ``phi`` with ``sum(v_k * exp(i phi_k)) == 0``.

    The largest length points along angle zero. The remaining lengths are
    split greedily, in descending order, into two groups of sums ``b`` and
    ``c``; the three totals form a (possibly flat) triangle, and each group
    takes the direction of its side.
    """
    v = [float(x) for x in values]
    n = len(v)
    if n == 0:
        raise DimensionError("empty list")
    if any(x < 0 for x in v):
        raise ValueError("lengths must be nonnegative")
    exact = [x if isinstance(x, Fraction) else Fraction(x) for x in values]
    if is_lopsided(exact):
        i, top, rest = _dominant(exact)
        raise LopsidedError(f"entry {i} ({top}) exceeds the sum of the others ({rest})", index=i)
    phases = np.zeros(n)
    top_idx = max(range(n), key=lambda k: v[k])
    a = v[top_idx]
    if a == 0.0:
        return phases

    order = sorted((k for k in range(n) if k != top_idx), key=lambda k: (-v[k], k))
    group_b, group_c = [], []
    b = c = 0.0
    for k in order:
        if b <= c:
            group_b.append(k)
            b += v[k]
        else:
            group_c.append(k)
            c += v[k]

    # vertex q: |q - (a, 0)| = b, |q| = c
    qx = (a * a + c * c - b * b) / (2.0 * a)
    qy = math.sqrt(max(c * c - qx * qx, 0.0))
    beta = math.atan2(qy, qx - a)
    gamma = math.atan2(-qy, -qx)
    for k in group_b:
        if v[k] > 0:
            phases[k] = beta % TWO_PI
    for k in group_c:
        if v[k] > 0:
            phases[k] = gamma % TWO_PI
    return phases


def polygon_residual(values, phases):
    v = np.asarray([float(x) for x in values])
    return float(abs(np.sum(v * np.exp(1j * np.asarray(phases)))))
