"""Seeded generators of random rings, polynomials and matrices.

Shared by the test-suite and the ``selftest`` query.  The default seed can
be overridden with the ``TORSIONNORM_SEED`` environment variable.
"""

import os
import random

from .scalars import BaseField
from .skew_laurent import SkewLaurentPoly, SkewLaurentRing

DEFAULT_SEED = 20240613


def seed_from_env(default=DEFAULT_SEED):
    value = os.environ.get("TORSIONNORM_SEED")
    return int(value) if value not in (None, "") else default


def rng(seed=None):
    return random.Random(seed_from_env() if seed is None else seed)


def commutative_ring(m):
    return SkewLaurentRing(m=m)


def twisted_ring(m, k=1, commutators=None):
    """K = Q(x) with x -> 1/x for t_1 (and t_3), trivial for t_2.

    Every generator acts by a matrix of order at most two.
    """
    if k == 1:
        mats = [[[-1]] if i % 2 == 0 else [[1]] for i in range(m)]
    else:
        swap = [[0, 1], [1, 0]]
        mats = [swap if i % 2 == 0 else [[1, 0], [0, 1]] for i in range(m)]
    return SkewLaurentRing(BaseField(k, mats), m, commutators)


def random_scalar(r, K, density=0.5, size=3):
    """Small random element of the base field (nonzero)."""
    while True:
        if K.k == 0:
            num = r.randint(-size, size)
            den = r.randint(1, 2)
            if num:
                return K(num) / K(den)
            continue
        num = K.zero
        for _ in range(r.randint(1, 2)):
            exp = tuple(r.randint(0, 1) for _ in range(K.k))
            num = num + K.monomial(exp, r.choice([-2, -1, 1, 2]))
        den = K.one
        if r.random() < density * 0.4:
            exp = tuple(r.randint(0, 1) for _ in range(K.k))
            den = K.monomial(exp, 1) + K(r.choice([-1, 1, 2]))
        if num and den:
            return num / den


def random_poly(r, ring, terms=3, spread=2, scalar_density=0.5, nonzero=True):
    while True:
        out = {}
        for _ in range(r.randint(1, terms)):
            alpha = tuple(r.randint(-spread, spread) for _ in range(ring.m))
            out[alpha] = random_scalar(r, ring.base, scalar_density)
        f = SkewLaurentPoly(ring, out)
        if f or not nonzero:
            return f


def random_phi(r, m, bound=3):
    while True:
        phi = tuple(r.randint(-bound, bound) for _ in range(m))
        if any(phi):
            return phi


def random_matrix(r, ring, n, terms=2, spread=1, zero_prob=0.0):
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            if r.random() < zero_prob:
                row.append(ring.zero)
            else:
                row.append(random_poly(r, ring, terms, spread, scalar_density=0.3))
        rows.append(row)
    return rows
