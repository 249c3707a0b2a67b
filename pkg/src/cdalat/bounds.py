"""Closed-form minimal discriminants and parallelotope measures.

The discriminant of a division algebra is determined by its local indices;
the smallest achievable value for a given center and index concentrates the
nontrivial local data at the two smallest primes of the center.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InconsistentIndices
from .lattices import ExactMeasure, measure_of_scalar
from .scalars import GAUSS, QuadScalar, canonical_associate


@dataclass(frozen=True)
class LocalDatum:
    prime: QuadScalar
    m: int  # local index; divides the algebra degree when used in the formula


def smallest_primes(center):
    """The two smallest primes of O_F as canonical associates.

    Q(i): 1+i and 2+i (norms 2, 5); the conjugate 2-i has equal norm, the
    representative is fixed for determinism.  Q(w): the ramified prime above
    3 and the inert 2 (norms 3, 4).
    """
    if center.tag == GAUSS:
        p1 = canonical_associate(QuadScalar(center, 1, 1, 1))[0]
        p2 = canonical_associate(QuadScalar(center, 2, 1, 1))[0]
    else:
        p1 = canonical_associate(QuadScalar(center, 1, -1, 1))[0]  # above 3
        p2 = QuadScalar(center, 2, 0, 1)
    return p1, p2


def discriminant_from_local_data(data, n: int) -> QuadScalar:
    """prod P^((m_P - 1) n^2 / m_P), canonicalized; lcm of the m_P must be n."""
    l = 1
    for d in data:
        if d.m < 1 or n % d.m != 0:
            raise InconsistentIndices(f"local index {d.m} does not divide {n}")
        l = l * d.m // math.gcd(l, d.m)
    if l != n:
        raise InconsistentIndices(f"lcm of local indices is {l}, not {n}")
    acc = None
    for d in data:
        e = (d.m - 1) * (n * n // d.m)
        t = d.prime ** e
        acc = t if acc is None else acc * t
    if acc is None:
        raise InconsistentIndices("empty local data")
    return canonical_associate(acc)[0]


def minimal_discriminant(center, n: int) -> QuadScalar:
    """(P1 P2)^(n(n-1)) at the two smallest primes of the center."""
    p1, p2 = smallest_primes(center)
    return canonical_associate((p1 * p2) ** (n * (n - 1)))[0]


def minimal_measure(center, n: int) -> ExactMeasure:
    return measure_of_scalar(minimal_discriminant(center, n), n)
