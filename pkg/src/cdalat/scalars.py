"""Exact arithmetic in Q, Z[i] and Z[w].

The two supported centers are the Gaussian field Q(i) and the Eisenstein
field Q(w), w = (-1+sqrt(-3))/2.  Elements are stored as (x + y*theta)/den
with integer x, y and positive integer den, gcd(x, y, den) = 1.  Eisenstein
elements live in the {1, w} basis so integrality is exactly den == 1.

Provides Euclidean division with a deterministic tie rule, valuations,
factorization into canonical primes, and canonical associates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DivisionByZero,
    FactorBudgetExceeded,
    NonIntegralInput,
    ZeroInput,
)

GAUSS = "qi"
EISENSTEIN = "qomega"

FACTOR_BOUND = 10 ** 6


class Center:
    """One of the two imaginary quadratic centers.

    theta is i (theta^2 = -1) or w (theta^2 = -1 - theta).  imag_theta_sq
    is the exact square of Im(theta): 1 for Q(i), 3/4 for Q(w).
    """

    __slots__ = ("tag", "theta_sq_x", "theta_sq_y", "imag_theta_sq", "unit_coords")

    def __init__(self, tag):
        self.tag = tag
        if tag == GAUSS:
            # theta^2 = -1
            self.theta_sq_x, self.theta_sq_y = -1, 0
            self.imag_theta_sq = Fraction(1)
            self.unit_coords = ((1, 0), (0, 1), (-1, 0), (0, -1))
        elif tag == EISENSTEIN:
            # theta^2 = -1 - theta
            self.theta_sq_x, self.theta_sq_y = -1, -1
            self.imag_theta_sq = Fraction(3, 4)
            self.unit_coords = ((1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1), (1, 1))
        else:
            raise ValueError(f"unknown center tag {tag!r}")

    @property
    def num_units(self):
        return len(self.unit_coords)

    def theta_complex(self):
        if self.tag == GAUSS:
            return 1j
        return complex(-0.5, math.sqrt(3.0) / 2.0)

    def units(self):
        return [QuadScalar(self, x, y) for x, y in self.unit_coords]

    def __repr__(self):
        return f"Center({self.tag})"

    def __eq__(self, other):
        return isinstance(other, Center) and self.tag == other.tag

    def __hash__(self):
        return hash(self.tag)


QI = Center(GAUSS)
QOMEGA = Center(EISENSTEIN)

_CENTERS = {GAUSS: QI, EISENSTEIN: QOMEGA}


def center_by_tag(tag):
    try:
        return _CENTERS[tag]
    except KeyError:
        raise ValueError(f"unknown center tag {tag!r}") from None


class QuadScalar:
    """Element (x + y*theta)/den of Q(i) or Q(w), always in lowest terms."""

    __slots__ = ("center", "x", "y", "den")

    def __init__(self, center, x, y=0, den=1):
        if den == 0:
            raise DivisionByZero("zero denominator")
        if den < 0:
            x, y, den = -x, -y, -den
        if den != 1:
            g = math.gcd(math.gcd(x, y), den)
            if g > 1:
                x //= g
                y //= g
                den //= g
        self.center = center
        self.x = x
        self.y = y
        self.den = den

    # -- constructors --------------------------------------------------------

    @staticmethod
    def from_rationals(center, a, b=Fraction(0)):
        a = Fraction(a)
        b = Fraction(b)
        den = (a.denominator * b.denominator) // math.gcd(a.denominator, b.denominator)
        return QuadScalar(
            center,
            a.numerator * (den // a.denominator),
            b.numerator * (den // b.denominator),
            den,
        )

    # -- views ----------------------------------------------------------------

    @property
    def a(self) -> Fraction:
        """Rational coordinate on 1."""
        return Fraction(self.x, self.den)

    @property
    def b(self) -> Fraction:
        """Rational coordinate on theta."""
        return Fraction(self.y, self.den)

    def is_zero(self):
        return self.x == 0 and self.y == 0

    def is_integral(self):
        return self.den == 1

    def is_unit(self):
        return self.den == 1 and (self.x, self.y) in self.center.unit_coords

    def is_one(self):
        return self.x == 1 and self.y == 0 and self.den == 1

    # -- ring operations ------------------------------------------------------

    def _check(self, other):
        if self.center is not other.center and self.center != other.center:
            raise ValueError("scalars from different centers")

    def __add__(self, other):
        self._check(other)
        return QuadScalar(
            self.center,
            self.x * other.den + other.x * self.den,
            self.y * other.den + other.y * self.den,
            self.den * other.den,
        )

    def __sub__(self, other):
        self._check(other)
        return QuadScalar(
            self.center,
            self.x * other.den - other.x * self.den,
            self.y * other.den - other.y * self.den,
            self.den * other.den,
        )

    def __neg__(self):
        return QuadScalar(self.center, -self.x, -self.y, self.den)

    def __mul__(self, other):
        self._check(other)
        x1, y1, x2, y2 = self.x, self.y, other.x, other.y
        yy = y1 * y2
        c = self.center
        # theta^2 = theta_sq_x + theta_sq_y * theta
        return QuadScalar(
            c,
            x1 * x2 + yy * c.theta_sq_x,
            x1 * y2 + y1 * x2 + yy * c.theta_sq_y,
            self.den * other.den,
        )

    def conj(self):
        """Complex conjugate (the nontrivial automorphism of the center)."""
        if self.center.tag == GAUSS:
            return QuadScalar(self.center, self.x, -self.y, self.den)
        # conj(w) = -1 - w
        return QuadScalar(self.center, self.x - self.y, -self.y, self.den)

    def norm(self) -> Fraction:
        """Field norm to Q; nonnegative, zero only at zero."""
        if self.center.tag == GAUSS:
            n = self.x * self.x + self.y * self.y
        else:
            n = self.x * self.x - self.x * self.y + self.y * self.y
        return Fraction(n, self.den * self.den)

    def norm_int(self) -> int:
        """Norm of an integral element as a plain int."""
        if self.den != 1:
            raise NonIntegralInput(f"{self} is not integral")
        if self.center.tag == GAUSS:
            return self.x * self.x + self.y * self.y
        return self.x * self.x - self.x * self.y + self.y * self.y

    def inverse(self):
        """Multiplicative inverse: den * conj / N of the integer part."""
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        cj = self.conj()
        if self.center.tag == GAUSS:
            n = self.x * self.x + self.y * self.y
        else:
            n = self.x * self.x - self.x * self.y + self.y * self.y
        return QuadScalar(self.center, cj.x * self.den, cj.y * self.den, n)

    def inverse_unit(self):
        """Inverse of a unit (its conjugate)."""
        assert self.is_unit()
        return self.conj()

    def __truediv__(self, other):
        self._check(other)
        if other.is_zero():
            raise DivisionByZero("division by zero scalar")
        if other.center.tag == GAUSS:
            n = other.x * other.x + other.y * other.y
        else:
            n = other.x * other.x - other.x * other.y + other.y * other.y
        prod = self * other.conj()
        return QuadScalar(
            self.center, prod.x * other.den, prod.y * other.den, prod.den * n
        )

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        r = QuadScalar(self.center, 1, 0, 1)
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    # -- comparison / hashing ---------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, QuadScalar)
            and self.center == other.center
            and self.x == other.x
            and self.y == other.y
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.center.tag, self.x, self.y, self.den))

    def key(self):
        """Deterministic sort key."""
        return (self.x, self.y, self.den)

    # -- embeddings -------------------------------------------------------------

    def to_complex(self) -> complex:
        return (self.x + self.y * self.center.theta_complex()) / self.den

    def __repr__(self):
        t = "i" if self.center.tag == GAUSS else "w"
        s = f"{self.x}{'+' if self.y >= 0 else '-'}{abs(self.y)}{t}"
        if self.den != 1:
            s = f"({s})/{self.den}"
        return s

    # -- serialization ------------------------------------------------------------

    def to_json(self):
        d = {
            "re_num": self.a.numerator,
            "re_den": self.a.denominator,
            "im_num": self.b.numerator,
            "im_den": self.b.denominator,
            "center": self.center.tag,
        }
        if self.center.tag == EISENSTEIN:
            d["basis"] = "omega"
        return d

    @staticmethod
    def from_json(d):
        center = center_by_tag(d["center"])
        return QuadScalar.from_rationals(
            center,
            Fraction(d["re_num"], d["re_den"]),
            Fraction(d["im_num"], d["im_den"]),
        )


def integer(center, n):
    return QuadScalar(center, n, 0, 1)


def theta(center):
    return QuadScalar(center, 0, 1, 1)


def zero(center):
    return QuadScalar(center, 0, 0, 1)


def one(center):
    return QuadScalar(center, 1, 0, 1)


# -- Euclidean structure ----------------------------------------------------------


def _round_half_down(num, den):
    """Nearest integer to num/den (den > 0); exact halves go toward -inf."""
    # ceil(t - 1/2) computed in integers: ceil((2*num - den) / (2*den))
    a = 2 * num - den
    b = 2 * den
    return -((-a) // b)


def euclid_divmod(x: QuadScalar, y: QuadScalar):
    """q, r with x = q*y + r, N(r) < N(y); round-to-nearest, ties toward -inf."""
    if y.is_zero():
        raise DivisionByZero("euclid_divmod by zero")
    if not x.is_integral() or not y.is_integral():
        raise NonIntegralInput("euclid_divmod needs integral operands")
    # x/y = x*conj(y)/N(y) with integer N
    n = y.norm_int()
    t = x * y.conj()  # integral, den == 1
    qx = _round_half_down(t.x, n)
    qy = _round_half_down(t.y, n)
    q = QuadScalar(x.center, qx, qy, 1)
    r = x - q * y
    return q, r


def divides(y: QuadScalar, x: QuadScalar) -> bool:
    """True when y | x in the ring of integers."""
    _, r = euclid_divmod(x, y)
    return r.is_zero()


def exact_quotient(x: QuadScalar, y: QuadScalar) -> QuadScalar:
    q, r = euclid_divmod(x, y)
    if not r.is_zero():
        raise NotImplementedError(f"{y} does not divide {x}")
    return q


def gcd(x: QuadScalar, y: QuadScalar) -> QuadScalar:
    """Euclidean gcd, canonicalized."""
    while not y.is_zero():
        _, r = euclid_divmod(x, y)
        x, y = y, r
    if x.is_zero():
        return x
    return canonical_associate(x)[0]


def valuation_at(x: QuadScalar, p: QuadScalar) -> int:
    """Largest e with p^e | x, by repeated exact division."""
    if x.is_zero():
        raise ZeroInput("valuation of zero is +infinity")
    if not x.is_integral():
        raise NonIntegralInput("valuation needs an integral element")
    e = 0
    while True:
        q, r = euclid_divmod(x, p)
        if not r.is_zero():
            return e
        x = q
        e += 1


def canonical_associate(x: QuadScalar):
    """(canon, unit) with canon = x/unit and arg(canon) in [0, pi/2) or [0, pi/3).

    Exactly one associate of a nonzero element lies in the sector, so this is
    a complete system of representatives modulo units.  Idempotent.
    """
    if x.is_zero():
        raise ZeroInput("canonical associate of zero")
    for ux, uy in x.center.unit_coords:
        u = QuadScalar(x.center, ux, uy, 1)
        c = x * u
        if _in_sector(c):
            # c = x*u, so x = c * u^-1: report unit with canon = unit^-1 * x
            return c, u.inverse_unit()
    raise AssertionError("no associate in the fundamental sector")


def _in_sector(c: QuadScalar) -> bool:
    if c.center.tag == GAUSS:
        # arg in [0, pi/2): strictly right half, upper closed at 0
        return c.x > 0 and c.y >= 0
    # Eisenstein: arg in [0, pi/3) <=> y >= 0 and y < x
    return c.y >= 0 and c.y < c.x


@dataclass(frozen=True)
class ScalarFactorization:
    """unit * prod(prime^exp) with canonical primes; reassembles exactly."""

    unit: QuadScalar
    factors: tuple  # ((prime, exponent), ...)

    def reassemble(self) -> QuadScalar:
        r = self.unit
        for p, e in self.factors:
            r = r * p ** e
        return r

    def norm(self) -> int:
        n = 1
        for p, e in self.factors:
            n *= p.norm_int() ** e
        return n

    def support(self):
        return tuple(p for p, _ in self.factors)

    def to_json(self):
        return {
            "unit": self.unit.to_json(),
            "factors": [[p.to_json(), e] for p, e in self.factors],
        }


def _rational_prime_factors(n: int, bound: int):
    """Trial division; raises once a cofactor exceeds bound^2 with no divisor."""
    out = {}
    d = 2
    while d * d <= n:
        if d > bound:
            raise FactorBudgetExceeded(f"prime factor above {bound} in {n}")
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        if n > bound:
            raise FactorBudgetExceeded(f"prime factor {n} above {bound}")
        out[n] = out.get(n, 0) + 1
    return out


def _sqrt_mod(a: int, p: int):
    """Tonelli-Shanks square root of a modulo odd prime p (a assumed QR)."""
    a %= p
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 1, (t * t) % p
        while t2 != 1:
            t2 = (t2 * t2) % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        r = (r * b) % p
        c = (b * b) % p
        t = pow(t * c, 1, p)
        m = i
    return r


def prime_above(center: Center, p: int) -> QuadScalar:
    """A canonical prime of the center dividing the rational prime p."""
    if center.tag == GAUSS:
        if p == 2:
            return canonical_associate(QuadScalar(center, 1, 1, 1))[0]
        if p % 4 == 3:
            return QuadScalar(center, p, 0, 1)
        s = _sqrt_mod(p - 1, p)  # s^2 = -1 mod p
        g = gcd(QuadScalar(center, p, 0, 1), QuadScalar(center, s, -1, 1))
        return g
    if p == 3:
        return canonical_associate(QuadScalar(center, 1, -1, 1))[0]  # 1 - w
    if p % 3 == 2:
        return QuadScalar(center, p, 0, 1)
    # p = 1 mod 3: find s with s^2 + s + 1 = 0 mod p, i.e. s = (-1+sqrt(-3))/2
    t = _sqrt_mod(p - 3, p)  # sqrt(-3)
    s = ((p - 1 + t) * pow(2, p - 2, p)) % p
    return gcd(QuadScalar(center, p, 0, 1), QuadScalar(center, s, -1, 1))


def factor_scalar(x: QuadScalar, bound: int = FACTOR_BOUND) -> ScalarFactorization:
    """Complete factorization into canonical primes via the rational norm."""
    if x.is_zero():
        raise ZeroInput("cannot factor zero")
    if not x.is_integral():
        raise NonIntegralInput("factor_scalar needs an integral element")
    center = x.center
    n = x.norm_int()
    factors = []
    rest = x
    for p in sorted(_rational_prime_factors(n, bound)):
        pi = prime_above(center, p)
        e = valuation_at(x, pi)
        if e:
            factors.append((pi, e))
            for _ in range(e):
                rest = exact_quotient(rest, pi)
        pj = canonical_associate(pi.conj())[0]
        if pj != pi:
            e2 = valuation_at(x, pj)
            if e2:
                factors.append((pj, e2))
                for _ in range(e2):
                    rest = exact_quotient(rest, pj)
    assert rest.is_unit(), f"nonunit cofactor {rest} factoring {x}"
    f = ScalarFactorization(unit=rest, factors=tuple(factors))
    assert f.reassemble() == x
    return f


def residue_representatives(p: QuadScalar):
    """Deterministic complete residue system of O_F mod the prime p.

    Small-coordinate scan; size equals N(p).  Only intended for the small
    primes used in radical searches (N(p) <= 5).
    """
    q = p.norm_int()
    reps = []
    seen = set()
    for a in range(q):
        for b in range(q):
            c = QuadScalar(p.center, a, b, 1)
            _, r = euclid_divmod(c, p)
            k = (r.x, r.y)
            if k not in seen:
                seen.add(k)
                reps.append(c)
            if len(reps) == q:
                return reps
    raise AssertionError(f"found {len(reps)} < {q} residues mod {p}")
