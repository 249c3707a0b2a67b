"""O_F-lattices inside a cyclic algebra: orders, ideals, discriminants.

A lattice stores integral coordinate rows w.r.t. the ambient basis
{u^a e^b} together with one positive integer denominator, normalized to
canonical HNF at construction, so equal modules compare equal bitwise.

Discriminants are determinants of the reduced-trace Gram matrix, computed
fraction-free and reported as canonical associates with factorization and
fundamental-parallelotope measure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .algebra import AlgebraDescriptor, AlgebraElem
from .errors import (
    NonIntegralGamma,
    NotASquare,
    NotDivisible,
    NumericallySingular,
    RankDeficient,
)
from .fields import FieldElem
from .scalars import (
    QuadScalar,
    canonical_associate,
    euclid_divmod,
    factor_scalar,
    integer,
    valuation_at,
    zero,
)
from . import zlinalg


def _lcm(a, b):
    return a * b // math.gcd(a, b)


class OFLattice:
    """Finitely generated O_F-module in an algebra, in canonical HNF form."""

    def __init__(self, algebra: AlgebraDescriptor, rows, den: int, pivots=None):
        self.algebra = algebra
        self.den = den
        if pivots is None:
            rows, pivots = zlinalg.hnf(rows)
        rows, den = _normalize_content(rows, den)
        self.rows = tuple(tuple(r) for r in rows)
        self.pivots = tuple(pivots)

    # -- constructors -----------------------------------------------------------

    @staticmethod
    def from_elements(algebra, elems):
        if not elems:
            raise ValueError("empty generating set")
        vecs = [e.ambient_vector() for e in elems]
        den = 1
        for v in vecs:
            for c in v:
                den = _lcm(den, c.den)
        d = integer(algebra.center, den)
        rows = [[c * d for c in v] for v in vecs]
        return OFLattice(algebra, rows, den)

    @staticmethod
    def from_rows(algebra, rows, den=1):
        return OFLattice(algebra, rows, den)

    # -- views -------------------------------------------------------------------

    @property
    def rank(self):
        return len(self.rows)

    def is_full_rank(self):
        return self.rank == self.algebra.ambient_dim()

    def _require_full(self):
        if not self.is_full_rank():
            raise RankDeficient(
                f"lattice rank {self.rank} < {self.algebra.ambient_dim()}")

    def basis_elements(self):
        """Basis as AlgebraElems (HNF rows over the denominator)."""
        out = []
        n = self.algebra.n
        ext = self.algebra.extension
        d = self.den
        for row in self.rows:
            coords = []
            for a in range(n):
                coeffs = [QuadScalar(c.center, c.x, c.y, c.den * d)
                          for c in row[a * n:(a + 1) * n]]
                coords.append(FieldElem(ext, coeffs))
            out.append(AlgebraElem(self.algebra, coords))
        return out

    def __eq__(self, other):
        return (
            isinstance(other, OFLattice)
            and self.algebra is other.algebra
            and self.den == other.den
            and self.pivots == other.pivots
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((id(self.algebra), self.den,
                     tuple(c.key() for r in self.rows for c in r)))

    def key(self):
        return (self.den, tuple(tuple(c.key() for c in r) for r in self.rows))

    # -- membership ----------------------------------------------------------------

    def membership(self, x: AlgebraElem):
        """(is_member, exact coefficient vector over the stored basis or None)."""
        if not self.rows:
            raise RankDeficient("membership in the zero module")
        vec = x.ambient_vector()
        d = integer(self.algebra.center, self.den)
        scaled = [c * d for c in vec]
        coeffs = zlinalg.hnf_solve(list(map(list, self.rows)), self.pivots, scaled)
        if coeffs is None:
            return False, None
        return True, coeffs

    def contains(self, x: AlgebraElem) -> bool:
        return self.membership(x)[0]

    def contains_lattice(self, other: "OFLattice") -> bool:
        return all(self.contains(b) for b in other.basis_elements())

    # -- module arithmetic ------------------------------------------------------------

    def scaled(self, s: QuadScalar) -> "OFLattice":
        """The module s*L."""
        num = QuadScalar(s.center, s.x, s.y, 1)
        rows = [[c * num for c in row] for row in self.rows]
        return OFLattice(self.algebra, rows, self.den * s.den)

    def plus(self, other: "OFLattice") -> "OFLattice":
        den = _lcm(self.den, other.den)
        fa = integer(self.algebra.center, den // self.den)
        fb = integer(self.algebra.center, den // other.den)
        rows = [[c * fa for c in row] for row in self.rows]
        rows += [[c * fb for c in row] for row in other.rows]
        return OFLattice(self.algebra, rows, den)

    def intersect(self, other: "OFLattice") -> "OFLattice":
        """Stacked-HNF kernel construction of the module intersection."""
        den = _lcm(self.den, other.den)
        fa = integer(self.algebra.center, den // self.den)
        fb = integer(self.algebra.center, den // other.den)
        m = self.algebra.ambient_dim()
        z = zero(self.algebra.center)
        stacked = []
        for row in self.rows:
            s = [c * fa for c in row]
            stacked.append(s + s)
        for row in other.rows:
            s = [c * fb for c in row]
            stacked.append(s + [z] * m)
        h, pivots = zlinalg.hnf(stacked)
        keep = [r[m:] for r, p in zip(h, pivots) if p >= m]
        return OFLattice(self.algebra, keep, den)

    # -- invariants ---------------------------------------------------------------------

    def trace_gram(self):
        """Matrix of reduced traces tr(b_i b_j) over the basis, exact."""
        elems = self.basis_elements()
        n = self.algebra.n
        ext = self.algebra.extension
        gamma = self.algebra.gamma
        k = len(elems)
        # precompute sigma^c applied to every coordinate of every element
        sig = [[[ext.apply_sigma(e.coords[i], c) for i in range(n)] for c in range(n)]
               for e in elems]
        gram = [[None] * k for _ in range(k)]
        for i in range(k):
            for j in range(i, k):
                a = sig[i]
                b = elems[j]
                # u^0-component of a*b: x0*y0 + gamma * sum sigma^(n-t)(x_t) y_(n-t)
                acc = a[0][0] * b.coords[0]
                for t in range(1, n):
                    acc = acc + (a[n - t][t] * b.coords[n - t]).scale(gamma)
                tr = acc.rel_trace()
                gram[i][j] = tr
                gram[j][i] = tr
        return gram

    def discriminant(self) -> "DiscriminantValue":
        self._require_full()
        gram = self.trace_gram()
        den = 1
        for row in gram:
            for c in row:
                den = _lcm(den, c.den)
        d = integer(self.algebra.center, den)
        int_rows = [[c * d for c in row] for row in gram]
        det = zlinalg.bareiss_det(int_rows)
        if det.is_zero():
            raise RankDeficient("degenerate trace form")
        m = len(gram)
        det = QuadScalar(det.center, det.x, det.y, det.den * den ** m)
        return DiscriminantValue.from_scalar(det, self.algebra)

    def gram_and_measure_numeric(self):
        """Real Gram of the Z-basis {B, theta*B} and sqrt(det) via embeddings."""
        import numpy as np

        self._require_full()
        elems = self.basis_elements()
        theta = self.algebra.center.theta_complex()
        mats = [e.numeric_matrix() for e in elems]
        vecs = []
        for x in mats:
            vecs.append(np.concatenate([x.real.ravel(), x.imag.ravel()]))
        for x in mats:
            tx = theta * x
            vecs.append(np.concatenate([tx.real.ravel(), tx.imag.ravel()]))
        m = np.array(vecs)
        g = m @ m.T
        det = float(np.linalg.det(g))
        if det < 1e-30:
            raise NumericallySingular(f"Gram determinant {det}")
        return g, math.sqrt(det)

    # -- serialization ----------------------------------------------------------------------

    def to_json(self):
        return {
            "algebra": self.algebra.name,
            "denominator": self.den,
            "coordinate_rows": [[c.to_json() for c in row] for row in self.rows],
        }

    @staticmethod
    def from_json(doc, algebra):
        rows = [[QuadScalar.from_json(c) for c in row] for row in doc["coordinate_rows"]]
        return OFLattice(algebra, rows, doc["denominator"])

    def __repr__(self):
        return f"OFLattice({self.algebra.name}, rank={self.rank}, den={self.den})"


def _normalize_content(rows, den):
    g = den
    for r in rows:
        for c in r:
            g = math.gcd(g, math.gcd(abs(c.x), abs(c.y)))
            if g == 1:
                return rows, den
    if g <= 1:
        return rows, den
    new = [[QuadScalar(c.center, c.x // g, c.y // g, 1) for c in r] for r in rows]
    return new, den // g


@dataclass(frozen=True)
class ExactMeasure:
    """Fundamental parallelotope hypervolume, exact where possible."""

    squared: Fraction
    rational: Fraction | None

    @property
    def value(self) -> float:
        if self.rational is not None:
            return float(self.rational)
        return math.sqrt(self.squared)

    @staticmethod
    def from_squared(sq: Fraction):
        num = _exact_sqrt(sq.numerator)
        den = _exact_sqrt(sq.denominator)
        r = Fraction(num, den) if num is not None and den is not None else None
        return ExactMeasure(squared=sq, rational=r)


def _exact_sqrt(n: int):
    r = math.isqrt(n)
    return r if r * r == n else None


# discriminants are defined up to units; this flag records that the stored
# canonical associate is one representative of the class
UNIT_AMBIGUITY = True


@dataclass(frozen=True)
class DiscriminantValue:
    canon: QuadScalar
    factorization: object  # ScalarFactorization or None for non-integral values
    norm: Fraction
    degree_n: int
    unit_ambiguity: bool = UNIT_AMBIGUITY

    @staticmethod
    def from_scalar(d: QuadScalar, algebra=None, degree_n=None):
        canon, _ = canonical_associate(d)
        n = algebra.n if algebra is not None else degree_n
        fact = factor_scalar(canon) if canon.is_integral() else None
        return DiscriminantValue(
            canon=canon, factorization=fact, norm=canon.norm(), degree_n=n)

    def measure(self) -> ExactMeasure:
        """|d| over Q(i); (sqrt3/2)^(n^2) |d| over Q(w)."""
        sq = self.norm * self.canon.center.imag_theta_sq ** (self.degree_n ** 2)
        return ExactMeasure.from_squared(sq)

    def divides(self, other: "DiscriminantValue") -> bool:
        _, r = euclid_divmod(other.canon, self.canon)
        return r.is_zero()

    def to_json(self):
        return {
            "canon": self.canon.to_json(),
            "norm_num": self.norm.numerator,
            "norm_den": self.norm.denominator,
            "factorization": self.factorization.to_json() if self.factorization else None,
            "measure": self.measure().value,
        }


def measure_of_scalar(d: QuadScalar, degree_n: int) -> ExactMeasure:
    """Parallelotope measure of a discriminant given as a bare scalar."""
    sq = d.norm() * d.center.imag_theta_sq ** (degree_n ** 2)
    return ExactMeasure.from_squared(sq)


# -- orders ----------------------------------------------------------------------


def natural_order(algebra: AlgebraDescriptor, oe_basis=None) -> OFLattice:
    """O_E + u O_E + ... + u^(n-1) O_E for integral gamma."""
    if not algebra.gamma.is_integral():
        raise NonIntegralGamma(
            f"gamma = {algebra.gamma} is not integral; the module is not closed")
    if oe_basis is None:
        oe_basis = algebra.extension.oe_basis
    if oe_basis is None:
        raise ValueError("no ring-of-integers basis available")
    elems = []
    n = algebra.n
    for i in range(n):
        for b in oe_basis:
            coords = [algebra.extension.zero_elem()] * n
            coords[i] = b
            elems.append(AlgebraElem(algebra, coords))
    return OFLattice.from_elements(algebra, elems)


def is_order(lat: OFLattice):
    """(flag, witness): checks 1 in L and closure of basis products."""
    lat._require_full()
    if not lat.contains(lat.algebra.one()):
        return False, ("identity", None)
    elems = lat.basis_elements()
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            p = a * b
            if not lat.contains(p):
                return False, ((i, j), p)
    return True, None


# -- closed-form discriminants -------------------------------------------------------


def natural_discriminant_formula(d_ef: QuadScalar, gamma: QuadScalar, n: int) -> QuadScalar:
    """d(E/F)^n * gamma^(n(n-1)), canonicalized."""
    v = d_ef ** n * gamma ** (n * (n - 1))
    return canonical_associate(v)[0]


def cyclotomic_relative_discriminant(ell: int, center=None) -> QuadScalar:
    """(1+i)^(2n(ell-2)) with n = 2^(ell-2), for the 2-power cyclotomic tower."""
    from .scalars import QI

    if ell < 2:
        raise ValueError("ell must be at least 2")
    if center is None:
        center = QI
    n = 2 ** (ell - 2)
    p = QuadScalar(center, 1, 1, 1)
    return canonical_associate(p ** (2 * n * (ell - 2)))[0]


# -- index laws ----------------------------------------------------------------------


def index_from_discriminants(d_sub: DiscriminantValue, d_super: DiscriminantValue) -> int:
    """Group index [super : sub] = sqrt(N(d_sub)/N(d_super))."""
    if not d_super.divides(d_sub):
        raise NotDivisible(f"{d_super.canon} does not divide {d_sub.canon}")
    ratio = d_sub.norm / d_super.norm
    if ratio.denominator != 1:
        raise NotDivisible("norm ratio is not an integer")
    r = _exact_sqrt(ratio.numerator)
    if r is None:
        raise NotASquare(f"norm ratio {ratio} is not a perfect square")
    return r


def module_index_from_discriminants(d_sub: DiscriminantValue,
                                    d_super: DiscriminantValue) -> QuadScalar:
    """O_F-module index: canonical square root of d_sub/d_super as an element."""
    q, r = euclid_divmod(d_sub.canon, d_super.canon)
    if not r.is_zero():
        raise NotDivisible(f"{d_super.canon} does not divide {d_sub.canon}")
    f = factor_scalar(q)
    root = QuadScalar(q.center, 1, 0, 1)
    for p, e in f.factors:
        if e % 2:
            raise NotASquare(f"odd exponent at {p} in index quotient")
        root = root * p ** (e // 2)
    return canonical_associate(root)[0]


def index_of_sublattice(sub: OFLattice, sup: OFLattice) -> int:
    """Additive group index via HNF pivot norms; requires containment."""
    sub._require_full()
    sup._require_full()
    if not sup.contains_lattice(sub):
        raise NotDivisible("not a sublattice")
    num = 1
    for row, col in zip(sub.rows, sub.pivots):
        num *= row[col].norm_int()
    den = 1
    for row, col in zip(sup.rows, sup.pivots):
        den *= row[col].norm_int()
    # account for the two denominators: index scales by (d_sup/d_sub)^(2k)
    k = sub.rank
    scale = Fraction(sup.den, sub.den) ** (2 * k)
    v = Fraction(num, den) * scale
    assert v.denominator == 1
    return v.numerator


def valuation_of_discriminant(d: DiscriminantValue, p: QuadScalar) -> int:
    return valuation_at(d.canon, p)
