"""Cyclic extensions E/F of the two quadratic centers.

An extension is presented by a monic minimal polynomial over F, the image of
the power-basis generator under the distinguished automorphism, and a fixed
complex root used for numeric embedding.  Elements are coefficient vectors
over the power basis {1, e, ..., e^(n-1)}.

All arithmetic is exact; the complex embedding is the only float surface.
"""

from __future__ import annotations

from .errors import ExtensionMismatch, NotRational, ZeroInverse
from .scalars import QuadScalar, zero, one


# -- dense polynomial helpers over F (lists of QuadScalar, ascending) --------


def poly_trim(p):
    while p and p[-1].is_zero():
        p.pop()
    return p


def poly_add(p, q):
    if not p:
        return list(q)
    if not q:
        return list(p)
    n = max(len(p), len(q))
    z = zero(p[0].center)
    out = [(p[i] if i < len(p) else z) + (q[i] if i < len(q) else z) for i in range(n)]
    return poly_trim(out)


def poly_scale(p, s):
    return poly_trim([c * s for c in p])


def poly_sub(p, q):
    if not q:
        return list(p)
    n = max(len(p), len(q))
    z = zero(q[0].center)
    out = [(p[i] if i < len(p) else z) - (q[i] if i < len(q) else z) for i in range(n)]
    return poly_trim(out)


def poly_mul(p, q):
    if not p or not q:
        return []
    z = zero(p[0].center)
    out = [z] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a.is_zero():
            continue
        for j, b in enumerate(q):
            if not b.is_zero():
                out[i + j] = out[i + j] + a * b
    return poly_trim(out)


def poly_divmod(p, q):
    """Quotient and remainder over the coefficient field."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    z = zero(q[0].center)
    r = list(p)
    quo = [z] * max(0, len(p) - len(q) + 1)
    inv_lead = q[-1].inverse()
    while len(r) >= len(q):
        c = r[-1] * inv_lead
        d = len(r) - len(q)
        quo[d] = c
        for i, b in enumerate(q):
            r[d + i] = r[d + i] - c * b
        poly_trim(r)
        if len(r) >= len(q) and r[-1].is_zero():
            poly_trim(r)
    return poly_trim(quo), poly_trim(r)


def poly_ext_gcd(p, q):
    """(g, u, v) with u*p + v*q = g, g monic or empty."""
    c = (p or q)[0].center
    r0, r1 = list(p), list(q)
    s0, s1 = [one(c)], []
    t0, t1 = [], [one(c)]
    while r1:
        quo, rem = poly_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, poly_sub(s0, poly_mul(quo, s1))
        t0, t1 = t1, poly_sub(t0, poly_mul(quo, t1))
    if r0:
        lead_inv = r0[-1].inverse()
        r0 = poly_scale(r0, lead_inv)
        s0 = poly_scale(s0, lead_inv)
        t0 = poly_scale(t0, lead_inv)
    return r0, s0, t0


class FieldExtension:
    """Degree-n cyclic extension of a quadratic center with automorphism data."""

    def __init__(self, name, center, degree, minpoly, sigma_image_coeffs,
                 embedding_root, oe_basis_coeffs=None):
        self.name = name
        self.center = center
        self.n = degree
        if len(minpoly) != degree + 1 or not minpoly[-1].is_one():
            raise ValueError("minimal polynomial must be monic of the stated degree")
        self.minpoly = tuple(minpoly)
        self.embedding_root = complex(embedding_root)
        self._zero = zero(center)
        self._one = one(center)
        # nonzero low-order minpoly coefficients, for sparse reduction
        self._red = [(j, minpoly[j]) for j in range(degree) if not minpoly[j].is_zero()]
        self.sigma_image = FieldElem(self, sigma_image_coeffs)
        self._sigma_tables = self._build_sigma_tables()
        self._validate()
        self.oe_basis = None
        if oe_basis_coeffs is not None:
            self.oe_basis = tuple(FieldElem(self, c) for c in oe_basis_coeffs)

    # -- construction helpers ---------------------------------------------------

    def zero_elem(self):
        return FieldElem(self, [self._zero] * self.n)

    def one_elem(self):
        return FieldElem(self, [self._one] + [self._zero] * (self.n - 1))

    def gen(self):
        if self.n == 1:
            raise ValueError("trivial extension has no generator")
        coeffs = [self._zero] * self.n
        coeffs[1] = self._one
        return FieldElem(self, coeffs)

    def from_scalar(self, s: QuadScalar):
        return FieldElem(self, [s] + [self._zero] * (self.n - 1))

    def from_coeff_list(self, coeffs):
        return FieldElem(self, coeffs)

    # -- sigma -------------------------------------------------------------------

    def _build_sigma_tables(self):
        """tables[k][j] = coefficient vector of sigma^k(e^j)."""
        n = self.n
        ident = []
        for j in range(n):
            v = [self._zero] * n
            v[j] = self._one
            ident.append(tuple(v))
        tables = [ident]
        for _ in range(1, n):
            prev = tables[-1]
            # sigma^k(e) = sigma^(k-1) applied to the image of e
            e_img = self._apply_table(self.sigma_image, prev)
            row = [ident[0]]
            acc = self.one_elem()
            for _j in range(1, n):
                acc = acc * e_img
                row.append(acc.coeffs)
            tables.append(row)
        return tables

    def _apply_table(self, x, table):
        out = [self._zero] * self.n
        for j, c in enumerate(x.coeffs):
            if c.is_zero():
                continue
            col = table[j]
            for k in range(self.n):
                if not col[k].is_zero():
                    out[k] = out[k] + c * col[k]
        return FieldElem(self, out)

    def apply_sigma(self, x: "FieldElem", k: int = 1) -> "FieldElem":
        k %= self.n
        if k == 0:
            return x
        return self._apply_table(x, self._sigma_tables[k])

    def _validate(self):
        if self.n == 1:
            return
        # minpoly(sigma_image) must vanish exactly
        acc = self.zero_elem()
        p = self.one_elem()
        for c in self.minpoly:
            if not c.is_zero():
                acc = acc + p.scale(c)
            p = p * self.sigma_image
        if not acc.is_zero():
            raise ValueError(f"{self.name}: sigma image is not a root of the minimal polynomial")
        # orbit of the generator has exactly n distinct members
        e = self.gen()
        seen = {e.key()}
        x = e
        for _ in range(1, self.n):
            x = self.apply_sigma(x, 1)
            if x.key() in seen:
                raise ValueError(f"{self.name}: automorphism orbit shorter than the degree")
            seen.add(x.key())
        if self.apply_sigma(x, 1).key() != e.key():
            raise ValueError(f"{self.name}: automorphism does not have order n")
        # crude irreducibility spot check at small degree: no root in a small
        # grid of F-elements (full factorization is out of scope)
        if self.n <= 4:
            for ax in range(-2, 3):
                for ay in range(-2, 3):
                    for d in (1, 2):
                        s = QuadScalar(self.center, ax, ay, d)
                        v = self._zero
                        pw = self._one
                        for c in self.minpoly:
                            v = v + c * pw
                            pw = pw * s
                        if v.is_zero():
                            raise ValueError(f"{self.name}: minimal polynomial has root {s} in F")

    def theta_scalar(self):
        from .scalars import theta
        return theta(self.center)

    def __repr__(self):
        return f"FieldExtension({self.name}, n={self.n})"


class FieldElem:
    """Element of a cyclic extension as n exact F-coefficients."""

    __slots__ = ("ext", "coeffs")

    def __init__(self, ext, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != ext.n:
            raise ValueError(f"need {ext.n} coefficients, got {len(coeffs)}")
        self.ext = ext
        self.coeffs = coeffs

    def _check(self, other):
        if self.ext is not other.ext:
            raise ExtensionMismatch(
                f"elements of {self.ext.name} and {other.ext.name}")

    def is_zero(self):
        return all(c.is_zero() for c in self.coeffs)

    def is_one(self):
        return self.coeffs[0].is_one() and all(c.is_zero() for c in self.coeffs[1:])

    def is_integral(self):
        return all(c.is_integral() for c in self.coeffs)

    def key(self):
        return tuple((c.x, c.y, c.den) for c in self.coeffs)

    def __eq__(self, other):
        return isinstance(other, FieldElem) and self.ext is other.ext \
            and self.key() == other.key()

    def __hash__(self):
        return hash((id(self.ext), self.key()))

    def __add__(self, other):
        self._check(other)
        return FieldElem(self.ext, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._check(other)
        return FieldElem(self.ext, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return FieldElem(self.ext, [-a for a in self.coeffs])

    def scale(self, s: QuadScalar):
        return FieldElem(self.ext, [a * s for a in self.coeffs])

    def __mul__(self, other):
        self._check(other)
        n = self.ext.n
        if n == 1:
            return FieldElem(self.ext, [self.coeffs[0] * other.coeffs[0]])
        z = self.ext._zero
        out = [z] * (2 * n - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        red = self.ext._red
        for d in range(2 * n - 2, n - 1, -1):
            c = out[d]
            if c.is_zero():
                continue
            out[d] = z
            for j, m in red:
                out[d - n + j] = out[d - n + j] - c * m
        return FieldElem(self.ext, out[:n])

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        r = self.ext.one_elem()
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    def inverse(self):
        """Extended Euclid against the minimal polynomial."""
        if self.is_zero():
            raise ZeroInverse("inverse of the zero field element")
        p = poly_trim(list(self.coeffs))
        g, u, _ = poly_ext_gcd(p, list(self.ext.minpoly))
        if len(g) != 1:
            raise ZeroInverse("element shares a factor with the minimal polynomial")
        inv_g = g[0].inverse()
        u = poly_scale(u, inv_g)
        u = (u + [self.ext._zero] * self.ext.n)[: self.ext.n]
        out = FieldElem(self.ext, u)
        assert (out * self).is_one()
        return out

    def __truediv__(self, other):
        return self * other.inverse()

    # -- Galois data ----------------------------------------------------------

    def sigma(self, k: int = 1):
        return self.ext.apply_sigma(self, k)

    def rel_trace(self) -> QuadScalar:
        acc = self
        for k in range(1, self.ext.n):
            acc = acc + self.ext.apply_sigma(self, k)
        return _to_scalar(acc, "trace")

    def rel_norm(self) -> QuadScalar:
        acc = self
        for k in range(1, self.ext.n):
            acc = acc * self.ext.apply_sigma(self, k)
        return _to_scalar(acc, "norm")

    # -- numeric ----------------------------------------------------------------

    def to_complex(self) -> complex:
        r = self.ext.embedding_root
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * r + c.to_complex()
        return acc

    def to_json(self):
        return [c.to_json() for c in self.coeffs]

    def __repr__(self):
        return f"FieldElem({self.ext.name}, {list(self.coeffs)})"


def _to_scalar(x: FieldElem, what: str) -> QuadScalar:
    for c in x.coeffs[1:]:
        if not c.is_zero():
            raise NotRational(f"relative {what} left nonzero higher coefficients: {x}")
    return x.coeffs[0]
