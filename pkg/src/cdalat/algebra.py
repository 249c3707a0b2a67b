"""Cyclic algebras over a quadratic center.

An algebra is E + uE + ... + u^(n-1)E with xu = u*sigma(x) for x in E and
u^n = gamma in F*.  Elements store the right-hand coefficients (x_0 ... x_(n-1))
of a = x_0 + u x_1 + ... + u^(n-1) x_(n-1).

The standard representation maps a to the n x n matrix over E with entry
(r, c) = sigma^c(x_(r-c mod n)), multiplied by gamma when r < c.  Reduced
norm and trace are its determinant and trace, computed exactly over E and
certified to lie in the center.
"""

from __future__ import annotations

import random

from .errors import AlgebraMismatch, NotARepresentation, NotInCenter
from .fields import FieldElem, FieldExtension
from .scalars import QuadScalar


class AlgebraDescriptor:
    """(E/F, sigma, gamma) with a name; gamma a nonzero center element."""

    def __init__(self, name: str, extension: FieldExtension, gamma: QuadScalar):
        if gamma.is_zero():
            raise ValueError("gamma must be nonzero")
        self.name = name
        self.extension = extension
        self.gamma = gamma
        self.n = extension.n
        self.center = extension.center

    def zero(self):
        z = self.extension.zero_elem()
        return AlgebraElem(self, [z] * self.n)

    def one(self):
        coords = [self.extension.one_elem()] + [self.extension.zero_elem()] * (self.n - 1)
        return AlgebraElem(self, coords)

    def u(self):
        if self.n == 1:
            return self.from_scalar(self.gamma)
        coords = [self.extension.zero_elem()] * self.n
        coords[1] = self.extension.one_elem()
        return AlgebraElem(self, coords)

    def from_field(self, x: FieldElem):
        coords = [x] + [self.extension.zero_elem()] * (self.n - 1)
        return AlgebraElem(self, coords)

    def from_scalar(self, s: QuadScalar):
        return self.from_field(self.extension.from_scalar(s))

    def ambient_dim(self):
        """Rank of the algebra as an F-space: n^2."""
        return self.n * self.n

    def basis_element(self, idx):
        """Ambient F-basis u^a e^b at flat index a*n + b."""
        a, b = divmod(idx, self.n)
        coords = [self.extension.zero_elem()] * self.n
        coeffs = [self.extension._zero] * self.n
        coeffs[b] = self.extension._one
        coords[a] = FieldElem(self.extension, coeffs)
        return AlgebraElem(self, coords)

    def __repr__(self):
        return f"AlgebraDescriptor({self.name}, n={self.n}, gamma={self.gamma})"


class AlgebraElem:
    """a = sum_i u^i x_i with exact E-coefficients."""

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra, coords):
        coords = tuple(coords)
        if len(coords) != algebra.n:
            raise ValueError(f"need {algebra.n} coordinates")
        self.algebra = algebra
        self.coords = coords

    def _check(self, other):
        if self.algebra is not other.algebra:
            raise AlgebraMismatch(
                f"elements of {self.algebra.name} and {other.algebra.name}")

    def is_zero(self):
        return all(c.is_zero() for c in self.coords)

    def key(self):
        return tuple(c.key() for c in self.coords)

    def __eq__(self, other):
        return isinstance(other, AlgebraElem) and self.algebra is other.algebra \
            and self.key() == other.key()

    def __hash__(self):
        return hash((id(self.algebra), self.key()))

    def __add__(self, other):
        self._check(other)
        return AlgebraElem(self.algebra, [a + b for a, b in zip(self.coords, other.coords)])

    def __sub__(self, other):
        self._check(other)
        return AlgebraElem(self.algebra, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return AlgebraElem(self.algebra, [-a for a in self.coords])

    def scale(self, s: QuadScalar):
        return AlgebraElem(self.algebra, [c.scale(s) for c in self.coords])

    def scale_field(self, x: FieldElem):
        """Right multiplication by a field element."""
        return AlgebraElem(self.algebra, [c * x for c in self.coords])

    def __mul__(self, other):
        """u^i x * u^j y = u^(i+j) sigma^j(x) y, with u^n = gamma."""
        self._check(other)
        alg = self.algebra
        n = alg.n
        ext = alg.extension
        out = [ext.zero_elem()] * n
        for i, xi in enumerate(self.coords):
            if xi.is_zero():
                continue
            for j, yj in enumerate(other.coords):
                if yj.is_zero():
                    continue
                term = ext.apply_sigma(xi, j) * yj
                k = i + j
                if k >= n:
                    k -= n
                    term = term.scale(alg.gamma)
                out[k] = out[k] + term
        return AlgebraElem(alg, out)

    def __pow__(self, k):
        r = self.algebra.one()
        b = self
        while k:
            if k & 1:
                r = r * b
            b = b * b
            k >>= 1
        return r

    # -- representation ----------------------------------------------------------

    def matrix_rep(self):
        """Standard n x n matrix over E; gamma sits in the upper triangle."""
        alg = self.algebra
        n = alg.n
        ext = alg.extension
        rows = []
        for r in range(n):
            row = []
            for c in range(n):
                x = ext.apply_sigma(self.coords[(r - c) % n], c)
                if r < c:
                    x = x.scale(alg.gamma)
                row.append(x)
            rows.append(tuple(row))
        return MatrixOverE(ext, tuple(rows))

    def reduced_trace(self) -> QuadScalar:
        """Trace of the standard representation: relative trace of x_0."""
        return self.coords[0].rel_trace()

    def reduced_norm(self) -> QuadScalar:
        """Determinant of the standard representation, certified central."""
        det = self.matrix_rep().det()
        for c in det.coeffs[1:]:
            if not c.is_zero():
                raise NotInCenter(f"reduced norm has E-components: {det}")
        return det.coeffs[0]

    def numeric_matrix(self):
        """Complex matrix via the designated embedding (numpy array)."""
        import numpy as np

        rep = self.matrix_rep()
        n = self.algebra.n
        out = np.empty((n, n), dtype=complex)
        for r in range(n):
            for c in range(n):
                out[r, c] = rep.rows[r][c].to_complex()
        return out

    def ambient_vector(self):
        """Length-n^2 list of F-scalars over the basis u^a e^b."""
        out = []
        for x in self.coords:
            out.extend(x.coeffs)
        return out

    def to_json(self):
        return [x.to_json() for x in self.coords]

    def __repr__(self):
        return f"AlgebraElem({self.algebra.name}, {list(self.coords)})"


class MatrixOverE:
    """Square matrix with exact E-entries."""

    __slots__ = ("ext", "rows")

    def __init__(self, ext, rows):
        self.ext = ext
        self.rows = rows

    def __eq__(self, other):
        return isinstance(other, MatrixOverE) and self.ext is other.ext and all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))

    def mul(self, other):
        n = len(self.rows)
        out = []
        for r in range(n):
            row = []
            for c in range(n):
                acc = self.ext.zero_elem()
                for k in range(n):
                    acc = acc + self.rows[r][k] * other.rows[k][c]
                row.append(acc)
            out.append(tuple(row))
        return MatrixOverE(self.ext, tuple(out))

    def trace(self):
        acc = self.ext.zero_elem()
        for r in range(len(self.rows)):
            acc = acc + self.rows[r][r]
        return acc

    def det(self):
        """Exact determinant by Gaussian elimination over the field E."""
        n = len(self.rows)
        a = [list(r) for r in self.rows]
        ext = self.ext
        det = ext.one_elem()
        sign = 1
        for col in range(n):
            piv = None
            for r in range(col, n):
                if not a[r][col].is_zero():
                    piv = r
                    break
            if piv is None:
                return ext.zero_elem()
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                sign = -sign
            p = a[col][col]
            det = det * p
            pinv = p.inverse()
            for r in range(col + 1, n):
                f = a[r][col]
                if f.is_zero():
                    continue
                f = f * pinv
                for c in range(col + 1, n):
                    a[r][c] = a[r][c] - f * a[col][c]
        if sign < 0:
            det = -det
        return det


def from_matrix(algebra: AlgebraDescriptor, m: MatrixOverE) -> AlgebraElem:
    """Inverse of matrix_rep: read coordinates off the first column, verify."""
    coords = [m.rows[r][0] for r in range(algebra.n)]
    elem = AlgebraElem(algebra, coords)
    if elem.matrix_rep() != m:
        raise NotARepresentation("matrix is not a standard representation")
    return elem


def division_sanity_sample(algebra: AlgebraDescriptor, trials: int, seed: int = 0,
                           coeff_bound: int = 3):
    """Random nonzero elements with small coefficients; lists any with zero norm.

    A zero reduced norm exhibits a zero divisor and disproves division;
    an empty report never certifies anything.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = random.Random(seed)
    n = algebra.n
    ext = algebra.extension
    witnesses = []
    for _ in range(trials):
        coords = []
        for _i in range(n):
            coeffs = [QuadScalar(algebra.center,
                                 rng.randint(-coeff_bound, coeff_bound),
                                 rng.randint(-coeff_bound, coeff_bound), 1)
                      for _j in range(ext.n)]
            coords.append(FieldElem(ext, coeffs))
        elem = AlgebraElem(algebra, coords)
        if elem.is_zero():
            continue
        if elem.reduced_norm().is_zero():
            witnesses.append(elem)
    return {"trials": trials, "zero_norm_elements": witnesses}
