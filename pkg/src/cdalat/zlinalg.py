"""Exact linear algebra over the quadratic integer rings and their fields.

Matrices are lists of lists of QuadScalar.  HNF works for any row count and
uses the deterministic Euclidean division from the scalars module, so the
reduced form is bit-reproducible: pivots are canonical associates and the
entries above a pivot lie in its fundamental residue domain.
"""

from __future__ import annotations

from .errors import NonIntegralEntry, RankDeficient
from .scalars import QuadScalar, canonical_associate, euclid_divmod, one, zero


def mat_copy(rows):
    return [list(r) for r in rows]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    z = zero(a[0][0].center)
    out = [[z] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            c = ai[t]
            if c.is_zero():
                continue
            bt = b[t]
            for j in range(m):
                if not bt[j].is_zero():
                    oi[j] = oi[j] + c * bt[j]
    return out


def mat_vec(v, a):
    """Row vector times matrix."""
    m = len(a[0])
    z = zero(v[0].center)
    out = [z] * m
    for t, c in enumerate(v):
        if c.is_zero():
            continue
        at = a[t]
        for j in range(m):
            if not at[j].is_zero():
                out[j] = out[j] + c * at[j]
    return out


def mat_inverse(a):
    """Inverse of a square matrix over the field Q(theta); Gauss-Jordan."""
    n = len(a)
    z = zero(a[0][0].center)
    o = one(a[0][0].center)
    m = [list(r) + [z] * n for r in a]
    for i in range(n):
        m[i][n + i] = o
    for col in range(n):
        piv = None
        for r in range(col, n):
            if not m[r][col].is_zero():
                piv = r
                break
        if piv is None:
            raise RankDeficient("matrix not invertible")
        m[col], m[piv] = m[piv], m[col]
        pinv = m[col][col].inverse()
        m[col] = [c * pinv for c in m[col]]
        for r in range(n):
            if r == col:
                continue
            f = m[r][col]
            if f.is_zero():
                continue
            m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [r[n:] for r in m]


def exact_divide(x: QuadScalar, y: QuadScalar) -> QuadScalar:
    q, r = euclid_divmod(x, y)
    if not r.is_zero():
        raise ArithmeticError(f"non-exact division {x} / {y}")
    return q


def bareiss_det(rows) -> QuadScalar:
    """Fraction-free determinant of a square integral matrix."""
    n = len(rows)
    a = mat_copy(rows)
    z = zero(rows[0][0].center)
    o = one(rows[0][0].center)
    sign = 1
    prev = o
    for k in range(n - 1):
        if a[k][k].is_zero():
            piv = None
            for r in range(k + 1, n):
                if not a[r][k].is_zero():
                    piv = r
                    break
            if piv is None:
                return z
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                num = a[i][j] * akk - aik * a[k][j]
                a[i][j] = exact_divide(num, prev)
            a[i][k] = z
        prev = akk
    d = a[n - 1][n - 1]
    return -d if sign < 0 else d


def hnf(rows, ncols=None):
    """Canonical row Hermite form over Z[i] or Z[w].

    Returns (hnf_rows, pivot_cols); zero rows are dropped.  Row span is
    preserved; the output is unique for the span because pivots are
    canonical associates and entries above them are Euclidean remainders.
    """
    work = []
    for r in rows:
        for c in r:
            if not c.is_integral():
                raise NonIntegralEntry(f"HNF entry {c} not integral")
        if any(not c.is_zero() for c in r):
            work.append(list(r))
    if not work:
        return [], []
    m = len(work[0])
    if ncols is None:
        ncols = m
    result = []
    pivots = []
    for col in range(ncols):
        live = [r for r in work if not r[col].is_zero()]
        if not live:
            continue
        rest = [r for r in work if r[col].is_zero()]
        # Euclidean reduction at this column until a single row survives
        while len(live) > 1:
            live.sort(key=lambda r: (r[col].norm_int(), r[col].key()))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q, _ = euclid_divmod(r[col], piv[col])
                if not q.is_zero():
                    r = [x - q * y for x, y in zip(r, piv)]
                if r[col].is_zero():
                    if any(not c.is_zero() for c in r):
                        rest.append(r)
                else:
                    nxt.append(r)
            live = nxt
        piv = live[0]
        canon, unit = canonical_associate(piv[col])
        if not unit.is_one():
            uinv = unit.inverse_unit()
            piv = [c * uinv for c in piv]
        # reduce the entries of earlier pivot rows above this pivot
        for prow in result:
            if prow[col].is_zero():
                continue
            q, _ = euclid_divmod(prow[col], piv[col])
            if not q.is_zero():
                for j in range(m):
                    prow[j] = prow[j] - q * piv[j]
        result.append(piv)
        pivots.append(col)
        work = rest
    return result, pivots


def hnf_solve(hnf_rows, pivots, vec):
    """Coefficients of vec over the HNF rows with O_F entries, or None.

    vec may be rational; a non-integral coefficient means non-membership.
    """
    v = list(vec)
    coeffs = []
    for row, col in zip(hnf_rows, pivots):
        c = v[col]
        if c.is_zero():
            coeffs.append(zero(c.center))
            continue
        q = c / row[col]
        if not q.is_integral():
            return None
        coeffs.append(q)
        v = [x - q * y for x, y in zip(v, row)]
    if any(not c.is_zero() for c in v):
        return None
    return coeffs


def hnf_solve_rational(hnf_rows, pivots, vec):
    """Rational coefficients of vec over the HNF rows, or None if outside span."""
    v = list(vec)
    coeffs = []
    for row, col in zip(hnf_rows, pivots):
        c = v[col]
        q = c / row[col]
        coeffs.append(q)
        if not q.is_zero():
            v = [x - q * y for x, y in zip(v, row)]
    if any(not c.is_zero() for c in v):
        return None
    return coeffs
