"""Exact rational linear algebra.

All matrices are lists (or tuples) of rows over exact rationals.  gmpy2's
mpq is used when available, otherwise fractions.Fraction; both hash and
compare identically for equal values, so results never depend on the
backend.  Every routine is deterministic: pivots are always the first
usable entry in scan order.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover
    from fractions import Fraction as QQ

ZERO = QQ(0)
ONE = QQ(1)


def zeros(nrows, ncols):
    return [[ZERO] * ncols for _ in range(nrows)]


def identity(n):
    rows = zeros(n, n)
    for i in range(n):
        rows[i][i] = ONE
    return rows


def transpose(mat, ncols=None):
    if not mat:
        return [[] for _ in range(ncols)] if ncols else []
    return [list(col) for col in zip(*mat)]


def matmul(a, b, *, inner=None, bcols=None):
    """Product a @ b; `inner`/`bcols` give shapes when a or b is empty."""
    n = len(a)
    k = len(b) if b else (inner if inner is not None else 0)
    m = len(b[0]) if b else (bcols if bcols is not None else 0)
    out = zeros(n, m)
    for i in range(n):
        arow = a[i]
        orow = out[i]
        for t in range(k):
            c = arow[t]
            if c:
                brow = b[t]
                for j in range(m):
                    if brow[j]:
                        orow[j] += c * brow[j]
    return out

def matsub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def is_zero_matrix(mat):
    return all(not x for row in mat for x in row)


def rref(mat, ncols=None):
    """Reduced row echelon form.  Returns (rows, pivot_columns)."""
    rows = [list(r) for r in mat if any(r)]
    if ncols is None:
        ncols = len(mat[0]) if mat else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = ONE / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(mat, ncols=None):
    return len(rref(mat, ncols)[0])


def nullspace(mat, ncols):
    """Basis of {x : mat @ x = 0}, one vector per free column, ascending."""
    rows, pivots = rref(mat, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [ZERO] * ncols
        v[free] = ONE
        for r, p in zip(rows, pivots):
            v[p] = -r[free]
        basis.append(v)
    return basis


def solve(mat, rhs_cols, ncols):
    """Solve mat @ X = rhs for each column of rhs.

    `rhs_cols` is a matrix whose columns are the right-hand sides (i.e. it
    has len(mat) rows).  Returns X as a (ncols x k) matrix, or None if any
    system is inconsistent.
    """
    k = len(rhs_cols[0]) if rhs_cols else 0
    aug = [list(row) + list(rhs) for row, rhs in zip(mat, rhs_cols)]
    if not aug:
        return zeros(ncols, k)
    rows, pivots = rref(aug, ncols + k)
    x = zeros(ncols, k)
    for r, p in zip(rows, pivots):
        if p >= ncols:
            return None
        for j in range(k):
            x[p][j] = r[ncols + j]
    return x


def is_invertible(mat):
    n = len(mat)
    if n == 0:
        return True
    if len(mat[0]) != n:
        return False
    return rank(mat, n) == n


class EchelonSpace:
    """Incrementally built subspace of QQ^n with membership and coordinates.

    Rows are kept fully reduced; when `track` is set, the expression of each
    echelon row over the originally inserted vectors is carried along so
    coordinates of members can be recovered.
    """

    def __init__(self, n, track=False):
        self.n = n
        self.rows = []
        self.pivots = []
        self.track = track
        self._expr = []
        self._count = 0

    def _reduce(self, vec, expr=None):
        v = list(vec)
        for row, p, e in zip(self.rows, self.pivots, self._expr or self.rows):
            c = v[p]
            if c:
                for j in range(self.n):
                    if row[j]:
                        v[j] -= c * row[j]
                if expr is not None:
                    for j in range(len(expr)):
                        if e[j]:
                            expr[j] -= c * e[j]
        return v

    def add(self, vec):
        """Insert a vector; returns True when it enlarged the space."""
        expr = None
        if self.track:
            expr = [ZERO] * (self._count + 1)
            expr[self._count] = ONE
            for e in self._expr:
                e.append(ZERO)
        self._count += 1
        v = self._reduce(vec, expr)
        p = next((j for j in range(self.n) if v[j]), None)
        if p is None:
            return False
        inv = ONE / v[p]
        v = [x * inv for x in v]
        if expr is not None:
            expr = [x * inv for x in expr]
        for i, row in enumerate(self.rows):
            c = row[p]
            if c:
                self.rows[i] = [x - c * y for x, y in zip(row, v)]
                if self.track:
                    self._expr[i] = [x - c * y for x, y in zip(self._expr[i], expr)]
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < p:
            pos += 1
        self.rows.insert(pos, v)
        self.pivots.insert(pos, p)
        if self.track:
            self._expr.insert(pos, expr)
        return True

    @property
    def dim(self):
        return len(self.rows)

    def contains(self, vec):
        return not any(self._reduce(vec))

    def coordinates(self, vec):
        """Express vec over the inserted vectors; None if not a member."""
        if not self.track:
            raise ValueError("EchelonSpace built without coordinate tracking")
        v = list(vec)
        coeff = [ZERO] * self._count
        for row, p, e in zip(self.rows, self.pivots, self._expr):
            c = v[p]
            if c:
                for j in range(self.n):
                    if row[j]:
                        v[j] -= c * row[j]
                for j in range(len(e)):
                    if e[j]:
                        coeff[j] += c * e[j]
        if any(v):
            return None
        return coeff

    def residue(self, vec):
        """Reduction of vec modulo the space (canonical coset representative)."""
        return self._reduce(vec)


def integerize(coeffs):
    """Scale rationals to coprime integers with positive leading entry."""
    from math import gcd

    dens = [int(c.denominator) for c in coeffs]
    nums = [int(c.numerator) for c in coeffs]
    lcm = 1
    for d in dens:
        lcm = lcm // gcd(lcm, d) * d
    ints = [n * (lcm // d) for n, d in zip(nums, dens)]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g:
        ints = [x // g for x in ints]
    lead = next((x for x in ints if x), 0)
    if lead < 0:
        ints = [-x for x in ints]
    return ints
