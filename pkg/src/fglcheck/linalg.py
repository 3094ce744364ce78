"""Exact linear algebra over the library's coefficient rings.

Matrices are small and dense.  Smith normal form is implemented for chain
rings (Z/p^N, truncated Witt rings, and their residue fields), where every
nonzero element factors as unit * p^v; that is all the structure the pivoting
needs.  Ranks and kernels over residue fields use plain Gaussian elimination.
"""

from __future__ import annotations

from dataclasses import dataclass


class Mat:
    """Dense matrix over a Ring; rows is a tuple of tuples of ring elements."""

    __slots__ = ("ring", "rows", "nrows", "ncols")

    def __init__(self, ring, rows):
        self.ring = ring
        self.rows = tuple(tuple(r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        assert all(len(r) == self.ncols for r in self.rows)

    @staticmethod
    def from_int_rows(ring, rows):
        return Mat(ring, [[ring.from_int(c) for c in r] for r in rows])

    @staticmethod
    def identity(ring, n):
        z, o = ring.zero(), ring.one()
        return Mat(ring, [[o if i == j else z for j in range(n)] for i in range(n)])

    @staticmethod
    def zeros(ring, m, n):
        z = ring.zero()
        return Mat(ring, [[z] * n for _ in range(m)])

    def __matmul__(self, other):
        assert self.ncols == other.nrows, (self.shape, other.shape)
        R = self.ring
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = R.zero()
                for k in range(self.ncols):
                    acc = R.add(acc, R.mul(self.rows[i][k], other.rows[k][j]))
                row.append(acc)
            out.append(row)
        return Mat(R, out)

    def __add__(self, other):
        R = self.ring
        return Mat(R, [[R.add(a, b) for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.rows, other.rows)])

    def __sub__(self, other):
        R = self.ring
        return Mat(R, [[R.sub(a, b) for a, b in zip(r1, r2)]
                       for r1, r2 in zip(self.rows, other.rows)])

    def __neg__(self):
        R = self.ring
        return Mat(R, [[R.neg(a) for a in r] for r in self.rows])

    def scale(self, c):
        R = self.ring
        return Mat(R, [[R.mul(c, a) for a in r] for r in self.rows])

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            return False
        R = self.ring
        return all(R.eq(a, b) for r1, r2 in zip(self.rows, other.rows)
                   for a, b in zip(r1, r2))

    def __hash__(self):
        raise TypeError("Mat is unhashable")

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def transpose(self):
        return Mat(self.ring, list(zip(*self.rows)) if self.rows else [])

    def is_zero(self):
        R = self.ring
        return all(R.is_zero(a) for r in self.rows for a in r)

    def col(self, j):
        return tuple(r[j] for r in self.rows)

    def hstack(self, other):
        assert self.nrows == other.nrows
        return Mat(self.ring, [r1 + r2 for r1, r2 in zip(self.rows, other.rows)])

    def vstack(self, other):
        assert self.ncols == other.ncols
        return Mat(self.ring, self.rows + other.rows)

    def kron(self, other):
        """Kronecker product, row-major block layout."""
        R = self.ring
        out = []
        for r1 in self.rows:
            for r2 in other.rows:
                out.append([R.mul(a, b) for a in r1 for b in r2])
        if not out:
            return Mat.zeros(R, self.nrows * other.nrows, self.ncols * other.ncols)
        return Mat(R, out)

    def map(self, fn, ring=None):
        return Mat(ring or self.ring, [[fn(a) for a in r] for r in self.rows])

    def apply(self, vec):
        """Matrix times a column vector given as a tuple."""
        R = self.ring
        assert len(vec) == self.ncols
        out = []
        for r in self.rows:
            acc = R.zero()
            for a, v in zip(r, vec):
                acc = R.add(acc, R.mul(a, v))
            out.append(acc)
        return tuple(out)

    def __repr__(self):
        return "Mat(%s)" % "; ".join(" ".join(repr(a) for a in r) for r in self.rows)

    def to_json(self):
        enc = self.ring.encode
        return [[enc(a) for a in r] for r in self.rows]


@dataclass
class SmithForm:
    """U @ A @ V == D with U, V invertible and D diagonal with p-power entries."""

    U: Mat
    D: Mat
    V: Mat
    pivots: list  # valuations of the diagonal entries, in order

    @property
    def rank(self):
        return len(self.pivots)


def smith_normal_form(A):
    """Smith normal form over a chain ring (val_unit available).

    Pivots are chosen of minimal valuation, so the diagonal valuations come
    out sorted.  Works over Z/p^N, truncated Witt rings and finite fields.
    """
    R = A.ring
    n, m = A.nrows, A.ncols
    a = [list(r) for r in A.rows]
    U = [list(r) for r in Mat.identity(R, n).rows]
    V = [list(r) for r in Mat.identity(R, m).rows]

    def row_op(i, j, c):  # row_i -= c * row_j
        for k in range(m):
            a[i][k] = R.sub(a[i][k], R.mul(c, a[j][k]))
        for k in range(n):
            U[i][k] = R.sub(U[i][k], R.mul(c, U[j][k]))

    def col_op(i, j, c):  # col_i -= c * col_j
        for k in range(n):
            a[k][i] = R.sub(a[k][i], R.mul(c, a[k][j]))
        for k in range(m):
            V[k][i] = R.sub(V[k][i], R.mul(c, V[k][j]))

    pivots = []
    s = 0
    while s < min(n, m):
        best = None
        for i in range(s, n):
            for j in range(s, m):
                vu = R.val_unit(a[i][j])
                if vu[0] is None:
                    continue
                if best is None or vu[0] < best[0]:
                    best = (vu[0], i, j, vu[1])
        if best is None:
            break
        v, bi, bj, unit = best
        if bi != s:
            a[s], a[bi] = a[bi], a[s]
            U[s], U[bi] = U[bi], U[s]
        if bj != s:
            for k in range(n):
                a[k][s], a[k][bj] = a[k][bj], a[k][s]
            for k in range(m):
                V[k][s], V[k][bj] = V[k][bj], V[k][s]
        # normalize pivot to p^v
        uinv = R.inv(unit)
        for k in range(m):
            a[s][k] = R.mul(uinv, a[s][k])
        for k in range(n):
            U[s][k] = R.mul(uinv, U[s][k])
        piv = a[s][s]
        for i in range(s + 1, n):
            if R.is_zero(a[i][s]):
                continue
            row_op(i, s, _chain_quot(R, a[i][s], piv, v))
        for j in range(s + 1, m):
            if R.is_zero(a[s][j]):
                continue
            col_op(j, s, _chain_quot(R, a[s][j], piv, v))
        pivots.append(v)
        s += 1
    return SmithForm(Mat(R, U), Mat(R, a), Mat(R, V), pivots)


def _chain_quot(R, x, piv, piv_val):
    """x / piv in a chain ring, assuming val(x) >= val(piv) and piv = p^v."""
    vx, ux = R.val_unit(x)
    assert vx is not None and vx >= piv_val
    return R.mul(ux, R.from_int(_char_power(R, vx - piv_val)))


def _char_power(R, k):
    return getattr(R, "p", 0) ** k if k else 1


def kernel_basis(A):
    """Basis of {x : A x = 0} over a chain ring of length N (columns returned).

    From U A V = D with D_ii = p^{v_i}: kernel is spanned by V e_i * p^{N-v_i}
    for pivot columns plus V e_j for free columns.
    """
    R = A.ring
    N = R.chain_length()
    snf = smith_normal_form(A)
    cols = []
    for i, v in enumerate(snf.pivots):
        if v > 0:
            c = snf.V.col(i)
            scale = R.from_int(getattr(R, "p") ** (N - v))
            col = tuple(R.mul(scale, x) for x in c)
            if any(not R.is_zero(x) for x in col):
                cols.append(col)
    for j in range(snf.rank, A.ncols):
        cols.append(snf.V.col(j))
    return cols


def solve(A, b):
    """One solution x of A x = b over a chain ring, or None if none exists."""
    R = A.ring
    snf = smith_normal_form(A)
    c = snf.U.apply(b)
    y = [R.zero()] * A.ncols
    for i in range(A.nrows):
        if i < len(snf.pivots):
            di = snf.D.rows[i][i]
            vi = snf.pivots[i]
            vc, uc = R.val_unit(c[i])
            if vc is None:
                continue
            if vc < vi:
                return None
            y[i] = R.mul(uc, R.from_int(getattr(R, "p") ** (vc - vi)))
            # check: di * y[i] == c[i]
            if not R.eq(R.mul(di, y[i]), c[i]):
                return None
        else:
            if not R.is_zero(c[i]):
                return None
    return snf.V.apply(tuple(y))


def solve_matrix(A, B):
    """Solve A X = B columnwise; returns Mat or None."""
    cols = []
    for j in range(B.ncols):
        x = solve(A, B.col(j))
        if x is None:
            return None
        cols.append(x)
    return Mat(A.ring, list(zip(*cols)))


def residue_rank(A):
    """Rank of A over the residue field of its (local) ring."""
    R = A.ring
    k = R.residue_ring()
    Ak = A.map(R.residue, ring=k)
    return _field_rank(Ak)


def _field_rank(A):
    R = A.ring
    a = [list(r) for r in A.rows]
    n, m = A.nrows, A.ncols
    rank = 0
    for j in range(m):
        piv = None
        for i in range(rank, n):
            if not R.is_zero(a[i][j]):
                piv = i
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = R.inv(a[rank][j])
        a[rank] = [R.mul(inv, x) for x in a[rank]]
        for i in range(n):
            if i != rank and not R.is_zero(a[i][j]):
                c = a[i][j]
                a[i] = [R.sub(x, R.mul(c, y)) for x, y in zip(a[i], a[rank])]
        rank += 1
        if rank == n:
            break
    return rank


def field_left_kernel_vector(A):
    """A nonzero row vector y with y A = 0 over a field, or None if full row rank."""
    return _field_kernel_vector(A.transpose())


def _field_kernel_vector(A):
    cols = field_kernel_basis(A)
    return cols[0] if cols else None


def field_kernel_basis(A):
    """Kernel basis over a field by reduced row echelon form."""
    R = A.ring
    a = [list(r) for r in A.rows]
    n, m = A.nrows, A.ncols
    pivots = []
    rank = 0
    for j in range(m):
        piv = None
        for i in range(rank, n):
            if not R.is_zero(a[i][j]):
                piv = i
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = R.inv(a[rank][j])
        a[rank] = [R.mul(inv, x) for x in a[rank]]
        for i in range(n):
            if i != rank and not R.is_zero(a[i][j]):
                c = a[i][j]
                a[i] = [R.sub(x, R.mul(c, y)) for x, y in zip(a[i], a[rank])]
        pivots.append(j)
        rank += 1
        if rank == n:
            break
    free = [j for j in range(m) if j not in pivots]
    basis = []
    for j in free:
        vec = [R.zero()] * m
        vec[j] = R.one()
        for r, pj in enumerate(pivots):
            vec[pj] = R.neg(a[r][j])
        basis.append(tuple(vec))
    return basis
