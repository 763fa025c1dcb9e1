"""Exact integer linear algebra: Hermite and Smith normal forms, kernels,
cokernels, and integral linear solving.

Everything runs on plain Python ints, so there is no overflow and no floating
point anywhere.  Matrices are sequences of equal-length integer rows; public
functions return tuples of tuples.  Normal forms are canonical (positive
pivots, entries above a pivot reduced into [0, pivot)), which lets callers
compare lattices by comparing matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

Matrix = tuple[tuple[int, ...], ...]
Vector = tuple[int, ...]


def freeze(m) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in m)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m) -> Matrix:
    return tuple(zip(*[tuple(r) for r in m])) if m else ()


def matmul(a, b) -> Matrix:
    bt = list(zip(*b)) if b else []
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt)
                 for row in a)


def matvec(m, v) -> Vector:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    # g = x*a + y*b with g = gcd(a, b) >= 0.
    x, nx, y, ny, g, ng = 1, 0, 0, 1, a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


class _RowOps:
    """A mutable matrix with a tracked unimodular row transform and its
    inverse: work = u * original and u * u_inv = 1 at all times."""

    def __init__(self, m):
        self.a = [list(map(int, row)) for row in m]
        n = len(self.a)
        self.u = [[int(i == j) for j in range(n)] for i in range(n)]
        self.u_inv = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap(self, i, j):
        if i == j:
            return
        self.a[i], self.a[j] = self.a[j], self.a[i]
        self.u[i], self.u[j] = self.u[j], self.u[i]
        for row in self.u_inv:
            row[i], row[j] = row[j], row[i]

    def negate(self, i):
        self.a[i] = [-x for x in self.a[i]]
        self.u[i] = [-x for x in self.u[i]]
        for row in self.u_inv:
            row[i] = -row[i]

    def submul(self, i, j, q):
        # row i -= q * row j;  the inverse transform gains col j += q * col i.
        if not q:
            return
        self.a[i] = [x - q * y for x, y in zip(self.a[i], self.a[j])]
        self.u[i] = [x - q * y for x, y in zip(self.u[i], self.u[j])]
        for row in self.u_inv:
            row[j] += q * row[i]


def _hnf_rows(ops: _RowOps) -> None:
    """Row Hermite normal form in place: echelon, pivots positive, entries
    above a pivot reduced into [0, pivot)."""
    a = ops.a
    nr = len(a)
    nc = len(a[0]) if a else 0
    r = 0
    for c in range(nc):
        if r == nr:
            break
        while True:
            piv = None
            for i in range(r, nr):
                if a[i][c] and (piv is None or abs(a[i][c]) < abs(a[piv][c])):
                    piv = i
            if piv is None:
                break
            ops.swap(r, piv)
            p = a[r][c]
            clean = True
            for i in range(r + 1, nr):
                if a[i][c]:
                    ops.submul(i, r, a[i][c] // p)
                    if a[i][c]:
                        clean = False
            if clean:
                break
        if a[r][c]:
            if a[r][c] < 0:
                ops.negate(r)
            p = a[r][c]
            for i in range(r):
                ops.submul(i, r, a[i][c] // p)
            r += 1


def hnf(m) -> tuple[Matrix, Matrix]:
    """Row Hermite normal form.

    Returns (h, u) with u unimodular, u * m = h, h in echelon form with
    positive pivots and entries above each pivot reduced into [0, pivot).
    """
    ops = _RowOps(m)
    _hnf_rows(ops)
    return freeze(ops.a), freeze(ops.u)


def _hnf_ext(m) -> tuple[Matrix, Matrix, Matrix]:
    # As hnf(), plus the inverse of the transform.
    ops = _RowOps(m)
    _hnf_rows(ops)
    return freeze(ops.a), freeze(ops.u), freeze(ops.u_inv)


class _SnfState:
    """Mutable Smith reduction state: a = u * original * v, with both
    transforms and both inverses tracked."""

    def __init__(self, m):
        self.rows = _RowOps(m)
        nc = len(m[0]) if len(m) else 0
        self.v = [[int(i == j) for j in range(nc)] for i in range(nc)]
        self.v_inv = [[int(i == j) for j in range(nc)] for i in range(nc)]

    @property
    def a(self):
        return self.rows.a

    def cswap(self, i, j):
        if i == j:
            return
        for row in self.a:
            row[i], row[j] = row[j], row[i]
        for row in self.v:
            row[i], row[j] = row[j], row[i]
        self.v_inv[i], self.v_inv[j] = self.v_inv[j], self.v_inv[i]

    def csubmul(self, j, k, q):
        # col j -= q * col k;  the inverse transform gains row k += q * row j.
        if not q:
            return
        for row in self.a:
            row[j] -= q * row[k]
        for row in self.v:
            row[j] -= q * row[k]
        vk, vj = self.v_inv[k], self.v_inv[j]
        self.v_inv[k] = [x + q * y for x, y in zip(vk, vj)]

    def two_by_two(self, i, j, p, p_inv, q, q_inv):
        # a <- P*a*Q on rows/cols {i, j}, for 2x2 unimodular P, Q.
        rows = self.rows
        for mat, (r0, r1) in ((rows.a, (i, j)), (rows.u, (i, j))):
            ri, rj = mat[r0], mat[r1]
            mat[r0] = [p[0][0] * x + p[0][1] * y for x, y in zip(ri, rj)]
            mat[r1] = [p[1][0] * x + p[1][1] * y for x, y in zip(ri, rj)]
        for row in rows.u_inv:
            ci, cj = row[i], row[j]
            row[i] = ci * p_inv[0][0] + cj * p_inv[1][0]
            row[j] = ci * p_inv[0][1] + cj * p_inv[1][1]
        for row in self.a + self.v:
            ci, cj = row[i], row[j]
            row[i] = ci * q[0][0] + cj * q[1][0]
            row[j] = ci * q[0][1] + cj * q[1][1]
        ri, rj = self.v_inv[i], self.v_inv[j]
        self.v_inv[i] = [q_inv[0][0] * x + q_inv[0][1] * y for x, y in zip(ri, rj)]
        self.v_inv[j] = [q_inv[1][0] * x + q_inv[1][1] * y for x, y in zip(ri, rj)]


def _snf_ext(m) -> tuple[Matrix, Matrix, Matrix, Matrix, Matrix]:
    st = _SnfState(m)
    a = st.a
    nr = len(a)
    nc = len(a[0]) if a else 0
    n = min(nr, nc)

    for k in range(n):
        # Global minimum pivot keeps entry growth tame and pushes zeros to
        # the tail of the diagonal.
        piv = None
        for i in range(k, nr):
            for j in range(k, nc):
                if a[i][j] and (piv is None
                                or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        st.rows.swap(k, piv[0])
        st.cswap(k, piv[1])
        while True:
            # Clear column k, then row k; column ops cannot dirty a cleared
            # column k, but row remainders restart the loop.
            while any(a[i][k] for i in range(k + 1, nr)):
                i = min((x for x in range(k, nr) if a[x][k]),
                        key=lambda x: abs(a[x][k]))
                st.rows.swap(k, i)
                p = a[k][k]
                for i in range(k + 1, nr):
                    st.rows.submul(i, k, a[i][k] // p)
            while any(a[k][j] for j in range(k + 1, nc)):
                j = min((x for x in range(k, nc) if a[k][x]),
                        key=lambda x: abs(a[k][x]))
                st.cswap(k, j)
                p = a[k][k]
                for j in range(k + 1, nc):
                    st.csubmul(j, k, a[k][j] // p)
            if not any(a[i][k] for i in range(k + 1, nr)):
                break
        if a[k][k] < 0:
            st.rows.negate(k)

    # Fix the divisibility chain by gcd/lcm-merging adjacent diagonal pairs:
    # diag(a, b) -> diag(g, a*b/g) via explicit 2x2 unimodular P, Q.
    rank = sum(1 for k in range(n) if a[k][k])
    done = False
    while not done:
        done = True
        for k in range(rank - 1):
            da, db = a[k][k], a[k + 1][k + 1]
            if db % da == 0:
                continue
            done = False
            g, x, y = _xgcd(da, db)
            p = ((x, y), (-db // g, da // g))
            p_inv = ((da // g, -y), (db // g, x))
            q = ((1, -y * db // g), (1, x * da // g))
            q_inv = ((x * da // g, y * db // g), (-1, 1))
            st.two_by_two(k, k + 1, p, p_inv, q, q_inv)

    return (freeze(a), freeze(st.rows.u), freeze(st.v),
            freeze(st.rows.u_inv), freeze(st.v_inv))


def snf(m) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form.

    Returns (d, u, v) with u, v unimodular, u * m * v = d, and d diagonal
    with non-negative entries satisfying d_1 | d_2 | ... .
    """
    d, u, v, _, _ = _snf_ext(m)
    return d, u, v


@dataclass(frozen=True)
class AbelianGroup:
    """A finitely generated abelian group presented as a quotient of an
    ambient Z^n, in normal form.

    Coordinates are (torsion part, free part): the first len(torsion)
    coordinates are valued mod the matching d_i, the remaining free_rank are
    unconstrained.  `projection` maps ambient vectors to coordinates (one row
    per coordinate); `lift` is a right inverse of it, giving an ambient
    representative for each coordinate vector.
    """

    ambient_rank: int
    free_rank: int
    torsion: tuple[int, ...]
    projection: Matrix
    lift: Matrix

    @property
    def coord_rank(self) -> int:
        return len(self.torsion) + self.free_rank

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def structure(self) -> tuple[int, tuple[int, ...]]:
        return (self.free_rank, self.torsion)

    def project(self, v) -> Vector:
        """Coordinates of the class of an ambient vector (torsion entries
        reduced into [0, d_i))."""
        if len(v) != self.ambient_rank:
            raise ValueError("vector length %d, ambient rank %d"
                             % (len(v), self.ambient_rank))
        raw = matvec(self.projection, v)
        return self.reduce(raw)

    def reduce(self, coords) -> Vector:
        if len(coords) != self.coord_rank:
            raise ValueError("expected %d coordinates, got %d"
                             % (self.coord_rank, len(coords)))
        return tuple(x % d for x, d in zip(coords, self.torsion)) \
            + tuple(coords[len(self.torsion):])

    def lift_coords(self, coords) -> Vector:
        if len(coords) != self.coord_rank:
            raise ValueError("expected %d coordinates, got %d"
                             % (self.coord_rank, len(coords)))
        return matvec(self.lift, coords)

    def describe(self) -> str:
        parts = ["Z/%d" % d for d in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


def cokernel(m) -> AbelianGroup:
    """The quotient of Z^rows by the column span of m, in normal form.

    Depends only on the column lattice, not on the presenting matrix: the
    columns are HNF-canonicalized first, and the free block of the projection
    is HNF-canonicalized too, so equal quotients of the same ambient space
    get identical projections and lifts.
    """
    m = freeze(m)
    nr = len(m)
    col_canon, _ = hnf(transpose(m))
    m = transpose([row for row in col_canon if any(row)])
    if not m:
        m = tuple(() for _ in range(nr))
    d, u, _, u_inv, _ = _snf_ext(m)
    nc = len(m[0]) if m else 0
    diag = [d[i][i] if i < nc else 0 for i in range(nr)]

    tor_idx = [i for i in range(nr) if diag[i] >= 2]
    free_idx = [i for i in range(nr) if diag[i] == 0]
    torsion = tuple(diag[i] for i in tor_idx)

    u_inv_cols = transpose(u_inv)
    tor_rows = [tuple(x % diag[i] for x in u[i]) for i in tor_idx]
    tor_lift = [u_inv_cols[i] for i in tor_idx]

    free_rows = [u[i] for i in free_idx]
    free_lift = [u_inv_cols[i] for i in free_idx]
    if free_rows:
        # Canonicalize the free coordinates; carry the lift along so that
        # projection o lift stays the identity.
        canon, w, w_inv = _hnf_ext(free_rows)
        free_rows = list(canon)
        lift_m = matmul(transpose(free_lift), w_inv)
        free_lift = list(transpose(lift_m))

    projection = freeze(list(tor_rows) + list(free_rows))
    lift = transpose(list(tor_lift) + list(free_lift)) if (tor_lift or free_lift) \
        else tuple(() for _ in range(nr))

    group = AbelianGroup(ambient_rank=nr, free_rank=len(free_idx),
                         torsion=torsion, projection=projection, lift=lift)
    # Relations must die in the quotient.
    for col in transpose(m) if m else ():
        assert not any(group.project(col)), "projection does not kill a relation"
    return group


def kernel_basis(m) -> Matrix:
    """A canonical basis of the integer kernel of m, as matrix columns.

    The kernel of an integer matrix is saturated by construction; the basis
    is HNF-reduced so equal kernels compare equal.
    """
    m = freeze(m)
    nc = len(m[0]) if m else 0
    h, u = hnf(transpose(m))
    rows = [u[i] for i in range(len(h)) if not any(h[i])]
    if not rows:
        return tuple(() for _ in range(nc))
    canon, _ = hnf(rows)
    return transpose([r for r in canon if any(r)])


def solve_in_span(m, b) -> Vector | None:
    """An integer x with m * x = b, if one exists, else None.

    The solution is deterministic (HNF back-substitution, free coefficients
    zero) and exact; in particular it is unique whenever the columns of m are
    independent.
    """
    m = freeze(m)
    if len(b) != len(m):
        raise ValueError("vector length %d, matrix has %d rows"
                         % (len(b), len(m)))
    nc = len(m[0]) if m else 0
    if nc == 0:
        return () if not any(b) else None
    h, u = hnf(transpose(m))
    res = [int(x) for x in b]
    z = [0] * len(h)
    for i, row in enumerate(h):
        p = next((j for j, x in enumerate(row) if x), None)
        if p is None:
            break
        q, r = divmod(res[p], row[p])
        if r:
            return None
        z[i] = q
        res = [x - q * y for x, y in zip(res, row)]
    if any(res):
        return None
    return tuple(sum(z[i] * u[i][j] for i in range(len(u))) for j in range(nc))
