"""Exact integer linear algebra: Smith and Hermite normal forms, solving
linear systems over the integers (optionally modulo per-row moduli) and
lattice membership.

Matrices are lists of rows of Python ints. Vectors are sequences of ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import InputError

IntMatrix = list[list[int]]


def _check_matrix(a: Sequence[Sequence[int]]) -> tuple[int, int]:
    m = len(a)
    n = len(a[0]) if m else 0
    for row in a:
        if len(row) != n:
            raise InputError("ragged matrix")
    return m, n


def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> IntMatrix:
    return [[0] * n for _ in range(m)]


def transpose(a: Sequence[Sequence[int]], ncols: Optional[int] = None) -> IntMatrix:
    if not a:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*a)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    m, k = _check_matrix(a)
    k2, n = _check_matrix(b)
    if m and k != k2:
        raise InputError("matrix shapes do not compose")
    bt = transpose(b) if b else []
    if not bt:
        return [[0] * n for _ in range(m)]
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence[int]], x: Sequence[int]) -> list[int]:
    return [sum(r * v for r, v in zip(row, x)) for row in a]


def columns_to_matrix(cols: Sequence[Sequence[int]], nrows: int) -> IntMatrix:
    """Stack column vectors side by side into an nrows x len(cols) matrix."""
    return [[c[i] for c in cols] for i in range(nrows)]


# --- Smith normal form -------------------------------------------------------


@dataclass(frozen=True)
class SnfResult:
    u: IntMatrix
    s: IntMatrix
    v: IntMatrix

    def diagonal(self) -> list[int]:
        k = min(len(self.s), len(self.s[0]) if self.s else 0)
        return [self.s[i][i] for i in range(k)]


def _smallest_nonzero(s: IntMatrix, t: int) -> Optional[tuple[int, int]]:
    best = None
    best_abs = 0
    for i in range(t, len(s)):
        row = s[i]
        for j in range(t, len(row)):
            x = row[j]
            if x and (best is None or abs(x) < best_abs):
                best, best_abs = (i, j), abs(x)
    return best


def snf(a: Sequence[Sequence[int]]) -> SnfResult:
    """Smith normal form with unimodular u, v such that u*a*v = s.

    The diagonal is non-negative and each entry divides the next. Pivots are
    chosen as the smallest nonzero absolute value, ties to the lowest row and
    then the lowest column, so the transforms are deterministic.
    """
    m, n = _check_matrix(a)
    s = [list(map(int, row)) for row in a]
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        rs, rd = s[src], s[dst]
        for k in range(n):
            if rs[k]:
                rd[k] += q * rs[k]
        us, ud = u[src], u[dst]
        for k in range(m):
            if us[k]:
                ud[k] += q * us[k]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in s:
            if row[src]:
                row[dst] += q * row[src]
        for row in v:
            if row[src]:
                row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            pos = _smallest_nonzero(s, t)
            if pos is None:
                return SnfResult(u, s, v)
            i, j = pos
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = s[t][t]
            clean = True
            for i in range(t + 1, m):
                if s[i][t]:
                    add_row(i, t, -(s[i][t] // p))
                    if s[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if s[t][j]:
                    add_col(j, t, -(s[t][j] // p))
                    if s[t][j]:
                        clean = False
            if not clean:
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if s[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
    return SnfResult(u, s, v)


# --- Hermite normal form (column style) --------------------------------------


@dataclass(frozen=True)
class HnfBasis:
    """Canonical basis of a sublattice of Z^ambient_rank.

    Basis vectors are columns in echelon form: vector j has its first nonzero
    entry (the pivot, positive) at row pivots[j], pivot rows strictly
    increase, and every other basis vector has its entry in a pivot row
    reduced into [0, pivot). Two lattices are equal iff their HnfBasis are.
    """

    ambient_rank: int
    basis: tuple[tuple[int, ...], ...]
    pivots: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def is_full(self) -> bool:
        return self.rank == self.ambient_rank and all(
            self.basis[j][p] == 1 for j, p in enumerate(self.pivots)
        )

    def index(self) -> int:
        """Index in the ambient lattice; 0 if the rank is deficient."""
        if self.rank < self.ambient_rank:
            return 0
        out = 1
        for j, p in enumerate(self.pivots):
            out *= self.basis[j][p]
        return out

    def coords(self, vec: Sequence[int]) -> Optional[list[int]]:
        """Integer coordinates of vec in this basis, or None if vec is outside."""
        if len(vec) != self.ambient_rank:
            raise InputError("vector length does not match ambient rank")
        res = list(vec)
        out = []
        prev = -1
        for b, p in zip(self.basis, self.pivots):
            for r in range(prev + 1, p):
                if res[r]:
                    return None
            q, rem = divmod(res[p], b[p])
            if rem:
                return None
            if q:
                for r in range(p, self.ambient_rank):
                    if b[r]:
                        res[r] -= q * b[r]
            out.append(q)
            prev = p
        if any(res[prev + 1:]):
            return None
        return out

    def contains(self, vec: Sequence[int]) -> bool:
        return self.coords(vec) is not None

    def contains_lattice(self, other: "HnfBasis") -> bool:
        return all(self.contains(b) for b in other.basis)

    def combine(self, coeffs: Sequence[int]) -> list[int]:
        out = [0] * self.ambient_rank
        for c, b in zip(coeffs, self.basis):
            if c:
                for r in range(self.ambient_rank):
                    out[r] += c * b[r]
        return out


def hnf(vectors: Sequence[Sequence[int]], ambient_rank: Optional[int] = None) -> HnfBasis:
    """Canonical echelon basis of the lattice spanned by the given vectors."""
    vecs = [list(map(int, v)) for v in vectors]
    if ambient_rank is None:
        if not vecs:
            raise InputError("ambient rank needed for an empty generating set")
        ambient_rank = len(vecs[0])
    for v in vecs:
        if len(v) != ambient_rank:
            raise InputError("generator length does not match ambient rank")
    cols = [v for v in vecs if any(v)]
    basis: list[list[int]] = []
    pivots: list[int] = []
    n = ambient_rank
    for r in range(n):
        active = [c for c in cols if c[r]]
        if not active:
            continue
        while len(active) > 1:
            k = min(range(len(active)), key=lambda idx: abs(active[idx][r]))
            piv = active[k]
            for idx, c in enumerate(active):
                if idx != k:
                    q = c[r] // piv[r]
                    for t in range(r, n):
                        if piv[t]:
                            c[t] -= q * piv[t]
            active = [piv] + [c for idx, c in enumerate(active) if idx != k and c[r]]
        piv = active[0]
        if piv[r] < 0:
            for t in range(n):
                piv[t] = -piv[t]
        basis.append(piv)
        pivots.append(r)
        cols = [c for c in cols if c is not piv and any(c)]
    for j, p in enumerate(pivots):
        bj = basis[j]
        for k in range(j):
            q = basis[k][p] // bj[p]
            if q:
                bk = basis[k]
                for t in range(p, n):
                    if bj[t]:
                        bk[t] -= q * bj[t]
    return HnfBasis(n, tuple(tuple(b) for b in basis), tuple(pivots))


def lattice_member(lattice: HnfBasis, v: Sequence[int]) -> bool:
    return lattice.contains(v)


def lattice_sum(*lattices: HnfBasis) -> HnfBasis:
    n = lattices[0].ambient_rank
    return hnf([b for lat in lattices for b in lat.basis], n)


# --- solving -----------------------------------------------------------------


def solve(
    a: Sequence[Sequence[int]],
    b: Sequence[int],
    moduli: Optional[Sequence[int]] = None,
) -> Optional[list[int]]:
    """Find integer x with a*x = b, row i taken modulo moduli[i] (0 = exact).

    Returns None when no integer solution exists.
    """
    m, n = _check_matrix(a)
    if len(b) != m:
        raise InputError("right-hand side length does not match row count")
    if moduli is not None and len(moduli) != m:
        raise InputError("moduli length does not match row count")
    aug = [list(map(int, row)) for row in a]
    if moduli is not None:
        extra = [i for i, q in enumerate(moduli) if q]
        for row_idx, row in enumerate(aug):
            row.extend(moduli[row_idx] if i == row_idx else 0 for i in extra)
    ncols = len(aug[0]) if m else n
    if ncols == 0:
        return [] if not any(b) else None
    res = snf(aug)
    c = matvec(res.u, b)
    z = [0] * ncols
    for i in range(m):
        d = res.s[i][i] if i < ncols else 0
        if d == 0:
            if c[i]:
                return None
        else:
            q, rem = divmod(c[i], d)
            if rem:
                return None
            z[i] = q
    x = matvec(res.v, z)
    return x[:n]


def kernel_basis(a: Sequence[Sequence[int]], ncols: Optional[int] = None) -> list[list[int]]:
    """Basis of the integer kernel {x : a*x = 0}."""
    if not a:
        k = ncols or 0
        return identity(k)
    m, n = _check_matrix(a)
    res = snf(a)
    r = sum(1 for d in res.diagonal() if d)
    return [[res.v[i][j] for i in range(n)] for j in range(r, n)]


# --- rational helpers ----------------------------------------------------------


def det(a: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n, n2 = _check_matrix(a)
    if n != n2:
        raise InputError("determinant of a non-square matrix")
    if n == 0:
        return 1
    m = [list(map(int, row)) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rational_inverse(a: Sequence[Sequence]) -> list[list[Fraction]]:
    """Inverse over Q by Gauss-Jordan; raises InputError when singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise InputError("singular matrix")
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def unimodular_inverse(a: Sequence[Sequence[int]]) -> IntMatrix:
    inv = rational_inverse(a)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise InputError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


def rational_rank(vectors: Sequence[Sequence]) -> int:
    """Rank over Q of a list of vectors."""
    return len(RationalEchelon.of(vectors).rows)


class RationalEchelon:
    """Incremental row echelon form over Q, for independence tests."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[list[Fraction]] = []
        self.pivots: list[int] = []

    @classmethod
    def of(cls, vectors: Sequence[Sequence]) -> "RationalEchelon":
        vectors = list(vectors)
        ech = cls(len(vectors[0]) if vectors else 0)
        for v in vectors:
            ech.add(v)
        return ech

    def reduce(self, v: Sequence) -> list[Fraction]:
        w = [Fraction(x) for x in v]
        for row, p in zip(self.rows, self.pivots):
            if w[p] != 0:
                f = w[p]
                w = [x - f * y for x, y in zip(w, row)]
        return w

    def add(self, v: Sequence) -> bool:
        """Insert v; return False if it was already in the span."""
        w = self.reduce(v)
        p = next((i for i, x in enumerate(w) if x != 0), None)
        if p is None:
            return False
        inv = 1 / w[p]
        w = [x * inv for x in w]
        for idx, row in enumerate(self.rows):
            if row[p] != 0:
                f = row[p]
                self.rows[idx] = [x - f * y for x, y in zip(row, w)]
        self.rows.append(w)
        self.pivots.append(p)
        return True


def rational_solve(a: Sequence[Sequence], b: Sequence) -> Optional[list[Fraction]]:
    """Some rational solution of a*x = b, or None."""
    m = len(a)
    n = len(a[0]) if m else 0
    aug = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    piv_cols = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    if any(aug[i][n] != 0 for i in range(r, m)):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        x[c] = aug[i][n]
    return x
