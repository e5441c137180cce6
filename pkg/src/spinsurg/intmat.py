"""Integer matrices: symmetric forms, Smith normal form, exact signature.

Matrices are plain ``list[list[int]]`` (or tuples of tuples) with Python
integers, so nothing overflows.  :class:`SymIntMatrix` is the immutable
symmetric type used for linking matrices and bilinear forms.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Matrix = list[list[int]]


class SymIntMatrix:
    """Immutable symmetric integer matrix; the 0x0 matrix is allowed."""

    __slots__ = ("_rows",)

    def __init__(self, rows: Iterable[Iterable[int]] = ()):
        rows = tuple(tuple(int(v) for v in row) for row in rows)
        n = len(rows)
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError(f"row {i} has length {len(row)}, expected {n}")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"matrix is not symmetric at ({i}, {j})")
        self._rows = rows

    @classmethod
    def diagonal(cls, entries: Sequence[int]) -> SymIntMatrix:
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int) -> SymIntMatrix:
        return cls([[0] * n for _ in range(n)])

    @property
    def n(self) -> int:
        return len(self._rows)

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._rows[i][j]

    def __len__(self) -> int:
        return len(self._rows)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SymIntMatrix) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        return f"SymIntMatrix({[list(r) for r in self._rows]})"

    def tolist(self) -> Matrix:
        return [list(r) for r in self._rows]

    def diag(self) -> list[int]:
        return [self._rows[i][i] for i in range(self.n)]

    def __neg__(self) -> SymIntMatrix:
        return SymIntMatrix([[-v for v in row] for row in self._rows])

    def direct_sum(self, other: SymIntMatrix) -> SymIntMatrix:
        return block_sum(self, other)

    def bilinear(self, x: Sequence[int], y: Sequence[int]) -> int:
        return sum(x[i] * self._rows[i][j] * y[j] for i in range(self.n) for j in range(self.n))

    def apply(self, x: Sequence) -> list:
        return [sum(a * b for a, b in zip(row, x)) for row in self._rows]


def block_sum(*blocks: SymIntMatrix) -> SymIntMatrix:
    n = sum(b.n for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i in range(b.n):
            for j in range(b.n):
                out[off + i][off + j] = b[i, j]
        off += b.n
    return SymIntMatrix(out)


HYPERBOLIC = SymIntMatrix([[0, 1], [1, 0]])

# E8 as a plumbing matrix: chain 1-2-3-4-5-6-7 with node 8 attached to node 5.
GAMMA8 = SymIntMatrix([
    [2, 1, 0, 0, 0, 0, 0, 0],
    [1, 2, 1, 0, 0, 0, 0, 0],
    [0, 1, 2, 1, 0, 0, 0, 0],
    [0, 0, 1, 2, 1, 0, 0, 0],
    [0, 0, 0, 1, 2, 1, 0, 1],
    [0, 0, 0, 0, 1, 2, 1, 0],
    [0, 0, 0, 0, 0, 1, 2, 0],
    [0, 0, 0, 0, 1, 0, 0, 2],
])


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(a))]


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    if not a:
        return []
    return [list(col) for col in zip(*a)]


def determinant(a: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    m = [list(r) for r in a]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
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


def is_unimodular(a: Sequence[Sequence[int]]) -> bool:
    return abs(determinant(a)) == 1


def inverse_unimodular(a: Sequence[Sequence[int]]) -> Matrix:
    """Integer inverse of a matrix with determinant +-1."""
    n = len(a)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    inv = [row[n:] for row in aug]
    if any(v.denominator != 1 for row in inv for v in row):
        raise ValueError("matrix is not unimodular")
    return [[int(v) for v in row] for row in inv]


def smith_normal_form(m: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(U, D, V)`` with ``U @ M @ V == D``.

    ``U`` and ``V`` are unimodular, ``D`` is diagonal with nonnegative entries
    ``d1 | d2 | ... | dr`` and the zero entries last.  ``ncols`` is only needed
    for matrices with no rows.
    """
    a = [list(r) for r in m]
    rows = len(a)
    cols = len(a[0]) if rows else (ncols or 0)
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):
        # row_dst += k * row_src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, k):
        for row in a:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    for t in range(min(rows, cols)):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
                    clean = clean and a[t][j] == 0
            if not clean:
                # a remainder smaller than the pivot survived; make it the pivot
                cand = [(abs(a[i][t]), i, t) for i in range(t + 1, rows) if a[i][t]]
                cand += [(abs(a[t][j]), t, j) for j in range(t + 1, cols) if a[t][j]]
                _, i, j = min(cand)
                if i != t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return u, a, v


def elementary_divisors(m: Sequence[Sequence[int]]) -> list[int]:
    _, d, _ = smith_normal_form(m)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def rank(m: Sequence[Sequence[int]]) -> int:
    """Rank over Q by exact Gaussian elimination."""
    a = [[Fraction(v) for v in row] for row in m]
    r = 0
    cols = len(a[0]) if a else 0
    for col in range(cols):
        piv = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, len(a)):
            if a[i][col] != 0:
                f = a[i][col] / a[r][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def kernel_rank(s: SymIntMatrix) -> int:
    return s.n - rank(s.rows)


def signature(s: SymIntMatrix) -> int:
    """Exact signature by congruence diagonalization over Q.

    Uses 1x1 pivots while a nonzero diagonal entry remains, and a 2x2
    hyperbolic pivot ``[[0, c], [c, 0]]`` (contributing +1 and -1) when the
    remaining diagonal is zero but some off-diagonal entry is not.
    """
    a = [[Fraction(v) for v in row] for row in s.rows]
    idx = list(range(s.n))
    sig = 0
    while idx:
        i = next((k for k in idx if a[k][k] != 0), None)
        if i is not None:
            p = a[i][i]
            sig += 1 if p > 0 else -1
            idx.remove(i)
            for k in idx:
                if a[k][i] != 0:
                    f = a[k][i] / p
                    for l in idx:
                        a[k][l] -= f * a[i][l]
            continue
        pair = next(((k, l) for k in idx for l in idx if k < l and a[k][l] != 0), None)
        if pair is None:
            break
        i, j = pair
        c = a[i][j]
        idx.remove(i)
        idx.remove(j)
        # subtract the rank-2 part: A_kl -= (A_ki A_jl + A_kj A_il) / c
        col_i = {k: a[k][i] for k in idx}
        col_j = {k: a[k][j] for k in idx}
        for k in idx:
            for l in idx:
                a[k][l] -= (col_i[k] * col_j[l] + col_j[k] * col_i[l]) / c
    return sig


def congruent_transform(s: SymIntMatrix, p: Sequence[Sequence[int]]) -> SymIntMatrix:
    """Return ``P^T S P`` for a unimodular ``P``."""
    if len(p) != s.n or any(len(row) != s.n for row in p):
        raise ValueError("size mismatch between form and basis change")
    if not is_unimodular(p):
        raise ValueError("basis change is not unimodular")
    return SymIntMatrix(matmul(matmul(transpose(p), s.rows), p)) if s.n else s


def is_even(s: SymIntMatrix) -> bool:
    return all(v % 2 == 0 for v in s.diag())
