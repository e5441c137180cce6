"""Affine linear systems over GF(2)."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Sequence

GF2Vector = tuple[int, ...]


@dataclass(frozen=True)
class AffineSolution:
    """Solution set ``particular + span(basis)`` of ``A x = b`` over GF(2).

    ``particular`` is ``None`` when the system is inconsistent.
    """

    length: int
    particular: GF2Vector | None
    basis: tuple[GF2Vector, ...]

    @property
    def is_empty(self) -> bool:
        return self.particular is None

    def __len__(self) -> int:
        return 0 if self.particular is None else 2 ** len(self.basis)

    def __iter__(self) -> Iterator[GF2Vector]:
        if self.particular is None:
            return
        for coeffs in product((0, 1), repeat=len(self.basis)):
            v = list(self.particular)
            for c, vec in zip(coeffs, self.basis):
                if c:
                    v = [x ^ y for x, y in zip(v, vec)]
            yield tuple(v)

    def __contains__(self, x: Sequence[int]) -> bool:
        return any(tuple(v % 2 for v in x) == s for s in self)


def solve_gf2_affine(a: Sequence[Sequence[int]], b: Sequence[int], ncols: int | None = None) -> AffineSolution:
    """Solve ``A x = b`` over GF(2), returning the full affine solution set."""
    rows = [[v % 2 for v in row] + [b[i] % 2] for i, row in enumerate(a)]
    n = len(a[0]) if a else (ncols if ncols is not None else 0)
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                rows[i] = [x ^ y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    if any(row[n] for row in rows[r:]):
        return AffineSolution(n, None, ())
    particular = [0] * n
    for i, col in enumerate(pivots):
        particular[col] = rows[i][n]
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for i, col in enumerate(pivots):
            v[col] = rows[i][f]
        basis.append(tuple(v))
    return AffineSolution(n, tuple(particular), tuple(basis))


def gf2_rank(a: Sequence[Sequence[int]]) -> int:
    n = len(a[0]) if a else 0
    return n - len(solve_gf2_affine(a, [0] * len(a), ncols=n).basis)
