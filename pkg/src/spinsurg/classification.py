"""Isomorphism of linking pairings and quadratic forms on finite abelian groups.

Pairings on 2-groups are compared through the Kawauchi-Kojima invariants
``(r_k, sigma_k)``; odd primary parts are compared by exhaustive search.  A
nondegenerate quadratic form is determined up to isomorphism by its pairing
and its Gauss-Brown invariant.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Sequence

from .forms import (
    FiniteAbelianGroup,
    FormLike,
    GaussBrown,
    GroupElement,
    GroupTooLargeError,
    INFINITY,
    LinkingPairing,
    QuadraticForm,
    _valuation,
    gauss_brown,
    is_nondegenerate,
    p_primary_decomposition,
    quad_refinements,
)
from .gf2 import solve_gf2_affine
from .qz import QZ

#: Default largest group order for :func:`brute_force_iso`.
BRUTE_FORCE_CAP = 2 ** 12


@dataclass(frozen=True)
class KKInvariants:
    """``levels[k-1] = (r_k, sigma_k)`` for ``k = 1 .. K``."""

    levels: tuple[tuple[int, GaussBrown], ...]

    def rank(self, k: int) -> int:
        return self.levels[k - 1][0] if 0 < k <= len(self.levels) else 0

    def sigma(self, k: int) -> GaussBrown:
        if k > len(self.levels):
            return GaussBrown(0)
        return self.levels[k - 1][1]

    def to_json(self) -> list[dict]:
        return [{"k": k, "r": r, "sigma": s.to_json()} for k, (r, s) in enumerate(self.levels, start=1)]


def _two_exponents(group: FiniteAbelianGroup) -> list[int]:
    if not group.is_p_group(2):
        raise ValueError(f"{group} is not a 2-group")
    return [_valuation(d, 2) for d in group.invariants]


@lru_cache(maxsize=4096)
def kk_invariants(b: LinkingPairing) -> KKInvariants:
    """Kawauchi-Kojima invariants of a nondegenerate pairing on a 2-group.

    In invariant-factor coordinates ``G~_k`` has basis the generators of order
    exactly ``2^k``, so ``b~_k`` and ``c~_k`` are read off that block and
    ``q_k`` lives on the images of the longer generators in ``G / G_k``.
    """
    exps = _two_exponents(b.group)
    if not is_nondegenerate(b):
        raise ValueError("pairing is degenerate")
    top = max(exps, default=0)
    den, num = b.denominator, b.numerators
    levels = []
    for k in range(1, top + 1):
        block = [i for i, e in enumerate(exps) if e == k]
        mat = []
        for i in block:
            row = []
            for j in block:
                v = (2 ** (k - 1) * num[i][j]) % den
                if 2 * v % den:
                    raise AssertionError("reduced pairing is not 2-valued")
                row.append(int(v != 0))
            mat.append(row)
        diag = [mat[a][a] for a in range(len(block))]
        sol = solve_gf2_affine(mat, diag, ncols=len(block))
        if sol.is_empty or sol.basis:
            raise AssertionError(f"reduced pairing at level {k} is degenerate")
        if any(sol.particular):
            levels.append((len(block), INFINITY))
            continue
        longer = [i for i, e in enumerate(exps) if e > k]
        if not longer:
            levels.append((len(block), GaussBrown(0)))
            continue
        quotient = FiniteAbelianGroup(tuple(2 ** (exps[i] - k) for i in longer))
        qgen = tuple(2 ** (k - 1) * b.gram[i][i] for i in longer)
        gram = tuple(tuple(2 ** k * b.gram[i][j] for j in longer) for i in longer)
        qk = QuadraticForm(quotient, qgen, LinkingPairing(quotient, gram))
        levels.append((len(block), gauss_brown(qk)))
    return KKInvariants(tuple(levels))


def is_special(b: LinkingPairing) -> bool:
    """2-group without a direct summand of order two."""
    return all(e >= 2 for e in _two_exponents(b.group))


def wall_psi(b: LinkingPairing) -> QuadraticForm:
    """Wall's construction: from a special pairing ``(G', b')`` to the form
    ``q(pi x') = b'(x', x')`` on ``G'/T2(G')``."""
    exps = _two_exponents(b.group)
    if not all(e >= 2 for e in exps):
        raise ValueError("pairing is not special: the group has a Z/2 summand")
    if not is_nondegenerate(b):
        raise ValueError("pairing is degenerate")
    gens = b.group.generators()
    t2 = [2 ** (e - 1) * g for e, g in zip(exps, gens)]
    for g in gens:
        for t in t2:
            if b(g + t, g + t) != b(g, g):
                raise AssertionError("b'(x', x') depends on the lift of x")
    quotient = FiniteAbelianGroup(tuple(2 ** (e - 1) for e in exps))
    qgen = tuple(b.gram[i][i] for i in range(len(exps)))
    gram = tuple(tuple(2 * v for v in row) for row in b.gram)
    return QuadraticForm(quotient, qgen, LinkingPairing(quotient, gram))


@dataclass(frozen=True)
class IsoWitness:
    """Images of the generators of the source group under an isomorphism."""

    images: tuple[GroupElement, ...]

    def __call__(self, x: GroupElement) -> GroupElement:
        out = self.images[0].group.zero if self.images else x
        for a, im in zip(x.coords, self.images):
            out = out + a * im
        return out


def brute_force_iso(f1: FormLike, f2: FormLike, cap: int = BRUTE_FORCE_CAP) -> IsoWitness | None:
    """Exhaustive search for an isomorphism between two pairings or two
    quadratic forms.

    Generator ``g_i`` may only go to elements of the same order and the same
    self-value (``q`` or ``b(x, x)``); mutual pairings of the images are
    checked as soon as they are assigned.  Returns ``None`` when no
    isomorphism exists.
    """
    quadratic = isinstance(f1, QuadraticForm)
    if quadratic != isinstance(f2, QuadraticForm):
        raise TypeError("cannot compare a pairing with a quadratic form")
    g1, g2 = f1.group, f2.group
    for g in (g1, g2):
        if g.order > cap:
            raise GroupTooLargeError(f"group of order {g.order} exceeds the search cap {cap}")
    if g1.order != g2.order:
        return None
    b1 = f1.pairing if quadratic else f1
    b2 = f2.pairing if quadratic else f2
    den = math.lcm(f1.denominator, f2.denominator)

    def ints(form: FormLike):
        bb = form.pairing if quadratic else form
        nb = [[v.numerator * (den // v.denominator) for v in row] for row in bb.gram]
        nq = [v.numerator * (den // v.denominator) for v in form.qgen] if quadratic else None
        return nb, nq

    nb1, nq1 = ints(f1)
    nb2, nq2 = ints(f2)
    n1, n2 = g1.rank, g2.rank
    elems = list(product(*(range(d) for d in g2.invariants)))
    orders = [GroupElement(g2, e).order for e in elems]
    row_images = [[sum(e[a] * nb2[a][c] for a in range(n2)) for c in range(n2)] for e in elems]

    def self_value(idx):
        e = elems[idx]
        if quadratic:
            t = 0
            for a in range(n2):
                if e[a]:
                    t += e[a] * e[a] * nq2[a]
                    for c in range(a + 1, n2):
                        t += e[a] * e[c] * nb2[a][c]
            return t % den
        return sum(row_images[idx][c] * e[c] for c in range(n2)) % den

    values = [self_value(i) for i in range(len(elems))]

    def pair(i, j):
        return sum(row_images[i][c] * elems[j][c] for c in range(n2)) % den

    targets = [(nq1[i] if quadratic else nb1[i][i]) % den for i in range(n1)]
    candidates = [
        [idx for idx in range(len(elems)) if orders[idx] == d and values[idx] == targets[i]]
        for i, d in enumerate(g1.invariants)
    ]
    chosen: list[int] = []

    def generates() -> bool:
        span = {tuple([0] * n2)}
        for idx in chosen:
            e = elems[idx]
            span = {tuple((s[a] + k * e[a]) % g2.invariants[a] for a in range(n2)) for s in span for k in range(orders[idx])}
        return len(span) == g2.order

    def search(i: int) -> bool:
        if i == n1:
            return generates()
        for idx in candidates[i]:
            if all(pair(chosen[j], idx) == nb1[j][i] % den for j in range(i)):
                chosen.append(idx)
                if search(i + 1):
                    return True
                chosen.pop()
        return False

    if not search(0):
        return None
    return IsoWitness(tuple(GroupElement(g2, elems[idx]) for idx in chosen))


def pairing_iso(b1: LinkingPairing, b2: LinkingPairing, cap: int = BRUTE_FORCE_CAP) -> bool:
    """Isomorphism of nondegenerate pairings, decided prime by prime."""
    for b in (b1, b2):
        if not is_nondegenerate(b):
            raise ValueError("pairing is degenerate")
    if b1.group != b2.group:
        return False
    for (p, part1), (_, part2) in zip(p_primary_decomposition(b1), p_primary_decomposition(b2)):
        if p == 2:
            if kk_invariants(part1) != kk_invariants(part2):
                return False
        elif brute_force_iso(part1, part2, cap) is None:
            return False
    return True


def quadratic_iso(q1: QuadraticForm, q2: QuadraticForm, cap: int = BRUTE_FORCE_CAP) -> bool:
    """Isomorphism of nondegenerate quadratic forms: same pairing up to
    isomorphism and same Gauss-Brown invariant."""
    return pairing_iso(q1.pairing, q2.pairing, cap) and gauss_brown(q1) == gauss_brown(q2)


# -- desk-scale corpora -------------------------------------------------------

def enumerate_groups(max_order: int) -> Iterator[FiniteAbelianGroup]:
    """Every finite abelian group of order at most ``max_order``, once each."""

    def chains(prefix: tuple[int, ...], prod: int):
        yield prefix
        last = prefix[-1] if prefix else 1
        # next factor is a multiple of the last one; later factors only grow,
        # so the product bound also bounds the whole tail
        d = last if prefix else 2
        while prod * d <= max_order:
            yield from chains(prefix + (d,), prod * d)
            d += last if prefix else 1

    for inv in chains((), 1):
        yield FiniteAbelianGroup(inv)


def enumerate_pairings(group: FiniteAbelianGroup, nondegenerate: bool = True) -> Iterator[LinkingPairing]:
    """All symmetric Gram matrices with ``b(g_i, g_j)`` in ``(1/gcd(d_i, d_j)) Z / Z``."""
    inv = group.invariants
    n = len(inv)
    slots = [(i, j) for i in range(n) for j in range(i, n)]
    ranges = [range(math.gcd(inv[i], inv[j])) for i, j in slots]
    for values in product(*ranges):
        gram = [[QZ(0)] * n for _ in range(n)]
        for (i, j), a in zip(slots, values):
            gram[i][j] = gram[j][i] = QZ(a, math.gcd(inv[i], inv[j]))
        b = LinkingPairing(group, tuple(tuple(r) for r in gram))
        if not nondegenerate or is_nondegenerate(b):
            yield b


def enumerate_quadratic_forms(group: FiniteAbelianGroup) -> Iterator[QuadraticForm]:
    """All nondegenerate quadratic forms on ``group``: the refinements of every
    nondegenerate pairing."""
    for b in enumerate_pairings(group):
        yield from quad_refinements(b)
