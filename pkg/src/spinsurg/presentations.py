"""Discriminant data of an integral symmetric bilinear form.

For a symmetric integer matrix ``S`` on ``F = Z^n`` the torsion of
``coker(S)`` carries the pairing ``(x, y) -> x^T S^{-1} y mod 1`` and, given a
Wu class ``w`` (``S w = diag S mod 2``), the quadratic refinement
``x -> (x^T S^{-1} x - x^T w) / 2 mod 1``.  Generators and rational
solutions both come from one Smith normal form of ``S``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .forms import FiniteAbelianGroup, GaussBrown, LinkingPairing, QuadraticForm, gauss_brown
from .gf2 import AffineSolution, solve_gf2_affine
from .intmat import SymIntMatrix, inverse_unimodular, signature, smith_normal_form
from .qz import QZ


@dataclass(frozen=True)
class PresentedTorsion:
    """Torsion of ``coker(S)`` with integer lifts ``c_i`` of its generators and
    rational solutions ``z_i`` of ``S z_i = c_i``."""

    free_rank: int
    torsion: FiniteAbelianGroup
    generator_lifts: tuple[tuple[int, ...], ...]
    solutions: tuple[tuple[Fraction, ...], ...]


def presented_group(s: SymIntMatrix) -> PresentedTorsion:
    n = s.n
    u, d, v = smith_normal_form(s.rows, ncols=n)
    u_inv = inverse_unimodular(u) if n else []
    free = sum(1 for k in range(n) if d[k][k] == 0)
    invariants, lifts, sols = [], [], []
    for k in range(n):
        dk = d[k][k]
        if dk > 1:
            c = tuple(u_inv[i][k] for i in range(n))
            z = tuple(Fraction(v[i][k], dk) for i in range(n))
            if s.apply(z) != list(c):
                raise AssertionError("Smith normal form solve failed")
            invariants.append(dk)
            lifts.append(c)
            sols.append(z)
    return PresentedTorsion(free, FiniteAbelianGroup(tuple(invariants)), tuple(lifts), tuple(sols))


def _dot(x: Sequence, y: Sequence) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(x, y)), Fraction(0))


def presented_pairing(s: SymIntMatrix, data: PresentedTorsion | None = None) -> LinkingPairing:
    data = data or presented_group(s)
    c, z = data.generator_lifts, data.solutions
    gram = [[QZ.from_fraction(_dot(ci, zj)) for zj in z] for ci in c]
    return LinkingPairing(data.torsion, gram)


def is_wu_class(s: SymIntMatrix, w: Sequence[int]) -> bool:
    if len(w) != s.n:
        return False
    sw = s.apply(w)
    return all((sw[i] - s[i, i]) % 2 == 0 for i in range(s.n))


def wu_classes_mod2(s: SymIntMatrix) -> AffineSolution:
    """All ``w`` in ``GF(2)^n`` with ``sum_j s_ij w_j = s_ii (mod 2)``."""
    sol = solve_gf2_affine(s.rows, s.diag(), ncols=s.n)
    # the diagonal of a symmetric matrix mod 2 always lies in its column space
    assert not sol.is_empty, "characteristic equation has no solution"
    return sol


def presented_quadratic(s: SymIntMatrix, w: Sequence[int], data: PresentedTorsion | None = None) -> QuadraticForm:
    if not is_wu_class(s, w):
        raise ValueError(f"{list(w)} is not a Wu class of the form")
    data = data or presented_group(s)
    pairing = presented_pairing(s, data)
    qgen = [QZ.from_fraction((_dot(c, z) - _dot(c, w)) / 2) for c, z in zip(data.generator_lifts, data.solutions)]
    return QuadraticForm(data.torsion, tuple(qgen), pairing)


@dataclass(frozen=True)
class VanDerBlijReport:
    lhs: GaussBrown
    rhs: int
    equal: bool


def van_der_blij(s: SymIntMatrix, w: Sequence[int]) -> VanDerBlijReport:
    """Compare the Gauss-Brown invariant of the presented form with
    ``sgn(S) - w^T S w mod 8``."""
    lhs = gauss_brown(presented_quadratic(s, w))
    rhs = (signature(s) - s.bilinear(w, w)) % 8
    return VanDerBlijReport(lhs, rhs, lhs == rhs)
