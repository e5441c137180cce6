"""Spin surgery presentations and the equivalence deciders.

A closed spin 3-manifold is given by the linking matrix ``B`` of a framed
link in S^3 together with a characteristic solution ``s`` (``B s = diag B``
mod 2).  Its invariants are the first Betti number, the torsion linking form
presented by ``-B``, the quadratic form presented by ``(-B, s)`` and the
Rochlin invariant mod 8.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .classification import pairing_iso, quadratic_iso
from .forms import LinkingPairing, QuadraticForm, gauss_brown
from .gf2 import GF2Vector
from .intmat import (
    GAMMA8,
    HYPERBOLIC,
    SymIntMatrix,
    block_sum,
    congruent_transform,
    identity,
    inverse_unimodular,
    is_even,
    kernel_rank,
    signature,
)
from .presentations import is_wu_class, presented_pairing, presented_quadratic, wu_classes_mod2


class PreconditionError(ValueError):
    """A move or decision was applied to data violating its precondition."""


@dataclass(frozen=True)
class SpinPresentation:
    matrix: SymIntMatrix
    spin: GF2Vector = ()

    def __post_init__(self):
        if not isinstance(self.matrix, SymIntMatrix):
            object.__setattr__(self, "matrix", SymIntMatrix(self.matrix))
        spin = tuple(int(v) % 2 for v in self.spin)
        object.__setattr__(self, "spin", spin)
        if len(spin) != self.matrix.n:
            raise PreconditionError(f"spin vector has length {len(spin)}, matrix has size {self.matrix.n}")
        if not is_wu_class(self.matrix, spin):
            raise PreconditionError(f"{list(spin)} is not a characteristic solution")


@dataclass(frozen=True)
class SpinInvariants:
    betti1: int
    phi: QuadraticForm
    rochlin_mod8: int


def spin_structures(b: SymIntMatrix) -> list[GF2Vector]:
    """All characteristic solutions of ``b``; one per spin structure."""
    return list(wu_classes_mod2(b))


def manifold_invariants(b: SymIntMatrix) -> tuple[int, LinkingPairing]:
    """First Betti number and torsion linking form."""
    return kernel_rank(b), presented_pairing(-b)


def rochlin_mod8(p: SpinPresentation) -> int:
    return (signature(p.matrix) - p.matrix.bilinear(p.spin, p.spin)) % 8


def spin_invariants(p: SpinPresentation) -> SpinInvariants:
    phi = presented_quadratic(-p.matrix, p.spin)
    r = rochlin_mod8(p)
    if gauss_brown(phi) != -r:
        raise AssertionError(f"Gauss-Brown invariant {gauss_brown(phi)} disagrees with -R = {-r % 8}")
    return SpinInvariants(kernel_rank(p.matrix), phi, r)


# -- moves ------------------------------------------------------------------

def y_surgery(p: SpinPresentation, leaf_linkings: Sequence[int], framing: int) -> SpinPresentation:
    """Borromean surgery seen as surgery on a two-component link ``K``.

    The first component of ``K`` links ``L_i`` ``leaf_linkings[i]`` times and
    has framing ``framing``; the second is a 0-framed meridian of the first.
    The spin vector is extended by ``(0, framing + sum x_i s_i)``.
    """
    n = p.matrix.n
    if len(leaf_linkings) != n:
        raise PreconditionError(f"expected {n} leaf linking numbers, got {len(leaf_linkings)}")
    rows = [list(r) + [leaf_linkings[i], 0] for i, r in enumerate(p.matrix.rows)]
    rows.append(list(leaf_linkings) + [framing, 1])
    rows.append([0] * n + [1, 0])
    last = (framing + sum(x * s for x, s in zip(leaf_linkings, p.spin))) % 2
    return SpinPresentation(SymIntMatrix(rows), p.spin + (0, last))


def blow_up(p: SpinPresentation, sign: int = 1) -> SpinPresentation:
    """Add a split ``+-1``-framed unknot with spin bit 1."""
    if sign not in (1, -1):
        raise PreconditionError("blow-up sign must be +1 or -1")
    return SpinPresentation(block_sum(p.matrix, SymIntMatrix([[sign]])), p.spin + (1,))


def blow_down(p: SpinPresentation, index: int) -> SpinPresentation:
    """Remove a split ``+-1``-framed component carrying spin bit 1."""
    b = p.matrix
    if not 0 <= index < b.n:
        raise PreconditionError(f"component {index} out of range")
    if b[index, index] not in (1, -1):
        raise PreconditionError(f"component {index} has framing {b[index, index]}, not +-1")
    if any(b[index, j] for j in range(b.n) if j != index):
        raise PreconditionError(f"component {index} links other components")
    if p.spin[index] != 1:
        raise PreconditionError(f"component {index} has spin bit 0")
    keep = [i for i in range(b.n) if i != index]
    return SpinPresentation(SymIntMatrix([[b[i, j] for j in keep] for i in keep]), tuple(p.spin[i] for i in keep))


def change_basis(p: SpinPresentation, basis: Sequence[Sequence[int]]) -> SpinPresentation:
    """Congruence ``B -> P^T B P`` with the spin vector carried to ``P^{-1} s``."""
    try:
        new = congruent_transform(p.matrix, basis)
    except ValueError as exc:
        raise PreconditionError(str(exc)) from exc
    inv = inverse_unimodular(basis) if p.matrix.n else []
    spin = tuple(sum(inv[i][j] * p.spin[j] for j in range(len(p.spin))) % 2 for i in range(len(p.spin)))
    return SpinPresentation(new, spin)


def handle_slide(p: SpinPresentation, i: int, j: int, sign: int = 1) -> SpinPresentation:
    """Handle slide as the elementary congruence ``P = I + sign * E_ij``:
    basis vector ``j`` becomes ``e_j + sign * e_i``."""
    n = p.matrix.n
    if i == j:
        raise PreconditionError("cannot slide a component over itself")
    if not (0 <= i < n and 0 <= j < n):
        raise PreconditionError(f"component index out of range for size {n}")
    if sign not in (1, -1):
        raise PreconditionError("slide sign must be +1 or -1")
    basis = identity(n)
    basis[i][j] = sign
    return change_basis(p, basis)


def reverse_orientation(p: SpinPresentation, i: int) -> SpinPresentation:
    n = p.matrix.n
    if not 0 <= i < n:
        raise PreconditionError(f"component {i} out of range")
    basis = identity(n)
    basis[i][i] = -1
    return change_basis(p, basis)


def stabilize_H(p: SpinPresentation) -> SpinPresentation:
    """Connected sum with S^3 presented by the 0-framed Hopf link."""
    return SpinPresentation(block_sum(p.matrix, HYPERBOLIC), p.spin + (0, 0))


def stabilize_Gamma8(p: SpinPresentation) -> SpinPresentation:
    """Connected sum with the Poincare sphere presented by the E8 plumbing."""
    return SpinPresentation(block_sum(p.matrix, GAMMA8), p.spin + (0,) * 8)


# -- equivalence deciders -------------------------------------------------------

def ys_equivalent(p1: SpinPresentation, p2: SpinPresentation) -> bool:
    """Spin Borromean equivalence: equal Betti numbers and isomorphic
    quadratic forms.  Cross-checked against (linking forms, Rochlin mod 8)."""
    inv1, inv2 = spin_invariants(p1), spin_invariants(p2)
    if inv1.betti1 != inv2.betti1:
        return False
    by_phi = quadratic_iso(inv1.phi, inv2.phi)
    by_rochlin = pairing_iso(inv1.phi.pairing, inv2.phi.pairing) and inv1.rochlin_mod8 == inv2.rochlin_mod8
    if by_phi != by_rochlin:
        raise AssertionError("quadratic-form and (linking form, Rochlin) criteria disagree")
    return by_phi


def y_equivalent(b1: SymIntMatrix, b2: SymIntMatrix) -> bool:
    """Borromean equivalence of the underlying manifolds."""
    beta1, lam1 = manifold_invariants(b1)
    beta2, lam2 = manifold_invariants(b2)
    return beta1 == beta2 and pairing_iso(lam1, lam2)


def stably_equivalent_even(s1: SymIntMatrix, s2: SymIntMatrix) -> bool:
    """Stable equivalence of even forms under sums with H and Gamma8."""
    for s in (s1, s2):
        if not is_even(s):
            raise PreconditionError("form is not even")
    if kernel_rank(s1) != kernel_rank(s2):
        return False
    return quadratic_iso(presented_quadratic(s1, [0] * s1.n), presented_quadratic(s2, [0] * s2.n))
