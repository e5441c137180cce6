"""Finite abelian groups with Q/Z-valued pairings and quadratic forms.

Groups are given by invariant factors ``d1 | d2 | ... | dn`` and forms are
stored by their values on the standard generators; everything else is
expanded by bilinearity.  Gauss sums are evaluated by enumerating the group,
one primary component at a time.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache, reduce
from itertools import product
from typing import Iterator, Sequence, Union

import numpy as np

from .intmat import inverse_unimodular, smith_normal_form
from .qz import QZ, ZERO

#: Largest group listed element by element (``elements()``, kernels, searches).
ELEMENT_CAP = 2 ** 16
#: Largest primary component summed by the vectorized Gauss-sum routine.
VECTOR_CAP = 2 ** 22
#: Tolerance for the modulus and angle checks on normalized Gauss sums.
GAUSS_TOL = 1e-6


class GroupTooLargeError(ValueError):
    """A group exceeds the enumeration cap."""


class GaussSumError(RuntimeError):
    """A normalized Gauss sum is neither 0 nor an 8th root of unity."""


def _lcm(values) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _valuation(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """``Z/d1 + ... + Z/dn`` with ``d1 | d2 | ... | dn`` and every ``di >= 2``."""

    invariants: tuple[int, ...] = ()

    def __post_init__(self):
        inv = tuple(int(d) for d in self.invariants)
        object.__setattr__(self, "invariants", inv)
        for d in inv:
            if d < 2:
                raise ValueError(f"invariant factors must be >= 2, got {inv}")
        for a, b in zip(inv, inv[1:]):
            if b % a:
                raise ValueError(f"invariant factors must form a divisibility chain, got {inv}")

    @property
    def rank(self) -> int:
        return len(self.invariants)

    @property
    def order(self) -> int:
        return math.prod(self.invariants)

    @property
    def exponent(self) -> int:
        return self.invariants[-1] if self.invariants else 1

    def primes(self) -> list[int]:
        return prime_factors(self.order)

    def is_p_group(self, p: int) -> bool:
        return all(d == p ** _valuation(d, p) for d in self.invariants)

    @property
    def zero(self) -> GroupElement:
        return GroupElement(self, (0,) * self.rank)

    def element(self, coords: Sequence[int]) -> GroupElement:
        return GroupElement(self, tuple(coords))

    def generators(self) -> list[GroupElement]:
        return [self.element(tuple(int(i == j) for j in range(self.rank))) for i in range(self.rank)]

    def check_size(self, cap: int = ELEMENT_CAP) -> None:
        if self.order > cap:
            raise GroupTooLargeError(f"group of order {self.order} exceeds the enumeration cap {cap}")

    def elements(self, cap: int = ELEMENT_CAP) -> Iterator[GroupElement]:
        """All elements, coordinates in lexicographic order."""
        self.check_size(cap)
        for coords in product(*(range(d) for d in self.invariants)):
            yield GroupElement(self, coords)

    def two_torsion(self) -> list[GroupElement]:
        """The subgroup ``T2(G)`` of elements of order at most 2."""
        choices = [(0, d // 2) if d % 2 == 0 else (0,) for d in self.invariants]
        return [self.element(c) for c in product(*choices)]

    def __str__(self) -> str:
        if not self.invariants:
            return "0"
        return " + ".join(f"Z/{d}" for d in self.invariants)


@dataclass(frozen=True)
class GroupElement:
    group: FiniteAbelianGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        inv = self.group.invariants
        if len(self.coords) != len(inv):
            raise ValueError(f"expected {len(inv)} coordinates, got {len(self.coords)}")
        object.__setattr__(self, "coords", tuple(int(a) % d for a, d in zip(self.coords, inv)))

    def _same(self, other: GroupElement) -> None:
        if other.group != self.group:
            raise ValueError("elements belong to different groups")

    def __add__(self, other: GroupElement) -> GroupElement:
        self._same(other)
        return GroupElement(self.group, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: GroupElement) -> GroupElement:
        self._same(other)
        return GroupElement(self.group, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> GroupElement:
        return GroupElement(self.group, tuple(-a for a in self.coords))

    def __mul__(self, k: int) -> GroupElement:
        return GroupElement(self.group, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    @property
    def order(self) -> int:
        return _lcm(d // math.gcd(a, d) for a, d in zip(self.coords, self.group.invariants))

    def is_zero(self) -> bool:
        return not any(self.coords)


def _as_qz(v) -> QZ:
    if isinstance(v, QZ):
        return v
    if isinstance(v, str):
        return QZ.parse(v)
    return QZ.from_fraction(Fraction(v))


@dataclass(frozen=True)
class LinkingPairing:
    """Symmetric bilinear ``G x G -> Q/Z`` given by its Gram matrix on the
    generators.  Nondegeneracy is not required; see :func:`pairing_kernel`."""

    group: FiniteAbelianGroup
    gram: tuple[tuple[QZ, ...], ...]

    def __post_init__(self):
        gram = tuple(tuple(_as_qz(v) for v in row) for row in self.gram)
        object.__setattr__(self, "gram", gram)
        inv = self.group.invariants
        n = len(inv)
        if len(gram) != n or any(len(row) != n for row in gram):
            raise ValueError(f"gram matrix must be {n}x{n}")
        for i in range(n):
            for j in range(n):
                if gram[i][j] != gram[j][i]:
                    raise ValueError(f"gram matrix is not symmetric at ({i}, {j})")
                if not (inv[i] * gram[i][j]).is_zero():
                    raise ValueError(f"b(g{i}, g{j}) = {gram[i][j]} is not killed by the order {inv[i]} of g{i}")

    @cached_property
    def denominator(self) -> int:
        return _lcm(v.denominator for row in self.gram for v in row)

    @cached_property
    def numerators(self) -> tuple[tuple[int, ...], ...]:
        """Gram entries as integers over :attr:`denominator`."""
        den = self.denominator
        return tuple(tuple(v.numerator * (den // v.denominator) for v in row) for row in self.gram)

    @cached_property
    def kernel_order(self) -> int:
        """``|ker b|``, counted per primary component."""
        return math.prod(_component_sums(part, VECTOR_CAP)[1] for _, part in p_primary_decomposition(self))

    def __call__(self, x: GroupElement, y: GroupElement) -> QZ:
        return eval_pairing(self, x, y)


@dataclass(frozen=True)
class QuadraticForm:
    """Quadratic refinement ``q`` of a pairing, stored by ``q(g_i)``."""

    group: FiniteAbelianGroup
    qgen: tuple[QZ, ...]
    pairing: LinkingPairing = field(default=None)

    def __post_init__(self):
        qgen = tuple(_as_qz(v) for v in self.qgen)
        object.__setattr__(self, "qgen", qgen)
        inv = self.group.invariants
        if len(qgen) != len(inv):
            raise ValueError(f"expected {len(inv)} generator values, got {len(qgen)}")
        if self.pairing is None:
            # only the diagonal is implied; off-diagonal values default to 0
            gram = [[ZERO] * len(inv) for _ in inv]
            for i, v in enumerate(qgen):
                gram[i][i] = 2 * v
            object.__setattr__(self, "pairing", LinkingPairing(self.group, gram))
        if self.pairing.group != self.group:
            raise ValueError("pairing lives on a different group")
        for i, (d, v) in enumerate(zip(inv, qgen)):
            if self.pairing.gram[i][i] != 2 * v:
                raise ValueError(f"b(g{i}, g{i}) = {self.pairing.gram[i][i]} differs from 2 q(g{i}) = {2 * v}")
            if not (d * d * v).is_zero():
                raise ValueError(f"q(g{i}) = {v} is not killed by {d}^2")
            assert (2 * d * v).is_zero()

    @cached_property
    def denominator(self) -> int:
        return _lcm([self.pairing.denominator] + [v.denominator for v in self.qgen])

    def __call__(self, x: GroupElement) -> QZ:
        return eval_quadratic(self, x)


FormLike = Union[LinkingPairing, QuadraticForm]


def linking_pairing(invariants: Sequence[int], gram) -> LinkingPairing:
    return LinkingPairing(FiniteAbelianGroup(tuple(invariants)), tuple(tuple(r) for r in gram))


def quadratic_form(invariants: Sequence[int], qgen, off_diagonal=None) -> QuadraticForm:
    """Build a form from generator values and (optionally) the full Gram matrix;
    the diagonal of the Gram matrix is always taken to be ``2 q(g_i)``."""
    group = FiniteAbelianGroup(tuple(invariants))
    qgen = [_as_qz(v) for v in qgen]
    n = len(qgen)
    gram = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                gram[i][i] = 2 * qgen[i]
            elif off_diagonal is not None:
                gram[i][j] = _as_qz(off_diagonal[i][j])
    return QuadraticForm(group, tuple(qgen), LinkingPairing(group, gram))


class GaussBrown:
    """Element of ``Z/8`` or the symbol infinity."""

    __slots__ = ("value",)

    def __init__(self, value: int | None):
        self.value = None if value is None else value % 8

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __add__(self, other: GaussBrown | int) -> GaussBrown:
        if isinstance(other, int):
            other = GaussBrown(other)
        if self.value is None or other.value is None:
            return INFINITY
        return GaussBrown(self.value + other.value)

    __radd__ = __add__

    def __neg__(self) -> GaussBrown:
        return self if self.value is None else GaussBrown(-self.value)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value is not None and self.value == other % 8
        return isinstance(other, GaussBrown) and self.value == other.value

    def __hash__(self) -> int:
        return hash(self.value)

    def __str__(self) -> str:
        return "inf" if self.value is None else str(self.value)

    def __repr__(self) -> str:
        return f"GaussBrown({self})"

    def to_json(self) -> int | str:
        return "inf" if self.value is None else self.value

    @classmethod
    def from_json(cls, v: int | str) -> GaussBrown:
        return INFINITY if v == "inf" else cls(int(v))


INFINITY = GaussBrown(None)


def _check_group(form: FormLike, *xs: GroupElement) -> None:
    for x in xs:
        if x.group != form.group:
            raise ValueError("element does not belong to the group of the form")


def eval_pairing(b: LinkingPairing, x: GroupElement, y: GroupElement) -> QZ:
    _check_group(b, x, y)
    num = b.numerators
    n = len(num)
    total = sum(x.coords[i] * y.coords[j] * num[i][j] for i in range(n) for j in range(n))
    return QZ(total, b.denominator)


def eval_quadratic(q: QuadraticForm, x: GroupElement) -> QZ:
    _check_group(q, x)
    return _eval_raw(q.qgen, q.pairing.gram, x.coords)


def _eval_raw(qgen: Sequence[QZ], gram: Sequence[Sequence[QZ]], coords: Sequence[int]) -> QZ:
    """``sum a_i^2 q_i + sum_{i<j} a_i a_j b_ij`` for any generating set."""
    total = Fraction(0)
    n = len(qgen)
    for i in range(n):
        a = coords[i]
        if not a:
            continue
        total += a * a * qgen[i].as_fraction()
        for j in range(i + 1, n):
            if coords[j]:
                total += a * coords[j] * gram[i][j].as_fraction()
    return QZ.from_fraction(total)


def _bil_raw(gram: Sequence[Sequence[QZ]], x: Sequence[int], y: Sequence[int]) -> QZ:
    total = Fraction(0)
    for i, a in enumerate(x):
        if a:
            for j, c in enumerate(y):
                if c:
                    total += a * c * gram[i][j].as_fraction()
    return QZ.from_fraction(total)


def associated_pairing(q: QuadraticForm) -> LinkingPairing:
    """The pairing ``b_q(x, y) = q(x + y) - q(x) - q(y)``, checked on generators."""
    gens = q.group.generators()
    for i, x in enumerate(gens):
        for j, y in enumerate(gens):
            if eval_quadratic(q, x + y) - eval_quadratic(q, x) - eval_quadratic(q, y) != q.pairing.gram[i][j]:
                raise AssertionError(f"stored pairing disagrees with q at generators ({i}, {j})")
    return q.pairing


def pullback(form: FormLike, group: FiniteAbelianGroup, images: Sequence[GroupElement]) -> FormLike:
    """Form on ``group`` obtained by sending its i-th generator to ``images[i]``.

    The caller guarantees this defines a homomorphism (the order of
    ``images[i]`` divides the i-th invariant factor).
    """
    return _pullback_raw(form, group, [im.coords for im in images])


def _pullback_raw(form: FormLike, group: FiniteAbelianGroup, images: Sequence[Sequence[int]]) -> FormLike:
    b = form.pairing if isinstance(form, QuadraticForm) else form
    den = form.denominator
    nb = [[v.numerator * (den // v.denominator) for v in row] for row in b.gram]
    rows = [[sum(x[a] * nb[a][c] for a in range(len(x))) for c in range(len(x))] for x in images]
    gram = tuple(tuple(QZ(sum(r * c for r, c in zip(row, y)), den) for y in images) for row in rows)
    pairing = LinkingPairing(group, gram)
    if isinstance(form, LinkingPairing):
        return pairing
    nq = [v.numerator * (den // v.denominator) for v in form.qgen]
    qgen = []
    for x in images:
        t = 0
        for a, xa in enumerate(x):
            if xa:
                t += xa * xa * nq[a] + xa * sum(x[c] * nb[a][c] for c in range(a + 1, len(x)))
        qgen.append(QZ(t, den))
    return QuadraticForm(group, tuple(qgen), pairing)


def _normalize(orders: Sequence[int], qgen, gram, is_quadratic: bool) -> FormLike:
    """Rewrite a form given on generators of arbitrary orders in
    invariant-factor coordinates."""
    n = len(orders)
    u, d, _ = smith_normal_form([[orders[i] if i == j else 0 for j in range(n)] for i in range(n)], ncols=n)
    u_inv = inverse_unimodular(u) if n else []
    images, invariants = [], []
    for k in range(n):
        if d[k][k] > 1:
            invariants.append(d[k][k])
            images.append([u_inv[i][k] % orders[i] for i in range(n)])
    group = FiniteAbelianGroup(tuple(invariants))
    new_gram = [[_bil_raw(gram, x, y) for y in images] for x in images]
    pairing = LinkingPairing(group, new_gram)
    if not is_quadratic:
        return pairing
    return QuadraticForm(group, tuple(_eval_raw(qgen, gram, x) for x in images), pairing)


def orthogonal_sum(*forms: FormLike) -> FormLike:
    """Orthogonal direct sum, rewritten in invariant-factor coordinates."""
    is_quadratic = all(isinstance(f, QuadraticForm) for f in forms)
    if not is_quadratic and any(isinstance(f, QuadraticForm) for f in forms):
        raise TypeError("cannot mix pairings and quadratic forms")
    orders: list[int] = []
    qgen: list[QZ] = []
    blocks = []
    for f in forms:
        b = f.pairing if is_quadratic else f
        orders.extend(f.group.invariants)
        if is_quadratic:
            qgen.extend(f.qgen)
        blocks.append(b.gram)
    n = len(orders)
    gram = [[ZERO] * n for _ in range(n)]
    off = 0
    for blk in blocks:
        for i, row in enumerate(blk):
            for j, v in enumerate(row):
                gram[off + i][off + j] = v
        off += len(blk)
    return _normalize(orders, qgen, gram, is_quadratic)


def p_primary_decomposition(form: FormLike) -> list[tuple[int, FormLike]]:
    """Restrictions of ``form`` to the p-primary components, smallest p first."""
    group = form.group
    primes = group.primes()
    if len(primes) == 1:
        return [(primes[0], form)]
    parts = []
    for p in primes:
        invariants, images = [], []
        for i, d in enumerate(group.invariants):
            e = _valuation(d, p)
            if e:
                invariants.append(p ** e)
                coords = [0] * group.rank
                coords[i] = d // p ** e
                images.append(coords)
        parts.append((p, _pullback_raw(form, FiniteAbelianGroup(tuple(invariants)), images)))
    return parts


# -- vectorized enumeration ---------------------------------------------------

def _coordinate_chunks(invariants: Sequence[int], chunk: int = 1 << 16) -> Iterator[np.ndarray]:
    """Coordinates of all group elements, lexicographic, in blocks of rows."""
    total = math.prod(invariants)
    inv = np.array(invariants, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        out = np.empty((idx.size, len(invariants)), dtype=np.int64)
        for k in range(len(invariants) - 1, -1, -1):
            out[:, k] = idx % inv[k]
            idx = idx // inv[k]
        yield out


def _component_sums(form: QuadraticForm | LinkingPairing, cap: int) -> tuple[complex, int]:
    """``(sum_x exp(2 pi i q(x)), |ker b|)`` by enumeration of one component.

    For a bare pairing only the kernel size is meaningful.
    """
    group = form.group
    if group.order > cap:
        raise GroupTooLargeError(f"component of order {group.order} exceeds the enumeration cap {cap}")
    n = group.rank
    if n == 0:
        return 1.0 + 0j, 1
    b = form.pairing if isinstance(form, QuadraticForm) else form
    den = form.denominator
    bn = [[v.numerator * (den // v.denominator) for v in row] for row in b.gram]
    qn = [v.numerator * (den // v.denominator) for v in form.qgen] if isinstance(form, QuadraticForm) else [0] * n
    roots = np.exp(2j * np.pi * np.arange(den) / den)
    total = 0j
    kernel = 0
    # with small entries the whole evaluation is three integer matrix products
    fast = n * n * max(group.invariants) ** 2 * den < 2 ** 62
    qvec = np.array(qn, dtype=np.int64)
    bmat = np.array(bn, dtype=np.int64)
    upper = np.triu(bmat, 1)
    for coords in _coordinate_chunks(group.invariants):
        if fast:
            vals = ((coords * coords) @ qvec + ((coords @ upper) * coords).sum(axis=1)) % den
            in_kernel = ((coords @ bmat) % den == 0).all(axis=1)
        else:
            vals = np.zeros(coords.shape[0], dtype=np.int64)
            in_kernel = np.ones(coords.shape[0], dtype=bool)
            for i in range(n):
                ai = coords[:, i] % den
                vals = (vals + (ai * ai % den) * qn[i]) % den
                for j in range(i + 1, n):
                    vals = (vals + (ai * coords[:, j] % den) * bn[i][j]) % den
            for j in range(n):
                col = np.zeros(coords.shape[0], dtype=np.int64)
                for i in range(n):
                    col = (col + (coords[:, i] % den) * bn[i][j]) % den
                in_kernel &= col == 0
        total += roots[vals].sum()
        kernel += int(in_kernel.sum())
    return total, kernel


def gauss_sum(q: QuadraticForm, cap: int = VECTOR_CAP) -> complex:
    """Normalized Gauss sum ``|ker b_q|^{-1/2} |G|^{-1/2} sum_x exp(2 pi i q(x))``.

    The sum factorizes over the orthogonal p-primary splitting, so each
    component is enumerated separately.
    """
    gamma = 1 + 0j
    for _, part in p_primary_decomposition(q):
        s, k = _component_sums(part, cap)
        gamma *= s / math.sqrt(k * part.group.order)
    return gamma


@lru_cache(maxsize=4096)
def gauss_brown(q: QuadraticForm, cap: int = VECTOR_CAP) -> GaussBrown:
    """The Gauss-Brown invariant: ``k`` with ``gamma = exp(2 pi i k / 8)``, or
    infinity when ``gamma = 0``."""
    gamma = gauss_sum(q, cap)
    modulus = abs(gamma)
    if modulus < GAUSS_TOL:
        return INFINITY
    if abs(modulus - 1) > GAUSS_TOL:
        raise GaussSumError(f"|gamma| = {modulus!r} is neither 0 nor 1")
    eighths = cmath.phase(gamma) / (math.pi / 4)
    k = round(eighths)
    if abs(eighths - k) * math.pi / 4 > GAUSS_TOL:
        raise GaussSumError(f"gamma = {gamma!r} is not an 8th root of unity")
    return GaussBrown(k)


def is_nondegenerate(form: FormLike) -> bool:
    b = form.pairing if isinstance(form, QuadraticForm) else form
    return b.kernel_order == 1


def pairing_kernel(b: FormLike, cap: int = ELEMENT_CAP) -> list[GroupElement]:
    """Generators of ``{x : b(x, y) = 0 for all y}`` (empty list when trivial)."""
    if isinstance(b, QuadraticForm):
        b = b.pairing
    group = b.group
    group.check_size(cap)
    gens = group.generators()
    members = [x for x in group.elements(cap) if all(eval_pairing(b, x, g).is_zero() for g in gens)]
    span = {group.zero}
    out = []
    for x in members:
        if x in span:
            continue
        out.append(x)
        span = {s + k * x for s in span for k in range(x.order)}
    return out


def two_torsion(group: FiniteAbelianGroup) -> list[GroupElement]:
    return group.two_torsion()


def t2_action(x: GroupElement, q: QuadraticForm) -> QuadraticForm:
    """``x . q = q + b(x, -)`` for ``x`` of order at most 2."""
    _check_group(q, x)
    if not (2 * x).is_zero():
        raise ValueError(f"{x.coords} does not have order at most 2")
    qgen = tuple(v + eval_pairing(q.pairing, x, g) for v, g in zip(q.qgen, q.group.generators()))
    return QuadraticForm(q.group, qgen, q.pairing)


def quad_refinements(b: LinkingPairing) -> list[QuadraticForm]:
    """All quadratic forms whose associated pairing is ``b``."""
    if not is_nondegenerate(b):
        raise ValueError("pairing is degenerate")
    qgen = []
    for i, d in enumerate(b.group.invariants):
        half = b.gram[i][i].as_fraction() / 2
        for cand in (QZ.from_fraction(half), QZ.from_fraction(half + Fraction(1, 2))):
            if (d * d * cand).is_zero():
                qgen.append(cand)
                break
        else:
            raise ValueError(f"no value q(g{i}) with 2 q(g{i}) = {b.gram[i][i]} is killed by {d}^2")
    base = QuadraticForm(b.group, tuple(qgen), b)
    return [t2_action(x, base) for x in b.group.two_torsion()]
