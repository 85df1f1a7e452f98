"""Exact arithmetic on finitely generated abelian groups with an integer pairing.

A :class:`Lattice` models ``Z^rank + torsion`` together with a symmetric
integer form on the free part.  Classes (:class:`HClass`) are coordinate
vectors in the free part plus a residue vector in the torsion part.  Nothing
here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


class LatticeError(ValueError):
    """Raised for malformed lattices or classes, or mixed-lattice input."""


def _as_int_tuple(values: Iterable) -> tuple[int, ...]:
    out = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, int):
            try:
                iv = int(v)
            except (TypeError, ValueError) as exc:
                raise LatticeError(f"non-integer entry {v!r}") from exc
            if iv != v:
                raise LatticeError(f"non-integer entry {v!r}")
            v = iv
        out.append(int(v))
    return tuple(out)


@dataclass(frozen=True)
class Lattice:
    """Free rank, invariant factors of the torsion subgroup, and the form."""

    rank: int
    torsion: tuple[int, ...] = ()
    form: tuple[tuple[int, ...], ...] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise LatticeError("rank must be non-negative")
        torsion = _as_int_tuple(self.torsion)
        for t in torsion:
            if t <= 1:
                raise LatticeError(f"torsion coefficient {t} must be > 1")
        for a, b in zip(torsion, torsion[1:]):
            if b % a:
                raise LatticeError(f"torsion coefficients {torsion} are not an invariant-factor chain")
        if self.form is None:
            form = tuple((0,) * self.rank for _ in range(self.rank))
        else:
            form = tuple(_as_int_tuple(row) for row in self.form)
        if len(form) != self.rank or any(len(row) != self.rank for row in form):
            raise LatticeError(f"form must be {self.rank}x{self.rank}")
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                if form[i][j] != form[j][i]:
                    raise LatticeError(f"form is not symmetric at ({i},{j})")
        object.__setattr__(self, "torsion", torsion)
        object.__setattr__(self, "form", form)

    @classmethod
    def from_torsion_orders(cls, rank: int, orders: Sequence[int], form=None) -> "Lattice":
        """Build a lattice whose torsion is ``Z/o_1 + ... + Z/o_k`` for arbitrary orders.

        The orders are normalised to invariant factors through Smith normal form.
        """
        diag = [[o if i == j else 0 for j in range(len(orders))] for i, o in enumerate(orders)]
        d = smith_normal_form(diag).diagonal if orders else ()
        return cls(rank, tuple(abs(x) for x in d if abs(x) > 1), form)

    def cls(self, coords: Sequence[int], torsion: Sequence[int] | None = None) -> "HClass":
        return HClass(self, tuple(coords), tuple(torsion) if torsion is not None else None)

    def zero(self) -> "HClass":
        return HClass(self, (0,) * self.rank)

    def unit(self, i: int) -> "HClass":
        return HClass(self, tuple(1 if j == i else 0 for j in range(self.rank)))

    def units(self) -> list["HClass"]:
        return [self.unit(i) for i in range(self.rank)]


@dataclass(frozen=True)
class HClass:
    """An element of a :class:`Lattice`; torsion residues are reduced on construction."""

    lattice: Lattice
    coords: tuple[int, ...]
    torsion_part: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        coords = _as_int_tuple(self.coords)
        if len(coords) != self.lattice.rank:
            raise LatticeError(
                f"class has {len(coords)} coordinates, lattice rank is {self.lattice.rank}"
            )
        tors = self.lattice.torsion
        if self.torsion_part is None:
            tp = (0,) * len(tors)
        else:
            tp = _as_int_tuple(self.torsion_part)
            if len(tp) != len(tors):
                raise LatticeError("torsion part length does not match torsion coefficients")
            tp = tuple(x % t for x, t in zip(tp, tors))
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "torsion_part", tp)

    def _same(self, other: "HClass") -> None:
        if self.lattice != other.lattice:
            raise LatticeError("classes live in different lattices")

    def __add__(self, other: "HClass") -> "HClass":
        self._same(other)
        return HClass(
            self.lattice,
            tuple(a + b for a, b in zip(self.coords, other.coords)),
            tuple(a + b for a, b in zip(self.torsion_part, other.torsion_part)),
        )

    def __neg__(self) -> "HClass":
        return HClass(self.lattice, tuple(-a for a in self.coords), tuple(-a for a in self.torsion_part))

    def __sub__(self, other: "HClass") -> "HClass":
        return self + (-other)

    def __mul__(self, k: int) -> "HClass":
        return HClass(self.lattice, tuple(k * a for a in self.coords), tuple(k * a for a in self.torsion_part))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords) and not any(self.torsion_part)

    def is_torsion(self) -> bool:
        return not any(self.coords)

    def sort_key(self) -> tuple:
        return (self.coords, self.torsion_part)

    def __lt__(self, other: "HClass") -> bool:
        return self.sort_key() < other.sort_key()

    def __repr__(self) -> str:
        if any(self.torsion_part):
            return f"HClass({list(self.coords)}, torsion={list(self.torsion_part)})"
        return f"HClass({list(self.coords)})"


def divisibility(a: HClass) -> int:
    """Largest ``d`` with ``a = d * a'``; zero for torsion classes."""
    d = 0
    for c in a.coords:
        d = gcd(d, c)
    return d


def is_primitive(a: HClass) -> bool:
    return divisibility(a) == 1


def _check_same_lattice(classes: Sequence[HClass]) -> Lattice | None:
    if not classes:
        return None
    lat = classes[0].lattice
    for c in classes[1:]:
        if c.lattice != lat:
            raise LatticeError("classes live in different lattices")
    return lat


def vector_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank over Q of integer row vectors, by fraction-free (Bareiss) elimination."""
    m = [list(r) for r in rows if any(r)]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    prev = 1
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, len(m)):
            f = m[r][col]
            row_r, row_p = m[r], m[rank]
            for c in range(col, ncols):
                # exact by Sylvester's identity
                row_r[c] = (p * row_r[c] - f * row_p[c]) // prev
        prev = p
        rank += 1
        if rank == len(m):
            break
    return rank


def rank_of(classes: Sequence[HClass]) -> int:
    """Rank over Q of the free parts of ``classes``."""
    _check_same_lattice(classes)
    return vector_rank([c.coords for c in classes])


def is_rational_basis(classes: Sequence[HClass], lattice: Lattice) -> bool:
    for c in classes:
        if c.lattice != lattice:
            raise LatticeError("class does not belong to the given lattice")
    if lattice.rank == 0:
        return len(classes) == 0
    return len(classes) == lattice.rank and rank_of(classes) == lattice.rank


def pair(a: HClass, b: HClass) -> int:
    """Intersection pairing ``a^T Q b`` on the free part; torsion pairs to zero."""
    a._same(b)
    form = a.lattice.form
    total = 0
    for i, ai in enumerate(a.coords):
        if ai:
            row = form[i]
            total += ai * sum(q * bj for q, bj in zip(row, b.coords))
    return total


def self_intersection(a: HClass) -> int:
    return pair(a, a)


def evaluate(k: HClass, alpha: HClass) -> int:
    """Kronecker evaluation of a cohomology class on a homology class.

    Both are written in mutually dual bases of the free parts, so this is the
    coordinate dot product; torsion evaluates to zero.
    """
    if k.lattice.rank != alpha.lattice.rank:
        raise LatticeError("evaluation needs dual lattices of equal rank")
    return sum(x * y for x, y in zip(k.coords, alpha.coords))


def canonical_sign(coords: Sequence[int]) -> tuple[int, ...]:
    """Representative of ``{v, -v}`` whose first nonzero entry is positive."""
    for c in coords:
        if c:
            return tuple(coords) if c > 0 else tuple(-x for x in coords)
    return tuple(coords)


def canonical_order(classes: Iterable[HClass]) -> list[HClass]:
    """Sort classes lexicographically on (coords, torsion), dropping duplicates."""
    return sorted(set(classes), key=HClass.sort_key)


def solve_rational(rows: Sequence[Sequence[int]], target: Sequence[int]) -> list[Fraction] | None:
    """Coefficients ``x`` with ``sum x_i rows[i] == target`` over Q, or None."""
    n = len(rows)
    dim = len(target)
    # augmented system: columns are rows[i]
    m = [[Fraction(rows[i][r]) for i in range(n)] + [Fraction(target[r])] for r in range(dim)]
    piv_cols = []
    r = 0
    for c in range(n):
        p = next((k for k in range(r, dim) if m[k][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for k in range(dim):
            if k != r and m[k][c] != 0:
                f = m[k][c]
                m[k] = [x - f * y for x, y in zip(m[k], m[r])]
        piv_cols.append(c)
        r += 1
    if any(m[k][n] != 0 for k in range(r, dim)):
        return None
    x = [Fraction(0)] * n
    for k, c in enumerate(piv_cols):
        x[c] = m[k][n]
    return x


@dataclass(frozen=True)
class SmithForm:
    """``diagonal`` entries of ``D = left @ M @ right`` with unimodular transforms."""

    diagonal: tuple[int, ...]
    D: tuple[tuple[int, ...], ...]
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> SmithForm:
    """Smith normal form with transforms, ``D = L M R``, ``d_i | d_{i+1}``, ``d_i >= 0``."""
    A = [list(_as_int_tuple(row)) for row in matrix]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    if any(len(r) != cols for r in A):
        raise LatticeError("ragged matrix")
    L = _identity(rows)
    R = _identity(cols)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for M in (A, R):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        A[dst] = [x + k * y for x, y in zip(A[dst], A[src])]
        L[dst] = [x + k * y for x, y in zip(L[dst], L[src])]

    def add_col(dst, src, k):
        for M in (A, R):
            for row in M:
                row[dst] += k * row[src]

    t = 0
    while t < min(rows, cols):
        # pivot: smallest nonzero |entry| in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            done = True
            p = A[t][t]
            for i in range(t + 1, rows):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        done = False
            if not done:
                # move the smallest remainder into the pivot slot and repeat
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, rows) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, cols) if A[t][j]]
                _, i, j = min(cand)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            # divisibility of the rest of the block
            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            L[t] = [-x for x in L[t]]
        t += 1

    diag = tuple(A[i][i] for i in range(min(rows, cols)))
    return SmithForm(
        diagonal=diag,
        D=tuple(tuple(r) for r in A),
        left=tuple(tuple(r) for r in L),
        right=tuple(tuple(r) for r in R),
    )


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> list[list[int]]:
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def determinant(A: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (Bareiss)."""
    n = len(A)
    if n == 0:
        return 1
    m = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if m[i][k]), None)
            if sw is None:
                return 0
            m[k], m[sw] = m[sw], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def direct_sum(*lattices: Lattice) -> Lattice:
    """Block-diagonal orthogonal sum (torsion re-normalised to invariant factors)."""
    rank = sum(l.rank for l in lattices)
    form = [[0] * rank for _ in range(rank)]
    off = 0
    for l in lattices:
        for i in range(l.rank):
            for j in range(l.rank):
                form[off + i][off + j] = l.form[i][j]
        off += l.rank
    orders = [t for l in lattices for t in l.torsion]
    return Lattice.from_torsion_orders(rank, orders, form)


def embed_block(c: HClass, target: Lattice, offset: int) -> HClass:
    """Place the free part of ``c`` into ``target`` starting at coordinate ``offset``."""
    coords = [0] * target.rank
    coords[offset:offset + len(c.coords)] = c.coords
    return HClass(target, tuple(coords))
