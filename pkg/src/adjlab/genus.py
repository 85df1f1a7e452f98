"""Adjunction genus, the adjunction n-genus and adjunction-inequality bounds.

The true minimal genus function of a smooth 4-manifold is not computable in
general.  Two approximations are exposed and kept apart on purpose:

* :func:`bounded_n_genus` minimises over rational bases with bounded
  coefficients for a synthetic :class:`GenusModel`.  It is an *upper* bound
  for the adjunction n-genus of that model.
* :func:`family_divergence_bound` turns a verified nicety certificate into a
  *lower* bound, one value per family member.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .lattice import (
    HClass,
    Lattice,
    LatticeError,
    canonical_order,
    canonical_sign,
    divisibility,
    evaluate,
    is_rational_basis,
    pair,
    vector_rank,
)

DEFAULT_WORK_LIMIT = 10**8
WORK_LIMIT_ENV = "ADJLAB_WORK_LIMIT"

SW_BASIC = "SW_basic"
STEIN_C1 = "Stein_c1"
CLASS_SET_KINDS = (SW_BASIC, STEIN_C1)


class GenusError(ValueError):
    pass


class WorkLimitExceeded(RuntimeError):
    """The basis search would examine more candidates than allowed."""

    def __init__(self, message: str, candidates: int, limit: int):
        super().__init__(message)
        self.candidates = candidates
        self.limit = limit


def default_work_limit() -> int:
    raw = os.environ.get(WORK_LIMIT_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_WORK_LIMIT
    try:
        value = int(raw)
    except ValueError as exc:
        raise GenusError(f"{WORK_LIMIT_ENV}={raw!r} is not an integer") from exc
    if value < 1:
        raise GenusError(f"{WORK_LIMIT_ENV} must be positive")
    return value


@dataclass(frozen=True)
class GenusModel:
    """A synthetic genus function on ``lattice``.

    Genus is looked up in ``table`` (keyed by sign-normalised coordinates, so
    ``v`` and ``-v`` always agree); otherwise ``slope * d(v) + offset`` is used
    for nonzero ``v``, unless a custom ``rule`` callable is supplied.
    """

    lattice: Lattice
    table: Mapping[tuple[int, ...], int] = field(default_factory=dict)
    slope: int = 1
    offset: int = 0
    rule: Callable[[tuple[int, ...]], int] | None = None

    def __post_init__(self) -> None:
        norm = {}
        for key, g in dict(self.table).items():
            key = tuple(int(x) for x in key)
            if len(key) != self.lattice.rank:
                raise GenusError(f"table key {key} has wrong length")
            if not any(key):
                if g != 0:
                    raise GenusError("genus of the zero class must be 0")
                continue
            if g < 0:
                raise GenusError(f"negative genus {g} for {key}")
            ck = canonical_sign(key)
            if ck in norm and norm[ck] != g:
                raise GenusError(f"table disagrees on {key} and its negative")
            norm[ck] = int(g)
        object.__setattr__(self, "table", norm)

    def genus_of_coords(self, coords: tuple[int, ...]) -> int:
        if not any(coords):
            return 0
        ck = canonical_sign(coords)
        g = self.table.get(ck)
        if g is None:
            if self.rule is not None:
                g = self.rule(ck)
            else:
                d = 0
                for c in ck:
                    d = _gcd(d, c)
                g = self.slope * d + self.offset
        if g < 0:
            raise GenusError(f"genus rule returned negative value {g} at {coords}")
        return g

    def genus(self, v: HClass) -> int:
        if v.lattice != self.lattice:
            raise LatticeError("class outside the genus model's lattice")
        return self.genus_of_coords(v.coords)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


@dataclass(frozen=True)
class ManifoldModel:
    """Algebraic stand-in for a smooth 4-manifold.

    ``class_set`` holds Seiberg-Witten basic classes (closed case) or the
    ``±c_1`` classes of Stein structures (bounded case), written in the basis
    dual to the lattice basis.  ``nice_subset`` is the subset fed to nicety
    certificates; it defaults to the whole class set.
    """

    lattice: Lattice
    b2_plus_gt_1: bool
    simple_type: bool
    closed: bool
    b1_boundary: int
    class_set_kind: str
    class_set: tuple[HClass, ...]
    label: str = ""
    degenerate: bool = False
    nice_subset: tuple[HClass, ...] | None = None

    def __post_init__(self) -> None:
        if self.class_set_kind not in CLASS_SET_KINDS:
            raise GenusError(f"unknown class set kind {self.class_set_kind!r}")
        if self.class_set_kind == SW_BASIC and not (self.closed and self.b2_plus_gt_1):
            raise GenusError("SW basic classes need a closed manifold with b2+ > 1")
        if self.class_set_kind == STEIN_C1 and self.closed:
            raise GenusError("Stein first Chern classes need a manifold with boundary")
        if self.b1_boundary < 0 or (self.closed and self.b1_boundary != 0):
            raise GenusError("b1 of the boundary must be 0 for closed manifolds and >= 0 otherwise")
        cs = tuple(canonical_order(self.class_set))
        for k in cs:
            if k.lattice.rank != self.lattice.rank:
                raise LatticeError("class set element has wrong rank")
        members = set(cs)
        if any(-k not in members for k in cs):
            raise GenusError("class set is not closed under negation")
        object.__setattr__(self, "class_set", cs)
        if self.nice_subset is None:
            object.__setattr__(self, "nice_subset", cs)
        else:
            sub = tuple(canonical_order(self.nice_subset))
            if not set(sub) <= members:
                raise GenusError("nice_subset must be contained in the class set")
            object.__setattr__(self, "nice_subset", sub)

    @property
    def b2(self) -> int:
        return self.lattice.rank


def adjunction_genus(G: GenusModel, v: HClass) -> int:
    """``2 g(v) - v.v``."""
    return 2 * G.genus(v) - pair(v, v)


def nth_largest_adjunction(G: GenusModel, basis: Sequence[HClass], n: int) -> int:
    """n-th largest adjunction genus over ``basis``, counted with multiplicity."""
    if n < 1:
        raise GenusError("n must be positive")
    if not is_rational_basis(basis, G.lattice):
        raise GenusError("not a rational basis of the lattice")
    if n > G.lattice.rank:
        return 0
    values = sorted((adjunction_genus(G, v) for v in basis), reverse=True)
    return values[n - 1]


@dataclass(frozen=True)
class GenusSearchResult:
    value: int
    witness: tuple[HClass, ...]
    candidates_examined: int
    coeff_bound: int
    n: int


def _box_vectors(rank: int, bound: int) -> Iterable[tuple[int, ...]]:
    """Nonzero vectors in ``[-bound, bound]^rank`` whose first nonzero entry is positive."""
    rng = range(-bound, bound + 1)
    for v in itertools.product(rng, repeat=rank):
        for c in v:
            if c:
                if c > 0:
                    yield v
                break


def _box_size(rank: int, bound: int) -> int:
    return ((2 * bound + 1) ** rank - 1) // 2


def _check_budget(rank: int, bound: int, work_limit: int | None) -> tuple[int, int]:
    limit = default_work_limit() if work_limit is None else work_limit
    size = _box_size(rank, bound)
    if size > limit:
        raise WorkLimitExceeded(
            f"{size} candidate vectors for rank {rank}, bound {bound} exceeds work limit {limit}",
            candidates=size,
            limit=limit,
        )
    return size, limit


class _Echelon:
    """Incremental fraction-free row echelon form for independence tests."""

    def __init__(self) -> None:
        self.rows: list[tuple[int, list[int]]] = []

    def reduce(self, v: Sequence[int]) -> list[int]:
        w = list(v)
        for col, row in self.rows:
            if w[col]:
                p, f = row[col], w[col]
                w = [p * a - f * b for a, b in zip(w, row)]
                g = 0
                for a in w:
                    g = _gcd(g, a)
                if g > 1:
                    w = [a // g for a in w]
        return w

    def add(self, v: Sequence[int]) -> bool:
        w = self.reduce(v)
        col = next((i for i, a in enumerate(w) if a), None)
        if col is None:
            return False
        self.rows.append((col, w))
        return True


def bounded_n_genus(
    G: GenusModel, n: int, coeff_bound: int, work_limit: int | None = None
) -> GenusSearchResult:
    """Minimum of ``G_{X,v,n}`` over rational bases with coefficients in ``[-B, B]``.

    The feasible bases are the bases of a linear matroid, so a greedy pass over
    candidates sorted by adjunction genus yields a basis whose sorted values
    are pointwise minimal; its n-th largest value is the bounded minimum.
    """
    if coeff_bound < 1:
        raise GenusError("coefficient bound must be >= 1")
    if n < 0:
        raise GenusError("n must be non-negative")
    rank = G.lattice.rank
    if n == 0 or n > rank:
        return GenusSearchResult(0, (), 0, coeff_bound, n)
    size, _ = _check_budget(rank, coeff_bound, work_limit)
    form = G.lattice.form
    scored = []
    for v in _box_vectors(rank, coeff_bound):
        vv = sum(v[i] * form[i][j] * v[j] for i in range(rank) if v[i] for j in range(rank) if v[j])
        scored.append((2 * G.genus_of_coords(v) - vv, v))
    scored.sort()
    ech = _Echelon()
    chosen: list[tuple[int, tuple[int, ...]]] = []
    for gad, v in scored:
        if ech.add(v):
            chosen.append((gad, v))
            if len(chosen) == rank:
                break
    values = sorted((g for g, _ in chosen), reverse=True)
    witness = tuple(sorted(HClass(G.lattice, v) for _, v in chosen))
    return GenusSearchResult(values[n - 1], witness, size, coeff_bound, n)


def bounded_n_genus_exhaustive(
    G: GenusModel, n: int, coeff_bound: int, work_limit: int | None = None
) -> GenusSearchResult:
    """Same minimum as :func:`bounded_n_genus`, by explicit basis enumeration.

    Vectors are sign-normalised, bases are enumerated as lexicographically
    increasing tuples, and partial tuples that are already dependent are cut.
    Intended for small ranks; ties go to the lexicographically smallest basis.
    """
    if coeff_bound < 1:
        raise GenusError("coefficient bound must be >= 1")
    rank = G.lattice.rank
    if n == 0 or n > rank:
        return GenusSearchResult(0, (), 0, coeff_bound, n)
    _, limit = _check_budget(rank, coeff_bound, work_limit)
    form = G.lattice.form
    vecs = sorted(_box_vectors(rank, coeff_bound))
    gad = {
        v: 2 * G.genus_of_coords(v)
        - sum(v[i] * form[i][j] * v[j] for i in range(rank) for j in range(rank))
        for v in vecs
    }
    best: tuple[int, tuple] | None = None
    examined = 0

    def extend(start: int, partial: list[tuple[int, ...]]) -> None:
        nonlocal best, examined
        if len(partial) == rank:
            vals = sorted((gad[v] for v in partial), reverse=True)
            key = (vals[n - 1], tuple(partial))
            if best is None or key < best:
                best = key
            return
        for idx in range(start, len(vecs)):
            examined += 1
            if examined > limit:
                raise WorkLimitExceeded(
                    f"exhaustive search passed work limit {limit}", candidates=examined, limit=limit
                )
            cand = partial + [vecs[idx]]
            if vector_rank(cand) < len(cand):
                continue
            extend(idx + 1, cand)

    extend(0, [])
    assert best is not None
    value, basis = best
    return GenusSearchResult(value, tuple(HClass(G.lattice, v) for v in basis), examined, coeff_bound, n)


def sw_adjunction_lower_bound(M: ManifoldModel, alpha: HClass) -> int:
    """Lower bound for the adjunction genus of ``alpha`` from the class set of ``M``.

    For each class ``K`` with ``s = |<K, alpha>|`` and ``q = alpha.alpha``:
    ``q >= 0`` gives ``s + 2``; ``q < 0`` on simple type gives ``s + 2`` when
    ``s > -q`` and ``min(s + 2, -q)`` otherwise; ``q < 0`` without simple type
    gives nothing (0).  The maximum over the class set is returned.
    """
    if alpha.lattice.rank != M.lattice.rank:
        raise LatticeError("class outside the manifold's lattice")
    if alpha.is_zero():
        raise GenusError("the adjunction inequality needs a non-zero class")
    if M.class_set_kind == SW_BASIC and not M.b2_plus_gt_1:
        raise GenusError("SW adjunction inequality needs b2+ > 1")
    q = pair(alpha, alpha)
    best = 0
    for K in M.class_set:
        s = abs(evaluate(K, alpha))
        if q >= 0:
            lb = s + 2
        elif not M.simple_type:
            lb = 0
        elif s > -q:
            lb = s + 2
        else:
            lb = min(s + 2, -q)
        best = max(best, lb)
    return best


def family_divergence_bound(F: Sequence[ManifoldModel], cert, n: int) -> list[int]:
    """Per-member lower bounds ``min(a_1, ..., a_n)`` for the adjunction n-genus."""
    from .nicety import CertificateError, verify_certificate

    if n < 1:
        raise GenusError("n must be positive")
    if cert.n != n:
        raise CertificateError(f"certificate is for n={cert.n}, not n={n}")
    ok, diag = verify_certificate([m.nice_subset for m in F], cert)
    if not ok:
        raise CertificateError(f"certificate not verified for this family: {diag}")
    return [min(dec.a[:n]) for dec in cert.per_member]


@dataclass(frozen=True)
class DivisibilityCheck:
    distinct: bool
    divisibilities: tuple[int, ...]


def c1_divisibility(M: ManifoldModel) -> int:
    divs = {divisibility(k) for k in M.class_set}
    if not divs:
        raise GenusError(f"{M.label or 'member'} has an empty class set")
    if len(divs) > 1:
        raise GenusError(f"{M.label or 'member'} has classes of differing divisibility {sorted(divs)}")
    return divs.pop()


def divisibility_distinct_check(F: Sequence[ManifoldModel]) -> DivisibilityCheck:
    """Pairwise distinctness of first Chern class divisibilities across a Stein family."""
    if not F:
        raise GenusError("empty family")
    for M in F:
        if M.class_set_kind != STEIN_C1:
            raise GenusError("divisibility check applies to Stein first Chern classes")
    divs = tuple(c1_divisibility(M) for M in F)
    return DivisibilityCheck(len(set(divs)) == len(divs), divs)
