"""Constructors for the model families: elliptic surfaces, knot surgery, Stein pieces.

Basic-class sets are handled as formal sums over the cohomology lattice; knot
surgery multiplies the formal sum by the Alexander polynomial evaluated at
twice each torus class.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .genus import SW_BASIC, STEIN_C1, ManifoldModel
from .lattice import (
    HClass,
    Lattice,
    canonical_order,
    direct_sum,
    divisibility,
    embed_block,
    is_primitive,
    pair,
    rank_of,
)


class FamilyError(ValueError):
    pass


E8_CARTAN = (
    (2, -1, 0, 0, 0, 0, 0, 0),
    (-1, 2, -1, 0, 0, 0, 0, 0),
    (0, -1, 2, -1, 0, 0, 0, 0),
    (0, 0, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, -1),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, 0),
    (0, 0, 0, 0, -1, 0, 0, 2),
)


# --------------------------------------------------------------------------
# Alexander polynomials


@dataclass(frozen=True)
class AlexanderPolynomial:
    """Symmetric Laurent polynomial in ``t`` normalised so that ``Δ(1) = ±1``."""

    coeffs: Mapping[int, int]

    def __post_init__(self) -> None:
        clean = {int(e): int(c) for e, c in dict(self.coeffs).items() if c}
        if not clean:
            raise FamilyError("zero polynomial is not an Alexander polynomial")
        for e, c in clean.items():
            if clean.get(-e, 0) != c:
                raise FamilyError(f"not symmetric: coefficient of t^{e} is {c}, of t^{-e} is {clean.get(-e, 0)}")
        if abs(sum(clean.values())) != 1:
            raise FamilyError(f"Δ(1) = {sum(clean.values())}, expected ±1")
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    @classmethod
    def parse(cls, text: str) -> "AlexanderPolynomial":
        return cls(parse_laurent(text))

    @classmethod
    def torus_2(cls, q: int) -> "AlexanderPolynomial":
        """The (2, q) torus knot, ``q`` odd; degree ``(q - 1) / 2``."""
        if q % 2 == 0:
            raise FamilyError("(2, q) torus knot needs odd q")
        d = (abs(q) - 1) // 2
        return cls({j: (-1) ** (d - j) for j in range(-d, d + 1)})

    @classmethod
    def twist_knot(cls, m: int) -> "AlexanderPolynomial":
        """Twist knot with ``m`` full twists: ``m t - (2m + 1) + m t^-1``."""
        return cls({-1: m, 0: -(2 * m + 1), 1: m}) if m else cls({0: 1})

    def __str__(self) -> str:
        return format_laurent(self.coeffs)


_TERM = re.compile(
    r"""([+-]?)\s*(\d+)?\s*\*?\s*(t(?:\s*\^\s*(?:\{\s*([+-]?\d+)\s*\}|\(\s*([+-]?\d+)\s*\)|([+-]?\d+)))?)?""",
    re.VERBOSE,
)


def parse_laurent(text: str) -> dict[int, int]:
    """Parse ``"t^2 - t + 1 - t^-1 + t^-2"`` style input.

    Terms are ``[sign] [coef] [*] t[^exp]`` or a bare integer; whitespace is
    ignored; exponents may be written ``t^-1``, ``t^{-1}`` or ``t^(-1)``.
    Repeated exponents are summed.
    """
    s = re.sub(r"\s+", "", text)
    if not s:
        raise FamilyError("empty polynomial")
    out: Counter = Counter()
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise FamilyError(f"cannot parse polynomial at {s[pos:]!r}")
        sign, coef, tpart = m.group(1), m.group(2), m.group(3)
        if not sign and not first:
            raise FamilyError(f"missing operator before {s[pos:]!r}")
        if coef is None and tpart is None:
            raise FamilyError(f"dangling sign at {s[pos:]!r}")
        c = int(coef) if coef is not None else 1
        if sign == "-":
            c = -c
        if tpart is None:
            e = 0
        else:
            ex = m.group(4) or m.group(5) or m.group(6)
            e = int(ex) if ex is not None else 1
        out[e] += c
        pos = m.end()
        first = False
    return {e: c for e, c in out.items() if c}


def format_laurent(coeffs: Mapping[int, int]) -> str:
    parts = []
    for e in sorted(coeffs, reverse=True):
        c = coeffs[e]
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            mono = "t" if e == 1 else f"t^{e}"
            body = mono if mag == 1 else f"{mag}{mono}"
        parts.append((sign, body))
    if not parts:
        return "0"
    head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    return " ".join([head] + [f"{s} {b}" for s, b in parts[1:]])


def alexander_degree(D: AlexanderPolynomial) -> int:
    return max(D.coeffs)


# --------------------------------------------------------------------------
# formal sums of classes


def multiply_by_alexander(
    terms: Mapping[HClass, int], shift: HClass, D: AlexanderPolynomial
) -> dict[HClass, int]:
    """``terms * Δ(exp(2 shift))``: each monomial ``t^j`` translates by ``2 j shift``."""
    out: Counter = Counter()
    for cls_, c in terms.items():
        for j, a in D.coeffs.items():
            out[cls_ + shift * (2 * j)] += c * a
    return {k: v for k, v in out.items() if v}


# --------------------------------------------------------------------------
# elliptic surfaces


def elliptic_lattice(k: int) -> tuple[Lattice, list[int]]:
    """``k(-E8) + (2k-1)H``; returns the lattice and the index of each H summand's first vector."""
    blocks: list[tuple[tuple[int, ...], ...]] = []
    for _ in range(k):
        blocks.append(tuple(tuple(-x for x in row) for row in E8_CARTAN))
    for _ in range(2 * k - 1):
        blocks.append(((0, 1), (1, 0)))
    rank = sum(len(b) for b in blocks)
    form = [[0] * rank for _ in range(rank)]
    off = 0
    h_starts = []
    for b in blocks:
        if len(b) == 2:
            h_starts.append(off)
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                form[off + i][off + j] = x
        off += len(b)
    return Lattice(rank, (), form), h_starts


def elliptic_model(k: int, p: int, q: int) -> ManifoldModel:
    """``E(k)_{p,q}`` with its distinguished basic classes ``±(kpq - p - q) f``."""
    if k < 2 or p < 1 or q < 1:
        raise FamilyError(f"elliptic surface needs k >= 2 and p, q >= 1 (got k={k}, p={p}, q={q})")
    lattice, h = elliptic_lattice(k)
    d = k * p * q - p - q
    # fiber class in the first hyperbolic summand; its dual is the second basis vector there
    f_dual = lattice.unit(h[0] + 1)
    K = f_dual * d
    return ManifoldModel(
        lattice=lattice,
        b2_plus_gt_1=True,
        simple_type=True,
        closed=True,
        b1_boundary=0,
        class_set_kind=SW_BASIC,
        class_set=(K, -K),
        label=f"E({k})_{{{p},{q}}}",
        degenerate=(d == 0),
    )


def elliptic_tori(k: int, count: int) -> list[HClass]:
    """Fiber classes of ``count`` disjoint nuclei, one per hyperbolic summand after the first."""
    if count > nuclei_capacity(k):
        raise FamilyError(f"E({k}) carries only {nuclei_capacity(k)} disjoint nuclei, asked for {count}")
    lattice, h = elliptic_lattice(k)
    return [lattice.unit(h[t]) for t in range(1, count + 1)]


def nuclei_capacity(k: int) -> int:
    """Number of disjoint Gompf nuclei N(2) in E(k)."""
    if k < 2:
        raise FamilyError("E(k) needs k >= 2")
    return 2 * (k - 1)


# --------------------------------------------------------------------------
# knot surgery


def _poincare_dual(T: HClass) -> HClass:
    form = T.lattice.form
    return HClass(T.lattice, tuple(sum(form[i][j] * T.coords[j] for j in range(len(T.coords))) for i in range(len(form))))


def knot_surgery_family(
    base: ManifoldModel, tori: Sequence[HClass], knots: Sequence[AlexanderPolynomial]
) -> list[ManifoldModel]:
    """Member ``i`` is knot surgery on every torus in ``tori`` with the knot ``knots[i]``.

    Tori are homology classes in ``base.lattice``; basic classes shift by twice
    the Poincaré dual of each torus.  The nice subset of each member keeps the
    classes whose shift along every torus is extremal (``±2 deg Δ``).
    """
    if not base.class_set:
        raise FamilyError("base manifold needs a nonempty class set")
    if base.class_set_kind != SW_BASIC:
        raise FamilyError("knot surgery acts on Seiberg-Witten basic classes")
    if not tori:
        raise FamilyError("need at least one torus")
    for T in tori:
        if T.lattice != base.lattice:
            raise FamilyError("torus class outside the base lattice")
        if not is_primitive(T):
            raise FamilyError(f"torus class {T} is not primitive")
        if pair(T, T) != 0:
            raise FamilyError(f"torus class {T} has self-intersection {pair(T, T)}, expected 0")
    if rank_of(list(tori)) != len(tori):
        raise FamilyError("torus classes are linearly dependent")
    duals = [_poincare_dual(T) for T in tori]
    base_terms = {K: 1 for K in base.class_set}
    members = []
    for i, D in enumerate(knots):
        terms: dict[HClass, int] = dict(base_terms)
        for PT in duals:
            terms = multiply_by_alexander(terms, PT, D)
        d = alexander_degree(D)
        extremal = set()
        for L in base.class_set:
            shifted = {L}
            for PT in duals:
                shifted = {x + PT * (2 * d) for x in shifted} | {x - PT * (2 * d) for x in shifted}
            extremal |= shifted
        nice = tuple(x for x in extremal if x in terms)
        members.append(
            ManifoldModel(
                lattice=base.lattice,
                b2_plus_gt_1=base.b2_plus_gt_1,
                simple_type=True,
                closed=base.closed,
                b1_boundary=base.b1_boundary,
                class_set_kind=SW_BASIC,
                class_set=tuple(terms),
                label=f"{base.label}_K{i}[{D}]",
                degenerate=not terms,
                nice_subset=nice,
            )
        )
    return members


def knot_surgery_on_elliptic(n: int, knots: Sequence[AlexanderPolynomial], k: int | None = None) -> list[ManifoldModel]:
    """Knot surgery on ``n`` nucleus tori in ``E(k)`` (default ``k = n + 1``)."""
    if n < 1:
        raise FamilyError("need n >= 1 tori")
    k = n + 1 if k is None else k
    base = elliptic_model(k, 1, 1)
    return knot_surgery_family(base, elliptic_tori(k, n), knots)


# --------------------------------------------------------------------------
# Stein pieces


def stein_divisibility(m0: int, m1: int, m2: int, p: int) -> int:
    if m0 < 2 or m1 < 2 or m2 < 1 or p < 1:
        raise FamilyError(f"Stein family needs m0 >= 2, m1 >= 2, m2 >= 1, p >= 1 (got {(m0, m1, m2)}, p={p})")
    return p * (m1 - 1) + m0 - 2


def stein_model(m0: int, m1: int, m2: int, p: int) -> ManifoldModel:
    """``X_p^(m)``: rank 2, classes ``±r K`` with ``K`` primitive, ``r = p(m1-1) + m0 - 2``.

    The intersection form is not recorded (zero placeholder); only Kronecker
    evaluations of the Chern classes are ever used.
    """
    r = stein_divisibility(m0, m1, m2, p)
    lattice = Lattice(2)
    K = lattice.unit(0) * r
    return ManifoldModel(
        lattice=lattice,
        b2_plus_gt_1=False,
        simple_type=False,
        closed=False,
        # the boundary is a rational homology sphere modulo the recorded b1; kept 0
        b1_boundary=0,
        class_set_kind=STEIN_C1,
        class_set=(K, -K),
        label=f"X_{p}^({m0},{m1},{m2})",
    )


def _distinguished(M: ManifoldModel) -> HClass:
    nz = [k for k in M.class_set if not k.is_zero()]
    if not nz:
        return M.lattice.zero()
    # the positive representative of the ± pair
    return max(nz)


def boundary_connected_sum(members: Sequence[ManifoldModel]) -> ManifoldModel:
    """Orthogonal sum of the pieces; classes are all signed sums of the pieces' classes."""
    if not members:
        raise FamilyError("boundary connected sum of nothing")
    for M in members:
        if M.closed:
            raise FamilyError(f"{M.label} is closed; boundary sum needs manifolds with boundary")
        for K in M.class_set:
            if K != _distinguished(M) and K != -_distinguished(M):
                raise FamilyError(f"{M.label} has more than one ± pair of classes")
    lattice = direct_sum(*(M.lattice for M in members))
    sums = {lattice.zero()}
    off = 0
    for M in members:
        c = embed_block(_distinguished(M), lattice, off)
        sums = {s + c for s in sums} | {s - c for s in sums}
        off += M.lattice.rank
    return ManifoldModel(
        lattice=lattice,
        b2_plus_gt_1=False,
        simple_type=False,
        closed=False,
        b1_boundary=sum(M.b1_boundary for M in members),
        class_set_kind=STEIN_C1,
        class_set=tuple(sums),
        label="♮".join(M.label for M in members),
    )


def stein_bcs_model(m: Sequence[int], n: int, p: int) -> ManifoldModel:
    """Boundary connected sum of ``n`` copies of ``X_p^(m)``."""
    if n < 1:
        raise FamilyError("need n >= 1 copies")
    piece = stein_model(*m, p)
    Z = boundary_connected_sum([piece] * n)
    return ManifoldModel(
        lattice=Z.lattice,
        b2_plus_gt_1=False,
        simple_type=False,
        closed=False,
        b1_boundary=Z.b1_boundary,
        class_set_kind=STEIN_C1,
        class_set=Z.class_set,
        label=f"Z_{{{n},{p}}}^({','.join(map(str, m))})",
    )


# --------------------------------------------------------------------------
# descriptors


FAMILY_KINDS = ("elliptic", "knot_surgery", "stein", "stein_bcs")


@dataclass(frozen=True)
class FamilyDescriptor:
    """What to build: ``kind``, kind-specific ``parameters``, and member indices."""

    kind: str
    parameters: Mapping[str, object]
    index_range: tuple = ()

    def __post_init__(self) -> None:
        if self.kind not in FAMILY_KINDS:
            raise FamilyError(f"unknown family kind {self.kind!r}")


def build_family(desc: FamilyDescriptor) -> list[ManifoldModel]:
    P = desc.parameters
    if not desc.index_range:
        raise FamilyError("empty family")
    if desc.kind == "elliptic":
        k = int(P["k"])
        return [elliptic_model(k, int(p), int(q)) for p, q in desc.index_range]
    if desc.kind == "stein":
        m = tuple(int(x) for x in P["m"])
        return [stein_model(*m, int(p)) for p in desc.index_range]
    if desc.kind == "stein_bcs":
        m = tuple(int(x) for x in P["m"])
        return [stein_bcs_model(m, int(P["n"]), int(p)) for p in desc.index_range]
    if desc.kind == "knot_surgery":
        n = int(P["n"])
        k = int(P.get("k") or n + 1)
        knots = [AlexanderPolynomial.parse(s) for s in desc.index_range]
        return knot_surgery_on_elliptic(n, knots, k)
    raise FamilyError(desc.kind)
