"""Certificates that a sequence of class sets is n-nicely inequivalent.

Each member set ``S_i`` must equal a sign expansion
``{±a_1 K_1 ± ... ± a_m K_m}`` with the leading ``n`` classes primitive and
linearly independent, and each leading coefficient sequence strictly
increasing along the family.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .lattice import HClass, Lattice, canonical_sign, divisibility, is_primitive, rank_of


class CertificateError(ValueError):
    """Malformed certificate or family (length mismatch, m_i < n, asymmetric set)."""


@dataclass(frozen=True)
class Decomposition:
    K: tuple[HClass, ...]
    a: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "K", tuple(self.K))
        object.__setattr__(self, "a", tuple(int(x) for x in self.a))
        if len(self.K) != len(self.a) or not self.K:
            raise CertificateError("decomposition needs m >= 1 classes and as many coefficients")
        if any(x < 0 for x in self.a):
            raise CertificateError("coefficients must be non-negative")

    @property
    def m(self) -> int:
        return len(self.K)

    def expand(self) -> frozenset[HClass]:
        """All ``2^m`` signed sums, duplicates collapsed."""
        sums = {self.K[0].lattice.zero()}
        for a, k in zip(self.a, self.K):
            term = k * a
            sums = {s + term for s in sums} | {s - term for s in sums}
        return frozenset(sums)


@dataclass(frozen=True)
class NicetyCertificate:
    n: int
    per_member: tuple[Decomposition, ...]
    verified: bool = False
    failure_reason: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "per_member", tuple(self.per_member))


@dataclass(frozen=True)
class Diagnostics:
    ok: bool
    bullet: int | None = None
    member: int | None = None
    message: str = ""

    def __str__(self) -> str:
        if self.ok:
            return "verified"
        return f"bullet {self.bullet}, member {self.member}: {self.message}"


def verify_certificate(family_sets: Sequence, cert: NicetyCertificate) -> tuple[bool, Diagnostics]:
    """Check the three nicety conditions from stored data alone."""
    n = cert.n
    if n < 1:
        raise CertificateError("n must be positive")
    if len(family_sets) != len(cert.per_member):
        raise CertificateError(
            f"{len(family_sets)} member sets but {len(cert.per_member)} decompositions"
        )
    for i, dec in enumerate(cert.per_member):
        if dec.m < n:
            raise CertificateError(f"member {i} has m={dec.m} < n={n}")

    for i, (S, dec) in enumerate(zip(family_sets, cert.per_member)):
        if any(k.is_zero() for k in dec.K):
            return False, Diagnostics(False, 1, i, "decomposition uses a zero class")
        if dec.expand() != frozenset(S):
            return False, Diagnostics(False, 1, i, "sign expansion does not reproduce the set")

    for i, dec in enumerate(cert.per_member):
        lead = dec.K[:n]
        bad = next((j for j, k in enumerate(lead) if not is_primitive(k)), None)
        if bad is not None:
            return False, Diagnostics(False, 2, i, f"K_{bad + 1} is not primitive")
        if rank_of(list(lead)) != n:
            return False, Diagnostics(False, 2, i, f"K_1..K_{n} are linearly dependent")

    for j in range(n):
        seq = [dec.a[j] for dec in cert.per_member]
        for i in range(1, len(seq)):
            if seq[i] <= seq[i - 1]:
                return False, Diagnostics(
                    False, 3, i, f"a_{j + 1} sequence {seq} is not strictly increasing"
                )
    return True, Diagnostics(True)


def _negation_closed(S: frozenset[HClass]) -> bool:
    return all(-x in S for x in S)


class _Budget:
    def __init__(self, limit: int) -> None:
        self.limit = limit
        self.used = 0

    def spend(self) -> bool:
        self.used += 1
        return self.used <= self.limit


def _halve(c: HClass) -> HClass | None:
    if any(x % 2 for x in c.coords) or any(x % 2 for x in c.torsion_part):
        return None
    return HClass(c.lattice, tuple(x // 2 for x in c.coords), tuple(x // 2 for x in c.torsion_part))


def _candidate_summands(S: frozenset[HClass]) -> list[HClass]:
    """Half-differences of pairs, sign-normalised, largest first."""
    cands = set()
    elems = sorted(S)
    for x, y in itertools.combinations(elems, 2):
        h = _halve(x - y)
        if h is not None and not h.is_torsion():
            sc = canonical_sign(h.coords)
            cands.add(h if sc == h.coords else -h)
    return sorted(cands, key=lambda c: (-divisibility(c), c.sort_key()), reverse=False)


def _factor(S: frozenset[HClass], budget: _Budget, depth: int = 0) -> list[HClass] | None:
    """Summands ``c_j`` with ``S = {±c_1 ± ... ± c_m}``, or None."""
    if len(S) == 1:
        (only,) = S
        return [] if only.is_zero() else None
    if depth > 64:
        return None
    for c in _candidate_summands(S):
        if not budget.spend():
            return None
        rest = frozenset(s - c for s in S if (s - c - c) in S)
        if not rest:
            continue
        if frozenset({x + c for x in rest} | {x - c for x in rest}) != S:
            continue
        sub = _factor(rest, budget, depth + 1)
        if sub is not None:
            return [c] + sub
    return None


def _split(c: HClass) -> tuple[int, HClass]:
    d = divisibility(c)
    k = HClass(c.lattice, tuple(x // d for x in c.coords))
    if canonical_sign(k.coords) != k.coords:
        k = -k
    return d, k


def _pad_units(lattice: Lattice, chosen: list[HClass], count: int) -> list[HClass]:
    out = []
    for u in lattice.units():
        if len(out) == count:
            break
        if rank_of(chosen + out + [u]) == len(chosen) + len(out) + 1:
            out.append(u)
    return out


def _terms(S: frozenset[HClass], search_limit: int) -> list[tuple[int, HClass]] | None:
    summands = _factor(S, _Budget(search_limit))
    if summands is None:
        return None
    return sorted((_split(c) for c in summands), key=lambda t: (t[1].sort_key(), -t[0]))


def _arrange(
    terms: list[tuple[int, HClass]], n: int, lattice: Lattice, prefer: Sequence[HClass] = ()
) -> Decomposition | None:
    """Order terms so ``n`` independent classes lead, taking ``prefer`` first.

    If fewer than ``n`` independent classes exist, unit classes with
    coefficient 0 fill the gap (they leave the expansion unchanged).
    """
    order = {k: i for i, k in enumerate(prefer)}
    pool = sorted(terms, key=lambda t: (t[1] not in order, order.get(t[1], 0), t[1].sort_key(), -t[0]))
    lead: list[tuple[int, HClass]] = []
    rest: list[tuple[int, HClass]] = []
    for t in pool:
        if len(lead) < n and rank_of([k for _, k in lead] + [t[1]]) == len(lead) + 1:
            lead.append(t)
        else:
            rest.append(t)
    if len(lead) < n:
        pads = _pad_units(lattice, [k for _, k in lead], n - len(lead))
        if len(lead) + len(pads) < n:
            return None
        lead += [(0, u) for u in pads]
    ordered = lead + rest
    return Decomposition(K=tuple(k for _, k in ordered), a=tuple(a for a, _ in ordered))


def decompose(S, n: int = 1, search_limit: int = 10_000) -> Decomposition | None:
    """A sign-expansion decomposition of one set with ``n`` independent leading classes."""
    S = frozenset(S)
    if not S:
        return None
    terms = _terms(S, search_limit)
    if terms is None:
        return None
    return _arrange(terms, n, next(iter(S)).lattice)


def _aligned_columns(all_terms: list[list[tuple[int, HClass]]]) -> list[HClass]:
    """Classes present in every member whose coefficient strictly increases along the family."""
    common = set.intersection(*({k for _, k in terms} for terms in all_terms))
    good = []
    for k in sorted(common, key=HClass.sort_key):
        seq = [max(a for a, kk in terms if kk == k) for terms in all_terms]
        if all(x < y for x, y in zip(seq, seq[1:])):
            good.append(k)
    return good


def infer_certificate(family_sets: Sequence, n: int, search_limit: int = 10_000) -> NicetyCertificate:
    """Best-effort search for a verified certificate; failure proves nothing.

    ``search_limit`` caps the candidate summands tried per member.  Leading
    columns prefer classes shared by all members with increasing coefficients.
    """
    if n < 1:
        raise CertificateError("n must be positive")
    sets = [frozenset(S) for S in family_sets]
    if not sets:
        raise CertificateError("empty family")
    for i, S in enumerate(sets):
        if not S:
            raise CertificateError(f"member {i} set is empty")
        if not _negation_closed(S):
            raise CertificateError(f"member {i} set is not closed under negation")
    all_terms = []
    for i, S in enumerate(sets):
        terms = _terms(S, search_limit)
        if terms is None:
            return NicetyCertificate(
                n, (), False,
                f"member {i}: no sign-expansion decomposition found within search limit {search_limit}",
            )
        all_terms.append(terms)
    prefer = _aligned_columns(all_terms)
    decs = []
    for i, (S, terms) in enumerate(zip(sets, all_terms)):
        dec = _arrange(terms, n, next(iter(S)).lattice, prefer)
        if dec is None:
            return NicetyCertificate(n, tuple(decs), False, f"member {i}: fewer than {n} independent classes")
        decs.append(dec)
    cert = NicetyCertificate(n, tuple(decs))
    ok, diag = verify_certificate(sets, cert)
    if ok:
        return NicetyCertificate(n, cert.per_member, True, None)
    return NicetyCertificate(n, cert.per_member, False, str(diag))
