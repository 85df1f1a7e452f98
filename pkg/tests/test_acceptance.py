"""Acceptance criteria, one test per criterion.

Each criterion prints a single PASS/FAIL line with its wall time.  Run
``python tests/test_acceptance.py`` for the lines alone, or ``pytest -s``.
"""

import itertools
import random
import sys
import time

import numpy as np
import pytest

from adjlab.genus import (
    SW_BASIC,
    GenusModel,
    ManifoldModel,
    adjunction_genus,
    bounded_n_genus,
    family_divergence_bound,
    sw_adjunction_lower_bound,
)
from adjlab.lattice import Lattice, canonical_sign, divisibility, pair
from adjlab.nicety import infer_certificate, verify_certificate
from adjlab.obstruction import (
    complement_b2_bound,
    embedding_applies,
    embedding_condition,
    mv_consistent,
    surgery_applies,
    surgery_condition,
    surgery_finiteness_threshold,
)
from adjlab.swfamilies import (
    AlexanderPolynomial,
    elliptic_model,
    elliptic_tori,
    knot_surgery_family,
    knot_surgery_on_elliptic,
    stein_bcs_model,
    stein_model,
)

RESULTS: dict[int, str] = {}


def _distinguished(M):
    return max(divisibility(k) for k in M.class_set)


def crit_1():
    for k in range(2, 6):
        for p, q in itertools.product(range(1, 7), repeat=2):
            got = _distinguished(elliptic_model(k, p, q))
            assert got == k * p * q - p - q, (k, p, q, got)
    return "144 models"


def crit_2():
    for m0, m1, p in itertools.product((2, 3, 4), (2, 3), range(1, 11)):
        got = _distinguished(stein_model(m0, m1, 1, p))
        assert got == p * (m1 - 1) + m0 - 2, (m0, m1, p, got)
    return "60 models"


def crit_3():
    checked = 0
    for m in [(2, 2, 1), (3, 2, 1), (4, 3, 2)]:
        r = [p * (m[1] - 1) + m[0] - 2 for p in range(1, 7)]
        for n in (1, 2, 3):
            members = [stein_bcs_model(m, n, p) for p in range(1, 7)]
            sets = [M.class_set for M in members]
            cert = infer_certificate(sets, n)
            assert cert.verified, (m, n, cert.failure_reason)
            assert verify_certificate(sets, cert)[0]
            for j in range(n):
                seq = [d.a[j] for d in cert.per_member]
                assert seq == r, (m, n, j, seq)
            checked += 1
    return f"{checked} families"


def crit_4():
    members = [elliptic_model(2, 2 * q + 1, 2) for q in range(1, 9)]
    cert = infer_certificate([M.nice_subset for M in members], 1)
    assert cert.verified, cert.failure_reason
    bounds = family_divergence_bound(members, cert, 1)
    assert bounds == [6 * q + 1 for q in range(1, 9)], bounds
    assert bounds == [_distinguished(M) for M in members]
    assert all(a < b for a, b in zip(bounds, bounds[1:]))
    return f"bounds {bounds}"


def crit_5():
    for n in range(1, 21):
        assert embedding_applies(12 * n + 10, n, 0, 0).threshold_value == 11 * n + 10
        assert embedding_applies(2 * n, n, 0, 0).threshold_value == n
        for b2W, b1 in itertools.product(range(0, 12 * n + 40), range(4)):
            assert embedding_applies(12 * n + 10, n, b2W, b1).applies is (b2W - 4 * b1 > 11 * n + 10)
            assert embedding_applies(2 * n, n, b2W, b1).applies is (b2W - 4 * b1 > n)
    cells = 0
    for b2X, b2W, b1, n in itertools.product(range(11), range(11), range(11), range(1, 11)):
        assert surgery_applies(b2X, b2X, b2W, b1, n).applies is (b2W + 3 * b1 < n)
        cells += 1
    return f"{cells} surgery grid cells"


def _adjunction_consistent_model(rng, rank, B=3):
    """Random form, planted ±K, genus table just above the adjunction bound."""
    form = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        for j in range(i, rank):
            form[i][j] = form[j][i] = rng.randint(-3, 3)
    L = Lattice(rank, (), form)
    K = L.cls([rng.randint(-3, 3) for _ in range(rank)])
    simple = rng.random() < 0.8
    M = ManifoldModel(L, True, simple, True, 0, SW_BASIC, (K, -K))
    table = {}
    for v in itertools.product(range(-B, B + 1), repeat=rank):
        if not any(v) or canonical_sign(v) != v:
            continue
        cls = L.cls(v)
        need = sw_adjunction_lower_bound(M, cls) + pair(cls, cls)  # 2g >= need
        table[v] = max(0, -(-need // 2)) + rng.randint(0, 2)
    return M, GenusModel(L, table)


def crit_6():
    rng = random.Random(20240611)
    models = 0
    while models < 60:
        rank = rng.randint(1, 3)
        M, G = _adjunction_consistent_model(rng, rank)
        L = G.lattice
        for v in itertools.product(range(-3, 4), repeat=rank):
            if any(v):
                cls = L.cls(v)
                assert sw_adjunction_lower_bound(M, cls) <= adjunction_genus(G, cls), v
        table = {B: [bounded_n_genus(G, n, B).value for n in range(0, rank + 2)] for B in (1, 2, 3)}
        for B, vals in table.items():
            for n in range(2, rank + 2):
                assert vals[n] <= vals[n - 1], (B, vals)
        for n in range(0, rank + 2):
            assert table[1][n] >= table[2][n] >= table[3][n], (n, table)
        models += 1
    return f"{models} models"


def crit_7():
    R = np.arange(13)
    b2X, b2W, b1, m, n, b2c = np.meshgrid(R, R, R, R, R[1:], R, indexing="ij", sparse=False)
    valid = mv_consistent(b2X, b2W, b1, b2c)
    surg = surgery_condition(m, b2X, b2W, b1, n)
    finite = n > surgery_finiteness_threshold(m, b2c, b1) - 1
    bad_surgery = int(np.count_nonzero(valid & surg & ~finite))
    emb = embedding_condition(m, n, b2W, b1)
    inside = valid & (b2c <= complement_b2_bound(b2X, b2W, b1))
    bad_embed = int(np.count_nonzero(inside & emb & ~surgery_condition(m, b2X, b2c, b1, n)))
    assert bad_surgery == 0 and bad_embed == 0, (bad_surgery, bad_embed)
    return f"{int(valid.sum())} consistent tuples"


def crit_8():
    unknot = AlexanderPolynomial.parse("1")
    trefoil = AlexanderPolynomial.torus_2(3)
    for k, p, q, t in [(2, 1, 1, 1), (3, 2, 3, 2), (4, 3, 5, 3)]:
        base = elliptic_model(k, p, q)
        (X,) = knot_surgery_family(base, elliptic_tori(k, t), [unknot])
        assert X.class_set == base.class_set
    base = elliptic_model(3, 2, 3)
    (T,) = elliptic_tori(3, 1)
    (X,) = knot_surgery_family(base, [T], [trefoil])
    PT = T.lattice.cls([sum(a * b for a, b in zip(row, T.coords)) for row in T.lattice.form])
    top = max(base.class_set)
    assert set(X.nice_subset) == {top + PT * 2, top - PT * 2, -top + PT * 2, -top - PT * 2}
    members = knot_surgery_on_elliptic(1, [AlexanderPolynomial.torus_2(2 * i + 1) for i in range(1, 6)])
    cert = infer_certificate([M.nice_subset for M in members], 1)
    assert cert.verified, cert.failure_reason
    assert [d.a[0] for d in cert.per_member] == [2 * i for i in range(1, 6)]
    return "unknot, trefoil shift, degree 1..5 family"


CRITERIA = {
    1: ("elliptic divisibility", crit_1, 1.0),
    2: ("Stein divisibility", crit_2, 1.0),
    3: ("nicety round trip", crit_3, 5.0),
    4: ("divergence bound", crit_4, 1.0),
    5: ("threshold identities", crit_5, 1.0),
    6: ("oracle consistency", crit_6, 300.0),
    7: ("Mayer-Vietoris sweep", crit_7, 10.0),
    8: ("knot-surgery identity", crit_8, 1.0),
}


def run_criterion(i: int) -> tuple[bool, str]:
    name, fn, limit = CRITERIA[i]
    start = time.perf_counter()
    try:
        detail = fn()
        ok = True
    except AssertionError as exc:
        ok, detail = False, f"assertion failed: {exc}"
    elapsed = time.perf_counter() - start
    if ok and elapsed >= limit:
        ok, detail = False, f"too slow ({elapsed:.2f}s >= {limit}s)"
    line = f"criterion {i} [{name}]: {'PASS' if ok else 'FAIL'} in {elapsed:.2f}s ({detail})"
    RESULTS[i] = line
    print(line)
    return ok, line


@pytest.mark.parametrize("i", sorted(CRITERIA))
def test_criterion(i):
    ok, line = run_criterion(i)
    assert ok, line


if __name__ == "__main__":
    failed = [i for i in sorted(CRITERIA) if not run_criterion(i)[0]]
    sys.exit(1 if failed else 0)
