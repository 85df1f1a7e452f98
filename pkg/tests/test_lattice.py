import itertools
from fractions import Fraction
from math import prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adjlab.lattice import (
    HClass,
    Lattice,
    LatticeError,
    determinant,
    direct_sum,
    divisibility,
    is_primitive,
    is_rational_basis,
    matmul,
    pair,
    rank_of,
    smith_normal_form,
    vector_rank,
)

from adjlab import jsonio


def brute_divisibility(coords):
    if not any(coords):
        return 0
    top = max(abs(c) for c in coords)
    return max(d for d in range(1, top + 1) if all(c % d == 0 for c in coords))


def fraction_rank(rows):
    """Plain Gauss-Jordan over Q."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


def minors_gcd(M, k):
    from math import gcd

    rows, cols = len(M), len(M[0])
    g = 0
    for rs in itertools.combinations(range(rows), k):
        for cs in itertools.combinations(range(cols), k):
            g = gcd(g, determinant([[M[r][c] for c in cs] for r in rs]))
    return g


def determinantal_invariant_factors(M):
    """d_k = D_k / D_{k-1} with D_k the gcd of k x k minors."""
    out = []
    prev = 1
    for k in range(1, min(len(M), len(M[0])) + 1):
        Dk = minors_gcd(M, k)
        out.append(0 if Dk == 0 else Dk // prev)
        if Dk == 0:
            prev = 0
            out += [0] * (min(len(M), len(M[0])) - k)
            break
        prev = Dk
    return out


L2 = Lattice(2, (), ((0, 1), (1, 0)))
T2 = Lattice(2, (2,), ((0, 1), (1, 0)))


class TestDivisibility:
    def test_examples(self):
        assert divisibility(L2.cls((6, 10))) == brute_divisibility((6, 10)) == 2
        assert divisibility(T2.cls((0, 0), (1,))) == 0
        assert divisibility(L2.cls((1, 0))) == 1

    def test_primitive(self):
        assert is_primitive(L2.cls((1, 1)))
        assert not is_primitive(L2.cls((2, 4)))
        assert not is_primitive(L2.cls((0, 0)))

    @given(st.lists(st.integers(-50, 50), min_size=1, max_size=4))
    def test_matches_brute_force(self, coords):
        L = Lattice(len(coords))
        assert divisibility(L.cls(coords)) == brute_divisibility(coords)

    @given(st.lists(st.integers(-30, 30), min_size=1, max_size=4), st.integers(-9, 9))
    def test_scaling(self, coords, n):
        L = Lattice(len(coords))
        a = L.cls(coords)
        if a.is_torsion():
            return
        assert divisibility(a * n) == abs(n) * divisibility(a)


class TestRank:
    def test_examples(self):
        assert rank_of([L2.cls((1, 0)), L2.cls((0, 1))]) == 2
        assert rank_of([L2.cls((1, 1)), L2.cls((2, 2))]) == 1
        assert rank_of([]) == 0

    def test_mixed_lattices(self):
        with pytest.raises(LatticeError):
            rank_of([L2.cls((1, 0)), Lattice(2).cls((0, 1))])

    @given(st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), max_size=6)
    ))
    def test_matches_gauss_jordan(self, rows):
        assert vector_rank(rows) == fraction_rank(rows)


class TestRationalBasis:
    def test_examples(self):
        assert is_rational_basis([L2.cls((2, 0)), L2.cls((0, 1))], L2)
        assert not is_rational_basis([L2.cls((1, 0)), L2.cls((1, 0))], L2)
        assert is_rational_basis([], Lattice(0))
        assert not is_rational_basis([L2.cls((1, 0))], L2)

    @given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3),
           st.permutations(range(3)), st.lists(st.booleans(), min_size=3, max_size=3))
    def test_permutation_and_negation(self, rows, perm, flips):
        L = Lattice(3)
        basis = [L.cls(r) for r in rows]
        moved = [(-basis[i] if f else basis[i]) for i, f in zip(perm, flips)]
        assert is_rational_basis(basis, L) == is_rational_basis(moved, L)


class TestPair:
    def test_examples(self):
        assert pair(L2.cls((1, 0)), L2.cls((0, 1))) == 1
        L1 = Lattice(1, (), ((-2,),))
        assert pair(L1.cls((1,)), L1.cls((1,))) == -2
        assert pair(L2.zero(), L2.cls((3, 4))) == 0

    def test_torsion_pairs_to_zero(self):
        assert pair(T2.cls((0, 0), (1,)), T2.cls((1, 1))) == 0

    @settings(max_examples=60)
    @given(st.data())
    def test_bilinear_symmetric(self, data):
        r = data.draw(st.integers(1, 4))
        upper = data.draw(st.lists(st.integers(-5, 5), min_size=r * r, max_size=r * r))
        form = [[0] * r for _ in range(r)]
        for i in range(r):
            for j in range(i, r):
                form[i][j] = form[j][i] = upper[i * r + j]
        L = Lattice(r, (), form)
        vec = st.lists(st.integers(-5, 5), min_size=r, max_size=r)
        a, b, c = (L.cls(data.draw(vec)) for _ in range(3))
        k = data.draw(st.integers(-4, 4))
        assert pair(a, b) == pair(b, a)
        assert pair(a + b, c) == pair(a, c) + pair(b, c)
        assert pair(a * k, b) == k * pair(a, b)


class TestLatticeInvariants:
    def test_asymmetric_form_rejected(self):
        with pytest.raises(LatticeError):
            Lattice(2, (), ((0, 1), (2, 0)))

    def test_torsion_chain(self):
        with pytest.raises(LatticeError):
            Lattice(0, (2, 3))
        with pytest.raises(LatticeError):
            Lattice(0, (1,))
        assert Lattice.from_torsion_orders(0, [2, 3]).torsion == (6,)

    def test_coords_length(self):
        with pytest.raises(LatticeError):
            L2.cls((1, 2, 3))

    def test_torsion_reduced(self):
        assert T2.cls((0, 0), (5,)).torsion_part == (1,)

    def test_direct_sum(self):
        S = direct_sum(L2, Lattice(1, (), ((-2,),)))
        assert S.rank == 3
        assert S.form[2][2] == -2 and S.form[0][1] == 1 and S.form[0][2] == 0


class TestSmith:
    def test_examples(self):
        assert smith_normal_form([[2, 0], [0, 3]]).diagonal == (1, 6)
        assert smith_normal_form([[1, 0], [0, 1]]).diagonal == (1, 1)
        assert smith_normal_form([[0]]).diagonal == (0,)

    def test_examples_match_determinantal_divisors(self):
        M = [[12, 6, 4, 8], [3, 9, 6, 12], [2, 16, 14, 28], [20, 10, 10, 20]]
        assert list(smith_normal_form(M).diagonal) == determinantal_invariant_factors(M) == [1, 10, 30, 0]

    @settings(max_examples=80)
    @given(st.integers(1, 4), st.integers(1, 4), st.data())
    def test_properties(self, r, c, data):
        M = [data.draw(st.lists(st.integers(-9, 9), min_size=c, max_size=c)) for _ in range(r)]
        S = smith_normal_form(M)
        assert [list(row) for row in S.D] == matmul(matmul(S.left, M), S.right)
        assert abs(determinant(S.left)) == 1
        assert abs(determinant(S.right)) == 1
        d = S.diagonal
        for i in range(len(S.D)):
            for j in range(len(S.D[0])):
                if i != j:
                    assert S.D[i][j] == 0
        assert all(x >= 0 for x in d)
        for a, b in zip(d, d[1:]):
            assert (b == 0) if a == 0 else (b % a == 0)
        assert list(d) == determinantal_invariant_factors(M)
        if r == c and determinant(M) != 0:
            assert prod(d) == abs(determinant(M))


class TestJson:
    def test_round_trip(self):
        L = Lattice(2, (2, 4), ((0, 1), (1, -3)))
        assert jsonio.lattice_from_json(jsonio.lattice_to_json(L)) == L
        c = L.cls((3, -7), (1, 3))
        assert jsonio.class_from_json(jsonio.class_to_json(c), L) == c

    def test_field_order(self):
        assert list(jsonio.lattice_to_json(L2)) == ["rank", "torsion", "form"]
        assert list(jsonio.class_to_json(L2.cls((1, 0)))) == ["coords", "torsion"]

    def test_big_integers_as_strings(self):
        L = Lattice(1)
        big = 2**70 + 1
        d = jsonio.class_to_json(L.cls((big,)))
        assert d["coords"] == [str(big)]
        assert jsonio.class_from_json(d, L).coords == (big,)
        assert jsonio.class_to_json(L.cls((2**63 - 1,)))["coords"] == [2**63 - 1]
