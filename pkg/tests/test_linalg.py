import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bdcluster.linalg import (Mat, NonGeneric, det, det_cofactor, dual_matrix,
                              factor_b_nm, factor_np_b, gauss, inverse,
                              lower_upper_parts, nilpotent_exp, unipotent_log,
                              w0_signed, w0_signed_inv)


def frac_mat(rows):
    return Mat([[Fraction(x) for x in r] for r in rows])


def random_unimodular(n, rng, bound=3):
    L = [[Fraction(rng.randint(-bound, bound)) if i > j else Fraction(int(i == j))
          for j in range(n)] for i in range(n)]
    V = [[Fraction(rng.randint(-bound, bound)) if i < j else Fraction(int(i == j))
          for j in range(n)] for i in range(n)]
    d = [Fraction(rng.choice([x for x in range(-bound, bound + 1) if x]))
         for _ in range(n - 1)]
    d.append(1 / _prod(d))
    D = Mat([[d[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)])
    return Mat(L) * D * Mat(V)


def _prod(xs):
    p = Fraction(1)
    for x in xs:
        p *= x
    return p


small_entries = st.integers(min_value=-4, max_value=4)


def test_det_identity_and_2x2():
    assert det(Mat.identity(3)) == 1
    assert det(frac_mat([[1, 2], [3, 4]])) == -2


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(small_entries, min_size=4, max_size=4), min_size=4, max_size=4))
def test_det_matches_cofactor_oracle(rows):
    m = frac_mat(rows)
    assert det(m) == det_cofactor(m)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=0, max_value=10_000))
def test_det_multiplicative(seed_a, seed_b):
    rng_a, rng_b = random.Random(seed_a), random.Random(seed_b)
    a = random_unimodular(4, rng_a)
    b = random_unimodular(4, rng_b)
    assert det(a * b) == det(a) * det(b)


def test_gauss_2x2_documented_case():
    L, D, V = gauss(frac_mat([[2, 1], [4, 3]]))
    assert L == frac_mat([[1, 0], [2, 1]])
    assert D == frac_mat([[2, 0], [0, 1]])
    assert V == Mat([[Fraction(1), Fraction(1, 2)], [Fraction(0), Fraction(1)]])


def test_gauss_identity():
    L, D, V = gauss(Mat.identity(3))
    assert L == Mat.identity(3) and D == Mat.identity(3) and V == Mat.identity(3)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_gauss_round_trip(seed):
    m = random_unimodular(4, random.Random(seed))
    try:
        L, D, V = gauss(m)
    except NonGeneric:
        return
    assert L * D * V == m
    assert L.is_unitriangular(upper=False)
    assert V.is_unitriangular(upper=True)


def test_gauss_nongeneric_stage():
    with pytest.raises(NonGeneric) as exc:
        gauss(frac_mat([[0, 1], [1, 0]]))
    assert exc.value.stage == 1


def test_opposite_gauss_antidiagonal_is_non_generic():
    # [[0,-1],[1,0]] has vanishing trailing 1x1 minor, so no N+ * B- form exists.
    with pytest.raises(NonGeneric):
        factor_np_b(frac_mat([[0, -1], [1, 0]]))


def test_opposite_gauss_generic_weyl_translate():
    # V * sbar for V = [[1,0],[u,1]]: the (.)_+ factor carries 1/u.
    u = Fraction(5)
    m = frac_mat([[0, -1], [1, -u]])
    n_plus, b_low = factor_np_b(m)
    assert n_plus == Mat([[Fraction(1), 1 / u], [Fraction(0), Fraction(1)]])
    assert n_plus * b_low == m and b_low.is_lower_triangular()


def test_opposite_gauss_upper_input_is_identity_factor():
    m = frac_mat([[1, 5], [0, 1]])
    n_plus, b_low = factor_np_b(m)
    assert n_plus == m and b_low == Mat.identity(2)


def test_opposite_gauss_identity():
    n_plus, b_low = factor_np_b(Mat.identity(3))
    assert n_plus == Mat.identity(3) and b_low == Mat.identity(3)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=0, max_value=10_000))
def test_factor_round_trips(seed):
    m = random_unimodular(4, random.Random(seed))
    try:
        n_plus, b_low = factor_np_b(m)
        b_up, n_minus = factor_b_nm(m)
        m_low, m_up = lower_upper_parts(m)
    except NonGeneric:
        return
    assert n_plus * b_low == m and n_plus.is_unitriangular(upper=True)
    assert b_up * n_minus == m and n_minus.is_unitriangular(upper=False)
    assert b_up.is_upper_triangular()
    assert m_low * m_up == m and m_low.is_unitriangular(upper=False)


def test_dual_matrix_identity():
    assert dual_matrix(Mat.identity(4)) == Mat.identity(4)


def test_dual_matrix_diagonal_case():
    # diag(a,b,c) with abc=1: cofactors give diag(bc, ac, ab) = diag(1/a,1/b,1/c),
    # then conjugation by w0*J reverses the order.
    a, b, c = Fraction(2), Fraction(3), Fraction(1, 6)
    m = Mat([[a, 0, 0], [0, b, 0], [0, 0, c]])
    dm = dual_matrix(m)
    assert dm == Mat([[1 / c, 0, 0], [0, 1 / b, 0], [0, 0, 1 / a]])


def _complement(idx, n):
    return [i for i in range(n) if i not in idx]


@settings(max_examples=15, deadline=None)
@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=3, max_value=4))
def test_jacobi_complementary_minors(seed, n):
    """|X_I^J| equals the complementary minor of the dual matrix, all signs included."""
    from itertools import combinations

    x = random_unimodular(n, random.Random(seed))
    xd = dual_matrix(x)
    for k in range(1, n):
        for I in combinations(range(n), k):
            for J in combinations(range(n), k):
                lhs = det(x.submatrix(list(I), list(J)))
                w0I = sorted(n - 1 - i for i in I)
                w0J = sorted(n - 1 - j for j in J)
                rhs = det(xd.submatrix(_complement(w0I, n), _complement(w0J, n)))
                assert lhs == rhs


def test_w0_signed_inverse():
    for n in (2, 3, 4, 5):
        assert w0_signed(n) * w0_signed_inv(n) == Mat.identity(n)


def test_unipotent_log_exp_round_trip():
    rng = random.Random(7)
    n = 4
    m = Mat([[Fraction(rng.randint(-3, 3)) if j > i else Fraction(int(i == j))
              for j in range(n)] for i in range(n)])
    assert nilpotent_exp(unipotent_log(m)) == m


def test_matrix_json_round_trip(tmp_path):
    from bdcluster.linalg import load_matrix, save_matrix

    m = Mat([[Fraction(1, 2), Fraction(-3)], [Fraction(0), Fraction(7, 5)]])
    p = tmp_path / "m.json"
    save_matrix(m, p)
    assert load_matrix(p) == m
