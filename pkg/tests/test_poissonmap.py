import random
from fractions import Fraction

import pytest
from conftest import generic_unimodular, random_unimodular

from bdcluster.bd import BDPair, BDTriple, running_example_pair, runs_from_subset
from bdcluster.blocks import SeedFunction, all_seed_functions, seed_function
from bdcluster.linalg import Mat, NonGeneric, det, gauss, inverse
from bdcluster.poissonmap import (bar_v, block_diagonal_part,
                                  commutation_t_factor, h_apply, h_maps,
                                  h_r_factor, invert_hr_seaweed,
                                  leading_unipotent_factor,
                                  trailing_unipotent_factor,
                                  weyl_representative)
from bdcluster.rmatrix import bgamma_apply


def single_root_pair_n3():
    return BDPair(BDTriple(3, {1}, {2}, {1: 2}), BDTriple.empty(3))


def rand_lower_uni(n, rng, bound=3):
    return Mat([[Fraction(rng.randint(-bound, bound)) if i > j else Fraction(int(i == j))
                 for j in range(n)] for i in range(n)])


def rand_upper_uni(n, rng, bound=3):
    return rand_lower_uni(n, rng, bound).transpose()


# --- Weyl representatives -----------------------------------------------------

def test_weyl_entries_are_signs():
    runs = runs_from_subset(7, {1, 2, 5})
    W = weyl_representative(7, runs)
    assert all(x in (Fraction(-1), Fraction(0), Fraction(1))
               for row in W.rows for x in row)


def test_weyl_conjugates_lower_to_upper_on_run_blocks():
    rng = random.Random(3)
    runs = runs_from_subset(7, {1, 2, 5})
    W = weyl_representative(7, runs)
    low = block_diagonal_part(rand_lower_uni(7, rng), runs)
    conj = W * low * inverse(W)
    assert conj.is_upper_triangular()


def test_weyl_block_diagonal_support():
    runs = runs_from_subset(7, {1, 2, 5})
    W = weyl_representative(7, runs)
    for i in range(7):
        for j in range(7):
            if W.get(i, j) != 0:
                assert runs.run_of(i + 1) == runs.run_of(j + 1)


# --- block-diagonal unipotent splits ------------------------------------------

def test_leading_factor_n3_single_run():
    # U- = [[1,0,0],[a,1,0],[b,c,1]] factors as V * x_(-2)(t) x_(-1)(s) with
    # V in the [1,2] block; solving the word factorization by hand gives
    # V_21 = (ac - b)/c.
    runs = runs_from_subset(3, {1})
    a, b, c = Fraction(2), Fraction(-3), Fraction(5)
    U = Mat([[Fraction(1), Fraction(0), Fraction(0)],
             [a, Fraction(1), Fraction(0)],
             [b, c, Fraction(1)]])
    V, util = leading_unipotent_factor(U, runs)
    expected = Mat.identity(3)
    expected.rows[1][0] = (a * c - b) / c
    assert V == expected
    assert V * util == U
    # util lies in the complementary cell: entry (3,1) = (3,2)*(2,1)
    assert util.get(2, 0) == util.get(2, 1) * util.get(1, 0)


def test_leading_factor_trivial_and_full_runs():
    rng = random.Random(5)
    U = rand_lower_uni(4, rng)
    V, util = leading_unipotent_factor(U, runs_from_subset(4, set()))
    assert V == Mat.identity(4) and util == U
    V, util = leading_unipotent_factor(U, runs_from_subset(4, {1, 2, 3}))
    assert V == U and util == Mat.identity(4)


def test_trailing_factor_mirrors():
    rng = random.Random(7)
    U = rand_upper_uni(4, rng)
    runs = runs_from_subset(4, {2, 3})
    util, V = trailing_unipotent_factor(U, runs)
    assert util * V == U
    # V is supported on the run blocks
    for i in range(4):
        for j in range(i + 1, 4):
            if runs.run_of(i + 1) != runs.run_of(j + 1):
                assert V.get(i, j) == 0
    # the split transposes the leading one exactly
    Vt, _ = leading_unipotent_factor(U.transpose(), runs)
    assert V == Vt.transpose()


def test_leading_factor_block_supported_input_splits_exactly():
    runs = runs_from_subset(3, {1})
    U = Mat.identity(3)
    U.rows[1][0] = Fraction(4)
    V, util = leading_unipotent_factor(U, runs)
    assert V == U and util == Mat.identity(3)


# --- opposite factors on run blocks -------------------------------------------

def test_bar_v_2x2_by_hand():
    runs = runs_from_subset(3, {1})
    W = weyl_representative(3, runs)
    u = Fraction(7)
    V = Mat.identity(3)
    V.rows[1][0] = u
    out = bar_v(V, W, runs, side="plus")
    expected = Mat.identity(3)
    expected.rows[0][1] = 1 / u
    assert out == expected


def test_bar_v_zero_parameter_is_non_generic():
    runs = runs_from_subset(3, {1})
    W = weyl_representative(3, runs)
    with pytest.raises(NonGeneric):
        bar_v(Mat.identity(3), W, runs, side="plus")


def test_bar_v_minus_side_recomposition():
    rng = random.Random(13)
    runs = runs_from_subset(4, {2, 3})
    W = weyl_representative(4, runs)
    V = block_diagonal_part(rand_upper_uni(4, rng), runs)
    out = bar_v(V, W, runs, side="minus")
    assert out.is_unitriangular(upper=False)
    # blockwise: W*V = (W V)_{+,0} * out restricted to each run block
    prod = W * V
    for a, b in runs.intervals:
        if a == b:
            continue
        idx = list(range(a - 1, b))
        sub = prod.submatrix(idx, idx)
        from bdcluster.linalg import factor_b_nm
        up, low = factor_b_nm(sub)
        assert low == out.submatrix(idx, idx)


# --- the h maps ----------------------------------------------------------------

def hmap_defined(pair):
    def ok(U):
        try:
            h_maps(pair, U)
            return True
        except NonGeneric:
            return False
    return ok


def test_h_empty_pair_is_identity():
    pair = BDPair.empty(3)
    U = generic_unimodular(3, 17)
    hp = h_maps(pair, U)
    assert hp.h_r == Mat.identity(3) and hp.h_c == Mat.identity(3)
    assert hp.image == U


def test_h_single_root_depth_one():
    pair = single_root_pair_n3()
    U = generic_unimodular(3, 19, predicate=hmap_defined(pair))
    hp = h_maps(pair, U)
    assert hp.h_r == bgamma_apply(pair.rows, hp.bar_v_r)
    assert hp.h_c == Mat.identity(3)


def test_h_preserves_determinant_and_support():
    pair = running_example_pair()
    U = generic_unimodular(7, 23, predicate=hmap_defined(pair))
    hp = h_maps(pair, U)
    assert det(hp.image) == det(U)
    assert hp.h_r.is_unitriangular(upper=True)
    assert hp.h_c.is_unitriangular(upper=False)
    # H_r lives in the run blocks of gamma2 of the row triple
    runs = runs_from_subset(7, pair.rows.gamma2)
    assert hp.h_r == block_diagonal_part(hp.h_r, runs)
    runs_c = runs_from_subset(7, pair.cols.gamma1)
    assert hp.h_c == block_diagonal_part(hp.h_c, runs_c)


def test_h_r_depends_only_on_lower_factor():
    pair = running_example_pair()
    rng = random.Random(29)
    U = generic_unimodular(7, 29, predicate=hmap_defined(pair))
    L, D, V = gauss(U)
    # replace the diagonal and upper parts
    D2 = Mat.identity(7)
    for i in range(6):
        D2.rows[i][i] = Fraction(rng.choice([1, 2, 3]))
    prod = Fraction(1)
    for i in range(6):
        prod *= D2.get(i, i)
    D2.rows[6][6] = 1 / prod
    V2 = rand_upper_uni(7, rng)
    U2 = L * D2 * V2
    assert h_r_factor(pair.rows, U)[0] == h_r_factor(pair.rows, U2)[0]


def test_bar_v_through_h_identity():
    # bar V = lift*(lift(H^-1)) * lift*(H): recover bar V_r from H_r alone.
    pair = running_example_pair()
    U = generic_unimodular(7, 31, predicate=hmap_defined(pair))
    hp = h_maps(pair, U)
    t = pair.rows
    lhs = bgamma_apply(t, bgamma_apply(t, inverse(hp.h_r)), star=True) * \
        bgamma_apply(t, hp.h_r, star=True)
    assert lhs == hp.bar_v_r


# --- seaweed inverse -----------------------------------------------------------

def seaweed_sample(triple_r, seed, bound=2):
    rng = random.Random(seed)
    n = triple_r.n
    runs = runs_from_subset(n, triple_r.gamma1)
    V = block_diagonal_part(rand_lower_uni(n, rng, bound), runs)
    B = Mat([[Fraction(rng.randint(-bound, bound)) if j > i else Fraction(0)
              for j in range(n)] for i in range(n)])
    for i in range(n):
        B.rows[i][i] = Fraction(rng.choice([1, -1, 2]))
    return V * B


def test_invert_hr_empty_triple_is_identity():
    t = BDTriple.empty(3)
    Z = generic_unimodular(3, 37)
    assert invert_hr_seaweed(t, Z) == Z


def test_invert_hr_round_trip_n3():
    t = BDTriple(3, {1}, {2}, {1: 2})
    for seed in (1, 2, 3):
        U = seaweed_sample(t, seed)
        try:
            h_r, _ = h_r_factor(t, U)
        except NonGeneric:
            continue
        Z = h_r * U
        assert invert_hr_seaweed(t, Z) == U


def test_invert_hr_round_trip_n4():
    t = BDTriple(4, {1, 2}, {2, 3}, {1: 2, 2: 3})
    done = 0
    for seed in range(12):
        U = seaweed_sample(t, seed)
        try:
            h_r, _ = h_r_factor(t, U)
            Z = h_r * U
            back = invert_hr_seaweed(t, Z)
        except NonGeneric:
            continue
        assert back == U
        done += 1
    assert done >= 3


# --- root removal machinery -----------------------------------------------------

def test_commutation_factor_vtv():
    # T(bar V_r) of the full pair equals bar V_r of the reduced pair.
    pair = running_example_pair()
    reduced = pair.remove_root("rows", 2)

    def ok(U):
        try:
            h_maps(pair, U)
            h_maps(reduced, U)
            return True
        except NonGeneric:
            return False

    U = generic_unimodular(7, 41, predicate=ok)
    hp = h_maps(pair, U)
    hp_red = h_maps(reduced, U)
    T = commutation_t_factor(pair.rows, reduced.rows, hp.bar_v_r)
    assert T == hp_red.bar_v_r


def test_commutation_factor_vtv_left_endpoint():
    pair = running_example_pair()
    reduced = pair.remove_root("rows", 1)

    def ok(U):
        try:
            h_maps(pair, U)
            h_maps(reduced, U)
            return True
        except NonGeneric:
            return False

    U = generic_unimodular(7, 43, predicate=ok)
    hp = h_maps(pair, U)
    hp_red = h_maps(reduced, U)
    T = commutation_t_factor(pair.rows, reduced.rows, hp.bar_v_r)
    assert T == hp_red.bar_v_r


def test_c_matrix_unipotent_upper():
    pair = running_example_pair()
    for alpha in (1, 2, 5):
        reduced = pair.remove_root("rows", alpha)

        def ok(U):
            try:
                h_maps(pair, U)
                h_maps(reduced, U)
                return True
            except NonGeneric:
                return False

        U = generic_unimodular(7, 47 + alpha, predicate=ok)
        C = h_maps(pair, U).h_r * inverse(h_maps(reduced, U).h_r)
        assert C.is_unitriangular(upper=True)


# --- invariance of the seed functions -------------------------------------------

def test_seed_invariance_under_twisted_translations():
    pair = running_example_pair()
    rng = random.Random(53)
    X = generic_unimodular(7, 59)
    Y = generic_unimodular(7, 61)
    N_plus = rand_upper_uni(7, rng, bound=2)
    N_minus = rand_lower_uni(7, rng, bound=2)
    X2 = N_plus * X * bgamma_apply(pair.cols, N_minus, star=True)
    Y2 = bgamma_apply(pair.rows, N_plus) * Y * N_minus
    for (i, j) in [(2, 1), (1, 2), (3, 6), (4, 1), (5, 3), (2, 7), (6, 6)]:
        f = seed_function(pair, i, j)
        assert f.eval_xy(X2, Y2) == f.eval_xy(X, Y), (i, j)
