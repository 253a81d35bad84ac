import random

import pytest

from bdcluster.bd import BDPair, BDTriple, running_example_pair
from bdcluster.bdgraph import NotAperiodic
from bdcluster.verify import (SamplePlan, check_bts, check_compatibility,
                              check_induction_step, check_jacobi,
                              check_log_canonical, check_minor_dualities,
                              check_multiplicativity, check_poisson_map,
                              check_seaweed_inverse, random_aperiodic_pair,
                              sample_sl)
from bdcluster.linalg import det

PLAN = SamplePlan(master_seed=11, trials=3)
FAST = SamplePlan(master_seed=11, trials=2)


def single_root_pair_n3():
    return BDPair(BDTriple(3, {1}, {2}, {1: 2}), BDTriple.empty(3))


def reversed_pair_n5():
    return BDPair(BDTriple(5, {1, 2}, {3, 4}, {1: 4, 2: 3}), BDTriple.empty(5))


def test_sample_sl_is_unimodular_and_deterministic():
    a = sample_sl(4, PLAN, 0)
    b = sample_sl(4, PLAN, 0)
    c = sample_sl(4, PLAN, 1)
    assert det(a) == 1
    assert a == b
    assert a != c


def test_sample_sl_has_nonzero_leading_minors():
    U = sample_sl(5, PLAN, 2)
    for k in range(1, 6):
        assert det(U.submatrix(range(k), range(k))) != 0


def test_bts_empty_pairs():
    for n in (3, 4, 5):
        rep = check_bts(BDPair.empty(n), FAST)
        assert rep.passed, rep.details


def test_bts_single_root_pair():
    rep = check_bts(single_root_pair_n3(), PLAN)
    assert rep.passed, rep.details


def test_bts_reversed_pair_n5():
    rep = check_bts(reversed_pair_n5(), FAST)
    assert rep.passed, rep.details


def test_log_canonical_single_root():
    rep = check_log_canonical(single_root_pair_n3(), PLAN)
    assert rep.passed, rep.details
    assert rep.details["passing_order"] == ["rows-cols"]


def test_log_canonical_empty_pair_baseline():
    rep = check_log_canonical(BDPair.empty(3), PLAN)
    assert rep.passed or len(rep.details["passing_order"]) == 2
    assert "rows-cols" in rep.details["passing_order"]


def test_log_canonical_refuses_periodic():
    pair = BDPair(BDTriple(3, {1}, {2}, {1: 2}), BDTriple(3, {2}, {1}, {2: 1}))
    with pytest.raises(NotAperiodic):
        check_log_canonical(pair, FAST)


def test_compatibility_small_pairs():
    for pair in (BDPair.empty(3), single_root_pair_n3()):
        rep = check_compatibility(pair, PLAN)
        assert rep.passed, rep.details
        assert rep.details["lambda_is_unity"], rep.details


def test_poisson_map_rows_only_n3():
    rep = check_poisson_map(single_root_pair_n3(), FAST, sides="rows-only")
    assert rep.passed, rep.details


def test_poisson_map_two_sided_n3():
    pair = BDPair(BDTriple(3, {1}, {2}, {1: 2}), BDTriple(3, {1}, {2}, {1: 2}))
    rep = check_poisson_map(pair, FAST)
    assert rep.passed, rep.details


def test_poisson_map_two_sided_n4():
    pair = BDPair(BDTriple(4, {1, 2}, {2, 3}, {1: 2, 2: 3}),
                  BDTriple(4, {3}, {1}, {3: 1}))
    rep = check_poisson_map(pair, FAST)
    assert rep.passed, rep.details


def test_poisson_map_reversed_triple_n5():
    rep = check_poisson_map(reversed_pair_n5(), SamplePlan(master_seed=11, trials=1),
                            sides="rows-only")
    assert rep.passed, rep.details


def test_multiplicativity():
    rep = check_multiplicativity(FAST)
    assert rep.passed, rep.details


def test_jacobi():
    rep = check_jacobi(SamplePlan(master_seed=11, trials=1))
    assert rep.passed, rep.details


def test_minor_dualities_running_example():
    rep = check_minor_dualities(running_example_pair(), FAST)
    assert rep.passed, rep.details
    assert rep.details["reversed_anchor_rows"] == [2, 3]


def test_minor_dualities_reversed_n5():
    rep = check_minor_dualities(reversed_pair_n5(), FAST)
    assert rep.passed, rep.details


def test_induction_step_single_root():
    rep = check_induction_step(single_root_pair_n3(), "rows", 1, FAST)
    assert rep.passed, rep.details


def test_induction_step_cols():
    pair = BDPair(BDTriple(4, {1}, {3}, {1: 3}), BDTriple(4, {2}, {3}, {2: 3}))
    rep = check_induction_step(pair, "cols", 2, FAST)
    assert rep.passed, rep.details


def test_seaweed_inverse_n3_n4():
    assert check_seaweed_inverse(BDTriple(3, {1}, {2}, {1: 2}), PLAN).passed
    assert check_seaweed_inverse(BDTriple(4, {1, 2}, {2, 3}, {1: 2, 2: 3}), PLAN).passed


def test_random_aperiodic_pair_generator():
    rng = random.Random(5)
    for n in (4, 5):
        pair = random_aperiodic_pair(n, rng)
        assert pair.n == n
