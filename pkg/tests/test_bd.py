import pytest

from bdcluster.bd import (BDPair, BDTriple, NotBijective, NotEndpoint,
                          NotIsometry, NotNilpotent, running_example_pair,
                          runs_from_subset)


def test_running_example_triples_validate():
    pair = running_example_pair()
    assert pair.rows.gamma1 == {1, 2, 5}
    assert pair.cols.gamma2 == {2, 3, 5}


def test_empty_triple_is_valid():
    t = BDTriple.empty(5)
    assert t.is_empty() and t.components() == []


def test_fixed_point_is_not_nilpotent():
    with pytest.raises(NotNilpotent):
        BDTriple(3, {1}, {1}, {1: 1})


def test_cycle_is_not_nilpotent():
    with pytest.raises(NotNilpotent):
        BDTriple(4, {1, 2}, {1, 2}, {1: 2, 2: 1})


def test_non_bijective_rejected():
    with pytest.raises(NotBijective):
        BDTriple(5, {1, 2}, {3, 4}, {1: 3, 2: 3})


def test_non_consecutive_image_rejected():
    with pytest.raises(NotIsometry):
        BDTriple(6, {1, 2}, {3, 5}, {1: 3, 2: 5})


def test_mixed_orientation_rejected():
    with pytest.raises(NotIsometry):
        BDTriple(7, {1, 2, 3}, {4, 5, 6}, {1: 5, 2: 4, 3: 6})


def test_runs_running_example():
    pair = running_example_pair()
    assert pair.x_row_runs().intervals == ((1, 3), (4, 4), (5, 6), (7, 7))
    assert pair.x_col_runs().intervals == ((1, 1), (2, 2), (3, 5), (6, 7))
    assert pair.y_row_runs().intervals == ((1, 2), (3, 5), (6, 6), (7, 7))
    assert pair.y_col_runs().intervals == ((1, 1), (2, 4), (5, 6), (7, 7))


def test_trivial_runs_for_empty_triple():
    assert runs_from_subset(4, set()).intervals == ((1, 1), (2, 2), (3, 3), (4, 4))


def test_dual_runs_running_example():
    pair = running_example_pair()
    xr = pair.x_row_runs()
    assert xr.dual().run_of(5) == (5, 7)           # dual of [1,3]
    assert (5, 7) in xr.dual().intervals
    yc = pair.y_col_runs()
    assert (4, 6) in yc.dual().intervals           # dual of [2,4]


def test_dual_numbering_reversed():
    xr = running_example_pair().x_row_runs()
    d = xr.dual()
    # primal run #1 = [1,3]; its mirror [5,7] must again be run #1.
    assert xr.run_index(2) == 1
    assert d.run_index(6) == 1
    assert d.run_index(1) == 4


def test_dual_is_involution():
    for subset in [set(), {1, 2, 5}, {3, 4, 6}]:
        p = runs_from_subset(7, subset)
        assert p.dual().dual() == p


def test_run_partition_covers_uniquely():
    p = running_example_pair().x_row_runs()
    seen = []
    for a, b in p.intervals:
        seen.extend(range(a, b + 1))
    assert seen == list(range(1, 8))


def test_orientation_running_example():
    pair = running_example_pair()
    assert pair.rows.orientation((1, 2)) == "reversed"
    assert pair.cols.orientation((3, 4)) == "preserved"
    assert pair.rows.orientation((5, 5)) == "preserved"


def test_remove_root_running_example():
    pair = running_example_pair()
    reduced = pair.remove_root("rows", 2)
    assert reduced.rows.gamma1 == {1, 5}
    assert reduced.rows.gamma2 == {1, 4}
    assert reduced.rows.map == {1: 4, 5: 1}
    assert reduced.size() == pair.size() - 1


def test_remove_singleton_component():
    t = BDTriple(3, {1}, {2}, {1: 2})
    assert t.remove_root(1).is_empty()


def test_remove_interior_root_rejected():
    t = BDTriple(8, {1, 2, 3}, {5, 6, 7}, {1: 5, 2: 6, 3: 7})
    with pytest.raises(NotEndpoint):
        t.remove_root(2)


def test_config_round_trip():
    pair = running_example_pair()
    assert BDPair.from_config(pair.to_config()) == pair


def test_no_reversed_component_exists_at_n4():
    """Exhaustive: any n=4 triple with a reversed nontrivial component breaks
    nilpotency, so the smallest orientation-reversing examples live at n=5."""
    from itertools import permutations

    found = []
    roots = [1, 2, 3]
    for size in (2, 3):
        for g1 in _subsets(roots, size):
            comps = _intervals(g1)
            for g2 in _subsets(roots, size):
                for perm in permutations(sorted(g2)):
                    mapping = dict(zip(sorted(g1), perm))
                    try:
                        t = BDTriple(4, g1, g2, mapping)
                    except Exception:
                        continue
                    if any(t.orientation(c) == "reversed" for c in t.components()
                           if c[0] != c[1]):
                        found.append(t)
    assert found == []


def _subsets(xs, k):
    from itertools import combinations
    return [set(c) for c in combinations(xs, k)]


def _intervals(s):
    out, cur = [], []
    for x in sorted(s):
        if cur and x == cur[-1] + 1:
            cur.append(x)
        else:
            cur = [x]
            out.append(cur)
    return out


def test_reversed_component_exists_at_n5():
    t = BDTriple(5, {1, 2}, {3, 4}, {1: 4, 2: 3})
    assert t.orientation((1, 2)) == "reversed"
