"""Core set arithmetic: spec'd examples plus independent brute-force oracles."""

import json
import random
from itertools import combinations

import pytest

from sumfree.core import (
    BUILTIN_PROFILE_IDS,
    ConfigCount,
    ConstraintProfile,
    IntSet,
    count_forbidden_k_subsets,
    is_sum_free,
    k_fold_sumset,
    outside_top_third,
    profile_for,
    satisfies,
    sigma_contains,
    sumset,
    top_third_interval,
)

rng = random.Random(0xC0FFEE)


def iset(members, hi=None, lo=0):
    return IntSet(members, lo=lo, hi=hi)


def random_set(max_value, max_size):
    size = rng.randint(0, max_size)
    return IntSet(rng.sample(range(1, max_value + 1), min(size, max_value)), lo=0, hi=max_value)


# --- IntSet basics ---------------------------------------------------------


def test_intset_membership_iteration_len():
    s = iset({5, 1, 3}, hi=6)
    assert list(s) == [1, 3, 5]
    assert len(s) == 3
    assert 3 in s and 2 not in s and 100 not in s
    assert s.min() == 1 and s.max() == 5


def test_intset_ground_validation():
    with pytest.raises(ValueError):
        IntSet({5}, lo=0, hi=4)
    with pytest.raises(ValueError):
        IntSet({0}, lo=1, hi=4)
    with pytest.raises(ValueError):
        IntSet({-1}, hi=4)
    # empty ground is allowed as hi == lo - 1
    assert len(IntSet((), lo=1, hi=0)) == 0


def test_intset_immutable_and_hashable():
    s = iset({1, 2}, hi=4)
    with pytest.raises(AttributeError):
        s.mask = 0
    assert iset({1, 2}, hi=4) == iset({1, 2}, hi=9)  # equality is members-only
    assert hash(iset({1, 2}, hi=4)) == hash(iset({1, 2}, hi=9))


def test_intset_json_round_trip():
    s = iset({2, 7}, lo=1, hi=9)
    blob = json.dumps(s.to_json())
    back = IntSet.from_json(json.loads(blob))
    assert back == s and back.lo == 1 and back.hi == 9
    assert s.to_json()["members"] == [2, 7]


def test_intset_set_algebra():
    a, b = iset({1, 2}, hi=4), iset({2, 3}, hi=4)
    assert a.union(b).members == (1, 2, 3)
    assert a.intersection(b).members == (2,)
    assert a.difference(b).members == (1,)
    assert iset({1, 5, 9}, hi=9).restrict(2, 6).members == (5,)


# --- sumset ----------------------------------------------------------------


def test_sumset_examples():
    a = iset({1, 3}, hi=10)
    res = sumset(a, a, 10)
    assert res.values.members == (2, 4, 6) and not res.overflowed

    res = sumset(IntSet((), hi=10), iset({5}, hi=10), 10)
    assert res.values.members == () and not res.overflowed

    b = iset({4, 5}, hi=5)
    res = sumset(b, b, 5)
    assert res.values.members == () and res.overflowed


def test_sumset_overflow_flag_partial():
    res = sumset(iset({1, 4}, hi=4), iset({3}, hi=4), 5)
    assert res.values.members == (4,) and res.overflowed


def test_sumset_lower_bound_random():
    # |A+B| >= |A| + |B| - 1 for nonempty integer sets, equality on
    # equal-difference arithmetic progressions.
    for _ in range(500):
        a, b = random_set(40, 8), random_set(40, 8)
        if not len(a) or not len(b):
            continue
        s = sumset(a, b, 200).values
        assert len(s) >= len(a) + len(b) - 1
    ap1 = iset(range(3, 20, 4), hi=40)
    ap2 = iset(range(1, 30, 4), hi=40)
    assert len(sumset(ap1, ap2, 200).values) == len(ap1) + len(ap2) - 1


# --- k-fold sumsets --------------------------------------------------------


def test_k_fold_examples():
    assert k_fold_sumset(iset({1, 3}, hi=3), 3, 20).members == (3, 5, 7, 9)
    assert k_fold_sumset(iset({2}, hi=2), 0, 10).members == (0,)
    assert k_fold_sumset(iset({4, 5}, hi=5), 3, 15).members == (12, 13, 14, 15)
    assert k_fold_sumset(IntSet((), hi=5), 2, 15).members == ()
    assert k_fold_sumset(iset({3, 7}, hi=7), 1, 5).members == (3,)


def test_k_fold_matches_iterated_sumset():
    for _ in range(200):
        a = random_set(25, 6)
        for k in range(2, 6):
            folded = k_fold_sumset(a, k, 60)
            step = sumset(k_fold_sumset(a, k - 1, 60), a, 60).values
            assert folded == step


def test_k_fold_with_zero_member():
    a = IntSet({0, 3}, hi=7)
    # 0 may pad any shorter sum, so kA contains all j-fold sums for j <= k
    assert k_fold_sumset(a, 2, 20).members == (0, 3, 6)
    assert k_fold_sumset(a, 3, 20).members == (0, 3, 6, 9)


# --- sigma reachability ----------------------------------------------------


def test_sigma_examples():
    assert not sigma_contains(iset({2}, hi=2), 7)
    assert sigma_contains(iset({2, 3}, hi=3), 7)
    assert sigma_contains(IntSet(), 0)
    assert not sigma_contains(IntSet(), 1)


def test_sigma_matches_bounded_union():
    # target reachable iff target in kA for some 0 <= k <= target (members >= 1)
    for _ in range(150):
        a = random_set(12, 5)
        for target in range(0, 25):
            by_union = any((target in k_fold_sumset(a, k, target)) for k in range(target + 1))
            assert sigma_contains(a, target) == by_union


# --- sum-freeness ----------------------------------------------------------


def test_sum_free_examples():
    assert is_sum_free(iset({4, 5}, lo=1, hi=5))
    assert not is_sum_free(iset({1, 2}, hi=2))
    assert is_sum_free(iset({2, 3}, hi=3))
    assert is_sum_free(IntSet())


def test_sum_free_equals_sumset_disjointness():
    for _ in range(400):
        a = random_set(30, 8)
        expected = not a.intersection(sumset(a, a, 60).values).mask
        assert is_sum_free(a) == expected


# --- forbidden configuration counting --------------------------------------


def naive_forbidden_count(members, n, k):
    target = 2 * n + 1
    hits = 0
    for combo in combinations(sorted(members), k):
        if sum(combo) == target:
            hits += 1
        elif k == 3 and combo[0] + combo[1] == combo[2]:
            hits += 1
    return hits


def test_forbidden_subsets_examples():
    assert count_forbidden_k_subsets(iset({1, 2, 3}, lo=1, hi=3), 3, 3) == ConfigCount(3, 1)
    for k in (3, 4, 5):
        assert count_forbidden_k_subsets(IntSet((), lo=1, hi=7), 7, k).count == 0
    odd = iset(range(1, 11, 2), lo=1, hi=15)
    assert count_forbidden_k_subsets(odd, 15, 3).count == 0
    assert count_forbidden_k_subsets(odd, 15, 4).count == 0


def test_forbidden_subsets_invalid_inputs():
    with pytest.raises(ValueError):
        count_forbidden_k_subsets(iset({1}, lo=1, hi=3), 3, 6)
    with pytest.raises(ValueError):
        count_forbidden_k_subsets(iset({4}, hi=4), 3, 3)


def test_forbidden_subsets_match_naive_loop():
    for _ in range(120):
        n = rng.randint(3, 16)
        size = rng.randint(0, min(n, 16))
        members = rng.sample(range(1, n + 1), size)
        a = IntSet(members, lo=1, hi=n)
        for k in (3, 4, 5):
            assert count_forbidden_k_subsets(a, n, k).count == naive_forbidden_count(members, n, k)


# --- the witness interval --------------------------------------------------


def test_top_third_interval_examples():
    assert top_third_interval(5).members == (4, 5)
    assert top_third_interval(2).members == (2,)
    assert top_third_interval(1).members == ()


def test_top_third_size_law():
    for n in range(1, 201):
        assert len(top_third_interval(n)) == (n + 1) // 3


def test_top_third_always_admissible():
    # two members sum below 2n+1, three sum above: the forbidden value is out
    for n in range(1, 60):
        b = top_third_interval(n)
        assert is_sum_free(b)
        assert not sigma_contains(b, 2 * n + 1)


def test_outside_top_third():
    assert outside_top_third(iset({1, 4, 5}, lo=1, hi=5), 5) == 1
    assert outside_top_third(top_third_interval(17), 17) == 0


# --- constraint profiles ----------------------------------------------------


def test_profile_validation():
    with pytest.raises(ValueError):
        ConstraintProfile(11, (2, 3), True)
    with pytest.raises(ValueError):
        ConstraintProfile(11, (), True)
    p = ConstraintProfile(11, (4, 3, 3), True)
    assert p.layers == (3, 4)


def test_profile_registry():
    assert set(BUILTIN_PROFILE_IDS) == {
        "sf-sigma-2n1",
        "sf-3a-2n1",
        "sf-34a-2n1",
        "sf-345a-2n1",
        "sf-sigma-2n",
        "any-3a-n1",
        "any-sigma-2n",
    }
    p = profile_for("sf-34a-2n1", 10)
    assert p == ConstraintProfile(21, (3, 4), True)
    assert profile_for("any-3a-n1", 10) == ConstraintProfile(11, (3,), False)
    assert profile_for("sf-sigma-2n", 10) == ConstraintProfile(20, None, True)
    with pytest.raises(KeyError):
        profile_for("nope", 4)


def test_satisfies_spot_checks():
    # hand-checked: {2} admissible for (sum-free, 5 not reachable), {1} is not
    p = profile_for("sf-sigma-2n1", 2)
    assert satisfies(IntSet((), lo=1, hi=2), p)
    assert satisfies(iset({2}, lo=1, hi=2), p)
    assert not satisfies(iset({1}, lo=1, hi=2), p)
    # the sigma profile for 2n rules out n itself (n + n = 2n)
    q = profile_for("sf-sigma-2n", 7)
    assert not satisfies(iset({7}, lo=1, hi=7), q)
    assert satisfies(iset({5, 6}, lo=1, hi=7), q)


def test_satisfies_layer_profiles_differ_from_sigma():
    # {1, 4, 6, 9, 11} in [12]: sum-free, 25 unreachable in 3 summands but
    # reachable with more (1+4+4+4+6+6, say); the 3A profile admits it.
    a = iset({1, 4, 6, 9, 11}, lo=1, hi=12)
    assert satisfies(a, profile_for("sf-3a-2n1", 12))
    assert not satisfies(a, profile_for("sf-sigma-2n1", 12))
