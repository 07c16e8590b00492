import itertools
from collections import Counter
from math import factorial

import pytest
from hypothesis import given, strategies as st

from divinv.partitions import (CyclePattern, MultiPartition, Partition, YoungData,
                               canonical_pattern, centraliser_orders, cycle_type,
                               enumerate_partitions, enumerate_theta_alpha, is_s_reduced,
                               primitive_decompose, s_alpha_cycle_type, s_equivalence_classes,
                               s_reduce, s_reduce_multi)
from divinv.tensorinv import compose, inverse


def P(*parts):
    return Partition(tuple(parts))


def compositions(r):
    if r == 0:
        yield ()
        return
    for first in range(1, r + 1):
        for rest in compositions(r - first):
            yield (first,) + rest


def test_enumerate_examples():
    assert enumerate_partitions(3) == [P(3), P(2, 1), P(1, 1, 1)]
    assert enumerate_partitions(0) == [P()]
    assert enumerate_partitions(3, max_ones=2) == [P(3), P(2, 1)]
    assert enumerate_partitions(5, max_length=2) == [P(5), P(4, 1), P(3, 2)]


def test_partition_counts():
    assert [len(enumerate_partitions(r)) for r in range(11)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


def test_partition_text():
    lam = Partition.parse("3+2+1")
    assert lam == P(3, 2, 1) and str(lam) == "3+2+1"
    assert Partition.parse("1+3") == P(3, 1)
    assert lam.m(1) == 1 and lam.size == 6 and len(lam) == 3


def test_centraliser_examples():
    assert centraliser_orders(P(2, 1)) == (2, 1)
    assert centraliser_orders(P(2, 2)) == (8, 2)
    for r in range(1, 6):
        assert centraliser_orders(P(*[1] * r)) == (factorial(r), factorial(r))


def test_centraliser_brute_force():
    for r in range(1, 7):
        perms = list(itertools.permutations(range(r)))
        for lam in enumerate_partitions(r):
            rep = next(g for g in perms if cycle_type(g) == lam)
            cent = sum(1 for g in perms if compose(g, rep) == compose(rep, g))
            assert centraliser_orders(lam)[0] == cent


def test_s_reduce_examples():
    assert s_reduce(P(1, 1, 1), 2, 1) == P(2, 1)
    assert s_reduce(P(2, 1), 2, 1) == P(2, 1)
    assert s_reduce(P(1, 1, 1, 1), 2, 2) == P(2, 2)


@given(st.integers(0, 12), st.sampled_from([2, 3]), st.integers(1, 2))
def test_s_reduce_properties(r, p, s):
    reduced = set()
    for lam in enumerate_partitions(r):
        mu = s_reduce(lam, p, s)
        assert mu.size == lam.size and is_s_reduced(mu, p, s)
        assert s_reduce(mu, p, s) == mu
        reduced.add(mu)
    assert reduced == set(enumerate_partitions(r, max_ones=p ** s))
    assert len(s_equivalence_classes(r, p, s)) == len(reduced)


def test_s_classes_examples():
    assert s_equivalence_classes(3, 2, 1) == [[P(3)], [P(2, 1), P(1, 1, 1)]]
    assert s_equivalence_classes(2, 2, 1) == [[P(2), P(1, 1)]]
    for p in (2, 3, 5):
        assert s_equivalence_classes(1, p, 1) == [[P(1)]]


def test_patterns():
    assert canonical_pattern([2, 1, 1]) == CyclePattern((1, 1, 2))
    assert canonical_pattern([1]).word == (1,)
    assert canonical_pattern([1, 2, 1, 2]).word == (1, 2, 1, 2)
    assert primitive_decompose(CyclePattern((1, 2, 1, 2))) == (CyclePattern((1, 2)), 2)
    assert primitive_decompose(CyclePattern((1, 1, 2))) == (CyclePattern((1, 1, 2)), 1)
    assert primitive_decompose(CyclePattern((1, 1, 1))) == (CyclePattern((1,)), 3)
    assert str(CyclePattern.parse("[2,1,1]")) == "[1,1,2]"
    with pytest.raises(ValueError):
        canonical_pattern([])


@given(st.lists(st.integers(1, 3), min_size=1, max_size=8), st.integers(0, 7))
def test_pattern_rotation_invariant(word, k):
    k %= len(word)
    assert canonical_pattern(word) == canonical_pattern(word[k:] + word[:k])
    root, l = primitive_decompose(canonical_pattern(word))
    assert root.is_primitive and root.power(l) == canonical_pattern(word)


def test_s_alpha_cycle_type_examples():
    b112 = CyclePattern((1, 1, 2))
    assert s_alpha_cycle_type((1, 2, 0), YoungData((2, 1))).as_dict() == {b112: P(1)}
    assert s_alpha_cycle_type(tuple(range(4)), YoungData((4,))).as_dict() == {CyclePattern((1,)): P(1, 1, 1, 1)}
    assert s_alpha_cycle_type((1, 0), YoungData((1, 1))).as_dict() == {CyclePattern((1, 2)): P(1)}
    with pytest.raises(ValueError):
        s_alpha_cycle_type((0, 0), YoungData((2,)))


def _s_alpha_classes(alpha):
    y = YoungData(alpha)
    group = list(y.young_subgroup())
    seen, classes = set(), []
    for g in itertools.permutations(range(y.r)):
        if g in seen:
            continue
        orbit = {compose(h, compose(g, inverse(h))) for h in group}
        seen |= orbit
        classes.append(orbit)
    return y, group, classes


def test_s_alpha_conjugacy_brute_force():
    for r in range(1, 6):
        for alpha in compositions(r):
            y, group, classes = _s_alpha_classes(alpha)
            types = [{s_alpha_cycle_type(g, y) for g in orbit} for orbit in classes]
            assert all(len(t) == 1 for t in types)
            labels = [t.pop() for t in types]
            assert len(set(labels)) == len(classes)
            assert sorted(map(str, labels)) == sorted(map(str, enumerate_theta_alpha(y)))
            for orbit, blam in zip(classes, labels):
                assert blam.content(len(alpha)) == alpha
                assert blam.z == len(group) // len(orbit)


def test_s_alpha_r6_counts():
    # class count only; Burnside: average number of fixed points of conjugation
    for alpha in [(3, 3), (2, 2, 2), (4, 2), (6,)]:
        y = YoungData(alpha)
        group = list(y.young_subgroup())
        fixed = sum(sum(1 for g in itertools.permutations(range(6))
                        if compose(h, g) == compose(g, h)) for h in group)
        assert fixed % len(group) == 0
        assert len(enumerate_theta_alpha(y)) == fixed // len(group)


def test_theta_examples():
    one = enumerate_theta_alpha(YoungData((1,)))
    assert [b.as_dict() for b in one] == [{CyclePattern((1,)): P(1)}]
    two = {str(b) for b in enumerate_theta_alpha(YoungData((2,)))}
    assert two == {"{[1]: 2}", "{[1]: 1+1}"}
    assert len(enumerate_theta_alpha(YoungData((1, 1)))) == 2


def test_s_reduce_multi_examples():
    b1, b2, b12 = CyclePattern((1,)), CyclePattern((2,)), CyclePattern((1, 2))
    x = MultiPartition.from_dict({b1: P(1, 1)})
    assert s_reduce_multi(x, 2, 1).as_dict() == {b1: P(2)}
    y = MultiPartition.from_dict({b12: P(1, 1)})
    assert s_reduce_multi(y, 2, 1) == y
    z = MultiPartition.from_dict({b1: P(1, 1), b2: P(1)})
    assert s_reduce_multi(z, 2, 1).as_dict() == {b1: P(2), b2: P(1)}
    assert s_reduce_multi(z, 2, 1).content(2) == z.content(2)


def test_multipartition_text():
    b = MultiPartition.from_dict({CyclePattern((1, 1, 2)): P(2, 1), CyclePattern((1,)): P(1)})
    assert str(b) == "{[1,1,2]: 2+1, [1]: 1}"
    assert b.content(2) == (7, 3)
    with pytest.raises(ValueError):
        MultiPartition.from_dict({CyclePattern((1, 1)): P(1)})


def test_young_data():
    y = YoungData((2, 1, 3))
    assert [list(b) for b in y.blocks] == [[0, 1], [2], [3, 4, 5]]
    assert y.zeta == (1, 1, 2, 3, 3, 3)
    assert len(list(y.young_subgroup())) == 2 * 1 * 6
    assert Counter(y.in_young_subgroup(g) for g in itertools.permutations(range(6)))[True] == 12
