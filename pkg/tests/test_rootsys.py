from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nilgen.rootsys import (
    RootSystemError,
    RootSystemType,
    build,
    build_from_string,
    dominant_long_root,
    dominant_short_root,
    folding,
    height,
    is_orthogonal_short,
    pairing,
    pairings,
    reflect,
)

ALL_TYPES = (
    [f"A{n}" for n in range(1, 9)]
    + [f"B{n}" for n in range(2, 9)]
    + [f"C{n}" for n in range(2, 9)]
    + [f"D{n}" for n in range(3, 9)]
    + ["E6", "E7", "E8", "F4", "G2"]
)


def test_rank_constraints():
    for bad in ("A0", "B1", "C1", "D2", "E5", "E9", "F3", "G3", "H3"):
        with pytest.raises(RootSystemError):
            build_from_string(bad)


@pytest.mark.parametrize("name", ALL_TYPES)
def test_positive_root_count_matches_dimension(name):
    d = build_from_string(name)
    assert len(d.positive_roots) == (d.rtype.dimension - d.rank) // 2


@pytest.mark.parametrize("name", ALL_TYPES)
def test_cartan_shape(name):
    d = build_from_string(name)
    for i in range(d.rank):
        assert d.cartan[i][i] == 2
        for j in range(d.rank):
            if i != j:
                assert d.cartan[i][j] <= 0
                assert (d.cartan[i][j] == 0) == (d.cartan[j][i] == 0)


@pytest.mark.parametrize("name", ALL_TYPES)
def test_roots_nonnegative_and_ordered(name):
    d = build_from_string(name)
    assert all(min(r) >= 0 for r in d.positive_roots)
    keys = [(height(r), r) for r in d.positive_roots]
    assert keys == sorted(keys)


def test_small_cases():
    a2 = build_from_string("A2")
    assert len(a2.positive_roots) == 3 and set(a2.lengths) == {"short"}
    g2 = build_from_string("G2")
    assert sorted(g2.lengths) == ["long"] * 3 + ["short"] * 3
    assert len(build_from_string("E8").positive_roots) == 120


def test_simply_laced_all_short():
    for name in ("A5", "D6", "E7"):
        d = build_from_string(name)
        assert set(d.lengths) == {"short"}
        assert dominant_short_root(d) == dominant_long_root(d)


def test_pairing_examples():
    c4 = build_from_string("C4")
    for i in c4.simple_roots:
        assert pairing(c4.simple(i), i, c4) == 2
    phi = dominant_short_root(c4)
    assert phi == (1, 2, 2, 1)
    assert pairing(phi, 4, c4) == 0
    for name in ("B5", "F4", "E8"):
        d = build_from_string(name)
        assert all(p >= 0 for p in pairings(dominant_long_root(d), d))


def test_reflect_examples():
    a2 = build_from_string("A2")
    assert reflect((1, 0), 1, a2) == (-1, 0)
    assert reflect((1, 0), 2, a2) == (1, 1)


def test_dominant_heights():
    assert height(dominant_short_root(build_from_string("F4"))) == 8
    for n in range(4, 9):
        d = build_from_string(f"D{n}")
        assert height(dominant_short_root(d)) == 2 * n - 3
    a6 = build_from_string("A6")
    assert dominant_short_root(a6) == (1,) * 6


def test_orthogonal_short_examples():
    a5 = build_from_string("A5")
    assert is_orthogonal_short([1, 3, 5], a5)
    assert not is_orthogonal_short([1, 2], a5)
    assert not is_orthogonal_short([3], build_from_string("C3"))
    assert is_orthogonal_short([3], build_from_string("B3"))


@st.composite
def root_and_index(draw):
    name = draw(st.sampled_from(ALL_TYPES))
    d = build_from_string(name)
    root = draw(st.sampled_from(d.positive_roots))
    i = draw(st.integers(1, d.rank))
    return d, root, i


@given(root_and_index())
def test_reflection_is_involution_on_roots(data):
    d, root, i = data
    image = reflect(root, i, d)
    assert reflect(image, i, d) == root
    assert d.is_root(image)
    if root != d.simple(i):
        assert min(image) >= 0
    assert d.is_short_root(image) == d.is_short_root(root)


def test_foldings():
    a3 = folding(build_from_string("A3"))
    assert a3.target == RootSystemType("C", 2) and a3.perm[1] == 3 and a3.perm[3] == 1
    e6 = folding(build_from_string("E6"))
    assert e6.target == RootSystemType("F", 4)
    assert (e6.perm[1], e6.perm[3], e6.perm[2], e6.perm[4]) == (6, 5, 2, 4)
    d4 = folding(build_from_string("D4"), 3)
    assert d4.target == RootSystemType("G", 2)
    assert sorted(d4.moved) == [1, 3, 4]
    with pytest.raises(RootSystemError):
        folding(build_from_string("E7"))


@pytest.mark.parametrize("name,order", [("A3", 2), ("A5", 2), ("A7", 2), ("D4", 2), ("D5", 2), ("D8", 2), ("E6", 2), ("D4", 3)])
def test_folding_preserves_cartan(name, order):
    d = build_from_string(name)
    fold = folding(d, order)
    eps = fold.perm
    for i in d.simple_roots:
        for j in d.simple_roots:
            assert d.cartan[eps[i] - 1][eps[j] - 1] == d.cartan[i - 1][j - 1]
    for i in fold.moved:
        assert d.cartan[i - 1][eps[i] - 1] == 0
