"""Tests for the pattern combinatorics.

The enumeration and weight map are checked wholesale against the root-system
oracles: pattern count vs the Weyl dimension and the full weight multiset vs
Freudenthal, across every module in the acceptance grid.  That comparison is
the primary evidence that the interlacing/sigma rules and the level weight
formulas are implemented consistently.
"""

from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gtbasis.patterns import (
    BcdPattern,
    GlPattern,
    PatternOrder,
    enumerate_gl,
    enumerate_patterns,
    gl_pattern_of_block,
    max_gl,
    max_pattern,
    o4_from_pq,
    o4_pq,
)
from gtbasis.rootdata import AlgebraLabel, as_weight, freudenthal, weyl_dim

H = Fraction(1, 2)

GRID = [
    ("B", 1, (1,)),
    ("B", 1, (H,)),
    ("B", 1, (3,)),
    ("B", 2, (1, 0)),
    ("B", 2, (1, 1)),
    ("B", 2, (2, 1)),
    ("B", 2, (H * 3, H)),
    ("C", 2, (1, 0)),
    ("C", 2, (1, 1)),
    ("C", 2, (2, 1)),
    ("D", 2, (1, 0)),
    ("D", 2, (1, 1)),
    ("D", 2, (1, -1)),
    ("D", 2, (2, 1)),
    ("B", 3, (1, 0, 0)),
    ("B", 3, (1, 1, 0)),
    ("B", 3, (1, 1, 1)),
    ("C", 3, (1, 0, 0)),
    ("C", 3, (1, 1, 0)),
    ("D", 3, (1, 0, 0)),
    ("D", 3, (1, 1, 0)),
    ("D", 3, (1, 1, -1)),
]


@pytest.mark.parametrize("family,rank,hw", GRID)
def test_enumeration_matches_weyl_dim(family, rank, hw):
    label = AlgebraLabel(family, rank)
    patterns = enumerate_patterns(label, hw)
    assert len(patterns) == weyl_dim(label, hw)
    assert len(set(patterns)) == len(patterns)


@pytest.mark.parametrize("family,rank,hw", GRID)
def test_weight_multiset_matches_freudenthal(family, rank, hw):
    label = AlgebraLabel(family, rank)
    counted = Counter(p.weight() for p in enumerate_patterns(label, hw))
    assert dict(counted) == freudenthal(label, hw)


@pytest.mark.parametrize("family,rank,hw", GRID)
def test_max_pattern_is_unique_top(family, rank, hw):
    label = AlgebraLabel(family, rank)
    top = max_pattern(label, hw)
    assert top.weight() == as_weight(hw)
    patterns = enumerate_patterns(label, hw)
    with_top_weight = [p for p in patterns if p.weight() == as_weight(hw)]
    assert with_top_weight == [top]


@pytest.mark.parametrize("family,rank,hw", GRID)
def test_sub_patterns_are_valid(family, rank, hw):
    label = AlgebraLabel(family, rank)
    for p in enumerate_patterns(label, hw):
        for level in range(1, rank + 1):
            sub = p.sub_pattern(level)
            assert sub.is_valid()
            assert sub.hw == p.row(level)
            assert sub.weight() == p.weight()[:level]


def test_spinor_counts():
    assert len(enumerate_patterns(AlgebraLabel("B", 2), [H, H])) == 4
    assert len(enumerate_patterns(AlgebraLabel("B", 3), [H, H, H])) == 8
    assert len(enumerate_patterns(AlgebraLabel("D", 3), [H, H, H])) == 4
    assert len(enumerate_patterns(AlgebraLabel("D", 3), [H, H, -H])) == 4


def test_sigma_rules_enforced():
    label = AlgebraLabel("B", 2)
    base = max_pattern(label, [1, 0])
    # sigma at level 2 needs a positive last primed entry
    assert base.primed[1][-1] == 0
    with pytest.raises(ValueError):
        base.replace(2, sigma=1)
    # sigma at level 1 needs d < c
    ok = base.replace(1, sigma=1)  # d=0 < c=1
    assert ok.is_valid()
    d_eq_c = base.replace(1, primed=(1,))
    with pytest.raises(ValueError):
        d_eq_c.replace(1, sigma=1)


def test_interlacing_enforced():
    label = AlgebraLabel("C", 2)
    good = max_pattern(label, [2, 1])
    with pytest.raises(ValueError):
        good.replace(2, primed=(3, 1))
    with pytest.raises(ValueError):
        good.replace(1, unprimed=(3,))
    with pytest.raises(ValueError):
        good.replace(2, primed=(2, Fraction(1, 2)))
    label = AlgebraLabel("D", 2)
    with pytest.raises(ValueError):
        BcdPattern(label, [(2,), (1, -1)], [(), (0,)])  # mp < |m_2[1]|


def test_o4_pq_examples():
    pat = BcdPattern(AlgebraLabel("D", 2), [(1,), (2, 0)], [(), (1,)])
    assert o4_pq(pat) == (1, 2)
    pat = BcdPattern(AlgebraLabel("D", 2), [(-1,), (2, 0)], [(), (1,)])
    assert o4_pq(pat) == (2, 1)
    with pytest.raises(ValueError):
        o4_pq(max_pattern(AlgebraLabel("D", 3), [1, 0, 0]))


@pytest.mark.parametrize("hw", [(2, 0), (1, 0), (1, 1), (1, -1), (2, 1), (H * 3, H), (H * 3, -H)])
def test_o4_pq_bijective(hw):
    label = AlgebraLabel("D", 2)
    patterns = enumerate_patterns(label, hw)
    seen = set()
    for p in patterns:
        pq = o4_pq(p)
        assert o4_from_pq(hw, *pq) == p
        seen.add(pq)
    big, small = as_weight(hw)
    assert seen == {
        (Fraction(p), Fraction(q))
        for p in range(int(big + small) + 1)
        for q in range(int(big - small) + 1)
    }
    # highest weight sits at p = 0, q = r_minus
    assert o4_pq(max_pattern(label, hw)) == (0, big - small)


def test_gl_pattern_of_block():
    pat = max_pattern(AlgebraLabel("B", 2), [2, 1])
    gl = gl_pattern_of_block(pat)
    assert gl.rows == ((2, 1, 0), (2, 0), (2,))
    pat = max_pattern(AlgebraLabel("B", 2), [H * 3, H])
    gl = gl_pattern_of_block(pat)
    assert gl.rows == ((Fraction(3, 2), H, 0), (Fraction(3, 2), H), (Fraction(3, 2),))
    with pytest.raises(ValueError):
        gl_pattern_of_block(max_pattern(AlgebraLabel("D", 2), [1, 0]))
    with pytest.raises(ValueError):
        gl_pattern_of_block(max_pattern(AlgebraLabel("B", 3), [1, 0, 0]))


def test_json_roundtrip():
    for family, rank, hw in GRID:
        label = AlgebraLabel(family, rank)
        for p in enumerate_patterns(label, hw)[:5]:
            blob = p.to_json_dict()
            assert BcdPattern.from_json_dict(blob) == p
    blob = max_pattern(AlgebraLabel("B", 2), [H * 3, H]).to_json_dict()
    assert blob["hw"] == ["3/2", "1/2"]
    assert blob["rows"][0] == ["3/2", "1/2"]
    assert len(blob["sigmas"]) == 2


def test_pattern_order_is_stable():
    label = AlgebraLabel("B", 2)
    patterns = enumerate_patterns(label, [1, 1])
    keys = [PatternOrder.key(p) for p in patterns]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)
    again = enumerate_patterns(label, [1, 1])
    assert patterns == again


def test_gl_patterns():
    pats = enumerate_gl([1, 0, 0])
    assert len(pats) == 3
    assert Counter(p.weight() for p in enumerate_gl([2, 1, 0])) == {
        (2, 1, 0): 1, (2, 0, 1): 1, (1, 2, 0): 1, (0, 2, 1): 1, (1, 0, 2): 1,
        (0, 1, 2): 1, (1, 1, 1): 2,
    }
    top = max_gl([2, 1, 0])
    assert top.rows == ((2, 1, 0), (2, 1), (2,))
    assert top.weight() == (2, 1, 0)
    with pytest.raises(ValueError):
        GlPattern([(1, 0), (2,)])
    with pytest.raises(ValueError):
        enumerate_gl([0, 1])


@given(st.sampled_from(["B", "C", "D"]), st.integers(0, 2), st.integers(0, 2),
       st.booleans(), st.booleans())
@settings(max_examples=40, deadline=None)
def test_random_rank2_dimensions(family, a, b, half, flip):
    label = AlgebraLabel(family, 2)
    lam = [Fraction(max(a, b)), Fraction(min(a, b))]
    if half and family != "C":
        lam = [x + H for x in lam]
    if flip and family == "D":
        lam[-1] = -lam[-1]
    patterns = enumerate_patterns(label, lam)
    assert len(patterns) == weyl_dim(label, lam)
    assert dict(Counter(p.weight() for p in patterns)) == freudenthal(label, lam)


@given(st.sampled_from(["B", "C", "D"]), st.permutations([2, 1, 0]),
       st.booleans(), st.booleans())
@settings(max_examples=20, deadline=None)
def test_random_rank3_dimensions(family, vals, half, flip):
    label = AlgebraLabel(family, 3)
    lam = [Fraction(v) for v in sorted(vals, reverse=True)]
    if half and family != "C":
        lam = [x + H for x in lam]
    if flip and family == "D":
        lam[-1] = -lam[-1]
    patterns = enumerate_patterns(label, lam)
    assert len(patterns) == weyl_dim(label, lam)
    assert dict(Counter(p.weight() for p in patterns)) == freudenthal(label, lam)
