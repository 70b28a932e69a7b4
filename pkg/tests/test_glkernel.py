"""gl kernel: GT actions, intertwiners, scalar factors.

The orthonormal and rational GT actions are certified by full bracket
tables; the intertwiners self-audit equivariance exactly, and the scalar
factors are tested against the factorization of complete intertwiner
tables (no expected value in this file was invented: each is either a
pinned interface example, a closed-form identity, or cross-checked
against the exactly solved intertwiner)."""

import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from gtbasis.exactnum import AlgebraicValue, sqrt_of
from gtbasis.glkernel import (
    _gl_basis,
    gl_fundamental_intertwiner,
    gl_generator_matrix,
    gl_gt_lowering,
    gl_gt_raising,
    orth_lowering,
    orth_raising,
    pattern_norms_squared,
    red_me,
    red_wigner,
    red_wigner_orth,
    std_component_patterns,
    wigner,
    wigner_orth,
)
from gtbasis.patterns import GlPattern, enumerate_gl, max_gl


def P(*rows):
    return GlPattern([tuple(F(e) for e in r) for r in rows])


def _sub(a, b):
    out = dict(a)
    for k, v in b.items():
        s = out.get(k)
        s = -v if s is None else s - v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _comm(a, b):
    from gtbasis.glkernel import _sparse_commutator

    return _sparse_commutator(a, b)


# -- matrix elements -----------------------------------------------------------


def test_rational_lowering_interface_example():
    results = gl_gt_lowering(P((1, 0), (1,)), 1)
    assert results == [(P((1, 0), (0,)), F(1))]


def test_rational_raising_gl2_values():
    # raising coefficient (a - x)(x + 1 - b) at a=2, b=0, x=1
    results = gl_gt_raising(P((2, 0), (1,)), 1)
    assert results == [(P((2, 0), (2,)), F(2))]


def test_orth_gl2_values():
    # orthonormal lowering sqrt((a - x + 1)(x - b)) at a=2, b=0, x=1
    [(q, v)] = orth_lowering(P((2, 0), (1,)), 1)
    assert q == P((2, 0), (0,))
    assert v == sqrt_of(2)
    [(q, v)] = orth_raising(P((2, 0), (1,)), 1)
    assert q == P((2, 0), (2,))
    assert v == sqrt_of(2)


def test_actions_drop_invalid_shifts():
    top = P((2, 0), (2,))
    assert gl_gt_raising(top, 1) == []
    bottom = P((2, 0), (0,))
    assert gl_gt_lowering(bottom, 1) == []


def test_half_integer_rows_are_supported():
    # uniform half-integer rows evaluate like their integer shifts
    [(q, v)] = gl_gt_lowering(P((F(3, 2), F(1, 2)), (F(3, 2),)), 1)
    assert q == P((F(3, 2), F(1, 2)), (F(1, 2),))
    [(q2, v2)] = gl_gt_lowering(P((2, 1), (2,)), 1)
    assert v == v2


BRACKET_MODULES = [
    (F(2), F(0)),
    (F(2), F(1), F(0)),
    (F(3), F(1), F(0)),
    (F(1), F(1), F(0), F(0)),
]


@pytest.mark.parametrize("lam", BRACKET_MODULES, ids=str)
@pytest.mark.parametrize("rational", [True, False], ids=["rational", "orthonormal"])
def test_full_bracket_table(lam, rational):
    m = len(lam)
    gens = {(i, j): gl_generator_matrix(lam, i, j, rational)
            for i in range(1, m + 1) for j in range(1, m + 1)}
    for (i, j), (k, l) in itertools.product(gens, repeat=2):
        lhs = _comm(gens[(i, j)], gens[(k, l)])
        rhs = {}
        if j == k:
            rhs = dict(gens[(i, l)])
        if l == i:
            rhs = _sub(rhs, gens[(k, j)])
        assert _sub(lhs, rhs) == {}, f"[E{i}{j}, E{k}{l}] failed on {lam}"


def test_rational_and_orthonormal_actions_are_diagonally_similar():
    lam = (F(2), F(1), F(0))
    norms = pattern_norms_squared(lam)
    basis = enumerate_gl(lam)
    order = {p: i for i, p in enumerate(basis)}
    for k in (1, 2):
        rat = {}
        for p in basis:
            for q, v in gl_gt_lowering(p, k):
                rat[(order[q], order[p])] = v
        orth = {}
        for p in basis:
            for q, v in orth_lowering(p, k):
                orth[(order[q], order[p])] = v
        assert set(rat) == set(orth)
        for (r, c) in rat:
            # rat = N(target)^-1 orth N(source) as diagonal conjugation
            left = AlgebraicValue(rat[(r, c)]) * sqrt_of(norms[basis[r]])
            right = orth[(r, c)] * sqrt_of(norms[basis[c]])
            assert left == right


def test_pattern_norms_start_at_one_and_stay_positive():
    lam = (F(3), F(1), F(0))
    norms = pattern_norms_squared(lam)
    assert norms[max_gl(lam)] == 1
    assert all(v > 0 for v in norms.values())
    assert len(norms) == len(enumerate_gl(lam))


def test_std_component_patterns_have_unit_weights():
    comps = std_component_patterns(3)
    assert set(comps) == {-3, -2, -1}
    for i, p in comps.items():
        expected = tuple(F(1) if t == -i - 1 else F(0) for t in range(3))
        assert p.weight() == expected


# -- reduced matrix elements ----------------------------------------------------


def test_red_me_two_row_closed_form():
    for x, y, z in [(2, 0, 1), (3, 1, 2), (5, 0, 3), (F(7, 2), F(1, 2), F(3, 2))]:
        value = red_me([[x, y], [z]], -1)
        assert value * value == AlgebraicValue((F(x) - F(z) + 1) * (F(z) - F(y)))


def test_red_me_doubled_argument_anchor():
    # sl2 ladder identity: value^2 = k(2m - k + 1)
    for m in (F(1, 2), F(1), F(3, 2), F(2), F(3)):
        for k in range(1, int(2 * m) + 1):
            value = red_me([[2 * m, 0], [k]], -1)
            assert value * value == AlgebraicValue(F(k) * (2 * m - k + 1))


def test_red_me_matches_orthonormal_lowering_on_gl2():
    for a, b, x in [(3, 0, 2), (4, 1, 3), (2, 0, 1)]:
        [(_, me)] = orth_lowering(P((a, b), (x,)), 1)
        assert me == red_me([[a, b], [x]], -1)


def test_red_me_general_row_lengths_factor_orthonormal_elements():
    # on a three-row pattern the orthonormal lowering element factors as
    # red_me(upper fragment) * (lower fragment factor); verify the upper
    # factor divides the full element with an exact square ratio
    pat = P((3, 1, 0), (2, 1), (2,))
    for q, me in orth_lowering(pat, 2):
        changed = [i for i, (u, v) in enumerate(zip(pat.row(2), q.row(2))) if u != v]
        slot = changed[0] - 2  # negative index
        upper_factor = red_me([pat.row(3), pat.row(2)], slot)
        ratio = (me / upper_factor) * (me / upper_factor)
        assert ratio.is_rational()


def test_red_me_rejects_bad_shapes():
    with pytest.raises(ValueError):
        red_me([[2, 0, 0], [1]], -1)
    with pytest.raises(ValueError):
        red_me([[2, 0], [1]], -3)


# -- intertwiners ---------------------------------------------------------------


def test_intertwiner_gl2_matches_hand_table():
    t = gl_fundamental_intertwiner((F(1), F(0)), 1)
    assert t.bar == (F(2), F(0))
    # rational normalization: top column is the leading pair alone
    top = t.rational_columns[P((2, 0), (2,))]
    assert top == ((-1, P((1, 0), (1,)), F(1)),)
    mid = dict()
    for i, ket, v in t.rational_columns[P((2, 0), (1,))]:
        mid[(i, ket)] = v
    assert mid == {(-2, P((1, 0), (1,))): F(1), (-1, P((1, 0), (0,))): F(1)}
    # orthonormal normalization carries the sqrt(2) instead
    mid_orth = {(i, ket): v for i, ket, v in t.columns[P((2, 0), (1,))]}
    assert mid_orth[(-2, P((1, 0), (1,)))] == sqrt_of(F(1, 2))


def test_intertwiner_orthonormal_columns_are_equivariant():
    lam = (F(2), F(1), F(0))
    t = gl_fundamental_intertwiner(lam, 2)
    comps = std_component_patterns(3)
    comp_of = {p: i for i, p in comps.items()}

    def apply_orth(vec, k, raising):
        act = orth_raising if raising else orth_lowering
        out = {}
        for (i, p), c in vec.items():
            for q, a in act(comps[i], k):
                key = (comp_of[q], p)
                out[key] = out.get(key, AlgebraicValue()) + c * a
            for q, a in act(p, k):
                out[(i, q)] = out.get((i, q), AlgebraicValue()) + c * a
        return {k2: v for k2, v in out.items() if not v.is_zero()}

    for pb in enumerate_gl(t.bar):
        col = {(i, p): v for i, p, v in t.columns[pb]}
        for k in (1, 2):
            lhs = apply_orth(col, k, True)
            rhs = {}
            for qb, c in orth_raising(pb, k):
                for i, p, v in t.columns[qb]:
                    key = (i, p)
                    rhs[key] = rhs.get(key, AlgebraicValue()) + c * v
            rhs = {k2: v for k2, v in rhs.items() if not v.is_zero()}
            assert lhs == rhs


def test_intertwiner_on_trivial_module_is_component_inclusion():
    t = gl_fundamental_intertwiner((F(0), F(0), F(0)), 1)
    assert t.bar == (F(1), F(0), F(0))
    trivial = max_gl((F(0), F(0), F(0)))
    comps = std_component_patterns(3)
    for pb, col in t.rational_columns.items():
        assert len(col) == 1
        i, ket, v = col[0]
        assert ket == trivial and v == 1
        # the bar pattern is exactly the std component pattern
        assert comps[i] == pb


def test_intertwiner_rejects_non_dominant_targets():
    with pytest.raises(ValueError):
        gl_fundamental_intertwiner((F(1), F(1)), 2)


# -- scalar factors -------------------------------------------------------------


def test_wigner_interface_anchor():
    assert wigner([[1, 0], [1]], -2) == 1


def test_wigner_invalid_shift_is_zero():
    assert wigner([[1, 0], [2]], -1) == 0  # rows do not interlace
    assert wigner([[2, 1], [2]], -1) != 0  # valid second-slot raise
    assert red_wigner([[1, 1, 0], [2, 0]], -3, -2) == 0  # lower row invalid


def test_wigner_half_integer_shift_invariance():
    for i in (-2, -1):
        a = wigner([[F(3, 2), F(1, 2)], [F(1, 2)]], i)
        b = wigner([[2, 1], [1]], i)
        assert a == b


FACTORIZATION_MODULES = [
    ((F(2), F(1), F(0)), 1),
    ((F(2), F(1), F(0)), 2),
    ((F(2), F(1), F(0)), 3),
    ((F(1), F(1), F(0)), 1),
    ((F(2), F(0), F(0)), 1),
    ((F(3), F(1)), 1),
    ((F(3), F(1)), 2),
]


@pytest.mark.parametrize("lam,slot", FACTORIZATION_MODULES, ids=str)
def test_factors_reassemble_full_intertwiner(lam, slot):
    """Every rational intertwiner entry equals the chain product of
    red_wigner factors times the terminal wigner factor."""
    m = len(lam)
    t = gl_fundamental_intertwiner(lam, slot)
    checked = 0
    for pb, col in t.rational_columns.items():
        for i, ket, v in col:
            shifts = []
            for lvl in range(m, 0, -1):
                delta = [a - b for a, b in zip(pb.row(lvl), ket.row(lvl))]
                if sum(delta) == 0:
                    shifts.append(None)
                else:
                    assert sum(delta) == 1 and set(delta) <= {0, 1}
                    shifts.append(delta.index(1) - lvl)
            land = -i
            prod = F(1)
            for lvl in range(m, 0, -1):
                s_up = shifts[m - lvl]
                if lvl < land:
                    assert s_up is None
                    continue
                upper = ket.row(lvl)
                lower = ket.row(lvl - 1) if lvl >= 2 else ()
                if lvl == land:
                    prod *= wigner([upper, lower], s_up)
                else:
                    prod *= red_wigner([upper, lower], s_up, shifts[m - lvl + 1])
            assert prod == v, (pb, i, ket)
            checked += 1
    assert checked >= len(t.rational_columns)


def _dominant_gl3(cap):
    return [(F(a), F(b), F(c))
            for a in range(cap + 1) for b in range(a + 1) for c in range(b + 1)]


@pytest.mark.parametrize("lam", _dominant_gl3(3), ids=str)
def test_composite_lowering_factorizes(lam):
    """Every orthonormal gl3 matrix element of the composite lowering E_31
    equals red_me (rows 3, 2 of the source) times the orthonormal Wigner
    pair red_wigner * wigner (rows 2, 1 of the target), with the index
    chain (i1, i2)."""
    basis, _ = _gl_basis(lam)
    orth31 = gl_generator_matrix(lam, 3, 1, rational=False)
    checked = 0
    for (r, c), orth_v in sorted(orth31.items()):
        tgt, src = basis[r], basis[c]
        delta2 = [a - b for a, b in zip(src.row(2), tgt.row(2))]
        i1 = delta2.index(1) - 2
        i2 = -1
        prod = (red_me([src.row(3), src.row(2)], i1)
                * red_wigner_orth([tgt.row(2), tgt.row(1)], i1, i2)
                * wigner_orth([tgt.row(1), ()], i2))
        assert prod == orth_v, (lam, src, tgt)
        checked += 1
    if lam[0] > lam[2]:
        assert checked > 0


def test_orth_and_rational_wigner_pairs_are_diagonally_related():
    # on a fragment where the norm ratio is visible: the orthonormal pair
    # differs from the rational one by sqrt(norm(ket)/norm(bra))
    upper, lower = (F(2), F(0)), (F(1),)
    rw = red_wigner([upper, lower], -2, -1)
    rwo = red_wigner_orth([upper, lower], -2, -1)
    n_bar = pattern_norms_squared((F(3), F(0)))[P((3, 0), (2,))]
    n_ket = pattern_norms_squared((F(2), F(0)))[P((2, 0), (1,))]
    assert rwo == AlgebraicValue(rw) * sqrt_of(n_ket / n_bar)


def test_red_wigner_sign_rule():
    """Sign = S(p2 - p1) over left-aligned 0-based slot positions."""
    uppers = [(F(2), F(1), F(0)), (F(3), F(1), F(0)), (F(2), F(2), F(0)),
              (F(3), F(2), F(1))]
    seen = 0
    for upper in uppers:
        for lo in itertools.product(range(0, 4), repeat=2):
            lower = tuple(F(x) for x in lo)
            if not (upper[0] >= lower[0] >= upper[1] >= lower[1] >= upper[2]):
                continue
            for i1 in (-3, -2, -1):
                for i2 in (-2, -1):
                    v = red_wigner([upper, lower], i1, i2)
                    if not v:
                        continue
                    seen += 1
                    p1, p2 = 3 + i1, 2 + i2
                    assert (v > 0) == (p2 - p1 >= 0), (upper, lower, i1, i2, v)
    assert seen > 40


def test_terminal_wigner_values_are_nonnegative():
    for upper in [(F(2), F(1), F(0)), (F(3), F(1), F(0)), (F(2), F(2), F(0))]:
        for lo in itertools.product(range(0, 4), repeat=2):
            lower = tuple(F(x) for x in lo)
            if not (upper[0] >= lower[0] >= upper[1] >= lower[1] >= upper[2]):
                continue
            for i in (-3, -2, -1):
                assert wigner([upper, lower], i) >= 0


# -- property tests -------------------------------------------------------------


@st.composite
def gl2_patterns(draw):
    b = draw(st.integers(min_value=-3, max_value=3))
    a = b + draw(st.integers(min_value=0, max_value=6))
    x = draw(st.integers(min_value=b, max_value=a))
    return P((a, b), (x,))


@given(gl2_patterns())
@settings(max_examples=150, deadline=None)
def test_gl2_sl2_relation_pointwise(p):
    # [e, f]|p> = h|p> directly on a single pattern, orthonormal basis
    a, b = p.row(2)
    x = p.row(1)[0]
    ef = F(0)
    for q, v in orth_lowering(p, 1):
        for r, w in orth_raising(q, 1):
            if r == p:
                prod = v * w
                assert prod.is_rational()
                ef += prod.as_rational()
    fe = F(0)
    for q, v in orth_raising(p, 1):
        for r, w in orth_lowering(q, 1):
            if r == p:
                prod = v * w
                fe += prod.as_rational()
    assert ef - fe == 2 * x - a - b


@given(st.integers(min_value=0, max_value=5), st.integers(min_value=0, max_value=5),
       st.integers(min_value=0, max_value=5))
@settings(max_examples=60, deadline=None)
def test_red_me_closed_form_random(u, v, w):
    x, z, y = sorted((u, v, w), reverse=True)
    if not (x >= z >= y):
        return
    value = red_me([[x, y], [z]], -1)
    assert value * value == AlgebraicValue(F((x - z + 1) * (z - y)))
