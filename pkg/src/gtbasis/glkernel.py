"""gl building blocks: GT actions, intertwiners, and reduced elements.

Three layers, each checkable against the one below:

1. The classical GT matrix-element formulas for gl_m in two normalizations:
   the orthonormal basis (square-root coefficients) and the rational basis
   in which every raising coefficient is 1 and every lowering coefficient
   is the square of the orthonormal one.  The rational basis makes every
   linear-algebra computation exact over Fraction.

2. Exact fundamental intertwiners Phi: V^{lam+delta} -> V^std (x) V^{lam},
   built by solving the equivariance equations over Fraction in the
   rational basis, converted to the orthonormal basis, and normalized so
   the leading coefficient (top tensor top) is 1.  The builder verifies
   full equivariance before returning, so its tables are ground truth.

3. Closed-form scalar factors: `red_me` (the two-row reduced matrix
   element) evaluates a rational closed form usable for half-integer rows,
   while `wigner` / `red_wigner` (the terminal and propagation factors of
   the factorized fundamental Wigner coefficients) are looked up in the
   layer-2 tables, after a uniform shift making the rows integral.

Entry slots are addressed by negative indices: a length-L row has slots
-L..-1, with -L the most dominant (leftmost) entry.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exactnum import AlgebraicValue, sqrt_of
from .patterns import GlPattern, enumerate_gl, max_gl

Row = tuple[Fraction, ...]


def _row(entries) -> Row:
    return tuple(Fraction(e) for e in entries)


def _lvars(row: Sequence[Fraction]) -> list[Fraction]:
    """Shifted entries l_i = m_i - i (1-indexed), the natural variables of
    every GT formula."""
    return [Fraction(e) - (i + 1) for i, e in enumerate(row)]


def slot_position(row_len: int, slot: int) -> int:
    """Negative slot index -> 0-based position; raises if out of range."""
    if not -row_len <= slot <= -1:
        raise ValueError(f"slot {slot} out of range for row of length {row_len}")
    return row_len + slot


# -- layer 1: GT matrix elements ----------------------------------------------


def _me_squared(pattern: GlPattern, level: int, pos: int, direction: int) -> Fraction:
    """Square of the orthonormal matrix element for shifting entry `pos` of
    the length-`level` row by `direction` (+1 raising via E_{k,k+1},
    -1 lowering via E_{k+1,k}).  Zero if the shifted pattern violates
    interlacing."""
    k = level
    mid = pattern.row(k)
    upper = pattern.row(k + 1)
    lower = pattern.row(k - 1) if k >= 2 else ()
    shifted = list(mid)
    shifted[pos] += direction
    if not pattern.replace_row(k, shifted).is_valid():
        return Fraction(0)
    lm, lu, ll = _lvars(mid), _lvars(upper), _lvars(lower)
    # raising shifts the lower product by -1, lowering the upper one by +1
    up_shift = Fraction(0) if direction > 0 else Fraction(1)
    low_shift = Fraction(-1) if direction > 0 else Fraction(0)
    num = Fraction(-1)
    for li in lu:
        num *= li - lm[pos] + up_shift
    for li in ll:
        num *= li - lm[pos] + low_shift
    den = Fraction(1)
    for i, li in enumerate(lm):
        if i == pos:
            continue
        den *= (li - lm[pos]) * (li - lm[pos] + up_shift + low_shift)
    value = num / den
    assert value >= 0, (pattern, level, pos, direction, value)
    return value


def orth_raising(pattern: GlPattern, k: int) -> list[tuple[GlPattern, AlgebraicValue]]:
    """Action of E_{k,k+1} in the orthonormal basis."""
    out = []
    for pos in range(k):
        sq = _me_squared(pattern, k, pos, +1)
        if sq:
            shifted = list(pattern.row(k))
            shifted[pos] += 1
            out.append((pattern.replace_row(k, shifted), sqrt_of(sq)))
    return out


def orth_lowering(pattern: GlPattern, k: int) -> list[tuple[GlPattern, AlgebraicValue]]:
    """Action of E_{k+1,k} in the orthonormal basis."""
    out = []
    for pos in range(k):
        sq = _me_squared(pattern, k, pos, -1)
        if sq:
            shifted = list(pattern.row(k))
            shifted[pos] -= 1
            out.append((pattern.replace_row(k, shifted), sqrt_of(sq)))
    return out


def _rational_me(pattern: GlPattern, level: int, pos: int, direction: int) -> Fraction:
    """Matrix element in the rational basis: the raising coefficient is
    -prod(l_upper - l_j) / prod_{i!=j}(l_i - l_j) and the lowering one is
    prod(l_lower - l_j) / prod_{i!=j}(l_i - l_j); their product across an
    edge equals the orthonormal coefficient squared, so this is the same
    representation rescaled by a diagonal."""
    k = level
    mid = pattern.row(k)
    shifted = list(mid)
    shifted[pos] += direction
    if not pattern.replace_row(k, shifted).is_valid():
        return Fraction(0)
    lm = _lvars(mid)
    outer = _lvars(pattern.row(k + 1)) if direction > 0 else (
        _lvars(pattern.row(k - 1)) if k >= 2 else [])
    num = Fraction(-1) if direction > 0 else Fraction(1)
    for li in outer:
        num *= li - lm[pos]
    den = Fraction(1)
    for i, li in enumerate(lm):
        if i != pos:
            den *= li - lm[pos]
    value = num / den
    assert value > 0, (pattern, level, pos, direction, value)
    return value


def gl_gt_raising(pattern: GlPattern, k: int) -> list[tuple[GlPattern, Fraction]]:
    """Action of E_{k,k+1} in the rational basis."""
    out = []
    for pos in range(k):
        coeff = _rational_me(pattern, k, pos, +1)
        if coeff:
            shifted = list(pattern.row(k))
            shifted[pos] += 1
            out.append((pattern.replace_row(k, shifted), coeff))
    return out


def gl_gt_lowering(pattern: GlPattern, k: int) -> list[tuple[GlPattern, Fraction]]:
    """Action of E_{k+1,k} in the rational basis.  Every level-1 lowering
    coefficient is 1; in particular [[1, 0], [1]] -> [[1, 0], [0]] has
    coefficient 1."""
    out = []
    for pos in range(k):
        coeff = _rational_me(pattern, k, pos, -1)
        if coeff:
            shifted = list(pattern.row(k))
            shifted[pos] -= 1
            out.append((pattern.replace_row(k, shifted), coeff))
    return out


def _sparse_mul(a: dict, b: dict) -> dict:
    by_row: dict = {}
    for (i, j), v in b.items():
        by_row.setdefault(i, []).append((j, v))
    out: dict = {}
    for (i, k), u in a.items():
        for j, v in by_row.get(k, ()):
            s = out.get((i, j))
            s = u * v if s is None else s + u * v
            if s:
                out[(i, j)] = s
            else:
                out.pop((i, j), None)
    return {k: v for k, v in out.items() if v}


def _sparse_commutator(a: dict, b: dict) -> dict:
    out = dict(_sparse_mul(a, b))
    for k, v in _sparse_mul(b, a).items():
        s = out.get(k)
        s = -v if s is None else s - v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _gl_basis(lam: Row) -> tuple[list[GlPattern], dict]:
    basis = enumerate_gl(lam)
    return basis, {p: i for i, p in enumerate(basis)}


def gl_generator_matrix(lam: Sequence, i: int, j: int, rational: bool = True) -> dict:
    """Sparse matrix (dict (row, col) -> value) of E_{ij} on the module
    with highest weight lam, over the canonical pattern order.  Non-adjacent
    generators are built by commutators of adjacent ones."""
    lam = _row(lam)
    m = len(lam)
    if not (1 <= i <= m and 1 <= j <= m):
        raise ValueError(f"generator E_{i}{j} outside gl_{m}")
    basis, index = _gl_basis(lam)
    if i == j:
        return {
            (r, r): v for r, p in enumerate(basis)
            if (v := Fraction(p.weight()[i - 1]) if rational else AlgebraicValue(p.weight()[i - 1]))
        }
    if abs(i - j) == 1:
        k = min(i, j)
        action = (gl_gt_raising if i < j else gl_gt_lowering) if rational else (
            orth_raising if i < j else orth_lowering)
        out = {}
        for c, p in enumerate(basis):
            for q, val in action(p, k):
                out[(index[q], c)] = val
        return out
    step = 1 if j > i else -1
    a = gl_generator_matrix(lam, i, i + step, rational)
    b = gl_generator_matrix(lam, i + step, j, rational)
    return _sparse_commutator(a, b)


# -- layer 2: exact fundamental intertwiners ----------------------------------


@lru_cache(maxsize=None)
def std_component_patterns(m: int) -> dict[int, GlPattern]:
    """Patterns of the defining gl_m module keyed by component index
    i in -m..-1; component i has weight e_{-i} (its rows are zero strictly
    below level -i)."""
    out = {}
    for i in range(-m, 0):
        rows = []
        for length in range(m, 0, -1):
            if length >= -i:
                rows.append((Fraction(1),) + (Fraction(0),) * (length - 1))
            else:
                rows.append((Fraction(0),) * length)
        out[i] = GlPattern(rows)
    return out


@lru_cache(maxsize=None)
def pattern_norms_squared(lam: Row) -> dict[GlPattern, Fraction]:
    """Squared norms N(P)^2 of the rational-basis vectors relative to the
    orthonormal ones (N(max) = 1): along a lowering edge Q -> P,
    N(P)^2 = N(Q)^2 * raise(P -> Q) / lower(Q -> P)."""
    basis, _ = _gl_basis(lam)
    top = max_gl(lam)
    norms = {top: Fraction(1)}
    frontier = [top]
    while frontier:
        nxt = []
        for q in frontier:
            for k in range(1, len(lam)):
                for pos in range(k):
                    down = _rational_me(q, k, pos, -1)
                    if not down:
                        continue
                    shifted = list(q.row(k))
                    shifted[pos] -= 1
                    p = q.replace_row(k, shifted)
                    up = _rational_me(p, k, pos, +1)
                    val = norms[q] * up / down
                    if p in norms:
                        assert norms[p] == val, (lam, p)
                    else:
                        norms[p] = val
                        nxt.append(p)
        frontier = nxt
    assert len(norms) == len(basis), (lam, len(norms), len(basis))
    return norms


def _solve_exact(eq_rows: list[list[Fraction]], rhs_rows: list[list[Fraction]]):
    """Solve A X = B exactly over Fraction; A may have extra consistent
    rows.  Raises if the solution is not unique."""
    n_unknowns = len(eq_rows[0])
    aug = [list(a) + list(b) for a, b in zip(eq_rows, rhs_rows)]
    pivots = []
    row_at = 0
    for col in range(n_unknowns):
        pivot = next((r for r in range(row_at, len(aug)) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("underdetermined system")
        aug[row_at], aug[pivot] = aug[pivot], aug[row_at]
        pv = aug[row_at][col]
        aug[row_at] = [x / pv for x in aug[row_at]]
        for r in range(len(aug)):
            if r != row_at and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[row_at])]
        pivots.append(col)
        row_at += 1
    for r in range(row_at, len(aug)):
        if any(aug[r]):
            raise ValueError("inconsistent system")
    width = len(aug[0]) - n_unknowns
    x = [[Fraction(0)] * width for _ in range(n_unknowns)]
    for r, col in enumerate(pivots):
        x[col] = aug[r][n_unknowns:]
    return x


def _null_space_line(eq_rows: list[list[Fraction]]) -> list[Fraction]:
    """The one-dimensional null space of the given rational matrix,
    normalized so its first nonzero coordinate is 1."""
    n = len(eq_rows[0])
    aug = [list(r) for r in eq_rows]
    pivots = {}
    row_at = 0
    for col in range(n):
        pivot = next((r for r in range(row_at, len(aug)) if aug[r][col] != 0), None)
        if pivot is None:
            continue
        aug[row_at], aug[pivot] = aug[pivot], aug[row_at]
        pv = aug[row_at][col]
        aug[row_at] = [x / pv for x in aug[row_at]]
        for r in range(len(aug)):
            if r != row_at and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[row_at])]
        pivots[col] = row_at
        row_at += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        raise ValueError(f"null space has dimension {len(free)}, expected 1")
    f = free[0]
    vec = [Fraction(0)] * n
    vec[f] = Fraction(1)
    for col, r in pivots.items():
        vec[col] = -aug[r][f]
    lead = next(v for v in vec if v)
    return [v / lead for v in vec]


class GlIntertwiner:
    """Exact intertwiner Phi: V^{bar} -> V^std (x) V^{lam} for gl_m, with
    bar = lam + e_slot, normalized so the leading coefficient (component
    -slot tensor max pattern, at the max bar pattern) equals 1.

    `columns` holds the coefficients over orthonormal bases on both sides
    (AlgebraicValue); `rational_columns` holds them over the rational
    bases (Fraction).  Each maps p_bar -> tuple of (component, ket, value)."""

    def __init__(self, lam: Row, slot: int, bar: Row, columns, rational_columns):
        self.lam = lam
        self.slot = slot
        self.bar = bar
        self.columns = columns
        self.rational_columns = rational_columns

    def coefficient(self, p_bar: GlPattern, component: int, ket: GlPattern) -> AlgebraicValue:
        for i, p, v in self.columns.get(p_bar, ()):
            if i == component and p == ket:
                return v
        return AlgebraicValue()

    def rational_coefficient(self, p_bar: GlPattern, component: int, ket: GlPattern) -> Fraction:
        for i, p, v in self.rational_columns.get(p_bar, ()):
            if i == component and p == ket:
                return v
        return Fraction(0)


def _pair_weight(comp_pattern: GlPattern, p: GlPattern) -> Row:
    return tuple(a + b for a, b in zip(comp_pattern.weight(), p.weight()))


@lru_cache(maxsize=None)
def gl_fundamental_intertwiner(lam_in: Row, slot: int) -> GlIntertwiner:
    """Build the intertwiner exactly; see class docstring.  lam must be
    integral here; callers with half-integer rows shift first."""
    lam = _row(lam_in)
    m = len(lam)
    if not 1 <= slot <= m:
        raise ValueError(f"slot {slot} outside 1..{m}")
    pos = slot - 1
    bar = lam[:pos] + (lam[pos] + 1,) + lam[pos + 1:]
    if any(bar[i] < bar[i + 1] for i in range(m - 1)):
        raise ValueError(f"{lam} + e_{slot} is not dominant")
    if any(e.denominator != 1 for e in lam):
        raise ValueError("intertwiner construction needs integral rows")

    basis, _ = _gl_basis(lam)
    bar_basis, _ = _gl_basis(bar)
    comps = std_component_patterns(m)
    comp_of = {pattern: i for i, pattern in comps.items()}

    def apply_gen(vec: dict, k: int, raising: bool) -> dict:
        """Coproduct action of e_k / f_k on a tensor vector
        {(i, P): Fraction} in the rational basis."""
        act = gl_gt_raising if raising else gl_gt_lowering
        out: dict = {}

        def add(key, val):
            s = out.get(key, Fraction(0)) + val
            if s:
                out[key] = s
            else:
                out.pop(key, None)

        for (i, p), c in vec.items():
            for q, a in act(comps[i], k):
                add((comp_of[q], p), c * a)
            for q, a in act(p, k):
                add((i, q), c * a)
        return out

    # group bar patterns by weight, highest first
    heights = {}
    for pb in bar_basis:
        w = pb.weight()
        heights.setdefault(w, []).append(pb)
    order = sorted(heights, key=lambda w: sum(x * (m - i) for i, x in enumerate(w)),
                   reverse=True)

    pair_index: dict[Row, list] = {}
    for i, cp in comps.items():
        for p in basis:
            pair_index.setdefault(_pair_weight(cp, p), []).append((i, p))

    columns: dict[GlPattern, dict] = {}

    top_weight = order[0]
    (top_bar,) = heights[top_weight]
    top_pairs = pair_index[top_weight]
    # highest-weight column: annihilated by every raising
    eq_rows = []
    for k in range(1, m):
        images = [apply_gen({pair: Fraction(1)}, k, True) for pair in top_pairs]
        targets = sorted({key for img in images for key in img},
                         key=lambda t: (t[0], t[1].sort_key()))
        for t in targets:
            eq_rows.append([img.get(t, Fraction(0)) for img in images])
    if not eq_rows:
        eq_rows = [[Fraction(0)] * len(top_pairs)]
    line = _null_space_line(eq_rows)
    columns[top_bar] = {pair: v for pair, v in zip(top_pairs, line) if v}

    for w in order[1:]:
        unknown_bars = heights[w]
        pairs_here = pair_index.get(w, [])
        assert pairs_here, (lam, slot, w)
        eqs = []
        rhs = []
        for k in range(1, m):
            alpha = tuple(Fraction(1 if t == k - 1 else (-1 if t == k else 0))
                          for t in range(m))
            upper_w = tuple(a + b for a, b in zip(w, alpha))
            for qb in heights.get(upper_w, ()):
                if qb not in columns:
                    continue
                img = {}
                for p, c in gl_gt_lowering(qb, k):
                    img[p] = img.get(p, Fraction(0)) + c
                row = [img.get(pb, Fraction(0)) for pb in unknown_bars]
                target = apply_gen(columns[qb], k, False)
                rhs.append([target.get(pair, Fraction(0)) for pair in pairs_here])
                eqs.append(row)
        x = _solve_exact(eqs, rhs)
        for r, pb in enumerate(unknown_bars):
            columns[pb] = {pair: v for pair, v in zip(pairs_here, x[r]) if v}

    # exact equivariance audit in the rational basis
    for k in range(1, m):
        for qb in bar_basis:
            lhs = apply_gen(columns[qb], k, True)
            rhs_vec: dict = {}
            for p, c in gl_gt_raising(qb, k):
                for pair, v in columns[p].items():
                    rhs_vec[pair] = rhs_vec.get(pair, Fraction(0)) + c * v
            rhs_vec = {pair: v for pair, v in rhs_vec.items() if v}
            assert lhs == rhs_vec, (lam, slot, k, qb)

    # normalize the leading rational entry to 1, then also convert to the
    # orthonormal basis (renormalizing its own leading entry to 1)
    n_lam = pattern_norms_squared(lam)
    n_bar = pattern_norms_squared(bar)
    n_std = pattern_norms_squared((Fraction(1),) + (Fraction(0),) * (m - 1))
    comp_norm = {i: n_std[cp] for i, cp in comps.items()}

    top_lam = max_gl(lam)
    top_bar_pattern = max_gl(bar)
    lead = columns[top_bar_pattern].get((-slot, top_lam), Fraction(0))
    assert lead != 0, (lam, slot)
    lead_value = AlgebraicValue(lead) * sqrt_of(
        comp_norm[-slot] * n_lam[top_lam] / n_bar[top_bar_pattern])

    out_columns = {}
    rat_columns = {}
    for pb, col in columns.items():
        entries = []
        rat_entries = []
        for (i, p), c in col.items():
            rat_entries.append((i, p, c / lead))
            scale = sqrt_of(comp_norm[i] * n_lam[p] / n_bar[pb])
            value = (AlgebraicValue(c) * scale) / lead_value
            if not value.is_zero():
                entries.append((i, p, value))
        entries.sort(key=lambda t: (t[0], t[1].sort_key()))
        rat_entries.sort(key=lambda t: (t[0], t[1].sort_key()))
        out_columns[pb] = tuple(entries)
        rat_columns[pb] = tuple(rat_entries)
    return GlIntertwiner(lam, slot, bar, out_columns, rat_columns)


# -- layer 3: scalar factors ---------------------------------------------------


def _integral_shift(rows: list[Row]) -> tuple[list[Row], Fraction]:
    """Uniformly shift all entries so they become integral (GT formulas and
    normalized intertwiner coefficients only see entry differences)."""
    classes = {(2 * e).numerator % 2 for row in rows for e in row}
    if len(classes) != 1:
        raise ValueError(f"rows {rows} mix integral classes")
    shift = Fraction(1, 2) if classes == {1} else Fraction(0)
    return [tuple(e + shift for e in row) for row in rows], shift


def red_me(rows: Sequence[Sequence], i1: int) -> AlgebraicValue:
    """Reduced matrix element over a two-row fragment [upper, middle]:
    the scalar factor attached to decreasing the middle-row entry at slot
    i1 by one.  Closed form; valid for any rational entries.  This is the
    first factor of the orthonormal-basis factorization of composite
    lowering elements (see the factorization tests); for a length-1 middle
    row it is the plain orthonormal gl2 lowering element,

        red_me([[x, y], [z]], -1) = sqrt((x - z + 1) * (z - y))
    """
    upper, middle = (_row(r) for r in rows)
    if len(upper) != len(middle) + 1:
        raise ValueError("red_me needs rows of lengths L+1, L")
    pos = slot_position(len(middle), i1)
    lu, lm = _lvars(upper), _lvars(middle)
    num = Fraction(-1)
    for li in lu:
        num *= li - lm[pos] + 1
    # middle-row differences: slots left of i1 enter with the +1 shift,
    # slots right of it without (the rule that makes the factorization of
    # the composite lowering element exact; see the tests)
    den = Fraction(1)
    for i, li in enumerate(lm):
        if i < pos:
            den *= li - lm[pos] + 1
        elif i > pos:
            den *= li - lm[pos]
    value = num / den
    if value < 0:
        raise ValueError(f"reduced element undefined for invalid shift: {rows}, {i1}")
    return sqrt_of(value)


def _completed(upper: Row, lower: Row) -> list[Row]:
    return [upper] + list(max_gl(lower).rows)


@lru_cache(maxsize=None)
def _wigner_cached(upper: Row, lower: Row, i: int) -> Fraction:
    L = len(upper)
    pos = slot_position(L, i)
    rows, _ = _integral_shift([upper, lower])
    upper_i, lower_i = rows
    bar = upper_i[:pos] + (upper_i[pos] + 1,) + upper_i[pos + 1:]
    if any(bar[t] < bar[t + 1] for t in range(L - 1)):
        return Fraction(0)
    ket_rows = _completed(upper_i, lower_i)
    bar_rows = [bar] + ket_rows[1:]
    try:
        ket = GlPattern(ket_rows)
        bra = GlPattern(bar_rows)
    except ValueError:
        return Fraction(0)
    table = gl_fundamental_intertwiner(upper_i, pos + 1)
    return table.rational_coefficient(bra, -L, ket)


def wigner(rows: Sequence[Sequence], i: int) -> Fraction:
    """Terminal factor of the factorized fundamental Wigner coefficient:
    the upper row gains one box at slot i, the lower row is unchanged (the
    tensored defining-module component stops at this boundary).  Values are
    taken in the rational-basis normalization, where they are rational.
    Zero when the shifted rows do not interlace.

        wigner([[1, 0], [1]], -2) = 1
    """
    upper, lower = (_row(r) for r in rows)
    if len(upper) != len(lower) + 1:
        raise ValueError("wigner needs rows of lengths L, L-1")
    return _wigner_cached(upper, lower, i)


@lru_cache(maxsize=None)
def _red_wigner_cached(upper: Row, lower: Row, i1: int, i2: int) -> Fraction:
    L = len(upper)
    pos1 = slot_position(L, i1)
    pos2 = slot_position(L - 1, i2)
    rows, _ = _integral_shift([upper, lower])
    upper_i, lower_i = rows
    bar_u = upper_i[:pos1] + (upper_i[pos1] + 1,) + upper_i[pos1 + 1:]
    bar_l = lower_i[:pos2] + (lower_i[pos2] + 1,) + lower_i[pos2 + 1:]
    if any(bar_u[t] < bar_u[t + 1] for t in range(L - 1)):
        return Fraction(0)
    if any(bar_l[t] < bar_l[t + 1] for t in range(L - 2)):
        return Fraction(0)
    completion = list(max_gl(lower_i).rows[1:])
    try:
        ket = GlPattern([upper_i, lower_i] + completion)
        bra = GlPattern([bar_u, bar_l] + completion)
    except ValueError:
        return Fraction(0)
    table = gl_fundamental_intertwiner(upper_i, pos1 + 1)
    full = table.rational_coefficient(bra, -(L - 1), ket)
    if not full:
        return full
    below = _wigner_cached(lower_i, lower_i[:-1], i2)
    assert below, (upper, lower, i1, i2)
    return full / below


def red_wigner(rows: Sequence[Sequence], i1: int, i2: int) -> Fraction:
    """Propagation factor of the factorized fundamental Wigner coefficient:
    the upper row gains a box at slot i1 while the lower row gains one at
    slot i2 (the tensored component continues below this boundary).
    Rational-basis normalization.  The sign is S(p2 - p1) with S(0) = +1,
    where p1, p2 are the left-aligned 0-based positions of the two slots
    (p = len(row) + slot); with right-aligned negative slots that reads
    S(i2 - i1 - 1)."""
    upper, lower = (_row(r) for r in rows)
    if len(upper) != len(lower) + 1:
        raise ValueError("red_wigner needs rows of lengths L, L-1")
    return _red_wigner_cached(upper, lower, i1, i2)


@lru_cache(maxsize=None)
def _wigner_orth_cached(upper: Row, lower: Row, i: int) -> AlgebraicValue:
    L = len(upper)
    pos = slot_position(L, i)
    rows, _ = _integral_shift([upper, lower])
    upper_i, lower_i = rows
    bar = upper_i[:pos] + (upper_i[pos] + 1,) + upper_i[pos + 1:]
    if any(bar[t] < bar[t + 1] for t in range(L - 1)):
        return AlgebraicValue()
    ket_rows = _completed(upper_i, lower_i)
    bar_rows = [bar] + ket_rows[1:]
    try:
        ket = GlPattern(ket_rows)
        bra = GlPattern(bar_rows)
    except ValueError:
        return AlgebraicValue()
    table = gl_fundamental_intertwiner(upper_i, pos + 1)
    return table.coefficient(bra, -L, ket)


def wigner_orth(rows: Sequence[Sequence], i: int) -> AlgebraicValue:
    """`wigner` in the orthonormal normalization of both bases (the value
    that multiplies orthonormal reduced elements)."""
    upper, lower = (_row(r) for r in rows)
    if len(upper) != len(lower) + 1:
        raise ValueError("wigner needs rows of lengths L, L-1")
    return _wigner_orth_cached(upper, lower, i)


def red_wigner_orth(rows: Sequence[Sequence], i1: int, i2: int) -> AlgebraicValue:
    """`red_wigner` in the orthonormal normalization: the full orthonormal
    intertwiner entry divided by the orthonormal factor of the rows below."""
    upper, lower = (_row(r) for r in rows)
    if len(upper) != len(lower) + 1:
        raise ValueError("red_wigner needs rows of lengths L, L-1")
    L = len(upper)
    pos1 = slot_position(L, i1)
    pos2 = slot_position(L - 1, i2)
    rows_i, _ = _integral_shift([upper, lower])
    upper_i, lower_i = rows_i
    bar_u = upper_i[:pos1] + (upper_i[pos1] + 1,) + upper_i[pos1 + 1:]
    bar_l = lower_i[:pos2] + (lower_i[pos2] + 1,) + lower_i[pos2 + 1:]
    if any(bar_u[t] < bar_u[t + 1] for t in range(L - 1)):
        return AlgebraicValue()
    if any(bar_l[t] < bar_l[t + 1] for t in range(L - 2)):
        return AlgebraicValue()
    completion = list(max_gl(lower_i).rows[1:])
    try:
        ket = GlPattern([upper_i, lower_i] + completion)
        bra = GlPattern([bar_u, bar_l] + completion)
    except ValueError:
        return AlgebraicValue()
    table = gl_fundamental_intertwiner(upper_i, pos1 + 1)
    full = table.coefficient(bra, -(L - 1), ket)
    if full.is_zero():
        return full
    below = _wigner_orth_cached(lower_i, lower_i[:-1], i2)
    assert not below.is_zero(), (upper, lower, i1, i2)
    return full / below
