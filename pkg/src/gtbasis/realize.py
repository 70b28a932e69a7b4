"""Exact matrix realizations and the chain-adapted orthogonal weight basis.

The split generators are F_{ij} = E_{ij} - E_{-j,-i} for the orthogonal
families (indices run through -n..n with 0 present only for odd rank) and
F_{ij} = E_{ij} - sign(i)sign(j) E_{-j,-i} for the symplectic family.  An
irreducible module V^lambda is realized inside a tensor power of the
defining module (times one spin factor for half-integral odd-orthogonal
weights): the highest vector is the exact rational null space of the
simple raisings on the weight-lambda slice, and the module is the span of
its lowerings.

On top of that realization the basis labelled by `patterns.BcdPattern` is
built level by level down the subalgebra chain g_1 < g_2 < ... < g_n,
where g_k acts on the index range {n-k+1..n} (and 0).  Level-1 blocks are
single ladders.  For k >= 2 the seed vectors (g_{k-1}-highest vectors of
the level-k block) are solved from linear equations that prescribe the
projections of the two level-k lowering generators onto the highest
component of each g_{k-1}-isotypic slice: the prescribed coefficients are
the rational-gauge gl_3 kernel values at the block's three-row data (B/C)
or the unit-gauge coefficients of the two commuting sl_2 ladders (D).
Components not reachable by those transitions (separate sigma sheets /
restriction classes) carry free normalization; each one is seeded by a
canonically scaled vector orthogonal to everything already placed, and
its overall sign is fixed by the first nonzero cross matrix element.
The system is heavily overdetermined and every equation is re-checked
after the solve, so an inconsistent prescription cannot emerge silently.

All coordinates stay in Q; square roots appear only when matrix elements
of the orthonormalized basis are emitted as `AlgebraicValue` entries.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .glkernel import gl_gt_lowering, gl_gt_raising
from .patterns import (
    BcdPattern,
    GlPattern,
    PatternOrder,
    _between_level_rows,
    _within_level_rows,
    enumerate_patterns,
    max_pattern,
    o4_from_pq,
    o4_pq,
)
from .rootdata import (
    AlgebraLabel,
    Weight,
    validate_highest_weight,
    weyl_dim,
)

F0 = Fraction(0)
F1 = Fraction(1)


class IntegrityError(RuntimeError):
    """An internal cross-check failed: the construction would be unsound."""


# -- split generators in the defining representation --------------------------


def index_set(label: AlgebraLabel) -> tuple[int, ...]:
    n = label.rank
    if label.family == "B":
        return tuple(range(-n, n + 1))
    return tuple(i for i in range(-n, n + 1) if i)


def _sgn(i: int) -> int:
    return 1 if i > 0 else -1


@lru_cache(maxsize=None)
def defining_matrix(label: AlgebraLabel, gen: tuple[int, int]) -> dict:
    """Sparse matrix of F_gen on the defining module, indexed by the raw
    indices of `index_set` (not positions)."""
    i, j = gen
    idx = index_set(label)
    if i not in idx or j not in idx:
        raise ValueError(f"generator {gen} outside the index set of {label}")
    out: dict[tuple[int, int], Fraction] = {(i, j): F1}
    if label.family == "C":
        partner = -Fraction(_sgn(i) * _sgn(j))
    else:
        partner = -F1
    key = (-j, -i)
    out[key] = out.get(key, F0) + partner
    return {k: v for k, v in out.items() if v}


def transpose_gen(gen: tuple[int, int]) -> tuple[int, int]:
    return (gen[1], gen[0])


@lru_cache(maxsize=None)
def coordinate_weight(label: AlgebraLabel, a: int) -> Weight:
    """Weight of the defining basis vector e_a: the F_{kk} (k < 0)
    eigenvalues listed most-dominant first (position p is the coordinate
    n - p), so e_{-n} is the highest vector of the defining module."""
    n = label.rank
    w = [F0] * n
    if a:
        w[n - abs(a)] = F1 if a < 0 else -F1
    return tuple(w)


@lru_cache(maxsize=None)
def generator_root(label: AlgebraLabel, gen: tuple[int, int]) -> Weight:
    i, j = gen
    wi, wj = coordinate_weight(label, i), coordinate_weight(label, j)
    return tuple(a - b for a, b in zip(wi, wj))


def is_lowering(label: AlgebraLabel, gen: tuple[int, int]) -> bool:
    for x in generator_root(label, gen):
        if x:
            return x < 0
    return False


@lru_cache(maxsize=None)
def representative_generators(label: AlgebraLabel) -> tuple[tuple[int, int], ...]:
    """A linearly independent spanning family of the F_{ij}: one label per
    class under F_{ij} ~ F_{-j,-i}, skipping the identically zero ones."""
    idx = index_set(label)
    out = []
    for i in idx:
        for j in idx:
            if not defining_matrix(label, (i, j)):
                continue
            if (i, j) <= (-j, -i):
                out.append((i, j))
    n = label.rank
    expected = n * (2 * n + 1) if label.family in ("B", "C") else n * (2 * n - 1)
    assert len(out) == expected, (label, len(out), expected)
    return tuple(out)


def _mat_mul(a: dict, b: dict) -> dict:
    by_row: dict = {}
    for (i, j), v in b.items():
        by_row.setdefault(i, []).append((j, v))
    out: dict = {}
    for (i, k), u in a.items():
        for j, v in by_row.get(k, ()):
            s = out.get((i, j), F0) + u * v
            if s:
                out[(i, j)] = s
            else:
                out.pop((i, j), None)
    return out


def _mat_comm(a: dict, b: dict) -> dict:
    out = _mat_mul(a, b)
    for k, v in _mat_mul(b, a).items():
        s = out.get(k, F0) - v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


@lru_cache(maxsize=None)
def bracket_expansion(label: AlgebraLabel, a: tuple[int, int],
                      b: tuple[int, int]) -> tuple:
    """[F_a, F_b] expanded over `representative_generators`, computed in
    the defining representation (structure constants are never
    transcribed).  Returns a tuple of ((i, j), coefficient)."""
    x = _mat_comm(defining_matrix(label, a), defining_matrix(label, b))
    coeffs = []
    for gen in representative_generators(label):
        i, j = gen
        v = x.get((i, j), F0)
        if not v:
            continue
        if (i, j) == (-j, -i):
            v = v / 2  # symplectic F_{i,-i} = 2 E_{i,-i}
        coeffs.append((gen, v))
    check: dict = {}
    for gen, v in coeffs:
        for key, u in defining_matrix(label, gen).items():
            s = check.get(key, F0) + v * u
            if s:
                check[key] = s
            else:
                check.pop(key, None)
    assert check == x, (a, b, "bracket leaves the span")
    return tuple(coeffs)


def simple_lowerings(label: AlgebraLabel, level: int = None) -> list:
    """Simple-root lowering generators of the level-`level` subalgebra of
    the chain (defaults to the whole algebra).  The subalgebra of rank j
    acts on coordinates n-j+1..n; its simple lowerings are the bridges
    F_{-(n-p-1),-(n-p)} together with the family-specific generator on
    its innermost coordinate."""
    fam, n = label.family, label.rank
    j = n if level is None else level
    assert 0 <= j <= n
    if j == 0:
        return []
    out = [(-(n - p - 1), -(n - p)) for p in range(j - 1)]
    c = n - j + 1
    if fam == "B":
        out.append((0, -c))
    elif fam == "C":
        out.append((c, -c))
    elif j >= 2:
        out.append((c, -(c + 1)))
    return out


# -- spin factor (family B) ---------------------------------------------------
#
# Fock realization on subsets of {1..n} encoded as bitmasks: gamma(e_a) is
# 2*(annihilator) for a > 0, the creator for a < 0 and the parity for
# a = 0.  These satisfy the Clifford relations of the invariant form
# g(e_a, e_b) = delta_{a,-b}, and the asymmetric 2/1 split keeps every
# matrix rational; the price is a diagonal Gram 2^{|S|} instead of the
# plain dot product, which `FactorRep` carries along.


def _fermion(n: int, i: int, create: bool) -> dict:
    out = {}
    for mask in range(1 << n):
        bit = 1 << (i - 1)
        if create == bool(mask & bit):
            continue
        sign = (-1) ** bin(mask & (bit - 1)).count("1")
        out[(mask | bit, mask) if create else (mask ^ bit, mask)] = Fraction(sign)
    return out


@lru_cache(maxsize=None)
def _gamma(n: int, a: int) -> dict:
    if a == 0:
        return {(m, m): Fraction((-1) ** bin(m).count("1")) for m in range(1 << n)}
    if a > 0:
        return {k: 2 * v for k, v in _fermion(n, a, create=False).items()}
    return _fermion(n, -a, create=True)


@lru_cache(maxsize=None)
def spin_matrix(n: int, gen: tuple[int, int]) -> dict:
    """The spin representation of F_gen: (1/8) sum_a [gamma(F e_a),
    gamma(e_{-a})] over the 2^n fermionic basis."""
    label = AlgebraLabel("B", n)
    total: dict = {}
    for (b, a), v in defining_matrix(label, gen).items():
        term = _mat_comm(_gamma(n, b), _gamma(n, -a))
        for key, u in term.items():
            s = total.get(key, F0) + v * u
            if s:
                total[key] = s
            else:
                total.pop(key, None)
    return {k: v / 8 for k, v in total.items() if v}


@lru_cache(maxsize=None)
def _spin_weights(n: int) -> tuple[Weight, ...]:
    diags = [spin_matrix(n, (-c, -c)) for c in range(n, 0, -1)]
    out = []
    for mask in range(1 << n):
        w = tuple(d.get((mask, mask), F0) for d in diags)
        assert all(abs(x) == Fraction(1, 2) for x in w), (mask, w)
        out.append(w)
    return tuple(out)


# -- tensor factors and tensor spaces -----------------------------------------


class FactorRep:
    """One tensor factor: weights, a diagonal Gram making the transposed
    generator the adjoint, and per-generator sparse column maps."""

    __slots__ = ("name", "dim", "weights", "gram", "_matrix_fn", "_columns")

    def __init__(self, name, dim, weights, gram, matrix_fn):
        self.name = name
        self.dim = dim
        self.weights = tuple(weights)
        self.gram = tuple(gram)
        self._matrix_fn = matrix_fn
        self._columns: dict = {}

    def columns(self, gen) -> dict:
        cols = self._columns.get(gen)
        if cols is None:
            cols = {}
            for (r, c), v in self._matrix_fn(gen).items():
                cols.setdefault(c, []).append((r, v))
            self._columns[gen] = cols
        return cols


@lru_cache(maxsize=None)
def defining_factor(label: AlgebraLabel) -> FactorRep:
    idx = index_set(label)
    pos = {a: p for p, a in enumerate(idx)}

    def matrix_fn(gen):
        return {(pos[r], pos[c]): v
                for (r, c), v in defining_matrix(label, gen).items()}

    weights = [coordinate_weight(label, a) for a in idx]
    return FactorRep("std", len(idx), weights, [F1] * len(idx), matrix_fn)


@lru_cache(maxsize=None)
def spin_factor(n: int) -> FactorRep:
    gram = [Fraction(2 ** bin(m).count("1")) for m in range(1 << n)]
    return FactorRep("spin", 1 << n, _spin_weights(n), gram,
                     lambda gen: spin_matrix(n, gen))


class TensorSpace:
    """A tensor product of factors; vectors are dicts mapping index tuples
    to rationals.  The generator action is the Leibniz rule and the inner
    product is the weighted coordinate dot, so that acting by the
    transposed generator label is exactly the adjoint."""

    __slots__ = ("label", "factors")

    def __init__(self, label: AlgebraLabel, factors: Sequence[FactorRep]):
        self.label = label
        self.factors = tuple(factors)

    def act(self, gen: tuple[int, int], vec: dict) -> dict:
        out: dict = {}
        for key, c in vec.items():
            for f, factor in enumerate(self.factors):
                for r, v in factor.columns(gen).get(key[f], ()):
                    nk = key[:f] + (r,) + key[f + 1:]
                    s = out.get(nk, F0) + c * v
                    if s:
                        out[nk] = s
                    else:
                        out.pop(nk, None)
        return out

    def weight_of(self, key: tuple) -> Weight:
        n = self.label.rank
        acc = [F0] * n
        for f, factor in enumerate(self.factors):
            for p, x in enumerate(factor.weights[key[f]]):
                acc[p] += x
        return tuple(acc)

    def gram_of(self, key: tuple) -> Fraction:
        g = F1
        for f, factor in enumerate(self.factors):
            g *= factor.gram[key[f]]
        return g

    def dot(self, u: dict, v: dict) -> Fraction:
        if len(v) < len(u):
            u, v = v, u
        total = F0
        for key, c in u.items():
            d = v.get(key)
            if d is not None:
                total += c * d * self.gram_of(key)
        return total

    def all_keys(self) -> Iterable[tuple]:
        return itertools.product(*(range(f.dim) for f in self.factors))


def _vadd(acc: dict, vec: dict, coeff: Fraction) -> None:
    if not coeff:
        return
    for key, v in vec.items():
        s = acc.get(key, F0) + coeff * v
        if s:
            acc[key] = s
        else:
            acc.pop(key, None)


def _vcombine(rows: Sequence[dict], coeffs: Sequence[Fraction]) -> dict:
    out: dict = {}
    for row, c in zip(rows, coeffs):
        _vadd(out, row, c)
    return out


# -- dense exact linear algebra (the systems here are tiny) -------------------


def _rref(rows: list) -> tuple[list, list]:
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = rows[r][c]
        rows[r] = [x / inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def _nullspace(rows: list, ncols: int) -> list:
    if not rows:
        return [[F1 if i == j else F0 for i in range(ncols)]
                for j in range(ncols)]
    red, pivots = _rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    out = []
    for f in free:
        v = [F0] * ncols
        v[f] = F1
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        out.append(v)
    return out


def _solve_unique(a: list, b: list) -> list:
    """Solve the square-rank system a x = b (a: list of rows), asserting a
    unique solution; used for Gram systems, which are positive definite."""
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    red, pivots = _rref(aug)
    ncols = len(a[0])
    assert pivots and pivots[-1] < ncols and len(pivots) == ncols, "singular Gram"
    x = [F0] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[-1]
    return x


def _affine_solve(a: list, b: list, ncols: int):
    """Full solution set of the scalar system A x = b: a particular
    solution with every free coordinate at zero, plus a basis of the
    homogeneous solutions.  Returns (None, None) if inconsistent."""
    aug = [list(ra) + [rb] for ra, rb in zip(a, b)]
    red, pivots = _rref(aug)
    if pivots and pivots[-1] == ncols:
        return None, None
    x0 = [F0] * ncols
    for row, p in zip(red, pivots):
        x0[p] = row[-1]
    free = [c for c in range(ncols) if c not in pivots]
    nulls = []
    for f in free:
        v = [F0] * ncols
        v[f] = F1
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        nulls.append(v)
    return x0, nulls


# -- highest vector and spanning ----------------------------------------------


def module_space(label: AlgebraLabel, hw: Sequence) -> TensorSpace:
    lam = validate_highest_weight(label, hw)
    factors = []
    if lam[0].denominator == 2:
        if label.family != "B":
            raise NotImplementedError(
                "half-integral weights are realized for the odd orthogonal "
                f"family only, not {label}")
        factors.append(spin_factor(label.rank))
        copies = sum(lam) - Fraction(label.rank, 2)
    else:
        copies = sum(abs(e) for e in lam)
    assert copies.denominator == 1 and copies >= 0, (label, hw)
    factors.extend(defining_factor(label) for _ in range(int(copies)))
    return TensorSpace(label, factors)


def highest_weight_vector(space: TensorSpace, lam: Weight) -> dict:
    """The canonical highest vector: first reduced-echelon null vector of
    the simple raisings on the weight-lambda slice."""
    label = space.label
    keys = [k for k in space.all_keys() if space.weight_of(k) == lam]
    assert keys, (label, lam, "empty highest weight slice")
    raisers = [transpose_gen(g) for g in simple_lowerings(label)]
    rows = []
    for r in raisers:
        images = [space.act(r, {k: F1}) for k in keys]
        for out_key in sorted(set().union(*images)):
            rows.append([img.get(out_key, F0) for img in images])
    null = _nullspace(rows, len(keys))
    assert null, (label, lam, "no highest vector in the tensor power")
    return {k: c for k, c in zip(keys, null[0]) if c}


def _span_slices(space: TensorSpace, seed: dict, gens: Sequence) -> dict:
    """Span of the repeated action of `gens` on `seed`, echelonized per
    ambient weight: weight -> list of reduced row vectors."""
    echelons: dict = {}

    def insert(vec: dict):
        if not vec:
            return None
        w = space.weight_of(next(iter(vec)))
        rows = echelons.setdefault(w, [])
        vec = dict(vec)
        for pivot, row in rows:
            c = vec.get(pivot)
            if c is not None:
                _vadd(vec, row, -c)
        if not vec:
            return None
        pivot = min(vec)
        inv = vec[pivot]
        vec = {k: v / inv for k, v in vec.items()}
        rows.append((pivot, vec))
        rows.sort(key=lambda item: item[0])
        return vec

    frontier = [insert(seed)]
    assert frontier[0] is not None
    while frontier:
        nxt = []
        for vec in frontier:
            for g in gens:
                reduced = insert(space.act(g, vec))
                if reduced is not None:
                    nxt.append(reduced)
        frontier = nxt
    return {w: [row for _, row in rows] for w, rows in echelons.items()}


# -- level solve: seeds of the g_{k-1}-isotypic components --------------------


def _level_weight(fam: str, k: int, m, T) -> Fraction:
    mp, sg, mu = T
    if fam in ("B", "C"):
        w = 2 * sum(mp) - sum(m) - sum(mu)
        if fam == "B":
            w -= sg
        return w
    return 2 * sum(mp) - sum(m[:-1]) - sum(mu[:-1]) - abs(m[-1] - mu[-1])


def _gl3_composite(star: GlPattern, direction: int) -> list:
    """Rational-gauge matrix elements of the two-row gl_3 move (the
    commutator of the adjacent one-row moves) at `star`."""
    acc: dict = {}
    step = gl_gt_lowering if direction < 0 else gl_gt_raising
    paths = [((1, 2), 1), ((2, 1), -1)] if direction < 0 else [((2, 1), 1), ((1, 2), -1)]
    for (first, second), sign in paths:
        for mid, c1 in step(star, first):
            for tgt, c2 in step(mid, second):
                acc[tgt] = acc.get(tgt, F0) + sign * c2 * c1
    return [(t, v) for t, v in acc.items() if v]


def _star_rows(fam: str, k: int, m, T) -> GlPattern:
    """Three-row gl_3 data of the level-k bridge at the tuple T: the level
    pair of rows taken verbatim, with a zero appended to the top row."""
    mp, sg, mu = T
    return GlPattern([(m[k - 2], m[k - 1], F0),
                      (mp[k - 2], mp[k - 1]), (mu[k - 2],)])


def _tuple_moves(fam: str, n: int, k: int, m, T, tupset) -> list:
    """The bridge equations rooted at the level data T = (mp, sigma, mu):
    [(generator, [(target tuple, prescribed coefficient)]), ...].

    Only the two lowering bridges are prescribed for B/C: the chain basis
    is not norm-uniform, so the raising elements are not the transposed
    lowering elements and are left to the solved gauge.  The prescribed
    coefficients are the rational-gauge gl_3 kernel values at the
    three-row data — the two-row composite move for F_{n-k+1,-(n-k+2)}
    (which lowers the level weight) and the one-row move for
    F_{-(n-k+1),-(n-k+2)} (which raises it) — and for D the unit-gauge
    coefficients of the two commuting sl_2 ladders, where the o_2 blocks
    are one-dimensional and the ladder data already fixes both
    directions."""
    mp, sg, mu = T
    comp = (-(n - k + 1), -(n - k + 2))
    simp = (n - k + 1, -(n - k + 2))
    moves = []
    if fam in ("B", "C"):
        star = _star_rows(fam, k, m, T)

        def back(starred):
            t = (mp[:k - 2] + tuple(starred.rows[1]), sg,
                 mu[:k - 2] + tuple(starred.rows[2]))
            return t if t in tupset else None

        for gen, action in ((simp, _gl3_composite(star, -1)),
                            (comp, gl_gt_lowering(star, 1))):
            targets = [(t, v) for q, v in action if (t := back(q)) is not None]
            moves.append((gen, targets))
    else:
        big, small = m[k - 2], m[k - 1]
        local = BcdPattern(AlgebraLabel("D", 2), [(mu[k - 2],), (big, small)],
                           [(), (mp[k - 2],)])
        p, q = o4_pq(local)
        r_plus, r_minus = big + small, big - small

        def at(p2, q2):
            if not (0 <= p2 <= r_plus and 0 <= q2 <= r_minus):
                return None
            loc = o4_from_pq((big, small), p2, q2)
            t = (mp[:k - 2] + (loc.primed[1][0],), sg,
                 mu[:k - 2] + (loc.unprimed[0][0],))
            return t if t in tupset else None

        for gen, p2, q2, val in (
                (simp, p + 1, q, F1),
                (transpose_gen(simp), p - 1, q, p * (r_plus - p + 1)),
                (comp, p, q - 1, F1),
                (transpose_gen(comp), p, q + 1, (r_minus - q) * (q + 1))):
            t = at(p2, q2)
            moves.append((gen, [(t, Fraction(val))] if t is not None and val else []))
    return moves


class _RSlice:
    """Highest component of one ambient-weight slice of a block: the null
    space of the sub-chain simple raisings, with its Gram matrix."""

    __slots__ = ("basis", "gram")

    def __init__(self, space, rows, raisers):
        eqs = []
        for r in raisers:
            images = [space.act(r, v) for v in rows]
            for key in sorted(set().union(*images)) if images else ():
                eqs.append([img.get(key, F0) for img in images])
        self.basis = [_vcombine(rows, c) for c in _nullspace(eqs, len(rows))]
        self.gram = [[space.dot(u, v) for v in self.basis] for u in self.basis]

    @property
    def dim(self):
        return len(self.basis)

    def project(self, space, x) -> list:
        """Coordinates of the orthogonal projection of x onto the slice."""
        if not self.basis:
            return []
        return _solve_unique(self.gram, [space.dot(b, x) for b in self.basis])

    def member(self, space, x) -> list:
        coords = self.project(space, x)
        resid = dict(x)
        for b, c in zip(self.basis, coords):
            _vadd(resid, b, -c)
        assert not resid, "vector is not a highest component"
        return coords


def _solve_level(space: TensorSpace, k: int, m, seed: dict, cls: Fraction) -> dict:
    """Seeds of all level-k components of the block U(g_k) seed: a map
    (primed row, sigma, lower row) -> g_{k-1}-highest vector."""
    fam, n = space.label.family, space.label.rank
    m = tuple(Fraction(e) for e in m)
    tuples = []
    for mp in _within_level_rows(fam, m, cls):
        sigs = ((0, 1) if mp[k - 1] > 0 else (0,)) if fam == "B" else (None,)
        for sg in sigs:
            for mu in _between_level_rows(fam, mp, cls):
                tuples.append((mp, sg, mu))
    tupset = frozenset(tuples)

    gk_gens = [g for g in representative_generators(space.label)
               if all(a == 0 or abs(a) >= n - k + 1 for a in g)]
    slices = _span_slices(space, seed, [g for g in gk_gens
                                        if is_lowering(space.label, g)])
    block_dim = weyl_dim(AlgebraLabel(fam, k), m)
    assert sum(len(rows) for rows in slices.values()) == block_dim, (fam, k, m)

    raisers = [transpose_gen(g) for g in simple_lowerings(space.label, k - 1)]
    rslices: dict = {}

    def rslice(w) -> _RSlice:
        if w not in rslices:
            rslices[w] = _RSlice(space, slices.get(w, []), raisers)
        return rslices[w]

    tail = space.weight_of(next(iter(seed)))[k:]

    def ambient(T) -> Weight:
        return T[2] + (_level_weight(fam, k, m, T),) + tail

    mx = max_pattern(AlgebraLabel(fam, k), m)
    t_hw = (mx.primed[k - 1], mx.sigmas[k - 1] if fam == "B" else None,
            mx.unprimed[k - 2])
    assert t_hw in tupset
    assert ambient(t_hw) == space.weight_of(next(iter(seed)))

    seed_coords = rslice(ambient(t_hw)).member(space, seed)

    # One global linear system over the slice coordinates of every other
    # tuple.  Each prescribed transition contributes the rows "projection
    # of the generator image onto the target slice = prescribed
    # combination of the target seeds"; the block seed's own coordinates
    # are the inhomogeneous part.  Solving all transitions at once avoids
    # any ordering assumptions: tuples nothing lowers onto are simply the
    # free directions of the solution set.
    off: dict = {}
    width = 0
    for T in tuples:
        if T == t_hw:
            continue
        d = rslice(ambient(T)).dim
        if d == 0:
            raise IntegrityError(f"no room for {T} in its ambient slice")
        off[T] = width
        width += d

    moves = {T: _tuple_moves(fam, n, k, m, T, tupset) for T in tuples}
    rows_a: list = []
    rows_b: list = []
    for T in tuples:
        slT = rslice(ambient(T))
        for gen, targets in moves[T]:
            images = [space.act(gen, bv) for bv in slT.basis]
            nz = next((im for im in images if im), None)
            if nz is None and not targets:
                continue
            w2 = space.weight_of(next(iter(nz))) if nz else ambient(targets[0][0])
            assert all(ambient(t) == w2 for t, _ in targets), (T, gen)
            sl2 = rslice(w2)
            proj = [sl2.project(space, im) if im else [F0] * sl2.dim
                    for im in images]
            for i in range(sl2.dim):
                row = [F0] * width
                rhs = F0
                for t, v in targets:
                    if t == t_hw:
                        rhs -= v * seed_coords[i]
                    else:
                        row[off[t] + i] += v
                for j in range(slT.dim):
                    pij = proj[j][i]
                    if not pij:
                        continue
                    if T == t_hw:
                        rhs += seed_coords[j] * pij
                    else:
                        row[off[T] + j] -= pij
                if any(row) or rhs:
                    rows_a.append(row)
                    rows_b.append(rhs)

    x0, nulls = _affine_solve(rows_a, rows_b, width)
    if x0 is None:
        raise IntegrityError(f"inconsistent seed equations at level {k} of {m}")

    # every free direction is the overall scale of one uncoupled unit of
    # tuples; normalize each by the leading coefficient of its top tuple
    touched: dict = {}
    for idx, nv in enumerate(nulls):
        for T, o in off.items():
            d = rslice(ambient(T)).dim
            if any(nv[o + j] for j in range(d)):
                if T in touched:
                    raise IntegrityError(
                        f"entangled gauge freedom at level {k} of {m}")
                if any(x0[o + j] for j in range(d)):
                    raise IntegrityError(
                        f"free direction overlaps a pinned seed at {T}")
                touched[T] = idx
    for idx, nv in enumerate(nulls):
        unit = [T for T, i2 in touched.items() if i2 == idx]
        top = max(unit)
        sl, o = rslice(ambient(top)), off[top]
        vec = _vcombine(sl.basis, [nv[o + j] for j in range(sl.dim)])
        if not vec:
            raise IntegrityError(f"vanishing free direction at {top}")
        s = 1 / vec[min(vec)]
        for j in range(width):
            if nv[j]:
                x0[j] += s * nv[j]

    assigned: dict = {t_hw: (seed, seed_coords)}
    for T, o in off.items():
        sl = rslice(ambient(T))
        coords = [x0[o + j] for j in range(sl.dim)]
        vec = _vcombine(sl.basis, coords)
        if not vec:
            raise IntegrityError(f"seed for {T} vanished at level {k} of {m}")
        assigned[T] = (vec, coords)

    # re-check every equation on the solved seeds: the system is
    # overdetermined, so this certifies the prescribed coefficients.  The
    # same pass records which tuples each nonzero equation couples, giving
    # the gauge units the sign pass below may flip independently.
    gauge_parent: dict = {t: t for t in tuples}

    def gauge_find(t):
        while gauge_parent[t] != t:
            gauge_parent[t] = gauge_parent[gauge_parent[t]]
            t = gauge_parent[t]
        return t

    def gauge_union(a, b):
        ra, rb = gauge_find(a), gauge_find(b)
        if ra != rb:
            gauge_parent[max(ra, rb)] = min(ra, rb)

    for source in tuples:
        for gen, targets in moves[source]:
            image = space.act(gen, assigned[source][0])
            if not image and not targets:
                continue
            w = space.weight_of(next(iter(image))) if image else ambient(targets[0][0])
            sl = rslice(w)
            proj = sl.project(space, image) if image else [F0] * sl.dim
            live = [t for t, v in targets if v]
            for t in live[1:]:
                gauge_union(live[0], t)
            if live and any(proj):
                gauge_union(source, live[0])
            for t, v in targets:
                for i, c in enumerate(assigned[t][1]):
                    proj[i] -= v * c
            if any(proj):
                raise IntegrityError(
                    f"prescribed coefficients inconsistent at {source} {gen}")

    # fix the free signs: each gauge unit (maximal set of tuples whose
    # relative scales the equations lock) other than the one holding the
    # block seed may be flipped as a whole.  Scan each later unit against
    # the earlier ones and flip it if its first nonzero cross matrix
    # element (of a lowering generator, in either direction) is negative.
    units: dict = {}
    for t in tuples:
        units.setdefault(gauge_find(t), []).append(t)
    unit_list = sorted(units.values(), key=lambda ts: ts != units[gauge_find(t_hw)])
    canon = sorted(unit_list[0])
    for unit in unit_list[1:]:
        fresh = sorted(unit)
        sign = None
        # exactly one endpoint of each scanned pair lies in the fresh
        # unit, so flipping the unit flips the element either way
        for gen in [g for g in gk_gens if is_lowering(space.label, g)]:
            for q, others in ([(q, fresh) for q in canon]
                              + [(q, canon) for q in fresh]):
                image = space.act(gen, assigned[q][0])
                if not image:
                    continue
                for p in others:
                    val = space.dot(assigned[p][0], image)
                    if val:
                        sign = 1 if val > 0 else -1
                        break
                if sign:
                    break
            if sign:
                break
        if sign == -1:
            for p in fresh:
                vec, coords = assigned[p]
                assigned[p] = ({key: -v for key, v in vec.items()},
                               [-c for c in coords])
        canon.extend(fresh)

    return {t: vec for t, (vec, _) in assigned.items()}


# -- recursion down the chain -------------------------------------------------


def _descend(space: TensorSpace, k: int, m, seed: dict, cls: Fraction) -> list:
    """All (unprimed rows, primed rows, sigma bits, vector) stacks of the
    block U(g_k) seed, rows listed bottom-up including the block's own
    row m."""
    fam, n = space.label.family, space.label.rank
    m = tuple(Fraction(e) for e in m)
    if k == 1:
        if fam == "D":
            return [([m], [()], [None], seed)]
        gen = (0, -n) if fam == "B" else (n, -n)
        out, vec, j = [], seed, 0
        while vec:
            if fam == "B":
                out.append(([m], [(Fraction(j // 2),)], [j % 2], vec))
            else:
                out.append(([m], [(Fraction(j),)], [None], vec))
            vec = space.act(gen, vec)
            j += 1
        expected = 2 * m[0] + 1 if fam == "B" else m[0] + 1
        assert j == expected, (fam, m, j)
        return out
    out = []
    for (mp, sg, mu), vec in _solve_level(space, k, m, seed, cls).items():
        for ups, prs, sgs, v in _descend(space, k - 1, mu, vec, cls):
            out.append((ups + [m], prs + [mp], sgs + [sg], v))
    return out


# -- the chain basis of a module ----------------------------------------------


class ChainModule:
    """The chain basis of one irreducible module: patterns in canonical
    order and their (rational) realization vectors.  Vectors of distinct
    weight are orthogonal, but within a degenerate weight space the chain
    basis is in general *not* orthogonal, so matrix elements are resolved
    through exact Gram systems per weight block."""

    __slots__ = ("label", "hw", "space", "patterns", "vectors", "norms2",
                 "index", "_rows_by_weight", "_gram_by_weight")

    def __init__(self, label, hw, space, patterns, vectors):
        self.label = label
        self.hw = hw
        self.space = space
        self.patterns = patterns
        self.vectors = vectors
        self.norms2 = [space.dot(v, v) for v in vectors]
        assert all(nn > 0 for nn in self.norms2)
        self.index = {p: i for i, p in enumerate(patterns)}
        self._rows_by_weight = {}
        for i, p in enumerate(patterns):
            self._rows_by_weight.setdefault(p.weight(), []).append(i)
        self._gram_by_weight = {}

    @property
    def dim(self) -> int:
        return len(self.patterns)

    def _gram(self, w) -> list:
        g = self._gram_by_weight.get(w)
        if g is None:
            rows = self._rows_by_weight[w]
            g = [[self.space.dot(self.vectors[r], self.vectors[s])
                  for s in rows] for r in rows]
            self._gram_by_weight[w] = g
        return g

    def operator_entries(self, gen: tuple[int, int]) -> dict:
        """Sparse matrix of F_gen in the chain basis: dict (row, col) ->
        Fraction, no explicit zeros.  Each image is resolved exactly by
        solving the Gram system of its target weight block."""
        out = {}
        for c, vec in enumerate(self.vectors):
            image = self.space.act(gen, vec)
            if not image:
                continue
            w = self.space.weight_of(next(iter(image)))
            rows = self._rows_by_weight.get(w, ())
            if not rows:
                raise IntegrityError(f"image of basis vector {c} leaves the span")
            rhs = [self.space.dot(self.vectors[r], image) for r in rows]
            x = _solve_unique(self._gram(w), rhs)
            resid = dict(image)
            for r, xr in zip(rows, x):
                _vadd(resid, self.vectors[r], -xr)
            if resid:
                raise IntegrityError(f"image of basis vector {c} leaves the span")
            for r, xr in zip(rows, x):
                if xr:
                    out[(r, c)] = xr
        return out


@lru_cache(maxsize=None)
def chain_basis(label: AlgebraLabel, hw: tuple) -> ChainModule:
    lam = validate_highest_weight(label, hw)
    cls = lam[0] - int(lam[0])
    space = module_space(label, lam)
    seed = highest_weight_vector(space, lam)
    stacks = _descend(space, label.rank, lam, seed, cls)

    built = []
    for ups, prs, sgs, vec in stacks:
        pat = BcdPattern(label, ups, prs, sgs if label.family == "B" else None)
        assert space.weight_of(next(iter(vec))) == pat.weight(), pat
        built.append((pat, vec))
    built.sort(key=lambda item: PatternOrder.key(item[0]))
    patterns = [p for p, _ in built]
    vectors = [v for _, v in built]

    expected = enumerate_patterns(label, lam)
    assert patterns == expected, (label, lam, "pattern set mismatch")
    return ChainModule(label, lam, space, patterns, vectors)
