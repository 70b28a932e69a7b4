"""Root-system oracles for the classical families A, B, C, D.

Everything in this module is derived from root-system combinatorics alone
(Weyl dimension formula, Freudenthal recursion, Racah-Speiser tensor rule).
It never touches patterns or matrices, so it serves as an independent
cross-check for the explicit basis construction in the rest of the package.

Conventions:
  * family "A" with rank n means gl_n; highest weights are non-increasing
    integer n-tuples (entries may be negative).
  * families "B", "C", "D" are the split orthogonal/symplectic algebras
    o_{2n+1}, sp_{2n}, o_{2n} in the standard epsilon-coordinates; highest
    weights are non-increasing n-tuples, half-integers allowed for B and D,
    and for D the last entry may be negative.
  * weights are tuples of Fractions, most dominant coordinate first.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

Weight = tuple[Fraction, ...]

FAMILIES = ("A", "B", "C", "D")


class AlgebraLabel:
    """A classical family letter together with a rank."""

    __slots__ = ("family", "rank")

    def __init__(self, family: str, rank: int):
        if family not in FAMILIES:
            raise ValueError(f"unknown family {family!r}, expected one of {FAMILIES}")
        if not isinstance(rank, int) or rank < 1:
            raise ValueError(f"rank must be a positive integer, got {rank!r}")
        self.family = family
        self.rank = rank

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraLabel)
            and self.family == other.family
            and self.rank == other.rank
        )

    def __hash__(self):
        return hash((self.family, self.rank))

    def __repr__(self):
        return f"AlgebraLabel({self.family!r}, {self.rank})"

    @property
    def matrix_size(self) -> int:
        """Size of the defining matrix realization: n for gl_n, else 2n
        (+1 for the odd orthogonal family)."""
        if self.family == "A":
            return self.rank
        return 2 * self.rank + (1 if self.family == "B" else 0)


def as_weight(entries: Iterable) -> Weight:
    return tuple(Fraction(e) for e in entries)


def validate_highest_weight(label: AlgebraLabel, hw: Sequence) -> Weight:
    """Check dominance and integrality class; return the canonical tuple."""
    lam = as_weight(hw)
    n = label.rank
    if len(lam) != n:
        raise ValueError(f"highest weight {lam} has length {len(lam)}, expected {n}")
    fam = label.family
    if fam == "A":
        if any(e.denominator != 1 for e in lam):
            raise ValueError(f"family A highest weight must be integral, got {lam}")
        if any(lam[i] < lam[i + 1] for i in range(n - 1)):
            raise ValueError(f"family A highest weight must be non-increasing, got {lam}")
        return lam
    doubled = {(2 * e).denominator for e in lam}
    if doubled != {1}:
        raise ValueError(f"entries of {lam} must be integers or half-integers")
    classes = {(2 * e).numerator % 2 for e in lam}
    if len(classes) > 1:
        raise ValueError(f"entries of {lam} must all be integers or all half-odd")
    if fam == "C" and classes != {0}:
        raise ValueError(f"family C highest weight must be integral, got {lam}")
    body = lam if fam != "D" else lam[:-1] + (abs(lam[-1]),)
    if any(body[i] < body[i + 1] for i in range(n - 1)) or body[-1] < 0:
        raise ValueError(f"{lam} is not dominant for family {fam}")
    if fam != "D" and lam[-1] < 0:
        raise ValueError(f"{lam} is not dominant for family {fam}")
    return lam


def _unit(n: int, i: int) -> Weight:
    return tuple(Fraction(1) if j == i else Fraction(0) for j in range(n))


def _combine(a: Weight, b: Weight, cb=1) -> Weight:
    return tuple(x + cb * y for x, y in zip(a, b))


def dot(a: Weight, b: Weight) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


@lru_cache(maxsize=None)
def positive_roots(family: str, rank: int) -> tuple[Weight, ...]:
    n = rank
    roots: list[Weight] = []
    for i in range(n):
        for j in range(i + 1, n):
            roots.append(_combine(_unit(n, i), _unit(n, j), -1))
            if family in ("B", "C", "D"):
                roots.append(_combine(_unit(n, i), _unit(n, j), 1))
    if family == "B":
        roots.extend(_unit(n, i) for i in range(n))
    if family == "C":
        roots.extend(tuple(2 * x for x in _unit(n, i)) for i in range(n))
    return tuple(roots)


@lru_cache(maxsize=None)
def simple_roots(family: str, rank: int) -> tuple[Weight, ...]:
    n = rank
    roots = [_combine(_unit(n, i), _unit(n, i + 1), -1) for i in range(n - 1)]
    if family == "B":
        roots.append(_unit(n, n - 1))
    elif family == "C":
        roots.append(tuple(2 * x for x in _unit(n, n - 1)))
    elif family == "D":
        if n >= 2:
            roots.append(_combine(_unit(n, n - 2), _unit(n, n - 1), 1))
    return tuple(roots)


@lru_cache(maxsize=None)
def rho(family: str, rank: int) -> Weight:
    """Half-sum of positive roots."""
    n = rank
    if family == "A":
        # any representative with <rho, e_i - e_j> = j - i works; use the
        # symmetric one so that Casimir values match the gl_n trace form
        return tuple(Fraction(n - 1 - 2 * i, 2) for i in range(n))
    half = Fraction(1, 2)
    total = tuple(Fraction(0) for _ in range(n))
    for alpha in positive_roots(family, rank):
        total = _combine(total, alpha)
    return tuple(half * x for x in total)


def weyl_dim(label: AlgebraLabel, hw: Sequence) -> int:
    """Dimension of the irreducible module, by the Weyl formula."""
    lam = validate_highest_weight(label, hw)
    r = rho(label.family, label.rank)
    lam_rho = _combine(lam, r)
    result = Fraction(1)
    for alpha in positive_roots(label.family, label.rank):
        result *= dot(lam_rho, alpha) / dot(r, alpha)
    assert result.denominator == 1 and result > 0, (label, hw, result)
    return int(result)


def casimir_eigenvalue(label: AlgebraLabel, hw: Sequence) -> Fraction:
    """<lambda, lambda + 2 rho>, the quadratic Casimir eigenvalue in the
    normalization where the Casimir is built from the split basis via the
    trace form of the defining representation."""
    lam = validate_highest_weight(label, hw)
    r = rho(label.family, label.rank)
    return dot(lam, _combine(lam, r, 2))


# -- Weyl group utilities ----------------------------------------------------


def dominant_conjugate(family: str, weight: Weight) -> Weight:
    """The dominant element of the Weyl orbit of `weight`."""
    if family == "A":
        return tuple(sorted(weight, reverse=True))
    body = sorted((abs(x) for x in weight), reverse=True)
    if family in ("B", "C"):
        return tuple(body)
    flips = sum(1 for x in weight if x < 0)
    if flips % 2 and all(x != 0 for x in weight):
        body[-1] = -body[-1]
    return tuple(body)


def _simple_reflections(family: str, rank: int):
    out = []
    for alpha in simple_roots(family, rank):
        norm = dot(alpha, alpha)

        def refl(w, alpha=alpha, norm=norm):
            return _combine(w, alpha, -2 * dot(w, alpha) / norm)

        out.append(refl)
    return out


@lru_cache(maxsize=None)
def weyl_orbit(family: str, rank: int, weight: Weight) -> frozenset[Weight]:
    refls = _simple_reflections(family, rank)
    seen = {weight}
    frontier = [weight]
    while frontier:
        nxt = []
        for w in frontier:
            for s in refls:
                img = s(w)
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt
    return frozenset(seen)


# -- Freudenthal multiplicities ----------------------------------------------


@lru_cache(maxsize=None)
def _dominant_multiplicities(family: str, rank: int, lam: Weight) -> dict[Weight, int]:
    simples = simple_roots(family, rank)
    positives = positive_roots(family, rank)
    r = rho(family, rank)
    lam_norm = dot(lam, lam)

    # all lattice points lam - (nonneg combo of simple roots) inside the
    # closed ball |mu| <= |lam|; the weights of the module all lie here and
    # stay connected under single simple-root steps
    ball = {lam}
    frontier = [lam]
    while frontier:
        nxt = []
        for mu in frontier:
            for alpha in simples:
                nu = _combine(mu, alpha, -1)
                if nu not in ball and dot(nu, nu) <= lam_norm:
                    ball.add(nu)
                    nxt.append(nu)
        frontier = nxt

    dominants = [mu for mu in ball if dominant_conjugate(family, mu) == mu]
    # Freudenthal recursion proceeds from lam downward; sort by height
    dominants.sort(key=lambda mu: dot(_combine(lam, mu, -1), r))

    lam_rho_sq = dot(_combine(lam, r), _combine(lam, r))
    mults: dict[Weight, int] = {}
    for mu in dominants:
        if mu == lam:
            mults[mu] = 1
            continue
        total = Fraction(0)
        for alpha in positives:
            k = 1
            while True:
                nu = _combine(mu, alpha, k)
                if dot(nu, nu) > lam_norm:
                    break
                m = mults.get(dominant_conjugate(family, nu), 0)
                if m:
                    total += m * dot(nu, alpha)
                k += 1
        mu_rho = _combine(mu, r)
        denom = lam_rho_sq - dot(mu_rho, mu_rho)
        assert denom > 0, (family, rank, lam, mu)
        value = 2 * total / denom
        assert value.denominator == 1 and value > 0, (lam, mu, value)
        mults[mu] = int(value)
    return mults


def freudenthal(label: AlgebraLabel, hw: Sequence) -> dict[Weight, int]:
    """Full weight multiplicity table of the irreducible module."""
    lam = validate_highest_weight(label, hw)
    dom = _dominant_multiplicities(label.family, label.rank, lam)
    table: dict[Weight, int] = {}
    for mu, m in dom.items():
        for w in weyl_orbit(label.family, label.rank, mu):
            table[w] = m
    assert sum(table.values()) == weyl_dim(label, lam)
    return table


# -- tensor with the defining module -----------------------------------------


def standard_weights(label: AlgebraLabel) -> list[Weight]:
    """Weights (with multiplicity) of the defining module."""
    n = label.rank
    out = []
    for i in range(n):
        out.append(_unit(n, i))
        if label.family != "A":
            out.append(tuple(-x for x in _unit(n, i)))
    if label.family == "B":
        out.append(tuple(Fraction(0) for _ in range(n)))
    return out


def _strictly_dominant_conjugate(family: str, mu: Weight):
    """Return (nu, sign) with nu strictly dominant and w(mu) = nu for some
    Weyl element w of determinant `sign`, or None if mu is on a wall."""
    n = len(mu)
    if family == "A":
        if len({x for x in mu}) < n:
            return None
        order = sorted(range(n), key=lambda i: mu[i], reverse=True)
        nu = tuple(mu[i] for i in order)
        return nu, _perm_sign(order)
    if family in ("B", "C"):
        if any(x == 0 for x in mu) or len({abs(x) for x in mu}) < n:
            return None
        order = sorted(range(n), key=lambda i: abs(mu[i]), reverse=True)
        nu = tuple(abs(mu[i]) for i in order)
        sign = _perm_sign(order)
        sign *= (-1) ** sum(1 for x in mu if x < 0)
        return nu, sign
    # family D: a single zero entry is regular, equal absolute values are not
    if len({abs(x) for x in mu}) < n:
        return None
    order = sorted(range(n), key=lambda i: abs(mu[i]), reverse=True)
    sign = _perm_sign(order)
    body = [abs(mu[i]) for i in order]
    if sum(1 for x in mu if x < 0) % 2:
        body[-1] = -body[-1]  # odd flips are not in W(D); keep parity even
    return tuple(body), sign


def _perm_sign(order: Sequence[int]) -> int:
    seen = [False] * len(order)
    sign = 1
    for i in range(len(order)):
        if seen[i]:
            continue
        j, cycle = i, 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            cycle += 1
        if cycle % 2 == 0:
            sign = -sign
    return sign


@lru_cache(maxsize=None)
def _tensor_with_standard(family: str, rank: int, lam: Weight) -> tuple[tuple[Weight, int], ...]:
    label = AlgebraLabel(family, rank)
    r = rho(family, rank)
    counts: dict[Weight, int] = {}
    for nu in standard_weights(label):
        mu = _combine(_combine(lam, nu), r)
        res = _strictly_dominant_conjugate(family, mu)
        if res is None:
            continue
        dom, sign = res
        target = _combine(dom, r, -1)
        counts[target] = counts.get(target, 0) + sign
    out = {hw: m for hw, m in counts.items() if m}
    assert all(m > 0 for m in out.values()), (family, rank, lam, out)
    total = sum(m * weyl_dim(label, hw) for hw, m in out.items())
    assert total == weyl_dim(label, lam) * len(standard_weights(label)), (lam, out)
    return tuple(sorted(out.items(), reverse=True))


def tensor_with_standard(label: AlgebraLabel, hw: Sequence) -> list[tuple[Weight, int]]:
    """Decomposition of (irreducible hw module) tensor (defining module)
    into irreducibles, as a list of (highest weight, multiplicity) pairs
    sorted lexicographically descending."""
    lam = validate_highest_weight(label, hw)
    return list(_tensor_with_standard(label.family, label.rank, lam))
