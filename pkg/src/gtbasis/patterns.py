"""Pattern combinatorics for the weight bases.

A basis vector of the irreducible module V^lambda over o_{2n+1} (family B),
sp_{2n} (family C) or o_{2n} (family D) is indexed by a triangular pattern:
for each level k = n..1 an unprimed row m_k (length k) and a primed row
mp_k (length k for B/C, length k-1 for D), plus for family B one bit
sigma_k per level.  The top unprimed row is the highest weight; successive
rows satisfy the interlacing inequalities written out in `validate`.

Rows are stored most-dominant entry first, matching the highest-weight
tuples used by `rootdata`.  The weight of a pattern is computed level by
level; the level-k component sits at position k-1 of the weight tuple.

The same module also hosts plain gl GT patterns (`GlPattern`), which the
gl kernel formulas and their brute-force counterparts share.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .rootdata import AlgebraLabel, Weight, as_weight, validate_highest_weight

Row = tuple[Fraction, ...]


def _row(entries: Iterable) -> Row:
    return tuple(Fraction(e) for e in entries)


def frange(lo: Fraction, hi: Fraction) -> Iterator[Fraction]:
    """Yield lo, lo+1, ..., hi (empty if hi < lo).  hi - lo must be an
    integer; rows within one integrality class always satisfy this."""
    lo, hi = Fraction(lo), Fraction(hi)
    if hi < lo:
        return
    span = hi - lo
    assert span.denominator == 1, (lo, hi)
    for step in range(int(span) + 1):
        yield lo + step


def _same_class(entries: Iterable[Fraction], cls: Fraction) -> bool:
    return all((e - cls).denominator == 1 for e in entries)


class BcdPattern:
    """One basis-vector label for a family B/C/D module.

    unprimed[k-1] and primed[k-1] are the level-k rows (so unprimed[-1] is
    the highest weight); sigmas[k-1] is the level-k bit for family B and
    None otherwise.  For family D, primed[0] is the empty row.
    """

    __slots__ = ("label", "unprimed", "primed", "sigmas")

    def __init__(self, label: AlgebraLabel, unprimed, primed, sigmas=None, validate=True):
        self.label = label
        self.unprimed = tuple(_row(r) for r in unprimed)
        self.primed = tuple(_row(r) for r in primed)
        self.sigmas = tuple(int(s) for s in sigmas) if sigmas is not None else None
        if validate:
            self.validate()

    # -- structure --------------------------------------------------------

    @property
    def family(self) -> str:
        return self.label.family

    @property
    def rank(self) -> int:
        return self.label.rank

    @property
    def hw(self) -> Weight:
        return self.unprimed[-1]

    def row(self, level: int) -> Row:
        return self.unprimed[level - 1]

    def prow(self, level: int) -> Row:
        return self.primed[level - 1]

    def sigma(self, level: int) -> int:
        assert self.family == "B"
        return self.sigmas[level - 1]

    def validate(self):
        fam, n = self.family, self.rank
        if fam == "A":
            raise ValueError("BcdPattern labels families B, C, D only")
        if len(self.unprimed) != n or len(self.primed) != n:
            raise ValueError(f"need {n} unprimed and primed rows")
        if fam == "B":
            if self.sigmas is None or len(self.sigmas) != n:
                raise ValueError(f"family B pattern needs {n} sigma bits")
            if any(s not in (0, 1) for s in self.sigmas):
                raise ValueError(f"sigma bits must be 0/1, got {self.sigmas}")
        elif self.sigmas is not None:
            raise ValueError("sigma bits only exist for family B")
        lam = validate_highest_weight(self.label, self.unprimed[-1])
        cls = lam[0] - int(lam[0])  # 0 or 1/2
        for k in range(1, n + 1):
            m, mp = self.unprimed[k - 1], self.primed[k - 1]
            plen = k if fam in ("B", "C") else k - 1
            if len(m) != k or len(mp) != plen:
                raise ValueError(f"level {k}: row lengths {len(m)}, {len(mp)}")
            if not _same_class(m, cls):
                raise ValueError(f"level {k} row {m} leaves the class of {lam}")
            if fam in ("B", "C"):
                prow_cls = Fraction(0) if k == 1 else cls
                if not _same_class(mp, prow_cls):
                    raise ValueError(f"level {k} primed row {mp} has wrong class")
                # within level k: m[0] >= mp[0] >= m[1] >= ... >= mp[k-1] >= 0
                for i in range(k):
                    if m[i] < mp[i]:
                        raise ValueError(f"level {k}: m{m} < mp{mp} at slot {i}")
                    if i + 1 < k and mp[i] < m[i + 1]:
                        raise ValueError(f"level {k}: mp{mp} < m{m} at slot {i}")
                if mp[k - 1] < 0:
                    raise ValueError(f"level {k}: primed row {mp} negative")
                if fam == "B":
                    s = self.sigmas[k - 1]
                    if s == 1 and k >= 2 and mp[k - 1] == 0:
                        raise ValueError(f"level {k}: sigma=1 needs mp[{k-1}] > 0")
                    if s == 1 and k == 1 and mp[0] >= m[0]:
                        raise ValueError("level 1: sigma=1 needs mp < m")
            else:  # family D
                if not _same_class(mp, cls):
                    raise ValueError(f"level {k} primed row {mp} has wrong class")
                for i in range(k - 1):
                    if m[i] < mp[i]:
                        raise ValueError(f"level {k}: m{m} < mp{mp} at slot {i}")
                    if i + 1 < k - 1 and mp[i] < m[i + 1]:
                        raise ValueError(f"level {k}: mp{mp} < m{m} at slot {i}")
                if k >= 2 and mp[k - 2] < abs(m[k - 1]):
                    raise ValueError(f"level {k}: mp{mp} < |{m[k-1]}|")
            if k >= 2:  # between levels: primed row k vs unprimed row k-1
                lower = self.unprimed[k - 2]
                if fam in ("B", "C"):
                    for i in range(k - 1):
                        if mp[i] < lower[i] or lower[i] < mp[i + 1]:
                            raise ValueError(
                                f"rows mp_{k}={mp} and m_{k-1}={lower} do not interlace")
                else:
                    for i in range(k - 2):
                        if mp[i] < lower[i] or lower[i] < mp[i + 1]:
                            raise ValueError(
                                f"rows mp_{k}={mp} and m_{k-1}={lower} do not interlace")
                    if mp[k - 2] < abs(lower[k - 2]):
                        raise ValueError(
                            f"rows mp_{k}={mp} and m_{k-1}={lower} do not interlace")
        return self

    # -- derived data ------------------------------------------------------

    def weight(self) -> Weight:
        """Weight of the basis vector; position k-1 carries the level-k
        component."""
        fam, n = self.family, self.rank
        out = []
        for k in range(1, n + 1):
            m, mp = self.unprimed[k - 1], self.primed[k - 1]
            if k == 1:
                if fam == "B":
                    out.append(m[0] - 2 * mp[0] - self.sigmas[0])
                elif fam == "C":
                    out.append(m[0] - 2 * mp[0])
                else:
                    out.append(m[0])
                continue
            lower = self.unprimed[k - 2]
            if fam in ("B", "C"):
                w = 2 * sum(mp) - sum(m) - sum(lower)
                if fam == "B":
                    w -= self.sigmas[k - 1]
            else:
                w = (
                    2 * sum(mp)
                    - sum(m[:-1])
                    - sum(lower[:-1])
                    - abs(m[-1] - lower[-1])
                )
            out.append(w)
        return tuple(Fraction(w) for w in out)

    def sub_pattern(self, level: int) -> "BcdPattern":
        """The pattern this one restricts to for the level-`level`
        subalgebra of the chain."""
        if not 1 <= level <= self.rank:
            raise ValueError(f"level {level} outside 1..{self.rank}")
        sub = AlgebraLabel(self.family, level)
        sig = self.sigmas[:level] if self.family == "B" else None
        return BcdPattern(sub, self.unprimed[:level], self.primed[:level], sig)

    def replace(self, level: int, unprimed: Row = None, primed: Row = None,
                sigma: int = None, validate: bool = True) -> "BcdPattern":
        """A copy with the given level-`level` rows swapped out."""
        ups = list(self.unprimed)
        prs = list(self.primed)
        sig = list(self.sigmas) if self.sigmas is not None else None
        if unprimed is not None:
            ups[level - 1] = _row(unprimed)
        if primed is not None:
            prs[level - 1] = _row(primed)
        if sigma is not None:
            sig[level - 1] = int(sigma)
        return BcdPattern(self.label, ups, prs, sig, validate=validate)

    def is_valid(self) -> bool:
        try:
            self.validate()
            return True
        except ValueError:
            return False

    # -- ordering / identity ------------------------------------------------

    def sort_key(self):
        """Flatten top-down: level n unprimed row, primed row, sigma, then
        level n-1, ...  Lexicographic order on this key is the canonical
        basis order."""
        key = []
        for k in range(self.rank, 0, -1):
            key.extend(self.unprimed[k - 1])
            key.extend(self.primed[k - 1])
            if self.sigmas is not None:
                key.append(Fraction(self.sigmas[k - 1]))
        return tuple(key)

    def __eq__(self, other):
        return (
            isinstance(other, BcdPattern)
            and self.label == other.label
            and self.unprimed == other.unprimed
            and self.primed == other.primed
            and self.sigmas == other.sigmas
        )

    def __hash__(self):
        return hash((self.label, self.unprimed, self.primed, self.sigmas))

    def __repr__(self):
        rows = []
        for k in range(self.rank, 0, -1):
            rows.append("[" + ",".join(str(e) for e in self.unprimed[k - 1]) + "]")
            rows.append("[" + ",".join(str(e) for e in self.primed[k - 1]) + "]'")
            if self.sigmas is not None:
                rows.append(f"s{self.sigmas[k - 1]}")
        return f"<{self.family}{self.rank} " + " ".join(rows) + ">"

    # -- serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        """JSON form: rows and sigma bits listed top-down (level n first)."""
        rows = []
        for k in range(self.rank, 0, -1):
            rows.append([str(e) for e in self.unprimed[k - 1]])
            rows.append([str(e) for e in self.primed[k - 1]])
        sigmas = list(reversed(self.sigmas)) if self.sigmas is not None else []
        return {
            "family": self.family,
            "rank": self.rank,
            "hw": [str(e) for e in self.hw],
            "rows": rows,
            "sigmas": sigmas,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "BcdPattern":
        label = AlgebraLabel(data["family"], int(data["rank"]))
        rows = [_row(r) for r in data["rows"]]
        n = label.rank
        if len(rows) != 2 * n:
            raise ValueError(f"expected {2 * n} rows, got {len(rows)}")
        unprimed = tuple(rows[2 * (n - k)] for k in range(1, n + 1))
        primed = tuple(rows[2 * (n - k) + 1] for k in range(1, n + 1))
        sig = None
        if label.family == "B":
            raw = data.get("sigmas")
            if not raw or len(raw) != n:
                raise ValueError(f"family B pattern needs {n} sigma bits")
            sig = [int(s) for s in reversed(raw)]
        elif data.get("sigmas"):
            raise ValueError("sigma bits only exist for family B")
        pattern = cls(label, unprimed, primed, sig)
        if "hw" in data and _row(data["hw"]) != pattern.hw:
            raise ValueError("hw field disagrees with top row")
        return pattern


class PatternOrder:
    """Canonical total order on a module's patterns: lexicographic on the
    top-down flattening, sigma bit after its level's rows."""

    @staticmethod
    def key(pattern: BcdPattern):
        return pattern.sort_key()

    @staticmethod
    def sorted(patterns: Iterable[BcdPattern]) -> list[BcdPattern]:
        return sorted(patterns, key=PatternOrder.key)


def _within_level_rows(family: str, m: Row, cls: Fraction) -> Iterator[Row]:
    """All primed rows interlacing the unprimed row m at the same level."""
    k = len(m)
    if family in ("B", "C"):
        if k == 1:
            # level-1 primed entry is always a plain integer
            for d in frange(Fraction(0), Fraction(math.floor(m[0]))):
                yield (d,)
            return
        ranges = []
        for i in range(k):
            lo = m[i + 1] if i + 1 < k else max(Fraction(0), cls)
            ranges.append(list(frange(lo, m[i])))
        yield from itertools.product(*ranges)
    else:
        if k == 1:
            yield ()
            return
        ranges = []
        for i in range(k - 1):
            lo = m[i + 1] if i + 1 < k - 1 else abs(m[k - 1])
            ranges.append(list(frange(lo, m[i])))
        yield from itertools.product(*ranges)


def _between_level_rows(family: str, mp: Row, cls: Fraction) -> Iterator[Row]:
    """All unprimed rows one level down that interlace the primed row mp."""
    if family in ("B", "C"):
        k = len(mp)
        if k == 1:
            return  # level 1 has nothing below
        ranges = [list(frange(mp[i + 1], mp[i])) for i in range(k - 1)]
        yield from itertools.product(*ranges)
    else:
        k = len(mp) + 1
        if k == 1:
            return
        ranges = []
        for i in range(k - 1):
            if i < k - 2:
                ranges.append(list(frange(mp[i + 1], mp[i])))
            else:
                # the lowest entry of every unprimed row is signed
                signed = [v for v in frange(-mp[k - 2], mp[k - 2])
                          if (v - cls).denominator == 1]
                ranges.append(signed)
        yield from itertools.product(*ranges)


def enumerate_patterns(label: AlgebraLabel, hw: Sequence) -> list[BcdPattern]:
    """All patterns of the module, in canonical order."""
    lam = validate_highest_weight(label, hw)
    if label.family == "A":
        raise ValueError("use enumerate_gl for family A")
    cls = lam[0] - int(lam[0])
    fam, n = label.family, label.rank

    def descend(k: int, m: Row):
        """All (rows, sigmas) stacks for levels k..1 below unprimed row m."""
        out = []
        for mp in _within_level_rows(fam, m, cls):
            if fam == "B":
                if k >= 2:
                    sigmas = (0, 1) if mp[k - 1] > 0 else (0,)
                else:
                    sigmas = (0, 1) if mp[0] < m[0] else (0,)
            else:
                sigmas = (None,)
            if k == 1:
                for s in sigmas:
                    out.append(([m], [mp], [s]))
                continue
            for lower in _between_level_rows(fam, mp, cls):
                for ups, prs, sgs in descend(k - 1, lower):
                    for s in sigmas:
                        out.append((ups + [m], prs + [mp], sgs + [s]))
        return out

    stacks = descend(n, lam)
    patterns = [
        BcdPattern(label, ups, prs, sgs if fam == "B" else None, validate=False)
        for ups, prs, sgs in stacks
    ]
    return PatternOrder.sorted(patterns)


def max_pattern(label: AlgebraLabel, hw: Sequence) -> BcdPattern:
    """The pattern of the highest weight vector (weight = hw)."""
    lam = validate_highest_weight(label, hw)
    fam, n = label.family, label.rank
    cls = lam[0] - int(lam[0])
    unprimed = [lam[:k] for k in range(1, n + 1)]
    if fam in ("B", "C"):
        primed = [lam[:k] for k in range(1, n + 1)]
        primed[0] = (Fraction(0),)
        sigmas = [0] * n if fam == "B" else None
    else:
        primed = [lam[:k - 1] for k in range(1, n + 1)]
        sigmas = None
    pattern = BcdPattern(label, unprimed, primed, sigmas)
    assert pattern.weight() == lam, (pattern, lam)
    return pattern


def o4_pq(pattern: BcdPattern) -> tuple[Fraction, Fraction]:
    """Ladder coordinates of a rank-2 family-D pattern.

    The o4 module factors into two commuting sl2 ladders; p counts lowering
    steps of the (long-diagonal) ladder, q of the other.  Bijective with
    the pattern entries; see o4_from_pq for the inverse.
    """
    if pattern.family != "D" or pattern.rank != 2:
        raise ValueError("o4_pq needs a rank-2 family D pattern")
    big, small = pattern.hw
    mp = pattern.primed[1][0]
    c = pattern.unprimed[0][0]
    s = big - mp            # min(p, q)
    t = c - small           # q - p
    if t >= 0:
        p, q = s, s + t
    else:
        p, q = s - t, s
    return p, q


def o4_from_pq(hw: Sequence, p, q) -> BcdPattern:
    """Inverse of o4_pq."""
    label = AlgebraLabel("D", 2)
    lam = validate_highest_weight(label, hw)
    big, small = lam
    p, q = Fraction(p), Fraction(q)
    r_plus, r_minus = big + small, big - small
    if not (0 <= p <= r_plus and 0 <= q <= r_minus):
        raise ValueError(f"(p,q)=({p},{q}) outside [0,{r_plus}]x[0,{r_minus}]")
    mp = big - min(p, q)
    c = small - p + q
    return BcdPattern(label, [(c,), lam], [(), (mp,)])


def gl_pattern_of_block(pattern: BcdPattern) -> "GlPattern":
    """The gl3 pattern carrying the same data as a rank-2 B/C pattern's
    top block: top row = highest weight with a 0 appended, middle row =
    the primed row, bottom row = the level-1 row.  Sigma bits are dropped.
    Family D blocks have no gl shape (the primed row is short)."""
    if pattern.family == "D":
        raise ValueError("family D blocks do not have gl shape")
    if pattern.rank != 2:
        raise ValueError("gl_pattern_of_block needs a rank-2 pattern")
    top = pattern.unprimed[1] + (Fraction(0),)
    return GlPattern([top, pattern.primed[1], pattern.unprimed[0]])


# -- plain gl GT patterns -----------------------------------------------------


class GlPattern:
    """Triangular GT pattern for gl_m: rows top-down of lengths m, ..., 1.

    Entries may be arbitrary rationals as long as rows interlace; the gl
    kernel formulas are rational expressions and are routinely evaluated
    at the half-integer rows coming from family B blocks.  Enumeration is
    only offered over integral patterns.
    """

    __slots__ = ("rows",)

    def __init__(self, rows, validate=True):
        self.rows = tuple(_row(r) for r in rows)
        if validate:
            self.validate()

    @property
    def size(self) -> int:
        return len(self.rows)

    @property
    def hw(self) -> Row:
        return self.rows[0]

    def row(self, level: int) -> Row:
        """Level k = length-k row (level size = top)."""
        return self.rows[self.size - level]

    def validate(self):
        m = len(self.rows)
        for i, row in enumerate(self.rows):
            if len(row) != m - i:
                raise ValueError(f"row {i} has length {len(row)}, expected {m - i}")
        for upper, lower in zip(self.rows, self.rows[1:]):
            for i in range(len(lower)):
                if not upper[i] >= lower[i] >= upper[i + 1]:
                    raise ValueError(f"rows {upper} / {lower} do not interlace")
        return self

    def weight(self) -> Row:
        sums = [Fraction(0)] + [sum(self.row(k)) for k in range(1, self.size + 1)]
        return tuple(sums[k] - sums[k - 1] for k in range(1, self.size + 1))

    def replace_row(self, level: int, row) -> "GlPattern":
        rows = list(self.rows)
        rows[self.size - level] = _row(row)
        return GlPattern(rows, validate=False)

    def is_valid(self) -> bool:
        try:
            self.validate()
            return True
        except ValueError:
            return False

    def sort_key(self):
        return tuple(itertools.chain.from_iterable(self.rows))

    def __eq__(self, other):
        return isinstance(other, GlPattern) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = " ".join("[" + ",".join(str(e) for e in r) + "]" for r in self.rows)
        return f"<gl{self.size} {body}>"


def enumerate_gl(hw: Sequence) -> list[GlPattern]:
    """All GT patterns with the given (integral, non-increasing) top row."""
    lam = _row(hw)
    if any(e.denominator != 1 for e in lam):
        raise ValueError(f"enumerate_gl needs an integral top row, got {lam}")
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise ValueError(f"top row must be non-increasing, got {lam}")

    def below(upper: Row):
        if len(upper) == 1:
            yield [upper]
            return
        ranges = [list(frange(upper[i + 1], upper[i])) for i in range(len(upper) - 1)]
        for lower in itertools.product(*ranges):
            for stack in below(lower):
                yield [upper] + stack

    patterns = [GlPattern(rows, validate=False) for rows in below(lam)]
    return sorted(patterns, key=GlPattern.sort_key)


def max_gl(hw: Sequence) -> GlPattern:
    lam = _row(hw)
    return GlPattern([lam[: len(lam) - i] for i in range(len(lam))])
