"""Exact sparse linear algebra over the rationals.

Everything here works with sparse vectors (dicts mapping column index to a
nonzero value).  Ranks and memberships are decided by an integer row
echelon built with fraction-free eliminations: each incoming row is
reduced against the rows already absorbed, and whatever remains becomes a
new echelon row after clearing the content gcd.  Absorption order is
deterministic (least leading column, then fewest entries, then input
index), so all downstream answers are reproducible.

The echelon optionally tracks how each of its rows combines the input
rows; that is what turns "this vector is in the span" into an explicit
witness, and "it is not" into a certifying functional that vanishes on
the span but not on the vector.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence

SparseVec = Dict[int, int]


def _content(row: dict) -> int:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return 1
    return g


def clear_denominators(vec: dict) -> SparseVec:
    """Scale a rational sparse vector to a primitive integer one."""
    if not vec:
        return {}
    lcm = 1
    for v in vec.values():
        f = Fraction(v)
        lcm = lcm * f.denominator // gcd(lcm, f.denominator)
    out = {c: int(Fraction(v) * lcm) for c, v in vec.items() if v != 0}
    g = _content(out)
    if g > 1:
        out = {c: v // g for c, v in out.items()}
    return out


class Echelon:
    """Integer row echelon with deterministic absorption.

    rows[i] is a primitive integer sparse row whose least column is
    pivots_of[i] and whose pivot entry is positive; pivot_row maps that
    column back to i.  When tracking, combos[i] holds rational input-row
    coefficients with rows[i] = sum combos[i][tag] * input_tag.
    """

    def __init__(self, track: bool = False):
        self.rows: List[SparseVec] = []
        self.pivots_of: List[int] = []
        self.pivot_row: Dict[int, int] = {}
        self.track = track
        self.combos: List[Dict[int, Fraction]] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def absorb(self, row: dict, tag: Optional[int] = None) -> bool:
        """Reduce `row` against the echelon; add the remainder if nonzero.

        Returns True when the row added rank.  `tag` names the input row
        in tracked combinations.
        """
        if self.track:
            return self._absorb_tracked(row, tag)
        work = clear_denominators(row)
        while work:
            col = min(work)
            i = self.pivot_row.get(col)
            if i is None:
                break
            piv = self.rows[i]
            a, b = piv[col], work[col]
            g = gcd(a, b)
            mw, mp = a // g, b // g
            if mw != 1:
                for c in list(work):
                    work[c] *= mw
            for c, v in piv.items():
                nv = work.get(c, 0) - mp * v
                if nv:
                    work[c] = nv
                else:
                    work.pop(c, None)
            g = _content(work)
            if g > 1:
                for c in list(work):
                    work[c] //= g
        if not work:
            return False
        self._push(work)
        return True

    def _absorb_tracked(self, row: dict, tag) -> bool:
        work = {c: Fraction(v) for c, v in row.items() if v != 0}
        if tag is None:
            tag = -1 - len(self.rows)
        combo: Dict[int, Fraction] = {tag: Fraction(1)} if work else {}
        while work:
            col = min(work)
            i = self.pivot_row.get(col)
            if i is None:
                break
            piv = self.rows[i]
            q = work[col] / piv[col]
            for c, v in piv.items():
                nv = work.get(c, Fraction(0)) - q * v
                if nv:
                    work[c] = nv
                else:
                    work.pop(c, None)
            for j, t in self.combos[i].items():
                nv = combo.get(j, Fraction(0)) - q * t
                if nv:
                    combo[j] = nv
                else:
                    combo.pop(j, None)
        if not work:
            return False
        prim = clear_denominators(work)
        col = min(prim)
        sign = -1 if prim[col] < 0 else 1
        scale = Fraction(sign * prim[col]) / work[col]
        self.combos.append({j: t * scale for j, t in combo.items()})
        self._push(prim)
        return True

    def _push(self, prim: SparseVec):
        col = min(prim)
        if prim[col] < 0:
            prim = {c: -v for c, v in prim.items()}
        self.pivot_row[col] = len(self.rows)
        self.rows.append(prim)
        self.pivots_of.append(col)

    def residue(self, vec: dict) -> Dict[int, Fraction]:
        """The remainder of `vec` after eliminating all pivot columns."""
        work = {c: Fraction(v) for c, v in vec.items() if v != 0}
        while True:
            hit = [c for c in work if c in self.pivot_row]
            if not hit:
                return work
            col = min(hit)
            piv = self.rows[self.pivot_row[col]]
            q = work[col] / piv[col]
            for c, v in piv.items():
                nv = work.get(c, Fraction(0)) - q * v
                if nv:
                    work[c] = nv
                else:
                    work.pop(c, None)

    def coordinates(self, vec: dict) -> Optional[Dict[int, Fraction]]:
        """Input-row coefficients expressing `vec`, or None if outside the span.

        Requires tracking.  Returns {input tag: coefficient} with
        vec = sum coeff * input_row.
        """
        assert self.track, "coordinates need a tracked echelon"
        work = {c: Fraction(v) for c, v in vec.items() if v != 0}
        out: Dict[int, Fraction] = {}
        while work:
            col = min(work)
            i = self.pivot_row.get(col)
            if i is None:
                return None
            piv = self.rows[i]
            q = work[col] / piv[col]
            for c, v in piv.items():
                nv = work.get(c, Fraction(0)) - q * v
                if nv:
                    work[c] = nv
                else:
                    work.pop(c, None)
            for j, t in self.combos[i].items():
                nv = out.get(j, Fraction(0)) + q * t
                if nv:
                    out[j] = nv
                else:
                    out.pop(j, None)
        return out

    def annihilator(self, vec: dict) -> Optional[Dict[int, Fraction]]:
        """A functional y with y(row) = 0 for every echelon row, y(vec) != 0.

        Returns None when vec lies in the span.  y is sparse: it is 1 on
        one non-pivot column of the residue and supported elsewhere only
        on pivot columns.
        """
        res = self.residue(vec)
        if not res:
            return None
        col = min(res)
        y: Dict[int, Fraction] = {col: Fraction(1)}
        # fix the dot product with each echelon row, largest pivot first;
        # rows with larger pivots vanish on all earlier columns, so each
        # adjustment is final
        for p in sorted(self.pivot_row, reverse=True):
            row = self.rows[self.pivot_row[p]]
            d = sum(y[c] * row[c] for c in y if c in row)
            if d:
                y[p] = y.get(p, Fraction(0)) - d / row[p]
        return y


def echelon_of_rows(rows: Sequence[dict], track: bool = False) -> Echelon:
    """Deterministic echelon of the given rows (tags are input positions)."""
    order = sorted(range(len(rows)),
                   key=lambda i: (min(rows[i]) if rows[i] else -1, len(rows[i]), i))
    ech = Echelon(track=track)
    for i in order:
        if rows[i]:
            ech.absorb(rows[i], tag=i)
    return ech


def rank_of_rows(rows: Sequence[dict]) -> int:
    return echelon_of_rows(rows).rank


def solve_exact(rows: Sequence[dict], target: dict) -> Optional[Dict[int, Fraction]]:
    """Coefficients c with sum c[i] * rows[i] = target, or None.

    Deterministic: the absorption order prefers least input indices.
    """
    ech = echelon_of_rows(rows, track=True)
    return ech.coordinates(target)
