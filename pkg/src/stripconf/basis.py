"""Homology bases of the ordered complexes from wheels and filters.

Two named bases for H_k of the ordered complex on n unit disks at width w,
both made of generator words on all n labels (factors use disjoint labels
and every label appears):

"am" words concatenate proper wheels and nontrivial plain filters.
  1. wheels inside a filter on three or more wheels appear in increasing
     order of largest label;
  2. wheels inside a two-wheel filter appear in increasing rank;
  3. adjacent bare wheels strictly decrease in rank;
  4. a bare wheel immediately left of a filter outranks the filter's
     least wheel.

"amw" words concatenate proper wheels and nontrivial averaged filters on
three or more wheels.
  1. wheels inside an averaged filter appear in increasing rank;
  2. for adjacent bare wheels, either the left one outranks the right
     one or their sizes sum to more than the width;
  3. a bare wheel immediately left of an averaged filter outranks the
     filter's least wheel.

Rank compares (size, largest label); with disjoint labels it never ties.
All filters appearing in words must be admissible at the width (every
all-but-one sum of wheel sizes fits) and nontrivial (the total does not).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .cells import cell_complex, cell_index, enumerate_cells, wsgn_pairs
from .chains import ChainVector, is_cycle
from .cycles import AvgFilter, Filter, GeneratorWord, Wheel, word_cycle
from .homology import betti_number, express, image_echelon
from .linalg import Echelon

AM = "am"
AMW = "amw"


def _proper_wheels_on(support: tuple) -> List[Wheel]:
    if len(support) == 1:
        return [Wheel(support)]
    top = max(support)
    rest = tuple(a for a in support if a != top)
    return [Wheel((top,) + p) for p in itertools.permutations(rest)]


def _set_partitions(items: tuple, parts: int):
    """Unordered partitions of items into exactly `parts` nonempty blocks."""
    if parts == 1:
        yield (items,)
        return
    if len(items) < parts:
        return
    first, rest = items[0], items[1:]
    # first goes alone
    for p in _set_partitions(rest, parts - 1):
        yield ((first,),) + p
    # first joins a block
    for p in _set_partitions(rest, parts):
        for i in range(len(p)):
            yield p[:i] + (((first,) + p[i]),) + p[i + 1:]


def _filters_on(support: tuple, width: int, style: str) -> list:
    """All basis-legal filters using exactly these labels."""
    out = []
    n = len(support)
    min_arity = 2 if style == AM else 3
    for m in range(min_arity, n + 1):
        for blocks in _set_partitions(support, m):
            sizes = [len(b) for b in blocks]
            total = sum(sizes)
            if total <= width:
                continue  # trivial
            if any(total - s > width for s in sizes):
                continue  # inadmissible
            for wheels in itertools.product(*[_proper_wheels_on(b) for b in blocks]):
                if style == AMW or m == 2:
                    ordered = tuple(sorted(wheels, key=Wheel.rank_key))
                else:
                    ordered = tuple(sorted(wheels, key=lambda w: w.top))
                out.append(AvgFilter(ordered) if style == AMW else Filter(ordered))
    # distinct recipes only; ordering made some partitions collide
    return sorted(set(out), key=str)


def _adjacency_ok(prev, nxt, width: int, style: str) -> bool:
    if isinstance(prev, Filter):
        return True  # nothing is required to the right of a filter
    if isinstance(nxt, Wheel):
        if prev.rank_key() > nxt.rank_key():
            return True
        return style == AMW and prev.size + nxt.size > width
    return prev.rank_key() > nxt.least_wheel().rank_key()


def enumerate_basis(labels, width: int, degree: int, style: str = AMW,
                    ) -> Tuple[GeneratorWord, ...]:
    """All basis words of this degree, in a fixed deterministic order."""
    if isinstance(labels, int):
        labels = tuple(range(1, labels + 1))
    labels = tuple(sorted(labels))
    assert style in (AM, AMW)
    n = len(labels)
    words: List[GeneratorWord] = []

    factors_cache: Dict[tuple, list] = {}

    def factors_on(support: tuple) -> list:
        if support not in factors_cache:
            fs = []
            if len(support) <= width:
                fs.extend(_proper_wheels_on(support))
            fs.extend(_filters_on(support, width, style))
            factors_cache[support] = fs
        return factors_cache[support]

    def extend(remaining: tuple, prev, factors: tuple, deg_left: int):
        if not remaining:
            if deg_left == 0:
                words.append(GeneratorWord(factors))
            return
        if deg_left < 0 or deg_left > len(remaining) - 1:
            return
        # the next factor may use any of the remaining labels; the factor
        # sequence is the word, so every choice order is a different word
        for r in range(1, len(remaining) + 1):
            for support in itertools.combinations(remaining, r):
                left = tuple(a for a in remaining if a not in support)
                for f in factors_on(support):
                    if prev is not None and not _adjacency_ok(prev, f, width, style):
                        continue
                    d = f.size - 1 if isinstance(f, Wheel) else f.total - 2
                    extend(left, f, factors + (f,), deg_left - d)

    extend(labels, None, (), degree)
    return tuple(sorted(words, key=lambda w: (_word_class(w), str(w))))


def _word_class(word: GeneratorWord) -> int:
    """0 = bare wheels in strictly decreasing rank, 1 = bare wheels with an
    inversion, 2 = the word contains a filter."""
    if any(isinstance(f, Filter) for f in word.factors):
        return 2
    ranks = [f.rank_key() for f in word.factors]
    return 0 if all(a > b for a, b in zip(ranks, ranks[1:])) else 1


def _pair_level(word: GeneratorWord) -> int:
    """Grading for the top-degree pairing, on either basis style.

    Bare words in strictly decreasing rank sit at 0, bare words with an
    inversion at 1, and a single filter on m wheels at m - 1.  Expanding
    an averaged-filter word in the plain-filter basis only drops levels.
    """
    if len(word.factors) == 1 and isinstance(word.factors[0], Filter):
        return word.factors[0].arity - 1
    return _word_class(word)


_word_cycle_cache: Dict[tuple, ChainVector] = {}


def basis_cycle(word: GeneratorWord, width: int) -> ChainVector:
    key = (word, width)
    if key not in _word_cycle_cache:
        _word_cycle_cache[key] = word_cycle(word, width)
    return _word_cycle_cache[key]


@dataclass(frozen=True)
class BasisReport:
    labels: tuple
    width: int
    degree: int
    style: str
    count: int
    betti: int
    independent: bool

    @property
    def ok(self) -> bool:
        return self.count == self.betti and self.independent

    def __str__(self):
        verdict = "ok" if self.ok else "MISMATCH"
        return (f"{self.style} basis at degree {self.degree}, width {self.width}: "
                f"{self.count} words vs betti {self.betti}, "
                f"independent={self.independent} [{verdict}]")


def verify_basis(labels, width: int, degree: int, style: str = AMW,
                 cache_dir=None) -> BasisReport:
    """Count the basis words against betti and check independence.

    Independence is checked modulo boundaries: the word cycles are reduced
    against the image echelon and must stay linearly independent.
    """
    if isinstance(labels, int):
        labels = tuple(range(1, labels + 1))
    labels = tuple(sorted(labels))
    words = enumerate_basis(labels, width, degree, style)
    spec = cell_complex(labels, width)
    b = betti_number(spec, degree, cache_dir=cache_dir)
    ech = image_echelon(spec, degree, cache_dir=cache_dir)
    index = cell_index(spec, degree)
    small = Echelon()
    independent = True
    for w in words:
        cyc = basis_cycle(w, width)
        assert cyc.spec == spec and cyc.degree == degree
        res = ech.residue(cyc.to_column(index))
        if not res or not small.absorb(res):
            independent = False
            break
    return BasisReport(labels, width, degree, style,
                       len(words), b, independent)


# ---------------------------------------------------------------------------
# change of basis


@dataclass(frozen=True)
class BasisChange:
    labels: tuple
    width: int
    degree: int
    amw_words: tuple
    am_words: tuple
    matrix: tuple  # rows follow amw_words, columns follow am_words
    triangular: Optional[bool]  # None when the pairing does not apply

    def __str__(self):
        lines = [f"change of basis at degree {self.degree}, width {self.width}"]
        for w, row in zip(self.amw_words, self.matrix):
            terms = " + ".join(f"({c})*{a}" for c, a in zip(row, self.am_words) if c)
            lines.append(f"  {w} = {terms if terms else '0'}")
        if self.triangular is not None:
            lines.append(f"  triangular with unit diagonal: {self.triangular}")
        return "\n".join(lines)


def _am_partner(word: GeneratorWord) -> Optional[GeneratorWord]:
    """The am word matching an amw word under the top-degree pairing.

    Bare words in strictly decreasing rank are their own partners; a
    two-wheel word with an inversion pairs with the two-wheel filter on
    the same wheels; a single averaged filter pairs with the plain filter
    on the same wheels reordered by largest label.  The pairing sign is
    the weighted sign of that reordering at the wheel sizes.
    """
    cls = _word_class(word)
    if cls == 0:
        return word
    if cls == 1:
        if len(word.factors) != 2:
            return None
        ordered = tuple(sorted(word.factors, key=Wheel.rank_key))
        return GeneratorWord((Filter(ordered),))
    if len(word.factors) != 1:
        return None
    af = word.factors[0]
    reordered = tuple(sorted(af.wheels, key=lambda w: w.top))
    return GeneratorWord((Filter(reordered),))


def _pairing_sign(word: GeneratorWord) -> int:
    if _word_class(word) != 2:
        return 1
    af = word.factors[0]
    tops = tuple(sorted(w.top for w in af.wheels))
    src = tuple(w.top for w in af.wheels)
    size_of = {w.top: w.size for w in af.wheels}
    return wsgn_pairs(tuple(sorted(src)), src, size_of.__getitem__) * \
        wsgn_pairs(tuple(sorted(tops)), tops, size_of.__getitem__)


def basis_change(labels, width: int, degree: int, cache_dir=None) -> BasisChange:
    """Expand each amw basis word in the am basis.

    At the top interesting degree (#labels - 2) the words pair off and the
    matrix is block-triangular with that pairing on the diagonal: bare
    words are fixed, inverted two-wheel words open into two-wheel filters,
    and averaged filters expand as the plain filter plus two-wheel
    corrections.
    """
    if isinstance(labels, int):
        labels = tuple(range(1, labels + 1))
    labels = tuple(sorted(labels))
    amw_words = enumerate_basis(labels, width, degree, AMW)
    am_words = enumerate_basis(labels, width, degree, AM)
    am_cycles = [basis_cycle(w, width) for w in am_words]
    rows = []
    for w in amw_words:
        result = express(basis_cycle(w, width), am_cycles, cache_dir=cache_dir)
        assert result.ok, f"{w} is not an am combination"
        rows.append(result.coefficients)
    triangular: Optional[bool] = None
    if degree == len(labels) - 2 and amw_words:
        triangular = len(amw_words) == len(am_words)
        col_of = {a: j for j, a in enumerate(am_words)}
        level = {a: _pair_level(a) for a in am_words}
        for w, row in zip(amw_words, rows):
            if triangular is False:
                break
            partner = _am_partner(w)
            if partner is None or partner not in col_of:
                triangular = False
                break
            if row[col_of[partner]] != _pairing_sign(w):
                triangular = False
                break
            for j, c in enumerate(row):
                if c and j != col_of[partner] and level[am_words[j]] >= _pair_level(w):
                    triangular = False
                    break
    return BasisChange(labels, width, degree, amw_words, am_words,
                       tuple(tuple(r) for r in rows), triangular)
