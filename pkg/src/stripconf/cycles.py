"""Generator cycles: wheels, filters, averaged-filters, and their products.

A wheel is the cycle obtained by repeatedly splitting a point with spin
maps; the split recipe is a binary tree over the disk labels.  The proper
wheel W(i1,...,in) is the left comb peeling the last entry at every step.
Splitting a segment of total weights u, v contributes the two orders
(u-part v-part) with coefficient 1 and (v-part u-part) with coefficient
(-1)^{uv-1}, so for example W(2,1) is the chain `2 1` + `1 2`.

A filter on wheels W1,...,Wm is the image of the boundary Z of the top
permutohedron cell on the wheels (one superlabel per wheel, weighted by
disk count) under the identity inclusion followed by the spin expansions;
the averaged variant routes Z through the block-averaging inclusion q
instead.  On two wheels the filter is normalized to the display form

    F(W1, W2) = W1|W2 + (-1)^{(n1-1)(n2-1)+1} W2|W1,

and the averaged filter on two wheels equals the filter.  A filter is
admissible at width w when every sum of all-but-one wheel sizes is at most
w, and trivial exactly when the total size is at most w.

Generator words (concatenations of proper wheels and averaged filters) are
written `W(3,1)|AF(W(2),W(5,4))`; whitespace is ignored.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Optional, Sequence, Union

from .cells import ORDERED, ComplexSpec, cell_complex, wsgn_pairs
from .chains import ChainVector, boundary, concat, is_cycle


# ---------------------------------------------------------------------------
# wheel trees


@dataclass(frozen=True)
class Leaf:
    label: int


@dataclass(frozen=True)
class Node:
    left: "WheelTree"
    right: "WheelTree"


WheelTree = Union[Leaf, Node]


def comb(labels: Sequence[int]) -> WheelTree:
    """Left comb over the labels: the proper-wheel split recipe."""
    labels = tuple(labels)
    if not labels:
        raise ValueError("a wheel needs at least one disk")
    tree: WheelTree = Leaf(labels[0])
    for a in labels[1:]:
        tree = Node(tree, Leaf(a))
    return tree


def tree_labels(tree: WheelTree) -> tuple:
    if isinstance(tree, Leaf):
        return (tree.label,)
    return tree_labels(tree.left) + tree_labels(tree.right)


def tree_weight(tree: WheelTree, weight_of=None) -> int:
    if weight_of is None:
        return len(tree_labels(tree))
    return sum(weight_of(a) for a in tree_labels(tree))


def is_left_comb(tree: WheelTree) -> bool:
    while isinstance(tree, Node):
        if not isinstance(tree.right, Leaf):
            return False
        tree = tree.left
    return True


# ---------------------------------------------------------------------------
# word-level factors


@dataclass(frozen=True)
class Wheel:
    """A wheel presented by its label sequence; proper iff largest label first."""

    labels: tuple

    def __post_init__(self):
        if not self.labels:
            raise ValueError("empty wheel")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("wheel labels must be distinct")

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def top(self) -> int:
        return max(self.labels)

    def is_proper(self) -> bool:
        return self.labels[0] == self.top

    def tree(self) -> WheelTree:
        return comb(self.labels)

    def rank_key(self) -> tuple:
        """More disks ranks higher; ties broken by larger top label."""
        return (self.size, self.top)

    def __str__(self):
        return "W(" + ",".join(str(a) for a in self.labels) + ")"


@dataclass(frozen=True)
class Filter:
    wheels: tuple

    def __post_init__(self):
        if len(self.wheels) < 2:
            raise ValueError("a filter needs at least two wheels")
        seen = set()
        for w in self.wheels:
            if seen & set(w.labels):
                raise ValueError("filter wheels must have disjoint labels")
            seen |= set(w.labels)

    @property
    def arity(self) -> int:
        return len(self.wheels)

    @property
    def sizes(self) -> tuple:
        return tuple(w.size for w in self.wheels)

    @property
    def total(self) -> int:
        return sum(self.sizes)

    def least_wheel(self) -> Wheel:
        return min(self.wheels, key=Wheel.rank_key)

    def admissible(self, width: int) -> bool:
        return all(self.total - n <= width for n in self.sizes)

    def trivial(self, width: int) -> bool:
        return self.total <= width

    def labels(self) -> tuple:
        return tuple(sorted(a for w in self.wheels for a in w.labels))

    def __str__(self):
        return "F(" + ",".join(str(w) for w in self.wheels) + ")"


@dataclass(frozen=True)
class AvgFilter(Filter):
    def __str__(self):
        return "AF(" + ",".join(str(w) for w in self.wheels) + ")"


@dataclass(frozen=True)
class FilterSpec:
    """A filter recipe: ordered wheels plus the averaged flag."""

    wheels: tuple
    averaged: bool = False

    def sizes(self, weight_of=None) -> tuple:
        return tuple(tree_weight(_as_tree(w), weight_of) for w in self.wheels)

    def admissible(self, width: int) -> bool:
        sizes = self.sizes()
        return all(sum(sizes) - n <= width for n in sizes)

    def trivial(self, width: int) -> bool:
        return sum(self.sizes()) <= width


@dataclass(frozen=True)
class GeneratorWord:
    """Concatenation of proper wheels and averaged filters, left to right."""

    factors: tuple

    def __post_init__(self):
        seen = set()
        for f in self.factors:
            fl = set(f.labels) if isinstance(f, Wheel) else set(f.labels())
            if seen & fl:
                raise ValueError("word factors must have disjoint labels")
            seen |= fl

    def labels(self) -> tuple:
        out = []
        for f in self.factors:
            out.extend(f.labels if isinstance(f, Wheel) else f.labels())
        return tuple(sorted(out))

    def degree(self) -> int:
        d = 0
        for f in self.factors:
            d += f.size - 1 if isinstance(f, Wheel) else f.total - 2
        return d

    def __str__(self):
        return "|".join(str(f) for f in self.factors) if self.factors else "1"


def _as_tree(w) -> WheelTree:
    if isinstance(w, (Leaf, Node)):
        return w
    if isinstance(w, Wheel):
        return comb(w.labels)
    return comb(tuple(w))


# ---------------------------------------------------------------------------
# cycle construction


def _segment_chain(tree: WheelTree, weight_of=None) -> dict:
    """Single-block segment chain of a wheel tree: {label tuple: coefficient}."""
    if isinstance(tree, Leaf):
        return {(tree.label,): 1}
    left = _segment_chain(tree.left, weight_of)
    right = _segment_chain(tree.right, weight_of)
    wl = tree_weight(tree.left, weight_of)
    wr = tree_weight(tree.right, weight_of)
    flip = -1 if (wl * wr - 1) % 2 == 1 else 1
    out: dict = {}
    for s, c in left.items():
        for t, d in right.items():
            out[s + t] = out.get(s + t, 0) + c * d
            out[t + s] = out.get(t + s, 0) + c * d * flip
    return out


@lru_cache(maxsize=4096)
def _wheel_cycle_cached(tree: WheelTree, width: Optional[int], weights: Optional[tuple]):
    labels = tree_labels(tree)
    weight_of = (lambda a: 1) if weights is None else dict(zip(labels, weights)).__getitem__
    total = tree_weight(tree, weight_of)
    if width is not None and total > width:
        raise ValueError(f"wheel of total weight {total} does not fit in width {width}")
    spec = cell_complex(labels, width,
                        None if weights is None else {a: weight_of(a) for a in labels})
    coeffs = {(seg,): c for seg, c in _segment_chain(tree, weight_of).items()}
    chain = ChainVector(spec, len(labels) - 1, coeffs, validate=True)
    assert is_cycle(chain)
    return chain


def wheel_cycle(wheel, width: Optional[int], weights: Optional[dict] = None) -> ChainVector:
    """The wheel cycle of a split tree (or proper label sequence) at this width."""
    tree = _as_tree(wheel)
    wt = None
    if weights is not None:
        wt = tuple(weights[a] for a in tree_labels(tree))
    return _wheel_cycle_cached(tree, width, wt)


def _arranged_faces(sizes: tuple, averaged: bool, min_block: int = 1):
    """Faces of the boundary of the top permutohedron cell on `sizes` wheels.

    Yields (ordered position blocks, rational coefficient).  Positions are
    0..m-1; a face is an ordered pair of complementary blocks.  With
    `averaged` the orderings of each block are signed-averaged, otherwise
    blocks stay ascending (identity inclusion).  `min_block` restricts to
    faces whose blocks both hold at least that many positions.
    """
    m = len(sizes)
    size_of = lambda p: sizes[p]
    positions = tuple(range(m))
    for r in range(min_block, m - min_block + 1):
        for first in itertools.combinations(positions, r):
            rest = tuple(p for p in positions if p not in first)
            zc = wsgn_pairs(positions, first + rest, size_of)
            if sum(sizes[p] for p in first) % 2 == 1:
                zc = -zc
            if not averaged:
                yield (first, rest), Fraction(zc)
                continue
            denom = factorial(len(first)) * factorial(len(rest))
            for p1 in itertools.permutations(first):
                s1 = wsgn_pairs(first, p1, size_of)
                for p2 in itertools.permutations(rest):
                    s2 = wsgn_pairs(rest, p2, size_of)
                    yield (p1, p2), Fraction(zc * s1 * s2, denom)


def _expand_word_blocks(blocks, coeff, segments, out):
    """Substitute wheel segment chains for positions inside ordered blocks."""
    partial = [((), coeff)]
    sym = []
    for block in blocks:
        block_terms = [((), 1)]
        for p in block:
            block_terms = [
                (seg + s2, c1 * c2)
                for seg, c1 in block_terms
                for s2, c2 in segments[p].items()
            ]
        partial = [
            (cells + (seg,), c1 * c2)
            for cells, c1 in partial
            for seg, c2 in block_terms
        ]
    for cells, c in partial:
        if c != 0:
            out[cells] = out.get(cells, 0) + c
    return out


def _filter_chain(wheels: tuple, width: Optional[int], averaged: bool) -> ChainVector:
    trees = tuple(_as_tree(w) for w in wheels)
    sizes = tuple(tree_weight(t) for t in trees)
    total = sum(sizes)
    if width is not None:
        for n in sizes:
            if total - n > width:
                raise ValueError(
                    f"inadmissible filter: wheel sizes {sizes} at width {width}")
    segments = [_segment_chain(t) for t in trees]
    out: dict = {}
    for blocks, coeff in _arranged_faces(sizes, averaged):
        _expand_word_blocks(blocks, coeff, segments, out)
    labels = tuple(sorted(a for t in trees for a in tree_labels(t)))
    spec = cell_complex(labels, width)
    chain = ChainVector(spec, total - 2, {c: v for c, v in out.items() if v != 0},
                        validate=True)
    assert is_cycle(chain)
    return chain


@lru_cache(maxsize=4096)
def _filter_cycle_cached(trees: tuple, width: Optional[int], averaged: bool) -> ChainVector:
    if len(trees) == 2 and not averaged:
        # display normalization on two wheels
        n1, n2 = (tree_weight(t) for t in trees)
        w1 = _wheel_cycle_cached(trees[0], width, None)
        w2 = _wheel_cycle_cached(trees[1], width, None)
        sign = -1 if ((n1 - 1) * (n2 - 1) + 1) % 2 == 1 else 1
        chain = concat(w1, w2) + concat(w2, w1).scale(sign)
        assert is_cycle(chain)
        return chain
    return _filter_chain(trees, width, averaged)


def filter_cycle(f, width: Optional[int] = None) -> ChainVector:
    """Filter cycle; `f` is a FilterSpec or a sequence of wheels."""
    if isinstance(f, FilterSpec):
        wheels, averaged = f.wheels, f.averaged
    else:
        wheels, averaged = tuple(f), False
    trees = tuple(_as_tree(w) for w in wheels)
    if len(trees) < 2:
        raise ValueError("a filter needs at least two wheels")
    if averaged and len(trees) == 2:
        averaged = False  # the averaged filter on two wheels is the filter
    return _filter_cycle_cached(trees, width, averaged)


def averaged_filter_cycle(f, width: Optional[int] = None) -> ChainVector:
    if isinstance(f, FilterSpec):
        f = FilterSpec(f.wheels, averaged=True)
    else:
        f = FilterSpec(tuple(f), averaged=True)
    return filter_cycle(f, width)


def word_cycle(word: GeneratorWord, width: Optional[int]) -> ChainVector:
    """Concatenation of the factor cycles, left to right; empty word gives the unit."""
    chains = []
    for f in word.factors:
        if isinstance(f, Wheel):
            chains.append(wheel_cycle(f, width))
        elif isinstance(f, AvgFilter):
            chains.append(averaged_filter_cycle(f.wheels, width))
        elif isinstance(f, Filter):
            chains.append(filter_cycle(f.wheels, width))
        else:
            raise TypeError(f"unknown word factor {f!r}")
    result = None
    for ch in chains:
        result = ch if result is None else concat(result, ch)
    if result is None:
        return ChainVector(cell_complex((), width), 0, {(): 1})
    assert is_cycle(result)
    return result


# ---------------------------------------------------------------------------
# word grammar


class WordSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def parse_word(text: str) -> GeneratorWord:
    """Parse `W(3,1)|AF(W(2),W(5,4))`; whitespace-insensitive."""
    compact = "".join(text.split())
    if not compact:
        return GeneratorWord(())
    pos = 0
    factors = []

    def expect(tok: str):
        nonlocal pos
        if not compact.startswith(tok, pos):
            raise WordSyntaxError(f"expected {tok!r}", pos)
        pos += len(tok)

    def parse_int() -> int:
        nonlocal pos
        start = pos
        while pos < len(compact) and compact[pos].isdigit():
            pos += 1
        if start == pos:
            raise WordSyntaxError("expected a label", pos)
        return int(compact[start:pos])

    def parse_wheel() -> Wheel:
        expect("W(")
        labels = [parse_int()]
        while pos < len(compact) and compact[pos] == ",":
            expect(",")
            labels.append(parse_int())
        expect(")")
        return Wheel(tuple(labels))

    while True:
        if compact.startswith("AF(", pos):
            start = pos
            expect("AF(")
            wheels = [parse_wheel()]
            while pos < len(compact) and compact[pos] == ",":
                expect(",")
                wheels.append(parse_wheel())
            expect(")")
            try:
                factors.append(AvgFilter(tuple(wheels)))
            except ValueError as e:
                raise WordSyntaxError(str(e), start)
        elif compact.startswith("W(", pos):
            factors.append(parse_wheel())
        else:
            raise WordSyntaxError("expected W(...) or AF(...)", pos)
        if pos == len(compact):
            break
        expect("|")
    try:
        return GeneratorWord(tuple(factors))
    except ValueError as e:
        raise WordSyntaxError(str(e), 0)


def format_word(word: GeneratorWord) -> str:
    return str(word)
