"""Cells of the strip complexes.

Two families of complexes share one enumeration engine:

* ordered-block complexes cell(A, W, w): a cell is a sequence of bars
  splitting an ordering of the label set A into nonempty blocks, every
  block carrying total weight at most w;
* weighted permutohedra P(A, W, w): the same data with the order inside
  each block forgotten (blocks are stored ascending, the block sequence
  still matters).

Labels are positive integers (arbitrary, not necessarily 1..n, so that
concatenation of disjoint configurations needs no relabeling).  Weights
are positive integers.  A cell is represented as a tuple of tuples of
labels, e.g. ((2, 4), (3, 5, 1)) for the symbol `2 4|3 5 1`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Sequence

Label = int
Block = tuple
CellSym = tuple

_INT64_MAX = 2**63 - 1

ORDERED = "cell"
PERMUTOHEDRON = "perm"

# Descriptor of the sign and ordering conventions baked into this module
# and chains.py.  It is hashed into cache keys so that stale matrices are
# never reused across convention changes.
CONVENTIONS = (
    "block-split boundary (-1)^{wlength(e1)} * wsgn(b -> e1 e2); "
    "Leibniz sign (-1)^{sum wdim of blocks left}; "
    "facets by (block, split size, lex mask); "
    "canonical cell order (block sizes, flattened labels); "
    "permutohedron blocks ascending"
)


@dataclass(frozen=True)
class ComplexSpec:
    """A chain-complex universe: label set, weights, width, block-order kind."""

    kind: str
    labels: tuple
    weights: tuple
    width: Optional[int]

    def __post_init__(self):
        if self.kind not in (ORDERED, PERMUTOHEDRON):
            raise ValueError(f"unknown complex kind {self.kind!r}")
        if tuple(sorted(self.labels)) != self.labels:
            raise ValueError("labels must be sorted")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("labels must be distinct")
        if len(self.weights) != len(self.labels):
            raise ValueError("weights must align with labels")
        for a in self.labels:
            if isinstance(a, int) and not (1 <= a <= _INT64_MAX):
                raise ValueError(f"label {a} out of range")
        for w in self.weights:
            if not (1 <= w <= _INT64_MAX):
                raise ValueError(f"weight {w} out of range")
        if self.width is not None and not (1 <= self.width <= _INT64_MAX):
            raise ValueError(f"width {self.width} out of range")

    @property
    def n(self) -> int:
        return len(self.labels)

    def weight(self, label) -> int:
        return _weight_map(self)[label]

    def total_weight(self) -> int:
        return sum(self.weights)

    def top_degree(self) -> int:
        """Largest topological dimension with any cells (n - min block count).

        Returns -1 when no admissible cell exists (a single weight already
        exceeds the width).
        """
        if self.n == 0:
            return 0
        if self.width is None:
            return self.n - 1
        if max(self.weights) > self.width:
            return -1
        blocks = _min_blocks(tuple(sorted(self.weights, reverse=True)), self.width)
        return self.n - blocks

    def describe(self) -> str:
        ws = " ".join(f"{a}:{w}" for a, w in zip(self.labels, self.weights))
        width = "inf" if self.width is None else self.width
        return f"{self.kind}({ws}; w={width})"


@lru_cache(maxsize=None)
def _min_blocks(weights_desc: tuple, width: int) -> int:
    # exact minimum number of width-w blocks covering these weights; the
    # label sets in play are small (n <= 8) so branch and bound suffices
    best = len(weights_desc)

    def search(remaining: tuple, used: int, lower: int):
        nonlocal best
        if used + max(1 if remaining else 0, -(-sum(remaining) // width)) >= best:
            return
        if not remaining:
            best = min(best, used)
            return
        head, rest = remaining[0], remaining[1:]
        # head joins a fresh block together with any subset of the rest
        indices = range(len(rest))
        for r in range(len(rest), -1, -1):
            for combo in itertools.combinations(indices, r):
                chosen = [rest[i] for i in combo]
                if head + sum(chosen) > width:
                    continue
                left = tuple(rest[i] for i in indices if i not in combo)
                search(left, used + 1, lower)
        return

    search(weights_desc, 0, 0)
    return max(best, 1)


@lru_cache(maxsize=None)
def _weight_map(spec: ComplexSpec) -> dict:
    return dict(zip(spec.labels, spec.weights))


def cell_complex(labels, width: Optional[int], weights=None) -> ComplexSpec:
    """Ordered-block complex cell(A, W, w).  `labels` may be an int n for 1..n."""
    labels, weights = _normalize(labels, weights)
    return ComplexSpec(ORDERED, labels, weights, width)


def permutohedron(labels, width: Optional[int], weights=None) -> ComplexSpec:
    """Weighted permutohedron P(A, W, w) with blocks stored ascending."""
    labels, weights = _normalize(labels, weights)
    return ComplexSpec(PERMUTOHEDRON, labels, weights, width)


def _normalize(labels, weights):
    if isinstance(labels, int):
        labels = tuple(range(1, labels + 1))
    else:
        labels = tuple(sorted(labels))
    if weights is None:
        weights = (1,) * len(labels)
    elif isinstance(weights, dict):
        weights = tuple(weights[a] for a in labels)
    else:
        weights = tuple(weights)
    return labels, weights


# ---------------------------------------------------------------------------
# dimensions and signs


def wlength(block: Sequence, spec: ComplexSpec) -> int:
    return sum(spec.weight(a) for a in block)


def wdim(cell: CellSym, spec: ComplexSpec) -> int:
    """Weighted dimension: sum over blocks of (wlength - 1).  Sign bookkeeping."""
    return sum(wlength(b, spec) - 1 for b in cell)


def top_dim(cell: CellSym) -> int:
    """Topological dimension: #labels - #blocks.  The homological grading."""
    return sum(len(b) - 1 for b in cell)


def wsgn_pairs(source: Sequence, target: Sequence, weight_of) -> int:
    """Weighted sign of the permutation rearranging `source` into `target`.

    The sign of a transposition of elements a, b is (-1)^{w_a w_b}, so the
    full sign is the parity of sum w_a*w_b over pairs that invert.  Only
    odd-weight elements contribute, which makes this the classical sign of
    the permutation restricted to odd-weight entries.
    """
    assert sorted(source, key=repr) == sorted(target, key=repr)
    pos = {a: i for i, a in enumerate(target)}
    odd = [pos[a] for a in source if weight_of(a) % 2 == 1]
    sign = 1
    for i in range(len(odd)):
        for j in range(i + 1, len(odd)):
            if odd[i] > odd[j]:
                sign = -sign
    return sign


def wsgn(source: Sequence, target: Sequence, spec: ComplexSpec) -> int:
    return wsgn_pairs(source, target, spec.weight)


# ---------------------------------------------------------------------------
# enumeration


def iter_cells(spec: ComplexSpec, dim: int) -> Iterator[CellSym]:
    """All cells of topological dimension `dim`, canonical order not guaranteed."""
    n = spec.n
    if dim < 0:
        return
    nblocks = n - dim
    if nblocks < 1 or (n == 0 and dim > 0):
        return
    if n == 0:
        yield ()
        return
    yield from _fill(tuple(sorted(spec.labels)), nblocks, spec)


def _fill(remaining: tuple, nblocks: int, spec: ComplexSpec) -> Iterator[CellSym]:
    if nblocks == 0:
        if not remaining:
            yield ()
        return
    n = len(remaining)
    if n < nblocks:
        return
    max_first = n - (nblocks - 1)
    for size in range(1, max_first + 1):
        for chosen in itertools.combinations(remaining, size):
            if spec.width is not None and wlength(chosen, spec) > spec.width:
                continue
            rest = tuple(a for a in remaining if a not in chosen)
            if spec.kind == ORDERED:
                arrangements = itertools.permutations(chosen)
            else:
                arrangements = (chosen,)
            for arr in arrangements:
                for tail in _fill(rest, nblocks - 1, spec):
                    yield (arr,) + tail


def canonical_key(cell: CellSym):
    """Deterministic total order on cells: block sizes, then flattened labels."""
    return (
        tuple(len(b) for b in cell),
        tuple(a for b in cell for a in b),
    )


@lru_cache(maxsize=512)
def enumerate_cells(spec: ComplexSpec, dim: int) -> tuple:
    """Admissible cells of topological dimension `dim` in canonical order."""
    cells = sorted(iter_cells(spec, dim), key=canonical_key)
    assert len(set(cells)) == len(cells)
    return tuple(cells)


@lru_cache(maxsize=512)
def cell_index(spec: ComplexSpec, dim: int) -> dict:
    return {c: i for i, c in enumerate(enumerate_cells(spec, dim))}


def validate_cell(cell: CellSym, spec: ComplexSpec) -> None:
    seen = []
    for block in cell:
        if not block:
            raise ValueError("empty block")
        seen.extend(block)
    if sorted(seen) != list(spec.labels):
        raise ValueError("cell labels do not match the complex label set")
    for block in cell:
        if spec.width is not None and wlength(block, spec) > spec.width:
            raise ValueError(f"block {block} exceeds width {spec.width}")
        if spec.kind == PERMUTOHEDRON and tuple(sorted(block)) != block:
            raise ValueError(f"permutohedron block {block} not ascending")


def cell_count(spec: ComplexSpec) -> int:
    return sum(len(enumerate_cells(spec, k)) for k in range(spec.top_degree() + 1))


# ---------------------------------------------------------------------------
# wheel decompositions of permutations


@dataclass(frozen=True)
class WheelDecomposition:
    """Maximal axle-led segments of a permutation.

    An axle is an entry larger than everything before it; each wheel runs
    from one axle up to (not including) the next.  Concatenating the wheels
    in order recovers the permutation, and axles increase left to right.
    """

    wheels: tuple          # tuple of label tuples, in permutation order
    weights: tuple         # total entry weight per wheel
    superlabels: tuple     # one label per wheel (its axle), ascending

    @property
    def count(self) -> int:
        return len(self.wheels)

    def shift(self) -> int:
        """Degree shift of this decomposition: #labels - #wheels."""
        return sum(len(w) for w in self.wheels) - len(self.wheels)

    def superlabel_weights(self) -> dict:
        return dict(zip(self.superlabels, self.weights))


def wheel_decomposition(perm: Sequence, weight_of=None) -> WheelDecomposition:
    perm = tuple(perm)
    if not perm:
        raise ValueError("empty permutation")
    if weight_of is None:
        weight_of = lambda a: 1
    wheels = []
    start = 0
    best = perm[0]
    for i, a in enumerate(perm[1:], start=1):
        if a > best:
            wheels.append(perm[start:i])
            start, best = i, a
    wheels.append(perm[start:])
    weights = tuple(sum(weight_of(a) for a in w) for w in wheels)
    axles = tuple(w[0] for w in wheels)
    assert axles == tuple(sorted(axles))
    return WheelDecomposition(tuple(wheels), weights, axles)


def lex_compare(sigma: Sequence, rho: Sequence) -> int:
    """-1, 0, or 1 by the first position where the permutations disagree."""
    sigma, rho = tuple(sigma), tuple(rho)
    if sorted(sigma) != sorted(rho):
        raise ValueError("permutations of different sets")
    if sigma < rho:
        return -1
    if sigma > rho:
        return 1
    return 0


def s_of_sigma(sigma: Sequence) -> tuple:
    """All permutations containing the wheels of sigma as contiguous segments.

    These are the concatenations of sigma's wheels in every order; there are
    (#wheels)! of them.  Sorted lexicographically.
    """
    wheels = wheel_decomposition(sigma).wheels
    out = set()
    for order in itertools.permutations(wheels):
        out.add(tuple(a for w in order for a in w))
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# text syntax: blocks separated by `|`, labels space-separated


def parse_cell(text: str) -> CellSym:
    blocks = []
    for chunk in text.split("|"):
        entries = chunk.split()
        if not entries:
            raise ValueError(f"empty block in cell {text!r}")
        blocks.append(tuple(int(e) for e in entries))
    return tuple(blocks)


def format_cell(cell: CellSym) -> str:
    return "|".join(" ".join(str(a) for a in b) for b in cell)


def parse_weighted_set(text: str) -> tuple:
    """`label:weight` pairs, weight defaulting to 1.  Returns (labels, weights)."""
    labels, weights = [], {}
    for chunk in text.split():
        if ":" in chunk:
            a, w = chunk.split(":")
            label, weight = int(a), int(w)
        else:
            label, weight = int(chunk), 1
        if label in weights:
            raise ValueError(f"duplicate label {label}")
        labels.append(label)
        weights[label] = weight
    labels.sort()
    return tuple(labels), tuple(weights[a] for a in labels)


def coeff_str(c: Fraction) -> str:
    return str(c)
