"""The twisted algebra of wheels and averaged filters.

Homology classes of the ordered complexes multiply by concatenation.  The
generators are proper wheels and admissible nontrivial averaged filters on
at least three proper wheels in increasing rank; a generator word is a
concatenation of those.  This module implements the relations between
generator words, each with an explicit chain-level witness:

R1  an improper wheel is an exact rational combination of the proper
    wheels on the same labels (no boundary needed);
R2  two adjacent wheels whose sizes fit in the width together commute up
    to the sign (-1)^{(n1-1)(n2-1)}, witnessed by the merged one-block
    chain;
R3  permuting the wheels of an averaged filter multiplies it by the
    weighted sign of the permutation at the wheel sizes, exactly;
R4  averaged filters are multilinear in each wheel slot, so an improper
    wheel inside a filter expands by its R1 combination, exactly;
R5  for wheels W_1..W_{m+1} whose every (m-1)-fold size sum fits, the
    signed sums of W_k|AF_k and AF_k|W_k agree modulo boundaries, where
    AF_k averages all wheels but W_k; the witness collects the middle
    two-block faces of the top permutohedron cell.

reduce() rewrites any combination of generator words into the normal form
of the averaged-filter basis, using R2 on inverted wheel pairs and R5 on
a wheel stuck left of a filter it does not outrank.  Termination is
guarded by an explicit lexicographic measure, asserted to drop at every
step.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .cells import cell_complex, cell_index, wsgn_pairs
from .chains import ChainVector, boundary, concat, is_cycle
from .cycles import (AvgFilter, Filter, GeneratorWord, Leaf, Node, Wheel,
                     WheelTree, _arranged_faces, _as_tree, _expand_word_blocks,
                     _filter_chain, _segment_chain, averaged_filter_cycle,
                     comb, tree_labels, tree_weight, wheel_cycle, word_cycle)
from .linalg import solve_exact


# ---------------------------------------------------------------------------
# word combinations


class WordCombination:
    """A formal rational combination of generator words."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[dict] = None):
        self.terms: Dict[GeneratorWord, Fraction] = {}
        if terms:
            for w, c in terms.items():
                c = Fraction(c)
                if c:
                    self.terms[w] = c

    @classmethod
    def of(cls, word: GeneratorWord, coeff=1) -> "WordCombination":
        return cls({word: Fraction(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return sorted(self.terms.items(), key=lambda t: str(t[0]))

    def __add__(self, other: "WordCombination") -> "WordCombination":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, Fraction(0)) + c
        return WordCombination(out)

    def __sub__(self, other: "WordCombination") -> "WordCombination":
        return self + other.scale(-1)

    def scale(self, c) -> "WordCombination":
        c = Fraction(c)
        return WordCombination({w: v * c for w, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, WordCombination) and self.terms == other.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{w}" for w, c in self.items())

    def cycle(self, width: int) -> ChainVector:
        """The chain this combination represents; all words must share labels."""
        result = None
        for w, c in self.items():
            ch = word_cycle(w, width).scale(c)
            result = ch if result is None else result + ch
        assert result is not None, "cannot build the chain of an empty combination"
        return result


# ---------------------------------------------------------------------------
# R1: properization of wheels


def _tree_pattern(tree: WheelTree, rank_of: dict) -> WheelTree:
    if isinstance(tree, Leaf):
        return Leaf(rank_of[tree.label])
    return Node(_tree_pattern(tree.left, rank_of), _tree_pattern(tree.right, rank_of))


@lru_cache(maxsize=4096)
def _properize_pattern(tree: WheelTree) -> tuple:
    """Proper-wheel coefficients of a wheel tree on labels 1..n.

    Returns ((proper label tuple, Fraction), ...).  Exact at chain level.
    """
    labels = tuple(sorted(tree_labels(tree)))
    n = len(labels)
    width = n  # wide enough that nothing is restricted
    spec = cell_complex(labels, width)
    index = cell_index(spec, n - 1)
    target = wheel_cycle(tree, width).to_column(index)
    top = labels[-1]
    rest = tuple(a for a in labels if a != top)
    propers = [(top,) + p for p in itertools.permutations(rest)]
    rows = [wheel_cycle(Wheel(p), width).to_column(index) for p in propers]
    sol = solve_exact(rows, target)
    assert sol is not None, "a wheel tree failed to properize"
    return tuple((propers[i], c) for i, c in sorted(sol.items()))


def properize(wheel_or_tree) -> Dict[tuple, Fraction]:
    """Express a wheel (tree or label sequence) in proper wheels, exactly."""
    tree = _as_tree(wheel_or_tree)
    labels = tuple(sorted(tree_labels(tree)))
    rank_of = {a: i + 1 for i, a in enumerate(labels)}
    pattern = _tree_pattern(tree, rank_of)
    out = {}
    for ranks, c in _properize_pattern(pattern):
        out[tuple(labels[r - 1] for r in ranks)] = c
    return out


# ---------------------------------------------------------------------------
# the action of relabeling


def _normalize_filter(wheels: Sequence[Wheel]) -> Tuple[AvgFilter, int]:
    """Rank-sort the wheels of a filter; returns it with the R3 sign."""
    wheels = tuple(wheels)
    src = tuple(range(len(wheels)))
    order = tuple(sorted(src, key=lambda i: wheels[i].rank_key()))
    sign = wsgn_pairs(src, order, lambda i: wheels[i].size)
    return AvgFilter(tuple(wheels[i] for i in order)), sign


def act(mapping: dict, x: Union[GeneratorWord, WordCombination],
        ) -> WordCombination:
    """Relabel a word (or combination) and renormalize its wheels.

    `mapping` sends old labels to new ones (a bijection on the word's
    labels; missing labels stay put).  Relabeled wheels are properized
    (R1), filters multilinearly expanded (R4) and rank-sorted with their
    sign (R3).  All three moves are exact, so the result represents the
    relabeled chain on the nose, and the factor shape of every word
    survives.
    """
    if isinstance(x, GeneratorWord):
        x = WordCombination.of(x)
    out = WordCombination()
    for word, coeff in x.items():
        expanded = [(Fraction(coeff), ())]
        for f in word.factors:
            grown = []
            if isinstance(f, Wheel):
                moved = tuple(mapping.get(a, a) for a in f.labels)
                for labels, c in properize(comb(moved)).items():
                    for base, fs in expanded:
                        grown.append((base * c, fs + (Wheel(labels),)))
            else:
                slot_options: List[List[Tuple[Wheel, Fraction]]] = []
                for w in f.wheels:
                    moved = tuple(mapping.get(a, a) for a in w.labels)
                    slot_options.append(
                        [(Wheel(labels), c) for labels, c in properize(comb(moved)).items()])
                for pick in itertools.product(*slot_options):
                    wheels = tuple(p[0] for p in pick)
                    c = Fraction(1)
                    for p in pick:
                        c *= p[1]
                    nf, sign = _normalize_filter(wheels)
                    for base, fs in expanded:
                        grown.append((base * c * sign, fs + (nf,)))
            expanded = grown
        for c, fs in expanded:
            if c:
                w2 = GeneratorWord(fs)
                out.terms[w2] = out.terms.get(w2, Fraction(0)) + c
    return WordCombination(out.terms)


# ---------------------------------------------------------------------------
# relation instances with witnesses


@dataclass
class RelationInstance:
    name: str
    params: dict
    difference: ChainVector
    witness: Optional[ChainVector]  # None: the relation is exact on chains
    coefficients: Optional[dict] = None

    def verified(self) -> bool:
        if self.witness is None:
            return self.difference.is_zero()
        return (is_cycle(self.difference)
                and boundary(self.witness) == self.difference)

    def __str__(self):
        kind = "exact" if self.witness is None else "boundary-witnessed"
        return f"{self.name} instance ({kind}): verified={self.verified()}"


def r1_instance(wheel_or_tree, width: int) -> RelationInstance:
    """An improper wheel equals its proper combination on the nose."""
    tree = _as_tree(wheel_or_tree)
    diff = wheel_cycle(tree, width)
    combo = properize(tree)
    for labels, c in combo.items():
        diff = diff - wheel_cycle(Wheel(labels), width).scale(c)
    return RelationInstance("R1", {"tree": tree}, diff, None,
                            {Wheel(l): c for l, c in combo.items()})


def _one_block_product(trees: Sequence[WheelTree], spec) -> ChainVector:
    """All wheels merged into a single block, in the given order."""
    segs = [_segment_chain(t) for t in trees]
    out: dict = {}
    _expand_word_blocks((tuple(range(len(segs))),), Fraction(1),
                        segs, out)
    n = sum(len(tree_labels(t)) for t in trees)
    return ChainVector(spec, n - 1, out, validate=True)


def r2_instance(w1: Wheel, w2: Wheel, width: int) -> RelationInstance:
    """W1|W2 = (-1)^{(n1-1)(n2-1)} W2|W1 when the sizes fit together."""
    n1, n2 = w1.size, w2.size
    if n1 + n2 > width:
        raise ValueError("the two wheels do not fit in one block at this width")
    sign = -1 if ((n1 - 1) * (n2 - 1)) % 2 else 1
    lhs = concat(wheel_cycle(w1, width), wheel_cycle(w2, width))
    rhs = concat(wheel_cycle(w2, width), wheel_cycle(w1, width)).scale(sign)
    diff = lhs - rhs
    labels = tuple(sorted(w1.labels + w2.labels))
    spec = cell_complex(labels, width)
    witness = _one_block_product([w1.tree(), w2.tree()], spec)
    if n1 % 2:
        witness = witness.scale(-1)
    return RelationInstance("R2", {"w1": w1, "w2": w2, "width": width},
                            diff, witness)


def r3_instance(wheels: Sequence[Wheel], order: Sequence[int],
                width: int) -> RelationInstance:
    """Reordering the wheels of an averaged filter only changes the sign."""
    wheels = tuple(wheels)
    order = tuple(order)
    permuted = tuple(wheels[i] for i in order)
    sign = wsgn_pairs(tuple(range(len(wheels))), order, lambda i: wheels[i].size)
    diff = (averaged_filter_cycle(permuted, width)
            - averaged_filter_cycle(wheels, width).scale(sign))
    return RelationInstance("R3", {"wheels": wheels, "order": order}, diff, None)


def r4_instance(wheels: Sequence, slot: int, width: int) -> RelationInstance:
    """A filter with an improper wheel in one slot expands multilinearly."""
    trees = [_as_tree(w) for w in wheels]
    diff = averaged_filter_cycle(trees, width)
    for labels, c in properize(trees[slot]).items():
        replaced = list(trees)
        replaced[slot] = comb(labels)
        diff = diff - averaged_filter_cycle(replaced, width).scale(c)
    return RelationInstance("R4", {"wheels": tuple(trees), "slot": slot}, diff, None)


def _r5_admissible(sizes: Sequence[int], width: int) -> bool:
    m1 = len(sizes)
    return all(sum(s) <= width
               for s in itertools.combinations(sizes, m1 - 2))


def r5_closed_form(sizes: Sequence[int]) -> Tuple[tuple, tuple]:
    """Coefficients of the filter Leibniz relation, all signs pinned.

    Returns (left, right): for wheels of these sizes,

        sum_k left[k] * W_k|AF_k + right[k] * AF_k|W_k

    is the boundary of the middle-face witness of r5_instance, where AF_k
    is the raw averaged filter on the other wheels.  On three wheels the
    witness is empty and the combination vanishes on the nose.

    The one-wheel faces of the top permutohedron cell dictate the signs:
    left[k] is the weighted sign of pulling wheel k to the front, and
    right[k] combines the face orientation (-1)^{total-n_k} with the sign
    of pushing wheel k to the back.  A wheel weighs its disk count, so
    only odd-size wheels see each other in the pulling signs.
    """
    sizes = tuple(sizes)
    total = sum(sizes)
    odd = [n % 2 for n in sizes]
    left, right = [], []
    for k in range(len(sizes)):
        front = (-1) ** (odd[k] * sum(odd[:k]))
        back = (-1) ** (odd[k] * sum(odd[k + 1:]))
        left.append(front)
        right.append(-back * (-1) ** ((total - sizes[k]) % 2))
    return tuple(left), tuple(right)


def _raw_averaged_filter(wheels: Sequence[Wheel], width: int) -> ChainVector:
    """The un-normalized averaged filter chain, any arity including two."""
    return _filter_chain(tuple(w.tree() for w in wheels), width, True)


def r5_instance(wheels: Sequence[Wheel], width: int) -> RelationInstance:
    """The filter Leibniz relation on m+1 wheels, witnessed explicitly.

    The witness is the spin expansion of the block-averaged middle faces
    (both blocks holding at least two wheels) of the top permutohedron
    cell on the wheels.  Its boundary is exactly the r5_closed_form
    combination of the words W_k|AF_k and AF_k|W_k; on three wheels the
    witness is empty and the combination already vanishes as a chain.
    """
    wheels = tuple(wheels)
    m1 = len(wheels)
    if m1 < 3:
        raise ValueError("the relation needs at least three wheels")
    sizes = tuple(w.size for w in wheels)
    if not _r5_admissible(sizes, width):
        raise ValueError(f"wheel sizes {sizes} fail the (m-1)-fold sum bound "
                         f"at width {width}")
    trees = [w.tree() for w in wheels]
    segments = [_segment_chain(t) for t in trees]
    labels = tuple(sorted(a for w in wheels for a in w.labels))
    spec = cell_complex(labels, width)
    total = sum(sizes)
    mid: dict = {}
    for blocks, coeff in _arranged_faces(sizes, True, min_block=2):
        _expand_word_blocks(blocks, coeff, segments, mid)
    witness = ChainVector(spec, total - 2, {c: v for c, v in mid.items() if v},
                          validate=True)
    left, right = r5_closed_form(sizes)
    combination = ChainVector.zero(spec, total - 3)
    coeffs = {}
    for k in range(m1):
        rest = wheels[:k] + wheels[k + 1:]
        wk = wheel_cycle(wheels[k], width)
        afk = _raw_averaged_filter(rest, width)
        combination = (combination + concat(wk, afk).scale(left[k])
                       + concat(afk, wk).scale(right[k]))
        coeffs[("left", k)] = Fraction(left[k])
        coeffs[("right", k)] = Fraction(right[k])
    return RelationInstance("R5", {"wheels": wheels, "width": width},
                            combination,
                            None if witness.is_zero() else witness, coeffs)


def relation_instance(name: str, width: int, **params) -> RelationInstance:
    """Uniform entry point for the five relation families."""
    name = name.upper()
    if name == "R1":
        return r1_instance(params["wheel"], width)
    if name == "R2":
        return r2_instance(params["w1"], params["w2"], width)
    if name == "R3":
        return r3_instance(params["wheels"], params["order"], width)
    if name == "R4":
        return r4_instance(params["wheels"], params["slot"], width)
    if name == "R5":
        return r5_instance(params["wheels"], width)
    raise ValueError(f"unknown relation {name!r}")


# ---------------------------------------------------------------------------
# normal-form reduction


def _check_generator_word(word: GeneratorWord, width: int):
    """Reject words that are not products of generators in normal form."""
    for f in word.factors:
        if isinstance(f, AvgFilter):
            if f.arity == 2:
                raise ValueError(
                    f"{f} has two wheels: rewrite it as ordered products of "
                    f"the wheels (the two-wheel filter is their commutator)")
            if not f.admissible(width):
                raise ValueError(f"{f} is inadmissible at width {width}")
            for w in f.wheels:
                if not w.is_proper():
                    raise ValueError(
                        f"wheel {w} inside {f} is improper; expand it with "
                        f"act() or properize() first")
            ranks = [w.rank_key() for w in f.wheels]
            if ranks != sorted(ranks):
                raise ValueError(
                    f"wheels of {f} are not in increasing rank; apply the "
                    f"reordering sign first (see r3_instance)")
        elif isinstance(f, Filter):
            raise ValueError(
                f"{f} is a plain filter; reduce() works over averaged filters")
        elif isinstance(f, Wheel):
            if f.size > width:
                raise ValueError(f"wheel {f} does not fit in width {width}")
            if not f.is_proper():
                raise ValueError(
                    f"wheel {f} is improper; expand it with act() or "
                    f"properize() first")
        else:
            raise TypeError(f"unknown factor {f!r}")


def _measure(word: GeneratorWord) -> tuple:
    """The termination measure: strictly drops under every rewrite step.

    Components, compared lexicographically:
      1. co-ranks of the bare wheels (how many wheels of the whole word
         outrank each bare wheel), sorted descending;
      2. the number of (bare wheel, filter strictly to its right) pairs;
      3. rank inversions among the bare wheels.
    R5 steps drop 1, or keep 1 and drop 2; R2 swaps keep both and drop 3.
    """
    all_ranks = []
    for f in word.factors:
        if isinstance(f, Wheel):
            all_ranks.append(f.rank_key())
        else:
            all_ranks.extend(w.rank_key() for w in f.wheels)
    bare = [(i, f.rank_key()) for i, f in enumerate(word.factors)
            if isinstance(f, Wheel)]
    filters = [i for i, f in enumerate(word.factors) if isinstance(f, AvgFilter)]
    comp1 = tuple(sorted((sum(1 for r in all_ranks if r > rk) for _, rk in bare),
                         reverse=True))
    comp2 = sum(1 for i, _ in bare for j in filters if j > i)
    comp3 = sum(1 for (i, ri), (j, rj) in itertools.combinations(bare, 2)
                if i < j and ri < rj)
    return (comp1, comp2, comp3)


def _first_violation(word: GeneratorWord, width: int) -> Optional[tuple]:
    for i, f in enumerate(word.factors[:-1]):
        if not isinstance(f, Wheel):
            continue
        nxt = word.factors[i + 1]
        if isinstance(nxt, Wheel):
            if f.rank_key() > nxt.rank_key() or f.size + nxt.size > width:
                continue
            return ("swap", i)
        if f.rank_key() > nxt.least_wheel().rank_key():
            continue
        return ("push", i)
    return None


def _rewrite(word: GeneratorWord, coeff: Fraction, width: int,
             ) -> List[Tuple[GeneratorWord, Fraction]]:
    """One rewriting step on the leftmost violation; asserts the measure drop."""
    spot = _first_violation(word, width)
    assert spot is not None
    kind, i = spot
    mu = _measure(word)
    out: List[Tuple[GeneratorWord, Fraction]] = []
    if kind == "swap":
        a, b = word.factors[i], word.factors[i + 1]
        sign = -1 if ((a.size - 1) * (b.size - 1)) % 2 else 1
        factors = word.factors[:i] + (b, a) + word.factors[i + 2:]
        out.append((GeneratorWord(factors), coeff * sign))
    else:
        w0 = word.factors[i]
        af = word.factors[i + 1]
        group = (w0,) + af.wheels
        left, right = r5_closed_form(tuple(w.size for w in group))
        assert left[0] == 1  # the violating word W0|AF0 carries coefficient 1
        prefix, suffix = word.factors[:i], word.factors[i + 2:]
        sides = [("left", k, left[k]) for k in range(1, len(group))]
        sides += [("right", k, right[k]) for k in range(len(group))]
        for side, k, c in sides:
            wk = group[k]
            rest = group[:k] + group[k + 1:]
            if sum(w.size for w in rest) <= width:
                continue  # trivial filter: that term is a boundary
            nf, sign = _normalize_filter(rest)
            middle = (wk, nf) if side == "left" else (nf, wk)
            new = GeneratorWord(prefix + middle + suffix)
            assert _measure(new) < mu, f"measure failed to drop on {new}"
            out.append((new, -coeff * c * sign))
    for new, _ in out:
        assert _measure(new) < mu
    return out


def reduce(x: Union[GeneratorWord, WordCombination, str], width: int,
           ) -> WordCombination:
    """Rewrite a combination of generator words into basis normal form.

    Words must be built from proper wheels and rank-sorted admissible
    averaged filters on three or more wheels (use act()/properize() for
    anything else).  Words containing a trivial filter vanish.  The result
    satisfies the basis conditions: adjacent bare wheels descend in rank
    unless their sizes overflow the width, and a bare wheel left of a
    filter outranks the filter's least wheel.
    """
    from .cycles import parse_word
    if isinstance(x, str):
        x = WordCombination.of(parse_word(x))
    elif isinstance(x, GeneratorWord):
        x = WordCombination.of(x)
    todo: Dict[GeneratorWord, Fraction] = {}
    for word, c in x.items():
        _check_generator_word(word, width)
        if any(isinstance(f, AvgFilter) and f.trivial(width) for f in word.factors):
            continue  # the word is a boundary
        todo[word] = todo.get(word, Fraction(0)) + c
    done: Dict[GeneratorWord, Fraction] = {}
    while todo:
        word = min(todo, key=str)
        coeff = todo.pop(word)
        if not coeff:
            continue
        if _first_violation(word, width) is None:
            done[word] = done.get(word, Fraction(0)) + coeff
            continue
        for new, c in _rewrite(word, coeff, width):
            todo[new] = todo.get(new, Fraction(0)) + c
    return WordCombination(done)


# ---------------------------------------------------------------------------
# representation stability parameters


@dataclass(frozen=True)
class StabilityParams:
    width: int
    order: int            # d: the order of the stability statement
    index: int            # the homological input (k for order 1, i above)
    b: int                # the slope bound
    fi_width: int         # the category width: FI for order 1, FIW(d) above
    generation_degree: int

    def describe(self) -> str:
        cat = "FI" if self.order == 1 else f"FIW({self.order})"
        return (f"b={self.b}, {cat}-width {self.fi_width}, "
                f"generation degree {self.generation_degree}")


def stability_params(k: int, width: int) -> StabilityParams:
    """First-order stability of degree-k homology at this width."""
    if width < 2:
        raise ValueError("stability needs width at least 2")
    b = k // (width - 1)
    gen = 2 * k if width >= 3 else 3 * k
    return StabilityParams(width, 1, k, b, b + 1, gen)


def higher_stability_params(d: int, i: int, width: int) -> StabilityParams:
    """Order-d stability for the d-th quotient filtration stage."""
    if not 1 <= d <= width // 2:
        raise ValueError(f"order {d} is out of range at width {width}")
    b = (d * i) // (width - d)
    gen = (d + 1) * i if width >= 2 * d + 1 else (d + 1) * i + d
    return StabilityParams(width, d, i, b, b + 1, gen)


def generation_check(k: int, width: int) -> Tuple[int, bool]:
    """Finite generation in the FI direction, checked on the basis.

    Returns (bound, ok): one disk past the bound, every basis word of
    degree k contains a bare one-disk wheel, so the class is induced.
    """
    from .basis import AMW, enumerate_basis
    bound = 2 * k if width >= 3 else 3 * k
    words = enumerate_basis(bound + 1, width, k, AMW)
    ok = all(any(isinstance(f, Wheel) and f.size == 1 for f in w.factors)
             for w in words)
    return bound, ok


def quotient_reduce(x, d: int, width: int) -> WordCombination:
    """Normal form in the quotient killing bare wheels on up to d disks."""
    reduced = reduce(x, width)
    if d <= 0:
        return reduced
    kept = {w: c for w, c in reduced.terms.items()
            if not any(isinstance(f, Wheel) and f.size <= d for f in w.factors)}
    return WordCombination(kept)


def count_barriers(word: GeneratorWord, d: int, width: int) -> int:
    """Factors blocking disks from passing: big wheels and all filters."""
    n = 0
    for f in word.factors:
        if isinstance(f, AvgFilter):
            n += 1
        elif f.size >= width + 1 - d:
            n += 1
    return n


def barrier_decompose(x: Union[WordCombination, GeneratorWord], d: int,
                      width: int) -> Dict[int, WordCombination]:
    """Split a reduced combination by the number of barrier factors."""
    if isinstance(x, GeneratorWord):
        x = WordCombination.of(x)
    out: Dict[int, Dict[GeneratorWord, Fraction]] = {}
    for w, c in x.items():
        k = count_barriers(w, d, width)
        out.setdefault(k, {})[w] = c
    return {k: WordCombination(v) for k, v in sorted(out.items())}
