"""Rational homology of the strip complexes.

Betti numbers come from exact ranks of the boundary matrices:
betti_k = #cells_k - rank d_k - rank d_{k+1}.  The echelon of the image of
d_{k+1} is cached per (complex, degree), so repeated membership queries
(is_boundary, express) in the same degree reuse one elimination.

Cell enumeration is refused up front when a size estimate exceeds the
resource cap; the estimate counts cells kind- and width-aware for unit
weights and falls back to the unrestricted count otherwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Dict, Optional, Sequence, Tuple

from .cells import (ORDERED, PERMUTOHEDRON, ComplexSpec, cell_complex,
                    cell_index, enumerate_cells, permutohedron,
                    wheel_decomposition)
from .chains import ChainVector, boundary, boundary_matrix, is_cycle
from .linalg import Echelon

DEFAULT_MAX_CELLS = 5_000_000


class ResourceRefusal(RuntimeError):
    """Raised instead of attempting an enumeration past the resource cap."""


@lru_cache(maxsize=None)
def _composition_count(n: int, parts: int, cap: int) -> int:
    """Compositions of n into `parts` parts, each between 1 and cap."""
    if parts == 0:
        return 1 if n == 0 else 0
    return sum(_composition_count(n - c, parts - 1, cap)
               for c in range(1, min(cap, n) + 1))


def estimate_cells(spec: ComplexSpec, degree: Optional[int] = None) -> int:
    """Upper estimate of the number of cells (exact for unit weights)."""
    n = spec.n
    if degree is None:
        top = spec.top_degree()
        if top < 0:
            return 0
        return sum(estimate_cells(spec, d) for d in range(top + 1))
    blocks = n - degree
    if blocks < 1 or blocks > n:
        return 0
    unit = all(w == 1 for w in spec.weights)
    if unit:
        if spec.kind == ORDERED:
            return factorial(n) * _composition_count(n, blocks, min(spec.width, n))
        # ascending blocks: divide out the orderings inside blocks
        total = 0
        for sizes in _compositions(n, blocks, min(spec.width, n)):
            m = factorial(n)
            for s in sizes:
                m //= factorial(s)
            total += m
        return total
    # weighted fallback: the unrestricted ordered count bounds both kinds
    return factorial(n) * comb(n - 1, blocks - 1)


def _compositions(n: int, parts: int, cap: int):
    if parts == 0:
        if n == 0:
            yield ()
        return
    for c in range(1, min(cap, n) + 1):
        for rest in _compositions(n - c, parts - 1, cap):
            yield (c,) + rest


def _guard(spec: ComplexSpec, degrees, max_cells: int):
    est = sum(estimate_cells(spec, d) for d in degrees)
    if est > max_cells:
        raise ResourceRefusal(
            f"estimated {est} cells across degrees {sorted(set(degrees))} "
            f"of {spec.describe()} exceeds the cap of {max_cells}")


# ---------------------------------------------------------------------------
# cached image echelons

_image_cache: Dict[tuple, Echelon] = {}


def image_echelon(spec: ComplexSpec, degree: int, track: bool = False,
                  cache_dir=None) -> Echelon:
    """Echelon of the boundaries of (degree+1)-cells, as vectors in C_degree.

    Tracked echelons remember which (degree+1)-cells combine into each
    echelon row, which is what boundary witnesses are made of.
    """
    key = (spec, degree, track)
    ech = _image_cache.get(key)
    if ech is not None:
        return ech
    ech = Echelon(track=track)
    top = spec.top_degree()
    if 0 <= degree < top:
        mat = boundary_matrix(spec, degree + 1, cache_dir=cache_dir)
        cols = [dict() for _ in range(mat.cols)]
        for r, c, v in mat.triplets:
            cols[c][r] = v
        order = sorted(range(mat.cols),
                       key=lambda j: (min(cols[j]) if cols[j] else -1, len(cols[j]), j))
        for j in order:
            if cols[j]:
                ech.absorb(cols[j], tag=j)
    _image_cache[key] = ech
    return ech


def boundary_rank(spec: ComplexSpec, degree: int, cache_dir=None) -> int:
    """Rank of d_degree : C_degree -> C_{degree-1}."""
    top = spec.top_degree()
    if degree < 1 or degree > top:
        return 0
    return image_echelon(spec, degree - 1, cache_dir=cache_dir).rank


# ---------------------------------------------------------------------------
# betti numbers


@dataclass(frozen=True)
class HomologyProfile:
    spec: ComplexSpec
    betti: tuple
    cells: tuple
    ranks: tuple  # ranks[d] = rank of d_d, indices 0..top+1

    def __str__(self):
        return "betti " + " ".join(f"b{d}={b}" for d, b in enumerate(self.betti))


_profile_cache: Dict[tuple, HomologyProfile] = {}


def homology_profile(spec: ComplexSpec, max_cells: int = DEFAULT_MAX_CELLS,
                     cache_dir=None) -> HomologyProfile:
    key = (spec, )
    if key in _profile_cache:
        return _profile_cache[key]
    top = spec.top_degree()
    if top < 0:
        prof = HomologyProfile(spec, (), (), (0,))
        _profile_cache[key] = prof
        return prof
    _guard(spec, range(top + 1), max_cells)
    cells = tuple(len(enumerate_cells(spec, d)) for d in range(top + 1))
    ranks = [0] * (top + 2)
    for d in range(1, top + 1):
        ranks[d] = boundary_rank(spec, d, cache_dir=cache_dir)
    betti = tuple(cells[d] - ranks[d] - ranks[d + 1] for d in range(top + 1))
    assert all(b >= 0 for b in betti)
    euler_cells = sum((-1) ** d * c for d, c in enumerate(cells))
    euler_betti = sum((-1) ** d * b for d, b in enumerate(betti))
    assert euler_cells == euler_betti, "Euler characteristic mismatch"
    prof = HomologyProfile(spec, betti, cells, tuple(ranks))
    _profile_cache[key] = prof
    return prof


def betti_number(spec: ComplexSpec, degree: int,
                 max_cells: int = DEFAULT_MAX_CELLS, cache_dir=None) -> int:
    """One Betti number without computing the whole profile."""
    top = spec.top_degree()
    if degree < 0 or degree > top:
        return 0
    _guard(spec, [d for d in (degree - 1, degree, degree + 1) if 0 <= d <= top],
           max_cells)
    cells_k = len(enumerate_cells(spec, degree))
    return (cells_k - boundary_rank(spec, degree, cache_dir=cache_dir)
            - boundary_rank(spec, degree + 1, cache_dir=cache_dir))


# ---------------------------------------------------------------------------
# membership in the boundary space


@dataclass(frozen=True)
class BoundaryAnswer:
    is_boundary: bool
    witness: Optional[ChainVector] = None
    certificate: Optional[dict] = None  # cell -> Fraction, a functional

    def __bool__(self):
        return self.is_boundary


def is_boundary(chain: ChainVector, want_witness: bool = False,
                max_cells: int = DEFAULT_MAX_CELLS, cache_dir=None) -> BoundaryAnswer:
    """Decide whether a cycle bounds; optionally produce a witness.

    The witness is a (degree+1)-chain whose boundary is the input.  When
    the cycle does not bound, the certificate is a functional on cells of
    the same degree vanishing on all boundaries but not on the input.
    """
    spec, k = chain.spec, chain.degree
    assert is_cycle(chain), "is_boundary expects a cycle"
    if chain.is_zero():
        return BoundaryAnswer(True, witness=ChainVector.zero(spec, k + 1))
    top = spec.top_degree()
    _guard(spec, [d for d in (k, k + 1) if 0 <= d <= top], max_cells)
    index = cell_index(spec, k)
    vec = chain.to_column(index)
    if not want_witness:
        ech = image_echelon(spec, k, cache_dir=cache_dir)
        res = ech.residue(vec)
        if res:
            cells = enumerate_cells(spec, k)
            cert = {cells[c]: v for c, v in ech.annihilator(vec).items()}
            return BoundaryAnswer(False, certificate=cert)
        return BoundaryAnswer(True)
    ech = image_echelon(spec, k, track=True, cache_dir=cache_dir)
    coords = ech.coordinates(vec)
    if coords is None:
        plain = image_echelon(spec, k, cache_dir=cache_dir)
        cells = enumerate_cells(spec, k)
        cert = {cells[c]: v for c, v in plain.annihilator(vec).items()}
        return BoundaryAnswer(False, certificate=cert)
    upcells = enumerate_cells(spec, k + 1)
    witness = ChainVector(spec, k + 1, {upcells[j]: v for j, v in coords.items()})
    assert boundary(witness) == chain
    return BoundaryAnswer(True, witness=witness)


@dataclass(frozen=True)
class ExpressResult:
    ok: bool
    coefficients: Optional[tuple] = None  # aligned with the basis argument
    residual: Optional[ChainVector] = None

    def __bool__(self):
        return self.ok


def express(chain: ChainVector, basis: Sequence[ChainVector],
            max_cells: int = DEFAULT_MAX_CELLS, cache_dir=None) -> ExpressResult:
    """Write a cycle as a basis combination modulo boundaries.

    All inputs must be cycles in one complex and degree.  On success the
    coefficients satisfy  chain - sum coeff*basis = boundary.  On failure
    the residual is the part of the chain left after killing the image and
    the basis residues; it certifies that no combination works.
    """
    spec, k = chain.spec, chain.degree
    for b in basis:
        assert b.spec == spec and b.degree == k, "basis must match the chain"
        assert is_cycle(b)
    assert is_cycle(chain)
    top = spec.top_degree()
    _guard(spec, [d for d in (k, k + 1) if 0 <= d <= top], max_cells)
    index = cell_index(spec, k)
    ech = image_echelon(spec, k, cache_dir=cache_dir)
    residues = [ech.residue(b.to_column(index)) for b in basis]
    target = ech.residue(chain.to_column(index))
    small = Echelon(track=True)
    for i, r in enumerate(residues):
        if r:
            small.absorb(r, tag=i)
    coords = small.coordinates(target)
    if coords is None:
        left = small.residue(target)
        cells = enumerate_cells(spec, k)
        residual = ChainVector(spec, k, {cells[c]: v for c, v in left.items()})
        return ExpressResult(False, residual=residual)
    coeffs = tuple(coords.get(i, Fraction(0)) for i in range(len(basis)))
    combo = ChainVector.zero(spec, k)
    for c, b in zip(coeffs, basis):
        if c:
            combo = combo + b.scale(c)
    check = ech.residue((chain - combo).to_column(index))
    assert not check, "express produced a non-bounding remainder"
    return ExpressResult(True, coefficients=coeffs)


# ---------------------------------------------------------------------------
# block-sum decomposition of the ordered complex


@dataclass(frozen=True)
class DecompositionReport:
    spec: ComplexSpec
    ok: bool
    left: tuple   # betti of the ordered complex
    right: tuple  # summed shifted betti over all permutations
    sectors: int  # how many permutations contributed

    def __str__(self):
        verdict = "matches" if self.ok else "DIFFERS FROM"
        return (f"ordered homology {self.left} {verdict} "
                f"permutation sum {self.right} over {self.sectors} sectors")


def decomposition_check(labels, width: int, weights: Optional[dict] = None,
                        max_cells: int = DEFAULT_MAX_CELLS,
                        cache_dir=None) -> DecompositionReport:
    """Check that ordered homology splits over wheel decompositions.

    For every permutation sigma of the labels, the axles of sigma's wheels
    carry the total wheel weights; the permutohedron complex on those
    weighted axles contributes its homology shifted up by (number of
    labels - number of wheels).  The direct sum over all sigma must equal
    the homology of the ordered complex.
    """
    spec = cell_complex(labels, width, weights)
    weight_of = spec.weight
    left = homology_profile(spec, max_cells=max_cells, cache_dir=cache_dir)
    top = spec.top_degree()
    right = [0] * (top + 1)
    sectors = 0
    for sigma in itertools.permutations(spec.labels):
        dec = wheel_decomposition(sigma, weight_of)
        shift = spec.n - len(dec.wheels)
        pw = dict(zip(dec.superlabels, dec.weights))
        pspec = permutohedron(dec.superlabels, width, pw)
        prof = homology_profile(pspec, max_cells=max_cells, cache_dir=cache_dir)
        sectors += 1
        for d, b in enumerate(prof.betti):
            if b and d + shift <= top:
                right[d + shift] += b
            else:
                assert b == 0 or d + shift <= top, "sector exceeds the top degree"
    ok = tuple(right) == left.betti
    return DecompositionReport(spec, ok, left.betti, tuple(right), sectors)
