"""Rational cellular chains and the weighted boundary operator.

The boundary of a single block b splits it into an ordered pair of
complementary nonempty subsequences (e1, e2), with coefficient

    (-1)^{wlength(e1)} * wsgn(b -> e1 e2),

and extends to several blocks by the Leibniz rule with Koszul sign
(-1)^{sum of wdim of the blocks to the left}.  The same formula serves the
ordered complexes and the weighted permutohedra: subsequences of an
ascending block are ascending, so no second convention is needed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

from .cells import (
    ComplexSpec,
    canonical_key,
    cell_index,
    enumerate_cells,
    format_cell,
    top_dim,
    validate_cell,
    wdim,
    wlength,
    wsgn,
)


class ChainVector:
    """Sparse rational chain in a fixed complex and topological degree."""

    __slots__ = ("spec", "degree", "coeffs")

    def __init__(self, spec: ComplexSpec, degree: int, coeffs: Optional[dict] = None,
                 validate: bool = False):
        self.spec = spec
        self.degree = degree
        self.coeffs = {c: v for c, v in (coeffs or {}).items() if v != 0}
        if validate:
            for c in self.coeffs:
                validate_cell(c, spec)
                if top_dim(c) != degree:
                    raise ValueError(
                        f"cell {format_cell(c)} has dimension {top_dim(c)}, chain degree {degree}")

    @classmethod
    def zero(cls, spec: ComplexSpec, degree: int) -> "ChainVector":
        return cls(spec, degree, {})

    @classmethod
    def of_cell(cls, spec: ComplexSpec, cell, coeff=1) -> "ChainVector":
        return cls(spec, top_dim(cell), {tuple(map(tuple, cell)): coeff}, validate=True)

    def is_zero(self) -> bool:
        return not self.coeffs

    def terms(self):
        """(cell, coefficient) pairs in canonical cell order."""
        return sorted(self.coeffs.items(), key=lambda kv: canonical_key(kv[0]))

    def support(self):
        return set(self.coeffs)

    def __add__(self, other: "ChainVector") -> "ChainVector":
        self._check(other)
        out = dict(self.coeffs)
        for c, v in other.coeffs.items():
            s = out.get(c, 0) + v
            if s == 0:
                out.pop(c, None)
            else:
                out[c] = s
        return ChainVector(self.spec, self.degree, out)

    def __sub__(self, other: "ChainVector") -> "ChainVector":
        return self + (-other)

    def __neg__(self) -> "ChainVector":
        return ChainVector(self.spec, self.degree, {c: -v for c, v in self.coeffs.items()})

    def scale(self, s) -> "ChainVector":
        if s == 0:
            return ChainVector.zero(self.spec, self.degree)
        return ChainVector(self.spec, self.degree, {c: v * s for c, v in self.coeffs.items()})

    __mul__ = scale
    __rmul__ = scale

    def __eq__(self, other) -> bool:
        return (isinstance(other, ChainVector) and self.spec == other.spec
                and self.degree == other.degree
                and all(Fraction(v) == Fraction(other.coeffs.get(c, 0)) for c, v in self.coeffs.items())
                and all(c in self.coeffs for c in other.coeffs))

    def __hash__(self):
        raise TypeError("chains are not hashable")

    def _check(self, other: "ChainVector") -> None:
        if self.spec != other.spec or self.degree != other.degree:
            raise ValueError("chains live in different complexes or degrees")

    def __repr__(self):
        if self.is_zero():
            return "0"
        bits = []
        for c, v in self.terms():
            bits.append(f"({v})*`{format_cell(c)}`")
        return " + ".join(bits)

    def to_column(self, index: Optional[dict] = None) -> dict:
        """Coefficients keyed by canonical cell index."""
        if index is None:
            index = cell_index(self.spec, self.degree)
        return {index[c]: Fraction(v) for c, v in self.coeffs.items()}


# ---------------------------------------------------------------------------
# boundary


@lru_cache(maxsize=200000)
def boundary_cell(spec: ComplexSpec, cell) -> tuple:
    """Facets of one cell with signs, ordered (block index, split size, lex mask)."""
    out = []
    prefix_sign = 1
    for i, block in enumerate(cell):
        if len(block) >= 2:
            for r in range(1, len(block)):
                for mask in itertools.combinations(range(len(block)), r):
                    inmask = set(mask)
                    e1 = tuple(block[p] for p in mask)
                    e2 = tuple(block[p] for p in range(len(block)) if p not in inmask)
                    coef = prefix_sign * wsgn(block, e1 + e2, spec)
                    if wlength(e1, spec) % 2 == 1:
                        coef = -coef
                    facet = cell[:i] + (e1, e2) + cell[i + 1:]
                    out.append((facet, coef))
        prefix_sign *= -1 if (wlength(block, spec) - 1) % 2 == 1 else 1
    return tuple(out)


def boundary(chain: ChainVector) -> ChainVector:
    out: dict = {}
    for cell, v in chain.coeffs.items():
        for facet, s in boundary_cell(chain.spec, cell):
            t = out.get(facet, 0) + v * s
            if t == 0:
                out.pop(facet, None)
            else:
                out[facet] = t
    return ChainVector(chain.spec, chain.degree - 1, out)


def is_cycle(chain: ChainVector) -> bool:
    return chain.degree == 0 or boundary(chain).is_zero()


# ---------------------------------------------------------------------------
# concatenation product


def merge_specs(a: ComplexSpec, b: ComplexSpec) -> ComplexSpec:
    if a.kind != b.kind:
        raise ValueError("cannot concatenate chains of different complex kinds")
    if a.width != b.width:
        raise ValueError("cannot concatenate chains of different widths")
    if set(a.labels) & set(b.labels):
        raise ValueError("label sets overlap")
    labels = tuple(sorted(a.labels + b.labels))
    wmap = dict(zip(a.labels, a.weights)) | dict(zip(b.labels, b.weights))
    return ComplexSpec(a.kind, labels, tuple(wmap[x] for x in labels), a.width)


def concat(a: ChainVector, b: ChainVector) -> ChainVector:
    """Place configuration a entirely to the left of configuration b.

    Satisfies d(a|b) = da|b + (-1)^{wdim a} a|db, so concatenations of
    cycles are cycles.
    """
    spec = merge_specs(a.spec, b.spec)
    out: dict = {}
    for ca, va in a.coeffs.items():
        for cb, vb in b.coeffs.items():
            out[ca + cb] = out.get(ca + cb, 0) + va * vb
    return ChainVector(spec, a.degree + b.degree, out)


def concat_all(chains: Iterable[ChainVector], width, kind="cell") -> ChainVector:
    """Concatenation of several chains; the empty product is the unit.

    The unit is the empty-configuration 0-chain, whose complex has no
    labels at all.
    """
    from .cells import cell_complex, permutohedron

    result = None
    for ch in chains:
        result = ch if result is None else concat(result, ch)
    if result is None:
        empty = cell_complex((), width) if kind == "cell" else permutohedron((), width)
        return ChainVector(empty, 0, {(): 1})
    return result


# ---------------------------------------------------------------------------
# boundary matrices


@dataclass(frozen=True)
class BoundaryMatrix:
    spec: ComplexSpec
    degree: int
    rows: int
    cols: int
    triplets: tuple  # sorted (row, col, value)

    def columns(self) -> list:
        cols: list = [dict() for _ in range(self.cols)]
        for r, c, v in self.triplets:
            cols[c][r] = v
        return cols

    def row_lists(self) -> list:
        rows: list = [dict() for _ in range(self.rows)]
        for r, c, v in self.triplets:
            rows[r][c] = v
        return rows


def boundary_matrix(spec: ComplexSpec, degree: int, cache_dir=None) -> BoundaryMatrix:
    """Matrix of d_degree with rows/cols in canonical cell order.

    Column j is the boundary of the j-th `degree`-cell expressed in the
    (degree-1)-cells.  Persisted to `cache_dir` when given.
    """
    if degree < 1:
        raise ValueError("boundary_matrix is defined for degree >= 1")
    if cache_dir is not None:
        from . import cache
        cached = cache.load_matrix(cache_dir, spec, degree)
        if cached is not None:
            return cached
    lower = cell_index(spec, degree - 1)
    uppers = enumerate_cells(spec, degree)
    trips = []
    for j, cell in enumerate(uppers):
        for facet, s in boundary_cell(spec, cell):
            trips.append((lower[facet], j, s))
    mat = BoundaryMatrix(spec, degree, len(lower), len(uppers), tuple(sorted(trips)))
    if cache_dir is not None:
        from . import cache
        cache.store_matrix(cache_dir, spec, degree, mat)
    return mat


@dataclass
class BoundaryReport:
    spec: ComplexSpec
    max_degree: int
    ok: bool
    failures: list = field(default_factory=list)


def verify_boundary_squared(spec: ComplexSpec) -> BoundaryReport:
    """Check d(d(cell)) = 0 for every cell of every degree >= 2."""
    report = BoundaryReport(spec, max_degree=max(spec.top_degree(), 0), ok=True)
    for k in range(2, spec.top_degree() + 1):
        for cell in enumerate_cells(spec, k):
            dd = boundary(boundary(ChainVector(spec, k, {cell: 1})))
            if not dd.is_zero():
                report.ok = False
                report.failures.append((k, format_cell(cell)))
    return report
