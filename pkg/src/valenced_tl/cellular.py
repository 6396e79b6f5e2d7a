"""Brute-force cellular data of truncated diagram algebras.

A composition ``mu = (mu_1, ..., mu_r)`` of ``n`` determines the idempotent
``e = e_1 (x) ... (x) e_r`` (a tensor product of torsion Jones-Wenzl
idempotents) and hence the truncated algebra ``e . TL_n . e``.  This module
computes, by explicit diagram arithmetic and exact linear algebra:

* bases of the truncated cell modules ``e . Delta(m)``,
* their Gram matrices, ranks and determinants,
* the full cell-data report (cell indices, dimensions, simple indices),
* diagnostic predicates (generous/lavish idempotents, radical restriction,
  commutativity).

Everything here is an *oracle*: it computes directly from diagrams, never
from closed formulas, so it can serve as the independent side of every
formula verification.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .diagram import (
    Morphism,
    PlanarDiagram,
    compose,
    enumerate_monic,
    identity_pairing,
    involution,
    monic_part,
    tensor,
)
from .jones_wenzl import lp_jw
from .qnum import (
    ExtendedNat,
    PointedRing,
    RingElement,
    render,
    render_extended_nat,
)
from .digits import is_eve

__all__ = [
    "BoundExceeded",
    "Composition",
    "CellEntry",
    "CellDataReport",
    "idempotent_e_mu",
    "cell_basis_oracle",
    "gram_matrix_oracle",
    "cell_data_oracle",
    "truncated_algebra_dim",
    "generous_lavish_test",
    "radical_restriction_test",
    "commutativity_test",
    "matrix_rank",
    "matrix_det",
    "matrix_kernel",
    "morphism_rank",
]


DEFAULT_SIZE_BOUND = 12


class BoundExceeded(Exception):
    """The requested composition is larger than the configured size bound."""

    def __init__(self, n: int, bound: int):
        self.n, self.bound = n, bound
        super().__init__(f"total size {n} exceeds the bound {bound}")


# ---------------------------------------------------------------------------
# Compositions
# ---------------------------------------------------------------------------


_COMP_RE = re.compile(r"^\s*\(?\s*(\d+(?:\s*,\s*\d+)*)\s*\)?\s*$")


@dataclass(frozen=True)
class Composition:
    """An ordered tuple of positive strand-group sizes.

    >>> Composition((3, 2)).n
    5
    >>> Composition((3, 2)).render()
    '(3,2)'
    >>> Composition.parse('3,2') == Composition((3, 2))
    True
    """

    parts: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.parts:
            raise ValueError("composition must have at least one part")
        if any(not isinstance(p, int) or p < 1 for p in self.parts):
            raise ValueError(f"parts must be positive integers: {self.parts}")

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def render(self) -> str:
        return "(%s)" % ",".join(str(p) for p in self.parts)

    @classmethod
    def parse(cls, text: str) -> "Composition":
        match = _COMP_RE.match(text)
        if match is None:
            raise ValueError(f"not a composition: {text!r}")
        return cls(tuple(int(p) for p in match.group(1).split(",")))

    def is_eve(self, ell: ExtendedNat, p: ExtendedNat) -> bool:
        """True when every part admits a classical Jones-Wenzl idempotent."""
        return all(is_eve(part, ell, p) for part in self.parts)


def _as_composition(mu: "Composition | Sequence[int]") -> Composition:
    if isinstance(mu, Composition):
        return mu
    return Composition(tuple(mu))


# ---------------------------------------------------------------------------
# Exact linear algebra
# ---------------------------------------------------------------------------
#
# All ranks, kernels and determinants are computed by Gaussian elimination
# with exact division; the coefficient rings used throughout the package are
# fields (the modulus is irreducible whenever it exists), so pivots are
# always invertible.  Pivoting is by first nonzero entry in canonical order,
# for full determinism.


def matrix_rank(rows: Sequence[Sequence[RingElement]], ring: PointedRing) -> int:
    """Rank of a matrix of ring elements."""
    work = [list(row) for row in rows]
    rank = 0
    ncols = len(work[0]) if work else 0
    col = 0
    while rank < len(work) and col < ncols:
        pivot_row = next(
            (r for r in range(rank, len(work)) if work[r][col]), None)
        if pivot_row is None:
            col += 1
            continue
        work[rank], work[pivot_row] = work[pivot_row], work[rank]
        inv = work[rank][col].inverse()
        work[rank] = [x * inv for x in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][col]:
                factor = work[r][col]
                work[r] = [a - factor * b for a, b in zip(work[r], work[rank])]
        rank += 1
        col += 1
    return rank


def matrix_det(rows: Sequence[Sequence[RingElement]], ring: PointedRing) -> RingElement:
    """Determinant of a square matrix of ring elements."""
    size = len(rows)
    if any(len(row) != size for row in rows):
        raise ValueError("matrix is not square")
    if size == 0:
        return ring.one
    work = [list(row) for row in rows]
    det = ring.one
    for col in range(size):
        pivot_row = next((r for r in range(col, size) if work[r][col]), None)
        if pivot_row is None:
            return ring.zero
        if pivot_row != col:
            work[col], work[pivot_row] = work[pivot_row], work[col]
            det = -det
        pivot = work[col][col]
        det = det * pivot
        inv = pivot.inverse()
        for r in range(col + 1, size):
            if work[r][col]:
                factor = work[r][col] * inv
                work[r] = [a - factor * b for a, b in zip(work[r], work[col])]
    return det


def matrix_kernel(rows: Sequence[Sequence[RingElement]],
                  ring: PointedRing,
                  ncols: Optional[int] = None) -> List[List[RingElement]]:
    """A basis (list of coefficient vectors) of the right kernel."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    work = [list(row) for row in rows]
    pivots: List[int] = []
    rank = 0
    for col in range(ncols):
        pivot_row = next(
            (r for r in range(rank, len(work)) if work[r][col]), None)
        if pivot_row is None:
            continue
        work[rank], work[pivot_row] = work[pivot_row], work[rank]
        inv = work[rank][col].inverse()
        work[rank] = [x * inv for x in work[rank]]
        for r in range(len(work)):
            if r != rank and work[r][col]:
                factor = work[r][col]
                work[r] = [a - factor * b for a, b in zip(work[r], work[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [ring.zero] * ncols
        vec[f] = ring.one
        for r, c in enumerate(pivots):
            vec[c] = -work[r][f]
        basis.append(vec)
    return basis


class _SpanReducer:
    """Incremental echelon form over sparse diagram-indexed vectors.

    Rows are kept pivot-normalized; adding a vector reduces it against the
    stored rows and reports whether a nonzero residual remains (i.e. the
    vector was independent of the span so far).
    """

    def __init__(self, ring: PointedRing):
        self.ring = ring
        self.rows: Dict[PlanarDiagram, Dict[PlanarDiagram, RingElement]] = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def _reduce(self, vec: Dict[PlanarDiagram, RingElement]) -> Dict[PlanarDiagram, RingElement]:
        vec = {k: v for k, v in vec.items() if v}
        for pivot in sorted(self.rows):
            coeff = vec.get(pivot)
            if not coeff:
                continue
            row = self.rows[pivot]
            for k, v in row.items():
                updated = vec.get(k, self.ring.zero) - coeff * v
                if updated:
                    vec[k] = updated
                else:
                    vec.pop(k, None)
        return vec

    def contains(self, f: Morphism) -> bool:
        return not self._reduce(dict(f.terms))

    def add(self, f: Morphism) -> bool:
        """Insert a morphism's coordinate vector; True if it was new."""
        residual = self._reduce(dict(f.terms))
        if not residual:
            return False
        pivot = min(residual)
        inv = residual[pivot].inverse()
        self.rows[pivot] = {k: v * inv for k, v in residual.items()}
        return True


def morphism_rank(morphisms: Iterable[Morphism], ring: PointedRing) -> int:
    """Dimension of the linear span of a family of morphisms."""
    reducer = _SpanReducer(ring)
    for f in morphisms:
        reducer.add(f)
    return reducer.rank


# ---------------------------------------------------------------------------
# The truncating idempotent and cell-module bases
# ---------------------------------------------------------------------------


def idempotent_e_mu(mu: "Composition | Sequence[int]", ring: PointedRing) -> Morphism:
    """The tensor product of the torsion Jones-Wenzl idempotents of the parts."""
    mu = _as_composition(mu)
    out: Optional[Morphism] = None
    for part in mu.parts:
        factor = lp_jw(part, ring)
        out = factor if out is None else tensor(out, factor)
    assert out is not None
    return out


def _valid_indices(n: int) -> List[int]:
    """Defect indices of matching parity, ascending."""
    return list(range(n % 2, n + 1, 2))


def _cell_basis(mu: Composition, m: int, ring: PointedRing,
                e: Morphism) -> Tuple[List[PlanarDiagram], List[Morphism]]:
    """Greedy basis scan; returns the kept diagrams and truncated vectors."""
    n = mu.n
    reducer = _SpanReducer(ring)
    kept_diagrams: List[PlanarDiagram] = []
    kept_vectors: List[Morphism] = []
    for t in enumerate_monic(n, m):
        vec = monic_part(compose(e, Morphism.from_diagram(t, ring)))
        if vec.is_zero():
            continue
        if reducer.add(vec):
            kept_diagrams.append(t)
            kept_vectors.append(vec)
    return kept_diagrams, kept_vectors


def cell_basis_oracle(mu: "Composition | Sequence[int]", m: int,
                      ring: PointedRing) -> List[Morphism]:
    """Basis of the truncated cell module at defect ``m``.

    Scans the monic diagrams in canonical order and keeps ``e . t`` (reduced
    modulo lower through-degree) whenever it is linearly independent of the
    vectors kept so far.
    """
    mu = _as_composition(mu)
    if not 0 <= m <= mu.n or (mu.n - m) % 2:
        raise ValueError(f"defect {m} invalid for total size {mu.n}")
    e = idempotent_e_mu(mu, ring)
    return _cell_basis(mu, m, ring, e)[1]


def gram_matrix_oracle(mu: "Composition | Sequence[int]", m: int,
                       ring: PointedRing,
                       basis: Optional[List[Morphism]] = None
                       ) -> List[List[RingElement]]:
    """Gram matrix of the cellular bilinear form on the truncated module.

    Entry (i, j) is the identity coefficient of ``involution(b_j) . b_i``;
    terms of lower through-degree cannot contribute to the identity, so the
    truncated basis vectors may be paired directly.
    """
    mu = _as_composition(mu)
    if basis is None:
        basis = cell_basis_oracle(mu, m, ring)
    flipped = [involution(b) for b in basis]
    size = len(basis)
    matrix = [[ring.zero] * size for _ in range(size)]
    for j in range(size):
        for i in range(j, size):
            entry = identity_pairing(flipped[j], basis[i])
            matrix[i][j] = entry
            matrix[j][i] = entry
    return matrix


# ---------------------------------------------------------------------------
# Full reports
# ---------------------------------------------------------------------------


@dataclass
class CellEntry:
    """One defect index of a cell-data report."""

    m: int
    dim: int
    gram_rank: int
    in_lambda0: bool
    det: Optional[RingElement] = None

    def to_json(self) -> dict:
        out = {
            "m": self.m,
            "dim": self.dim,
            "gram_rank": self.gram_rank,
            "in_lambda0": self.in_lambda0,
        }
        if self.det is not None:
            out["det"] = render(self.det)
        return out


@dataclass
class CellDataReport:
    """Cell indices, dimensions, Gram ranks and simple indices for one algebra."""

    ell: ExtendedNat
    p: ExtendedNat
    mu: Composition
    entries: List[CellEntry] = field(default_factory=list)
    algebra_dim: Optional[int] = None
    provenance: str = "ORACLE"

    @property
    def lambda_set(self) -> List[int]:
        return [entry.m for entry in self.entries]

    @property
    def lambda0_set(self) -> List[int]:
        return [entry.m for entry in self.entries if entry.in_lambda0]

    def dims(self) -> Dict[int, int]:
        return {entry.m: entry.dim for entry in self.entries}

    def to_json(self) -> dict:
        return {
            "ell": render_extended_nat(self.ell),
            "p": render_extended_nat(self.p),
            "mu": list(self.mu.parts),
            "entries": [entry.to_json() for entry in self.entries],
            "algebra_dim": self.algebra_dim,
            "provenance": self.provenance,
        }


def truncated_algebra_dim(mu: "Composition | Sequence[int]", ring: PointedRing,
                          e: Optional[Morphism] = None) -> int:
    """Dimension of ``e . TL_n . e`` by direct span computation.

    Every (n, n)-diagram ``d`` of through-degree ``m`` factors uniquely as
    ``a . involution(b)`` with ``a``, ``b`` monic (n, m)-diagrams, so the
    span of all ``e . d . e`` equals the span of the products
    ``(e . a) . involution(e . b)``.  By bilinearity it suffices to multiply
    spanning subsets of the factors, which keeps the product count small.
    """
    mu = _as_composition(mu)
    n = mu.n
    if e is None:
        e = idempotent_e_mu(mu, ring)
    reducer = _SpanReducer(ring)
    for m in _valid_indices(n):
        factors = _SpanReducer(ring)
        spanning: List[Morphism] = []
        for a in enumerate_monic(n, m):
            v = compose(e, Morphism.from_diagram(a, ring))
            if not v.is_zero() and factors.add(v):
                spanning.append(v)
        flipped = [involution(v) for v in spanning]
        for v in spanning:
            for w in flipped:
                reducer.add(compose(v, w))
    return reducer.rank


def cell_data_oracle(mu: "Composition | Sequence[int]", ring: PointedRing,
                     with_matrices: bool = False,
                     bound: int = DEFAULT_SIZE_BOUND,
                     check_dimension: bool = True) -> CellDataReport:
    """Assemble the full cell-data report by brute diagram arithmetic.

    With ``check_dimension`` the sum of squared cell dimensions is compared
    against the directly computed dimension of the truncated algebra; any
    disagreement raises, since it would indicate the kept bases are wrong.
    """
    mu = _as_composition(mu)
    n = mu.n
    if n > bound:
        raise BoundExceeded(n, bound)
    e = idempotent_e_mu(mu, ring)
    report = CellDataReport(ring.ell, ring.p, mu)
    dim_total = 0
    for m in _valid_indices(n):
        basis = _cell_basis(mu, m, ring, e)[1]
        if not basis:
            continue
        gram = gram_matrix_oracle(mu, m, ring, basis=basis)
        rank = matrix_rank(gram, ring)
        entry = CellEntry(m=m, dim=len(basis), gram_rank=rank,
                          in_lambda0=rank > 0)
        if with_matrices:
            entry.det = matrix_det(gram, ring)
        report.entries.append(entry)
        dim_total += len(basis) ** 2
    if check_dimension:
        direct = truncated_algebra_dim(mu, ring, e=e)
        if direct != dim_total:
            raise ArithmeticError(
                f"cellular dimension identity failed for {mu.render()}: "
                f"sum of squares {dim_total} != algebra dimension {direct}")
        report.algebra_dim = direct
    else:
        report.algebra_dim = dim_total
    return report


# ---------------------------------------------------------------------------
# Diagnostics
# ---------------------------------------------------------------------------


def generous_lavish_test(mu: "Composition | Sequence[int]",
                         ring: PointedRing) -> dict:
    """Classify the truncating idempotent.

    *Generous*: at every defect the surviving truncated diagrams are linearly
    independent, hence a basis of the truncated cell module.  *Lavish*: a
    diagram is killed in the cell module exactly when it is killed as a plain
    morphism.  Returns witnesses (defect, diagram) for each failure.
    """
    mu = _as_composition(mu)
    n = mu.n
    e = idempotent_e_mu(mu, ring)
    generous = True
    lavish = True
    witnesses: Dict[str, List[Tuple[int, PlanarDiagram]]] = {
        "generous": [], "lavish": []}
    for m in _valid_indices(n):
        reducer = _SpanReducer(ring)
        for t in enumerate_monic(n, m):
            full = compose(e, Morphism.from_diagram(t, ring))
            truncated = monic_part(full)
            if truncated.is_zero() != full.is_zero():
                lavish = False
                witnesses["lavish"].append((m, t))
            if truncated.is_zero():
                continue
            if not reducer.add(truncated):
                generous = False
                witnesses["generous"].append((m, t))
    return {"generous": generous, "lavish": lavish, "witnesses": witnesses}


def _tl_gram(n: int, m: int, ring: PointedRing,
             diagrams: List[PlanarDiagram]) -> List[List[RingElement]]:
    morphs = [Morphism.from_diagram(t, ring) for t in diagrams]
    flipped = [involution(f) for f in morphs]
    size = len(diagrams)
    matrix = [[ring.zero] * size for _ in range(size)]
    for j in range(size):
        for i in range(j, size):
            entry = compose(flipped[j], morphs[i]).identity_coefficient()
            matrix[i][j] = entry
            matrix[j][i] = entry
    return matrix


def radical_restriction_test(mu: "Composition | Sequence[int]", m: int,
                             ring: PointedRing) -> bool:
    """Does truncating the radical give the radical of the truncation?

    The radical of a cell module is the kernel of its Gram form.  The left
    side applies the idempotent to the kernel of the full diagram module;
    the right side is the kernel of the truncated Gram form.  Returns whether
    the two spans coincide.
    """
    mu = _as_composition(mu)
    n = mu.n
    e = idempotent_e_mu(mu, ring)
    diagrams = enumerate_monic(n, m)
    tl_kernel = matrix_kernel(_tl_gram(n, m, ring, diagrams), ring,
                              ncols=len(diagrams))
    left: List[Morphism] = []
    for coeffs in tl_kernel:
        vec = Morphism.zero(n, m, ring)
        for c, t in zip(coeffs, diagrams):
            if c:
                vec = vec + c * Morphism.from_diagram(t, ring)
        left.append(monic_part(compose(e, vec)))

    basis = _cell_basis(mu, m, ring, e)[1]
    right: List[Morphism] = []
    if basis:
        gram = gram_matrix_oracle(mu, m, ring, basis=basis)
        for coeffs in matrix_kernel(gram, ring, ncols=len(basis)):
            vec = Morphism.zero(n, m, ring)
            for c, b in zip(coeffs, basis):
                if c:
                    vec = vec + c * b
            right.append(vec)

    rank_left = morphism_rank(left, ring)
    rank_right = morphism_rank(right, ring)
    rank_both = morphism_rank(left + right, ring)
    return rank_left == rank_right == rank_both


def commutativity_test(mu: "Composition | Sequence[int]",
                       ring: PointedRing) -> bool:
    """Is the truncated algebra commutative?

    Builds the cellular spanning set ``e . t_i . involution(t_j) . e`` from
    the kept basis diagrams of each cell module and checks pairwise
    commutation; commuting on a spanning set decides the whole algebra.
    """
    mu = _as_composition(mu)
    n = mu.n
    e = idempotent_e_mu(mu, ring)
    spanning: List[Morphism] = []
    for m in _valid_indices(n):
        kept = _cell_basis(mu, m, ring, e)[0]
        vectors = [compose(e, Morphism.from_diagram(t, ring)) for t in kept]
        flipped = [involution(v) for v in vectors]
        for v in vectors:
            for w in flipped:
                spanning.append(compose(v, w))
    for i, x in enumerate(spanning):
        for y in spanning[i + 1:]:
            if compose(x, y) != compose(y, x):
                return False
    return True
