"""Closed-form cell data for truncated diagram algebras.

Everything the brute-force machinery in :mod:`valenced_tl.cellular` can
compute by linear algebra has a combinatorial counterpart here: walk
counts for cell-module dimensions, index sets built from digit data,
theta networks and the product formulas for Gram determinants, and the
classification of simple modules for several families of compositions
(two-part Eve, seam, and small-tensor algebras).

All ring-valued results are computed over the generic field Q(d) first
and then reduced into the requested ring, so that intermediate divisions
never hit zero divisors.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import comb
from typing import Dict, FrozenSet, List, Tuple

from .cellular import Composition
from .digits import (
    dominates,
    e_mu,
    generation,
    is_eve,
    mother,
    support,
    tails,
    to_digits,
)
from .jones_wenzl import lambda_scalar
from .qnum import (
    INFINITY,
    ExtendedNat,
    PointedRing,
    RingElement,
    generic_ring,
    is_finite,
    p_power,
    quantum_binomial,
    quantum_factorial,
    quantum_int,
)

__all__ = [
    "IncompatibleTriple",
    "WalkTuple",
    "walk_count",
    "walks",
    "associated_compositions",
    "lambda_mu",
    "dim_delta",
    "theta",
    "theta_normalized",
    "gram_det_formula",
    "gram_det_tl",
    "gram_det_seam",
    "TwoPartEveData",
    "two_part_eve",
    "seam_data",
    "tl_standard_lambda0",
    "seam_lambda0_eve",
    "SeamClassification",
    "TwoPartSeamData",
    "two_part_seam",
    "clamp_trace_id_coeff",
    "SmallTensorData",
    "small_tensor",
    "TensorEllData",
    "tensor_ell",
    "gram_small_tensor_entry",
    "tensor_ell_cross_entry",
]


class IncompatibleTriple(ValueError):
    """Raised when three strand counts cannot meet at a trivalent vertex."""


def _parts(mu) -> Tuple[int, ...]:
    if isinstance(mu, Composition):
        return mu.parts
    return tuple(int(x) for x in mu)


# ---------------------------------------------------------------------------
# Walks and cell-module dimensions
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _walk_count(parts: Tuple[int, ...], m: int) -> int:
    if m < 0:
        return 0
    if not parts:
        return 1 if m == 0 else 0
    head, last = parts[:-1], parts[-1]
    return sum(_walk_count(head, m + last - 2 * g) for g in range(min(last, m) + 1))


def walk_count(mu, m: int) -> int:
    """Number of non-negative lattice walks over ``mu`` ending at height ``m``.

    Each part of ``mu`` contributes a monotone run of falls followed by
    rises; the walk starts at 0, never goes negative, and ends at ``m``.

    >>> walk_count((4,), 4)
    1
    >>> walk_count((1, 1, 1, 1), 2)
    3
    """
    if m < 0:
        raise ValueError("end height must be non-negative")
    return _walk_count(_parts(mu), m)


@dataclass(frozen=True)
class WalkTuple:
    """A walk over ``mu`` recorded by its fall tuple ``t``.

    Part ``i`` of the walk falls ``t[i]`` steps and then rises
    ``mu[i] - t[i]`` steps; the first part never falls.

    >>> w = WalkTuple((2, 2), (0, 1))
    >>> w.rises, w.heights, w.end_height
    ((2, 1), (2, 2), 2)
    """

    mu: Tuple[int, ...]
    t: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.mu) != len(self.t):
            raise ValueError("fall tuple length must match the composition")
        if self.t and self.t[0] != 0:
            raise ValueError("the first part of a walk never falls")
        h = 0
        for part, fall in zip(self.mu, self.t):
            if fall < 0 or fall > part or fall > h:
                raise ValueError("walk crosses the axis")
            h += part - 2 * fall

    @property
    def rises(self) -> Tuple[int, ...]:
        return tuple(p - f for p, f in zip(self.mu, self.t))

    @property
    def heights(self) -> Tuple[int, ...]:
        out: List[int] = []
        h = 0
        for part, fall in zip(self.mu, self.t):
            h += part - 2 * fall
            out.append(h)
        return tuple(out)

    @property
    def end_height(self) -> int:
        return self.heights[-1] if self.mu else 0


def walks(mu, m: int) -> List[WalkTuple]:
    """All walks over ``mu`` ending at ``m``, lexicographic in the fall tuple.

    >>> [w.t for w in walks((1, 1, 1, 1), 2)]
    [(0, 0, 0, 1), (0, 0, 1, 0), (0, 1, 0, 0)]
    """
    parts = _parts(mu)
    out: List[WalkTuple] = []

    def extend(prefix: Tuple[int, ...], height: int) -> None:
        i = len(prefix)
        if i == len(parts):
            if height == m:
                out.append(WalkTuple(parts, prefix))
            return
        top = 0 if i == 0 else min(parts[i], height)
        for fall in range(top + 1):
            new_height = height + parts[i] - 2 * fall
            # Prune: the remaining parts can move the height by at most
            # their total in either direction.
            remaining = sum(parts[i + 1:])
            if abs(new_height - m) <= remaining:
                extend(prefix + (fall,), new_height)

    extend((), 0)
    return out


def associated_compositions(mu, ring: PointedRing) -> List[Tuple[int, ...]]:
    """Cartesian product of the supports of the parts of ``mu``.

    Entries are raw integer tuples (zero entries are possible and
    meaningful: a zero part contributes no strands).

    >>> from .qnum import generic_ring
    >>> associated_compositions((2, 1), generic_ring())
    [(2, 1)]
    """
    supports = [support(part, ring.ell, ring.p) for part in _parts(mu)]
    return [tuple(choice) for choice in product(*supports)]


def lambda_mu(mu, ring: PointedRing) -> Tuple[int, ...]:
    """Sorted cell indices of the truncated algebra on ``mu``.

    >>> from .qnum import generic_ring
    >>> lambda_mu((3, 3), generic_ring())
    (0, 2, 4, 6)
    """
    indices = set()
    for a in associated_compositions(mu, ring):
        indices.update(e_mu([x for x in a if x] or [0]))
    return tuple(sorted(indices))


def dim_delta(mu, m: int, ring: PointedRing) -> int:
    """Dimension of the cell module at index ``m``.

    >>> from .qnum import generic_ring
    >>> dim_delta((1, 1, 1, 1), 2, generic_ring())
    3
    """
    return sum(walk_count(a, m) for a in associated_compositions(mu, ring))


# ---------------------------------------------------------------------------
# Theta networks
# ---------------------------------------------------------------------------


def _theta_legs(r: int, s: int, t: int) -> Tuple[int, int, int]:
    if min(r, s, t) < 0 or (r + s + t) % 2 or t < abs(r - s) or t > r + s:
        raise IncompatibleTriple(f"no trivalent vertex joins ({r}, {s}, {t})")
    i = (r + t - s) // 2
    j = (r + s - t) // 2
    k = (s + t - r) // 2
    return i, j, k


def theta(r: int, s: int, t: int, ring: PointedRing) -> RingElement:
    """Value of the closed trivalent network on strand counts r, s, t.

    The value is normalized so that closing a single projector gives a
    positive quantum integer; in particular ``theta(r, s, r + s)``
    equals ``[r + s + 1]``.

    >>> from .qnum import generic_ring, render
    >>> render(theta(2, 2, 2, generic_ring()))
    '(d^4-3*d^2+2)/(d)'
    """
    i, j, k = _theta_legs(r, s, t)
    g = generic_ring()
    num = quantum_factorial(i + j + k + 1, g)
    for leg in (i, j, k):
        num = num * quantum_factorial(leg, g)
    den = (
        quantum_factorial(i + j, g)
        * quantum_factorial(j + k, g)
        * quantum_factorial(k + i, g)
    )
    return ring.from_generic(num / den)


def theta_normalized(r: int, s: int, t: int, ring: PointedRing) -> RingElement:
    """``theta(r, s, t) / [t + 1]`` in closed binomial form.

    >>> from .qnum import generic_ring, render
    >>> render(theta_normalized(2, 2, 2, generic_ring()))
    '(d^2-2)/(d)'
    """
    i, j, k = _theta_legs(r, s, t)
    g = generic_ring()
    value = quantum_binomial(i + j + k + 1, j, g) / (
        quantum_binomial(r, j, g) * quantum_binomial(s, j, g)
    )
    return ring.from_generic(value)


# ---------------------------------------------------------------------------
# Gram determinant product formulas
# ---------------------------------------------------------------------------


def gram_det_formula(mu, m: int, ring: PointedRing) -> RingElement:
    """Gram determinant of the cell module at ``m`` as a theta product.

    The product runs over all walks; each walk contributes one
    normalized theta value per adjacent pair of heights.

    >>> from .qnum import generic_ring, render
    >>> render(gram_det_formula((2, 2), 2, generic_ring()))
    '(d^2-2)/(d)'
    """
    parts = _parts(mu)
    g = generic_ring()
    value = g.one
    for walk in walks(parts, m):
        heights = walk.heights
        for i in range(len(parts) - 1):
            value = value * theta_normalized(
                heights[i], parts[i + 1], heights[i + 1], g
            )
    return ring.from_generic(value)


def _tl_dim(n: int, m: int) -> int:
    """Dimension of the standard module of the untruncated algebra."""
    if m < 0 or m > n or (n - m) % 2:
        return 0
    half = (n - m) // 2
    return comb(n, half) - (comb(n, half - 1) if half >= 1 else 0)


def gram_det_tl(n: int, m: int, ring: PointedRing) -> RingElement:
    """Gram determinant of the untruncated standard module at ``m``.

    >>> from .qnum import generic_ring, render
    >>> render(gram_det_tl(2, 0, generic_ring()))
    'd'
    """
    if not 0 <= m <= n or (n - m) % 2:
        raise ValueError("index and strand count must have equal parity")
    g = generic_ring()
    value = g.one
    for j in range(1, (n - m) // 2 + 1):
        e = _tl_dim(n, m + 2 * j)
        if e:
            value = value * (quantum_int(m + j + 1, g) / quantum_int(j, g)) ** e
    return ring.from_generic(value)


def gram_det_seam(k: int, b: int, m: int, ring: PointedRing) -> RingElement:
    """Gram determinant for the seam composition ``(k, 1^b)`` at index ``m``.

    Exponents are generic cell-module dimensions; the first product
    lowers the big part, the second raises the index.

    >>> from .qnum import generic_ring, render
    >>> render(gram_det_seam(2, 1, 1, generic_ring()))
    '(d^2-1)/(d)'
    """
    g = generic_ring()
    n = k + b
    if not 0 <= m <= n or (n - m) % 2:
        raise ValueError("index and strand count must have equal parity")
    mu = (k,) + (1,) * b
    value = g.one
    for j in range(1, k // 2 + 1):
        e = dim_delta((k - 2 * j,) + (1,) * b, m, g)
        if e:
            value = value * (quantum_int(j, g) / quantum_int(k - j + 1, g)) ** e
    for j in range(1, (n - m) // 2 + 1):
        e = dim_delta(mu, m + 2 * j, g)
        if e:
            value = value * (quantum_int(m + j + 1, g) / quantum_int(j, g)) ** e
    return ring.from_generic(value)


# ---------------------------------------------------------------------------
# Two-part Eve compositions
# ---------------------------------------------------------------------------


def _eve_digit(n: int, ell: ExtendedNat, p: ExtendedNat) -> Tuple[int, int]:
    """For Eve ``n`` return ``(a, i)`` with ``n + 1 = a * w(i)``."""
    digs = to_digits(n + 1, ell, p)
    nonzero = [(d, i) for i, d in enumerate(reversed(digs.digits)) if d]
    if len(nonzero) != 1:
        raise ValueError(f"{n} is not Eve for ({ell}, {p})")
    return nonzero[0]


def _radix(i: int, ell: ExtendedNat, p: ExtendedNat) -> ExtendedNat:
    return ell if i == 0 else p


def _half_max_digits(i2: int, ell: ExtendedNat, p: ExtendedNat) -> List[range]:
    """Ranges of the low digits ``k_i`` (i < i2) kept by the dominance test."""
    out = []
    for i in range(i2):
        r = _radix(i, ell, p)
        out.append(range((int(r) - 1) // 2 + 1 if is_finite(r) else 0))
    return out


def _two_part_xset(
    mu1: int, mu2: int, ell: ExtendedNat, p: ExtendedNat
) -> List[range]:
    """Allowed top digit of ``k`` in the explicit description of the
    non-degenerate indices of a two-part Eve composition."""
    a1, i1 = _eve_digit(mu1, ell, p)
    a2, i2 = _eve_digit(mu2, ell, p)
    if i1 > i2:
        return [range((a2 - 1) // 2 + 1)]
    r = _radix(i1, ell, p)
    total = a1 + a2 - 1
    if is_finite(r) and total >= int(r):
        c = total - int(r)
        hi = min(a2, (int(r) + c) // 2)
        return [range(c // 2 + 1), range(c + 1, hi + 1)]
    return [range(total // 2 + 1)]


def two_part_eve_lambda0_xset(mu, ring: PointedRing) -> Tuple[int, ...]:
    """Non-degenerate indices of a two-part Eve composition, built from
    the explicit digit description of the allowed ``k`` values."""
    mu1, mu2 = sorted(_parts(mu), reverse=True)
    ell, p = ring.ell, ring.p
    _, i2 = _eve_digit(mu2, ell, p)
    n = mu1 + mu2
    low = _half_max_digits(i2, ell, p)
    out = set()
    for top_range in _two_part_xset(mu1, mu2, ell, p):
        for top in top_range:
            for lows in product(*low):
                k = top * p_power(i2, ell, p) + sum(
                    d * p_power(i, ell, p) for i, d in enumerate(lows)
                )
                if 0 <= k <= mu2:
                    out.add(n - 2 * k)
    return tuple(sorted(out))


@dataclass(frozen=True)
class TwoPartEveData:
    """Closed-form cell data of a two-part Eve composition."""

    mu: Tuple[int, int]
    lambda_set: Tuple[int, ...]
    lambda0: Tuple[int, ...]
    lambda0_xset: Tuple[int, ...]
    eigenvalues: Dict[int, RingElement]
    gram_dets: Dict[int, RingElement]


def two_part_eve(mu, ring: PointedRing) -> TwoPartEveData:
    """Cell indices, simple indices, Gram determinants, and the action
    eigenvalue of the seam generator for a two-part Eve composition.

    >>> from .qnum import build_ring
    >>> data = two_part_eve((3, 3), build_ring(5, INFINITY))
    >>> data.lambda0
    (0, 4, 6)
    """
    parts = _parts(mu)
    if len(parts) != 2:
        raise ValueError("expected a two-part composition")
    ell, p = ring.ell, ring.p
    if not all(is_eve(x, ell, p) for x in parts):
        raise ValueError(f"{parts} is not Eve for ({ell}, {p})")
    mu1, mu2 = sorted(parts, reverse=True)
    n = mu1 + mu2
    lam = tuple(range(mu1 - mu2, n + 1, 2))
    g = generic_ring()
    dets: Dict[int, RingElement] = {}
    eigs: Dict[int, RingElement] = {}
    lambda0 = []
    for k in range(mu2 + 1):
        m = n - 2 * k
        det = quantum_binomial(n - k + 1, k, g) / (
            quantum_binomial(mu1, k, g) * quantum_binomial(mu2, k, g)
        )
        dets[m] = ring.from_generic(det)
        eig = (quantum_int(k, g) * quantum_int(n - k + 1, g)) / (
            quantum_int(mu1, g) * quantum_int(mu2, g)
        )
        eigs[m] = ring.from_generic(eig)
        if dominates((n + m) // 2 + 1, (n - m) // 2, ell, p):
            lambda0.append(m)
    return TwoPartEveData(
        mu=(mu1, mu2),
        lambda_set=lam,
        lambda0=tuple(sorted(lambda0)),
        lambda0_xset=two_part_eve_lambda0_xset((mu1, mu2), ring),
        eigenvalues=eigs,
        gram_dets=dets,
    )


# ---------------------------------------------------------------------------
# Seam algebras (k, 1^b)
# ---------------------------------------------------------------------------


def seam_data(k: int, b: int, ring: PointedRing) -> Dict[int, int]:
    """Cell indices and dimensions of the seam algebra on ``(k, 1^b)``.

    Returns a mapping index -> dimension (only nonzero dimensions).

    >>> from .qnum import build_ring
    >>> seam_data(2, 2, build_ring(2, 2))
    {0: 2, 2: 3, 4: 1}
    """
    ell, p = ring.ell, ring.p
    out: Dict[int, int] = {}
    n = k + b
    for m in range(n % 2, n + 1, 2):
        dim = 0
        for a in support(k, ell, p):
            if (b + a - m) % 2:
                continue
            half = (b + a - m) // 2
            if not 0 <= half <= b:
                continue
            other = (b - a - m - 2) // 2
            dim += comb(b, half) - (comb(b, other) if 0 <= other <= b else 0)
        if dim:
            out[m] = dim
    return out


def tl_standard_lambda0(n: int, ring: PointedRing) -> Tuple[int, ...]:
    """Indices of standard modules of the untruncated algebra carrying a
    nonzero form: every index of correct parity, except 0 when the loop
    value is zero and ``n`` is even.

    >>> from .qnum import build_ring
    >>> tl_standard_lambda0(4, build_ring(2, 2))
    (2, 4)
    """
    out = list(range(n % 2, n + 1, 2))
    if n % 2 == 0 and n > 0 and ring.delta.is_zero():
        out.remove(0)
    return tuple(out)


def seam_lambda0_eve(k: int, b: int, ring: PointedRing) -> Tuple[int, ...]:
    """Simple-module indices of the seam algebra on Eve ``(k, 1^b)``.

    The union runs over truncations of the top digit of ``k + 1``; each
    term is a shifted copy of the simple indices of a smaller
    untruncated algebra.

    >>> from .qnum import build_ring
    >>> seam_lambda0_eve(3, 1, build_ring(4, 3))
    (4,)
    """
    ell, p = ring.ell, ring.p
    if not is_eve(k, ell, p):
        raise ValueError(f"{k} is not Eve for ({ell}, {p})")
    k_r, r = _eve_digit(k, ell, p)
    w = p_power(r, ell, p)
    out = set()
    for c in range(1, k_r + 1):
        inner = b - k + c * w - 1
        if inner < 0:
            continue
        base = c * w - 1
        for m in tl_standard_lambda0(inner, ring):
            out.add(base + m)
        # When the loop value vanishes, the inner untruncated algebra
        # drops index 0, but the full seam module at ``base`` stays
        # non-degenerate: its Gram form picks up off-diagonal terms
        # between basis vectors with different defect profiles, which
        # exist whenever the inner strand count is a positive even
        # number.  (Verified against the brute-force oracle.)
        if ring.delta.is_zero() and inner >= 2 and inner % 2 == 0:
            out.add(base)
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# Two-part seam (k, 1) classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeamClassification:
    """Partition of the simple-module indices by cell-module dimension.

    ``lambda_1a`` and ``lambda_1b`` index one-dimensional simples,
    ``lambda_2a`` and ``lambda_2b`` two-dimensional ones.
    """

    lambda_1a: FrozenSet[int]
    lambda_1b: FrozenSet[int]
    lambda_2a: FrozenSet[int]
    lambda_2b: FrozenSet[int] = frozenset()

    def __post_init__(self) -> None:
        sets = [self.lambda_1a, self.lambda_1b, self.lambda_2a, self.lambda_2b]
        total = sum(len(s) for s in sets)
        union = frozenset().union(*sets)
        if len(union) != total:
            raise ValueError("classification sets must be pairwise disjoint")

    @property
    def lambda0(self) -> FrozenSet[int]:
        return self.lambda_1a | self.lambda_1b | self.lambda_2a | self.lambda_2b

    @property
    def dim_one(self) -> FrozenSet[int]:
        return self.lambda_1a | self.lambda_1b

    @property
    def dim_two(self) -> FrozenSet[int]:
        return self.lambda_2a | self.lambda_2b


@dataclass(frozen=True)
class TwoPartSeamData:
    """Cell data and simple-module classification of ``(k, 1)``."""

    k: int
    lambda_set: Tuple[int, ...]
    dims: Dict[int, int]
    algebra_dim: int
    classification: SeamClassification


def _divides(d: ExtendedNat, n: int) -> bool:
    return is_finite(d) and n % int(d) == 0


def two_part_seam(k: int, ring: PointedRing) -> TwoPartSeamData:
    """Cell data of the algebra on ``(k, 1)`` with its classification of
    simple modules into one- and two-dimensional families.

    >>> from .qnum import build_ring
    >>> data = two_part_seam(2, build_ring(2, 2))
    >>> sorted(data.classification.lambda0)
    [1, 3]
    """
    if k < 1:
        raise ValueError("the big part must be positive")
    ell, p = ring.ell, ring.p
    supp = support(k, ell, p)
    lam = sorted({a + d for a in supp for d in (-1, 1) if a + d >= 0})
    minus = {a - 1 for a in supp if a - 1 >= 0}
    plus = {a + 1 for a in supp}
    twos = minus & plus
    dims = {m: (2 if m in twos else 1) for m in lam}

    gen = generation(k, ell, p)
    tail = tails(k, ell, p)
    n = k + 1
    # A tail only produces support members two apart (and hence a
    # two-dimensional simple) when the truncated index stays
    # non-negative; tails reaching past the top digit are vacuous.
    live_tails = {
        t for t in tail.T if n - (n % p_power(t + 1, ell, p)) - 1 >= 0
    }
    algebra_dim = (
        2 ** (gen + 1)
        + sum(2 ** (gen - t) for t in live_tails)
        - (1 if 0 in supp else 0)
    )

    if _divides(ell, k) or _divides(ell, n) or ell == 2:
        lambda_1a = frozenset({k + 1})
    else:
        lambda_1a = frozenset({k + 1, k - 1})
    digit_seq = to_digits(n, ell, p).digits[::-1]

    def digit(i: int) -> int:
        return digit_seq[i] if i < len(digit_seq) else 0

    lambda_1b = set()
    # The index below the one obtained by clearing the digits up to place
    # t + 1 stays non-degenerate only when the digit at place t + 1 can
    # give up a unit and still leave one behind.
    for t in range(tail.t_n):
        if digit(t + 1) >= 2:
            w = p_power(t + 1, ell, p)
            m = n - (n % w) - w - 1
            if m >= 0:
                lambda_1b.add(m)
    lambda_2 = set()
    for t in live_tails:
        w = p_power(t + 1, ell, p)
        lambda_2.add(n - (n % w) - 1)
    classification = SeamClassification(
        lambda_1a=lambda_1a,
        lambda_1b=frozenset(lambda_1b),
        lambda_2a=frozenset(lambda_2),
    )
    return TwoPartSeamData(
        k=k,
        lambda_set=tuple(lam),
        dims=dims,
        algebra_dim=algebra_dim,
        classification=classification,
    )


def clamp_trace_id_coeff(k: int, m: int, ring: PointedRing) -> RingElement:
    """Identity coefficient of the partial trace of the clamped ladder
    through two adjacent support members ``m`` and ``m - 2`` of ``k``.

    >>> from .qnum import build_ring, render
    >>> ring = build_ring(2, 5)
    >>> render(clamp_trace_id_coeff(2, 2, ring))
    '3'
    """
    ell, p = ring.ell, ring.p
    supp = support(k, ell, p)
    if m not in supp or (m - 2) not in supp:
        raise ValueError("both indices must be adjacent support members")
    if m == k:
        # Clamping at the top support member leaves the idempotent
        # itself; its once-traced identity coefficient collapses to the
        # loop value (the classical trace plus the one surviving
        # correction term sum to [k+1]/[k] + [k-1]/[k] = delta).
        return ring.delta
    t = None
    k_prime = k
    current = k
    step = 0
    while True:
        nxt = mother(current, ell, p)
        if nxt is None:
            break
        current = nxt
        if (m - 1) in support(current, ell, p):
            t = step
            k_prime = current
            break
        step += 1
    if t is None:
        raise ValueError("no ancestor supports the midpoint")
    w = p_power(t + 1, ell, p)
    lam_inv = lambda_scalar(k_prime, m - 1, ring).inverse_value
    return lam_inv * (quantum_int(w + 1, ring) - quantum_int(w - 1, ring))


# ---------------------------------------------------------------------------
# Small tensors (n, k) with the loop-order dividing n + 1
# ---------------------------------------------------------------------------


def _require_ell_divides(n: int, ring: PointedRing) -> int:
    ell = ring.ell
    if not is_finite(ell) or (n + 1) % int(ell):
        raise ValueError("requires the loop order to divide n + 1")
    return int(ell)


@dataclass(frozen=True)
class SmallTensorData:
    """Index data of ``(n, k)`` for ``k`` below the loop order."""

    n: int
    k: int
    lambda_set: Tuple[int, ...]
    lambda0: Tuple[int, ...]


def small_tensor(n: int, k: int, ring: PointedRing) -> SmallTensorData:
    """Cell and simple indices of ``(n, k)`` with ``1 <= k < ell`` and
    the loop order dividing ``n + 1``.

    >>> from .qnum import build_ring
    >>> small_tensor(2, 2, build_ring(3, 2)).lambda0
    (2, 4)
    """
    ell = _require_ell_divides(n, ring)
    if not 1 <= k <= ell - 1:
        raise ValueError("the small part must be below the loop order")
    supp = support(n, ring.ell, ring.p)
    lam = sorted({a + k - 2 * i for a in supp for i in range(k + 1)
                  if a + k - 2 * i >= 0})
    lam0 = tuple(sorted(n + k - 2 * i for i in range(k // 2 + 1)))
    return SmallTensorData(n=n, k=k, lambda_set=tuple(lam), lambda0=lam0)


@dataclass(frozen=True)
class TensorEllData:
    """Index data and classification of ``(n, ell)``."""

    n: int
    lambda_set: Tuple[int, ...]
    dims: Dict[int, int]
    classification: SeamClassification


def tensor_ell(n: int, ring: PointedRing) -> TensorEllData:
    """Cell data of ``(n, ell)`` where the loop order divides ``n + 1``.

    >>> from .qnum import build_ring
    >>> data = tensor_ell(2, build_ring(3, 2))
    >>> data.lambda_set
    (1, 3, 5)
    """
    ell = _require_ell_divides(n, ring)
    ellp = ring.ell
    p = ring.p
    dims: Dict[int, int] = {}
    for m in range(n + ell, -1, -2):
        d = dim_delta((n, ell), m, ring)
        if d:
            dims[m] = d
    lam = sorted(dims)

    # Tail data of the digits of n + 1 starting one place up (the bottom
    # digit is forced to zero here): the run length of maximal digits and
    # the positions holding small digits just above the run.
    digit_seq = to_digits(n + 1, ellp, p).digits[::-1]

    def digit(i: int) -> int:
        return digit_seq[i] if i < len(digit_seq) else 0

    t_n = 0
    if is_finite(p):
        while digit(t_n + 1) == p - 1:
            t_n += 1
    big_n = n + 1
    lambda_1b = set()
    for t in range(t_n + 1):
        if digit(t + 1) >= 2:
            w = p_power(t + 1, ellp, p)
            m = big_n - (big_n % w) - w - 1
            if m >= 0:
                lambda_1b.add(m)
    lambda_2b = set()
    for t in range(1, t_n + 1):
        if digit(t) == 1:
            w = p_power(t + 1, ellp, p)
            m = big_n - (big_n % w) - 1
            if m >= 0:
                lambda_2b.add(m)
    lambda_2a = {n + ell - 2 * t for t in range(1, ell // 2 + 1)}
    classification = SeamClassification(
        lambda_1a=frozenset({n + ell}),
        lambda_1b=frozenset(lambda_1b),
        lambda_2a=frozenset(lambda_2a),
        lambda_2b=frozenset(lambda_2b),
    )
    return TensorEllData(
        n=n,
        lambda_set=tuple(lam),
        dims=dims,
        classification=classification,
    )


def gram_small_tensor_entry(n: int, k: int, t: int, ring: PointedRing) -> RingElement:
    """Gram form value on the spanning vector of the cell module of
    ``(n, k)`` at index ``n + k - 2t``.

    >>> from .qnum import build_ring, render
    >>> render(gram_small_tensor_entry(2, 2, 0, build_ring(3, 2)))
    '1'
    """
    ell = _require_ell_divides(n, ring)
    if not 1 <= k <= ell - 1:
        raise ValueError("the small part must be below the loop order")
    if not 0 <= t <= k:
        raise ValueError("fall count out of range")
    g = generic_ring()
    value = quantum_binomial(n + k - t + 1, t, g) / (
        quantum_binomial(n, t, g) * quantum_binomial(k, t, g)
    )
    lam_inv = lambda_scalar(n, n, ring).inverse_value
    return lam_inv * ring.from_generic(value)


def tensor_ell_cross_entry(n: int, t: int, ring: PointedRing) -> RingElement:
    """Gram form cross term between the two spanning vectors of the cell
    module of ``(n, ell)`` at index ``n + ell - 2t``.

    >>> from .qnum import build_ring, render
    >>> render(tensor_ell_cross_entry(2, 1, build_ring(3, 2)))
    '1'
    """
    ell = _require_ell_divides(n, ring)
    if not 1 <= t <= ell - 1:
        raise ValueError("fall count out of range")
    g = generic_ring()
    value = (quantum_int(t, g) / quantum_int(ell - 1, g)) * quantum_binomial(
        n + ell - t, t - 1, g
    ) / (quantum_binomial(n, t - 1, g) * quantum_binomial(ell - 2, t - 1, g))
    sign = -1 if (n + t) % 2 else 1
    lam_inv = lambda_scalar(n, n, ring).inverse_value
    return lam_inv * ring.from_generic(value) * sign
