"""The planar strand category.

A :class:`PlanarDiagram` is a non-crossing perfect matching between ``n``
source points (drawn top to bottom on the left) and ``m`` target points
(top to bottom on the right).  Walking the boundary of the enclosing disk
clockwise from the top-left corner visits the sources downwards and then
the targets upwards; a matching is planar exactly when it is non-crossing
in that cyclic order.  Diagrams are encoded by the involution of boundary
positions, which is canonical, hashable and totally ordered.

A :class:`Morphism` is a formal linear combination of diagrams sharing one
``(n, m)`` signature, with coefficients in a
:class:`~valenced_tl.qnum.PointedRing`.  Composition concatenates diagrams
and evaluates each closed loop to the ring's distinguished element delta.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .qnum import Mode, PointedRing, RingElement, render as render_scalar

__all__ = [
    "PlanarDiagram",
    "Morphism",
    "compose",
    "tensor",
    "involution",
    "partial_trace",
    "monic_part",
    "identity",
    "cap_gen",
    "simple_cap",
    "simple_cup",
    "enumerate_monic",
    "enumerate_all",
    "morphism_to_json",
]


# ---------------------------------------------------------------------------
# Diagrams
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class PlanarDiagram:
    """A planar pairing, encoded by the partner of each boundary position.

    Boundary positions run 0..n-1 (sources, top to bottom) followed by
    n..n+m-1 (targets, bottom to top), so source ``i`` sits at position
    ``i - 1`` and target ``j`` at position ``n + m - j`` (1-based labels).

    >>> d = PlanarDiagram.build(2, 2, [(1, -1), (2, -2)])
    >>> d.through_degree()
    2
    >>> d.render()
    '[|(1,1),(2,2)|]'
    """

    n: int
    m: int
    partners: Tuple[int, ...]

    def __post_init__(self) -> None:
        size = self.n + self.m
        p = self.partners
        if self.n < 0 or self.m < 0 or size % 2:
            raise ValueError("source and target counts must have even total")
        if len(p) != size:
            raise ValueError("partner sequence has the wrong length")
        stack: List[int] = []
        for a in range(size):
            b = p[a]
            if not 0 <= b < size or b == a or p[b] != a:
                raise ValueError("not a fixed-point-free involution")
            if b > a:
                stack.append(a)
            else:
                if not stack or stack[-1] != b:
                    raise ValueError("pairing is not planar")
                stack.pop()

    # -- position arithmetic ------------------------------------------------

    def _source_pos(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise ValueError("source index out of range")
        return i - 1

    def _target_pos(self, j: int) -> int:
        if not 1 <= j <= self.m:
            raise ValueError("target index out of range")
        return self.n + self.m - j

    @classmethod
    def build(
        cls, n: int, m: int, pairs: Iterable[Tuple[int, int]]
    ) -> "PlanarDiagram":
        """Construct from labelled pairs: sources are 1..n, targets -1..-m.

        >>> PlanarDiagram.build(2, 0, [(1, 2)]).through_degree()
        0
        """
        partners = [-1] * (n + m)

        def pos(label: int) -> int:
            if label > 0:
                if label > n:
                    raise ValueError("source label out of range")
                return label - 1
            if label < 0:
                if -label > m:
                    raise ValueError("target label out of range")
                return n + m + label
            raise ValueError("labels are nonzero")

        for a, b in pairs:
            pa, pb = pos(a), pos(b)
            partners[pa], partners[pb] = pb, pa
        if any(q < 0 for q in partners):
            raise ValueError("pairing is not perfect")
        return cls(n, m, tuple(partners))

    def pairs(self) -> List[Tuple[int, int]]:
        """Labelled pairs, sources positive and targets negative."""

        def label(p: int) -> int:
            return p + 1 if p < self.n else p - self.n - self.m

        return sorted(
            (label(a), label(b)) if label(a) > 0 else (label(b), label(a))
            for a, b in enumerate(self.partners)
            if a < b
        )

    def through_degree(self) -> int:
        """Number of source-to-target strands."""
        return sum(
            1 for a, b in enumerate(self.partners) if a < self.n <= b
        )

    def is_monic(self) -> bool:
        return self.m <= self.n and self.through_degree() == self.m

    def render(self) -> str:
        """Pairing-list text: [source pairs|through pairs|target pairs].

        >>> PlanarDiagram.build(4, 0, [(1, 4), (2, 3)]).render()
        '[(1,4),(2,3)||]'
        """
        ss, st, tt = [], [], []
        for a, b in self.pairs():
            if b > 0:
                ss.append((a, b))
            elif a > 0:
                st.append((a, -b))
            else:
                tt.append((min(-a, -b), max(-a, -b)))
        fmt = lambda sec: ",".join("(%d,%d)" % ab for ab in sorted(sec))
        return "[%s|%s|%s]" % (fmt(ss), fmt(st), fmt(tt))


# ---------------------------------------------------------------------------
# Diagram-level operations
# ---------------------------------------------------------------------------


def _raw_diagram(n: int, m: int, partners: Tuple[int, ...]) -> PlanarDiagram:
    """Construct a diagram known to be valid, skipping validation."""
    d = object.__new__(PlanarDiagram)
    object.__setattr__(d, "n", n)
    object.__setattr__(d, "m", m)
    object.__setattr__(d, "partners", partners)
    return d


@lru_cache(maxsize=1 << 20)
def _compose_diagrams(
    a: PlanarDiagram, b: PlanarDiagram
) -> Tuple[PlanarDiagram, int]:
    """Concatenate a: n -> m with b: m -> k; return (diagram, loop count)."""
    n, m, k = a.n, a.m, b.m
    ap, bp = a.partners, b.partners
    visited = [False] * (m + 1)

    def follow(side_a: bool, pos: int) -> Tuple[bool, int]:
        """Hop from a boundary point until another boundary point is hit."""
        while True:
            if side_a:
                q = ap[pos]
                if q < n:
                    return True, q
                j = n + m - q  # middle strand index
                visited[j] = True
                side_a, pos = False, j - 1
            else:
                q = bp[pos]
                if q >= m:
                    return False, q
                j = q + 1
                visited[j] = True
                side_a, pos = True, n + m - j
        raise AssertionError

    size = n + k
    partners = [-1] * size

    def result_pos(side_a: bool, pos: int) -> int:
        if side_a:
            return pos  # a source, pos < n
        return n + pos - m  # b target j at b-pos m+k-j -> result pos n+k-j

    for start in range(size):
        if partners[start] >= 0:
            continue
        if start < n:
            side, pos = True, start
        else:
            side, pos = False, start - n + m
        eside, epos = follow(side, pos)
        end = result_pos(eside, epos)
        partners[start], partners[end] = end, start

    loops = 0
    for j0 in range(1, m + 1):
        if visited[j0]:
            continue
        loops += 1
        j, use_b = j0, True
        while True:
            visited[j] = True
            if use_b:
                j = bp[j - 1] + 1
            else:
                j = n + m - ap[n + m - j]
            use_b = not use_b
            if j == j0 and use_b:
                break
    return _raw_diagram(n, k, tuple(partners)), loops


def _tensor_diagrams(a: PlanarDiagram, b: PlanarDiagram) -> PlanarDiagram:
    """Stack b below a."""
    size = a.n + b.n + a.m + b.m
    partners = [-1] * size

    def amap(p: int) -> int:
        return p if p < a.n else p + b.n + b.m

    for p, q in enumerate(a.partners):
        partners[amap(p)] = amap(q)
    for p, q in enumerate(b.partners):
        partners[p + a.n] = q + a.n
    return PlanarDiagram(a.n + b.n, a.m + b.m, tuple(partners))


def _involution_diagram(a: PlanarDiagram) -> PlanarDiagram:
    """Left-right mirror; reverses the boundary walk."""
    top = a.n + a.m - 1
    return PlanarDiagram(
        a.m, a.n, tuple(top - a.partners[top - p] for p in range(top + 1))
    )


def _partial_trace_diagram(
    a: PlanarDiagram, k: int
) -> Tuple[PlanarDiagram, int]:
    """Close the last k sources onto the last k targets around the right."""
    n, m = a.n, a.m
    if k > min(n, m):
        raise ValueError("cannot trace more strands than either side has")
    ap = a.partners

    def trace_link(p: int) -> int:
        """Position joined to p by the closing arcs, or -1."""
        if p < n:
            j = p + 1 - (n - k)  # source n-k+j
            if j > 0:
                return n + k - j  # position of target m-k+j
            return -1
        j = n + m - p - (m - k)  # target m-k+j
        if j > 0:
            return n - k + j - 1  # position of source n-k+j
        return -1

    size = (n - k) + (m - k)
    partners = [-1] * size
    seen = [False] * (n + m)

    def result_pos(p: int) -> int:
        if p < n - k:
            return p
        # target j <= m-k at old position n+m-j -> new position (n-k)+(m-k)-j
        return p - 2 * k

    for start in range(n + m):
        if trace_link(start) >= 0 or seen[start]:
            continue
        seen[start] = True
        p = ap[start]
        while True:
            seen[p] = True
            link = trace_link(p)
            if link < 0:
                break
            seen[link] = True
            p = ap[link]
        u, v = result_pos(start), result_pos(p)
        partners[u], partners[v] = v, u

    loops = 0
    for start in range(n + m):
        if seen[start] or trace_link(start) < 0:
            continue
        loops += 1
        p = start
        while not seen[p]:
            seen[p] = True
            q = ap[p]
            seen[q] = True
            p = trace_link(q)
    return PlanarDiagram(n - k, m - k, tuple(partners)), loops


# ---------------------------------------------------------------------------
# Morphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Morphism:
    """A formal linear combination of (n, m)-diagrams over a pointed ring."""

    n: int
    m: int
    ring: PointedRing
    terms: Mapping[PlanarDiagram, RingElement] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for d in self.terms:
            if (d.n, d.m) != (self.n, self.m):
                raise ValueError("term signature mismatch")

    @classmethod
    def from_diagram(
        cls, d: PlanarDiagram, ring: PointedRing, coeff: RingElement = None
    ) -> "Morphism":
        c = ring.one if coeff is None else coeff
        return cls(d.n, d.m, ring, {d: c} if not c.is_zero() else {})

    @classmethod
    def zero(cls, n: int, m: int, ring: PointedRing) -> "Morphism":
        return cls(n, m, ring, {})

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, d: PlanarDiagram) -> RingElement:
        return self.terms.get(d, self.ring.zero)

    def identity_coefficient(self) -> RingElement:
        """Coefficient of the identity diagram (square signatures only)."""
        if self.n != self.m:
            raise ValueError("identity coefficient needs a square signature")
        return self.coefficient(_identity_diagram(self.n))

    # -- linear structure ---------------------------------------------------

    def _check_sig(self, other: "Morphism") -> None:
        if (self.n, self.m) != (other.n, other.m) or self.ring != other.ring:
            raise ValueError("signature or ring mismatch")

    def __add__(self, other: "Morphism") -> "Morphism":
        self._check_sig(other)
        out = dict(self.terms)
        for d, c in other.terms.items():
            s = out.get(d)
            c = c if s is None else s + c
            if c.is_zero():
                out.pop(d, None)
            else:
                out[d] = c
        return Morphism(self.n, self.m, self.ring, out)

    def __neg__(self) -> "Morphism":
        return Morphism(
            self.n, self.m, self.ring, {d: -c for d, c in self.terms.items()}
        )

    def __sub__(self, other: "Morphism") -> "Morphism":
        return self + (-other)

    def scale(self, c: RingElement) -> "Morphism":
        if c.is_zero():
            return Morphism.zero(self.n, self.m, self.ring)
        return Morphism(
            self.n, self.m, self.ring, {d: c * x for d, x in self.terms.items()}
        )

    def __rmul__(self, c) -> "Morphism":
        if isinstance(c, RingElement):
            return self.scale(c)
        if isinstance(c, int):
            return self.scale(self.ring.from_int(c))
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Morphism):
            return NotImplemented
        return (
            (self.n, self.m) == (other.n, other.m)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def through_degree(self) -> int:
        """Maximal through-degree over the terms (0 for the zero morphism)."""
        return max((d.through_degree() for d in self.terms), default=0)

    def render(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for d in sorted(self.terms):
            bits.append("(%s)*%s" % (render_scalar(self.terms[d]), d.render()))
        return " + ".join(bits)


# ---------------------------------------------------------------------------
# Morphism-level operations
# ---------------------------------------------------------------------------


def _clear_denominators(terms, ring):
    """Common denominator D and integer-polynomial numerators over Q(d)."""
    from .qnum import _pgcd, _pdiv_exact, _pmul

    den = (1,)
    for c in terms.values():
        d = c.data[1]
        den = _pmul(den, _pdiv_exact(d, _pgcd(den, d)))
    nums = {}
    for dia, c in terms.items():
        num, d = c.data
        nums[dia] = _pmul(num, _pdiv_exact(den, d)) if d != den else num
    return nums, den


def _compose_generic_q(f: Morphism, g: Morphism) -> Morphism:
    """Composition over Q(d) with one normalization per output diagram.

    Clearing denominators first lets the accumulation run in Z[d], which
    avoids a fraction gcd for every pair of terms.
    """
    from .qnum import _padd, _pmul

    ring = f.ring
    nf, df = _clear_denominators(f.terms, ring)
    ng, dg = _clear_denominators(g.terms, ring)
    out: Dict[PlanarDiagram, tuple] = {}
    # Large projector sums carry few distinct coefficients, so product
    # polynomials repeat massively across diagram pairs.
    products: Dict[tuple, tuple] = {}
    for d1, c1 in nf.items():
        for d2, c2 in ng.items():
            d, loops = _compose_diagrams(d1, d2)
            key = (c1, c2, loops)
            c = products.get(key)
            if c is None:
                c = _pmul(c1, c2)
                if loops:
                    # multiplying by delta^loops is a coefficient shift
                    c = (0,) * loops + c
                products[key] = c
            s = out.get(d)
            out[d] = c if s is None else _padd(s, c)
    den = _pmul(df, dg)
    terms: Dict[PlanarDiagram, RingElement] = {}
    for d, num in out.items():
        if num:
            terms[d] = ring._make(ring._norm_frac(num, den))
    return Morphism(f.n, g.m, ring, terms)


def identity_pairing(f: Morphism, g: Morphism) -> RingElement:
    """Identity coefficient of ``compose(f, g)`` without the full product.

    Only the diagram pairs whose concatenation closes to the identity
    contribute, so no coefficient arithmetic is spent on the rest.
    """
    if f.m != g.n or f.ring != g.ring:
        raise ValueError("signatures do not chain")
    if f.n != g.m:
        raise ValueError("identity coefficient needs a square composite")
    ring = f.ring
    ident = _identity_diagram(f.n)
    delta_pow: Dict[int, RingElement] = {}
    total = ring.zero
    for d1, c1 in f.terms.items():
        for d2, c2 in g.terms.items():
            d, loops = _compose_diagrams(d1, d2)
            if d != ident:
                continue
            c = c1 * c2
            if loops:
                dp = delta_pow.get(loops)
                if dp is None:
                    dp = delta_pow[loops] = ring.delta ** loops
                c = c * dp
            total = total + c
    return total


def compose(f: Morphism, g: Morphism) -> Morphism:
    """Concatenation f then g; f: n -> m, g: m -> k gives n -> k.

    Each closed loop formed in the middle contributes a factor delta.
    """
    if f.m != g.n or f.ring != g.ring:
        raise ValueError("signatures do not chain")
    ring = f.ring
    if ring.mode is Mode.GENERIC and ring.charp is None:
        return _compose_generic_q(f, g)
    delta_pow: Dict[int, RingElement] = {}
    out: Dict[PlanarDiagram, RingElement] = {}
    for d1, c1 in f.terms.items():
        for d2, c2 in g.terms.items():
            d, loops = _compose_diagrams(d1, d2)
            c = c1 * c2
            if loops:
                dp = delta_pow.get(loops)
                if dp is None:
                    dp = delta_pow[loops] = ring.delta ** loops
                c = c * dp
            s = out.get(d)
            c = c if s is None else s + c
            if c.is_zero():
                out.pop(d, None)
            else:
                out[d] = c
    return Morphism(f.n, g.m, ring, out)


def tensor(f: Morphism, g: Morphism) -> Morphism:
    """Stack g below f."""
    if f.ring != g.ring:
        raise ValueError("ring mismatch")
    out: Dict[PlanarDiagram, RingElement] = {}
    for d1, c1 in f.terms.items():
        for d2, c2 in g.terms.items():
            d = _tensor_diagrams(d1, d2)
            c = c1 * c2
            s = out.get(d)
            c = c if s is None else s + c
            if c.is_zero():
                out.pop(d, None)
            else:
                out[d] = c
    return Morphism(f.n + g.n, f.m + g.m, f.ring, out)


def involution(f: Morphism) -> Morphism:
    """The mirror anti-automorphism: swaps sources and targets."""
    return Morphism(
        f.m,
        f.n,
        f.ring,
        {_involution_diagram(d): c for d, c in f.terms.items()},
    )


def partial_trace(f: Morphism, k: int) -> Morphism:
    """Close the last k strands of each side around the right."""
    ring = f.ring
    delta_pow: Dict[int, RingElement] = {}
    out: Dict[PlanarDiagram, RingElement] = {}
    for d0, c in f.terms.items():
        d, loops = _partial_trace_diagram(d0, k)
        if loops:
            dp = delta_pow.get(loops)
            if dp is None:
                dp = delta_pow[loops] = ring.delta ** loops
            c = c * dp
        s = out.get(d)
        c = c if s is None else s + c
        if c.is_zero():
            out.pop(d, None)
        else:
            out[d] = c
    return Morphism(f.n - k, f.m - k, ring, out)


def monic_part(f: Morphism) -> Morphism:
    """Drop all terms of through-degree below the target count.

    This is the class of f in the quotient of Hom(n, m) by morphisms
    factoring through fewer than m strands.
    """
    return Morphism(
        f.n,
        f.m,
        f.ring,
        {d: c for d, c in f.terms.items() if d.through_degree() == f.m},
    )


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _identity_diagram(n: int) -> PlanarDiagram:
    top = 2 * n - 1
    return PlanarDiagram(n, n, tuple(top - p for p in range(2 * n)))


def identity(n: int, ring: PointedRing) -> Morphism:
    """id_n."""
    return Morphism.from_diagram(_identity_diagram(n), ring)


@lru_cache(maxsize=None)
def _simple_cap_diagram(n: int, i: int) -> PlanarDiagram:
    if not 1 <= i <= n - 1:
        raise ValueError("cap index out of range")
    pairs = [(i, i + 1)]
    t = 0
    for s in range(1, n + 1):
        if s not in (i, i + 1):
            t += 1
            pairs.append((s, -t))
    return PlanarDiagram.build(n, n - 2, pairs)


def simple_cap(n: int, i: int, ring: PointedRing) -> Morphism:
    """n -> n-2: joins sources i, i+1; remaining strands stay in order."""
    return Morphism.from_diagram(_simple_cap_diagram(n, i), ring)


def simple_cup(n: int, i: int, ring: PointedRing) -> Morphism:
    """n-2 -> n: mirror of simple_cap."""
    return involution(simple_cap(n, i, ring))


def cap_gen(n: int, i: int, ring: PointedRing) -> Morphism:
    """The generator U_i = cup_i after cap_i as an (n, n) morphism."""
    return compose(simple_cap(n, i, ring), simple_cup(n, i, ring))


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _noncrossing_matchings(size: int) -> Tuple[Tuple[int, ...], ...]:
    """All non-crossing fixed-point-free involutions of 0..size-1."""
    if size % 2:
        return ()
    if size == 0:
        return ((),)
    out: List[Tuple[int, ...]] = []
    for cut in range(1, size, 2):
        for left in _noncrossing_matchings(cut - 1):
            for right in _noncrossing_matchings(size - cut - 1):
                partners = [0] * size
                partners[0], partners[cut] = cut, 0
                for p, q in enumerate(left):
                    partners[p + 1] = q + 1
                for p, q in enumerate(right):
                    partners[p + cut + 1] = q + cut + 1
                out.append(tuple(partners))
    return tuple(out)


def enumerate_all(n: int, m: int) -> List[PlanarDiagram]:
    """All planar (n, m)-diagrams, sorted by canonical encoding."""
    if (n + m) % 2:
        raise ValueError("n + m must be even")
    return sorted(
        PlanarDiagram(n, m, partners)
        for partners in _noncrossing_matchings(n + m)
    )


def enumerate_monic(n: int, m: int) -> List[PlanarDiagram]:
    """All monic (n, m)-diagrams, sorted by canonical encoding.

    A monic diagram joins every target to a source; equivalently the
    sources carry (n - m)/2 nested arcs with no through strand trapped
    under an arc.

    >>> len(enumerate_monic(4, 2))
    3
    >>> len(enumerate_monic(2, 0))
    1
    """
    if not 0 <= m <= n or (n - m) % 2:
        raise ValueError("need 0 <= m <= n with n - m even")
    results: List[PlanarDiagram] = []
    partners = [-1] * (n + m)

    def rec(pos: int, stack: List[int], through: int) -> None:
        if pos == n:
            if not stack and through == m:
                results.append(PlanarDiagram(n, m, tuple(partners)))
            return
        remaining = n - pos
        if len(stack) > remaining or through > m:
            return
        # open an arc
        if len(stack) + 2 + (m - through) <= remaining:
            stack.append(pos)
            rec(pos + 1, stack, through)
            stack.pop()
        # close the innermost open arc
        if stack:
            a = stack.pop()
            partners[a], partners[pos] = pos, a
            rec(pos + 1, stack, through)
            stack.append(a)
        # a through strand, never under an open arc
        elif through < m:
            t = n + m - (through + 1)  # position of target through+1
            partners[pos], partners[t] = t, pos
            rec(pos + 1, stack, through + 1)
    rec(0, [], 0)
    return sorted(results)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def morphism_to_json(f: Morphism) -> dict:
    """JSON-ready encoding: {signature, terms: [{pairs, coeff}]}."""
    return {
        "signature": [f.n, f.m],
        "terms": [
            {
                "pairs": [list(ab) for ab in d.pairs()],
                "coeff": render_scalar(f.terms[d]),
            }
            for d in sorted(f.terms)
        ],
    }
