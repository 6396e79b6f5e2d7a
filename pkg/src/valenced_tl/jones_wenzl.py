"""Strand projectors: classical and torsion-aware.

The classical projector ``JW_n`` is the unique (n, n) morphism over the
generic field Q(d) with identity coefficient 1 that is killed by every cap.
It is built here by the single-clasp recursion

    JW_n = JW_{n-1} (x) id_1  +  sum_i  c_i * (JW_{n-1} (x) id_1) . W_i

where ``W_i = U_{n-1} U_{n-2} ... U_i`` and ``c_i = (-1)^(n-i) [i]/[n]``.

In torsion the classical projector may fail to exist.  The replacement
idempotent on n strands is assembled from ladder morphisms indexed by the
support of n:

    e_n = sum over m in supp(n) of  lambda_n^m . dbar_n^m . ubar_n^m

where ``dbar_n^m`` is the ladder with classical projector boxes, ``ubar``
its mirror, and the scalar is fixed by ``ubar . dbar = (lambda_n^m)^{-1}
JW_m``.  Everything is computed over Q(d) and reduced coefficient-wise
into the requested ring; a non-invertible denominator raises.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Tuple

from .qnum import (
    PointedRing,
    RingElement,
    ZeroDivisorInRing,
    generic_ring,
    p_power,
    quantum_int,
    render,
)
from .digits import down_sets, down_value, is_down_admissible, support, to_digits
from .diagram import (
    Morphism,
    PlanarDiagram,
    cap_gen,
    compose,
    identity,
    identity_pairing,
    involution,
    tensor,
)

__all__ = [
    "NotDefined",
    "NotPIntegral",
    "ProportionalityFailure",
    "LadderFamily",
    "LadderSpec",
    "LambdaScalar",
    "jw_generic",
    "jw_classical",
    "reduce_morphism",
    "down_diagram",
    "ladder",
    "lambda_scalar",
    "lp_jw",
]


class NotDefined(Exception):
    """A denominator of the requested morphism is not invertible."""


class NotPIntegral(Exception):
    """A coefficient of the idempotent fails to descend to the target ring."""

    def __init__(self, diagram: PlanarDiagram, coeff: RingElement):
        self.diagram = diagram
        self.coeff = coeff
        super().__init__(
            "coefficient %s of %s does not descend" % (render(coeff), diagram.render())
        )


class ProportionalityFailure(Exception):
    """ubar . dbar failed to be a multiple of the classical projector."""


_GENERIC = generic_ring()


# ---------------------------------------------------------------------------
# Classical projectors over Q(d)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def jw_generic(n: int) -> Morphism:
    """The classical projector on n strands over Q(d)."""
    ring = _GENERIC
    if n <= 1:
        return identity(n, ring)
    prev = tensor(jw_generic(n - 1), identity(1, ring))
    tail = identity(n, ring)
    word = None
    for i in range(n - 1, 0, -1):
        u = cap_gen(n, i, ring)
        word = u if word is None else compose(word, u)
        sign = -1 if (n - i) % 2 else 1
        coeff = sign * quantum_int(i, ring) / quantum_int(n, ring)
        tail = tail + coeff * word
    return compose(prev, tail)


def reduce_morphism(f: Morphism, ring: PointedRing) -> Morphism:
    """Reduce a Q(d) morphism coefficient-wise into ``ring``.

    Raises :class:`ZeroDivisorInRing` (from qnum) on the first coefficient
    whose denominator is not invertible; callers wrap that in their own
    error types.
    """
    terms = {}
    for d, c in f.terms.items():
        r = ring.from_generic(c)
        if not r.is_zero():
            terms[d] = r
    return Morphism(f.n, f.m, ring, terms)


def jw_classical(n: int, ring: PointedRing) -> Morphism:
    """The classical projector reduced into ``ring``.

    Raises :class:`NotDefined` when some quantum integer in the
    denominators vanishes in ``ring``.
    """
    try:
        return reduce_morphism(jw_generic(n), ring)
    except (ZeroDivisorInRing, ZeroDivisionError) as exc:
        raise NotDefined("projector on %d strands: %s" % (n, exc)) from exc


# ---------------------------------------------------------------------------
# Down diagrams and ladders
# ---------------------------------------------------------------------------


def _cap_block(n: int, w: int, c: int) -> PlanarDiagram:
    """The (n, n-2c) diagram with c nested caps on sources w+1..w+2c."""
    partners = [-1] * (2 * n - 2 * c)

    def link(a: int, b: int) -> None:
        partners[a], partners[b] = b, a

    m = n - 2 * c
    for s in range(w):  # top through strands
        link(s, 2 * n - 2 * c - 1 - s)  # source s+1 to target s+1
    for k in range(c):  # nested caps
        link(w + k, w + 2 * c - 1 - k)
    for s in range(w + 2 * c, n):  # bottom through strands
        link(s, n + m - (s - 2 * c) - 1)
    return PlanarDiagram(n, m, tuple(partners))


def _low_digits(v: int, ell, p) -> Tuple[int, ...]:
    """Digits of v + 1, least significant first."""
    return tuple(reversed(to_digits(v + 1, ell, p).digits))


def down_diagram(n: int, s: Iterable[int], ring: PointedRing) -> Morphism:
    """The one-diagram down morphism n -> n[S].

    Flips are applied from the highest position down, so the digits read
    at each step agree with the original expansion of n + 1 at every
    position still to be processed.
    """
    ell, p = ring.ell, ring.p
    s = sorted(set(s), reverse=True)
    if not is_down_admissible(n, s, ell, p):
        raise ValueError("index set is not down-admissible for %d" % (n,))
    f = identity(n, ring)
    v = n
    for i in s:
        low = _low_digits(v, ell, p)
        c = low[i] * p_power(i, ell, p)
        x = sum(low[t] * p_power(t, ell, p) for t in range(i))
        w = v - 2 * c - x
        f = compose(f, Morphism.from_diagram(_cap_block(v, w, c), ring))
        v -= 2 * c
    return f


class LadderFamily(Enum):
    IDENTITY = "identity"
    CLASSICAL_JW = "classical_jw"


@dataclass(frozen=True)
class LadderSpec:
    """A ladder morphism request: n, the flip set and the box family."""

    n: int
    s: FrozenSet[int]
    family: LadderFamily = LadderFamily.CLASSICAL_JW

    def __post_init__(self) -> None:
        object.__setattr__(self, "s", frozenset(self.s))


@lru_cache(maxsize=None)
def _ladder_state(n: int, s: FrozenSet[int], family: LadderFamily,
                  ell, p) -> Tuple[Morphism, int]:
    """The ladder with its trailing projector box left lazy.

    Returns (g, t) with the full ladder equal to ``g . box(t)``, using that
    consecutive boxes absorb, (g_t x id_c) . g_{t+c} = g_{t+c}.  Only a
    flipped digit forces the current box to be materialized.
    """
    ring = _GENERIC

    def box(m: int) -> Morphism:
        if family is LadderFamily.CLASSICAL_JW:
            return jw_generic(m)
        return identity(m, ring)

    low = _low_digits(n, ell, p)
    j = len(low) - 1
    t = low[j] * p_power(j, ell, p) - 1
    g = identity(t, ring)
    for i in range(j - 1, -1, -1):
        c = low[i] * p_power(i, ell, p)
        if i in s:
            f = compose(g, box(t))
            f = tensor(f, identity(c, ring))
            g = compose(f, Morphism.from_diagram(
                _cap_block(t + c, t - c, c), ring))
            t = t - c
        elif c:
            g = tensor(g, identity(c, ring))
            t = t + c
    return g, t


def _ladder_generic(n: int, s: FrozenSet[int], family: LadderFamily,
                    ell, p) -> Morphism:
    g, t = _ladder_state(n, s, family, ell, p)
    if family is LadderFamily.CLASSICAL_JW:
        return compose(g, jw_generic(t))
    return g


def ladder(spec: LadderSpec, ring: PointedRing) -> Morphism:
    """The ladder morphism n -> n[S] with respect to the chosen family."""
    ell, p = ring.ell, ring.p
    if not is_down_admissible(spec.n, sorted(spec.s), ell, p):
        raise ValueError("index set is not down-admissible for %d" % (spec.n,))
    if spec.family is LadderFamily.IDENTITY:
        return down_diagram(spec.n, spec.s, ring)
    try:
        return reduce_morphism(
            _ladder_generic(spec.n, spec.s, spec.family, ell, p), ring
        )
    except (ZeroDivisorInRing, ZeroDivisionError) as exc:
        raise NotDefined("ladder for %d, %s: %s"
                         % (spec.n, sorted(spec.s), exc)) from exc


def _flip_set_for(n: int, m: int, ell, p) -> FrozenSet[int]:
    """The down-admissible index set carrying n to m."""
    for s in down_sets(n, ell, p):
        if down_value(n, s, ell, p) == m:
            return frozenset(s.indices)
    raise ValueError("%d is not in the support of %d" % (m, n))


@lru_cache(maxsize=None)
def _dbar_generic(n: int, m: int, ell, p) -> Morphism:
    """The projector-boxed ladder n -> m over Q(d)."""
    s = _flip_set_for(n, m, ell, p)
    return _ladder_generic(n, s, LadderFamily.CLASSICAL_JW, ell, p)


# ---------------------------------------------------------------------------
# The lambda scalars and the torsion idempotent
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LambdaScalar:
    """The proportionality scalar attached to a support member.

    ``ubar . dbar = inverse_value * JW_m``; ``inverse_value`` is stored in
    the requested ring (it may reduce to zero there), ``inverse_generic``
    over Q(d) (where it is a unit).
    """

    n: int
    m: int
    inverse_value: RingElement
    inverse_generic: RingElement


@lru_cache(maxsize=None)
def _lambda_inverse_generic(n: int, m: int, ell, p) -> RingElement:
    if m == n:
        # empty flip set: ubar . dbar = JW_n . JW_n = JW_n
        return _GENERIC.one
    # With dbar = g . JW_m, the product ubar . dbar equals
    # JW_m . involution(g) . g . JW_m; the projector sandwich kills every
    # non-identity m -> m diagram, so the scalar is the identity
    # coefficient of involution(g) . g alone.  This avoids ever expanding
    # the trailing projector box.
    s = _flip_set_for(n, m, ell, p)
    g, t = _ladder_state(n, s, LadderFamily.CLASSICAL_JW, ell, p)
    if t != m:
        raise ProportionalityFailure(
            "ladder for n=%d lands at %d, expected %d" % (n, t, m)
        )
    return identity_pairing(involution(g), g)


def lambda_scalar(n: int, m: int, ring: PointedRing) -> LambdaScalar:
    """Compute ubar . dbar over Q(d) and extract the scalar."""
    if m not in support(n, ring.ell, ring.p):
        raise ValueError("%d is not in the support of %d" % (m, n))
    lam_inv = _lambda_inverse_generic(n, m, ring.ell, ring.p)
    return LambdaScalar(n, m, ring.from_generic(lam_inv), lam_inv)


@lru_cache(maxsize=None)
def _lp_jw_generic(n: int, ell, p) -> Morphism:
    """The torsion idempotent assembled over Q(d) for the (ell, p) genealogy."""
    total = jw_generic(n)  # the m = n term: empty flip set
    for m in support(n, ell, p):
        if m == n:
            continue
        # dbar . ubar = g . JW_m . involution(g); composing through the
        # small unboxed ladder keeps the pair counts linear in the size
        # of the projector instead of quadratic.
        s = _flip_set_for(n, m, ell, p)
        g, _ = _ladder_state(n, s, LadderFamily.CLASSICAL_JW, ell, p)
        lam = _lambda_inverse_generic(n, m, ell, p).inverse()
        total = total + lam * compose(g, compose(jw_generic(m), involution(g)))
    return total


def lp_jw(n: int, ring: PointedRing) -> Morphism:
    """The idempotent replacing the classical projector in ``ring``.

    For an Eve n this is just the reduced classical projector.  Raises
    :class:`NotPIntegral` if some coefficient fails to reduce (the theory
    says this cannot happen; it would signal a bug).
    """
    key = (n, ring)
    cached = _LP_JW_CACHE.get(key)
    if cached is not None:
        return cached
    supp = support(n, ring.ell, ring.p)
    if len(supp) == 1:
        out = jw_classical(n, ring)
    else:
        master = _lp_jw_generic(n, ring.ell, ring.p)
        terms = {}
        for d, c in master.terms.items():
            try:
                r = ring.from_generic(c)
            except (ZeroDivisorInRing, ZeroDivisionError) as exc:
                raise NotPIntegral(d, c) from exc
            if not r.is_zero():
                terms[d] = r
        out = Morphism(master.n, master.m, ring, terms)
    _LP_JW_CACHE[key] = out
    return out


_LP_JW_CACHE: Dict[Tuple[int, PointedRing], Morphism] = {}
