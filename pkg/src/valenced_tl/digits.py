"""Two-tier mixed-radix digit combinatorics.

Non-negative integers are expanded in the mixed radix system whose place
values are ``w(0) = 1`` and ``w(i) = l * p**(i-1)`` for ``i > 0``.  The
digit in position 0 lies in ``[0, l)`` and every higher digit lies in
``[0, p)``.  Either parameter may be :data:`~valenced_tl.qnum.INFINITY`,
which truncates the expansion: with ``l`` infinite a number is its own
single digit, and with ``p`` infinite the expansion stops after two digits.

On top of the raw expansions this module provides the genealogy of an
integer (mother, ancestors, generation, the "Eve" leaves of the tree), the
support set obtained by sign flips of digits, digitwise dominance, tail
data, and the parity intervals that govern which defects can appear when
composing strand groups.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Sequence, Tuple

from .qnum import (
    INFINITY,
    ExtendedNat,
    is_finite,
    p_power,
    parse_extended_nat,
    render_extended_nat,
)

__all__ = [
    "PLDigits",
    "DownSet",
    "Tails",
    "to_digits",
    "from_digits",
    "mother",
    "ancestors",
    "generation",
    "is_eve",
    "support",
    "down_sets",
    "down_value",
    "is_down_admissible",
    "dominates",
    "tails",
    "is_interior",
    "e_set",
    "s_min",
    "e_mu",
    "is_composition_factor",
]


# ---------------------------------------------------------------------------
# Digit expansions
# ---------------------------------------------------------------------------


_DIGITS_RE = re.compile(
    r"^\s*\[\s*(?P<digits>-?\d+(?:\s*,\s*-?\d+)*)\s*\]"
    r"_\{\s*(?P<p>\w+)\s*,\s*(?P<ell>\w+)\s*\}\s*$"
)


@dataclass(frozen=True)
class PLDigits:
    """A digit expansion, most significant digit first.

    >>> to_digits(279, 4, 3)
    PLDigits(digits=(2, 1, 2, 0, 3), ell=4, p=3)
    >>> to_digits(279, 4, 3).render()
    '[2,1,2,0,3]_{3,4}'
    >>> int(to_digits(279, 4, 3))
    279
    """

    digits: Tuple[int, ...]
    ell: ExtendedNat
    p: ExtendedNat

    def __post_init__(self) -> None:
        if not self.digits:
            raise ValueError("digit sequence must be non-empty")

    def __int__(self) -> int:
        return from_digits(self.digits, self.ell, self.p)

    @property
    def value(self) -> int:
        return int(self)

    def is_canonical(self) -> bool:
        """True when every digit is within its radix bound and there is no
        spurious leading zero."""
        lo = self.digits[::-1]  # least significant first
        if len(lo) > 1 and lo[-1] == 0:
            return False
        if is_finite(self.ell) and not 0 <= lo[0] < self.ell:
            return False
        if not is_finite(self.ell) and len(lo) > 1:
            return False
        for d in lo[1:]:
            if d < 0:
                return False
            if is_finite(self.p) and d >= self.p:
                return False
        if not is_finite(self.p) and len(lo) > 2:
            return False
        return True

    def render(self) -> str:
        """Text form ``[n_r,...,n_0]_{p,l}``.

        >>> PLDigits((1, -1), 4, 3).render()
        '[1,-1]_{3,4}'
        """
        body = ",".join(str(d) for d in self.digits)
        return "[%s]_{%s,%s}" % (
            body,
            render_extended_nat(self.p),
            render_extended_nat(self.ell),
        )

    @classmethod
    def parse(cls, text: str) -> "PLDigits":
        """Inverse of :meth:`render`.

        >>> PLDigits.parse('[2,1,2,0,3]_{3,4}') == to_digits(279, 4, 3)
        True
        """
        match = _DIGITS_RE.match(text)
        if match is None:
            raise ValueError("not a digit expansion: %r" % (text,))
        digits = tuple(int(d) for d in match.group("digits").split(","))
        return cls(
            digits,
            parse_extended_nat(match.group("ell")),
            parse_extended_nat(match.group("p")),
        )


def to_digits(n: int, ell: ExtendedNat, p: ExtendedNat) -> PLDigits:
    """Canonical digit expansion of ``n >= 0``.

    >>> to_digits(0, 4, 3).digits
    (0,)
    >>> to_digits(7, 3, INFINITY).digits
    (2, 1)
    >>> to_digits(7, INFINITY, INFINITY).digits
    (7,)
    """
    if n < 0:
        raise ValueError("expected a non-negative integer, got %r" % (n,))
    if not is_finite(ell):
        return PLDigits((n,), ell, p)
    low = n % ell
    rest = n // ell
    if rest == 0:
        return PLDigits((low,), ell, p)
    if not is_finite(p):
        return PLDigits((rest, low), ell, p)
    high: List[int] = []
    while rest:
        high.append(rest % p)
        rest //= p
    return PLDigits(tuple(reversed(high)) + (low,), ell, p)


def from_digits(
    digits: "PLDigits | Sequence[int]",
    ell: Optional[ExtendedNat] = None,
    p: Optional[ExtendedNat] = None,
) -> int:
    """Reconstruct the integer from a (possibly signed, possibly
    non-canonical) digit sequence.

    >>> from_digits([1, -1], 4, 3)
    3
    >>> from_digits(to_digits(123456, 2, 5))
    123456
    """
    if isinstance(digits, PLDigits):
        seq, ell, p = digits.digits, digits.ell, digits.p
    else:
        seq = tuple(digits)
        if ell is None or p is None:
            raise ValueError("radix parameters required for a bare sequence")
    low_first = seq[::-1]
    if not is_finite(ell) and len(low_first) > 1:
        raise ValueError("at most one digit when the first radix is infinite")
    if not is_finite(p) and len(low_first) > 2:
        raise ValueError("at most two digits when the second radix is infinite")
    return sum(d * p_power(i, ell, p) for i, d in enumerate(low_first))


# ---------------------------------------------------------------------------
# Genealogy
# ---------------------------------------------------------------------------


def _shifted_digits(n: int, ell: ExtendedNat, p: ExtendedNat) -> Tuple[int, ...]:
    """Digits of ``n + 1``, least significant first."""
    return to_digits(n + 1, ell, p).digits[::-1]


def mother(n: int, ell: ExtendedNat, p: ExtendedNat) -> Optional[int]:
    """Zero out the least significant nonzero digit of ``n + 1`` and step
    back down; absent when ``n + 1`` has a single nonzero digit.

    >>> mother(278, 4, 3)
    275
    >>> mother(215, 4, 3) is None
    True
    """
    low_first = _shifted_digits(n, ell, p)
    nonzero = [i for i, d in enumerate(low_first) if d != 0]
    if len(nonzero) <= 1:
        return None
    i = nonzero[0]
    return n + 1 - low_first[i] * p_power(i, ell, p) - 1


def ancestors(n: int, ell: ExtendedNat, p: ExtendedNat) -> List[int]:
    """Matrilineal line of ``n``, nearest first.

    >>> ancestors(278, 4, 3)
    [275, 251, 215]
    """
    line: List[int] = []
    current: Optional[int] = n
    while True:
        current = mother(current, ell, p)
        if current is None:
            return line
        line.append(current)


def generation(n: int, ell: ExtendedNat, p: ExtendedNat) -> int:
    """Number of nonzero digits of ``n + 1`` beyond the first.

    >>> generation(278, 4, 3)
    3
    """
    low_first = _shifted_digits(n, ell, p)
    return max(sum(1 for d in low_first if d != 0) - 1, 0)


def is_eve(n: int, ell: ExtendedNat, p: ExtendedNat) -> bool:
    """True when ``n`` has no mother.

    >>> is_eve(3, 4, 3)
    True
    >>> is_eve(5, INFINITY, INFINITY)
    True
    """
    return generation(n, ell, p) == 0


# ---------------------------------------------------------------------------
# Down-admissible index sets and the support
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DownSet:
    """A set of digit positions of ``n + 1``, all below the leading one and
    all holding a nonzero digit, at which signs may be flipped."""

    indices: FrozenSet[int]

    def __iter__(self):
        return iter(sorted(self.indices))

    def __len__(self) -> int:
        return len(self.indices)


def is_down_admissible(
    n: int, indices: Sequence[int], ell: ExtendedNat, p: ExtendedNat
) -> bool:
    """Check the :class:`DownSet` conditions for ``n``."""
    low_first = _shifted_digits(n, ell, p)
    top = len(low_first) - 1
    return all(0 <= i < top and low_first[i] != 0 for i in set(indices))


def down_value(
    n: int, s: "DownSet | Sequence[int]", ell: ExtendedNat, p: ExtendedNat
) -> int:
    """The value obtained from ``n`` by flipping the signs of the digits of
    ``n + 1`` at the given positions.

    >>> down_value(278, [0], 4, 3)
    272
    >>> down_value(278, [0, 2, 3], 4, 3)
    152
    """
    indices = set(s.indices if isinstance(s, DownSet) else s)
    if not is_down_admissible(n, sorted(indices), ell, p):
        raise ValueError("index set is not down-admissible for %d" % (n,))
    low_first = _shifted_digits(n, ell, p)
    return n - 2 * sum(low_first[i] * p_power(i, ell, p) for i in indices)


def down_sets(n: int, ell: ExtendedNat, p: ExtendedNat) -> List[DownSet]:
    """All down-admissible index sets for ``n``, ordered so the resulting
    values are strictly decreasing (hence starting with the empty set).

    >>> [sorted(s.indices) for s in down_sets(278, 4, 3)][:3]
    [[], [0], [2]]
    """
    low_first = _shifted_digits(n, ell, p)
    top = len(low_first) - 1
    flippable = [i for i in range(top) if low_first[i] != 0]
    subsets = [
        DownSet(frozenset(combo))
        for size in range(len(flippable) + 1)
        for combo in itertools.combinations(flippable, size)
    ]
    return sorted(subsets, key=lambda s: -down_value(n, s, ell, p))


def support(n: int, ell: ExtendedNat, p: ExtendedNat) -> Tuple[int, ...]:
    """All values reachable from ``n`` by sign flips, ascending.

    >>> support(278, 4, 3)
    (152, 158, 200, 206, 224, 230, 272, 278)
    >>> support(3, 4, 3)
    (3,)
    """
    return tuple(
        sorted(down_value(n, s, ell, p) for s in down_sets(n, ell, p))
    )


def is_composition_factor(
    m_prime: int, m: int, ell: ExtendedNat, p: ExtendedNat
) -> bool:
    """True when ``m_prime`` lies in the support of ``m``.

    >>> is_composition_factor(272, 278, 4, 3)
    True
    >>> is_composition_factor(278, 272, 4, 3)
    False
    """
    return m_prime in support(m, ell, p)


# ---------------------------------------------------------------------------
# Dominance
# ---------------------------------------------------------------------------


def dominates(n: int, r: int, ell: ExtendedNat, p: ExtendedNat) -> bool:
    """Digitwise comparison of the canonical expansions of ``n`` and ``r``.

    >>> dominates(276, 3, 4, 3)
    False
    >>> dominates(276, 264, 4, 3)
    True
    """
    a = to_digits(n, ell, p).digits[::-1]
    b = to_digits(r, ell, p).digits[::-1]
    if len(b) > len(a):
        return False
    return all(x >= y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# Tails
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Tails:
    """Tail data of ``n``: the maximal tail length together with the tail
    positions holding digit 1 (``T``) and those holding a digit above 1
    (``S``) in the expansion of ``n + 1``."""

    t_n: int
    T: FrozenSet[int]
    S: FrozenSet[int]


def tails(n: int, ell: ExtendedNat, p: ExtendedNat) -> Tails:
    """Compute the tail data of ``n``.

    A tail of length ``t`` means the bottom digit of ``n + 1`` is maximal
    for its radix and so are the next ``t - 1`` digits; equivalently
    ``n + 2`` is divisible by the place value ``w(t)``.

    >>> tails(513398, 8, 5).t_n
    3
    >>> sorted(tails(513398, 8, 5).T), sorted(tails(513398, 8, 5).S)
    ([3], [0, 1, 2])
    >>> tails(39, 2, 5).t_n
    0
    """
    low_first = _shifted_digits(n, ell, p)

    def radix_max(i: int) -> Optional[int]:
        bound = ell if i == 0 else p
        return bound - 1 if is_finite(bound) else None

    t_n = 0
    for i in range(len(low_first)):
        if low_first[i] == radix_max(i):
            t_n = i + 1
        else:
            break

    def digit(i: int) -> int:
        return low_first[i] if i < len(low_first) else 0

    big_t = frozenset(t for t in range(t_n + 1) if digit(t) == 1)
    big_s = frozenset(t for t in range(t_n) if digit(t) > 1)
    return Tails(t_n, big_t, big_s)


def is_interior(n: int, ell: ExtendedNat, p: ExtendedNat) -> bool:
    """True when no tail position of ``n`` holds the digit 1.

    >>> is_interior(10, 3, 5)
    True
    >>> is_interior(9, 3, 5)
    False
    """
    return not tails(n, ell, p).T


# ---------------------------------------------------------------------------
# Defect sets
# ---------------------------------------------------------------------------


def e_set(r: int, s: int) -> Tuple[int, ...]:
    """The interval ``|r-s|, |r-s|+2, ..., r+s``.

    >>> e_set(3, 3)
    (0, 2, 4, 6)
    """
    if r < 0 or s < 0:
        raise ValueError("expected non-negative integers")
    return tuple(range(abs(r - s), r + s + 1, 2))


def s_min(mu: Sequence[int]) -> int:
    """Least number of strands left uncancelled across a sequence of
    strand groups, folded in left to right.

    >>> s_min((5, 3, 4, 7, 22))
    3
    >>> s_min((22, 7, 4, 3, 5))
    3
    """
    if not mu:
        return 0
    parts = list(mu)
    s = parts[0]
    total = parts[0]
    for c in parts[1:]:
        if c <= s:
            s = s - c
        elif c < total:
            s = (s - c) % 2
        else:
            s = c - total
        total += c
    return s


def e_mu(mu: Sequence[int]) -> Tuple[int, ...]:
    """All achievable defects for the composition ``mu``.

    >>> e_mu((3, 3))
    (0, 2, 4, 6)
    >>> e_mu((5,))
    (5,)
    """
    return tuple(range(s_min(mu), sum(mu) + 1, 2))
