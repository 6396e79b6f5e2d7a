"""Exact arithmetic for quantum integers over pointed rings with (l,p)-torsion.

A *pointed ring* carries a distinguished element ``d`` (the loop value) such
that the quantum integers -- the Chebyshev-like polynomials defined by
``[n+1] + [n-1] = d*[n]``, ``[0] = 0``, ``[1] = 1`` -- first vanish at ``[l]``,
and the ring has characteristic ``p``.  Three arithmetic modes are supported:

* ``GENERIC``   -- the rational function field Q(d) (or F_p(d) when p is
  finite), i.e. l = infinity: no quantum integer vanishes.
* ``CHAR_ZERO_ROOT`` -- Q[d]/psi_l where psi_l is the "quantum cyclotomic"
  polynomial singled out by the factorization ``[n] = prod_{e|n, e>1} psi_e``.
* ``MIXED``     -- F_p[d]/(f) for an irreducible factor f of psi_l mod p,
  validated so that [l] is still the first vanishing quantum integer.

Every value is exact; no floating point is used anywhere in the package.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Optional, Union


# ---------------------------------------------------------------------------
# Extended naturals
# ---------------------------------------------------------------------------

class _Infinity:
    """The distinguished value 'infinity'; compares above every integer."""

    _instance: Optional["_Infinity"] = None

    def __new__(cls) -> "_Infinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other: object) -> bool:
        return isinstance(other, _Infinity)

    def __hash__(self) -> int:
        return hash("infinity")

    def __gt__(self, other: object) -> bool:
        return not isinstance(other, _Infinity)

    def __ge__(self, other: object) -> bool:
        return True

    def __lt__(self, other: object) -> bool:
        return False

    def __le__(self, other: object) -> bool:
        return isinstance(other, _Infinity)

    def __repr__(self) -> str:
        return "inf"


INFINITY = _Infinity()
ExtendedNat = Union[int, _Infinity]


def is_finite(x: ExtendedNat) -> bool:
    return not isinstance(x, _Infinity)


def parse_extended_nat(text: str) -> ExtendedNat:
    text = text.strip().lower()
    if text in ("inf", "infinity", "oo"):
        return INFINITY
    return int(text)


def render_extended_nat(x: ExtendedNat) -> str:
    return "inf" if not is_finite(x) else str(x)


class Mode(Enum):
    GENERIC = "generic"
    CHAR_ZERO_ROOT = "char_zero_root"
    MIXED = "mixed"


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class NoValidModulus(Exception):
    """No modulus realizes (l,p)-torsion for this parameter pair."""

    def __init__(self, ell: ExtendedNat, p: ExtendedNat):
        self.ell, self.p = ell, p
        super().__init__(f"no valid modulus for (l, p) = ({ell}, {p})")


class ZeroDivisorInRing(Exception):
    """Attempted to invert a nonzero zero divisor (reducible modulus)."""


# ---------------------------------------------------------------------------
# Dense integer-coefficient polynomial helpers (tuples, constant term first)
# ---------------------------------------------------------------------------

def _trim(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _padd(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if len(a) < len(b):
        a, b = b, a
    c = list(a)
    for i, x in enumerate(b):
        c[i] += x
    return _trim(c)


def _pneg(a: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-x for x in a)


def _psub(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return _padd(a, _pneg(b))


def _pmul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    la, lb = len(a), len(b)
    if la * lb <= 64:
        c = [0] * (la + lb - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    c[i + j] += x * y
        return _trim(c)
    # Kronecker substitution: pack into integers, multiply natively, and
    # unpack centered digits (coefficients can be negative).
    bits = (max(map(abs, a)).bit_length() + max(map(abs, b)).bit_length()
            + min(la, lb).bit_length() + 1)
    ia = sum(x << (i * bits) for i, x in enumerate(a) if x)
    ib = sum(x << (i * bits) for i, x in enumerate(b) if x)
    prod = ia * ib
    mask = (1 << bits) - 1
    half = 1 << (bits - 1)
    c = [0] * (la + lb - 1)
    for i in range(la + lb - 1):
        d = prod & mask
        if d >= half:
            d -= mask + 1
        c[i] = d
        prod = (prod - d) >> bits
    return _trim(c)


def _pscale(a: tuple[int, ...], s: int) -> tuple[int, ...]:
    if s == 0:
        return ()
    return tuple(x * s for x in a)


def _pcontent(a: tuple[int, ...]) -> int:
    g = 0
    for x in a:
        g = gcd(g, x)
    return g


def _pprimitive(a: tuple[int, ...]) -> tuple[int, ...]:
    """Divide out the content; sign chosen so the leading coefficient is > 0."""
    if not a:
        return ()
    g = _pcontent(a)
    if a[-1] < 0:
        g = -g
    return tuple(x // g for x in a)


def _pdiv_exact(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Exact division of integer polynomials (raises if not exact)."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return ()
    rem = list(a)
    db = len(b) - 1
    lead = b[-1]
    q = [0] * (len(a) - len(b) + 1)
    for k in range(len(q) - 1, -1, -1):
        coef, r = divmod(rem[k + db], lead)
        if r:
            raise ArithmeticError("inexact polynomial division")
        q[k] = coef
        if coef:
            for j, y in enumerate(b):
                rem[k + j] -= coef * y
    if any(rem):
        raise ArithmeticError("inexact polynomial division")
    return _trim(q)


def _prem_pseudo(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Pseudo-remainder of a by b (for the primitive PRS gcd)."""
    da, db = len(a) - 1, len(b) - 1
    lead = b[-1]
    r = list(a)
    for k in range(da - db, -1, -1):
        coef = r[k + db]
        r = [x * lead for x in r]
        for j, y in enumerate(b):
            r[k + j] -= coef * y
        # r now has degree < k + db at position k + db
    return _trim(r[:db] if db > 0 else [])


# primes used to certify coprimality cheaply before running the full PRS
_GCD_PRIMES = ((1 << 31) - 1, (1 << 61) - 1)


def _coprime_mod_prime(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    """True when a and b are certified coprime by a gcd modulo a big prime.

    A constant gcd mod q (with q dividing neither leading coefficient)
    bounds the true gcd degree by zero.  A nonconstant modular gcd is
    inconclusive and the caller must fall back to the exact routine.
    """
    for q in _GCD_PRIMES:
        if a[-1] % q == 0 or b[-1] % q == 0:
            continue
        fa = [x % q for x in a]
        fb = [x % q for x in b]
        while fb:
            inv = pow(fb[-1], -1, q)
            db = len(fb) - 1
            for k in range(len(fa) - 1 - db, -1, -1):
                coef = fa[k + db] * inv % q
                if coef:
                    for j, y in enumerate(fb):
                        fa[k + j] = (fa[k + j] - coef * y) % q
            while fa and fa[-1] == 0:
                fa.pop()
            fa, fb = fb, fa
        return len(fa) == 1
    return False


def _pgcd(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """gcd of integer polynomials, primitive with positive leading coefficient."""
    ca, cb = abs(_pcontent(a)) if a else 0, abs(_pcontent(b)) if b else 0
    a, b = (_pprimitive(a), _pprimitive(b)) if a and b else (a, b)
    if not a:
        return _pprimitive(b) if b else ()
    if not b:
        return _pprimitive(a)
    c = gcd(ca, cb)
    if (len(a) == 1 or len(b) == 1
            or _coprime_mod_prime(a, b)):
        return (c,) if c > 1 else (1,)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem_pseudo(a, b)
        a, b = b, _pprimitive(r) if r else ()
    g = a
    return _pmul(g, (c,)) if c > 1 else g


# --- the same story over F_p -----------------------------------------------

def _mp_trim(c: list[int], p: int) -> tuple[int, ...]:
    c = [x % p for x in c]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _mp_add(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    c = list(a)
    for i, x in enumerate(b):
        c[i] += x
    return _mp_trim(c, p)


def _mp_sub(a, b, p):
    c = list(a) + [0] * max(0, len(b) - len(a))
    for i, x in enumerate(b):
        c[i] -= x
    return _mp_trim(c, p)


def _mp_mul(a, b, p):
    if not a or not b:
        return ()
    c = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                c[i + j] += x * y
    return _mp_trim(c, p)


def _mp_divmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], -1, p)
    r = list(a)
    q = [0] * max(0, len(a) - len(b) + 1)
    for k in range(len(q) - 1, -1, -1):
        coef = (r[k + len(b) - 1] * inv_lead) % p
        q[k] = coef
        if coef:
            for j, y in enumerate(b):
                r[k + j] = (r[k + j] - coef * y) % p
    return _mp_trim(q, p), _mp_trim(r[: len(b) - 1], p)


def _mp_gcd(a, b, p):
    while b:
        a, b = b, _mp_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = _mp_trim([x * inv for x in a], p)
    return a


def _mp_invert(a, modulus, p):
    """Inverse of a modulo (modulus, p) via extended Euclid; None if absent."""
    r0, r1 = modulus, a
    s0, s1 = (), (1,)
    while r1:
        q, r = _mp_divmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _mp_sub(s0, _mp_mul(q, s1, p), p)
    if len(r0) != 1:  # gcd not a unit
        return None
    inv = pow(r0[0], -1, p)
    return _mp_trim([x * inv for x in s0], p)


# --- and over Q (Fraction coefficients) ------------------------------------

def _fq_trim(c: list[Fraction]) -> tuple[Fraction, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _fq_divmod(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = 1 / Fraction(b[-1])
    r = [Fraction(x) for x in a]
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    for k in range(len(q) - 1, -1, -1):
        coef = r[k + len(b) - 1] * inv_lead
        q[k] = coef
        if coef:
            for j, y in enumerate(b):
                r[k + j] -= coef * y
    return _fq_trim(q), _fq_trim(r[: len(b) - 1])


def _fq_mul(a, b):
    if not a or not b:
        return ()
    c = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                c[i + j] += x * y
    return _fq_trim(c)


def _fq_add(a, b):
    c = [Fraction(x) for x in a] + [Fraction(0)] * max(0, len(b) - len(a))
    for i, x in enumerate(b):
        c[i] += x
    return _fq_trim(c)


def _fq_invert(a, modulus):
    """Inverse of a modulo modulus over Q; None if gcd is not a unit."""
    r0, r1 = tuple(Fraction(x) for x in modulus), tuple(Fraction(x) for x in a)
    s0, s1 = (), (Fraction(1),)
    while r1:
        q, r = _fq_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _fq_add(s0, tuple(-x for x in _fq_mul(q, s1)))
    if len(r0) != 1:
        return None
    inv = 1 / r0[0]
    return _fq_trim([x * inv for x in s0])


# ---------------------------------------------------------------------------
# The ring and its elements
# ---------------------------------------------------------------------------

class PointedRing:
    """A coefficient ring with (l, p)-torsion.  Construct via :func:`build_ring`.

    Instances are immutable value objects; equality and hashing use the
    defining data ``(ell, p, mode, modulus)``.  Internal caches (quantum
    integers) are invisible to callers.
    """

    def __init__(self, ell: ExtendedNat, p: ExtendedNat, mode: Mode,
                 modulus: Optional[tuple[int, ...]]):
        self.ell = ell
        self.p = p
        self.mode = mode
        self.modulus = modulus
        self._qints: list["RingElement"] = []
        self._mul_cache: dict = {}
        self._key = (render_extended_nat(ell), render_extended_nat(p),
                     mode.value, modulus)
        if mode is Mode.GENERIC:
            self.charp: Optional[int] = p if is_finite(p) else None
        else:
            self.charp = p if mode is Mode.MIXED else None

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PointedRing) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return (f"PointedRing(ell={render_extended_nat(self.ell)}, "
                f"p={render_extended_nat(self.p)}, mode={self.mode.value})")

    # -- element constructors ------------------------------------------------

    def _make(self, data) -> "RingElement":
        return RingElement(self, data)

    @property
    def zero(self) -> "RingElement":
        if self.mode is Mode.GENERIC:
            return self._make(((), (1,)))
        return self._make(())

    @property
    def one(self) -> "RingElement":
        if self.mode is Mode.GENERIC:
            return self._make(((1,), (1,)))
        return self.from_int(1)

    @property
    def delta(self) -> "RingElement":
        if self.mode is Mode.GENERIC:
            num = (0, 1) if self.charp is None else ((0, 1) if self.charp > 1 else ())
            return self._make((num, (1,)))
        return self.from_int_poly((0, 1))

    def from_int(self, k: int) -> "RingElement":
        return self.from_int_poly((k,))

    def from_int_poly(self, coeffs: tuple[int, ...]) -> "RingElement":
        """The image of an integer polynomial in d."""
        if self.mode is Mode.GENERIC:
            if self.charp is None:
                return self._make((_trim(coeffs), (1,)))
            return self._make((_mp_trim(list(coeffs), self.charp), (1,)))
        if self.mode is Mode.MIXED:
            reduced = _mp_divmod(_mp_trim(list(coeffs), self.p), self.modulus, self.p)[1]
            return self._make(reduced)
        red = _fq_divmod(tuple(Fraction(c) for c in _trim(coeffs)),
                         tuple(Fraction(c) for c in self.modulus))[1]
        return self._make(red)

    def from_rational(self, q: Fraction) -> "RingElement":
        q = Fraction(q)
        if self.mode is Mode.GENERIC:
            if self.charp is None:
                return self._make(((q.numerator,) if q else (), (q.denominator,)))
            num = q.numerator % self.charp
            den = pow(q.denominator % self.charp, -1, self.charp)
            return self._make((_mp_trim([num * den], self.charp), (1,)))
        if self.mode is Mode.MIXED:
            num = q.numerator % self.p
            if q.denominator % self.p == 0:
                raise ZeroDivisionError(f"{q} is not p-integral at p={self.p}")
            den = pow(q.denominator % self.p, -1, self.p)
            return self._make(_mp_trim([num * den], self.p))
        return self._make(_fq_trim([q]))

    # -- reduction from the generic (characteristic-0) master field ----------

    def from_generic(self, x: "RingElement") -> "RingElement":
        """Reduce an element of the char-0 GENERIC ring into this ring.

        Raises ZeroDivisorInRing when the (reduced) denominator is not
        invertible here; callers translate that into their own error types.
        """
        assert x.ring.mode is Mode.GENERIC and x.ring.charp is None
        num, den = x.data
        if self.mode is Mode.GENERIC and self.charp is None:
            return self._make((num, den))
        num_elt = self.from_int_poly(num)
        if den == (1,):
            return num_elt
        den_elt = self.from_int_poly(den)
        return num_elt / den_elt

    # -- arithmetic ----------------------------------------------------------

    def _add(self, a, b):
        if self.mode is Mode.GENERIC:
            (n1, d1), (n2, d2) = a, b
            if self.charp is None:
                if d1 == d2:
                    if d1 == (1,):
                        return (_padd(n1, n2), (1,))
                    return self._norm_frac(_padd(n1, n2), d1)
                key = ('+', a, b) if a <= b else ('+', b, a)
                hit = self._mul_cache.get(key)
                if hit is not None:
                    return hit
                out = self._add_frac(n1, d1, n2, d2)
                if len(self._mul_cache) < 1 << 20:
                    self._mul_cache[key] = out
                return out
            p = self.charp
            if d1 == d2:
                return self._norm_frac_p(_mp_add(n1, n2, p), d1)
            return self._norm_frac_p(
                _mp_add(_mp_mul(n1, d2, p), _mp_mul(n2, d1, p), p),
                _mp_mul(d1, d2, p))
        if self.mode is Mode.MIXED:
            return _mp_add(a, b, self.p)
        return _fq_add(a, b)

    def _add_frac(self, n1, d1, n2, d2):
        """Sum of two canonical fractions over Q with distinct denominators."""
        g = _pgcd(d1, d2)
        if len(g) > 1 or g[0] != 1:
            q1, q2 = _pdiv_exact(d1, g), _pdiv_exact(d2, g)
            return self._norm_frac(
                _padd(_pmul(n1, q2), _pmul(n2, q1)), _pmul(d1, q2))
        return self._norm_frac(_padd(_pmul(n1, d2), _pmul(n2, d1)),
                               _pmul(d1, d2))

    def _neg(self, a):
        if self.mode is Mode.GENERIC:
            return (_pneg(a[0]) if self.charp is None
                    else _mp_trim([-x for x in a[0]], self.charp), a[1])
        if self.mode is Mode.MIXED:
            return _mp_trim([-x for x in a], self.p)
        return tuple(-x for x in a)

    def _mul(self, a, b):
        if self.mode is Mode.GENERIC:
            (n1, d1), (n2, d2) = a, b
            if self.charp is None:
                if not n1 or not n2:
                    return ((), (1,))
                key = (a, b) if a <= b else (b, a)
                hit = self._mul_cache.get(key)
                if hit is not None:
                    return hit
                # cross-cancel so the product is born coprime
                g = _pgcd(n1, d2)
                if len(g) > 1 or g[0] != 1:
                    n1, d2 = _pdiv_exact(n1, g), _pdiv_exact(d2, g)
                g = _pgcd(n2, d1)
                if len(g) > 1 or g[0] != 1:
                    n2, d1 = _pdiv_exact(n2, g), _pdiv_exact(d1, g)
                out = self._norm_content(_pmul(n1, n2), _pmul(d1, d2))
                if len(self._mul_cache) < 1 << 20:
                    self._mul_cache[key] = out
                return out
            p = self.charp
            return self._norm_frac_p(_mp_mul(n1, n2, p), _mp_mul(d1, d2, p))
        if self.mode is Mode.MIXED:
            return _mp_divmod(_mp_mul(a, b, self.p), self.modulus, self.p)[1]
        return _fq_divmod(_fq_mul(a, b), tuple(Fraction(c) for c in self.modulus))[1]

    def _inv(self, a):
        if self.mode is Mode.GENERIC:
            n, d = a
            if not n:
                raise ZeroDivisionError("division by zero")
            if self.charp is None:
                # the stored fraction is coprime, so a swap only needs
                # the content and sign fixed up
                return self._norm_content(d, n)
            return self._norm_frac_p(d, n)
        if not a:
            raise ZeroDivisionError("division by zero")
        if self.mode is Mode.MIXED:
            inv = _mp_invert(a, self.modulus, self.p)
            if inv is None:
                raise ZeroDivisorInRing(f"{a} is a zero divisor mod {self.modulus}")
            return inv
        inv = _fq_invert(a, self.modulus)
        if inv is None:
            raise ZeroDivisorInRing(f"{a} is a zero divisor mod {self.modulus}")
        return inv

    # -- canonicalization -----------------------------------------------------

    def _norm_frac(self, num: tuple[int, ...], den: tuple[int, ...]):
        """Canonical form over Q: num/den coprime, den primitive, lead(den) > 0."""
        if not num:
            return ((), (1,))
        if not den:
            raise ZeroDivisionError("division by zero")
        if len(den) > 1 and len(num) > 1:
            g = _pgcd(num, den)
            if len(g) > 1 or g[0] != 1:
                num = _pdiv_exact(num, g)
                den = _pdiv_exact(den, g)
        return self._norm_content(num, den)

    def _norm_content(self, num: tuple[int, ...], den: tuple[int, ...]):
        """Content and sign normalization for an already coprime fraction."""
        if not num:
            return ((), (1,))
        c = gcd(_pcontent(num), _pcontent(den))
        if den[-1] < 0:
            c = -c
        if c != 1:
            num = tuple(x // c for x in num)
            den = tuple(x // c for x in den)
        return (num, den)

    def _norm_frac_p(self, num, den):
        """Canonical form over F_p: num/den coprime, den monic."""
        p = self.charp
        if not num:
            return ((), (1,))
        if not den:
            raise ZeroDivisionError("division by zero")
        g = _mp_gcd(num, den, p)
        if len(g) > 1:
            num = _mp_divmod(num, g, p)[0]
            den = _mp_divmod(den, g, p)[0]
        inv = pow(den[-1], -1, p)
        if inv != 1:
            num = _mp_trim([x * inv for x in num], p)
            den = _mp_trim([x * inv for x in den], p)
        return (num, den)


@dataclass(frozen=True)
class RingElement:
    """An exact scalar in a pointed ring; immutable, canonical, hashable."""

    ring: PointedRing
    data: tuple

    def is_zero(self) -> bool:
        if self.ring.mode is Mode.GENERIC:
            return not self.data[0]
        return not self.data

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _coerce(self, other) -> Optional["RingElement"]:
        if isinstance(other, RingElement):
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        return None

    def __add__(self, other) -> "RingElement":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RingElement(self.ring, self.ring._add(self.data, other.data))

    __radd__ = __add__

    def __sub__(self, other) -> "RingElement":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RingElement(self.ring,
                           self.ring._add(self.data, self.ring._neg(other.data)))

    def __rsub__(self, other) -> "RingElement":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self) -> "RingElement":
        return RingElement(self.ring, self.ring._neg(self.data))

    def __mul__(self, other) -> "RingElement":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RingElement(self.ring, self.ring._mul(self.data, other.data))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RingElement":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RingElement(self.ring,
                           self.ring._mul(self.data, self.ring._inv(other.data)))

    def inverse(self) -> "RingElement":
        return RingElement(self.ring, self.ring._inv(self.data))

    def __pow__(self, k: int) -> "RingElement":
        if k < 0:
            return self.inverse() ** (-k)
        out = self.ring.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __repr__(self) -> str:
        return f"RingElement({render(self)!r})"


# ---------------------------------------------------------------------------
# Rendering and parsing
# ---------------------------------------------------------------------------

def _render_poly(coeffs, unit_den: bool = True) -> str:
    """Render a dense coefficient sequence as e.g. ``d^4-3*d^2+1``."""
    if not coeffs:
        return "0"
    parts = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        if isinstance(c, Fraction):
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            mag_s = str(mag)
        else:
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            mag_s = str(mag)
        if i == 0:
            term = mag_s
        else:
            var = "d" if i == 1 else f"d^{i}"
            term = var if mag == 1 else f"{mag_s}*{var}"
        if not parts:
            parts.append(term if sign == "+" else f"-{term}")
        else:
            parts.append(f"{sign}{term}")
    return "".join(parts)


def render(x: RingElement) -> str:
    """Canonical text form of a ring element; exact round trip with parse."""
    if x.ring.mode is Mode.GENERIC:
        num, den = x.data
        if den == (1,):
            return _render_poly(num)
        return f"({_render_poly(num)})/({_render_poly(den)})"
    return _render_poly(x.data)


_TERM_RE = re.compile(
    r"(?P<sign>[+-]?)\s*(?:(?P<coef>\d+(?:/\d+)?)\s*\*?\s*)?"
    r"(?:d(?:\^(?P<exp>\d+))?)?")


def _parse_poly(text: str) -> dict[int, Fraction]:
    text = text.strip()
    if not text:
        raise ValueError("empty polynomial")
    out: dict[int, Fraction] = {}
    pos = 0
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at: {text[pos:]!r}")
        sign = -1 if m.group("sign") == "-" else 1
        coef_s = m.group("coef")
        has_d = "d" in text[m.start():m.end()]
        if coef_s is None and not has_d:
            raise ValueError(f"cannot parse polynomial at: {text[pos:]!r}")
        coef = Fraction(coef_s) if coef_s else Fraction(1)
        if has_d:
            exp = int(m.group("exp")) if m.group("exp") else 1
        else:
            exp = 0
        out[exp] = out.get(exp, Fraction(0)) + sign * coef
        pos = m.end()
    return out


def parse(text: str, ring: PointedRing) -> RingElement:
    """Parse the canonical text form back into a ring element."""
    text = text.strip()
    if text.startswith("(") and ")/(" in text and text.endswith(")"):
        num_s, den_s = text[1:-1].split(")/(")
        num, den = _parse_poly(num_s), _parse_poly(den_s)
    else:
        num, den = _parse_poly(text), {0: Fraction(1)}

    def build(d: dict[int, Fraction]) -> RingElement:
        if not d:
            return ring.zero
        deg = max(d)
        lcm = 1
        for f in d.values():
            lcm = lcm * f.denominator // gcd(lcm, f.denominator)
        coeffs = tuple(int(d.get(i, Fraction(0)) * lcm) for i in range(deg + 1))
        out = ring.from_int_poly(coeffs)
        if lcm != 1:
            out = out / ring.from_int(lcm)
        return out

    return build(num) / build(den) if den != {0: Fraction(1)} else build(num)


# ---------------------------------------------------------------------------
# Quantum integers, factorials, binomials
# ---------------------------------------------------------------------------

def quantum_int(n: int, ring: PointedRing) -> RingElement:
    """The quantum integer [n] in the given ring; [-n] = -[n]."""
    if n < 0:
        return -quantum_int(-n, ring)
    cache = ring._qints
    if not cache:
        cache.extend([ring.zero, ring.one])
    d = ring.delta
    while len(cache) <= n:
        cache.append(d * cache[-1] - cache[-2])
    return cache[n]


def _qint_poly(n: int) -> tuple[int, ...]:
    """[n] as an integer polynomial in d (characteristic zero)."""
    a, b = (), (1,)
    for _ in range(n):
        a, b = b, _psub(_pmul((0, 1), b), a)
    return a


_GENERIC_RING: Optional[PointedRing] = None


def generic_ring() -> PointedRing:
    """The master field Q(d)."""
    global _GENERIC_RING
    if _GENERIC_RING is None:
        _GENERIC_RING = PointedRing(INFINITY, INFINITY, Mode.GENERIC, None)
    return _GENERIC_RING


def quantum_factorial(n: int, ring: PointedRing) -> RingElement:
    """[n]! = [n][n-1]...[1]."""
    out = ring.one
    for i in range(2, n + 1):
        out = out * quantum_int(i, ring)
    return out


def _to_positive_form(poly: tuple[int, ...]) -> tuple[int, ...]:
    """Alternate the signs of a parity polynomial so it becomes sign-free.

    Quantum integers (and their products and binomials) only involve every
    other power of d, with signs alternating from the leading term; flipping
    the sign of every other nonzero coefficient yields a polynomial with
    non-negative coefficients.  The map is an involution given the degree.
    """
    d = len(poly) - 1
    return tuple(c if (d - i) % 4 == 0 else -c for i, c in enumerate(poly))


def _kronecker_encode(poly: tuple[int, ...], bits: int) -> int:
    return sum(c << (bits * i) for i, c in enumerate(poly))


def _kronecker_decode(value: int, bits: int) -> tuple[int, ...]:
    mask = (1 << bits) - 1
    out = []
    while value:
        out.append(value & mask)
        value >>= bits
    return tuple(out) if out else (0,)


@lru_cache(maxsize=None)
def _lucas_xform(j: int) -> tuple[int, ...]:
    """Sign-free form of the two-sided power sum q^j + q^-j."""
    if j == 0:
        return (2,)
    a, b = (2,), (0, 1)
    for _ in range(j - 1):
        a, b = b, tuple(
            x + y
            for x, y in zip((0,) + b, a + (0,) * (len(b) + 1 - len(a)))
        )
    return b


@lru_cache(maxsize=None)
def _qbinom_xform(n: int, k: int) -> tuple[int, ...]:
    """Sign-free form of [n over k].

    Uses the Pascal-type recurrence 2*[n over k] =
    (q^k + q^-k)*[n-1 over k] + (q^(n-k) + q^(k-n))*[n-1 over k-1],
    in which every polynomial has non-negative coefficients, so each step
    is two exact big-integer multiplications via evaluation at a power of
    two wide enough to keep coefficients in separate bit ranges.
    """
    k = min(k, n - k)
    if k == 0:
        return (1,)
    a = _qbinom_xform(n - 1, k)
    b = _qbinom_xform(n - 1, k - 1)
    ck = _lucas_xform(k)
    cnk = _lucas_xform(n - k)
    bits = (sum(a) * sum(ck) + sum(b) * sum(cnk)).bit_length() + 2
    total = _kronecker_encode(a, bits) * _kronecker_encode(ck, bits)
    total += _kronecker_encode(b, bits) * _kronecker_encode(cnk, bits)
    assert total % 2 == 0
    return _kronecker_decode(total // 2, bits)


@lru_cache(maxsize=None)
def _qbinom_poly(n: int, k: int) -> tuple[int, ...]:
    """[n over k] as an integer polynomial in d (exact, characteristic 0)."""
    return _to_positive_form(_qbinom_xform(n, k))


def quantum_binomial(n: int, k: int, ring: PointedRing) -> RingElement:
    """The quantum binomial [n over k], always ring-valued.

    Computed exactly over Q(d) as a polynomial (the product formula divides
    exactly), then reduced into the target ring.
    """
    if not (0 <= k <= n):
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    return ring.from_int_poly(_qbinom_poly(n, k))


def qint_ratio(a: int, b: int, i: int, ring: PointedRing) -> RingElement:
    """[a*p^(i)]/[b*p^(i)] in the ring; the image of a/b up to a sign.

    The sign is (-1)^((a-b)*p^(i-1)) on the branch where q^l = -1; which
    branch the ring realizes depends on the modulus, so the value is
    computed honestly rather than from that formula.

    The quotient is cancelled exactly over Q(d) first, then reduced.
    """
    if b == 0:
        raise ZeroDivisionError("b must be nonzero")
    if not is_finite(ring.ell):
        raise ValueError("ring must have finite l")
    pi = p_power(i, ring.ell, ring.p)
    g = generic_ring()
    ratio = g._make(g._norm_frac(_qint_poly(a * pi), _qint_poly(b * pi)))
    try:
        return ring.from_generic(ratio)
    except (ZeroDivisorInRing, ZeroDivisionError) as exc:
        raise ZeroDivisionError(
            f"[{a}*p^({i})]/[{b}*p^({i})] does not reduce into {ring}") from exc


def p_power(i: int, ell: ExtendedNat, p: ExtendedNat) -> int:
    """The mixed radix weight: 1 for i = 0, l * p^(i-1) for i > 0."""
    if i == 0:
        return 1
    if not is_finite(ell):
        raise ValueError("weight undefined for l = infinity and i > 0")
    if i == 1:
        return ell  # type: ignore[return-value]
    if not is_finite(p):
        raise ValueError("weight undefined for p = infinity and i > 1")
    return ell * p ** (i - 1)  # type: ignore[operator]


# ---------------------------------------------------------------------------
# Ring construction
# ---------------------------------------------------------------------------

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def _proper_divisors_gt1(n: int) -> list[int]:
    return [d for d in range(2, n) if n % d == 0]


_PSI_CACHE: dict[int, tuple[int, ...]] = {}


def psi_polynomial(ell: int) -> tuple[int, ...]:
    """The 'quantum cyclotomic' psi_l, via [n] = prod_{e | n, e > 1} psi_e."""
    if ell in _PSI_CACHE:
        return _PSI_CACHE[ell]
    poly = _qint_poly(ell)
    for d in _proper_divisors_gt1(ell):
        poly = _pdiv_exact(poly, psi_polynomial(d))
    _PSI_CACHE[ell] = poly
    return poly


def _validate_first_vanishing(ring: PointedRing) -> bool:
    ell = ring.ell
    for i in range(2, ell):
        if quantum_int(i, ring).is_zero():
            return False
    return quantum_int(ell, ring).is_zero()


def _factor_mod_p(poly: tuple[int, ...], p: int) -> list[tuple[int, ...]]:
    """Distinct monic irreducible factors of an integer polynomial mod p."""
    import sympy

    x = sympy.symbols("x")
    expr = sum(int(c) % p * x ** i for i, c in enumerate(poly))
    if expr == 0:
        return []
    factors = sympy.factor_list(sympy.Poly(expr, x, modulus=p))[1]
    out = []
    for fac, _mult in factors:
        fp = sympy.Poly(fac, x, modulus=p)
        coeffs = [int(c) % p for c in reversed(fp.all_coeffs())]
        tup = _mp_trim(coeffs, p)
        if len(tup) > 1:  # drop constant factors
            out.append(tup)
    return sorted(set(out), key=lambda f: (len(f), f))


def build_ring(ell: ExtendedNat, p: ExtendedNat) -> PointedRing:
    """Construct the pointed ring with (l, p)-torsion.

    l = infinity gives the generic mode (over Q or F_p); otherwise the
    modulus is psi_l (p = infinity) or a validated irreducible factor of
    psi_l mod p, chosen deterministically (least by (degree, coefficients)).
    """
    if is_finite(ell) and ell <= 1:
        raise ValueError("l must be > 1 or infinity")
    if is_finite(p) and not _is_prime(p):
        raise ValueError("p must be prime or infinity")
    if not is_finite(ell):
        return PointedRing(ell, p, Mode.GENERIC, None)
    psi = psi_polynomial(ell)
    if not is_finite(p):
        ring = PointedRing(ell, p, Mode.CHAR_ZERO_ROOT, psi)
        if not _validate_first_vanishing(ring):
            raise NoValidModulus(ell, p)
        return ring
    for factor in _factor_mod_p(psi, p):
        ring = PointedRing(ell, p, Mode.MIXED, factor)
        if _validate_first_vanishing(ring):
            return ring
    raise NoValidModulus(ell, p)
