"""Exact arithmetic in GF(q) for prime powers q <= 2**16.

Elements are plain ints in ``[0, q)``.  For an extension field GF(p**m) an
element's base-``p`` digits are the coefficients of a polynomial in ``z``
(least significant digit = constant term), reduced modulo a fixed monic
irreducible polynomial.  Unless one is supplied, the modulus is the
lexicographically-first monic irreducible polynomial of degree ``m``, where
polynomials are ordered by their integer encoding ``sum(c_i * p**i)``.
For GF(4) this gives ``z**2 + z + 1`` and for GF(256) the AES polynomial.

Fields with ``q <= 256`` use precomputed tables; larger ones reduce on the fly.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterator, Optional, Sequence, Tuple

from .errors import FieldDivisionByZero, FieldOverflowError, NotPrimePowerError

MAX_ORDER = 1 << 16
TABLE_LIMIT = 1 << 8

Poly = Tuple[int, ...]  # coefficients, constant term first


def prime_power(q: int) -> Optional[Tuple[int, int]]:
    """Return ``(p, m)`` with ``q == p**m`` and p prime, or None."""
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0 or d * d > q)
    if q % p:
        p = q
    m, rest = 0, q
    while rest % p == 0:
        rest //= p
        m += 1
    return (p, m) if rest == 1 else None


def _trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list:
    rem = _trim(list(a))
    lead_inv = pow(b[-1], p - 2, p)
    while len(rem) >= len(b):
        coef = rem[-1] * lead_inv % p
        shift = len(rem) - len(b)
        for j, bj in enumerate(b):
            rem[shift + j] = (rem[shift + j] - coef * bj) % p
        _trim(rem)
    return rem


def _monic_polys(degree: int, p: int) -> Iterator[Poly]:
    # ordered by integer encoding: low coefficients vary fastest
    for low in product(range(p), repeat=degree):
        yield tuple(reversed(low)) + (1,)


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = tuple(poly)
    degree = len(poly) - 1
    if degree < 1 or poly[-1] == 0:
        return False
    for d in range(1, degree // 2 + 1):
        for div in _monic_polys(d, p):
            if not _poly_mod(poly, div, p):
                return False
    return True


@lru_cache(maxsize=None)
def default_modulus(p: int, m: int) -> Poly:
    for cand in _monic_polys(m, p):
        if cand[0] != 0 and is_irreducible(cand, p):
            return cand
    raise AssertionError(f"no irreducible polynomial of degree {m} over GF({p})")


class Field:
    """The finite field GF(q).  Immutable; equal fields compare equal."""

    __slots__ = ("q", "p", "m", "modulus", "_add", "_mul", "_neg", "_inv", "_modint")

    def __init__(self, q: int, modulus: Optional[Sequence[int]] = None) -> None:
        if q > MAX_ORDER:
            raise FieldOverflowError(f"field order {q} exceeds supported bound {MAX_ORDER}")
        pm = prime_power(q)
        if pm is None:
            raise NotPrimePowerError(f"{q} is not a prime power")
        self.q = q
        self.p, self.m = pm
        if self.m == 1:
            if modulus is not None and len(modulus) != 2:
                raise NotPrimePowerError(f"GF({q}) is a prime field; no modulus of degree > 1 applies")
            self.modulus = None
        else:
            if modulus is None:
                modulus = default_modulus(self.p, self.m)
            modulus = tuple(int(c) % self.p for c in modulus)
            if len(modulus) != self.m + 1 or modulus[-1] != 1 or not is_irreducible(modulus, self.p):
                raise NotPrimePowerError(
                    f"{list(modulus)} is not a monic irreducible polynomial of degree {self.m} over GF({self.p})"
                )
            self.modulus = modulus
        self._modint = sum(c * self.p**i for i, c in enumerate(self.modulus or ()))
        self._add = self._mul = self._neg = self._inv = None
        if q <= TABLE_LIMIT:
            self._build_tables()

    # -- raw arithmetic, used to fill tables and above TABLE_LIMIT --------

    def _digits(self, a: int) -> list:
        out = []
        for _ in range(self.m):
            a, d = divmod(a, self.p)
            out.append(d)
        return out

    def _encode(self, digits: Sequence[int]) -> int:
        value = 0
        for d in reversed(digits):
            value = value * self.p + d
        return value

    def _raw_add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self._encode([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def _raw_neg(self, a: int) -> int:
        if self.m == 1:
            return -a % self.p
        if self.p == 2:
            return a
        return self._encode([-x % self.p for x in self._digits(a)])

    def _raw_mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        if self.p == 2:
            acc = 0
            top = 1 << self.m
            while b:
                if b & 1:
                    acc ^= a
                b >>= 1
                a <<= 1
                if a & top:
                    a ^= self._modint
            return acc
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        rem = _poly_mod(prod, self.modulus, self.p)
        return self._encode(rem + [0] * (self.m - len(rem)))

    def _raw_inv(self, a: int) -> int:
        # a**(q-2) = a**-1 by Lagrange
        result, base, e = 1, a, self.q - 2
        while e:
            if e & 1:
                result = self._raw_mul(result, base)
            base = self._raw_mul(base, base)
            e >>= 1
        return result

    def _build_tables(self) -> None:
        q = self.q
        self._add = [[self._raw_add(a, b) for b in range(q)] for a in range(q)]
        self._mul = [[self._raw_mul(a, b) for b in range(q)] for a in range(q)]
        self._neg = [self._raw_neg(a) for a in range(q)]
        inv = [0] * q
        for a in range(1, q):
            inv[a] = self._mul[a].index(1)
        self._inv = inv

    # -- public arithmetic --------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self._add is not None:
            return self._add[a][b]
        return self._raw_add(a, b)

    def neg(self, a: int) -> int:
        if self._neg is not None:
            return self._neg[a]
        return self._raw_neg(a)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self._mul is not None:
            return self._mul[a][b]
        return self._raw_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise FieldDivisionByZero(f"0 has no inverse in GF({self.q})")
        if self._inv is not None:
            return self._inv[a]
        return self._raw_inv(a)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def element(self, value: int) -> int:
        """Validate and return a canonical representative."""
        value = int(value)
        if not 0 <= value < self.q:
            raise ValueError(f"{value} is not an element of GF({self.q})")
        return value

    def elements(self) -> range:
        return range(self.q)

    # -- identity -----------------------------------------------------------

    def header(self) -> dict:
        out = {"q": self.q}
        if self.modulus is not None:
            out["reduction_poly"] = list(self.modulus)
        return out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Field) and (self.q, self.modulus) == (other.q, other.modulus)

    def __hash__(self) -> int:
        return hash((self.q, self.modulus))

    def __repr__(self) -> str:
        if self.modulus is None:
            return f"GF({self.q})"
        return f"GF({self.q}, modulus={list(self.modulus)})"


@lru_cache(maxsize=64)
def _cached_field(q: int, modulus: Optional[Poly]) -> Field:
    return Field(q, modulus)


def field_new(q: int, modulus: Optional[Sequence[int]] = None) -> Field:
    """Construct (or reuse) GF(q).  Raises NotPrimePowerError / FieldOverflowError."""
    if q > MAX_ORDER:
        raise FieldOverflowError(f"field order {q} exceeds supported bound {MAX_ORDER}")
    return _cached_field(int(q), tuple(modulus) if modulus is not None else None)
