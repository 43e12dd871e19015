"""Arithmetic in GF(2^w).

Elements are plain ints in ``[0, 2^w)``; bit ``i`` of the int is the
coefficient of ``x^i``.  The modulus for each width is the numerically
smallest irreducible polynomial of that degree, which gives x^3+x+1 for
w=3, x^4+x+1 for w=4 and the AES polynomial for w=8.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .bits import BitString
from .errors import FieldMismatchError, LengthError, ParameterError

# smallest irreducible polynomial of each degree, as an int with the x^w bit set
IRREDUCIBLE = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0b100011011,
    9: 0b1000000011,
    10: 0b10000001001,
    11: 0b100000000101,
    12: 0b1000000001001,
    13: 0b10000000011011,
    14: 0b100000000100001,
    15: 0b1000000000000011,
    16: 0b10000000000101011,
}


def clmul(a: int, b: int) -> int:
    """Carry-less product of two GF(2) polynomials."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_mod(a: int, m: int) -> int:
    dm = m.bit_length() - 1
    while a.bit_length() - 1 >= dm:
        a ^= m << (a.bit_length() - 1 - dm)
    return a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: int) -> bool:
    """Rabin's test for a GF(2) polynomial of degree >= 1."""
    n = f.bit_length() - 1
    if n < 1:
        return False

    def frob(k: int) -> int:
        # x^(2^k) mod f
        r = 0b10
        for _ in range(k):
            r = poly_mod(clmul(r, r), f)
        return r

    if frob(n) != poly_mod(0b10, f):
        return False
    for p in _prime_factors(n):
        if poly_gcd(f, frob(n // p) ^ 0b10) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def smallest_irreducible(w: int) -> int:
    if w < 1:
        raise ParameterError(f"field width must be >= 1, got {w}")
    f = (1 << w) | 1
    while not is_irreducible(f):
        f += 2
    return f


def modulus_for(w: int) -> int:
    return IRREDUCIBLE.get(w) or smallest_irreducible(w)


class GF2m:
    """The field GF(2^w) under :func:`modulus_for(w)`."""

    __slots__ = ("width", "modulus", "order", "_exp", "_log")

    def __init__(self, width: int, modulus: int | None = None):
        if width < 1:
            raise ParameterError(f"field width must be >= 1, got {width}")
        self.width = width
        self.modulus = modulus if modulus is not None else modulus_for(width)
        if self.modulus.bit_length() - 1 != width:
            raise ParameterError(f"modulus {self.modulus:#b} does not have degree {width}")
        self.order = 1 << width
        self._exp = self._log = None
        if width <= 12:
            self._build_tables()

    def _build_tables(self):
        if self.order == 2:
            self._exp, self._log = [1, 1, 1, 1], [0, 0]
            return
        for g in range(2, self.order):
            exp, log = [0] * (2 * self.order), [0] * self.order
            v = 1
            for i in range(self.order - 1):
                if i and v == 1:
                    break
                exp[i] = v
                log[v] = i
                v = poly_mod(clmul(v, g), self.modulus)
            else:
                # g generates the multiplicative group
                for i in range(self.order - 1, 2 * self.order):
                    exp[i] = exp[i - (self.order - 1)]
                self._exp, self._log = exp, log
                return

    def __repr__(self):
        return f"GF2m({self.width}, {self.modulus:#x})"

    def __eq__(self, other):
        return isinstance(other, GF2m) and (self.width, self.modulus) == (other.width, other.modulus)

    def __hash__(self):
        return hash((self.width, self.modulus))

    def check(self, a: int) -> int:
        if not 0 <= a < self.order:
            raise FieldMismatchError(f"{a} is not an element of GF(2^{self.width})")
        return a

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        if self._exp is not None:
            return self._exp[self._log[a] + self._log[b]]
        return poly_mod(clmul(a, b), self.modulus)

    def pow(self, a: int, e: int) -> int:
        out = 1
        while e:
            if e & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            e >>= 1
        return out

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.pow(a, self.order - 2)

    def eval_poly(self, coeffs: Sequence[int], point: int) -> int:
        """Evaluate sum(coeffs[j] * point^j) by Horner's rule."""
        acc = 0
        for c in reversed(coeffs):
            acc = self.mul(acc, point) ^ c
        return acc

    def dot(self, xs: Sequence[int], ys: Sequence[int]) -> int:
        if len(xs) != len(ys):
            raise LengthError(f"inner product of lengths {len(xs)} and {len(ys)}")
        acc = 0
        for a, b in zip(xs, ys):
            acc ^= self.mul(a, b)
        return acc


@lru_cache(maxsize=None)
def field(width: int) -> GF2m:
    return GF2m(width)


@dataclass(frozen=True)
class FieldElem:
    value: int
    width: int
    modulus: int = 0

    def __post_init__(self):
        if not self.modulus:
            object.__setattr__(self, "modulus", modulus_for(self.width))
        if not 0 <= self.value < (1 << self.width):
            raise FieldMismatchError(f"{self.value} does not fit GF(2^{self.width})")

    @property
    def field(self) -> GF2m:
        if self.modulus == modulus_for(self.width):
            return field(self.width)
        return GF2m(self.width, self.modulus)

    def _same(self, other: FieldElem):
        if (self.width, self.modulus) != (other.width, other.modulus):
            raise FieldMismatchError(
                f"GF(2^{self.width})/{self.modulus:#x} vs GF(2^{other.width})/{other.modulus:#x}"
            )

    def __add__(self, other: FieldElem) -> FieldElem:
        self._same(other)
        return FieldElem(self.value ^ other.value, self.width, self.modulus)

    __sub__ = __add__

    def __mul__(self, other: FieldElem) -> FieldElem:
        return gf_mul(self, other)

    def inverse(self) -> FieldElem:
        return FieldElem(self.field.inv(self.value), self.width, self.modulus)

    def to_bits(self) -> BitString:
        return BitString(self.value, self.width)


def gf_mul(a: FieldElem, b: FieldElem) -> FieldElem:
    a._same(b)
    return FieldElem(a.field.mul(a.value, b.value), a.width, a.modulus)


def ip(xs: Sequence[FieldElem], ys: Sequence[FieldElem]) -> FieldElem:
    """Inner product sum(x_i * y_i) over the common field."""
    if len(xs) != len(ys):
        raise LengthError(f"inner product of lengths {len(xs)} and {len(ys)}")
    if not xs:
        raise LengthError("inner product of empty vectors has no field")
    acc = FieldElem(0, xs[0].width, xs[0].modulus)
    for a, b in zip(xs, ys):
        acc = acc + gf_mul(a, b)
    return acc


def ip_bits(x: BitString, y: BitString, width: int) -> BitString:
    """Inner product of two bit strings read as vectors over GF(2^width).

    Both lengths must be multiples of ``width``; the result is one symbol.
    """
    if x.length != y.length:
        raise LengthError(f"inner product of {x.length}-bit and {y.length}-bit strings")
    if x.length % width:
        raise LengthError(f"{x.length} bits do not split into {width}-bit symbols")
    return BitString(field(width).dot(x.chunks(width), y.chunks(width)), width)
