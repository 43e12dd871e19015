"""Length-annotated bit strings.

Bit 0 is the leftmost bit and the most significant bit of ``value``.  Every
serialization in the toolkit (hex payloads, field symbols, prefixes) follows
this order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import LengthError


@dataclass(frozen=True, slots=True)
class BitString:
    value: int
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise LengthError(f"negative length {self.length}")
        if self.value < 0 or self.value >> self.length:
            raise LengthError(f"value {self.value} does not fit in {self.length} bits")

    # -- construction -------------------------------------------------
    @classmethod
    def zeros(cls, n: int) -> BitString:
        return cls(0, n)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> BitString:
        value = 0
        n = 0
        for bit in bits:
            if bit not in (0, 1):
                raise LengthError(f"not a bit: {bit!r}")
            value = (value << 1) | bit
            n += 1
        return cls(value, n)

    @classmethod
    def from_str(cls, s: str) -> BitString:
        """Parse a string of ``0``/``1`` characters, e.g. ``"10110"``."""
        return cls.from_bits(int(c) for c in s)

    @classmethod
    def from_hex(cls, text: str) -> BitString:
        """Inverse of :meth:`to_hex`: ``"<length>:<hex digits>"``."""
        try:
            length_part, hex_part = text.strip().split(":", 1)
            length = int(length_part)
        except ValueError:
            raise LengthError(f"malformed hex bit string {text!r}") from None
        digits = (length + 3) // 4
        if len(hex_part) != digits:
            raise LengthError(
                f"{length} bits need {digits} hex digits, got {len(hex_part)} in {text!r}"
            )
        padded = int(hex_part, 16) if hex_part else 0
        pad = 4 * digits - length
        if padded & ((1 << pad) - 1):
            raise LengthError(f"nonzero padding bits in {text!r}")
        return cls(padded >> pad, length)

    @classmethod
    def from_chunks(cls, chunks: Sequence[int], width: int) -> BitString:
        value = 0
        for c in chunks:
            if c >> width:
                raise LengthError(f"chunk {c} wider than {width} bits")
            value = (value << width) | c
        return cls(value, width * len(chunks))

    # -- views ----------------------------------------------------------
    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if not -self.length <= i < self.length:
            raise IndexError(i)
        i %= self.length
        return (self.value >> (self.length - 1 - i)) & 1

    def __iter__(self) -> Iterator[int]:
        for i in range(self.length - 1, -1, -1):
            yield (self.value >> i) & 1

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple(self)

    def __str__(self) -> str:
        return format(self.value, f"0{self.length}b") if self.length else ""

    def to_hex(self) -> str:
        digits = (self.length + 3) // 4
        pad = 4 * digits - self.length
        body = format(self.value << pad, f"0{digits}x") if digits else ""
        return f"{self.length}:{body}"

    def chunks(self, width: int) -> list[int]:
        """Split into ``width``-bit symbols, zero-padding the tail on the right."""
        if width <= 0:
            raise LengthError(f"chunk width must be positive, got {width}")
        count = -(-self.length // width)
        padded = self.value << (count * width - self.length)
        mask = (1 << width) - 1
        return [(padded >> (width * (count - 1 - i))) & mask for i in range(count)]

    # -- operations -----------------------------------------------------
    def __add__(self, other: BitString) -> BitString:
        """Concatenation."""
        if not isinstance(other, BitString):
            return NotImplemented
        return BitString((self.value << other.length) | other.value, self.length + other.length)

    def __xor__(self, other: BitString) -> BitString:
        if self.length != other.length:
            raise LengthError(f"xor of {self.length}-bit and {other.length}-bit strings")
        return BitString(self.value ^ other.value, self.length)

    def prefix(self, d: int) -> BitString:
        return prefix(self, d)

    def slice(self, start: int, stop: int) -> BitString:
        if not 0 <= start <= stop <= self.length:
            raise LengthError(f"slice [{start}:{stop}] of {self.length}-bit string")
        width = stop - start
        return BitString((self.value >> (self.length - stop)) & ((1 << width) - 1), width)


def prefix(x: BitString, d: int) -> BitString:
    """First ``d`` bits of ``x``."""
    if not 0 <= d <= x.length:
        raise LengthError(f"prefix of length {d} from a {x.length}-bit string")
    return BitString(x.value >> (x.length - d), d)


def concat(*parts: BitString) -> BitString:
    out = BitString(0, 0)
    for p in parts:
        out = out + p
    return out
