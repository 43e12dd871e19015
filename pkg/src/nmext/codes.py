"""Reed-Solomon encoding over GF(2^w) with indexed symbol access.

Codeword position ``i`` (1-based) holds the message polynomial evaluated at
the field element ``i - 1``, so position 1 is the constant coefficient, i.e.
the first message symbol.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .bits import BitString
from .errors import LengthError, ParameterError
from .field import field


@dataclass(frozen=True)
class Codeword:
    symbols: tuple[int, ...]
    k_msg: int
    width: int

    @property
    def n_code(self) -> int:
        return len(self.symbols)

    @property
    def rate(self) -> float:
        return self.k_msg / self.n_code

    @property
    def min_distance(self) -> int:
        """Designed distance n - k + 1 of the Reed-Solomon code."""
        return self.n_code - self.k_msg + 1


def _check_code(k_msg: int, n_code: int, width: int):
    if n_code > 1 << width:
        raise ParameterError(f"n_code={n_code} exceeds the field size 2^{width}")
    if k_msg > n_code:
        raise ParameterError(f"message length {k_msg} exceeds n_code={n_code}")
    if n_code < 1:
        raise ParameterError("n_code must be positive")


def rs_encode(msg: Sequence[int], n_code: int, width: int) -> Codeword:
    _check_code(len(msg), n_code, width)
    F = field(width)
    for s in msg:
        F.check(s)
    coeffs = list(msg)
    return Codeword(tuple(F.eval_poly(coeffs, a) for a in range(n_code)), len(msg), width)


def rs_symbol(msg: Sequence[int], index: int, n_code: int, width: int) -> int:
    """Symbol ``index`` (1-based) of ``rs_encode(msg, n_code, width)`` without
    building the whole codeword."""
    _check_code(len(msg), n_code, width)
    if not 1 <= index <= n_code:
        raise ParameterError(f"codeword index {index} outside [1, {n_code}]")
    return field(width).eval_poly(msg, index - 1)


def ecc_symbol_at(y: BitString, index: int, width: int, n_code: int) -> BitString:
    """The ``index``-th symbol of the encoding of ``y`` as ``width`` bits.

    ``y`` is parsed into ``ceil(|y| / width)`` symbols, zero-padded on the
    right.
    """
    if y.length == 0:
        raise LengthError("cannot encode an empty string")
    return BitString(rs_symbol(y.chunks(width), index, n_code, width), width)


def ecc_symbol(y: BitString, index: int, plan) -> BitString:
    """``ECC(y)_index`` under the plan's code parameters (``q_bits``, ``v``)."""
    return ecc_symbol_at(y, index, plan.q_bits, plan.v)


def hamming(a: Sequence[int], b: Sequence[int]) -> int:
    if len(a) != len(b):
        raise LengthError("Hamming distance of unequal lengths")
    return sum(x != y for x, y in zip(a, b))
