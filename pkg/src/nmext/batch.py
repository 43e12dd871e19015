"""Vectorized evaluation of extractor pipelines over many inputs at once.

Used where a scalar loop would be too slow (Monte Carlo robustness runs over
1e5 sessions).  Values travel column-wise as two numpy views: a bit matrix ``(len, N)``
of uint8 (row 0 is bit 0) for seed gathering, and packed uint64 words
``(ceil(len/64), N)`` for parity evaluation.  Results agree bit-for-bit with
the scalar :class:`~nmext.trevisan.Trevisan` path; the test-suite checks this.
"""

from __future__ import annotations

import numpy as np

from .codes import rs_symbol
from .bits import BitString
from .plan import ParamPlan
from .trevisan import ExtSpec, extractor

_WORD = (1 << 64) - 1


def ints_to_bits(values, length: int) -> np.ndarray:
    """Bit matrix of shape ``(length, N)``: row ``i`` holds bit ``i`` of every value."""
    nbytes = (length + 7) // 8
    pad = 8 * nbytes - length
    raw = b"".join((v << pad).to_bytes(nbytes, "big") for v in values)
    arr = np.frombuffer(raw, dtype=np.uint8).reshape(len(values), nbytes)
    return np.ascontiguousarray(np.unpackbits(arr, axis=1)[:, :length].T)


def bits_to_words(bits: np.ndarray) -> np.ndarray:
    """Pack a ``(length, N)`` bit matrix into ``(ceil(length/64), N)`` uint64 words."""
    length, n = bits.shape
    words = -(-length // 64)
    padded = np.zeros((words * 64, n), dtype=np.uint64)
    padded[:length] = bits
    padded = padded.reshape(words, 64, n)
    out = np.zeros((words, n), dtype=np.uint64)
    for k in range(64):
        out |= padded[:, k] << np.uint64(63 - k)
    return out


def bits_to_ints(bits: np.ndarray) -> list[int]:
    length = bits.shape[0]
    packed = np.packbits(np.ascontiguousarray(bits.T), axis=1)
    pad = 8 * packed.shape[1] - length
    return [int.from_bytes(row.tobytes(), "big") >> pad for row in packed]


class BatchExt:
    """One extractor spec evaluated column-wise on numpy batches."""

    def __init__(self, spec: ExtSpec):
        scalar = extractor(spec)
        design = scalar.design
        self.spec = spec
        self.positions = np.array([[p - 1 for p in s] for s in design.sets], dtype=np.intp)
        words = -(-spec.n_in // 64)
        shift = words * 64 - spec.n_in
        table = np.zeros((words, 1 << design.l), dtype=np.uint64)
        for r in range(1 << design.l):
            m = scalar.mask(r) << shift
            for j in range(words):
                table[j, r] = (m >> (64 * (words - 1 - j))) & _WORD
        self.table = table

    def __call__(self, source_words: np.ndarray, seed_bits: np.ndarray) -> np.ndarray:
        """``(W, N)`` source words and ``(d_seed, N)`` seed bits -> ``(m_out, N)`` bits."""
        restr = np.zeros((self.positions.shape[0], seed_bits.shape[1]), dtype=np.intp)
        for j in range(self.positions.shape[1]):
            restr <<= 1
            restr |= seed_bits[self.positions[:, j]]
        ones = np.zeros(restr.shape, dtype=np.uint8)
        for j in range(self.table.shape[0]):
            ones ^= np.bitwise_count(self.table[j][restr] & source_words[j])
        return ones & np.uint8(1)


class BatchEngine:
    """Seeded-variant pipeline over batches of ``(x, y)`` pairs."""

    def __init__(self, plan: ParamPlan):
        if plan.variant != "seeded":
            raise ValueError("batch evaluation covers the seeded variant only")
        self.plan = plan
        self.ext = {role: BatchExt(plan.spec(role)) for role in
                    ("Ext0", "Ext1", "Ext2", "Ext3", "Ext4", "Ext5", "Ext6")}

    def _ff(self, yw, tw, z, g):
        p, e = self.plan, self.ext
        a = e["Ext1"](yw, z[: p.s])
        c = e["Ext2"](bits_to_words(z), a)
        b = e["Ext1"](yw, c)
        z_bar = e["Ext3"](tw, np.where(g, b, a))
        a_bar = e["Ext1"](yw, z_bar[: p.s])
        c_bar = e["Ext2"](bits_to_words(z_bar), a_bar)
        b_bar = e["Ext1"](yw, c_bar)
        return e["Ext3"](tw, np.where(g, a_bar, b_bar))

    def __call__(self, xs: list[int], ys: list[int]) -> list[int]:
        p, e = self.plan, self.ext
        xb, yb = ints_to_bits(xs, p.n), ints_to_bits(ys, p.d)
        xw, yw = bits_to_words(xb), bits_to_words(yb)
        index_bits = e["Ext0"](xw, yb[: p.d1])
        indices = bits_to_ints(index_bits)
        syms = [rs_symbol(BitString(y, p.d).chunks(p.q_bits), i + 1, p.v, p.q_bits)
                for y, i in zip(ys, indices)]
        g = np.concatenate([yb[: p.d1], ints_to_bits(syms, p.q_bits)], axis=0)
        t = e["Ext5"](xw, yb[: p.d2])
        tw = bits_to_words(t)
        z = t[: p.h]
        for i in range(p.a):
            z = self._ff(yw, tw, z, g[i] == 1)
        s = e["Ext4"](yw, z)
        return bits_to_ints(e["Ext6"](xw, s))


def batch_engine(plan: ParamPlan) -> BatchEngine:
    eng = plan.__dict__.get("_batch_engine")
    if eng is None:
        eng = BatchEngine(plan)
        object.__setattr__(plan, "_batch_engine", eng)
    return eng


def evaluate_many(plan: ParamPlan, xs: list[int], ys: list[int], chunk: int = 4096) -> list[int]:
    eng = batch_engine(plan)
    out: list[int] = []
    for i in range(0, len(xs), chunk):
        out.extend(eng(xs[i: i + chunk], ys[i: i + chunk]))
    return out
