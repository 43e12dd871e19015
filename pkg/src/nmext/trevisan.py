"""Trevisan-style strong seeded extractors.

Output bit ``i`` applies a one-bit extractor to the source, seeded with the
seed bits selected by set ``S_i`` of a polynomial weak design.  The one-bit
extractor is Reed-Solomon over GF(2^w) concatenated with Hadamard: the first
``w`` seed bits pick the evaluation point, the last ``w`` pick the Hadamard
row.  Row 0 of the Hadamard code is the all-zero functional; it is replaced
by the all-ones row so every seed yields a nonzero functional of the source.

Because everything is GF(2)-linear in the source, each (point, row) pair is
equivalent to a parity mask over the source bits.  :class:`Trevisan`
evaluates through cached masks; :func:`one_bit_ext` is the definitional path.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict
from functools import lru_cache

from .bits import BitString
from .errors import LengthError, ParameterError
from .field import field

MAX_WIDTH = 8


@dataclass(frozen=True)
class ExtSpec:
    role: str
    n_in: int
    d_seed: int
    m_out: int
    k_req: int
    eps: float
    w: int = 0  # one-bit extractor field width; 0 means "choose the largest that fits"

    def __post_init__(self):
        if min(self.n_in, self.d_seed, self.m_out) < 1:
            raise ParameterError(f"{self.role}: all lengths must be positive ({self})")
        if self.m_out > self.n_in:
            raise ParameterError(f"{self.role}: m_out={self.m_out} exceeds n_in={self.n_in}")
        if self.w == 0:
            object.__setattr__(self, "w", choose_width(self.d_seed, self.m_out))
        elif seed_needed(self.w, self.m_out) > self.d_seed:
            raise ParameterError(
                f"{self.role}: width {self.w} needs a {seed_needed(self.w, self.m_out)}-bit "
                f"seed for {self.m_out} outputs, have {self.d_seed}"
            )

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> ExtSpec:
        return cls(**obj)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def next_prime(n: int) -> int:
    while not is_prime(n):
        n += 1
    return n


def _design_degree(m: int, p: int) -> int:
    deg, count = 0, p
    while count < m:
        deg += 1
        count *= p
    return deg


def seed_needed(w: int, m: int) -> int:
    """Seed bits read by ``m`` outputs at one-bit width ``w``.

    Set ``i`` occupies positions ``f_i(a) * l + a`` for ``a < l``.  With at
    most ``p`` sets only constant polynomials ``0..m-1`` are used.
    """
    l = 2 * w
    p = next_prime(l)
    if _design_degree(m, p) + 1 > l:
        return 1 << 62  # more sets than distinct restrictions; never realizable
    return l * min(m, p)


def choose_width(d_seed: int, m_out: int) -> int:
    for w in range(MAX_WIDTH, 0, -1):
        if seed_needed(w, m_out) <= d_seed:
            return w
    raise ParameterError(f"no design fits {m_out} outputs into a {d_seed}-bit seed")


@dataclass(frozen=True)
class WeakDesign:
    sets: tuple[tuple[int, ...], ...]  # 1-based seed positions, in evaluation-point order
    l: int
    p: int
    degree: int
    overlap_bound: float

    @property
    def m(self) -> int:
        return len(self.sets)

    @property
    def d_total(self) -> int:
        return self.l * self.p

    @property
    def seed_len(self) -> int:
        return max(max(s) for s in self.sets)


@lru_cache(maxsize=None)
def weak_design(m: int, l: int) -> WeakDesign:
    """Nisan-Wigderson design from graphs of polynomials over GF(p).

    Set ``i`` is ``{f_i(a) * l + a + 1 : a < l}`` where the coefficients of
    ``f_i`` are the base-``p`` digits of ``i``.  Distinct polynomials of degree
    ``D`` agree on at most ``D`` points, so any two sets share at most ``D``
    positions and ``sum_{j<i} 2^{|S_i & S_j|} <= 2^D * m``.
    """
    if m < 1 or l < 1:
        raise ParameterError(f"weak design needs m, l >= 1 (got m={m}, l={l})")
    p = next_prime(l)
    deg = _design_degree(m, p)
    if deg + 1 > l:
        raise ParameterError(f"{m} sets exceed the {p}^{l} distinct restrictions")
    sets = []
    for i in range(m):
        coeffs, r = [], i
        for _ in range(deg + 1):
            coeffs.append(r % p)
            r //= p
        row = []
        for a in range(l):
            fa = 0
            for c in reversed(coeffs):
                fa = (fa * a + c) % p
            row.append(fa * l + a + 1)
        sets.append(tuple(row))
    return WeakDesign(tuple(sets), l, p, deg, float(2 ** deg))


def hadamard_bit(symbol: int, row: int) -> int:
    return (symbol & row).bit_count() & 1


def one_bit_ext(x: BitString, seed: BitString) -> int:
    """RS-then-Hadamard bit of ``x``; ``|seed| = 2w`` fixes the field width."""
    if seed.length == 0 or seed.length % 2:
        raise LengthError(f"one-bit seed must have even positive length, got {seed.length}")
    w = seed.length // 2
    point = seed.value >> w
    row = seed.value & ((1 << w) - 1) or (1 << w) - 1
    symbol = field(w).eval_poly(x.chunks(w), point)
    return hadamard_bit(symbol, row)


def _gather(seed: int, seed_len: int, positions: tuple[int, ...]) -> int:
    out = 0
    for pos in positions:
        out = (out << 1) | ((seed >> (seed_len - pos)) & 1)
    return out


class Trevisan:
    """Fast evaluator for one :class:`ExtSpec` on int-encoded inputs."""

    def __init__(self, spec: ExtSpec):
        self.spec = spec
        self.w = spec.w
        self.design = weak_design(spec.m_out, 2 * spec.w)
        assert self.design.seed_len <= spec.d_seed
        self._masks: dict[int, int] = {}
        self._seed_cache: dict[int, tuple[int, ...]] = {}
        self._out_cache: dict[tuple[int, int], int] = {}

    def mask(self, restriction: int) -> int:
        """Parity mask over the source equivalent to the one-bit extractor."""
        m = self._masks.get(restriction)
        if m is None:
            w, n = self.w, self.spec.n_in
            F = field(w)
            point = restriction >> w
            row = restriction & ((1 << w) - 1) or (1 << w) - 1
            m, power = 0, 1
            for i in range(-(-n // w)):
                for b in range(w):
                    j = i * w + b  # source bit index, MSB-first
                    if j >= n:
                        break
                    contrib = F.mul(1 << (w - 1 - b), power)
                    if hadamard_bit(contrib, row):
                        m |= 1 << (n - 1 - j)
                power = F.mul(power, point)
            self._masks[restriction] = m
        return m

    def masks_for(self, seed: int) -> tuple[int, ...]:
        ms = self._seed_cache.get(seed)
        if ms is None:
            d = self.spec.d_seed
            ms = tuple(self.mask(_gather(seed, d, s)) for s in self.design.sets)
            if len(self._seed_cache) < 1 << 16:
                self._seed_cache[seed] = ms
        return ms

    def __call__(self, x: int, seed: int) -> int:
        key = (x, seed)
        out = self._out_cache.get(key)
        if out is None:
            out = 0
            for m in self.masks_for(seed):
                out = (out << 1) | ((x & m).bit_count() & 1)
            if len(self._out_cache) < 1 << 20:
                self._out_cache[key] = out
        return out


@lru_cache(maxsize=256)
def extractor(spec: ExtSpec) -> Trevisan:
    return Trevisan(spec)


def trevisan_ext(x: BitString, seed: BitString, spec: ExtSpec) -> BitString:
    if x.length != spec.n_in:
        raise LengthError(f"{spec.role}: source has {x.length} bits, expected {spec.n_in}")
    if seed.length != spec.d_seed:
        raise LengthError(f"{spec.role}: seed has {seed.length} bits, expected {spec.d_seed}")
    return BitString(extractor(spec)(x.value, seed.value), spec.m_out)


def trevisan_ext_reference(x: BitString, seed: BitString, spec: ExtSpec) -> BitString:
    """Bit-by-bit evaluation through :func:`one_bit_ext` and the design."""
    design = weak_design(spec.m_out, 2 * spec.w)
    bits = [one_bit_ext(x, BitString(_gather(seed.value, seed.length, s), design.l))
            for s in design.sets]
    return BitString.from_bits(bits)
