"""Pairwise-independent sampler used by the t-tampering advice generators.

The seed is cut into ``w``-bit coefficients of a polynomial over GF(2^w)
(``2^w >= max(nu, t1)``); sample ``j`` is the polynomial at the field element
``j``, reduced into ``[1, nu]``.  With two or more coefficients and
``nu = 2^w`` the samples are uniform and pairwise independent.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict

from .bits import BitString
from .errors import LengthError, ParameterError
from .field import field


@dataclass(frozen=True)
class SamplerSpec:
    r: int
    nu: int
    t1: int
    alpha: float = 1 / 15
    beta: float = 1 / 15
    delta: float = 0.1

    def __post_init__(self):
        if self.t1 < 1 or self.nu < 1 or self.r < 1:
            raise ParameterError(f"sampler needs r, nu, t1 >= 1 ({self})")

    @property
    def width(self) -> int:
        return max(1, (max(self.nu, self.t1) - 1).bit_length())

    @property
    def n_coeffs(self) -> int:
        return max(1, self.r // self.width)

    def to_json(self) -> dict:
        return asdict(self)


def samp(seed: BitString, spec: SamplerSpec) -> tuple[int, ...]:
    if seed.length != spec.r:
        raise LengthError(f"sampler seed has {seed.length} bits, expected {spec.r}")
    w = spec.width
    coeffs = seed.chunks(w)[: spec.n_coeffs]
    F = field(w)
    return tuple(F.eval_poly(coeffs, j) % spec.nu + 1 for j in range(spec.t1))
