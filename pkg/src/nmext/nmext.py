"""Seeded non-malleable extractor and the shared correlation-breaker engine.

The pipeline is: advice generator, long-source extraction, correlation
breaker with advice (a chain of flip-flop rounds, one per advice bit) and a
final extraction from ``X`` keyed by the breaker's output.  The two-source
and t-tampering variants reuse :class:`Engine` and differ only in how the
advice and the initial state ``Z_0`` are produced.

All heavy lifting happens on plain ints (``BitString.value``); the public
functions wrap inputs and outputs as :class:`BitString` and can record an
:class:`NmExtTrace` of every intermediate value.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Any

from .bits import BitString
from .codes import rs_symbol
from .errors import LengthError, PlanError
from .plan import ParamPlan
from .trevisan import extractor


@dataclass(frozen=True)
class AdviceString:
    """Advice bits together with the named pieces they were built from."""

    bits: BitString
    parts: tuple[tuple[str, BitString], ...]

    def __len__(self) -> int:
        return self.bits.length

    def part(self, name: str) -> BitString:
        for key, val in self.parts:
            if key == name:
                return val
        raise KeyError(name)

    @property
    def y1(self) -> BitString:
        return self.part("y1")

    @property
    def ecc_sym(self) -> BitString:
        return self.part("ecc")


@dataclass(frozen=True)
class FFRound:
    g: int
    z_in: BitString
    z_s: BitString
    a: BitString
    c: BitString
    b: BitString
    z_bar: BitString
    z_bar_s: BitString
    a_bar: BitString
    c_bar: BitString
    b_bar: BitString
    o: BitString


@dataclass
class NmExtTrace:
    variant: str
    x: BitString
    y: BitString
    advice: AdviceString | None = None
    values: dict[str, Any] = dc_field(default_factory=dict)  # variant-specific named intermediates
    z: list[BitString] = dc_field(default_factory=list)  # Z_0 .. Z_a
    rounds: list[FFRound] = dc_field(default_factory=list)
    s: BitString | None = None
    l: BitString | None = None

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, BitString):
                return v.to_hex()
            if isinstance(v, (list, tuple)):
                return [enc(u) for u in v]
            return v

        return {
            "schema": "nmext-trace/1",
            "variant": self.variant,
            "x": self.x.to_hex(),
            "y": self.y.to_hex(),
            "advice": self.advice.bits.to_hex() if self.advice else None,
            "advice_parts": {k: v.to_hex() for k, v in self.advice.parts} if self.advice else {},
            "values": {k: enc(v) for k, v in self.values.items()},
            "z": [z.to_hex() for z in self.z],
            "rounds": [{k: enc(v) for k, v in r.__dict__.items()} for r in self.rounds],
            "s": self.s.to_hex() if self.s else None,
            "l": self.l.to_hex() if self.l else None,
        }

    def check(self, plan: ParamPlan) -> None:
        """Assert every recorded length agrees with ``plan``."""
        want = {"s": plan.s_len, "l": plan.l_len}
        for name, n in want.items():
            got = getattr(self, name).length
            if got != n:
                raise LengthError(f"trace {name} has {got} bits, plan says {n}")
        if self.advice is not None and self.advice.bits.length != plan.a:
            raise LengthError(f"advice has {self.advice.bits.length} bits, plan says a={plan.a}")
        if len(self.z) != plan.a + 1 or any(z.length != plan.h for z in self.z):
            raise LengthError("Z chain does not have a+1 entries of h bits")
        for r in self.rounds:
            for name, n in (("z_s", plan.s), ("a", plan.b), ("c", plan.s), ("b", plan.b),
                            ("z_bar", plan.h), ("z_bar_s", plan.s), ("a_bar", plan.b),
                            ("c_bar", plan.s), ("b_bar", plan.b), ("o", plan.h)):
                if getattr(r, name).length != n:
                    raise LengthError(f"flip-flop {name} has {getattr(r, name).length} bits, expected {n}")


class Engine:
    """Int-level evaluator bound to one plan's extractors."""

    def __init__(self, plan: ParamPlan):
        self.plan = plan
        self.ext1 = extractor(plan.spec("Ext1"))
        self.ext2 = extractor(plan.spec("Ext2"))
        self.ext3 = extractor(plan.spec("Ext3"))
        self.ext4 = extractor(plan.spec("Ext4"))
        self.ext6 = extractor(plan.spec("Ext6"))
        self.ext0 = extractor(plan.specs["Ext0"]) if "Ext0" in plan.specs else None
        self.ext5 = extractor(plan.specs["Ext5"]) if "Ext5" in plan.specs else None
        self.s_shift = plan.h - plan.s

    def flip_flop(self, y: int, t: int, z: int, g: int, rec: list | None = None) -> int:
        e1, e2, e3 = self.ext1, self.ext2, self.ext3
        z_s = z >> self.s_shift
        a = e1(y, z_s)
        c = e2(z, a)
        b = e1(y, c)
        z_bar = e3(t, b if g else a)
        z_bar_s = z_bar >> self.s_shift
        a_bar = e1(y, z_bar_s)
        c_bar = e2(z_bar, a_bar)
        b_bar = e1(y, c_bar)
        o = e3(t, a_bar if g else b_bar)
        if rec is not None:
            rec.append((g, z, z_s, a, c, b, z_bar, z_bar_s, a_bar, c_bar, b_bar, o))
        return o

    def adv_cb(self, y: int, t: int, z0: int, advice: int, a: int,
               rec: list | None = None, zs: list | None = None) -> int:
        """Run ``a`` flip-flop rounds keyed by ``advice`` (MSB first), then Ext4."""
        z = z0
        if zs is not None:
            zs.append(z)
        for i in range(a):
            z = self.flip_flop(y, t, z, (advice >> (a - 1 - i)) & 1, rec)
            if zs is not None:
                zs.append(z)
        return self.ext4(y, z)

    def ecc_at(self, value: int, length: int, index: int) -> int:
        p = self.plan
        return rs_symbol(BitString(value, length).chunks(p.q_bits), index, p.v, p.q_bits)

    # -- seeded pipeline ----------------------------------------------
    def seeded_advice(self, x: int, y: int) -> tuple[int, int, int]:
        """(advice, Y1, I) for the seeded variant; I is 1-based."""
        p = self.plan
        y1 = y >> (p.d - p.d1)
        index = self.ext0(x, y1) + 1
        g = (y1 << p.q_bits) | self.ecc_at(y, p.d, index)
        return g, y1, index

    def long_source(self, x: int, y: int) -> int:
        p = self.plan
        return self.ext5(x, y >> (p.d - p.d2))

    def run_seeded_like(self, x: int, y: int, advice: int, rec=None, zs=None) -> int:
        p = self.plan
        t = self.long_source(x, y)
        z0 = t >> (p.t_len - p.h)
        s = self.adv_cb(y, t, z0, advice, p.a, rec, zs)
        return self.ext6(x, s)

    def seeded(self, x: int, y: int) -> int:
        return self.run_seeded_like(x, y, self.seeded_advice(x, y)[0])


def engine(plan: ParamPlan) -> Engine:
    """The (cached) engine for ``plan``."""
    eng = plan.__dict__.get("_engine")
    if eng is None:
        eng = Engine(plan)
        object.__setattr__(plan, "_engine", eng)
    return eng


def _require(plan: ParamPlan, variants: tuple[str, ...]):
    if plan.variant not in variants:
        raise PlanError("plan variant", f"{plan.variant} plan used where {'/'.join(variants)} is needed")


def _check_len(name: str, bs: BitString, n: int):
    if bs.length != n:
        raise LengthError(f"{name} has {bs.length} bits, plan expects {n}")


def rounds_from(rec: list, plan: ParamPlan) -> list[FFRound]:
    p = plan
    widths = (p.h, p.s, p.b, p.s, p.b, p.h, p.s, p.b, p.s, p.b, p.h)
    return [FFRound(r[0], *(BitString(v, w) for v, w in zip(r[1:], widths))) for r in rec]


def advice_gen(x: BitString, y: BitString, plan: ParamPlan) -> AdviceString:
    _require(plan, ("seeded",))
    _check_len("x", x, plan.n)
    _check_len("y", y, plan.d)
    g, y1, index = engine(plan).seeded_advice(x.value, y.value)
    sym = g & (plan.q - 1)
    return AdviceString(
        BitString(g, plan.a),
        (("y1", BitString(y1, plan.d1)), ("ecc", BitString(sym, plan.q_bits)),
         ("index", BitString(index - 1, plan.log_v))),
    )


def flip_flop(y: BitString, t_src: BitString, z: BitString, g: int, plan: ParamPlan) -> BitString:
    _check_len("y", y, plan.y_len)
    _check_len("long source", t_src, plan.t_len)
    _check_len("z", z, plan.h)
    if g not in (0, 1):
        raise ValueError(f"advice bit must be 0 or 1, got {g!r}")
    return BitString(engine(plan).flip_flop(y.value, t_src.value, z.value, g), plan.h)


def adv_cb(y: BitString, t_src: BitString, g: AdviceString | BitString, plan: ParamPlan,
           z0: BitString | None = None) -> BitString:
    """Correlation breaker with advice; ``Z_0`` defaults to ``Prefix(t_src, h)``."""
    bits = g.bits if isinstance(g, AdviceString) else g
    _check_len("y", y, plan.y_len)
    _check_len("long source", t_src, plan.t_len)
    if z0 is None:
        z0 = t_src.prefix(plan.h)
    _check_len("z0", z0, plan.h)
    s = engine(plan).adv_cb(y.value, t_src.value, z0.value, bits.value, bits.length)
    return BitString(s, plan.s_len)


def nmext(x: BitString, y: BitString, plan: ParamPlan) -> tuple[BitString, NmExtTrace]:
    """Seeded non-malleable extractor; returns ``L`` and the full trace."""
    adv = advice_gen(x, y, plan)
    eng = engine(plan)
    rec, zs = [], []
    y2 = y.prefix(plan.d2)
    t = eng.long_source(x.value, y.value)
    z0 = t >> (plan.t_len - plan.h)
    s = eng.adv_cb(y.value, t, z0, adv.bits.value, plan.a, rec, zs)
    l = eng.ext6(x.value, s)
    trace = NmExtTrace(
        "seeded", x, y, adv,
        values={"y1": adv.y1, "i": adv.part("index").value + 1, "g": adv.bits,
                "y2": y2, "t": BitString(t, plan.t_len)},
        z=[BitString(v, plan.h) for v in zs],
        rounds=rounds_from(rec, plan),
        s=BitString(s, plan.s_len),
        l=BitString(l, plan.l_len),
    )
    return trace.l, trace
