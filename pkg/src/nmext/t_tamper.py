"""t-tampering variants of the seeded and two-source extractors.

The only structural change is the advice: instead of a single codeword
symbol, the sampler expands the extracted index into ``t1`` positions and
the advice carries the codeword symbols at all of them.  Output widths
shrink by the factors ``8t`` (seeded) and ``4t`` (two-source).
"""

from __future__ import annotations

from .bits import BitString
from .nmext import AdviceString, NmExtTrace, _check_len, _require, engine, rounds_from
from .plan import ParamPlan
from .sampler import samp
from .two_source import _ip_int, initial_state, prefixes


def _symbols(plan: ParamPlan, value: int, length: int, positions) -> int:
    eng = engine(plan)
    out = 0
    for pos in positions:
        out = (out << plan.q_bits) | eng.ecc_at(value, length, pos)
    return out


def t_advice_int(plan: ParamPlan, x: int, y: int) -> tuple[int, int, tuple[int, ...]]:
    """(advice, I, sampled positions) for the t-seeded variant."""
    eng = engine(plan)
    y1 = y >> (plan.d - plan.d1)
    i = eng.ext0(x, y1)
    positions = samp(BitString(i, plan.n1), plan.sampler)
    g = (y1 << (plan.t1 * plan.q_bits)) | _symbols(plan, y, plan.d, positions)
    return g, i, positions


def t2_advice_int(plan: ParamPlan, x: int, y: int) -> tuple[int, int, tuple[int, ...]]:
    x1, y1, _, _ = prefixes(plan, x, y)
    r = _ip_int(x1, y1, plan.x1_len, plan.n1)
    positions = samp(BitString(r, plan.n1), plan.sampler)
    width = plan.t1 * plan.q_bits
    g = (x1 << plan.x1_len) | y1
    g = (g << width) | _symbols(plan, x, plan.n, positions)
    g = (g << width) | _symbols(plan, y, plan.n, positions)
    return g, r, positions


def evaluate_t(plan: ParamPlan, x: int, y: int) -> int:
    g, _, _ = t_advice_int(plan, x, y)
    return engine(plan).run_seeded_like(x, y, g)


def evaluate_t2(plan: ParamPlan, x: int, y: int) -> int:
    g, _, _ = t2_advice_int(plan, x, y)
    eng = engine(plan)
    s = eng.adv_cb(y, x, initial_state(plan, x, y), g, plan.a)
    return eng.ext6(x, s)


def t_advice_gen(x: BitString, y: BitString, plan: ParamPlan) -> AdviceString:
    _require(plan, ("t_seeded",))
    _check_len("x", x, plan.n)
    _check_len("y", y, plan.d)
    g, i, positions = t_advice_int(plan, x.value, y.value)
    bits = BitString(g, plan.a)
    return AdviceString(bits, (
        ("y1", bits.slice(0, plan.d1)),
        ("ecc", bits.slice(plan.d1, plan.a)),
        ("index", BitString(i, plan.n1)),
        ("samples", BitString.from_chunks([p - 1 for p in positions], plan.q_bits)),
    ))


def t2_advice_gen(x: BitString, y: BitString, plan: ParamPlan) -> AdviceString:
    _require(plan, ("t_two_source",))
    _check_len("x", x, plan.n)
    _check_len("y", y, plan.n)
    g, r, positions = t2_advice_int(plan, x.value, y.value)
    bits = BitString(g, plan.a)
    k3, w = plan.x1_len, plan.t1 * plan.q_bits
    return AdviceString(bits, (
        ("x1", bits.slice(0, k3)),
        ("y1", bits.slice(k3, 2 * k3)),
        ("ecc_x", bits.slice(2 * k3, 2 * k3 + w)),
        ("ecc_y", bits.slice(2 * k3 + w, 2 * k3 + 2 * w)),
        ("index", BitString(r, plan.n1)),
        ("samples", BitString.from_chunks([p - 1 for p in positions], plan.q_bits)),
    ))


def t_nmext_trace(x: BitString, y: BitString, plan: ParamPlan) -> tuple[BitString, NmExtTrace]:
    adv = t_advice_gen(x, y, plan)
    eng = engine(plan)
    t = eng.long_source(x.value, y.value)
    rec, zs = [], []
    s = eng.adv_cb(y.value, t, t >> (plan.t_len - plan.h), adv.bits.value, plan.a, rec, zs)
    l = eng.ext6(x.value, s)
    samples = [c + 1 for c in adv.part("samples").chunks(plan.q_bits)]
    trace = NmExtTrace(
        "t_seeded", x, y, adv,
        values={"y1": adv.y1, "i": adv.part("index"), "samples": samples, "g": adv.bits,
                "y2": y.prefix(plan.d2), "t": BitString(t, plan.t_len)},
        z=[BitString(v, plan.h) for v in zs],
        rounds=rounds_from(rec, plan),
        s=BitString(s, plan.s_len),
        l=BitString(l, plan.l_len),
    )
    return trace.l, trace


def t_2nmext_trace(x: BitString, y: BitString, plan: ParamPlan) -> tuple[BitString, NmExtTrace]:
    adv = t2_advice_gen(x, y, plan)
    eng = engine(plan)
    x1, y1, x2, y2 = prefixes(plan, x.value, y.value)
    rec, zs = [], []
    s = eng.adv_cb(y.value, x.value, initial_state(plan, x.value, y.value), adv.bits.value, plan.a, rec, zs)
    l = eng.ext6(x.value, s)
    samples = [c + 1 for c in adv.part("samples").chunks(plan.q_bits)]
    trace = NmExtTrace(
        "t_two_source", x, y, adv,
        values={"x1": BitString(x1, plan.x1_len), "y1": BitString(y1, plan.x1_len),
                "r": adv.part("index"), "samples": samples, "g": adv.bits,
                "x2": BitString(x2, plan.x2_len), "y2": BitString(y2, plan.x2_len)},
        z=[BitString(v, plan.h) for v in zs],
        rounds=rounds_from(rec, plan),
        s=BitString(s, plan.s_len),
        l=BitString(l, plan.l_len),
    )
    return trace.l, trace


def t_nmext(x: BitString, y: BitString, plan: ParamPlan) -> BitString:
    return t_nmext_trace(x, y, plan)[0]


def t_2nmext(x: BitString, y: BitString, plan: ParamPlan) -> BitString:
    return t_2nmext_trace(x, y, plan)[0]
