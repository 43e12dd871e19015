"""Two-source non-malleable extractor.

Both inputs are weak sources of ``n`` bits.  The advice is built from the
first ``3k`` bits of each source plus one codeword symbol of each, selected
by an inner product of those prefixes.  The breaker's initial state is the
inner product of the first ``3k^3`` bits, and ``X`` plays the role of the
long source inside every flip-flop round.
"""

from __future__ import annotations

from .bits import BitString
from .field import field
from .nmext import AdviceString, NmExtTrace, _check_len, _require, engine, rounds_from
from .plan import ParamPlan


def _ip_int(x: int, y: int, length: int, width: int) -> int:
    return field(width).dot(BitString(x, length).chunks(width), BitString(y, length).chunks(width))


def prefixes(plan: ParamPlan, x: int, y: int) -> tuple[int, int, int, int]:
    n = plan.n
    sh1, sh2 = n - plan.x1_len, n - plan.x2_len
    return x >> sh1, y >> sh1, x >> sh2, y >> sh2


def initial_state(plan: ParamPlan, x: int, y: int) -> int:
    """``Z_0 = IP2(Prefix(x, 3k^3), Prefix(y, 3k^3))`` over GF(2^h)."""
    _, _, x2, y2 = prefixes(plan, x, y)
    return _ip_int(x2, y2, plan.x2_len, plan.h)


def advice_int(plan: ParamPlan, x: int, y: int) -> tuple[int, int]:
    """(advice, R) with R the 1-based codeword index."""
    x1, y1, _, _ = prefixes(plan, x, y)
    r = _ip_int(x1, y1, plan.x1_len, plan.log_v) + 1
    eng = engine(plan)
    q = plan.q_bits
    g = (x1 << plan.x1_len) | y1
    g = (g << q) | eng.ecc_at(x, plan.n, r)
    g = (g << q) | eng.ecc_at(y, plan.n, r)
    return g, r


def evaluate(plan: ParamPlan, x: int, y: int) -> int:
    g, _ = advice_int(plan, x, y)
    eng = engine(plan)
    s = eng.adv_cb(y, x, initial_state(plan, x, y), g, plan.a)
    return eng.ext6(x, s)


def advice_gen2(x: BitString, y: BitString, plan: ParamPlan) -> AdviceString:
    _require(plan, ("two_source",))
    _check_len("x", x, plan.n)
    _check_len("y", y, plan.n)
    g, r = advice_int(plan, x.value, y.value)
    bits = BitString(g, plan.a)
    k3, q = plan.x1_len, plan.q_bits
    return AdviceString(bits, (
        ("x1", bits.slice(0, k3)),
        ("y1", bits.slice(k3, 2 * k3)),
        ("ecc_x", bits.slice(2 * k3, 2 * k3 + q)),
        ("ecc_y", bits.slice(2 * k3 + q, 2 * k3 + 2 * q)),
        ("index", BitString(r - 1, plan.log_v)),
    ))


def two_adv_cb(y: BitString, x: BitString, z0: BitString, g: AdviceString | BitString,
               plan: ParamPlan) -> BitString:
    bits = g.bits if isinstance(g, AdviceString) else g
    _check_len("y", y, plan.n)
    _check_len("x", x, plan.n)
    _check_len("z0", z0, plan.h)
    s = engine(plan).adv_cb(y.value, x.value, z0.value, bits.value, bits.length)
    return BitString(s, plan.s_len)


def two_nmext(x: BitString, y: BitString, plan: ParamPlan) -> tuple[BitString, NmExtTrace]:
    adv = advice_gen2(x, y, plan)
    eng = engine(plan)
    x1, y1, x2, y2 = prefixes(plan, x.value, y.value)
    z0 = initial_state(plan, x.value, y.value)
    rec, zs = [], []
    s = eng.adv_cb(y.value, x.value, z0, adv.bits.value, plan.a, rec, zs)
    l = eng.ext6(x.value, s)
    trace = NmExtTrace(
        "two_source", x, y, adv,
        values={
            "x1": BitString(x1, plan.x1_len), "y1": BitString(y1, plan.x1_len),
            "r": adv.part("index").value + 1, "g": adv.bits,
            "x2": BitString(x2, plan.x2_len), "y2": BitString(y2, plan.x2_len),
        },
        z=[BitString(v, plan.h) for v in zs],
        rounds=rounds_from(rec, plan),
        s=BitString(s, plan.s_len),
        l=BitString(l, plan.l_len),
    )
    return trace.l, trace
