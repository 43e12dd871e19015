"""Parameter plans for the four extractor variants.

A plan fixes every length the algorithms read: source/seed sizes, the seven
extractor specs, code and sampler parameters, and the field moduli.  Two
modes exist:

``asymptotic``
    Every hidden constant of the schedules comes from :data:`DEFAULT_CONSTANTS`
    (overridable), and each O(.) relation is evaluated with base-2 logarithms
    and rounded up.

``micro``
    The caller supplies tiny lengths directly.  Only wiring is checked: each
    extractor must accept exactly the lengths its producers emit.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field, fields, replace
from typing import Any

from .errors import ParameterError, PlanError
from .field import modulus_for
from .sampler import SamplerSpec
from .trevisan import ExtSpec

SCHEMA = "nmext-plan/1"
VARIANTS = ("seeded", "two_source", "t_seeded", "t_two_source")
SEEDED_LIKE = ("seeded", "t_seeded")
DEFAULT_BUDGET = 10 ** 7

DEFAULT_CONSTANTS = {
    "c_d": 1.0,
    "c_d1": 1.0,
    "c_d2": 1.0,
    "c_q": 1.0,
    "c_gamma": 1.0,
    "c_a": 1.0,
    "c_s": 1.0,
    "c_b": 1.0,
    "c_k": 1.0,
    "c_n1": 1.0,
    "c_t1": 1.0,
    "h_factor": 10,
    "sampler_alpha": 1 / 15,
    "sampler_beta": 1 / 15,
    "sampler_delta": 0.1,
    "pa_delta": 0.1,
}

# fields a micro plan may set directly
MICRO_FIELDS = (
    "d", "d1", "d2", "log_v", "v", "q_bits", "s", "b", "h", "t1", "n1",
    "x1_len", "x2_len", "s_len", "t_len", "m_mac", "z_out",
)


@dataclass(frozen=True)
class ParamPlan:
    variant: str
    mode: str
    n: int
    k: int
    t: int
    eps: float
    d: int = 0
    d1: int = 0
    d2: int = 0
    a: int = 0
    v: int = 0
    log_v: int = 0
    q_bits: int = 0
    s: int = 0
    b: int = 0
    h: int = 0
    t1: int = 0
    n1: int = 0
    x1_len: int = 0
    x2_len: int = 0
    s_len: int = 0
    t_len: int = 0
    l_len: int = 0
    m_mac: int = 0
    z_out: int = 0
    gamma: float = 0.0
    eps_prime: float = 0.0
    eps_dprime: float = 0.0
    log2_inv_eps_prime: float = 0.0
    log2_inv_eps_dprime: float = 0.0
    specs: dict = dc_field(default_factory=dict)
    sampler: SamplerSpec | None = None
    constants: dict = dc_field(default_factory=dict)
    budget: int = DEFAULT_BUDGET

    __hash__ = None

    @property
    def q(self) -> int:
        return 1 << self.q_bits

    @property
    def y_len(self) -> int:
        """Length of the second input: the seed ``d`` or the source ``n``."""
        return self.d if self.variant in SEEDED_LIKE else self.n

    @property
    def moduli(self) -> dict[int, int]:
        widths = {self.q_bits}
        if self.variant == "two_source":
            widths |= {self.log_v, self.h}
        if self.variant == "t_two_source":
            widths |= {self.n1, self.h}
        if self.m_mac:
            widths.add(self.m_mac)
        widths.update(s.w for s in self.specs.values())
        return {w: modulus_for(w) for w in sorted(widths) if w}

    def spec(self, role: str) -> ExtSpec:
        try:
            return self.specs[role]
        except KeyError:
            raise PlanError(f"plan has no {role} spec", f"variant {self.variant}") from None

    # -- serialization ---------------------------------------------------
    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {"schema": SCHEMA}
        for f in fields(self):
            val = getattr(self, f.name)
            if f.name == "specs":
                val = {role: spec.to_json() for role, spec in sorted(val.items())}
            elif f.name == "sampler":
                val = val.to_json() if val else None
            out[f.name] = val
        out["moduli"] = {str(w): hex(m) for w, m in self.moduli.items()}
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, obj: dict[str, Any]) -> ParamPlan:
        if obj.get("schema") != SCHEMA:
            raise PlanError("schema tag", f"expected {SCHEMA!r}, got {obj.get('schema')!r}")
        names = {f.name for f in fields(cls)}
        kw = {k: v for k, v in obj.items() if k in names}
        kw["specs"] = {role: ExtSpec.from_json(s) for role, s in obj["specs"].items()}
        if obj.get("sampler"):
            kw["sampler"] = SamplerSpec(**obj["sampler"])
        plan = cls(**kw)
        validate(plan)
        return plan

    @classmethod
    def loads(cls, text: str) -> ParamPlan:
        return cls.from_json(json.loads(text))


def _log2(x: float) -> float:
    return math.log2(x)


def _ceil(x: float) -> int:
    return max(1, math.ceil(x - 1e-9))


def _smallest_divisor_at_least(n: int, lo: int) -> int | None:
    best = None
    i = 1
    while i * i <= n:
        if n % i == 0:
            for dv in (i, n // i):
                if dv >= lo and (best is None or dv < best):
                    best = dv
        i += 1
    return best


def _divisor_of_cube(k: int, mult: int, lo: int) -> int | None:
    """Smallest divisor of ``mult * k**3`` that is >= ``lo`` (k may be large)."""
    target = mult * k ** 3
    factors: dict[int, int] = {}
    for base, exp in ((k, 3), (mult, 1)):
        r, p = base, 2
        while p * p <= r:
            while r % p == 0:
                factors[p] = factors.get(p, 0) + exp
                r //= p
            p += 1
        if r > 1:
            factors[r] = factors.get(r, 0) + exp
    divisors = [1]
    for p, e in factors.items():
        divisors = [dv * p ** i for dv in divisors for i in range(e + 1)]
    ok = [dv for dv in divisors if dv >= lo and target % dv == 0]
    return min(ok) if ok else None


# ---------------------------------------------------------------------------
# asymptotic schedules


def _seeded_fields(n, eps, k, t, c, variant):
    ln = _log2(n / eps)
    d = _ceil(c["c_d"] * ln ** 7)
    d = -(-d // (8 * t)) * (8 * t)
    f = {"d": d, "t_len": d, "s_len": d // (8 * t)}
    if variant == "seeded":
        log_v = max(1, math.ceil(_log2(d / eps)))
        d1 = _ceil(c["c_d1"] * ln ** 2 * _log2(max(log_v, 2)))
        q_bits = max(math.ceil(_log2(c["c_q"] / eps ** 2)), log_v)
        f.update(log_v=log_v, v=1 << log_v, d1=d1, q_bits=q_bits, a=d1 + q_bits)
    else:
        v = 5 * d
        q_bits = max(1, math.ceil(_log2(v)))
        n1 = _ceil(c["c_n1"] * v ** c["sampler_alpha"])
        t1 = _ceil(c["c_t1"] * v ** c["sampler_beta"])
        d1 = _ceil(c["c_d1"] * _log2(n * t * t / eps ** 2) ** 2 * _log2(d))
        f.update(v=v, q_bits=q_bits, n1=n1, t1=t1, d1=d1, a=d1 + t1 * q_bits)
    lie1 = 2 * (c["c_a"] * f["a"] + _log2(1 / eps))
    if variant == "seeded":
        lie2 = lie1
    else:
        lie2 = 2 * (t + 1) * f["d1"] + 2 * _log2(1 / eps)
    f["log2_inv_eps_prime"] = lie1
    f["log2_inv_eps_dprime"] = lie2
    f["d2"] = _ceil(c["c_d2"] * (_log2(n) + lie2) ** 2 * _log2(d))
    f["s"] = _ceil(c["c_s"] * (_log2(d) + lie1) ** 2 * _log2(d))
    f["b"] = _ceil(c["c_b"] * (_log2(d) + lie1) ** 2 * _log2(d))
    f["h"] = int(c["h_factor"]) * t * f["s"]
    return f


def _two_source_fields(n, eps, k, t, c, variant):
    if k > c["c_k"] * n ** 0.25:
        raise PlanError("k = O(n^{1/4})", f"k={k} > {c['c_k']} * n^(1/4) = {c['c_k'] * n ** 0.25:.1f}")
    f = {"x1_len": 3 * k, "x2_len": 3 * k ** 3, "t_len": n, "s_len": n // (8 * t)}
    if variant == "two_source":
        lo = max(1, math.ceil(_log2(n / eps)))
        log_v = _smallest_divisor_at_least(3 * k, lo)
        if log_v is None:
            raise PlanError("log v divides 3k", f"no divisor of {3 * k} is >= log(n/eps) = {lo}")
        q_bits = max(math.ceil(_log2(c["c_q"] / eps ** 2)), log_v)
        f.update(log_v=log_v, v=1 << log_v, q_bits=q_bits, a=6 * k + 2 * q_bits)
    else:
        v = 5 * n
        q_bits = max(1, math.ceil(_log2(v)))
        lo = _ceil(c["c_n1"] * v ** c["sampler_alpha"])
        n1 = _smallest_divisor_at_least(3 * k, lo)
        if n1 is None:
            raise PlanError("n1 divides 3k", f"no divisor of {3 * k} is >= v^alpha = {lo}")
        t1 = _ceil(c["c_t1"] * v ** c["sampler_beta"])
        f.update(v=v, q_bits=q_bits, n1=n1, t1=t1, a=6 * k + 2 * t1 * q_bits)
    lie1 = 2 * (c["c_a"] * f["a"] + _log2(1 / eps))
    f["log2_inv_eps_prime"] = lie1
    f["s"] = _ceil(c["c_s"] * (_log2(n) + lie1) ** 2 * _log2(n))
    f["b"] = _ceil(c["c_b"] * (_log2(n) + lie1) ** 2 * _log2(n))
    h = _divisor_of_cube(k, 3, int(c["h_factor"]) * t * f["s"])
    if h is None:
        raise PlanError("h divides 3k^3", f"no divisor of {3 * k ** 3} is >= {int(c['h_factor']) * t} s")
    f["h"] = h
    return f


# ---------------------------------------------------------------------------
# structural wiring shared by both modes


def output_length(variant: str, n: int, k: int, t: int) -> int:
    return {
        "seeded": k // 4,
        "two_source": n // 4,
        "t_seeded": k // (8 * t),
        "t_two_source": n // (4 * t),
    }[variant]


def advice_length(variant: str, f: dict) -> int:
    if variant == "seeded":
        return f["d1"] + f["q_bits"]
    if variant == "t_seeded":
        return f["d1"] + f["t1"] * f["q_bits"]
    if variant == "two_source":
        return 2 * f["x1_len"] + 2 * f["q_bits"]
    return 2 * f["x1_len"] + 2 * f["t1"] * f["q_bits"]


def expected_shapes(variant: str, f: dict) -> dict[str, tuple[int, int, int, str]]:
    """Role -> (n_in, d_seed, m_out, description of the seed producer)."""
    seeded = variant in SEEDED_LIKE
    y_len = f["d"] if seeded else f["n"]
    shapes = {
        "Ext1": (y_len, f["s"], f["b"], "Z_s = Prefix(Z, s) and C = Ext2(...)"),
        "Ext2": (f["h"], f["b"], f["s"], "A = Ext1(...)"),
        "Ext3": (f["t_len"], f["b"], f["h"], "A/B = Ext1(...)"),
        "Ext4": (y_len, f["h"], f["s_len"], "Z_a = FF(...)"),
        "Ext6": (f["n"], f["s_len"], f["l_len"], "S = Ext4(Y, Z_a)"),
    }
    if seeded:
        i_len = f["log_v"] if variant == "seeded" else f["n1"]
        shapes["Ext0"] = (f["n"], f["d1"], i_len, "Y1 = Prefix(Y, d1)")
        shapes["Ext5"] = (f["n"], f["d2"], f["t_len"], "Y2 = Prefix(Y, d2)")
    if f.get("m_mac"):
        shapes["PA-Ext"] = (f["n"], f["m_mac"], f["z_out"], "B' (m_mac uniform bits)")
    return shapes


def _default_spec(role, shape, f, eps, eps1, eps2, t):
    n_in, d_seed, m_out, _ = shape
    k_req = {
        "Ext0": 2 * m_out,
        "Ext1": 2 * m_out,
        "Ext2": 2 * m_out,
        "Ext3": 2 * m_out,
        "Ext4": 2 * m_out,
        "Ext5": 2 * m_out,
        "Ext6": 2 * m_out,
        "PA-Ext": 2 * m_out,
    }[role]
    e = {"Ext0": eps ** 2 / t ** 2, "Ext4": eps ** 2, "Ext6": eps ** 2, "Ext5": eps2, "PA-Ext": eps}.get(role, eps1)
    return ExtSpec(role, n_in, d_seed, m_out, k_req, e)


def _check(cond: bool, constraint: str, detail: str = ""):
    if not cond:
        raise PlanError(constraint, detail)


def validate(plan: ParamPlan) -> None:
    """Raise :class:`PlanError` naming the first broken relation."""
    f = {fl.name: getattr(plan, fl.name) for fl in fields(plan)}
    v = plan.variant
    _check(v in VARIANTS, "variant", f"unknown variant {v!r}")
    _check(plan.t >= 1, "t >= 1")
    _check(plan.variant.startswith("t_") or plan.t == 1, "t = 1 outside t-variants")
    for name in ("n", "k", "s", "b", "h", "q_bits", "s_len", "t_len", "l_len"):
        _check(f[name] >= 1, f"{name} >= 1", f"{name}={f[name]}")
    _check(plan.l_len == output_length(v, plan.n, plan.k, plan.t),
           "output length", f"l_len={plan.l_len} for variant {v}")
    _check(plan.a == advice_length(v, f), "advice length", f"a={plan.a}")
    _check(plan.s <= plan.h, "s <= h", f"s={plan.s}, h={plan.h}")
    if v in SEEDED_LIKE:
        _check(plan.d >= 1, "d >= 1")
        _check(plan.d1 <= plan.d, "d1 <= d", f"d1={plan.d1}, d={plan.d}")
        _check(plan.d2 <= plan.d, "d2 <= d", f"d2={plan.d2}, d={plan.d}")
        _check(plan.h <= plan.t_len, "h <= |T|", f"Z_0 = Prefix(T, h) with h={plan.h}, |T|={plan.t_len}")
        msg_symbols = -(-plan.d // plan.q_bits)
    else:
        _check(plan.t_len == plan.n, "|T| = n", "the long source of 2AdvCB is X")
        _check(plan.x1_len <= plan.n, "3k <= n", f"x1_len={plan.x1_len}")
        _check(plan.x2_len <= plan.n, "3k^3 <= n", f"x2_len={plan.x2_len}")
        ip1 = plan.log_v if v == "two_source" else plan.n1
        _check(ip1 >= 1 and plan.x1_len % ip1 == 0, "IP1 symbol width divides 3k",
               f"{plan.x1_len} bits into {ip1}-bit symbols")
        _check(plan.x2_len % plan.h == 0, "IP2 symbol width h divides 3k^3",
               f"{plan.x2_len} bits into {plan.h}-bit symbols")
        _check(plan.h <= plan.n, "h <= n")
        msg_symbols = -(-plan.n // plan.q_bits)
    if v in ("seeded", "two_source"):
        _check(plan.v == 1 << plan.log_v, "v = 2^log v", f"v={plan.v}, log_v={plan.log_v}")
    else:
        _check(plan.sampler is not None, "sampler present")
        s = plan.sampler
        _check((s.r, s.nu, s.t1) == (plan.n1, plan.v, plan.t1), "sampler wiring",
               f"sampler (r, nu, t1)={(s.r, s.nu, s.t1)} vs (n1, v, t1)={(plan.n1, plan.v, plan.t1)}")
    _check(plan.v <= plan.q, "v <= q", f"Reed-Solomon length v={plan.v} over GF(2^{plan.q_bits})")
    _check(msg_symbols <= plan.v, "k_msg <= v", f"{msg_symbols} message symbols, v={plan.v}")
    if plan.m_mac:
        _check(v == "seeded", "PA fields only on seeded plans")
        _check(plan.l_len >= 2 * plan.m_mac, "k >= 8m", f"|L|={plan.l_len} < 2m={2 * plan.m_mac}")
        _check(plan.z_out >= 1, "z >= 1")
    shapes = expected_shapes(v, f)
    _check(set(plan.specs) == set(shapes), "spec roles",
           f"have {sorted(plan.specs)}, need {sorted(shapes)}")
    for role, (n_in, d_seed, m_out, producer) in shapes.items():
        spec = plan.specs[role]
        _check(spec.n_in == n_in, f"wiring {role}.n_in", f"{role} expects {spec.n_in} source bits, gets {n_in}")
        _check(spec.d_seed == d_seed, f"wiring {role}.d_seed",
               f"{role} expects a {spec.d_seed}-bit seed but producer {producer} emits {d_seed} bits")
        _check(spec.m_out == m_out, f"wiring {role}.m_out",
               f"{role} emits {spec.m_out} bits, consumer needs {m_out}")


def plan_params(
    n: int,
    eps: float,
    k: int,
    variant: str = "seeded",
    t: int = 1,
    *,
    micro: dict | None = None,
    constants: dict | None = None,
    m_mac: int = 0,
    z_out: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> ParamPlan:
    """Resolve a complete :class:`ParamPlan`.

    With ``micro`` set, its entries (see :data:`MICRO_FIELDS`, plus an
    optional ``"specs"`` mapping of per-role overrides) replace the schedule
    and only wiring is enforced.  Otherwise the asymptotic schedule for
    ``variant`` is evaluated and its feasibility relations checked.
    """
    if variant not in VARIANTS:
        raise PlanError("variant", f"unknown variant {variant!r}")
    if n < 1 or k < 1:
        raise PlanError("n, k positive", f"n={n}, k={k}")
    if not 0 < eps < 1:
        raise PlanError("0 < eps < 1", f"eps={eps}")
    if variant.startswith("t_"):
        if t < 1:
            raise PlanError("t >= 1", f"t={t}")
    elif t != 1:
        raise PlanError("t = 1 outside t-variants", f"t={t}")
    c = dict(DEFAULT_CONSTANTS)
    c.update(constants or {})

    f: dict[str, Any] = {"n": n, "k": k, "t": t}
    if micro is None:
        mode = "asymptotic"
        if variant in SEEDED_LIKE:
            f.update(_seeded_fields(n, eps, k, t, c, variant))
        else:
            f.update(_two_source_fields(n, eps, k, t, c, variant))
        for name in ("d", "d1", "d2", "log_v", "v", "q_bits", "t1", "n1", "x1_len", "x2_len"):
            f.setdefault(name, 0)
        spec_over: dict = {}
    else:
        mode = "micro"
        micro = dict(micro)
        spec_over = micro.pop("specs", {}) or {}
        unknown = set(micro) - set(MICRO_FIELDS)
        if unknown:
            raise PlanError("micro fields", f"unknown keys {sorted(unknown)}")
        f.update(micro)
        seeded = variant in SEEDED_LIKE
        f.setdefault("t_len", f.get("d", 0) if seeded else n)
        if "log_v" in f and "v" not in f:
            f["v"] = 1 << f["log_v"]
        for name in ("d", "d1", "d2", "log_v", "v", "q_bits", "s", "b", "h", "t1", "n1", "x1_len", "x2_len"):
            f.setdefault(name, 0)
        f.setdefault("s_len", (f["d"] if seeded else n) // (8 * t))
        f["log2_inv_eps_prime"] = 2 * _log2(1 / eps)
        f["log2_inv_eps_dprime"] = f["log2_inv_eps_prime"]
        if any(f[name] < 1 for name in ("s", "b", "h", "q_bits")):
            raise PlanError("micro plan lengths", "s, b, h and q_bits are required")
        f["a"] = advice_length(variant, f)

    f["l_len"] = output_length(variant, n, k, t)
    if m_mac or f.get("m_mac"):
        f["m_mac"] = m_mac or f["m_mac"]
        delta = c["pa_delta"]
        f["z_out"] = z_out or f.get("z_out") or max(1, int((1 - 2 * delta) * k / 2))
    else:
        f["m_mac"], f["z_out"] = 0, 0

    eps1 = 2.0 ** -f["log2_inv_eps_prime"]
    eps2 = 2.0 ** -f["log2_inv_eps_dprime"]

    if mode == "asymptotic":
        _check(f["l_len"] >= 1, "output length >= 1", f"variant {variant} with n={n}, k={k}, t={t}")
        if variant in SEEDED_LIKE:
            _check(k >= 5 * f["d"], "k >= 5d", f"k={k}, d={f['d']}")
            _check(k <= n, "k <= n", f"k={k}, n={n}")
            _check(f["d1"] <= f["d"], "d1 <= d", f"d1={f['d1']}, d={f['d']}")
            _check(f["d2"] <= f["d"], "d2 <= d", f"d2={f['d2']}, d={f['d']}")
            _check(f["h"] <= f["d"], "h <= d", f"h={f['h']}, d={f['d']}")
        else:
            _check(f["x2_len"] <= n, "3k^3 <= n", f"3k^3={f['x2_len']}, n={n}")
            _check(f["h"] <= n, "h <= n", f"h={f['h']}, n={n}")
        _check(f["s_len"] >= 1, "|S| >= 1", f"s_len={f['s_len']}")

    shapes = expected_shapes(variant, f)
    specs = {}
    for role, shape in shapes.items():
        try:
            spec = _default_spec(role, shape, f, eps, eps1, eps2, t)
            if role in spec_over:
                spec = replace(spec, **spec_over[role])
        except ParameterError as exc:
            raise PlanError(f"{role} realizable", str(exc)) from None
        specs[role] = spec
    extra = set(spec_over) - set(shapes)
    if extra:
        raise PlanError("spec roles", f"overrides for unused roles {sorted(extra)}")

    sampler = None
    if variant in ("t_seeded", "t_two_source"):
        sampler = SamplerSpec(f["n1"], f["v"], f["t1"], c["sampler_alpha"], c["sampler_beta"], c["sampler_delta"])

    plan = ParamPlan(
        variant=variant,
        mode=mode,
        eps=eps,
        gamma=c["c_gamma"] * eps,
        eps_prime=eps1,
        eps_dprime=eps2 if variant == "t_seeded" else 0.0,
        specs=specs,
        sampler=sampler,
        constants=c,
        budget=budget,
        **{k_: f[k_] for k_ in (
            "n", "k", "t", "d", "d1", "d2", "a", "v", "log_v", "q_bits", "s", "b", "h", "t1", "n1",
            "x1_len", "x2_len", "s_len", "t_len", "l_len", "m_mac", "z_out",
            "log2_inv_eps_prime", "log2_inv_eps_dprime",
        )},
    )
    validate(plan)
    return plan
