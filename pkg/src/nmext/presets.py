"""Named micro plans small enough for exhaustive enumeration.

Each preset fixes tiny lengths by hand; :func:`plan_params` still checks that
every extractor consumes exactly what its producer emits.
"""

from __future__ import annotations

from .plan import ParamPlan, plan_params

MICRO = {
    "seeded": dict(
        n=8, k=4, eps=0.25, variant="seeded",
        micro=dict(d=8, d1=4, d2=4, t_len=4, q_bits=4, log_v=3, s=4, b=4, h=4, s_len=4),
    ),
    "two_source": dict(
        n=20, k=6, eps=0.25, variant="two_source",
        micro=dict(x1_len=3, x2_len=20, log_v=3, q_bits=4, s=20, b=20, h=20, s_len=20),
    ),
    "t_seeded": dict(
        n=16, k=16, eps=0.25, variant="t_seeded", t=2,
        micro=dict(d=8, d1=4, d2=4, t_len=4, v=4, q_bits=2, n1=4, t1=2, s=4, b=4, h=4, s_len=4),
    ),
    "t_two_source": dict(
        n=20, k=6, eps=0.25, variant="t_two_source", t=2,
        micro=dict(x1_len=6, x2_len=20, n1=6, v=8, q_bits=4, t1=2, s=20, b=20, h=20, s_len=20),
    ),
}

# Protocol plans.  "pa" carries an 8-bit MAC and is sized for Monte Carlo;
# "pa_micro" is small enough to enumerate every (x, Y, B') session exactly.
PA = {
    "pa": dict(
        n=128, k=64, eps=0.25, variant="seeded", m_mac=8, z_out=2,
        micro=dict(d=128, d1=16, d2=88, t_len=128, q_bits=8, log_v=4, s=88, b=88, h=88, s_len=110),
    ),
    "pa_micro": dict(
        n=16, k=16, eps=0.25, variant="seeded", m_mac=2, z_out=1,
        micro=dict(d=8, d1=4, d2=4, t_len=4, q_bits=4, log_v=3, s=4, b=4, h=4, s_len=4),
    ),
}
MICRO.update(PA)


def micro_plan(name: str, **overrides) -> ParamPlan:
    kw = dict(MICRO[name])
    kw["micro"] = dict(kw["micro"], **overrides.pop("micro", {}))
    kw.update(overrides)
    n, eps, k = kw.pop("n"), kw.pop("eps"), kw.pop("k")
    return plan_params(n, eps, k, **kw)


# Three committed plans per variant for the structural suite, as
# (label, preset, overrides for micro_plan).
FAMILIES: dict[str, tuple[tuple[str, str, dict], ...]] = {
    "seeded": (
        ("seeded-base", "seeded", {}),
        ("seeded-long-seed", "seeded", {"micro": {"d": 12, "d1": 6, "d2": 6}}),
        ("seeded-narrow-code", "seeded", {"k": 8, "micro": {"q_bits": 2, "log_v": 2}}),
    ),
    "two_source": (
        ("two-source-base", "two_source", {}),
        ("two-source-wide-index", "two_source", {"micro": {"x1_len": 4, "log_v": 4}}),
        ("two-source-long-prefix", "two_source", {"micro": {"x1_len": 6}}),
    ),
    "t_seeded": (
        ("t-seeded-base", "t_seeded", {}),
        ("t-seeded-wide-symbols", "t_seeded", {"micro": {"q_bits": 4, "v": 8}}),
        ("t-seeded-long-seed", "t_seeded", {"micro": {"d": 12, "v": 8, "q_bits": 3}}),
    ),
    "t_two_source": (
        ("t-two-source-base", "t_two_source", {}),
        ("t-two-source-long-prefix", "t_two_source", {"micro": {"x1_len": 8, "n1": 8}}),
        ("t-two-source-short-prefix", "t_two_source", {"micro": {"x1_len": 4, "n1": 4}}),
    ),
}


def family(variant: str) -> list[tuple[str, ParamPlan]]:
    return [(label, micro_plan(preset, **dict(kw))) for label, preset, kw in FAMILIES[variant]]
