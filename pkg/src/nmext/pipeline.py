"""Variant dispatch for int-level evaluation of any extractor plan."""

from __future__ import annotations

from typing import Callable

from .bits import BitString
from .nmext import engine, nmext
from .plan import ParamPlan
from .t_tamper import evaluate_t, evaluate_t2, t_2nmext_trace, t_nmext_trace
from .two_source import evaluate as evaluate_two, two_nmext


def evaluator(plan: ParamPlan) -> Callable[[int, int], int]:
    """``f(x, y) -> L`` on ints for the plan's variant."""
    v = plan.variant
    if v == "seeded":
        return engine(plan).seeded
    if v == "two_source":
        return lambda x, y: evaluate_two(plan, x, y)
    if v == "t_seeded":
        return lambda x, y: evaluate_t(plan, x, y)
    return lambda x, y: evaluate_t2(plan, x, y)


def run_traced(plan: ParamPlan, x: BitString, y: BitString):
    """``(L, trace)`` for the plan's variant."""
    return {
        "seeded": nmext,
        "two_source": two_nmext,
        "t_seeded": t_nmext_trace,
        "t_two_source": t_2nmext_trace,
    }[plan.variant](x, y, plan)
