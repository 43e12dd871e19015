"""Verification suites comparing the implementation with exact oracles.

Each suite returns a :class:`SuiteReport` made of named checks.  A check
records whether it passed and the exact values it compared.  Enumerations
that exceed their budget are reported as refusals, never as passes.
"""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable

from . import baselines as bl
from .bits import BitString
from .codes import hamming, rs_encode
from .errors import BudgetExceeded, ParameterError
from .oracle import rational_json
from .plan import SEEDED_LIKE, output_length
from .presets import family, micro_plan
from .protocol import BUILTIN_STRATEGIES, MacKey, UniformSource, eval_suite, mac, transcript_analysis
from .pipeline import evaluator, run_traced
from .trevisan import weak_design


@dataclass
class Check:
    name: str
    passed: bool
    detail: dict = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, **self.detail}


@dataclass
class SuiteReport:
    suite: str
    checks: list[Check] = dc_field(default_factory=list)
    refused: str | None = None
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.refused is None and all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, **detail) -> Check:
        c = Check(name, bool(passed), detail)
        self.checks.append(c)
        return c

    def to_json(self) -> dict:
        return {
            "schema": "nmext-verify/1",
            "suite": self.suite,
            "passed": self.passed,
            "refused": self.refused,
            "checks": [c.to_json() for c in self.checks],
        }


# ---------------------------------------------------------------------------
# mac


def mac_forgery_table(m: int) -> tuple[Fraction, Fraction]:
    """Exhaustive forgery counts over all ``2^{2m}`` keys.

    For every observed pair ``(b', t')`` and every forgery ``(b != b', t)``
    counts the keys consistent with both.  Returns the minimum and maximum
    of ``count * 2^m / consistent``; both equal 1 exactly when the
    conditional forgery probability is ``2^-m`` everywhere.
    """
    size = 1 << m
    keys = [MacKey(s1, s2, m) for s1 in range(size) for s2 in range(size)]
    tags = {k: [mac(k, BitString(b, m)).value for b in range(size)] for k in keys}
    lo, hi = None, None
    for b_obs in range(size):
        by_tag: dict[int, list[MacKey]] = {}
        for k in keys:
            by_tag.setdefault(tags[k][b_obs], []).append(k)
        for consistent in by_tag.values():
            for b in range(size):
                if b == b_obs:
                    continue
                hist = [0] * size
                for k in consistent:
                    hist[tags[k][b]] += 1
                for count in hist:
                    ratio = Fraction(count * size, len(consistent))
                    lo = ratio if lo is None or ratio < lo else lo
                    hi = ratio if hi is None or ratio > hi else hi
    return lo, hi


def suite_mac(report: SuiteReport, widths=(2, 3, 4)):
    for m in widths:
        lo, hi = mac_forgery_table(m)
        report.add(f"mac m={m} forgery probability is 2^-{m}", lo == hi == 1,
                   min_ratio=str(lo), max_ratio=str(hi))


# ---------------------------------------------------------------------------
# ecc


def ecc_min_distance(width: int, k_msg: int, n_code: int) -> int:
    words = [rs_encode(msg, n_code, width).symbols
             for msg in itertools.product(range(1 << width), repeat=k_msg)]
    return min(hamming(a, b) for a, b in itertools.combinations(words, 2))


def suite_ecc(report: SuiteReport, width: int = 4, k_msg: int = 2, n_code: int = 8):
    dist = ecc_min_distance(width, k_msg, n_code)
    report.add("reed-solomon minimum distance", dist == n_code - k_msg + 1,
               q=1 << width, k_msg=k_msg, n_code=n_code, distance=dist, expected=n_code - k_msg + 1)
    rate = Fraction(k_msg, n_code)
    gamma = 1 - Fraction(dist, n_code)
    slack = float(rate) + 1 / (math.sqrt(1 << width) - 1) - float(gamma)
    report.add("rate and distance inequality", slack >= 0,
               rate=str(rate), gamma=str(gamma), slack=slack)


# ---------------------------------------------------------------------------
# design


def design_violations(m: int, l: int) -> list[str]:
    design = weak_design(m, l)
    out = []
    for i, s in enumerate(design.sets):
        if len(s) != l or len(set(s)) != l:
            out.append(f"set {i} has {len(set(s))} distinct positions, expected {l}")
        if min(s) < 1 or max(s) > design.d_total:
            out.append(f"set {i} leaves the seed range [1, {design.d_total}]")
        overlap = sum(2 ** len(set(s) & set(t)) for t in design.sets[:i])
        if overlap > design.overlap_bound * max(m - 1, 1):
            out.append(f"set {i} overlap sum {overlap} exceeds {design.overlap_bound * (m - 1)}")
    return out


def suite_design(report: SuiteReport, max_m: int = 16, widths=range(1, 9)):
    checked, bad = 0, []
    for w in widths:
        for m in range(1, max_m + 1):
            try:
                weak_design(m, 2 * w)
            except ParameterError:
                continue
            checked += 1
            bad.extend(f"w={w} m={m}: {v}" for v in design_violations(m, 2 * w))
    report.add("weak designs: sizes, range and overlap", not bad and checked > 0,
               designs=checked, violations=bad[:10])


# ---------------------------------------------------------------------------
# ext


def suite_ext(report: SuiteReport):
    for spec in bl.EXT_SPECS:
        for entropy in bl.EXT_ENTROPIES:
            got = bl.compute_ext(spec, entropy)
            want = Fraction(bl.EXT_BASELINES[(spec.d_seed, entropy)])
            name = f"ext n={spec.n_in} d={spec.d_seed} entropy={entropy}"
            ok = got == want and (entropy < spec.n_in or got == 0)
            report.add(name, ok, got=str(got), expected=str(want))


# ---------------------------------------------------------------------------
# extractor variants


_SUITE_VARIANTS = {"nmext": ("seeded",), "2nmext": ("two_source",), "t": ("t_seeded", "t_two_source")}


def structural_checks(report: SuiteReport, variant: str, samples: int = 64, seed: int = 0):
    for label, plan in family(variant):
        rng = random.Random(f"{seed}/{label}")
        want_len = output_length(variant, plan.n, plan.k, plan.t)
        ok_len = ok_det = ok_trace = True
        for _ in range(samples):
            x = BitString(rng.getrandbits(plan.n), plan.n)
            y = BitString(rng.getrandbits(plan.y_len), plan.y_len)
            l1, trace = run_traced(plan, x, y)
            l2, _ = run_traced(plan, x, y)
            ok_len &= l1.length == want_len == plan.l_len
            ok_det &= l1 == l2 and l1.value == evaluator(plan)(x.value, y.value)
            try:
                trace.check(plan)
            except ValueError:
                ok_trace = False
        report.add(f"{label}: output length", ok_len, expected=want_len, plan=plan.l_len)
        report.add(f"{label}: deterministic", ok_det)
        report.add(f"{label}: trace lengths", ok_trace)
        report.add(f"{label}: advice prefix separation", advice_prefix_holds(plan))


def advice_prefix_holds(plan) -> bool:
    """Every advice string starts with the prefix(es) it is built from.

    Seeded variants: every ``y`` against every ``x`` (up to 256 of them).
    Two-source variants: every pair of prefixes with a few fixed tails.
    Because the advice embeds the prefix verbatim, inputs with different
    prefixes always get different advice.
    """
    from .nmext import engine
    from .t_tamper import t2_advice_int, t_advice_int
    from .two_source import advice_int

    if plan.variant in SEEDED_LIKE:
        advice = (lambda x, y: engine(plan).seeded_advice(x, y)[0]) if plan.variant == "seeded" \
            else (lambda x, y: t_advice_int(plan, x, y)[0])
        xs = range(1 << plan.n) if plan.n <= 8 else range(0, 1 << plan.n, (1 << plan.n) // 256)
        for x in xs:
            for y in range(1 << plan.d):
                if advice(x, y) >> (plan.a - plan.d1) != y >> (plan.d - plan.d1):
                    return False
        return True
    advice = (lambda x, y: advice_int(plan, x, y)[0]) if plan.variant == "two_source" \
        else (lambda x, y: t2_advice_int(plan, x, y)[0])
    k3, rest = plan.x1_len, plan.n - plan.x1_len
    tails = {0, (1 << rest) - 1, 0x55555555 & ((1 << rest) - 1)}
    for x1, y1 in itertools.product(range(1 << k3), repeat=2):
        for tx, ty in itertools.product(sorted(tails), repeat=2):
            head = advice((x1 << rest) | tx, (y1 << rest) | ty) >> (plan.a - 2 * k3)
            if head != (x1 << k3) | y1:
                return False
    return True


def baseline_checks(report: SuiteReport, variant: str, budget: int | None = None):
    for inst in bl.NM_INSTANCES:
        if micro_plan(inst.preset).variant != variant:
            continue
        got = bl.compute(inst, budget)
        want = {k: Fraction(v) for k, v in bl.BASELINES[inst.name].items()}
        report.add(f"{inst.name}: exact baselines", got == want,
                   got={k: str(v) for k, v in got.items()}, expected={k: str(v) for k, v in want.items()})
        ordered = all(got[f"{side}/plain"] <= got[side] for side in bl.sides_for(micro_plan(inst.preset)))
        report.add(f"{inst.name}: untampered <= tampered", ordered)


def suite_variants(name: str) -> Callable[[SuiteReport], None]:
    def run(report: SuiteReport, budget: int | None = None):
        for variant in _SUITE_VARIANTS[name]:
            structural_checks(report, variant)
            baseline_checks(report, variant, budget)
    return run


# ---------------------------------------------------------------------------
# protocol


def suite_pa(report: SuiteReport, trials: int = 100_000, rng_seed: int = 0, correctness_trials: int = 10_000):
    plan = micro_plan("pa")
    source = UniformSource(plan.n)
    (ident,) = eval_suite(source, ["identity"], plan, correctness_trials, rng_seed)
    report.add("identity adversary: keys agree", ident.agree_count == ident.trials, **ident.to_json())
    attacks = [s for s in BUILTIN_STRATEGIES if s != "identity"]
    for r in eval_suite(source, attacks, plan, trials, rng_seed):
        report.add(f"{r.strategy}: Q-rate within 2^-m + 3 sigma", r.passed, **r.to_json())


def suite_entropy_loss(report: SuiteReport, budget: int | None = None):
    plan = micro_plan("pa_micro")
    for inst in bl.ENTROPY_INSTANCES:
        name, _, _, strat = inst
        r = transcript_analysis(bl.entropy_source(inst, plan), strat, plan, budget)
        want = bl.ENTROPY_BASELINES[name]
        exact = (str(r.guess_after) == want["guess_after"]
                 and str(r.extraction_distance) == want["extraction_distance"])
        report.add(f"{name}: min-entropy after transcript >= before - |Y|", r.holds, **r.to_json())
        report.add(f"{name}: min-entropy after transcript >= before - |T'|", r.holds_tight)
        report.add(f"{name}: exact baselines", exact, expected=want,
                   extraction=rational_json(r.extraction_distance))


SUITES: dict[str, Callable] = {
    "mac": suite_mac,
    "ecc": suite_ecc,
    "design": suite_design,
    "ext": suite_ext,
    "nmext": suite_variants("nmext"),
    "2nmext": suite_variants("2nmext"),
    "t": suite_variants("t"),
    "pa": suite_pa,
    "entropy-loss": suite_entropy_loss,
}


def run_suite(name: str, **kwargs) -> SuiteReport:
    if name not in SUITES:
        raise ParameterError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    report = SuiteReport(name)
    start = time.perf_counter()
    try:
        SUITES[name](report, **kwargs)
    except BudgetExceeded as exc:
        report.refused = str(exc)
    report.seconds = time.perf_counter() - start
    return report
