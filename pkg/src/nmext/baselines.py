"""Committed regression instances with exact rational baselines.

Instances are plain data: a preset name, a source description and a list of
tamper descriptions.  ``compute`` evaluates one instance with the exact
oracle; ``BASELINES`` holds the frozen values the verify suites compare
against bit-for-bit.

Source descriptions::

    ("uniform",)                          uniform X, fresh uniform Y
    ("pattern", free)                     flat X, nonzero only at ``free``
    ("product", free_x, free_y)           independent flat X and Y
    ("prefix", entropy)                   flat X on the low ``entropy`` bits

Tamper descriptions are ``("xor", mask)`` or ``("add", k)`` on the seed,
or for two-source variants a pair ``(fx, fy)`` with ``None`` for identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ParameterError
from .oracle import JointDist, ext_distance, nm_distances, pattern_flat_source, prefix_flat_source
from .plan import SEEDED_LIKE, ParamPlan
from .presets import micro_plan
from .trevisan import ExtSpec


@dataclass(frozen=True)
class Instance:
    name: str
    preset: str
    source: tuple
    tampers: tuple


def make_source(desc: tuple, plan: ParamPlan) -> JointDist:
    kind = desc[0]
    if kind == "uniform":
        return JointDist.uniform(plan.n)
    if kind == "pattern":
        return pattern_flat_source(plan.n, desc[1]).dist()
    if kind == "prefix":
        return prefix_flat_source(plan.n, desc[1]).dist()
    if kind == "product":
        xs = pattern_flat_source(plan.n, desc[1]).support
        ys = pattern_flat_source(plan.n, desc[2]).support
        return JointDist.product(xs, ys, plan.n, plan.n)
    raise ParameterError(f"unknown source kind {kind!r}")


def make_map(desc: tuple | None, length: int):
    if desc is None:
        return None
    op, arg = desc
    if op == "xor":
        if not 0 < arg < 1 << length:
            raise ParameterError(f"xor mask must be nonzero and fit in {length} bits")
        return lambda v: v ^ arg
    if op == "add":
        if arg % (1 << length) == 0:
            raise ParameterError("add tamper with a multiple of 2^length has fixed points")
        return lambda v: (v + arg) % (1 << length)
    raise ParameterError(f"unknown tamper op {op!r}")


def make_tampers(inst: Instance, plan: ParamPlan) -> list:
    if plan.variant in SEEDED_LIKE:
        return [make_map(t, plan.d) for t in inst.tampers]
    return [(make_map(fx, plan.n), make_map(fy, plan.n)) for fx, fy in inst.tampers]


def sides_for(plan: ParamPlan) -> tuple[str, ...]:
    return ("y",) if plan.variant in SEEDED_LIKE else ("x", "y")


def compute(inst: Instance, budget: int | None = None) -> dict[str, Fraction]:
    """Exact tampered and untampered distances, keyed ``"<side>"`` and ``"<side>/plain"``."""
    plan = micro_plan(inst.preset)
    source = make_source(inst.source, plan)
    sides = sides_for(plan)
    out = nm_distances(source, make_tampers(inst, plan), plan, sides, budget)
    plain = nm_distances(source, [], plan, sides, budget)
    out.update({f"{side}/plain": v for side, v in plain.items()})
    return out


NM_INSTANCES: tuple[Instance, ...] = (
    Instance("seeded-uniform-flip", "seeded", ("uniform",), (("xor", 0x01),)),
    Instance("seeded-pattern-top", "seeded", ("pattern", (0, 2, 4, 5, 6, 7)), (("xor", 0x80),)),
    Instance("seeded-pattern-inc", "seeded", ("pattern", (1, 3, 5, 7)), (("add", 1),)),
    Instance("two-source-y", "two_source",
             ("product", (0, 1, 2, 9, 14, 19), (0, 1, 2, 8, 13, 18)), ((None, ("xor", 1 << 1)),)),
    Instance("two-source-x", "two_source",
             ("product", (0, 1, 2, 9, 14, 19), (0, 1, 2, 8, 13, 18)), ((("xor", 1 << 19), None),)),
    Instance("two-source-both", "two_source",
             ("product", (0, 1, 2, 5, 11, 17), (0, 1, 2, 6, 12, 16)), ((("xor", 1 << 18), ("add", 1)),)),
    Instance("t-seeded-pair", "t_seeded", ("pattern", tuple(range(8, 16))), (("xor", 0x01), ("xor", 0x80))),
    Instance("t-seeded-spread", "t_seeded", ("pattern", (0, 2, 4, 6, 9, 11, 13, 15)), (("add", 1), ("add", 2))),
    Instance("t-seeded-mixed", "t_seeded", ("pattern", (0, 1, 2, 3, 12, 13, 14, 15)), (("xor", 0x0F), ("add", 3))),
    Instance("t-two-source-y", "t_two_source",
             ("product", (0, 1, 2, 9, 14, 19), (0, 1, 2, 8, 13, 18)),
             ((None, ("xor", 1 << 1)), (None, ("xor", 1 << 12)))),
    Instance("t-two-source-x", "t_two_source",
             ("product", (0, 1, 2, 9, 14, 19), (0, 1, 2, 8, 13, 18)),
             ((("xor", 1 << 19), None), (("add", 1), None))),
    Instance("t-two-source-both", "t_two_source",
             ("product", (0, 3, 4, 5, 11, 17), (0, 3, 4, 6, 12, 16)),
             ((("xor", 1 << 18), ("add", 1)), (None, ("xor", 1 << 15)))),
)

# Single-output Trevisan extractors on ten-bit inputs and a nested chain of
# flat sources.  Uniform inputs give distance zero for every spec.
EXT_SPECS: tuple[ExtSpec, ...] = tuple(
    ExtSpec("ext", 10, d, 1, k_req=2, eps=0.25) for d in (4, 6, 8, 10)
)
EXT_ENTROPIES = (10, 9, 8, 6)


def compute_ext(spec: ExtSpec, entropy: int) -> Fraction:
    return ext_distance(prefix_flat_source(spec.n_in, entropy).dist(), spec)


# Frozen by running ``compute`` once; compared with ``==`` on Fractions.
# Keys: instance name, then ``"<side>"`` or ``"<side>/plain"``.
BASELINES: dict[str, dict[str, str]] = {
    "seeded-uniform-flip": {"y": "5/16", "y/plain": "0"},
    "seeded-pattern-top": {"y": "1/8", "y/plain": "1/32"},
    "seeded-pattern-inc": {"y": "53/128", "y/plain": "0"},
    "two-source-y": {"x": "14859/16384", "y": "59207/65536", "x/plain": "3679/4096", "y/plain": "113/128"},
    "two-source-x": {"x": "120375/131072", "y": "120935/131072", "x/plain": "3679/4096", "y/plain": "113/128"},
    "two-source-both": {"x": "60031/65536", "y": "7447/8192", "x/plain": "3693/4096", "y/plain": "227/256"},
    "t-seeded-pair": {"y": "3/8", "y/plain": "5/16"},
    "t-seeded-spread": {"y": "445/1024", "y/plain": "1/32"},
    "t-seeded-mixed": {"y": "1/2", "y/plain": "0"},
    "t-two-source-y": {"x": "5665/8192", "y": "8789/16384", "x/plain": "1259/2048", "y/plain": "1005/2048"},
    "t-two-source-x": {"x": "10675/16384", "y": "2543/4096", "x/plain": "1259/2048", "y/plain": "1005/2048"},
    "t-two-source-both": {"x": "11531/16384", "y": "11499/16384", "x/plain": "1247/2048", "y/plain": "499/1024"},
}

EXT_BASELINES: dict[tuple[int, int], str] = {
    (4, 10): "0",
    (4, 9): "1/32",
    (4, 8): "1/8",
    (4, 6): "1/8",
    (6, 10): "0",
    (6, 9): "1/128",
    (6, 8): "3/128",
    (6, 6): "1/16",
    (8, 10): "0",
    (8, 9): "1/512",
    (8, 8): "3/512",
    (8, 6): "1/32",
    (10, 10): "0",
    (10, 9): "1/2048",
    (10, 8): "3/2048",
    (10, 6): "15/2048",
}


# Protocol transcripts on the enumerable PA plan: (name, source, side
# information, strategy).  Side information is "none", "low-bit" (E reveals
# the last bit of X) or "top-nibble" (E reveals the first four bits).
ENTROPY_INSTANCES: tuple[tuple[str, tuple, str, str], ...] = (
    ("low-byte-identity", ("pattern", tuple(range(8, 16))), "none", "identity"),
    ("spread-leak-bitflip", ("pattern", (0, 2, 4, 6, 9, 11, 13, 15)), "low-bit", "seed-bitflip"),
    ("split-leak-forge", ("pattern", (0, 1, 2, 3, 12, 13, 14, 15)), "top-nibble", "tag-forge-random"),
)

# guess_after: optimal guessing probability of X given E and the transcript.
ENTROPY_BASELINES: dict[str, dict[str, str]] = {
    "low-byte-identity": {"guess_after": "19/4096", "extraction_distance": "5/16"},
    "spread-leak-bitflip": {"guess_after": "7/512", "extraction_distance": "23/128"},
    "split-leak-forge": {"guess_after": "85/1024", "extraction_distance": "23/64"},
}

_SIDE_INFO = {
    "none": None,
    "low-bit": lambda x: x & 1,
    "top-nibble": lambda x: x >> 12,
}


def entropy_source(inst: tuple, plan: ParamPlan) -> JointDist:
    _, desc, side, _ = inst
    support = make_source(desc, plan).marginal(lambda key: key[0])
    return JointDist.flat(support, plan.n, _SIDE_INFO[side])
