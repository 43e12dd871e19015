"""Exact, enumeration-based ground truth.

Distributions are explicit atom tables with :class:`~fractions.Fraction`
probabilities.  Every distance and entropy here is computed exactly by
walking the full support; nothing is sampled.  Enumerations larger than the
budget raise :class:`BudgetExceeded` instead of silently truncating.

A :class:`JointDist` atom is ``((x, e, y), p)``.  ``e`` is classical side
information (any hashable value, ``None`` when absent).  ``y = None`` means
"the second input is a fresh uniform seed": oracles enumerate it.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

from .errors import BudgetExceeded, ParameterError
from .plan import SEEDED_LIKE, ParamPlan
from .trevisan import ExtSpec, extractor

Atom = tuple[tuple[int, Hashable, "int | None"], Fraction]
TamperMap = Callable[[int], int] | Mapping[int, int]


def _as_fn(t: TamperMap | None) -> Callable[[int], int] | None:
    if t is None or callable(t):
        return t
    return t.__getitem__


def _freeze(v):
    return tuple(_freeze(u) for u in v) if isinstance(v, list) else v


@dataclass(frozen=True)
class JointDist:
    atoms: tuple[Atom, ...]
    n_x: int
    n_y: int = 0

    def __post_init__(self):
        merged: dict = defaultdict(Fraction)
        for key, p in self.atoms:
            p = Fraction(p)
            if p < 0:
                raise ParameterError(f"negative probability {p} at {key}")
            merged[tuple(key)] += p
        total = sum(merged.values(), Fraction(0))
        if total != 1:
            raise ParameterError(f"probabilities sum to {total}, not 1")
        object.__setattr__(self, "atoms", tuple(sorted(
            ((k, p) for k, p in merged.items() if p), key=lambda a: repr(a[0]))))

    # -- constructors -------------------------------------------------
    @classmethod
    def uniform(cls, n: int, e: Hashable = None) -> JointDist:
        w = Fraction(1, 1 << n)
        return cls(tuple(((x, e, None), w) for x in range(1 << n)), n)

    @classmethod
    def flat(cls, support: Iterable[int], n: int, side: Callable[[int], Hashable] | None = None) -> JointDist:
        sup = sorted(set(support))
        if not sup:
            raise ParameterError("flat source needs a nonempty support")
        w = Fraction(1, len(sup))
        return cls(tuple(((x, side(x) if side else None, None), w) for x in sup), n)

    @classmethod
    def product(cls, xs: Iterable[int], ys: Iterable[int], n_x: int, n_y: int) -> JointDist:
        """Independent flat sources on ``xs`` and ``ys``."""
        xs, ys = sorted(set(xs)), sorted(set(ys))
        w = Fraction(1, len(xs) * len(ys))
        return cls(tuple(((x, None, y), w) for x in xs for y in ys), n_x, n_y)

    @classmethod
    def from_table(cls, table: Mapping[tuple, Any], n_x: int, n_y: int = 0) -> JointDist:
        return cls(tuple((k, Fraction(p)) for k, p in table.items()), n_x, n_y)

    # -- views ----------------------------------------------------------
    @property
    def denominator(self) -> int:
        return math.lcm(*(p.denominator for _, p in self.atoms))

    def integer_weights(self) -> tuple[list[tuple[tuple, int]], int]:
        """Atoms with integer weights over a common denominator."""
        den = self.denominator
        return [(k, int(p * den)) for k, p in self.atoms], den

    def marginal(self, fn: Callable[[tuple], Hashable]) -> dict[Hashable, Fraction]:
        out: dict = defaultdict(Fraction)
        for key, p in self.atoms:
            out[fn(key)] += p
        return dict(out)

    def to_json(self) -> dict:
        return {
            "schema": "nmext-jointdist/1",
            "n_x": self.n_x,
            "n_y": self.n_y,
            "atoms": [[list(k), [p.numerator, p.denominator]] for k, p in self.atoms],
        }

    @classmethod
    def from_json(cls, obj: dict) -> JointDist:
        atoms = tuple((tuple(_freeze(k)), Fraction(num, den)) for k, (num, den) in obj["atoms"])
        return cls(atoms, obj["n_x"], obj.get("n_y", 0))

    def sample(self, u: int, bits: int = 64) -> tuple:
        """Atom selected by the uniform integer ``u`` in ``[0, 2^bits)``."""
        target = Fraction(u, 1 << bits)
        acc = Fraction(0)
        for key, p in self.atoms:
            acc += p
            if target < acc:
                return key
        return self.atoms[-1][0]


@dataclass(frozen=True)
class FlatSource:
    support: frozenset[int]
    n: int

    @property
    def entropy(self) -> float:
        return math.log2(len(self.support))

    def dist(self) -> JointDist:
        return JointDist.flat(self.support, self.n)


def pattern_flat_source(n: int, free: Sequence[int]) -> FlatSource:
    """Strings that are zero outside the ``free`` bit positions (0 = MSB)."""
    free = sorted(set(free))
    if any(not 0 <= i < n for i in free):
        raise ParameterError(f"free positions must lie in [0, {n})")
    support = []
    for pattern in range(1 << len(free)):
        v = 0
        for j, pos in enumerate(free):
            if pattern >> (len(free) - 1 - j) & 1:
                v |= 1 << (n - 1 - pos)
        support.append(v)
    return FlatSource(frozenset(support), n)


def prefix_flat_source(n: int, entropy: int) -> FlatSource:
    """Strings whose first ``n - entropy`` bits are zero (``H_inf = entropy``).

    Lower entropies give nested supports, so the family is a refinement chain.
    """
    if not 0 <= entropy <= n:
        raise ParameterError(f"entropy {entropy} outside [0, {n}]")
    return FlatSource(frozenset(range(1 << entropy)), n)


# ---------------------------------------------------------------------------
# basic quantities


def stat_dist(p: Mapping[Hashable, Any], q: Mapping[Hashable, Any]) -> Fraction:
    """Half the L1 distance between two finite distributions."""
    total = Fraction(0)
    for key in set(p) | set(q):
        total += abs(Fraction(p.get(key, 0)) - Fraction(q.get(key, 0)))
    return total / 2


def guessing_prob(d: JointDist, of: str = "x", given: Sequence[str] = ("e",)) -> Fraction:
    """``sum_c max_v P(v, c)`` for the named coordinate given the others."""
    pos = {"x": 0, "e": 1, "y": 2}
    best: dict = {}
    joint: dict = defaultdict(Fraction)
    for key, p in d.atoms:
        cond = tuple(key[pos[g]] for g in given)
        joint[(cond, key[pos[of]])] += p
    for (cond, _), p in joint.items():
        if p > best.get(cond, -1):
            best[cond] = p
    return sum(best.values(), Fraction(0))


def min_entropy_cond(d: JointDist, of: str = "x", given: Sequence[str] = ("e",)) -> float:
    """Classical conditional min-entropy ``-log2 guessing_prob``."""
    if not d.atoms:
        raise ParameterError("empty distribution")
    g = guessing_prob(d, of, given)
    return -math.log2(g.numerator) + math.log2(g.denominator)


def _distance_from_counts(table: Mapping[Hashable, Mapping[int, int]], m: int, total: int) -> Fraction:
    """Distance of (L, ctx) from (U_m, ctx) given integer masses ``table[ctx][l]``."""
    size = 1 << m
    acc = 0
    for row in table.values():
        mass = sum(row.values())
        acc += sum(abs(c * size - mass) for c in row.values())
        acc += (size - len(row)) * mass
    return Fraction(acc, 2 * size * total)


def _check_budget(needed: int, budget: int | None):
    if budget is not None and needed > budget:
        raise BudgetExceeded(needed, budget)


def ext_distance(source: JointDist, spec: ExtSpec, strong: bool = True, budget: int | None = 10 ** 7) -> Fraction:
    """``Delta((Ext(X,S), S, E), (U, S, E))``; drops ``S`` when not ``strong``."""
    weights, den = source.integer_weights()
    n_seed = 1 << spec.d_seed
    _check_budget(len(weights) * n_seed, budget)
    ext = extractor(spec)
    table: dict = defaultdict(lambda: defaultdict(int))
    for (x, e, _), w in weights:
        for s in range(n_seed):
            table[(s, e) if strong else e][ext(x, s)] += w
    return _distance_from_counts(table, spec.m_out, den * n_seed)


# ---------------------------------------------------------------------------
# non-malleability


def _fixed_point_free(fn, domain: Iterable[int], what: str):
    for v in domain:
        if fn(v) == v:
            raise ParameterError(f"{what} has a fixed point at {v}")


def nm_distances(
    source: JointDist,
    tampers: Sequence,
    plan: ParamPlan,
    sides: Sequence[str] = ("y",),
    budget: int | None = None,
    evaluate: Callable[[int, int], int] | None = None,
) -> dict[str, Fraction]:
    """Exact non-malleability distance on a micro plan.

    Seeded variants: ``tampers`` is a list of maps ``y -> y'`` without fixed
    points.  The result is the distance between the law of
    ``(L, L^1..L^t, Y, Y^1..Y^t, E)`` and the same law with ``L`` replaced
    by a fresh uniform string.

    Two-source variants: ``tampers`` is a list of ``(fx, fy)`` pairs where
    ``None`` means identity; for every pair one of the two maps must be
    fixed-point-free on the support.  ``sides`` selects which inputs are
    conditioned on: ``"y"`` for ``(Y, Y^i)``, ``"x"`` for ``(X, X^i)``.

    With an empty ``tampers`` list the result is the plain (strong)
    extraction distance of the pipeline.

    Returns one distance per requested side from a single enumeration.
    """
    from .pipeline import evaluator

    f = evaluate or evaluator(plan)
    budget = plan.budget if budget is None else budget
    weights, den = source.integer_weights()
    seeded = plan.variant in SEEDED_LIKE
    y_len = plan.d if seeded else plan.n
    ys_free = range(1 << y_len)
    pairs = [((x, e, y), w) for (x, e, y), w in weights for y in ((y,) if y is not None else ys_free)]
    seed_mult = 1 << y_len if any(k[2] is None for k, _ in weights) else 1
    _check_budget(len(pairs) * (1 + len(tampers)), budget)
    # rescale so all pairs share one denominator
    total = den * seed_mult
    if seed_mult > 1 and not all(k[2] is None for k, _ in weights):
        raise ParameterError("mix of explicit and enumerated second inputs")

    cache: dict[tuple[int, int], int] = {}

    def out(x: int, y: int) -> int:
        key = (x, y)
        v = cache.get(key)
        if v is None:
            v = cache[key] = f(x, y)
        return v

    for side in sides:
        if side not in ("x", "y") or (seeded and side != "y"):
            raise ParameterError(f"side {side!r} not available for variant {plan.variant}")
    tables = {side: defaultdict(lambda: defaultdict(int)) for side in sides}
    if seeded:
        fns = [_as_fn(t) for t in tampers]
        for fn in fns:
            _fixed_point_free(fn, {k[2] for k, _ in pairs}, "seed tamper map")
        for (x, e, y), w in pairs:
            ys = tuple(fn(y) for fn in fns)
            others = tuple(out(x, yi) for yi in ys)
            tables["y"][(others, y, ys, e)][out(x, y)] += w
    else:
        fns = [(_as_fn(fx) or (lambda v: v), _as_fn(fy) or (lambda v: v)) for fx, fy in tampers]
        xs = {k[0] for k, _ in pairs}
        ys_seen = {k[2] for k, _ in pairs}
        for fx, fy in fns:
            if any(fx(x) == x for x in xs) and any(fy(y) == y for y in ys_seen):
                raise ParameterError("two-source tamper pair has fixed points in both coordinates")
        for (x, e, y), w in pairs:
            moved = tuple((fx(x), fy(y)) for fx, fy in fns)
            others = tuple(out(xi, yi) for xi, yi in moved)
            l = out(x, y)
            if "y" in tables:
                tables["y"][(others, y, tuple(m[1] for m in moved), e)][l] += w
            if "x" in tables:
                tables["x"][(others, x, tuple(m[0] for m in moved), e)][l] += w
    return {side: _distance_from_counts(t, plan.l_len, total) for side, t in tables.items()}


def nm_distance(
    source: JointDist,
    tampers: Sequence,
    plan: ParamPlan,
    side: str = "y",
    budget: int | None = None,
    evaluate: Callable[[int, int], int] | None = None,
) -> Fraction:
    """Single-side form of :func:`nm_distances`."""
    return nm_distances(source, tampers, plan, (side,), budget, evaluate)[side]


def point_mass(x: int, n: int) -> JointDist:
    return JointDist((((x, None, None), Fraction(1)),), n)


def as_float(v: Fraction) -> float:
    return v.numerator / v.denominator


def rational_json(v: Fraction) -> dict:
    return {"num": v.numerator, "den": v.denominator, "float": as_float(v)}
