"""Two-round privacy amplification with a one-time MAC.

Alice and Bob share a weak secret ``x``.  Alice sends a fresh seed ``Y``;
each side derives a MAC key from the non-malleable extractor output on the
seed it saw.  Bob replies with a fresh seed ``B'`` for the final extractor
and a tag on it.  Alice accepts only if the tag verifies under her own key.
An active adversary sits on the channel and may rewrite every message.

Randomness comes only from :class:`CounterRNG`, a SHA-256 counter stream
keyed by an integer seed and a label per draw, so sessions replay
bit-identically everywhere.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable

from .bits import BitString
from .errors import LengthError, ParameterError
from .field import field
from .nmext import engine
from .oracle import JointDist, guessing_prob, _distance_from_counts
from .plan import ParamPlan
from .trevisan import extractor

RNG_ID = "sha256-ctr/1"


class CounterRNG:
    """Deterministic bit source: SHA-256 over ``(id, seed, label, counter)``."""

    algorithm = RNG_ID

    def __init__(self, seed: int):
        self.seed = int(seed)

    def bits(self, n: int, label: str) -> int:
        if n <= 0:
            return 0
        out, counter = b"", 0
        while 8 * len(out) < n:
            out += hashlib.sha256(f"{RNG_ID}|{self.seed}|{label}|{counter}".encode()).digest()
            counter += 1
        return int.from_bytes(out, "big") >> (8 * len(out) - n)

    def bitstring(self, n: int, label: str) -> BitString:
        return BitString(self.bits(n, label), n)


def derive_seed(rng_seed: int, index: int) -> int:
    """Per-trial session seed derived from a batch seed."""
    return CounterRNG(rng_seed).bits(63, f"trial/{index}")


# ---------------------------------------------------------------------------
# MAC


@dataclass(frozen=True)
class MacKey:
    s1: int
    s2: int
    m: int

    def __post_init__(self):
        if self.s1 >> self.m or self.s2 >> self.m:
            raise LengthError(f"key halves must fit in {self.m} bits")

    @classmethod
    def from_bits(cls, key: BitString) -> MacKey:
        if key.length % 2:
            raise LengthError(f"MAC key must have even length, got {key.length}")
        m = key.length // 2
        return cls(key.value >> m, key.value & ((1 << m) - 1), m)

    def to_bits(self) -> BitString:
        return BitString((self.s1 << self.m) | self.s2, 2 * self.m)


def mac(key: MacKey, b: BitString) -> BitString:
    """Tag ``s1 * b + s2`` over GF(2^m)."""
    if b.length != key.m:
        raise LengthError(f"MAC message has {b.length} bits, key width is {key.m}")
    return BitString(field(key.m).mul(key.s1, b.value) ^ key.s2, key.m)


# ---------------------------------------------------------------------------
# adversaries

View = dict  # "y", "y_prime", "b_prime", "t_prime" -> BitString


@dataclass(frozen=True)
class AdversaryStrategy:
    name: str
    tamper_seed: Callable[[BitString], BitString]
    tamper_auth: Callable[[BitString, BitString, View], tuple[BitString, BitString]]


def _flip_last(b: BitString) -> BitString:
    return BitString(b.value ^ 1, b.length)


def _forged_tag(view: View, m: int) -> BitString:
    data = "|".join(view[k].to_hex() for k in ("y", "y_prime", "b_prime", "t_prime"))
    digest = hashlib.sha256(f"{RNG_ID}|forge|{data}".encode()).digest()
    return BitString(int.from_bytes(digest, "big") >> (256 - m), m)


def _keep(y):
    return y


BUILTIN_STRATEGIES: dict[str, AdversaryStrategy] = {
    "identity": AdversaryStrategy("identity", _keep, lambda b, t, view: (b, t)),
    # flip the first seed bit, then relay Bob's reply untouched
    "seed-bitflip": AdversaryStrategy(
        "seed-bitflip",
        lambda y: BitString(y.value ^ (1 << (y.length - 1)), y.length),
        lambda b, t, view: (b, t),
    ),
    # honest seed, Bob's tag replayed on a different extractor seed
    "replay": AdversaryStrategy("replay", _keep, lambda b, t, view: (_flip_last(b), t)),
    # Bob's seed with a corrupted tag
    "substitute-B": AdversaryStrategy("substitute-B", _keep, lambda b, t, view: (b, _flip_last(t))),
    # a different extractor seed with a tag derived by hashing the view
    "tag-forge-random": AdversaryStrategy(
        "tag-forge-random", _keep, lambda b, t, view: (_flip_last(b), _forged_tag(view, t.length)),
    ),
}


def strategy(name: str) -> AdversaryStrategy:
    try:
        return BUILTIN_STRATEGIES[name]
    except KeyError:
        raise ParameterError(f"unknown strategy {name!r}; built-ins: {sorted(BUILTIN_STRATEGIES)}") from None


# ---------------------------------------------------------------------------
# sessions


@dataclass(frozen=True)
class Frame:
    sender: str
    label: str
    payload: BitString

    def to_json(self) -> list:
        return [self.sender, self.label, self.payload.to_hex()]


@dataclass(frozen=True)
class SessionResult:
    r_a: BitString | None
    r_b: BitString | None
    transcript: tuple[Frame, ...]
    rng_seed: int

    @property
    def accepted(self) -> bool:
        return self.r_a is not None

    @property
    def agree(self) -> bool:
        return self.r_a is not None and self.r_a == self.r_b

    @property
    def q_event(self) -> bool:
        """Both sides output keys and the keys differ."""
        return self.r_a is not None and self.r_b is not None and self.r_a != self.r_b

    def to_json(self) -> dict:
        return {
            "schema": "nmext-session/1",
            "rng": RNG_ID,
            "rng_seed": self.rng_seed,
            "accept": self.accepted,
            "r_a": self.r_a.to_hex() if self.r_a else None,
            "r_b": self.r_b.to_hex() if self.r_b else None,
            "transcript": [f.to_json() for f in self.transcript],
        }


def check_pa_plan(plan: ParamPlan) -> None:
    if plan.variant != "seeded" or not plan.m_mac:
        raise ParameterError("privacy amplification needs a seeded plan with m_mac set")
    if plan.l_len < 2 * plan.m_mac:
        raise ParameterError(f"extractor output {plan.l_len} bits is shorter than the 2m={2 * plan.m_mac} bit key")


def _key(plan: ParamPlan, l_value: int) -> MacKey:
    return MacKey.from_bits(BitString(l_value >> (plan.l_len - 2 * plan.m_mac), 2 * plan.m_mac))


def _draw(plan: ParamPlan, rng_seed: int) -> tuple[BitString, BitString]:
    rng = CounterRNG(rng_seed)
    return rng.bitstring(plan.d, "alice/Y"), rng.bitstring(plan.m_mac, "bob/B'")


def _finish(x: BitString, y: BitString, y_prime: BitString, b_prime: BitString,
            l_alice: int, l_bob: int, adv: AdversaryStrategy, plan: ParamPlan,
            rng_seed: int) -> SessionResult:
    pa_ext = extractor(plan.spec("PA-Ext"))
    r_b = BitString(pa_ext(x.value, b_prime.value), plan.z_out)
    t_prime = mac(_key(plan, l_bob), b_prime)
    view = {"y": y, "y_prime": y_prime, "b_prime": b_prime, "t_prime": t_prime}
    b, t = adv.tamper_auth(b_prime, t_prime, view)
    if b.length != plan.m_mac or t.length != plan.m_mac:
        raise LengthError("adversary returned a B/T pair of the wrong width")
    r_a = None
    if t == mac(_key(plan, l_alice), b):
        r_a = BitString(pa_ext(x.value, b.value), plan.z_out)
    transcript = (
        Frame("alice", "Y", y),
        Frame("channel", "Y'", y_prime),
        Frame("bob", "B'", b_prime),
        Frame("bob", "T'", t_prime),
        Frame("channel", "B", b),
        Frame("channel", "T", t),
    )
    return SessionResult(r_a, r_b, transcript, rng_seed)


def run_pa(x: BitString, adv: AdversaryStrategy | str, plan: ParamPlan, rng_seed: int) -> SessionResult:
    """One protocol session against ``adv``."""
    check_pa_plan(plan)
    if isinstance(adv, str):
        adv = strategy(adv)
    if x.length != plan.n:
        raise LengthError(f"x has {x.length} bits, plan expects {plan.n}")
    y, b_prime = _draw(plan, rng_seed)
    y_prime = adv.tamper_seed(y)
    if y_prime.length != plan.d:
        raise LengthError("adversary returned a seed of the wrong width")
    eng = engine(plan)
    l_alice = eng.seeded(x.value, y.value)
    l_bob = l_alice if y_prime == y else eng.seeded(x.value, y_prime.value)
    return _finish(x, y, y_prime, b_prime, l_alice, l_bob, adv, plan, rng_seed)


# ---------------------------------------------------------------------------
# Monte Carlo robustness


@dataclass(frozen=True)
class UniformSource:
    """Uniform ``n``-bit secret, sampled without materializing 2^n atoms."""

    n: int

    def sample(self, rng: CounterRNG) -> int:
        return rng.bits(self.n, "source/x")


def sample_source(source, rng: CounterRNG) -> int:
    if isinstance(source, JointDist):
        return source.sample(rng.bits(64, "source/atom"))[0]
    return source.sample(rng)


@dataclass
class RobustnessReport:
    strategy: str
    trials: int
    rng_seed: int
    m: int
    q_count: int = 0
    reject_count: int = 0
    agree_count: int = 0
    extra: dict = dc_field(default_factory=dict)

    @property
    def q_rate(self) -> float:
        return self.q_count / self.trials

    @property
    def bound(self) -> float:
        return 2.0 ** -self.m

    @property
    def sigma(self) -> float:
        p = self.bound
        return math.sqrt(p * (1 - p) / self.trials)

    @property
    def threshold(self) -> float:
        return self.bound + 3 * self.sigma

    @property
    def passed(self) -> bool:
        return self.q_rate <= self.threshold

    def to_json(self) -> dict:
        return {
            "schema": "nmext-robustness/1",
            "strategy": self.strategy,
            "trials": self.trials,
            "rng": RNG_ID,
            "rng_seed": self.rng_seed,
            "q_count": self.q_count,
            "reject_count": self.reject_count,
            "agree_count": self.agree_count,
            "q_rate": self.q_rate,
            "reject_rate": self.reject_count / self.trials,
            "agree_rate": self.agree_count / self.trials,
            "bound": self.bound,
            "threshold": self.threshold,
            "passed": self.passed,
        }


def _extract_all(plan: ParamPlan, xs: list[int], ys: list[int], vectorized: bool) -> list[int]:
    if vectorized:
        from .batch import evaluate_many

        return evaluate_many(plan, xs, ys)
    eng = engine(plan)
    return [eng.seeded(x, y) for x, y in zip(xs, ys)]


@dataclass(frozen=True)
class _Trials:
    seeds: list[int]
    xs: list[BitString]
    ys: list[BitString]
    b_primes: list[BitString]
    l_honest: list[int]


def _prepare(x_source, plan: ParamPlan, trials: int, rng_seed: int, vectorized: bool) -> _Trials:
    seeds, xs, ys, bs = [], [], [], []
    for i in range(trials):
        seed = derive_seed(rng_seed, i)
        seeds.append(seed)
        xs.append(BitString(sample_source(x_source, CounterRNG(seed)), plan.n))
        y, b_prime = _draw(plan, seed)
        ys.append(y)
        bs.append(b_prime)
    l_honest = _extract_all(plan, [x.value for x in xs], [y.value for y in ys], vectorized)
    return _Trials(seeds, xs, ys, bs, l_honest)


def _score(tr: _Trials, adv: AdversaryStrategy, plan: ParamPlan, rng_seed: int,
           vectorized: bool) -> RobustnessReport:
    report = RobustnessReport(adv.name, len(tr.seeds), rng_seed, plan.m_mac)
    y_primes = [adv.tamper_seed(y) for y in tr.ys]
    moved = [i for i, (y, yp) in enumerate(zip(tr.ys, y_primes)) if y != yp]
    l_bob = list(tr.l_honest)
    tampered = _extract_all(plan, [tr.xs[i].value for i in moved], [y_primes[i].value for i in moved], vectorized)
    for i, v in zip(moved, tampered):
        l_bob[i] = v
    for i, seed in enumerate(tr.seeds):
        res = _finish(tr.xs[i], tr.ys[i], y_primes[i], tr.b_primes[i], tr.l_honest[i], l_bob[i], adv, plan, seed)
        report.q_count += res.q_event
        report.reject_count += not res.accepted
        report.agree_count += res.agree
    return report


def eval_robustness(x_source, adv: AdversaryStrategy | str, plan: ParamPlan, trials: int,
                    rng_seed: int = 0, vectorized: bool = True) -> RobustnessReport:
    """Run ``trials`` independent sessions and count outcomes.

    Trial ``i`` samples its secret and runs :func:`run_pa` with session seed
    ``derive_seed(rng_seed, i)``.  ``vectorized`` evaluates all extractor
    calls in numpy batches first; the outcomes are identical either way.
    """
    return eval_suite(x_source, [adv], plan, trials, rng_seed, vectorized)[0]


def eval_suite(x_source, strategies, plan: ParamPlan, trials: int, rng_seed: int = 0,
               vectorized: bool = True) -> list[RobustnessReport]:
    """:func:`eval_robustness` for several strategies on the same trials.

    The honest extractor outputs are computed once and shared.
    """
    check_pa_plan(plan)
    if trials < 1:
        raise ParameterError("trials must be >= 1")
    advs = [strategy(a) if isinstance(a, str) else a for a in strategies]
    tr = _prepare(x_source, plan, trials, rng_seed, vectorized)
    return [_score(tr, adv, plan, rng_seed, vectorized) for adv in advs]


# ---------------------------------------------------------------------------
# exact transcript analysis on micro plans


@dataclass(frozen=True)
class TranscriptReport:
    guess_before: Fraction  # optimal guessing probability of X given E
    guess_after: Fraction  # ... given E and the full transcript
    alice_bits: int
    dependent_bits: int
    extraction_distance: Fraction

    @property
    def h_before(self) -> float:
        return -math.log2(self.guess_before)

    @property
    def h_after(self) -> float:
        return -math.log2(self.guess_after)

    @property
    def holds(self) -> bool:
        """``H(X|E,transcript) >= H(X|E) - |Y|``, checked on exact rationals."""
        return self.guess_after <= self.guess_before * (1 << self.alice_bits)

    @property
    def holds_tight(self) -> bool:
        """Same bound charging the tag, the only message that depends on ``X``."""
        return self.guess_after <= self.guess_before * (1 << self.dependent_bits)

    def to_json(self) -> dict:
        return {
            "schema": "nmext-entropy-loss/1",
            "h_before": self.h_before,
            "h_after": self.h_after,
            "guess_before": [self.guess_before.numerator, self.guess_before.denominator],
            "guess_after": [self.guess_after.numerator, self.guess_after.denominator],
            "alice_bits": self.alice_bits,
            "dependent_bits": self.dependent_bits,
            "bound": self.h_before - self.alice_bits,
            "bound_tight": self.h_before - self.dependent_bits,
            "holds": self.holds,
            "holds_tight": self.holds_tight,
            "extraction_distance": float(self.extraction_distance),
        }


def transcript_analysis(source: JointDist, adv: AdversaryStrategy | str, plan: ParamPlan,
                        budget: int | None = None) -> TranscriptReport:
    """Exact law of ``(X, E, transcript)`` over every seed pair ``(Y, B')``.

    Reports the min-entropy of ``X`` before and after the transcript, and the
    distance of Bob's key from uniform given ``E`` and the transcript.
    """
    from .errors import BudgetExceeded

    check_pa_plan(plan)
    if isinstance(adv, str):
        adv = strategy(adv)
    budget = plan.budget if budget is None else budget
    n_y, n_b = 1 << plan.d, 1 << plan.m_mac
    needed = len(source.atoms) * n_y * n_b
    if needed > budget:
        raise BudgetExceeded(needed, budget)
    eng = engine(plan)
    weights, den = source.integer_weights()
    after: dict = {}
    keys: dict = {}
    cache: dict = {}

    def nm(x, y):
        v = cache.get((x, y))
        if v is None:
            v = cache[(x, y)] = eng.seeded(x, y)
        return v

    for (x, e, _), w in weights:
        xb = BitString(x, plan.n)
        for yv in range(n_y):
            y = BitString(yv, plan.d)
            y_prime = adv.tamper_seed(y)
            la, lb = nm(x, yv), nm(x, y_prime.value)
            for bv in range(n_b):
                res = _finish(xb, y, y_prime, BitString(bv, plan.m_mac), la, lb, adv, plan, 0)
                ctx = (e, tuple(f.payload.value for f in res.transcript))
                after[(ctx, x)] = after.get((ctx, x), 0) + w
                row = keys.setdefault(ctx, {})
                row[res.r_b.value] = row.get(res.r_b.value, 0) + w
    best: dict = {}
    for (ctx, _), w in after.items():
        best[ctx] = max(best.get(ctx, 0), w)
    total = den * n_y * n_b
    return TranscriptReport(
        guess_before=guessing_prob(source, "x", ("e",)),
        guess_after=Fraction(sum(best.values()), total),
        alice_bits=plan.d,
        dependent_bits=plan.m_mac,
        extraction_distance=_distance_from_counts(keys, plan.z_out, total),
    )
