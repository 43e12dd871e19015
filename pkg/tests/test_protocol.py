import json

import pytest

from nmext import baselines as bl
from nmext.bits import BitString
from nmext.errors import LengthError, ParameterError
from nmext.field import field
from nmext.nmext import engine
from nmext.protocol import (BUILTIN_STRATEGIES, CounterRNG, MacKey, UniformSource, derive_seed, eval_robustness,
                            eval_suite, mac, run_pa, strategy, transcript_analysis)
from nmext.presets import micro_plan
from nmext.verify import mac_forgery_table


# -- RNG ----------------------------------------------------------------------

def test_counter_rng_is_reproducible_and_label_separated():
    a, b = CounterRNG(7), CounterRNG(7)
    assert a.bits(100, "x") == b.bits(100, "x")
    assert a.bits(100, "x") != a.bits(100, "y")
    assert CounterRNG(8).bits(100, "x") != a.bits(100, "x")
    assert a.bits(300, "x") < 1 << 300
    assert derive_seed(2026, 0) != derive_seed(2026, 1)


# -- MAC ----------------------------------------------------------------------

def test_mac_degenerate_keys():
    b = BitString(0b1011, 4)
    assert mac(MacKey(0, 0b0110, 4), b).value == 0b0110
    assert mac(MacKey(0b0111, 0b0110, 4), BitString(0, 4)).value == 0b0110


def test_mac_small_field_example():
    # over GF(4): x * (x + 1) = x^2 + x = 1, plus s2 = x gives x + 1
    assert mac(MacKey(0b10, 0b10, 2), BitString(0b11, 2)).value == 0b11


def test_mac_key_bits_round_trip():
    key = MacKey.from_bits(BitString(0xA5, 8))
    assert (key.s1, key.s2, key.m) == (0xA, 0x5, 4)
    assert key.to_bits() == BitString(0xA5, 8)
    with pytest.raises(LengthError):
        MacKey.from_bits(BitString(1, 3))
    with pytest.raises(LengthError):
        mac(key, BitString(0, 3))


@pytest.mark.parametrize("m", [2, 3])
def test_forgery_probability_is_one_over_field_size(m):
    assert mac_forgery_table(m) == (1, 1)
    f = field(m)
    # a fixed pair (b, t) and a different (b2, t2): exactly one s1 fits both
    fits = [s1 for s1 in range(1 << m) for s2 in range(1 << m)
            if (f.mul(s1, 1) ^ s2) == 0 and (f.mul(s1, 2) ^ s2) == 1]
    assert len(fits) == 1


# -- sessions -----------------------------------------------------------------

PA = micro_plan("pa")
SECRET = BitString(0x0123456789ABCDEF_FEDCBA9876543210, 128)


def test_identity_session_agrees():
    res = run_pa(SECRET, "identity", PA, 11)
    assert res.accepted and res.agree and not res.q_event
    assert res.r_a.length == PA.z_out
    labels = [f.label for f in res.transcript]
    assert labels == ["Y", "Y'", "B'", "T'", "B", "T"]


def test_session_is_deterministic():
    one = json.dumps(run_pa(SECRET, "tag-forge-random", PA, 5).to_json(), sort_keys=True)
    two = json.dumps(run_pa(SECRET, "tag-forge-random", PA, 5).to_json(), sort_keys=True)
    assert one == two
    assert json.loads(one)["schema"] == "nmext-session/1"


def test_corrupted_tag_is_rejected():
    for seed in range(20):
        res = run_pa(SECRET, "substitute-B", PA, seed)
        assert not res.accepted and not res.q_event
        assert res.r_b is not None


def test_seed_flip_changes_the_derived_key():
    res = run_pa(SECRET, "seed-bitflip", PA, 3)
    y, y_prime = res.transcript[0].payload, res.transcript[1].payload
    assert y.value ^ y_prime.value == 1 << (PA.d - 1)
    eng = engine(PA)
    assert eng.seeded(SECRET.value, y.value) != eng.seeded(SECRET.value, y_prime.value)


def test_session_input_checks():
    with pytest.raises(LengthError):
        run_pa(BitString(0, 8), "identity", PA, 0)
    with pytest.raises(ParameterError):
        run_pa(SECRET, "nope", PA, 0)
    with pytest.raises(ParameterError):
        run_pa(BitString(0, 8), "identity", micro_plan("seeded"), 0)


# -- Monte Carlo ------------------------------------------------------------------

def test_batch_trials_match_single_sessions():
    source = UniformSource(PA.n)
    report = eval_robustness(source, "tag-forge-random", PA, 40, rng_seed=9)
    q = rejects = 0
    for i in range(40):
        seed = derive_seed(9, i)
        x = BitString(source.sample(CounterRNG(seed)), PA.n)
        res = run_pa(x, "tag-forge-random", PA, seed)
        q += res.q_event
        rejects += not res.accepted
    assert (report.q_count, report.reject_count) == (q, rejects)


def test_vectorized_and_scalar_counts_agree():
    source = UniformSource(PA.n)
    fast = eval_suite(source, list(BUILTIN_STRATEGIES), PA, 200, rng_seed=1)
    slow = eval_suite(source, list(BUILTIN_STRATEGIES), PA, 200, rng_seed=1, vectorized=False)
    assert [r.to_json() for r in fast] == [r.to_json() for r in slow]


def test_suite_equals_separate_runs():
    source = UniformSource(PA.n)
    joint = eval_suite(source, ["replay", "identity"], PA, 100, rng_seed=4)
    alone = [eval_robustness(source, s, PA, 100, rng_seed=4) for s in ("replay", "identity")]
    assert [r.to_json() for r in joint] == [r.to_json() for r in alone]


def test_report_threshold():
    r = eval_robustness(UniformSource(PA.n), "identity", PA, 50)
    assert r.agree_count == 50 and r.q_count == 0
    assert r.bound == 2.0 ** -PA.m_mac
    assert r.threshold > r.bound and r.passed
    with pytest.raises(ParameterError):
        eval_robustness(UniformSource(PA.n), "identity", PA, 0)


def test_strategy_lookup():
    assert strategy("replay") is BUILTIN_STRATEGIES["replay"]


# -- exact transcript analysis ------------------------------------------------------

@pytest.mark.parametrize("inst", bl.ENTROPY_INSTANCES[:2], ids=lambda i: i[0])
def test_transcript_entropy_loss(inst):
    plan = micro_plan("pa_micro")
    r = transcript_analysis(bl.entropy_source(inst, plan), inst[3], plan)
    want = bl.ENTROPY_BASELINES[inst[0]]
    assert str(r.guess_after) == want["guess_after"]
    assert str(r.extraction_distance) == want["extraction_distance"]
    assert r.holds and r.holds_tight
    assert r.guess_after >= r.guess_before
