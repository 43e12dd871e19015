from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nmext.baselines import BASELINES, NM_INSTANCES, compute, make_map, make_source, make_tampers
from nmext.errors import BudgetExceeded, ParameterError
from nmext.nmext import engine
from nmext.oracle import (FlatSource, JointDist, guessing_prob, min_entropy_cond, nm_distance, nm_distances,
                          pattern_flat_source, point_mass, prefix_flat_source, rational_json, stat_dist)
from nmext.presets import micro_plan


def tables(size=4):
    weights = st.lists(st.integers(0, 20), min_size=size, max_size=size).filter(any)
    return weights.map(lambda w: {i: Fraction(v, sum(w)) for i, v in enumerate(w)})


# -- statistical distance -------------------------------------------------------

def test_distance_examples():
    uniform = {0: Fraction(1, 2), 1: Fraction(1, 2)}
    assert stat_dist(uniform, uniform) == 0
    assert stat_dist({0: 1}, uniform) == Fraction(1, 2)


def test_distance_summation_order_irrelevant():
    p = {0: Fraction(1, 3), 1: Fraction(1, 6), 2: Fraction(1, 4), 3: Fraction(1, 4)}
    q = {0: Fraction(1, 8), 1: Fraction(3, 8), 2: Fraction(1, 8), 3: Fraction(3, 8)}
    by_hand = sum(abs(p[i] - q[i]) for i in reversed(range(4))) / 2
    assert stat_dist(p, q) == by_hand == Fraction(1, 3)


@given(tables(), tables(), tables())
def test_distance_is_a_metric(p, q, r):
    assert stat_dist(p, q) == stat_dist(q, p)
    assert stat_dist(p, p) == 0
    assert stat_dist(p, r) <= stat_dist(p, q) + stat_dist(q, r)
    assert 0 <= stat_dist(p, q) <= 1


# -- min-entropy ------------------------------------------------------------------

def test_min_entropy_examples():
    assert min_entropy_cond(JointDist.uniform(5)) == 5
    leaky = JointDist.flat(range(16), 4, side=lambda x: x)
    assert min_entropy_cond(leaky) == 0


def test_min_entropy_crafted_table():
    d = JointDist.from_table({
        (0, "a", None): Fraction(1, 2),
        (1, "a", None): Fraction(1, 4),
        (2, "b", None): Fraction(1, 4),
    }, 2)
    assert guessing_prob(d) == Fraction(3, 4)
    assert min_entropy_cond(d) == pytest.approx(-__import__("math").log2(0.75))


def test_conditioning_on_finer_information_never_helps_entropy():
    chain = [lambda x: None, lambda x: x >> 3, lambda x: x >> 1, lambda x: x]
    values = [min_entropy_cond(JointDist.flat(range(16), 4, side=f)) for f in chain]
    assert values == sorted(values, reverse=True)
    assert values[0] == 4 and values[-1] == 0


def test_flat_source_families():
    for e in range(0, 9):
        src = prefix_flat_source(8, e)
        assert src.entropy == e
        assert min_entropy_cond(src.dist()) == e
    assert prefix_flat_source(8, 3).support <= prefix_flat_source(8, 5).support
    spread = pattern_flat_source(8, (0, 7))
    assert spread.support == frozenset({0, 1, 128, 129})
    assert isinstance(spread, FlatSource)


def test_joint_dist_checks_and_json():
    with pytest.raises(ParameterError):
        JointDist((((0, None, None), Fraction(1, 2)),), 1)
    d = JointDist.flat([1, 2, 3], 2, side=lambda x: x & 1)
    assert JointDist.from_json(d.to_json()) == d
    assert rational_json(Fraction(1, 4)) == {"num": 1, "den": 4, "float": 0.25}


def test_sampling_follows_cumulative_mass():
    d = JointDist.from_table({(0, None, None): Fraction(1, 4), (1, None, None): Fraction(3, 4)}, 1)
    assert d.sample(0, 2)[0] == 0
    assert d.sample(1, 2)[0] == 1
    assert d.sample(3, 2)[0] == 1


# -- non-malleability ---------------------------------------------------------------

def test_point_mass_distance_is_one_minus_uniform_mass():
    plan = micro_plan("two_source")
    source = JointDist((((0x12345, None, 0x0F0F0), Fraction(1)),), 20, 20)
    assert nm_distance(source, [], plan, side="y") == 1 - Fraction(1, 1 << plan.l_len)


def test_tamper_without_effect_reveals_the_output():
    # an evaluator that ignores the last seed bit gives L' = L under a
    # last-bit flip, so conditioning on L' pins L down completely
    plan = micro_plan("seeded")
    eng = engine(plan)
    got = nm_distance(JointDist.uniform(8), [lambda y: y ^ 1], plan,
                      evaluate=lambda x, y: eng.seeded(x, y & ~1))
    assert got == 1 - Fraction(1, 1 << plan.l_len)


def test_fixed_points_are_rejected():
    plan = micro_plan("seeded")
    with pytest.raises(ParameterError):
        nm_distance(JointDist.uniform(8), [lambda y: y & ~1], plan)
    plan2 = micro_plan("two_source")
    src = JointDist.product([0, 1], [0, 1], 20, 20)
    with pytest.raises(ParameterError):
        nm_distance(src, [(lambda x: x & ~1, lambda y: y & ~1)], plan2)
    with pytest.raises(ParameterError):
        make_map(("add", 256), 8)


def test_budget_is_a_hard_limit():
    plan = micro_plan("seeded")
    with pytest.raises(BudgetExceeded):
        nm_distance(JointDist.uniform(8), [lambda y: y ^ 1], plan, budget=1000)


def test_seeded_variant_has_no_x_side():
    with pytest.raises(ParameterError):
        nm_distances(point_mass(0, 8), [], micro_plan("seeded"), sides=("x",))


def test_single_side_matches_joint_computation():
    inst = next(i for i in NM_INSTANCES if i.name == "two-source-both")
    plan = micro_plan(inst.preset)
    src = make_source(inst.source, plan)
    tampers = make_tampers(inst, plan)
    both = nm_distances(src, tampers, plan, ("x", "y"))
    assert both["y"] == nm_distance(src, tampers, plan, side="y")


@pytest.mark.parametrize("inst", [i for i in NM_INSTANCES if i.preset == "seeded"], ids=lambda i: i.name)
def test_seeded_baselines(inst):
    got = compute(inst)
    assert {k: str(v) for k, v in got.items()} == BASELINES[inst.name]
    assert got["y/plain"] <= got["y"]
