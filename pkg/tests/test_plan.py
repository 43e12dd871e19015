import json
from dataclasses import replace

import pytest

from nmext.errors import PlanError
from nmext.plan import ParamPlan, output_length, plan_params, validate
from nmext.presets import FAMILIES, MICRO, family, micro_plan
from nmext.trevisan import ExtSpec


@pytest.mark.parametrize("name", sorted(MICRO))
def test_presets_validate_and_round_trip(name):
    plan = micro_plan(name)
    validate(plan)
    back = ParamPlan.loads(plan.dumps())
    assert back == plan
    assert back.dumps() == plan.dumps()


def test_plan_json_is_deterministic():
    assert micro_plan("two_source").dumps() == micro_plan("two_source").dumps()
    obj = json.loads(micro_plan("seeded").dumps())
    assert obj["schema"] == "nmext-plan/1"
    assert obj["mode"] == "micro"


@pytest.mark.parametrize("variant,n,k,t,want", [
    ("seeded", 8, 4, 1, 1),
    ("two_source", 20, 6, 1, 5),
    ("t_seeded", 16, 16, 2, 1),
    ("t_two_source", 20, 6, 2, 2),
    ("seeded", 1000, 400, 1, 100),
    ("t_seeded", 1000, 800, 5, 20),
])
def test_output_lengths(variant, n, k, t, want):
    assert output_length(variant, n, k, t) == want


def test_feasible_asymptotic_seeded_plan():
    n = 10 ** 15
    plan = plan_params(n, 0.25, n // 2)
    assert plan.mode == "asymptotic"
    assert plan.k >= 5 * plan.d
    assert plan.l_len == plan.k // 4


def test_asymptotic_infeasibility_names_constraint():
    with pytest.raises(PlanError) as err:
        plan_params(1000, 0.1, 100)
    assert err.value.constraint == "k >= 5d"


def test_micro_wiring_error_names_producer():
    plan = micro_plan("seeded")
    bad = dict(plan.specs)
    bad["Ext2"] = replace(bad["Ext2"], d_seed=plan.b + 2)
    with pytest.raises(PlanError) as err:
        validate(replace(plan, specs=bad))
    assert err.value.constraint == "wiring Ext2.d_seed"
    assert "Ext1" in err.value.detail


def test_unrealizable_micro_override():
    with pytest.raises(PlanError) as err:
        micro_plan("seeded", micro={"h": 8, "t_len": 8})
    assert "realizable" in err.value.constraint


def test_unknown_micro_key():
    with pytest.raises(PlanError):
        micro_plan("seeded", micro={"bogus": 3})


def test_spec_override_is_applied_and_rechecked():
    plan = micro_plan("two_source", micro={"specs": {"Ext6": {"eps": 0.5}}})
    assert plan.spec("Ext6").eps == 0.5
    with pytest.raises(PlanError):
        micro_plan("two_source", micro={"specs": {"Ext6": {"m_out": 3}}})


def test_pa_plan_requires_room_for_the_key():
    with pytest.raises(PlanError) as err:
        micro_plan("seeded", m_mac=2, z_out=1)
    assert err.value.constraint == "k >= 8m"


def test_default_key_length_needs_a_wide_seed():
    # (1/2 - delta) k = 6 bits cannot come out of a 2-bit extractor seed
    with pytest.raises(PlanError) as err:
        micro_plan("pa_micro", z_out=0)
    assert err.value.constraint == "PA-Ext realizable"


def test_t_is_rejected_outside_t_variants():
    with pytest.raises(PlanError):
        plan_params(8, 0.25, 4, "seeded", t=2, micro=MICRO["seeded"]["micro"])


def test_schema_tag_is_checked():
    obj = json.loads(micro_plan("seeded").dumps())
    obj["schema"] = "other/9"
    with pytest.raises(PlanError):
        ParamPlan.from_json(obj)


@pytest.mark.parametrize("variant", sorted(FAMILIES))
def test_family_plans_differ(variant):
    dumps = {plan.dumps() for _, plan in family(variant)}
    assert len(dumps) == 3


def test_extspec_json_round_trip():
    spec = ExtSpec("Ext1", 16, 8, 3, k_req=6, eps=0.1)
    assert ExtSpec.from_json(spec.to_json()) == spec
