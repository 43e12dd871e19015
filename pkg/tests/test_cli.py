import json

import pytest
from click.testing import CliRunner

from nmext import verify
from nmext.cli import main
from nmext.presets import micro_plan


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def plan_file(tmp_path):
    def write(name):
        path = tmp_path / f"{name}.json"
        path.write_text(micro_plan(name).dumps())
        return str(path)
    return write


def test_plan_from_preset(runner, tmp_path):
    out = tmp_path / "p.json"
    res = runner.invoke(main, ["plan", "--preset", "seeded", "-o", str(out)])
    assert res.exit_code == 0
    assert json.loads(res.output) == json.loads(out.read_text())
    assert json.loads(res.output)["variant"] == "seeded"


def test_plan_micro_override(runner):
    res = runner.invoke(main, ["plan", "--preset", "seeded", "--micro", "d=12", "--micro", '{"d1": 6, "d2": 6}'])
    assert res.exit_code == 0, res.output
    plan = json.loads(res.output)
    assert (plan["d"], plan["d1"], plan["d2"]) == (12, 6, 6)


def test_infeasible_plan_is_a_usage_error(runner):
    res = runner.invoke(main, ["plan", "--n", "1000", "--k", "100", "--eps", "0.1"])
    assert res.exit_code == 2
    assert "k >= 5d" in res.output


def test_run_prints_output_and_trace(runner, plan_file):
    path = plan_file("seeded")
    res = runner.invoke(main, ["run", "--plan", path, "--x", "8:a5", "--y", "3c"])
    assert res.exit_code == 0, res.output
    out = res.output.strip()
    traced = runner.invoke(main, ["run", "--plan", path, "--x", "8:a5", "--y", "3c", "--trace"])
    assert json.loads(traced.output)["l"] == out


def test_run_reports_length_mismatch_in_bytes(runner, plan_file):
    res = runner.invoke(main, ["run", "--plan", plan_file("seeded"), "--x", "16:a5a5", "--y", "3c"])
    assert res.exit_code == 2
    assert "2 bytes" in res.output and "1 bytes" in res.output


def test_run_protocol_session_and_trials(runner, plan_file):
    path = plan_file("pa")
    x = "128:" + "0f" * 16
    res = runner.invoke(main, ["run", "--plan", path, "--x", x, "--strategy", "identity", "--rng-seed", "3"])
    assert res.exit_code == 0, res.output
    assert json.loads(res.output)["accept"] is True
    res = runner.invoke(main, ["run", "--plan", path, "--strategy", "replay", "--trials", "20"])
    assert json.loads(res.output)["trials"] == 20
    res = runner.invoke(main, ["run", "--plan", path, "--x", x, "--strategy", "unknown"])
    assert res.exit_code == 2


def test_verify_passes(runner):
    res = runner.invoke(main, ["verify", "mac"])
    assert res.exit_code == 0
    assert json.loads(res.output)["passed"] is True


def test_verify_failure_exit_code(runner, monkeypatch):
    monkeypatch.setattr(verify, "mac_forgery_table", lambda m: (0, 2))
    res = runner.invoke(main, ["verify", "mac"])
    assert res.exit_code == 1
    assert json.loads(res.output)["passed"] is False


def test_verify_budget_refusal(runner):
    res = runner.invoke(main, ["verify", "nmext", "--budget", "10"])
    assert res.exit_code == 3


def test_budget_flag_rejected_for_non_oracle_suite(runner):
    assert runner.invoke(main, ["verify", "ecc", "--budget", "10"]).exit_code == 2


def test_reruns_are_byte_identical(runner, plan_file):
    path = plan_file("two_source")
    args = ["run", "--plan", path, "--x", "20:abcde", "--y", "20:13579", "--trace"]
    outputs = {runner.invoke(main, args).output for _ in range(3)}
    assert len(outputs) == 1
