"""End-to-end acceptance criteria, one test per criterion.

Each test prints a ``PASS``/``FAIL criterion N`` line (visible even under
output capture) before asserting, so the log always carries the verdict.
"""

import random
import time

import pytest
from click.testing import CliRunner

from straight_line import PIPELINES, matches

from nmext.bits import BitString
from nmext.cli import main
from nmext.pipeline import run_traced
from nmext.presets import family, micro_plan
from nmext.protocol import UniformSource, eval_suite
from nmext.verify import SuiteReport, baseline_checks, run_suite, structural_checks


@pytest.fixture
def verdict(capsys):
    def report(number, ok, elapsed, limit=None, detail=""):
        timely = limit is None or elapsed < limit
        status = "PASS" if ok and timely else "FAIL"
        budget = f" (limit {limit:g} s)" if limit is not None else ""
        with capsys.disabled():
            print(f"\n{status} criterion {number}: {elapsed:.1f} s{budget} {detail}".rstrip())
        assert ok, detail
        assert timely, f"took {elapsed:.1f} s, limit {limit} s"
    return report


def timed_suite(name, **kw):
    start = time.perf_counter()
    rep = run_suite(name, **kw)
    return rep, time.perf_counter() - start


def failures(rep):
    return [c.name for c in rep.checks if not c.passed]


def test_criterion_1_mac_exactness(verdict):
    rep, dt = timed_suite("mac")
    verdict(1, rep.passed, dt, 1, f"failed={failures(rep)}")


def test_criterion_2_ecc_distance(verdict):
    rep, dt = timed_suite("ecc")
    verdict(2, rep.passed, dt, 5, f"failed={failures(rep)}")


def test_criterion_3_weak_design(verdict):
    rep, dt = timed_suite("design")
    verdict(3, rep.passed, dt, 5, f"failed={failures(rep)}")


def test_criterion_4_extractor_strongness(verdict):
    rep, dt = timed_suite("ext")
    verdict(4, rep.passed, dt, 60, f"failed={failures(rep)}")


def test_criterion_5_structural_suite(verdict):
    start = time.perf_counter()
    rep = SuiteReport("structural")
    bad_traces = []
    for variant in PIPELINES:
        structural_checks(rep, variant)
        for label, plan in family(variant):
            rng = random.Random(label)
            for _ in range(32):
                x = BitString(rng.getrandbits(plan.n), plan.n)
                y = BitString(rng.getrandbits(plan.y_len), plan.y_len)
                _, trace = run_traced(plan, x, y)
                if matches(trace, PIPELINES[variant](plan, x, y)):
                    bad_traces.append(label)
    ok = rep.passed and not bad_traces
    verdict(5, ok, time.perf_counter() - start, 120, f"failed={failures(rep)} trace_mismatch={sorted(set(bad_traces))}")


def test_criterion_6_oracle_regression(verdict):
    start = time.perf_counter()
    rep = SuiteReport("baselines")
    for variant in PIPELINES:
        baseline_checks(rep, variant)
    instances = sum(1 for c in rep.checks if c.name.endswith("exact baselines"))
    ok = rep.passed and instances >= 12
    verdict(6, ok, time.perf_counter() - start, 600, f"instances={instances} failed={failures(rep)}")


def test_criterion_7_pa_correctness(verdict):
    start = time.perf_counter()
    (r,) = eval_suite(UniformSource(128), ["identity"], micro_plan("pa"), 10_000, rng_seed=2026)
    ok = r.agree_count == r.trials == 10_000
    verdict(7, ok, time.perf_counter() - start, detail=f"agree={r.agree_count}/{r.trials}")


def test_criterion_8_pa_robustness(verdict):
    start = time.perf_counter()
    plan = micro_plan("pa")
    attacks = ["seed-bitflip", "replay", "substitute-B", "tag-forge-random"]
    reports = eval_suite(UniformSource(plan.n), attacks, plan, 100_000, rng_seed=2026)
    ok = plan.m_mac == 8 and all(r.passed for r in reports)
    rates = " ".join(f"{r.strategy}={r.q_rate:.5f}" for r in reports)
    verdict(8, ok, time.perf_counter() - start, detail=f"threshold={reports[0].threshold:.5f} {rates}")


def test_criterion_9_entropy_loss(verdict):
    rep, dt = timed_suite("entropy-loss")
    instances = sum(1 for c in rep.checks if c.name.endswith("before - |Y|"))
    verdict(9, rep.passed and instances >= 3, dt, detail=f"instances={instances} failed={failures(rep)}")


def test_criterion_10_cli_replay(verdict, tmp_path):
    start = time.perf_counter()
    runner = CliRunner()
    seeded, pa = tmp_path / "seeded.json", tmp_path / "pa.json"
    seeded.write_text(micro_plan("seeded").dumps())
    pa.write_text(micro_plan("pa").dumps())
    commands = [
        ["plan", "--preset", "t_two_source"],
        ["plan", "--n", str(10 ** 15), "--k", str(10 ** 15 // 2)],
        ["plan", "--n", "1000", "--k", "100"],
        ["run", "--plan", str(seeded), "--x", "8:a5", "--y", "8:3c", "--trace"],
        ["run", "--plan", str(pa), "--x", "128:" + "5a" * 16, "--strategy", "seed-bitflip", "--rng-seed", "7"],
        ["run", "--plan", str(pa), "--strategy", "replay", "--trials", "300", "--rng-seed", "7"],
        ["verify", "mac"],
        ["verify", "ecc"],
        ["verify", "design"],
        ["verify", "pa", "--trials", "300", "--rng-seed", "7"],
        ["verify", "nmext", "--budget", "10"],
    ]
    unstable = []
    for args in commands:
        seen = {(r.exit_code, r.output) for r in (runner.invoke(main, args) for _ in range(5))}
        if len(seen) != 1:
            unstable.append(" ".join(args[:2]))
    verdict(10, not unstable, time.perf_counter() - start, detail=f"commands={len(commands)} unstable={unstable}")
