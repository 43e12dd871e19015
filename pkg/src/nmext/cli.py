"""Command-line interface: ``nmext plan | run | verify``.

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 enumeration budget refused.  Every command is deterministic given its
flags; the only randomness is derived from ``--rng-seed``.
"""

from __future__ import annotations

import json
import sys

import click

from .bits import BitString
from .errors import BudgetExceeded, LengthError, NmExtError, ParameterError, PlanError
from .plan import VARIANTS, ParamPlan, plan_params
from .presets import MICRO, micro_plan

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def _emit(obj) -> None:
    click.echo(json.dumps(obj, indent=2, sort_keys=True))


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _parse_micro(items: tuple[str, ...]) -> dict | None:
    if not items:
        return None
    out: dict = {}
    for item in items:
        if item.lstrip().startswith("{"):
            out.update(json.loads(item))
            continue
        key, sep, value = item.partition("=")
        if not sep:
            raise click.BadParameter(f"expected KEY=VALUE or a JSON object, got {item!r}", param_hint="--micro")
        out[key.strip()] = int(value)
    return out


def _bits(text: str, length: int, name: str) -> BitString:
    """``len:hex`` strings, or bare hex read as exactly ``length`` bits."""
    if ":" in text:
        bits = BitString.from_hex(text)
    else:
        digits = (length + 3) // 4
        if len(text) != digits:
            raise LengthError(f"{name} needs {digits} hex digits for {length} bits, got {len(text)}")
        bits = BitString.from_hex(f"{length}:{text}")
    if bits.length != length:
        raise LengthError(
            f"{name} has {bits.length} bits ({(bits.length + 7) // 8} bytes), "
            f"plan expects {length} bits ({(length + 7) // 8} bytes)"
        )
    return bits


def _load_plan(path: str) -> ParamPlan:
    with open(path, encoding="utf-8") as fh:
        return ParamPlan.loads(fh.read())


@click.group()
def main():
    """Non-malleable extractors and privacy amplification at desk scale."""


@main.command("plan")
@click.option("--n", type=int, help="Source length in bits.")
@click.option("--eps", type=float, default=0.25, show_default=True, help="Target error.")
@click.option("--k", type=int, help="Min-entropy of the source.")
@click.option("--variant", type=click.Choice(VARIANTS), default="seeded", show_default=True)
@click.option("--t", "t", type=int, default=1, show_default=True, help="Number of tampered copies.")
@click.option("--micro", multiple=True, help="Length override KEY=VALUE or a JSON object; repeatable.")
@click.option("--m-mac", type=int, default=0, help="MAC width for protocol plans.")
@click.option("--z-out", type=int, default=0, help="Final key length for protocol plans.")
@click.option("--preset", type=click.Choice(sorted(MICRO)), help="Start from a named micro plan.")
@click.option("-o", "--output", type=click.Path(dir_okay=False, writable=True), help="Write the plan here.")
def cmd_plan(n, eps, k, variant, t, micro, m_mac, z_out, preset, output):
    """Build and validate a parameter plan; print it as JSON."""
    overrides = _parse_micro(micro)
    try:
        if preset:
            kw = {"micro": overrides} if overrides else {}
            plan = micro_plan(preset, **kw)
        else:
            if n is None or k is None:
                raise click.UsageError("--n and --k are required without --preset")
            plan = plan_params(n, eps, k, variant, t, micro=overrides, m_mac=m_mac, z_out=z_out)
    except PlanError as exc:
        _fail(f"infeasible plan: {exc.constraint}" + (f" ({exc.detail})" if exc.detail else ""), EXIT_USAGE)
    except ParameterError as exc:
        _fail(str(exc), EXIT_USAGE)
    text = plan.dumps()
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    click.echo(text)


@main.command("run")
@click.option("--plan", "plan_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--x", "x_hex", help="First input as len:hex (or bare hex).")
@click.option("--y", "y_hex", help="Second input (seed or second source).")
@click.option("--trace", is_flag=True, help="Print the full intermediate trace as JSON.")
@click.option("--strategy", help="Run the privacy-amplification protocol against this adversary.")
@click.option("--trials", type=int, help="Protocol only: Monte Carlo trials over a uniform secret.")
@click.option("--rng-seed", type=int, default=0, show_default=True)
def cmd_run(plan_path, x_hex, y_hex, trace, strategy, trials, rng_seed):
    """Evaluate an extractor, or run protocol sessions with --strategy."""
    from .pipeline import run_traced
    from .protocol import UniformSource, eval_robustness, run_pa

    try:
        plan = _load_plan(plan_path)
        if strategy:
            if trials:
                _emit(eval_robustness(UniformSource(plan.n), strategy, plan, trials, rng_seed).to_json())
                return
            if not x_hex:
                raise click.UsageError("--x is required for a single protocol session")
            _emit(run_pa(_bits(x_hex, plan.n, "x"), strategy, plan, rng_seed).to_json())
            return
        if not (x_hex and y_hex):
            raise click.UsageError("--x and --y are required")
        x = _bits(x_hex, plan.n, "x")
        y = _bits(y_hex, plan.y_len, "y")
        out, tr = run_traced(plan, x, y)
    except (LengthError, PlanError, ParameterError) as exc:
        _fail(str(exc), EXIT_USAGE)
    if trace:
        _emit(tr.to_json())
    else:
        click.echo(out.to_hex())


@main.command("verify")
@click.argument("suite", type=click.Choice(
    ["mac", "ecc", "design", "ext", "nmext", "2nmext", "t", "pa", "entropy-loss"]))
@click.option("--rng-seed", type=int, default=0, show_default=True, help="Seed for the pa suite.")
@click.option("--trials", type=int, help="Trials per adversary for the pa suite.")
@click.option("--budget", type=int, help="Enumeration budget for oracle suites.")
def cmd_verify(suite, rng_seed, trials, budget):
    """Run a verification suite and print its report."""
    from .verify import run_suite

    kwargs: dict = {}
    if suite == "pa":
        kwargs["rng_seed"] = rng_seed
        if trials:
            kwargs["trials"] = trials
    elif budget is not None:
        if suite not in ("nmext", "2nmext", "t", "entropy-loss"):
            raise click.UsageError(f"--budget does not apply to suite {suite!r}")
        kwargs["budget"] = budget
    try:
        report = run_suite(suite, **kwargs)
    except BudgetExceeded as exc:
        _fail(str(exc), EXIT_BUDGET)
    except NmExtError as exc:
        _fail(str(exc), EXIT_USAGE)
    _emit(report.to_json())
    if report.refused:
        click.echo(f"budget refused: {report.refused}", err=True)
        sys.exit(EXIT_BUDGET)
    sys.exit(EXIT_OK if report.passed else EXIT_FAIL)


if __name__ == "__main__":
    main()
