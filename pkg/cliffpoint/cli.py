"""Click command line for cliffpoint."""

import csv
import io
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional

import click
from mpmath import mp
from pydantic import ValidationError

from .constants import (
    HARMONIC_100_PARAMS,
    LOG_LEVELS,
    OBSERVED_MQA,
    PUBLISHED_MQA,
    SIEVE_CACHE_ENV,
    TABLE1_M,
    ExitCode,
    LogLevel,
    OutputFormat,
)
from .schemas.config import CommandReport, RunConfig
from .schemas.numerics import PrecisionContext
from .schemas.primes import APClass, CutoffEstimate
from .schemas.series import EMParams, SeriesSpec
from .schemas.sinc import SincSequence
from .services.euler_maclaurin import crossing_digits, solve_crossing, table1_params
from .services.numerics import NumericsError
from .services.prime_ap import (
    all_primes_cutoff,
    cutoff_from_mertens,
    mertens_estimate,
    norton_limit,
    worked_examples,
)
from .services.sieve import PrimeAPError, SieveCacheError, load_or_build
from .services.sinc_identity import constant_sequence, identity_check, odd_reciprocals
from .services.towers import (
    TowerParseError,
    compare,
    inequality_lemmas,
    parse_tower,
    section8_report,
    skewes_report,
)
from .utils import abbreviate_digits, flatten_row, parse_limit, parse_m_range, parse_widths, to_json_safe

logger = logging.getLogger(__name__)


# ============================================================================
# PLUMBING
# ============================================================================

@contextmanager
def _exit_codes() -> Iterator[None]:
    """Map package errors onto process exit codes."""
    try:
        yield
    except ValidationError as e:
        raise click.UsageError(str(e))
    except SieveCacheError as e:
        logger.error(f"Sieve cache failure: {e}")
        click.echo(f"Error: {e}", err=True)
        sys.exit(ExitCode.CACHE_IO.value)
    except (NumericsError, PrimeAPError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        click.echo(f"Error: {e}", err=True)
        sys.exit(ExitCode.CHECKS_FAILED.value)


def _emit(config: RunConfig, report: CommandReport, rows: Optional[List[Dict[str, Any]]] = None) -> None:
    if config.output == OutputFormat.JSON:
        click.echo(report.to_json())
        return
    if config.output == OutputFormat.CSV:
        table = [flatten_row(r) for r in (rows if rows is not None else [report.outputs])]
        buffer = io.StringIO()
        fields: List[str] = []
        for r in table:
            fields.extend(k for k in r if k not in fields)
        writer = csv.DictWriter(buffer, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(table)
        click.echo(buffer.getvalue(), nl=False)
        return
    click.echo(f"# {report.command} ({report.precision_digits} digits, rigorous={report.rigorous})")
    for r in rows if rows is not None else [report.outputs]:
        for key, value in flatten_row(r).items():
            if isinstance(value, str) and value.isdigit():
                value = abbreviate_digits(value)
            click.echo(f"{key}: {value}")
        click.echo()


def _config(ctx: click.Context) -> RunConfig:
    return ctx.obj


@click.group()
@click.option("--digits", type=int, default=None, help="Working precision in decimal digits (default: per command)")
@click.option(
    "--output",
    type=click.Choice([f.value for f in OutputFormat]),
    default=OutputFormat.TEXT.value,
    show_default=True,
    help="Report format",
)
@click.option(
    "--cache-dir",
    type=click.Path(file_okay=False),
    envvar=SIEVE_CACHE_ENV,
    default=None,
    help=f"Sieve cache directory (also ${SIEVE_CACHE_ENV})",
)
@click.option("--sieve-limit", default="1e7", show_default=True, help="Default sieve bound")
@click.option(
    "--log-level",
    type=click.Choice([level.value for level in LogLevel]),
    default=LogLevel.WARNING.value,
    show_default=True,
)
@click.pass_context
def cli(
    ctx: click.Context,
    digits: Optional[int],
    output: str,
    cache_dir: Optional[str],
    sieve_limit: str,
    log_level: str,
) -> None:
    """Cutoffs of the sinc sum/integral identity."""
    try:
        config = RunConfig(
            digits=digits,
            sieve_limit=parse_limit(sieve_limit),
            cache_dir=Path(cache_dir) if cache_dir else None,
            output=output,
            log_level=log_level,
        )
    except (ValidationError, ValueError) as e:
        raise click.UsageError(str(e))
    logging.basicConfig(
        level=LOG_LEVELS[config.log_level].upper(),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
        force=True,
    )
    ctx.obj = config


# ============================================================================
# TABLE 1
# ============================================================================

def _table1_row(m: int, c: int, K: int, J: int, threshold: Optional[str], digits: int) -> Dict[str, Any]:
    """One crossing row; module level so worker processes can run it."""
    ctx = PrecisionContext(digits=digits)
    spec = SeriesSpec(m=m, c=c)
    threshold_value = None
    if threshold is not None:
        with mp.workdps(digits):
            threshold_value = mp.mpf(threshold)
    params = EMParams(K=K, J=J, threshold=threshold_value, ctx=ctx)
    result = solve_crossing(spec, params)
    out_digits = 12
    row: Dict[str, Any] = {
        "m": m,
        "c": c,
        "K": result.K,
        "J": result.J,
        "M": str(result.M),
        "method": result.method,
        "margin": to_json_safe(result.margin, out_digits),
        "remainder_bound": to_json_safe(result.remainder_bound, out_digits),
        "next_term": to_json_safe(result.next_term, out_digits),
        "checks": result.checks.model_dump(),
        "recertified": result.recertified,
        "rigorous": result.rigorous and result.method == "euler_maclaurin",
        "digits": result.digits,
    }
    if c == 1 and threshold is None and m in TABLE1_M:
        row["matches_published"] = TABLE1_M[m] == result.M
    return row


@cli.command("table1")
@click.option("--m", "m_range", default="1..20", show_default=True, help='m values: "1..20", "2,5" or "100"')
@click.option("--c", "offset", default=1, show_default=True, type=click.IntRange(min=1), help="Offset c in 1/(mk+c)")
@click.option("--k", "K", type=click.IntRange(min=0), default=None, help="Terms summed directly (default: per row)")
@click.option("--j", "J", type=click.IntRange(min=1), default=None, help="Bernoulli correction terms (default: per row)")
@click.option("--threshold", default=None, help="Crossing threshold (default 2*pi)")
@click.option("--jobs", default=1, show_default=True, type=click.IntRange(min=1), help="Worker processes")
@click.pass_context
def table1_command(
    ctx: click.Context,
    m_range: str,
    offset: int,
    K: Optional[int],
    J: Optional[int],
    threshold: Optional[str],
    jobs: int,
) -> None:
    """Largest M with sum_{k<=M} 1/(mk+c) below the threshold, for each m."""
    config = _config(ctx)
    try:
        ms = parse_m_range(m_range)
    except ValueError as e:
        raise click.BadParameter(str(e), param_hint="--m")
    if any(m < 1 or m > 100 for m in ms):
        raise click.BadParameter("m must lie in 1..100", param_hint="--m")
    try:
        approx = float(threshold) if threshold is not None else float(2 * mp.pi)
    except ValueError:
        raise click.BadParameter(f"{threshold!r} is not a number", param_hint="--threshold")
    jobs_args = []
    for m in ms:
        if threshold is not None:
            default_K, default_J = HARMONIC_100_PARAMS
        else:
            default_K, default_J = table1_params(m)
        row_K = K if K is not None else default_K
        row_J = J if J is not None else default_J
        digits = max(config.digits or 0, crossing_digits(m, approx))
        jobs_args.append((m, offset, row_K, row_J, threshold, digits))

    with _exit_codes():
        if jobs > 1 and len(jobs_args) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                rows = list(pool.map(_table1_row, *zip(*jobs_args)))
        else:
            rows = [_table1_row(*args) for args in jobs_args]

    rigorous = all(r["rigorous"] for r in rows)
    report = CommandReport(
        command="table1",
        inputs={"m": ms, "c": offset, "K": K, "J": J, "threshold": threshold or "2*pi"},
        outputs=rows,
        precision_digits=max(r["digits"] for r in rows),
        rigorous=rigorous,
    )
    _emit(config, report, rows)
    if not all(all(r["checks"].values()) for r in rows):
        sys.exit(ExitCode.CHECKS_FAILED.value)


# ============================================================================
# SINC CHECK
# ============================================================================

@cli.command("sinc-check")
@click.option("--list", "widths", default=None, help='Widths, e.g. "1,1/3,1/5"')
@click.option("--odd", type=click.IntRange(min=0), default=None, help="a_k = 1/(2k+1) for k = 0..N")
@click.option("--const", "const_value", default=None, help="Constant width")
@click.option("--count", type=click.IntRange(min=1), default=None, help="Number of constant widths")
@click.option("--tol", default=None, help="Tolerance of the direct cross-check")
@click.pass_context
def sinc_check_command(
    ctx: click.Context,
    widths: Optional[str],
    odd: Optional[int],
    const_value: Optional[str],
    count: Optional[int],
    tol: Optional[str],
) -> None:
    """Evaluate both sides of the sinc identity for one sequence."""
    config = _config(ctx)
    modes = [widths is not None, odd is not None, const_value is not None]
    if sum(modes) != 1:
        raise click.UsageError("give exactly one of --list, --odd or --const")
    if const_value is not None and count is None:
        raise click.UsageError("--const needs --count")
    try:
        if widths is not None:
            seq = SincSequence(a=parse_widths(widths))
        elif odd is not None:
            seq = odd_reciprocals(odd)
        else:
            seq = constant_sequence(parse_widths(const_value)[0], count)
    except (ValidationError, ValueError, ZeroDivisionError) as e:
        raise click.UsageError(str(e))

    pctx = config.context()
    with _exit_codes():
        result = identity_check(seq, pctx, tol)
    outputs = to_json_safe(result, pctx.digits)
    outputs["widths"] = [str(a) for a in seq.a]
    report = CommandReport(
        command="sinc-check",
        inputs={"widths": outputs["widths"], "tol": tol},
        outputs=outputs,
        precision_digits=pctx.digits,
        rigorous=False,
    )
    _emit(config, report)
    with pctx.activate():
        observed_equal = abs(result.difference) <= pctx.tolerance()
    if observed_equal != result.condition_holds:
        logger.error("identity outcome disagrees with the width condition")
        sys.exit(ExitCode.CHECKS_FAILED.value)


# ============================================================================
# MERTENS AND CUTOFFS
# ============================================================================

@cli.command("mertens")
@click.argument("q", type=int)
@click.argument("a", type=int)
@click.option("--x", "x_text", default=None, help="Summation limit (default: --sieve-limit)")
@click.pass_context
def mertens_command(ctx: click.Context, q: int, a: int, x_text: Optional[str]) -> None:
    """Non-rigorous estimate of M(q,a) from primes up to x."""
    config = _config(ctx)
    try:
        ap = APClass(q=q, a=a)
        x = parse_limit(x_text) if x_text is not None else config.sieve_limit
    except (ValidationError, ValueError) as e:
        raise click.UsageError(str(e))
    pctx = config.context()
    with _exit_codes():
        cache = load_or_build(x, config.cache_dir)
        estimate = mertens_estimate(ap, x, pctx, cache)
    logger.warning(f"M{ap.label()} = {mp.nstr(estimate.value, 8)} is an estimate, not a rigorous value")
    outputs = to_json_safe(estimate, pctx.digits)
    outputs["norton_limit"] = str(norton_limit(q, a))
    reference = PUBLISHED_MQA.get((q, a)) or OBSERVED_MQA.get((q, a))
    if reference is not None:
        outputs["reference"] = reference
    report = CommandReport(
        command="mertens",
        inputs={"q": q, "a": a, "x": str(x)},
        outputs=outputs,
        precision_digits=pctx.digits,
        rigorous=False,
    )
    _emit(config, report)


def _cutoff_row(estimate: CutoffEstimate, digits: int) -> Dict[str, Any]:
    row = to_json_safe(estimate, digits)
    row["N0_exponent"] = str(estimate.N0_exponent)
    row["x_exponent"] = str(estimate.x_exponent)
    for key in ("N0_leading", "x_leading"):
        row[key] = mp.nstr(getattr(estimate, key), 6)
    return row


@cli.command("cutoff")
@click.argument("q", type=int, required=False)
@click.argument("a", type=int, required=False)
@click.option("--mqa", default=None, help="M(q,a) as a decimal string")
@click.option("--mqa-file", type=click.Path(exists=True, dir_okay=False), default=None, help="File holding M(q,a)")
@click.option("--estimate", is_flag=True, default=False, help="Estimate M(q,a) from primes up to --sieve-limit")
@click.option("--examples", is_flag=True, default=False, help="Worked examples A-F and the all-primes case")
@click.option("--all-primes", is_flag=True, default=False, help="Sum over all primes with Mertens' constant")
@click.pass_context
def cutoff_command(
    ctx: click.Context,
    q: Optional[int],
    a: Optional[int],
    mqa: Optional[str],
    mqa_file: Optional[str],
    estimate: bool,
    examples: bool,
    all_primes: bool,
) -> None:
    """Estimate where the reciprocal prime sum reaches 2*pi and the term count N0."""
    config = _config(ctx)
    pctx = config.context()
    modes = [mqa is not None, mqa_file is not None, estimate, examples, all_primes]
    if sum(modes) != 1:
        raise click.UsageError("give exactly one of --mqa, --mqa-file, --estimate, --examples or --all-primes")
    needs_class = mqa is not None or mqa_file is not None or estimate
    if needs_class and (q is None or a is None):
        raise click.UsageError("q and a are required with --mqa, --mqa-file or --estimate")

    inputs: Dict[str, Any] = {}
    with _exit_codes():
        if examples:
            results = worked_examples(pctx)
        elif all_primes:
            results = [all_primes_cutoff(pctx)]
        else:
            try:
                ap = APClass(q=q, a=a)
            except ValidationError as e:
                raise click.UsageError(str(e))
            inputs = {"q": q, "a": a}
            if mqa_file is not None:
                value = Path(mqa_file).read_text(encoding="utf-8").strip()
            elif mqa is not None:
                value = mqa.strip()
            else:
                cache = load_or_build(config.sieve_limit, config.cache_dir)
                value = mertens_estimate(ap, config.sieve_limit, pctx, cache).value
                inputs["estimated_from_x"] = str(config.sieve_limit)
            inputs["mqa"] = value if isinstance(value, str) else mp.nstr(value, pctx.digits)
            results = [cutoff_from_mertens(ap, value, pctx)]

    rows = [_cutoff_row(r, r.digits) for r in results]
    report = CommandReport(
        command="cutoff",
        inputs=inputs,
        outputs=rows,
        precision_digits=max(r.digits for r in results),
        rigorous=False,
    )
    _emit(config, report, rows)


# ============================================================================
# TOWERS
# ============================================================================

@cli.group("towers")
def towers_group() -> None:
    """Huge-number comparisons in level-index form."""


def _towers_report(ctx: click.Context, name: str, outputs: Any, inputs: Optional[Dict[str, Any]] = None) -> None:
    config = _config(ctx)
    pctx = config.context()
    report = CommandReport(
        command=f"towers {name}",
        inputs=inputs or {},
        outputs=to_json_safe(outputs, pctx.digits),
        precision_digits=pctx.digits,
        rigorous=False,
    )
    _emit(config, report)


@towers_group.command("skewes")
@click.pass_context
def towers_skewes(ctx: click.Context) -> None:
    """S1, S2 and the term count for the largest-known-prime modulus."""
    with _exit_codes():
        report = skewes_report(_config(ctx).context())
    _towers_report(ctx, "skewes", report)


@towers_group.command("section8")
@click.pass_context
def towers_section8(ctx: click.Context) -> None:
    """The modulus P^P and the tower exp^6(e)."""
    with _exit_codes():
        report = section8_report(_config(ctx).context())
    _towers_report(ctx, "section8", report)


@towers_group.command("lemmas")
@click.pass_context
def towers_lemmas(ctx: click.Context) -> None:
    """Numerical checks of the supporting inequalities."""
    with _exit_codes():
        report = inequality_lemmas(_config(ctx).context())
    _towers_report(ctx, "lemmas", report)
    if not report.all_hold():
        sys.exit(ExitCode.CHECKS_FAILED.value)


@towers_group.command("compare")
@click.argument("x")
@click.argument("y")
@click.pass_context
def towers_compare(ctx: click.Context, x: str, y: str) -> None:
    """Compare two tower expressions such as "e^e^e^79" and S2."""
    pctx = _config(ctx).context()
    try:
        tx, ty = parse_tower(x, pctx), parse_tower(y, pctx)
    except TowerParseError as e:
        raise click.UsageError(str(e))
    with _exit_codes():
        ordering = compare(tx, ty, pctx)
    outputs = {"x": tx.describe(12), "y": ty.describe(12), "ordering": ordering.value}
    _towers_report(ctx, "compare", outputs, inputs={"x": x, "y": y})


if __name__ == "__main__":
    cli()
