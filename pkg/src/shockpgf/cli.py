"""Command line front end.

Every subcommand reads a mixing distribution (inline JSON or a path),
computes one report, and writes it as CSV or JSON to stdout or a file.
Output is deterministic for fixed inputs: floats are rendered with repr
and simulations are seeded. Exit codes: 0 on success, 2 for invalid
input or arguments, 3 when a numeric routine cannot deliver the request.

A --config file maps subcommand names to option defaults, keyed by the
option name with dashes turned into underscores, e.g.
{"tail": {"dist": "q.json", "k": 50}}.
"""

from __future__ import annotations

import functools
import json
import math
from fractions import Fraction

import click

from .errors import NumericError, ValidationError
from .measures import MixingDistribution, jsonable, parse_number, render
from .pgf_core import (
    counterexample_Q,
    counterexample_params,
    counterexample_tail_sequence,
    monotonicity_condition,
    pgf_eval,
    tail_sequence,
)
from .sdfr_analysis import (
    classify_support,
    difference_table,
    expected_shocks,
    is_completely_monotone,
    laplace_order_bounds,
    pgf_bounds,
    tail_validity,
)
from .shock_model import (
    ShockModelParams,
    laplace,
    sdfr_skeleton_check,
    simulate_de_finetti,
    simulate_failure_times,
    survival,
)


class NumericFailure(click.ClickException):
    exit_code = 3


def guarded(fn):
    """Map library errors onto the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except click.ClickException:
            raise
        except ValidationError as exc:
            raise click.UsageError(str(exc))
        except NumericError as exc:
            raise NumericFailure(str(exc))

    return wrapper


def _load_distribution(text: str | None) -> MixingDistribution:
    if text is None:
        raise click.UsageError("missing required option '--dist'")
    t = text.strip()
    if t.startswith("{"):
        try:
            doc = json.loads(t)
        except json.JSONDecodeError as exc:
            raise click.UsageError(f"inline distribution is not valid JSON: {exc}")
    else:
        try:
            with open(t, encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise click.UsageError(f"cannot read distribution file: {exc}")
        except json.JSONDecodeError as exc:
            raise click.UsageError(f"distribution file is not valid JSON: {exc}")
    try:
        return MixingDistribution.from_json_dict(doc)
    except ValidationError as exc:
        raise click.UsageError(f"invalid distribution: {exc}")


def _parse_point(token: str):
    """Grid scalar: fractions stay exact, everything else becomes float."""
    token = token.strip()
    try:
        return Fraction(token) if "/" in token else float(token)
    except (ValueError, ZeroDivisionError):
        raise click.UsageError(f"cannot parse number {token!r}")


def _parse_grid(text: str, name: str) -> list:
    points = [_parse_point(tok) for tok in text.split(",") if tok.strip()]
    if not points:
        raise click.UsageError(f"option --{name} lists no points")
    return points


def _write(out: str, text: str) -> None:
    if out == "-":
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _emit(out: str, fmt: str, doc: dict, csv_text: str) -> None:
    if fmt == "json":
        _write(out, json.dumps(doc, indent=2) + "\n")
    else:
        _write(out, csv_text)


def io_options(default_format: str):
    def deco(fn):
        fn = click.option("--out", default="-", show_default=True,
                          help="Output path, '-' for stdout.")(fn)
        fn = click.option("--format", type=click.Choice(["csv", "json"]),
                          default=default_format, show_default=True)(fn)
        return fn

    return deco


dist_option = click.option("--dist", metavar="JSON_OR_PATH",
                           help="Mixing distribution: inline JSON or a path to a JSON file.")
tol_option = click.option("--tol", type=float, default=1e-10, show_default=True,
                          help="Absolute integration tolerance.")


@click.group()
@click.version_option(package_name="shockpgf")
@click.option("--config", type=click.Path(exists=True, dir_okay=False),
              help="JSON file with per-subcommand option defaults.")
@click.pass_context
def cli(ctx, config):
    """Mixture p.g.f. and shock-model survival toolkit."""
    if config:
        try:
            with open(config, encoding="utf-8") as fh:
                ctx.default_map = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise click.UsageError(f"cannot read config file: {exc}")


@cli.command()
@dist_option
@click.option("--z", default="1/4,1/2,3/4", show_default=True,
              help="Comma-separated evaluation points in (0, 1).")
@tol_option
@io_options("csv")
@guarded
def pgf(dist, z, tol, format, out):
    """Evaluate the candidate p.g.f. on a grid."""
    q = _load_distribution(dist)
    rows = [(pt, pgf_eval(q, pt, tol)) for pt in _parse_grid(z, "z")]
    doc = {
        "command": "pgf",
        "distribution": q.to_json_dict(),
        "rows": [{"z": jsonable(parse_number(pt)), "phi": jsonable(v), "decimal": float(v)}
                 for pt, v in rows],
    }
    csv_text = "z,phi\n" + "".join(f"{float(pt)!r},{float(v)!r}\n" for pt, v in rows)
    _emit(out, format, doc, csv_text)


@cli.command()
@dist_option
@click.option("--K", "k", type=int, default=200, show_default=True,
              help="Largest tail index to tabulate.")
@io_options("csv")
@guarded
def tail(dist, k, format, out):
    """Tabulate the shock-resistance tail sequence."""
    q = _load_distribution(dist)
    t = tail_sequence(q, k)
    valid, reason = tail_validity(t.values)
    doc = {
        "command": "tail",
        "distribution": q.to_json_dict(),
        "valid": valid,
        "invalid_reason": reason,
        "tail": t.to_json_dict(),
    }
    _emit(out, format, doc, t.to_csv())


@cli.command("cm-check")
@dist_option
@click.option("--values", default=None,
              help="Check these comma-separated values instead of tails of --dist.")
@click.option("--K", "k", type=int, default=60, show_default=True,
              help="Tail truncation order when deriving values from --dist.")
@click.option("--J", "j", type=int, default=12, show_default=True,
              help="Highest difference order to inspect.")
@click.option("--tol", type=float, default=None,
              help="Negativity tolerance; defaults to 0 for exact input.")
@io_options("json")
@guarded
def cm_check(dist, values, k, j, tol, format, out):
    """Test a sequence for complete monotonicity."""
    if values is not None:
        # parse_number keeps decimal strings exact, so hand-typed sequences
        # get the zero-tolerance check by default
        seq = [parse_number(tok.strip()) for tok in values.split(",") if tok.strip()]
        if not seq:
            raise click.UsageError("option --values lists no entries")
        source = {"source": "values"}
    else:
        q = _load_distribution(dist)
        seq = list(tail_sequence(q, k).values)
        source = {"source": "dist", "distribution": q.to_json_dict()}
    table = difference_table(seq, min(j, len(seq) - 1))
    if tol is None:
        tol = 0.0 if table.exact else 1e-9 * max(abs(float(v)) for v in seq)
    verdict, first = is_completely_monotone(seq, table.J, tol)
    doc = {
        "command": "cm-check",
        **source,
        "J": table.J,
        "tol": tol,
        "completely_monotone": verdict,
        "first_violation": None if first is None else {"j": first[0], "k": first[1]},
        "table": table.to_json_dict(),
    }
    _emit(out, format, doc, table.to_csv())


@cli.command()
@dist_option
@tol_option
@io_options("json")
@guarded
def classify(dist, tol, format, out):
    """Classify the support of a mixing distribution."""
    q = _load_distribution(dist)
    c = classify_support(q)
    ej = expected_shocks(q, tol)
    doc = {
        "command": "classify",
        "distribution": q.to_json_dict(),
        **c.to_json_dict(),
        "expected_shocks": "inf" if ej == math.inf else jsonable(ej),
    }
    csv_text = (
        "verdict,m01,m12,m2,expected_shocks\n"
        f"{c.verdict},{render(c.m01)},{render(c.m12)},{render(c.m2)},"
        f"{'inf' if ej == math.inf else render(ej)}\n"
    )
    _emit(out, format, doc, csv_text)


@cli.command()
@click.option("--alpha", required=True, help="Overshoot width, a rational like 1/7.")
@click.option("--beta", required=True, help="Overshoot mass, a rational like 2/3.")
@click.option("--K", "k", type=int, default=200, show_default=True,
              help="Largest tail index to tabulate.")
@click.option("--J", "j", type=int, default=12, show_default=True,
              help="Highest difference order to inspect.")
@io_options("json")
@guarded
def counterexample(alpha, beta, k, j, format, out):
    """Reproduce the two-segment stress case end to end."""
    p = counterexample_params(alpha, beta)
    q = counterexample_Q(p)
    t = counterexample_tail_sequence(p, k)
    valid, reason = tail_validity(t.values)
    verdict, first = is_completely_monotone(t.values, min(j, k), 0)
    mono_fail = None
    for n in range(k // 2 + 1):
        if not monotonicity_condition(p, n).holds:
            mono_fail = n
            break
    second = difference_table(t.values, 2).entries[2] if k >= 2 else ()
    doc = {
        "command": "counterexample",
        "alpha": jsonable(p.alpha),
        "beta": jsonable(p.beta),
        "admissible": p.admissible,
        "distribution": q.to_json_dict(),
        "classification": classify_support(q).to_json_dict(),
        "tail_valid": valid,
        "invalid_reason": reason,
        "monotonicity_condition_first_failure": mono_fail,
        "completely_monotone": verdict,
        "first_violation": None if first is None else {"j": first[0], "k": first[1]},
        "second_differences": [
            {"k": i, "value": jsonable(v), "decimal": float(v)}
            for i, v in enumerate(second[: min(len(second), 9)])
        ],
        "tail": t.to_json_dict(),
    }
    _emit(out, format, doc, t.to_csv())


@cli.command("survival")
@dist_option
@click.option("--lam", default="1", show_default=True, help="Poisson arrival rate.")
@click.option("--t", default="0,0.5,1,2,4", show_default=True,
              help="Comma-separated evaluation times.")
@click.option("--K", "k", type=int, default=200, show_default=True,
              help="Tail truncation order feeding the series.")
@click.option("--series-tol", type=float, default=1e-12, show_default=True,
              help="Poisson mass discarded by series truncation.")
@io_options("csv")
@guarded
def survival_cmd(dist, lam, t, k, series_tol, format, out):
    """Shock-model survival on a time grid."""
    q = _load_distribution(dist)
    grid = [float(v) for v in _parse_grid(t, "t")]
    params = ShockModelParams(lam=parse_number(lam), series_tol=series_tol,
                              time_grid=tuple(grid))
    t_seq = tail_sequence(q, k)
    rows = [(v, survival(t_seq, params, v)) for v in grid]
    doc = {
        "command": "survival",
        "distribution": q.to_json_dict(),
        "lam": jsonable(params.lam),
        "rows": [{"t": v, "survival": s} for v, s in rows],
    }
    csv_text = "t,survival\n" + "".join(f"{v!r},{s!r}\n" for v, s in rows)
    _emit(out, format, doc, csv_text)


@cli.command("laplace")
@dist_option
@click.option("--lam", default="1", show_default=True, help="Poisson arrival rate.")
@click.option("--s", default="0.5,1,2", show_default=True,
              help="Comma-separated transform frequencies.")
@tol_option
@io_options("csv")
@guarded
def laplace_cmd(dist, lam, s, tol, format, out):
    """Failure-time transform on a frequency grid."""
    q = _load_distribution(dist)
    lam_v = parse_number(lam)
    rows = [(pt, laplace(q, lam_v, pt, tol)) for pt in _parse_grid(s, "s")]
    doc = {
        "command": "laplace",
        "distribution": q.to_json_dict(),
        "lam": jsonable(lam_v),
        "rows": [{"s": jsonable(parse_number(pt)), "value": jsonable(v), "decimal": float(v)}
                 for pt, v in rows],
    }
    csv_text = "s,value\n" + "".join(f"{float(pt)!r},{float(v)!r}\n" for pt, v in rows)
    _emit(out, format, doc, csv_text)


@cli.command()
@dist_option
@click.option("--z", default=None,
              help="Comma-separated points in (0, 1); bounds on the p.g.f. scale.")
@click.option("--s", default=None,
              help="Comma-separated frequencies; bounds on the transform scale.")
@click.option("--lam", default="1", show_default=True,
              help="Arrival rate, used with --s.")
@tol_option
@io_options("csv")
@guarded
def bounds(dist, z, s, lam, tol, format, out):
    """Two-sided bounds around the mixture value."""
    q = _load_distribution(dist)
    if (z is None) == (s is None):
        raise click.UsageError("pass exactly one of --z or --s")
    json_rows = []
    csv_lines = []
    if z is not None:
        for pt in _parse_grid(z, "z"):
            b = pgf_bounds(q, pt, tol)
            json_rows.append(b.to_json_dict())
            csv_lines.append(
                f"{float(b.z)!r},{float(b.lower)!r},{float(b.phi)!r},{float(b.upper)!r}")
        header = "z,lower,phi,upper"
        scale = "pgf"
    else:
        lam_v = parse_number(lam)
        for pt in _parse_grid(s, "s"):
            b = laplace_order_bounds(q, lam_v, pt, tol)
            json_rows.append(b.to_json_dict())
            csv_lines.append(
                f"{float(b.s)!r},{float(b.lower)!r},{float(b.value)!r},{float(b.upper)!r}")
        header = "s,lower,value,upper"
        scale = "laplace"
    doc = {
        "command": "bounds",
        "scale": scale,
        "distribution": q.to_json_dict(),
        "rows": json_rows,
    }
    _emit(out, format, doc, header + "\n" + "".join(line + "\n" for line in csv_lines))


@cli.command("skeleton")
@dist_option
@click.option("--lam", default="1", show_default=True, help="Poisson arrival rate.")
@click.option("--delta", type=float, default=0.5, show_default=True, help="Grid step.")
@click.option("--J", "j", type=int, default=10, show_default=True,
              help="Highest difference order to inspect.")
@click.option("--n-points", type=int, default=40, show_default=True,
              help="Skeleton length.")
@click.option("--K", "k", type=int, default=200, show_default=True,
              help="Tail truncation order feeding the series.")
@click.option("--series-tol", type=float, default=1e-13, show_default=True,
              help="Poisson mass discarded by series truncation.")
@io_options("json")
@guarded
def skeleton(dist, lam, delta, j, n_points, k, series_tol, format, out):
    """Complete-monotonicity check of the survival skeleton."""
    q = _load_distribution(dist)
    params = ShockModelParams(lam=parse_number(lam), series_tol=series_tol)
    t_seq = tail_sequence(q, k)
    verdict, first = sdfr_skeleton_check(t_seq, params, delta, j, n_points)
    doc = {
        "command": "skeleton",
        "distribution": q.to_json_dict(),
        "lam": jsonable(params.lam),
        "delta": delta,
        "J": j,
        "n_points": n_points,
        "completely_monotone": verdict,
        "first_violation": None if first is None else {"j": first[0], "k": first[1]},
    }
    csv_text = (
        "delta,J,n_points,completely_monotone,first_j,first_k\n"
        f"{delta!r},{j},{n_points},{verdict},"
        f"{'' if first is None else first[0]},{'' if first is None else first[1]}\n"
    )
    _emit(out, format, doc, csv_text)


@cli.command()
@dist_option
@click.option("--mode", type=click.Choice(["failure", "definetti"]), default="failure",
              show_default=True, help="failure: shock-model times; definetti: count p.g.f.")
@click.option("--lam", default="1", show_default=True, help="Poisson arrival rate (failure mode).")
@click.option("--t", default="0.5,1,2,4", show_default=True,
              help="Time grid (failure mode).")
@click.option("--z", default="1/4,1/2,3/4", show_default=True,
              help="Evaluation grid (definetti mode).")
@click.option("--n", type=int, default=100000, show_default=True, help="Replicates.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--K", "k", type=int, default=200, show_default=True,
              help="Tail truncation order (failure mode).")
@click.option("--tail-model", type=click.Choice(["none", "geometric", "harmonic"]),
              default="none", show_default=True,
              help="Continuation of the tails beyond K (failure mode).")
@click.option("--series-tol", type=float, default=1e-12, show_default=True)
@io_options("csv")
@guarded
def simulate(dist, mode, lam, t, z, n, seed, k, tail_model, series_tol, format, out):
    """Seeded Monte Carlo against the analytic curves."""
    q = _load_distribution(dist)
    if mode == "failure":
        grid = tuple(float(v) for v in _parse_grid(t, "t"))
        params = ShockModelParams(lam=parse_number(lam), series_tol=series_tol, time_grid=grid)
        result = simulate_failure_times(q, params, n, seed, tail_model=tail_model, K=k)
    else:
        result = simulate_de_finetti(q, _parse_grid(z, "z"), n, seed)
    doc = {"command": "simulate", "mode": mode, "distribution": q.to_json_dict(),
           **result.to_json_dict()}
    _emit(out, format, doc, result.to_csv())


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
