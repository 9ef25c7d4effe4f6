"""Command line entry point: knot computations, tables and self-test suites."""

from __future__ import annotations

import csv
import io
import json
import random
import sys
import time
from contextlib import contextmanager

import click

from .doublealg import AlgebraContext, verify_axioms
from .exact import T
from .heisenberg import heis_evaluate, heis_scalar
from .invariant import (KnotResult, alexander_scalar, analyze, evaluate_Z, extract_center, genus_report,
                        knot_value, whitehead_report, whitehead_value)
from .pgcalc import globalize_t, oracle_check, pg_equal, random_oracle_pair, relabel
from .seifert import alexander_of_braid, v2_from_alexander
from .tangles import ProgramError, braid_to_program, load_knots, parse_program, seifert_band, writhe_and_rotation

# exit codes per suite; 1 means a failed compute check and 2 is click's usage error
SUITE_CODES = {"axioms": 3, "reidemeister": 4, "seifert": 5, "whitehead": 6, "oracle": 7}
CSV_COLUMNS = ("name", "delta_plus", "rho1_plus", "rho2_plus", "genus_ref", "bound_ok", "millis")

# algebraic forms of the moves: each pair must evaluate to the same element
REIDEMEISTER = {
    "R1 negative kink": ("Xbar[1,3] C[2] m[1,2>a] m[a,3>i]", "v[i]"),
    "R1 positive kink": ("X[1,3] Cbar[2] m[1,2>a] m[a,3>i]", "vbar[i]"),
    "R2": ("X[1,2] Xbar[3,4] m[1,3>i] m[2,4>j]", "One[i] One[j]"),
    "R2 reversed": ("Xbar[1,2] X[3,4] m[1,3>i] m[2,4>j]", "One[i] One[j]"),
    "R3": ("X[1,2] X[3,4] X[5,6] m[1,3>i] m[2,5>j] m[4,6>k]",
           "X[1,2] X[3,4] X[5,6] m[3,5>i] m[1,6>j] m[2,4>k]"),
    "spinner cancellation": ("C[1] Cbar[2] m[1,2>i]", "One[i]"),
}
TREFOIL_WORDS = ((1, 1, 1, 2), (1, 1, 1, -2), (1, 2, 1, 2), (-2, 1, 1, 1, 2, 2))
# the figure-eight as a disk with two bands
FIGURE_EIGHT_BANDS = "v[1] Xbar[2,3] vbar[4] m[1,3>1] m[2,4>2]"


def _parse_braid(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.replace("[", "").replace("]", "").replace(",", " ").split())
    except ValueError as e:
        raise click.BadParameter(f"bad braid word {text!r}") from e


def _resolve(knot, program, braid):
    """(name, program, reference Alexander coefficients or None)."""
    given = [x is not None for x in (knot, program, braid)]
    if sum(given) != 1:
        raise click.UsageError("give exactly one of --knot, --program, --braid")
    if knot is not None:
        recs = load_knots()
        if knot not in recs:
            raise click.BadParameter(f"unknown knot {knot!r}; known: {', '.join(recs)}")
        r = recs[knot]
        return knot, r.to_program(), r.alexander
    if braid is not None:
        word = _parse_braid(braid)
        try:
            return f"braid {list(word)}", braid_to_program(word), alexander_of_braid(word)
        except ProgramError as e:
            raise click.BadParameter(str(e)) from e
    try:
        return "program", parse_program(program), None
    except ProgramError as e:
        raise click.BadParameter(str(e)) from e


@contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _csv_rows(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: r.get(k, "") for k in CSV_COLUMNS})
    return buf.getvalue()


def _row(res: KnotResult, genus=None) -> dict:
    row = {"name": res.name, **res.normalized(), "millis": res.millis}
    if genus is not None:
        row["genus_ref"] = genus
        row["bound_ok"] = genus_report(res.center, genus).ok if res.order >= 1 else ""
    return row


def _text(res: KnotResult) -> str:
    lines = [f"{res.name} at order {res.order}"]
    norm = res.normalized()
    lines.append(f"  Δ+   {norm['delta_plus']}")
    if res.order >= 1:
        lines.append(f"  ρ1+  {norm['rho1_plus']}")
    if res.order >= 2:
        lines.append(f"  ρ2+  {norm['rho2_plus']}")
    for (k, j), r in sorted(res.center.rho.items()):
        lines.append(f"  ρ[{k},{j}] = {r}")
    lines += [f"  {name}: {'ok' if ok else 'FAIL'}" for name, ok in res.checks.items()]
    return "\n".join(lines)


def _context(order: int) -> AlgebraContext:
    if order < 0:
        raise click.BadParameter("order must be non-negative")
    return AlgebraContext(order)


@click.group()
def main():
    """Exact universal knot invariants from perturbed Gaussians."""


@main.command()
@click.option("--knot")
@click.option("--program")
@click.option("--braid")
@click.option("--order", default=1, show_default=True, type=int)
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "text"]), default="json", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False))
def compute(knot, program, braid, order, fmt, out):
    """Evaluate one knot and print Δ and the ρ invariants."""
    ctx = _context(order)
    name, prog, ref = _resolve(knot, program, braid)
    t0 = time.perf_counter()
    res = analyze(name, prog, ctx, alexander_ref=ref)
    res.millis = round((time.perf_counter() - t0) * 1000)
    genus = load_knots()[knot].genus if knot else None
    with _output(out) as fh:
        if fmt == "json":
            fh.write(json.dumps(res.to_json(), indent=1) + "\n")
        elif fmt == "csv":
            fh.write(_csv_rows([_row(res, genus)]))
        else:
            fh.write(_text(res) + "\n")
    if not all(res.checks.values()):
        sys.exit(1)


@main.command()
@click.option("--max-crossings", default=8, show_default=True, type=int)
@click.option("--order", default=1, show_default=True, type=int)
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "text"]), default="csv", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False))
def table(max_crossings, order, fmt, out):
    """Normalized rows for every curated knot up to a crossing number."""
    ctx = _context(order)
    rows, results = [], []
    for rec in load_knots().values():
        if rec.crossings > max_crossings:
            continue
        t0 = time.perf_counter()
        res = analyze(rec.name, rec.to_program(), ctx, alexander_ref=rec.alexander)
        res.millis = round((time.perf_counter() - t0) * 1000)
        rows.append(_row(res, rec.genus))
        results.append(res)
    with _output(out) as fh:
        if fmt == "csv":
            fh.write(_csv_rows(rows))
        elif fmt == "json":
            fh.write(json.dumps([r.to_json() for r in results], indent=1) + "\n")
        else:
            fh.write("\n".join(_text(r) for r in results) + "\n")


@main.command()
@click.option("--knot")
@click.option("--program")
@click.option("--braid")
def heis(knot, program, braid):
    """The Heisenberg value T^w Z̃, compared with the Seifert-matrix Alexander."""
    name, prog, ref = _resolve(knot, program, braid)
    w, _ = writhe_and_rotation(prog)
    value = heis_scalar(heis_evaluate(prog)) * T(w)
    click.echo(f"{name}: {value}")
    if ref is not None:
        delta = alexander_scalar(ref)
        ratio = value * delta
        click.echo(f"value · Δ = {ratio}")
        if not _is_unit(ratio):
            sys.exit(1)


def _is_unit(s) -> bool:
    """True for ±T^k."""
    try:
        terms = s.laurent()
    except ArithmeticError:
        return False
    return len(terms) == 1 and abs(next(iter(terms.values()))) == 1


@main.command()
@click.option("--order", default=1, show_default=True, type=int)
def axioms(order):
    """Run the algebra axioms and print a JSON report."""
    report = verify_axioms(_context(order))
    click.echo(json.dumps(report.to_json(), indent=1))
    if not report.ok:
        sys.exit(SUITE_CODES["axioms"])


# -- verification suites ----------------------------------------------------------------

def suite_reidemeister(ctx: AlgebraContext, max_crossings: int) -> dict[str, bool]:
    out = {name: pg_equal(evaluate_Z(a, ctx), evaluate_Z(b, ctx)) for name, (a, b) in REIDEMEISTER.items()}
    # Markov stabilizations and conjugates of the trefoil braid
    base = knot_value(braid_to_program((1, 1, 1)), ctx)
    for word in TREFOIL_WORDS:
        out[f"trefoil braid {list(word)}"] = pg_equal(knot_value(braid_to_program(word), ctx), base)
    return out


def suite_seifert(ctx: AlgebraContext, max_crossings: int) -> dict[str, bool]:
    ZL = evaluate_Z(FIGURE_EIGHT_BANDS, ctx, global_t=False)
    Z = evaluate_Z(seifert_band("1", "2", "1"), ctx, global_t=False, start=ZL)
    banded = globalize_t(relabel(Z, {"1": "0"}))
    direct = knot_value(load_knots()["4_1"].to_program(), ctx)
    out = {"figure-eight bands": pg_equal(banded, direct)}
    for rec in load_knots().values():
        if rec.crossings <= max_crossings and rec.braid is not None:
            out[f"alexander oracle {rec.name}"] = list(alexander_of_braid(rec.braid)) == list(rec.alexander)
    return out


def suite_whitehead(ctx: AlgebraContext, max_crossings: int) -> dict[str, bool]:
    out = {}
    for name in ("0_1", "3_1", "4_1"):
        rec = load_knots()[name]
        cv = extract_center(whitehead_value(rec.to_program(), ctx), ctx)
        out[f"double of {name}"] = whitehead_report(cv, v2_from_alexander(rec.alexander)).ok
    return out


def suite_oracle(ctx: AlgebraContext, max_crossings: int, count: int = 200, seed: int = 0) -> dict[str, bool]:
    rng = random.Random(seed)
    passed = sum(oracle_check(*random_oracle_pair(rng, kappa=i % 3)) for i in range(count))
    return {f"{count} random contractions": passed == count}


def suite_axioms(ctx: AlgebraContext, max_crossings: int) -> dict[str, bool]:
    return dict(verify_axioms(ctx).results)


SUITES = {"axioms": suite_axioms, "reidemeister": suite_reidemeister, "seifert": suite_seifert,
          "whitehead": suite_whitehead, "oracle": suite_oracle}


@main.command()
@click.option("--suite", type=click.Choice(list(SUITES)), multiple=True,
              help="suite to run (repeatable); all suites by default")
@click.option("--order", default=1, show_default=True, type=int)
@click.option("--max-crossings", default=8, show_default=True, type=int)
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="text", show_default=True)
def verify(suite, order, max_crossings, fmt):
    """Run self-test suites; the exit code names the first failing suite."""
    ctx = _context(order)
    report, code = {}, 0
    for name in suite or SUITES:
        results = SUITES[name](ctx, max_crossings)
        report[name] = results
        if not all(results.values()) and not code:
            code = SUITE_CODES[name]
    if fmt == "json":
        click.echo(json.dumps(report, indent=1))
    else:
        for name, results in report.items():
            for check, ok in results.items():
                click.echo(f"{'PASS' if ok else 'FAIL'}  {name}: {check}")
    sys.exit(code)


if __name__ == "__main__":
    main()
