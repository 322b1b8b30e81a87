"""Command line interface: ``table``, ``verify`` and ``poisson`` subcommands."""

from __future__ import annotations

import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import comb, factorial

import click

from . import jets, laguerre, poisson, special
from .errors import DomainError
from .exact_core import MultiPoly, TruncSeries, format_rat, parse_rat, poly_eval, series_pow

SCHEMA = 1
SUITES = ("all", "thm1_gf", "thm3", "thm4", "thm6", "lah_ids", "thm2", "thm5", "rodrigues")
THREADS_ENV = "DEGEN_LAGUERRE_THREADS"


def _workers() -> int:
    raw = os.environ.get(THREADS_ENV, "0")
    try:
        n = int(raw)
    except ValueError:
        raise click.UsageError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    if n < 0:
        raise click.UsageError(f"{THREADS_ENV} must be nonnegative")
    return n or (os.cpu_count() or 1)


def _fan_out(fn, items):
    items = list(items)
    workers = min(_workers(), len(items))
    if workers <= 1:
        return [fn(*it) for it in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, *zip(*items)))


class RatParam(click.ParamType):
    name = "p/q"

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            return value
        try:
            return parse_rat(value)
        except (ValueError, ZeroDivisionError):
            self.fail(f"{value!r} is not an exact rational p/q", param, ctx)


class RealParam(click.ParamType):
    """Float, also accepting ``p/q``."""

    name = "real"

    def convert(self, value, param, ctx):
        if isinstance(value, float):
            return value
        try:
            return float(Fraction(str(value)))
        except (ValueError, ZeroDivisionError):
            self.fail(f"{value!r} is not a real number", param, ctx)


RAT = RatParam()
REAL = RealParam()


def _emit(ctx: click.Context, text: str) -> None:
    out = ctx.find_root().obj["out"]
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


@click.group()
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None, help="Write output to a file.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=0, show_default=True)
@click.option("--tol", type=float, default=None, help="Relative tolerance for numeric checks.")
@click.pass_context
def main(ctx, out, fmt, seed, tol):
    """Degenerate generalized Laguerre polynomials: tables, identity checks, Poisson lab."""
    ctx.obj = {"out": out, "format": fmt, "seed": seed, "tol": tol}


# table

@main.group()
def table():
    """Exact coefficient tables."""


@table.command("lah")
@click.option("--n-max", type=click.IntRange(0), required=True)
@click.pass_context
def table_lah(ctx, n_max):
    """Lah numbers L(n,k) for 0 <= k <= n <= N."""
    rows = [(n, k, special.lah(n, k)) for n in range(n_max + 1) for k in range(n + 1)]
    if ctx.find_root().obj["format"] == "json":
        _emit(ctx, _dump_json({"schema": SCHEMA, "kind": "lah", "rows": [{"n": n, "k": k, "value": v} for n, k, v in rows]}))
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "k", "L(n,k)"])
    w.writerows(rows)
    _emit(ctx, buf.getvalue())


@table.command("laguerre")
@click.option("--n-max", type=click.IntRange(0), required=True)
@click.option("--lambda", "lam", type=RAT, default=None, help="Exact value for lambda (p/q); symbolic if omitted.")
@click.option("--alpha", type=RAT, default=None, help="Exact value for alpha (p/q); symbolic if omitted.")
@click.pass_context
def table_laguerre(ctx, n_max, lam, alpha):
    """Exact coefficients of L_{n,lambda}^{(alpha)}(x) for n <= N."""
    bindings = {}
    if lam is not None:
        bindings["lambda"] = lam
    if alpha is not None:
        bindings["alpha"] = alpha
    polys = [poly_eval(laguerre.explicit(n).poly, bindings) for n in range(n_max + 1)]
    if ctx.find_root().obj["format"] == "json":
        doc = {
            "schema": SCHEMA,
            "kind": "laguerre",
            "lambda": None if lam is None else format_rat(lam),
            "alpha": None if alpha is None else format_rat(alpha),
            "polys": [{"n": n, "terms": p.to_records()} for n, p in enumerate(polys)],
        }
        _emit(ctx, _dump_json(doc))
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "ex", "el", "ea", "coeff"])
    for n, p in enumerate(polys):
        for (ex, el, ea), c in p.terms:
            w.writerow([n, ex, el, ea, format_rat(c)])
    _emit(ctx, buf.getvalue())


# verify

def _case(params: dict, ok: bool, residual, **extra) -> dict:
    return {"params": params, "pass": bool(ok), "residual_or_relerr": residual, **extra}


def _nterms(p: MultiPoly) -> int:
    return len(p.terms)


def suite_thm1_gf(n_max: int) -> list[dict]:
    gf = laguerre.gf_expand(n_max)
    out = []
    for n in range(n_max + 1):
        diff = gf[n].poly - laguerre.explicit(n).poly
        out.append(_case({"n": n}, diff.is_zero(), _nterms(diff)))
    return out


def suite_thm4(n_max: int) -> list[dict]:
    out = []
    for n in range(n_max + 1):
        target = poly_eval(laguerre.explicit(n).poly, {"alpha": -1})
        d1 = laguerre.theorem4_poly(n) - target
        d2 = laguerre.theorem4_binomial_form(n) - target
        out.append(_case({"n": n}, d1.is_zero() and d2.is_zero(), _nterms(d1) + _nterms(d2)))
    return out


def _thm6_sources(n_max: int):
    yield "explicit", [laguerre.explicit(n).poly for n in range(n_max + 1)]
    yield "A=1", laguerre.seq_from_A(TruncSeries.from_list("t", [1], n_max), n_max)
    yield "A=1+t", laguerre.seq_from_A(TruncSeries.from_list("t", [1, 1], n_max), n_max)


def suite_thm6(n_max: int) -> list[dict]:
    out = []
    for source, ys in _thm6_sources(n_max):
        for n in range(1, n_max + 1):
            dy = ys[n].diff("x")
            for form in ("three_term", "lah_sum"):
                diff = laguerre.deriv_recurrence_rhs(n, ys[:n], form) - dy
                out.append(_case({"source": source, "n": n, "form": form}, diff.is_zero(), _nterms(diff)))
    return out


def suite_lah_ids() -> list[dict]:
    out = []
    for n in range(16):
        rhs = sum((special.falling_factorial_poly(k) * special.lah(n, k) for k in range(n + 1)), MultiPoly())
        diff = special.rising_factorial_poly(n) - rhs
        out.append(_case({"identity": "rising_to_falling", "n": n}, diff.is_zero(), _nterms(diff)))
    order = 20
    u = TruncSeries.from_list("t", [0] + [1] * order, order)
    for k in range(11):
        s = series_pow(u, k) * Fraction(1, factorial(k))
        bad = sum(s[n] != MultiPoly.const(Fraction(special.lah(n, k) if n >= k else 0, factorial(n))) for n in range(order + 1))
        out.append(_case({"identity": "generating_series", "k": k, "order": order}, bad == 0, bad))
    tri = special.lah_triangle(20)
    for n in range(1, 21):
        bad = sum(
            special.lah(n, k) != comb(n - 1, k - 1) * comb(n, k) * factorial(n - k) or special.lah(n, k) != tri[n][k]
            for k in range(1, n + 1)
        )
        out.append(_case({"identity": "binomial_product", "n": n}, bad == 0, bad))
    return out


def rodrigues_case(n: int, alpha: int, order: int) -> dict:
    res = laguerre.rodrigues_residual(n, alpha, order)
    nonzero = sum(not c.is_zero() for c in res.coeffs)
    return _case(
        {"n": n, "alpha": alpha, "order": order},
        nonzero == 0,
        nonzero,
        case=f"n={n},alpha={alpha}",
        residual_zero=nonzero == 0,
        max_order_checked=res.order,
    )


def suite_rodrigues(n_max: int, alpha_max: int) -> list[dict]:
    items = [(n, a, n + a + 12) for n in range(n_max + 1) for a in range(alpha_max + 1)]
    return _fan_out(rodrigues_case, items)


def suite_jets(ident: str, draws: int, seed: int, n: int | None, tol: float | None) -> list[dict]:
    out = []
    for rep in jets.verify_batch(ident, draws, seed, n=n, tol=tol, fd=True):
        params = dict(rep["params"], x0=rep["x0"])
        out.append(_case(params, rep["pass"], rep["rel_err"], lhs=rep["lhs"], rhs=rep["rhs"], fd_pass=rep["fd"]["pass"]))
    return out


def run_suite(suite: str, *, n_max=None, alpha_max=4, n=None, draws=200, seed=0, tol=None) -> dict:
    """Run one verification suite and return the JSON-ready report."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {SUITES}")
    if suite == "all":
        cases = []
        for sub in SUITES[1:]:
            rep = run_suite(sub, n_max=n_max, alpha_max=alpha_max, n=n, draws=draws, seed=seed, tol=tol)
            cases.extend(dict(c, suite=sub) for c in rep["cases"])
    elif suite == "thm1_gf":
        cases = suite_thm1_gf(12 if n_max is None else n_max)
    elif suite == "thm4":
        cases = suite_thm4(12 if n_max is None else n_max)
    elif suite == "thm6":
        cases = suite_thm6(12 if n_max is None else n_max)
    elif suite == "lah_ids":
        cases = suite_lah_ids()
    elif suite == "rodrigues":
        cases = suite_rodrigues(8 if n_max is None else n_max, alpha_max)
    else:
        cases = suite_jets(suite, draws, seed, n, tol)
    passed = sum(c["pass"] for c in cases)
    return {"schema": SCHEMA, "suite": suite, "cases": cases, "summary": {"total": len(cases), "passed": passed}}


@main.command()
@click.argument("suite", type=click.Choice(SUITES))
@click.option("--n-max", type=click.IntRange(0), default=None, help="Largest degree for exact suites.")
@click.option("--alpha-max", type=click.IntRange(0), default=4, show_default=True, help="Largest integer alpha (rodrigues).")
@click.option("--n", "n_fixed", type=click.IntRange(0), default=None, help="Fix the derivative order (thm2/thm3/thm5).")
@click.option("--draws", type=click.IntRange(1), default=200, show_default=True)
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=None)
@click.option("--tol", type=float, default=None)
@click.pass_context
def verify(ctx, suite, n_max, alpha_max, n_fixed, draws, seed, tol):
    """Run an identity verification suite; exit status 1 if any case fails."""
    root = ctx.find_root().obj
    seed = root["seed"] if seed is None else seed
    tol = root["tol"] if tol is None else tol
    if suite == "thm5" and n_fixed == 0:
        raise click.UsageError("thm5 is stated for n >= 1")
    report = run_suite(suite, n_max=n_max, alpha_max=alpha_max, n=n_fixed, draws=draws, seed=seed, tol=tol)
    _emit(ctx, _dump_json(report))
    s = report["summary"]
    if s["passed"] != s["total"]:
        ctx.exit(1)


# poisson

@main.group("poisson")
def poisson_cmd():
    """Degenerate Poisson distribution."""


def _params(alpha, lam):
    try:
        return poisson.DegPoissonParams(alpha, lam)
    except DomainError as e:
        raise click.BadParameter(str(e))


@poisson_cmd.command("moments")
@click.option("--n", type=click.IntRange(0), required=True)
@click.option("--alpha", type=REAL, default=1.0, show_default=True)
@click.option("--lambda", "lam", type=REAL, default=-0.5, show_default=True)
@click.option("--mc", type=click.IntRange(1), default=None, help="Monte Carlo draw count.")
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=None)
@click.option("--tol", type=float, default=None, help="Tail bound for the series sum.")
@click.pass_context
def poisson_moments(ctx, n, alpha, lam, mc, seed, tol):
    """Falling factorial moment E[(X)_n] by closed form, series and Monte Carlo."""
    root = ctx.find_root().obj
    seed = root["seed"] if seed is None else seed
    tol = root["tol"] if tol is None else tol
    p = _params(alpha, lam)
    doc = {"schema": SCHEMA, "n": n, "alpha": alpha, "lambda": lam, "exact": poisson.moment_exact(n, p)}
    doc["series"] = poisson.moment_series(n, p, 1e-12 if tol is None else tol) if p.samplable else None
    est = se = None
    if mc is not None:
        try:
            est, se = poisson.moment_mc(n, p, mc, seed)
        except DomainError as e:
            raise click.BadParameter(str(e))
    doc["mc_estimate"], doc["mc_stderr"] = est, se
    _emit(ctx, _dump_json(doc))


@poisson_cmd.command("sample")
@click.option("--count", type=click.IntRange(1), required=True)
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=None)
@click.option("--alpha", type=REAL, default=1.0, show_default=True)
@click.option("--lambda", "lam", type=REAL, default=-0.5, show_default=True)
@click.pass_context
def poisson_sample(ctx, count, seed, alpha, lam):
    """Draw samples, one integer per line."""
    seed = ctx.find_root().obj["seed"] if seed is None else seed
    p = _params(alpha, lam)
    try:
        xs = poisson.sample(p, seed, count)
    except DomainError as e:
        raise click.BadParameter(str(e))
    _emit(ctx, "".join(f"{int(v)}\n" for v in xs))


if __name__ == "__main__":
    sys.exit(main())
