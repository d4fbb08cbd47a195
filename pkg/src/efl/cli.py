"""Command-line front end.

Exit codes: 0 success; 1 usage error; 2 validation failure (selftest breach,
route-triangle breach, Weil positivity breach); 3 computation error from the
module error taxonomy.

Configuration precedence is defaults < config file < EFL_* environment <
flags; the shared flags are accepted both before and after the subcommand
name.  Every run archives its emitted report content-addressed under
``<cache_dir>/reports`` (append-only), in addition to stdout / ``--out``.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click
import numpy as np

from . import arith, config, engine, liweil, reporting, testfn, zetacore, zeros
from .config import RunConfig
from .errors import EflError
from .zetacore import ZetaEvalConfig

__all__ = ["main", "cli"]

_SHARED = [
    ("--cache-dir", "cache_dir", str, "cache directory for fetches and reports"),
    ("--working-digits", "working_digits", int, "decimal digits for zeta-side work"),
    ("--zeros", "zeros_path", str, "zero-table file (ascending ordinates)"),
    ("--zeros-url", "zeros_url", str, "URL of a zero table (cached fetch)"),
    ("--zero-count", "zero_count", int, "number of zeros to use"),
    ("--trivial-cutoff", "trivial_cutoff", int, "trivial-zero series cutoff"),
    ("--seed", "seed", int, "seed for randomized sweeps"),
    ("--output", "output_format", click.Choice(["json", "csv"]), "report format"),
]


class ValidationFailure(Exception):
    """A numeric validation gate failed; maps to exit code 2."""


def shared_options(fn):
    for flag, name, kind, helptext in reversed(_SHARED):
        fn = click.option(flag, name, type=kind, default=None, help=helptext)(fn)
    fn = click.option("--out", "out_path", type=click.Path(), default=None,
                      help="write the report here instead of stdout")(fn)
    return fn


def _resolve(ctx, local_flags: dict) -> RunConfig:
    merged = dict(ctx.obj["group_flags"])
    merged.update({k: v for k, v in local_flags.items() if v is not None})
    return config.resolve(ctx.obj["file_values"], None, merged)


def _pop_shared(kw: dict) -> tuple[dict, str | None]:
    out_path = kw.pop("out_path", None)
    flags = {name: kw.pop(name) for _, name, _, _ in _SHARED}
    return flags, out_path


def _deliver(ctx, rc: RunConfig, out_path: str | None, payload: bytes,
             suffix: str) -> None:
    reporting.save_report(payload, rc.cache_path, suffix)
    out_path = out_path or ctx.obj.get("out")
    if out_path:
        Path(out_path).write_bytes(payload)
    else:
        click.echo(payload.decode("utf-8"), nl=False)


def _load_zero_set(rc: RunConfig, count: int | None = None) -> zeros.ZeroSet:
    """Zero-source resolution: explicit path, then URL (cached fetch), then
    the bundled table, then local computation."""
    want = count or rc.zero_count
    zset = None
    if rc.zeros_path:
        zset = zeros.load_zeros(rc.zeros_path)
    elif rc.zeros_url:
        path = zeros.fetch_zeros(rc.zeros_url, rc.cache_path)
        zset = zeros.load_zeros(path)
    else:
        bundled = zeros.bundled_zero_table()
        if bundled is not None:
            zset = zeros.load_zeros(bundled)
    if zset is None:
        return zeros.find_zeros(min(want, zeros.MAX_FIND_COUNT))
    if want < len(zset):
        return zset.first(want)
    return zset


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None, help="flat key = value config file")
@shared_options
@click.pass_context
def cli(ctx, config_path, out_path, **kw):
    """Numerical laboratory for the explicit formula and Li's criterion."""
    file_values = {}
    if config_path:
        file_values = config.read_config_file(config_path)
    elif Path("efl.toml").exists():
        file_values = config.read_config_file("efl.toml")
    group_flags, _ = _pop_shared(kw | {"out_path": None})
    ctx.obj = {
        "file_values": file_values,
        "group_flags": {k: v for k, v in group_flags.items() if v is not None},
        "out": out_path,
    }


@cli.command()
@click.option("--x", type=float, required=True)
@click.option("--limit", type=int, default=10 ** 6, show_default=True)
@shared_options
@click.pass_context
def psi(ctx, x, limit, **kw):
    """Chebyshev psi(x) from the sieve (arithmetic side)."""
    flags, out_path = _pop_shared(kw)
    rc = _resolve(ctx, flags)
    table = arith.sieve(limit)
    value = arith.psi_arith(x, table)
    payload = reporting.emit_report(
        {"x": x, "sieve_limit": limit, "psi": value}, "json")
    _deliver(ctx, rc, out_path, payload, "json")


@cli.command("psi-explicit")
@click.option("--x", type=float, required=True)
@click.option("--compare-limit", type=int, default=None,
              help="also sieve to this limit and report the difference")
@shared_options
@click.pass_context
def psi_explicit(ctx, x, compare_limit, **kw):
    """Chebyshev psi(x) rebuilt from zeros (analytic side)."""
    flags, out_path = _pop_shared(kw)
    rc = _resolve(ctx, flags)
    zset = _load_zero_set(rc)
    rep = engine.psi_analytic(x, zset, trivial_cutoff=min(rc.trivial_cutoff, 400))
    doc = rep.to_dict()
    if compare_limit:
        table = arith.sieve(compare_limit)
        doc["psi_arithmetic"] = arith.psi_arith(x, table)
        doc["difference"] = rep.total.real - doc["psi_arithmetic"]
    _deliver(ctx, rc, out_path, reporting.emit_report(doc, "json"), "json")


@cli.command("zeros")
@click.option("--count", type=int, default=None,
              help="compute this many ordinates locally instead of loading")
@shared_options
@click.pass_context
def zeros_cmd(ctx, count, **kw):
    """Load/fetch/compute a validated zero set and summarize it."""
    flags, out_path = _pop_shared(kw)
    rc = _resolve(ctx, flags)
    if count is not None:
        zset = zeros.find_zeros(count, ZetaEvalConfig(working_digits=20))
    else:
        zset = _load_zero_set(rc)
    doc = {
        "count": len(zset),
        "source": zset.source,
        "on_critical_line": zset.on_critical_line,
        "first": float(zset.ordinates[0]),
        "last": float(zset.ordinates[-1]),
        "max_height": zset.max_height,
        "below_100": zset.count_below(100.0),
    }
    _deliver(ctx, rc, out_path, reporting.emit_report(doc, "json"), "json")


LI_HEADER = ["n", "lambda_direct", "tail", "lambda_eta", "lambda_mu", "max_disc"]


@cli.command()
@click.option("--n-max", type=int, default=20, show_default=True)
@shared_options
@click.pass_context
def li(ctx, n_max, **kw):
    """Li coefficients by the three routes; exit 2 on route-triangle breach."""
    flags, out_path = _pop_shared(kw)
    rc = _resolve(ctx, flags)
    zset = _load_zero_set(rc)
    co = liweil.laurent_coefficients(max(1, n_max - 1))
    rows = liweil.li_table(n_max, zset, co)
    full_strength = len(zset) >= 10 ** 5
    breach = None
    for row in rows:
        n = row["n"]
        if abs(row["lambda_eta"] - row["lambda_mu"]) >= 1e-9:
            breach = f"eta/mu routes differ at n={n}"
        direct_tol = max(1e-3, n * 1e-4) if full_strength else 1e-2
        d = abs(row["lambda_eta"] - (row["lambda_direct"] + row["tail"]))
        if (full_strength or n <= 5) and d >= direct_tol:
            breach = f"direct route off by {d:.3e} at n={n}"
    if rc.output_format == "csv":
        payload = reporting.emit_report(None, "csv", (LI_HEADER, rows))
        _deliver(ctx, rc, out_path, payload, "csv")
    else:
        doc = {"zero_count": len(zset), "rows": rows,
               "on_critical_line": zset.on_critical_line}
        _deliver(ctx, rc, out_path, reporting.emit_report(doc, "json"), "json")
    if breach:
        raise ValidationFailure(breach)


COEFF_HEADER = ["k", "eta_k", "mu_k", "gamma_k", "error_estimate"]


@cli.command()
@click.option("--k-max", type=int, default=20, show_default=True)
@shared_options
@click.pass_context
def coeffs(ctx, k_max, **kw):
    """Laurent coefficient table: eta_k, mu_k, Stieltjes gamma_k."""
    flags, out_path = _pop_shared(kw)
    rc = _resolve(ctx, flags)
    co = liweil.laurent_coefficients(k_max)
    rows = []
    for k in range(k_max + 1):
        rows.append({
            "k": k,
            "eta_k": float(co.eta[k]),
            "mu_k": float(co.mu[k]),
            "gamma_k": float(co.stieltjes[k]),
            "error_estimate": float(max(co.eta_errors[k], co.mu_errors[k],
                                        co.stieltjes_errors[k])),
        })
    if rc.output_format == "csv":
        payload = reporting.emit_report(None, "csv", (COEFF_HEADER, rows))
        _deliver(ctx, rc, out_path, payload, "csv")
    else:
        doc = {
            "rows": rows,
            "mu0_defining_formula": float(co.mu[0]),
            "mu0_text_convention": co.mu_text_convention_mu0,
            "working_digits": co.working_digits,
        }
        _deliver(ctx, rc, out_path, reporting.emit_report(doc, "json"), "json")


@cli.command()
@click.option("--n-max", type=int, default=10, show_default=True)
@shared_options
@click.pass_context
def weil(ctx, n_max, **kw):
    """Weil form for the Li family; exit 2 if pair positivity fails."""
    flags, out_path = _pop_shared(kw)
    rc = _resolve(ctx, flags)
    zset = _load_zero_set(rc)
    co = liweil.laurent_coefficients(max(1, n_max - 1))
    rows = []
    breach = None
    for n in range(1, n_max + 1):
        rep = liweil.weil_form(testfn.assoc_laguerre_tf(n), zset)
        two_lambda = 2.0 * liweil.li_mu(n, co)
        rows.append({
            "n": n,
            "lhs": rep.lhs_zero_sum,
            "lhs_tail": rep.lhs_tail,
            "rhs": rep.rhs_total,
            "two_lambda_mu": two_lambda,
            "lhs_vs_two_lambda": abs(rep.lhs_zero_sum - two_lambda),
            "min_pair_term": rep.min_pair_term,
        })
        if rep.min_pair_term < 0:
            breach = f"negative pair term at n={n}"
    doc = {"zero_count": len(zset), "rows": rows}
    _deliver(ctx, rc, out_path, reporting.emit_report(doc, "json"), "json")
    if breach:
        raise ValidationFailure(breach)


@cli.command("explicit-check")
@click.option("--s", "s_value", type=float, default=2.0, show_default=True)
@click.option("--limit", type=int, default=10 ** 6, show_default=True)
@shared_options
@click.pass_context
def explicit_check(ctx, s_value, limit, **kw):
    """Compare the arithmetic and analytic sides of the weighted identity
    for g = 1 at real s > 1."""
    flags, out_path = _pop_shared(kw)
    rc = _resolve(ctx, flags)
    if s_value <= 1.0:
        raise click.UsageError("--s must exceed 1 for the arithmetic side")
    table = arith.sieve(limit)
    g = testfn.poly_tf(0)
    pe = arith.prime_expectation(g, s_value, table)
    zset = _load_zero_set(rc)
    rep = engine.general_rhs(g, s_value, zset, trivial_cutoff=rc.trivial_cutoff)
    arith_side = pe.corrected.real
    analytic_side = rep.total_with_tails.real
    doc = {
        "s": s_value,
        "sieve_limit": limit,
        "zero_count": len(zset),
        "arithmetic_side": arith_side,
        "analytic_side": analytic_side,
        "difference": arith_side - analytic_side,
        "report": rep.to_dict(),
    }
    _deliver(ctx, rc, out_path, reporting.emit_report(doc, "json"), "json")


@cli.command()
@shared_options
@click.pass_context
def selftest(ctx, **kw):
    """Run the invariant battery; exit 2 on any breach."""
    flags, _ = _pop_shared(kw)
    rc = _resolve(ctx, flags)
    rng = np.random.default_rng(rc.seed)
    checks: list[tuple[str, bool, str]] = []

    def check(name: str, ok: bool, detail: str):
        checks.append((name, bool(ok), detail))
        click.echo(f"{'PASS' if ok else 'FAIL'}  {name}  ({detail})")

    from mpmath import mp

    cfg = ZetaEvalConfig(working_digits=rc.working_digits)
    with mp.workdps(40):
        v = zetacore.neg_zeta_log_deriv(0, cfg)
        d = abs(v + mp.log(2 * mp.pi))
        check("log-derivative anchor at 0", d < 1e-10, f"|diff|={float(d):.2e}")

    co = liweil.laurent_coefficients(20)
    worst = max(abs(liweil.zero_power_sum(k, co).difference)
                for k in range(1, 21))
    check("zero power sums: eta vs mu routes", worst < 1e-9,
          f"max diff={worst:.2e}")

    with mp.workdps(40):
        seed_val = float(1 + (mp.euler - mp.log(4 * mp.pi)) / 2)
    d = abs(liweil.li_eta(1, co) - seed_val)
    check("Li seed value", d < 1e-12, f"|diff|={d:.2e}")

    has_table = bool(zeros.bundled_zero_table() or rc.zeros_path or rc.zeros_url)
    zset = _load_zero_set(rc, count=10 ** 5) if has_table \
        else zeros.find_zeros(500)
    full = len(zset) >= 10 ** 5
    worst_ratio = 0.0
    for n in range(1, 11 if full else 6):
        le = liweil.li_eta(n, co)
        lm = liweil.li_mu(n, co)
        ld = liweil.li_direct(n, zset)
        tol = max(1e-3, n * 1e-4) if full else 1e-2
        worst_ratio = max(worst_ratio,
                          abs(le - lm) / 1e-9,
                          abs(le - ld.corrected) / tol)
    check("route triangle", worst_ratio < 1.0, f"worst ratio={worst_ratio:.2e}")

    worst = 0.0
    for n in (1, 7, 25, 40):
        for _ in range(100):
            s = 10.0 * np.exp(2j * np.pi * rng.random())
            worst = max(worst, testfn.sum_prod_check(n, complex(s)))
    check("sum=product identity", worst < 1e-11, f"max residual={worst:.2e}")

    g = testfn.assoc_laguerre_tf(3)
    gg = testfn.involution(testfn.involution(g))
    worst = max(
        abs(gg.transform_eval(s) - g.transform_eval(s))
        for s in (0.3 + 4j, 2.0 - 1j, -3.0 + 0.25j)
    )
    check("involution self-inverse", worst < 1e-13, f"max diff={worst:.2e}")

    worst = max(testfn.transform_fidelity(h, samples=5, seed=rc.seed)
                for h in (testfn.poly_tf(2), testfn.exp_tf(-1.0),
                          testfn.laguerre_tf(6), testfn.assoc_laguerre_tf(4)))
    check("transform fidelity (quadrature)", worst < 1e-8, f"max diff={worst:.2e}")

    below = zset.count_below(100.0)
    d0 = abs(float(zset.ordinates[0]) - 14.134725)
    check("zero-set anchor", below == 29 and d0 < 1e-6,
          f"N(100)={below}, first-ordinate diff={d0:.2e}")

    rep = engine.psi_analytic(10.5, zset.first(min(len(zset), 1000)))
    d = abs(rep.total - rep.readd())
    check("report re-addition identity", d <= 1e-15, f"|diff|={d:.2e}")

    bad = [name for name, ok, _ in checks if not ok]
    if bad:
        raise ValidationFailure("failed: " + ", ".join(bad))
    click.echo(f"all {len(checks)} selftest checks passed")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False, obj={})
        return 0
    except click.UsageError as exc:
        exc.show(file=sys.stderr)
        return 1
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return 1
    except click.exceptions.Abort:
        return 1
    except ValidationFailure as exc:
        click.echo(f"validation failure: {exc}", err=True)
        return 2
    except EflError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        return 3


if __name__ == "__main__":
    sys.exit(main())
