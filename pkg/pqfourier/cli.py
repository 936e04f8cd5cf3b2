"""
CLI interface for the pqfourier engine.

This module provides a command-line interface for local Fourier transforms,
Kac-Schwarz connections and the W-Q and p-q duality checks.
"""

import json
import logging
import sys
from math import gcd
from typing import Any, Dict, List, Optional

import click

from .companion import (
    check_pq_duality,
    companion_matrix,
    exponents_to_dict,
    formal_reduction,
    gauge_B,
    nabla,
    nabla_hat,
)
from .config import MIN_PRECISION, Settings
from .connection import ExponentialFactor, slope, to_factor
from .diffop import verify_rho_identity
from .errors import ParseError
from .fourier import fourier_factor
from .kac_schwarz import check_wq_duality, ks_connection, ks_dual_connection
from .models import Convention, DualityReport
from .series import GRAMMAR, Poly, PuiseuxSeries, format_series, parse

EXIT_FAILED = 1
EXIT_ERROR = 2


class PqFourierCLI:
    """CLI wrapper for engine operations."""

    def __init__(self, settings: Optional[Settings] = None):
        """Initialize CLI with run settings."""
        self.settings = settings or Settings()
        self.logger = logging.getLogger(__name__)

    def parse_poly(self, text: str, label: str) -> Poly:
        """Parse polynomial input."""
        series = parse(text)
        if not isinstance(series, Poly):
            raise ValueError(f"{label} must be a polynomial, got {text}")
        return series.relabel("z") if series.var != "z" else series

    def parse_factor(self, text: str, ramification: Optional[int] = None) -> ExponentialFactor:
        """Parse an exponent series, optionally presented at a given ramification."""
        series: PuiseuxSeries = parse(text)
        if ramification is not None:
            if ramification < 1:
                raise ValueError("Ramification must be positive")
            if ramification % series.ramification:
                raise ValueError(
                    f"Exponents of {text} do not fit ramification {ramification}")
            series = series.at_ramification(ramification)
        return ExponentialFactor(series)

    def output(self, data: Dict[str, Any], lines: List[str], as_json: bool):
        """Print a report as JSON or text."""
        if as_json or self.settings.json_output:
            click.echo(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False))
        else:
            for line in lines:
                click.echo(line)

    def fail(self, ctx: click.Context, error: Exception):
        """Report an error and exit with the error code."""
        self.logger.error("%s failed: %s", ctx.info_name, error)
        click.echo(f"❌ Error: {error}", err=True)
        if isinstance(error, ParseError):
            click.echo(f"Grammar: {GRAMMAR}", err=True)
        ctx.exit(EXIT_ERROR)

    def report_lines(self, title: str, report: DualityReport) -> List[str]:
        lines = [
            f"\n🔁 {title}",
            f"{'=' * 50}",
            f"holds={'true' if report.holds else 'false'}",
            f"LHS: {report.lhs}",
            f"RHS: {report.rhs}",
        ]
        if report.twists:
            lines.append(f"Twists: {', '.join(str(k) for k in report.twists)}")
        for note in report.notes:
            lines.append(f"Note: {note}")
        return lines


class GrammarGroup(click.Group):
    """Command group that prints the input grammar after usage errors."""

    def make_context(self, *args, **kwargs):
        try:
            return super().make_context(*args, **kwargs)
        except click.UsageError:
            click.echo(f"Grammar: {GRAMMAR}", err=True)
            raise

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except click.UsageError:
            click.echo(f"Grammar: {GRAMMAR}", err=True)
            raise


@click.group(cls=GrammarGroup)
@click.option('--log-level', default='WARNING',
              type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False),
              help='Logging level (logs go to stderr)')
@click.option('--precision', type=int, default=None,
              help=f'Initial precision target (at least {MIN_PRECISION})')
@click.option('--convention', default='dual', type=click.Choice(['dual', 'section']),
              help='Reading of diagonal exponents of matrix connections')
@click.pass_context
def cli(ctx, log_level, precision, convention):
    """Local Fourier transforms and p-q duality CLI"""
    logging.basicConfig(level=getattr(logging, log_level.upper()), stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s')
    ctx.ensure_object(dict)
    try:
        settings = Settings(precision=precision, convention=Convention(convention))
    except ValueError as e:
        click.echo(f"❌ Error: {e}", err=True)
        ctx.exit(EXIT_ERROR)
    ctx.obj['cli'] = PqFourierCLI(settings)


@cli.command()
@click.option('--f', 'f_text', required=True, help='Exponent series, e.g. "x^(-5/3)"')
@click.option('--ram', type=int, default=None, help='Ramification of the factor')
@click.option('--json', 'as_json', is_flag=True, help='Print JSON')
@click.pass_context
def fourier(ctx, f_text, ram, as_json):
    """Fourier transform of an exponential factor."""
    pq_cli = ctx.obj['cli']

    try:
        e = pq_cli.parse_factor(f_text, ram)
        result = fourier_factor(e, pq_cli.settings.precision)
        pq_cli.output(result.to_dict(), [
            f"\n📐 Local Fourier transform",
            f"{'=' * 50}",
            f"Input: {e}",
            f"Output: {result}",
            f"Slope: {slope(e)} -> {slope(result)}",
        ], as_json)
    except ValueError as e:
        pq_cli.fail(ctx, e)


def _connection_command(ctx, w_text, q_text, as_json, dual):
    pq_cli = ctx.obj['cli']

    try:
        W = pq_cli.parse_poly(w_text, 'W')
        Q = pq_cli.parse_poly(q_text, 'Q')
        build = ks_dual_connection if dual else ks_connection
        connection = build(W, Q, pq_cli.settings.precision)
        e = to_factor(connection)
        data = {"connection": connection.to_dict(), "factor": e.to_dict()}
        pq_cli.output(data, [
            f"\n🔗 {'Dual Kac-Schwarz' if dual else 'Kac-Schwarz'} connection",
            f"{'=' * 50}",
            f"W = {W}, Q = {Q}",
            f"Connection: {connection}",
            f"Factor: {e}",
            f"Slope: {slope(e)}",
        ], as_json)
    except ValueError as e:
        pq_cli.fail(ctx, e)


@cli.command()
@click.option('--w', 'w_text', required=True, help='Polynomial W(z)')
@click.option('--q', 'q_text', required=True, help='Polynomial Q(z)')
@click.option('--json', 'as_json', is_flag=True, help='Print JSON')
@click.pass_context
def ks(ctx, w_text, q_text, as_json):
    """Kac-Schwarz connection of the (W, Q) model."""
    _connection_command(ctx, w_text, q_text, as_json, dual=False)


@cli.command('ks-dual')
@click.option('--w', 'w_text', required=True, help='Polynomial W(z)')
@click.option('--q', 'q_text', required=True, help='Polynomial Q(z)')
@click.option('--json', 'as_json', is_flag=True, help='Print JSON')
@click.pass_context
def ks_dual(ctx, w_text, q_text, as_json):
    """Dual Kac-Schwarz connection of the (W, Q) model."""
    _connection_command(ctx, w_text, q_text, as_json, dual=True)


@cli.command()
@click.option('--w', 'w_text', required=True, help='Polynomial W(z) of odd degree')
@click.option('--q', 'q_text', required=True, help='Polynomial Q(z)')
@click.option('--force', is_flag=True, help='Compute even when deg W is even')
@click.option('--json', 'as_json', is_flag=True, help='Print JSON')
@click.pass_context
def duality(ctx, w_text, q_text, force, as_json):
    """Check the W-Q duality of a model."""
    pq_cli = ctx.obj['cli']

    try:
        W = pq_cli.parse_poly(w_text, 'W')
        Q = pq_cli.parse_poly(q_text, 'Q')
        report = check_wq_duality(W, Q, force, pq_cli.settings.precision)
    except ValueError as e:
        pq_cli.fail(ctx, e)
        return
    pq_cli.output(report.to_dict(), pq_cli.report_lines('W-Q duality', report), as_json)
    if not report.holds:
        ctx.exit(EXIT_FAILED)


@cli.command()
@click.option('--p', type=int, required=True, help='Degree p')
@click.option('--q', type=int, required=True, help='Degree q, coprime to p')
@click.option('--json', 'as_json', is_flag=True, help='Print JSON')
@click.pass_context
def companion(ctx, p, q, as_json):
    """Companion matrix M(p, q) and gauge matrix B."""
    pq_cli = ctx.obj['cli']

    try:
        M = companion_matrix(p, q)
        B = gauge_B(p, q)
        pq_cli.output({"M": M.to_dict(), "B": B.to_dict()}, [
            f"\n🧮 Companion matrix M({p},{q}), x = z^{p}",
            f"{'=' * 50}",
            str(M),
            f"\nGauge matrix B",
            str(B),
        ], as_json)
    except ValueError as e:
        pq_cli.fail(ctx, e)


@cli.command()
@click.option('--p', type=int, required=True, help='Degree p')
@click.option('--q', type=int, required=True, help='Degree q, coprime to p')
@click.option('--hat', is_flag=True, help='Use the hatted connection')
@click.option('--depth', type=int, default=None, help='Orders below the leading one')
@click.option('--json', 'as_json', is_flag=True, help='Print JSON')
@click.pass_context
def diag(ctx, p, q, hat, depth, as_json):
    """Formal diagonalization of a companion connection."""
    pq_cli = ctx.obj['cli']

    try:
        mc = nabla_hat(p, q) if hat else nabla(p, q)
        reduction = formal_reduction(mc, depth)
        residual = reduction.residual_orders()
        lines = [
            f"\n🧩 Diagonal exponents of {'nabla_hat' if hat else 'nabla'}({p},{q})",
            f"{'=' * 50}",
        ]
        lines.extend(f"gamma_{k + 1} = {format_series(g, reciprocal=True, var='z')}"
                     for k, g in enumerate(reduction.exponents))
        lines.append("Residual: none" if not residual else f"Residual at orders {residual}")
        pq_cli.output({"exponents": exponents_to_dict(reduction.exponents),
                       "residual_orders": residual}, lines, as_json)
    except ValueError as e:
        pq_cli.fail(ctx, e)


@cli.command('pq-duality')
@click.option('--p', type=int, required=True, help='Odd degree p')
@click.option('--q', type=int, required=True, help='Degree q, coprime to p')
@click.option('--force', is_flag=True, help='Compute even when p is even')
@click.option('--convention', default=None, type=click.Choice(['dual', 'section']),
              help='Override the global convention')
@click.option('--depth', type=int, default=None, help='Diagonalization depth')
@click.option('--json', 'as_json', is_flag=True, help='Print JSON')
@click.pass_context
def pq_duality(ctx, p, q, force, convention, depth, as_json):
    """Check the p-q duality of companion connections."""
    pq_cli = ctx.obj['cli']
    chosen = Convention(convention) if convention else pq_cli.settings.convention

    try:
        report = check_pq_duality(p, q, force, chosen, depth)
    except ValueError as e:
        pq_cli.fail(ctx, e)
        return
    pq_cli.output(report.to_dict(), pq_cli.report_lines('p-q duality', report), as_json)
    if not report.holds:
        ctx.exit(EXIT_FAILED)


@cli.command('rho-check')
@click.option('--p', type=int, default=None, help='Degree p')
@click.option('--q', type=int, default=None, help='Degree q')
@click.option('--up-to', type=int, default=None, help='Check every coprime pair up to N')
@click.option('--json', 'as_json', is_flag=True, help='Print JSON')
@click.pass_context
def rho_check(ctx, p, q, up_to, as_json):
    """Verify the correction-factor identity for monomial operators."""
    pq_cli = ctx.obj['cli']

    try:
        if up_to is not None:
            pairs = [(a, b) for a in range(1, up_to + 1) for b in range(1, up_to + 1)
                     if gcd(a, b) == 1]
        elif p is not None and q is not None:
            pairs = [(p, q)]
        else:
            raise ValueError("Give --p and --q, or --up-to")
        results = [(a, b, verify_rho_identity(a, b)) for a, b in pairs]
    except ValueError as e:
        pq_cli.fail(ctx, e)
        return
    data = {"results": [{"p": a, "q": b, "holds": ok} for a, b, ok in results]}
    pq_cli.output(data, [f"({a},{b}): {'✅' if ok else '❌'}" for a, b, ok in results], as_json)
    if not all(ok for _, _, ok in results):
        ctx.exit(EXIT_FAILED)


def main():
    """Main entry point for CLI."""
    cli()


if __name__ == '__main__':
    main()
