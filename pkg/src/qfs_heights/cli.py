"""
Command-line interface for qfs_heights.

Data rows go to stdout as TSV or JSON; logs and human-readable summaries go
to stderr. Exit status is 0 on success with every cross-check agreeing, 2
when two routes disagree and 1 on usage or computation errors.

Usage:
    ./qfs height dieudonne --h 2 --p 3 --e 3
    ./qfs height logcy --delta "2/3:0,2/3:1,2/3:inf" --p 3 --e 1
    ./qfs search p1 --delta "2/3:0,2/3:1,2/3:inf" --p 5 --e 1 --n-max 3
    ./qfs table logcy --case ii --p-max 20 --e 2 --format json
    ./qfs --workers 4 check all --grid full
"""

import logging
import sys
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence

import click
import typer
from rich.console import Console
from rich.logging import RichHandler

from qfs_heights.cache import get_cache
from qfs_heights.config import config
from qfs_heights.divisors import parse_divisor
from qfs_heights.errors import QFSError
from qfs_heights.finite_field import get_field
from qfs_heights.qfs_direct import SplitQuery, diagnostics
from qfs_heights.report import ReportRow, render, summarize
from qfs_heights.tables import (
    abelian_row,
    dieudonne_row,
    grid_tasks,
    logcy_row,
    monotone_in_e,
    run_rows,
    search_row,
    table_tasks,
    verify_row,
)

logger = logging.getLogger(__name__)

err_console = Console(stderr=True)
console = Console()


class OutputFormat(str, Enum):
    tsv = 'tsv'
    json = 'json'


class Route(str, Enum):
    table = 'table'
    cover = 'cover'
    both = 'both'


class Case(str, Enum):
    i = 'i'
    ii = 'ii'
    iii = 'iii'
    iv = 'iv'


class Grid(str, Enum):
    small = 'small'
    full = 'full'


@dataclass
class RunOptions:
    workers: int = 1
    dump: bool = False


app = typer.Typer(
    name='qfs',
    help="Quasi-F-split heights: Dieudonne modules, log Calabi-Yau tables and direct verification on P^1.",
    no_args_is_help=True,
    add_completion=False,
)
height_app = typer.Typer(help="Compute a height by the closed-form routes.", no_args_is_help=True)
verify_app = typer.Typer(help="Decide n-quasi-F^e-splitting at a single n.", no_args_is_help=True)
search_app = typer.Typer(help="Search for the least n with n-quasi-F^e-splitting.", no_args_is_help=True)
table_app = typer.Typer(help="Emit theorem tables.", no_args_is_help=True)
check_app = typer.Typer(help="Cross-check every route on a parameter grid.", no_args_is_help=True)
config_app = typer.Typer(help="Inspect the configuration.", no_args_is_help=True)

app.add_typer(height_app, name='height')
app.add_typer(verify_app, name='verify')
app.add_typer(search_app, name='search')
app.add_typer(table_app, name='table')
app.add_typer(check_app, name='check')
app.add_typer(config_app, name='config')


def setup_logging(level: str) -> None:
    """Route library logs to a rich handler on stderr."""
    numeric = logging.getLevelName(level.upper())
    if not isinstance(numeric, int):
        raise typer.BadParameter(f"unknown log level {level!r}", param_hint='--log-level')
    logging.basicConfig(
        level=numeric,
        format='%(message)s',
        datefmt='[%X]',
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def _options(ctx: typer.Context) -> RunOptions:
    return ctx.obj if isinstance(ctx.obj, RunOptions) else RunOptions()


def emit(rows: List[ReportRow], fmt: OutputFormat) -> None:
    """Write rows to stdout; exit 2 if any cross-check disagrees."""
    sys.stdout.write(render(rows, fmt.value))
    sys.stdout.flush()
    summary = summarize(rows)
    if summary['disagreements']:
        err_console.print(f"[red]{summary['disagreements']} of {summary['checked']} checked rows disagree[/red]")
        raise typer.Exit(code=2)


@app.callback()
def main(
    ctx: typer.Context,
    log_level: str = typer.Option('WARNING', '--log-level', help="Logging level for stderr."),
    workers: int = typer.Option(1, '--workers', min=1, help="Worker processes for independent rows."),
    dump: bool = typer.Option(False, '--dump', help="Write direct-verifier diagnostics to stderr."),
):
    """Quasi-F-split heights."""
    setup_logging(log_level)
    ctx.obj = RunOptions(workers=workers, dump=dump)


# ----------------------------------------------------------------------
# height

@height_app.command('dieudonne')
def height_dieudonne(
    h: int = typer.Option(..., '--h', min=1, help="Artin-Mazur height."),
    p: int = typer.Option(..., '--p', help="Characteristic."),
    e: int = typer.Option(..., '--e', min=1, help="Frobenius exponent."),
    n_max: Optional[int] = typer.Option(None, '--n-max', min=1, help="Search bound (default: e h - e + 2)."),
    fmt: OutputFormat = typer.Option(OutputFormat.tsv, '--format', help="Output format."),
):
    """Height of a Calabi-Yau variety: membership engine and closed form."""
    emit([dieudonne_row(h, p, e, n_max)], fmt)


@height_app.command('abelian')
def height_abelian(
    g: int = typer.Option(..., '--g', min=1, help="Dimension."),
    f: int = typer.Option(..., '--f', min=0, help="p-rank."),
    e: int = typer.Option(..., '--e', min=1, help="Frobenius exponent."),
    fmt: OutputFormat = typer.Option(OutputFormat.tsv, '--format', help="Output format."),
):
    """Height of an abelian variety from its p-rank."""
    emit([abelian_row(g, f, e)], fmt)


@height_app.command('logcy')
def height_logcy(
    delta: str = typer.Option(..., '--delta', help="Divisor literal, e.g. 2/3:0,2/3:1,2/3:inf."),
    p: int = typer.Option(..., '--p', help="Characteristic."),
    e: int = typer.Option(..., '--e', min=1, help="Frobenius exponent."),
    route: Route = typer.Option(Route.both, '--route', help="table, cover or both."),
    m: int = typer.Option(1, '--m', min=1, help="Points lie in F_{p^m}."),
    fmt: OutputFormat = typer.Option(OutputFormat.tsv, '--format', help="Output format."),
):
    """Height of a log Calabi-Yau pair (P^1, delta)."""
    emit([logcy_row(delta, p, e, route.value, m)], fmt)


# ----------------------------------------------------------------------
# direct verifier

def _dump(ctx: typer.Context, delta: str, p: int, n: int, e: int, m: int) -> None:
    if _options(ctx).dump:
        field = get_field(p, m)
        query = SplitQuery(p, parse_divisor(delta, field), n, e, field)
        err_console.print(diagnostics(query), end='', markup=False, highlight=False)


@verify_app.command('p1')
def verify_p1(
    ctx: typer.Context,
    delta: str = typer.Option(..., '--delta', help="Divisor literal with floor(delta) = 0."),
    p: int = typer.Option(..., '--p', help="Characteristic."),
    n: int = typer.Option(..., '--n', min=1, help="Witt length."),
    e: int = typer.Option(..., '--e', min=1, help="Frobenius exponent."),
    m: int = typer.Option(1, '--m', min=1, help="Points lie in F_{p^m}."),
    fmt: OutputFormat = typer.Option(OutputFormat.tsv, '--format', help="Output format."),
):
    """Is (P^1, delta) n-quasi-F^e-split?"""
    row = verify_row(delta, p, n, e, m)
    _dump(ctx, delta, p, n, e, m)
    emit([row], fmt)


@search_app.command('p1')
def search_p1(
    ctx: typer.Context,
    delta: str = typer.Option(..., '--delta', help="Divisor literal with floor(delta) = 0."),
    p: int = typer.Option(..., '--p', help="Characteristic."),
    e: int = typer.Option(..., '--e', min=1, help="Frobenius exponent."),
    n_max: int = typer.Option(..., '--n-max', min=1, help="Largest Witt length tried."),
    m: int = typer.Option(1, '--m', min=1, help="Points lie in F_{p^m}."),
    fmt: OutputFormat = typer.Option(OutputFormat.tsv, '--format', help="Output format."),
):
    """Least n <= n-max with (P^1, delta) n-quasi-F^e-split."""
    row = search_row(delta, p, e, n_max, m)
    _dump(ctx, delta, p, n_max, e, m)
    emit([row], fmt)


# ----------------------------------------------------------------------
# tables and grids

@table_app.command('logcy')
def table_logcy(
    ctx: typer.Context,
    case: Case = typer.Option(..., '--case', help="Log Calabi-Yau case i, ii, iii or iv."),
    p_max: int = typer.Option(..., '--p-max', min=2, help="Largest prime."),
    e: int = typer.Option(..., '--e', min=1, help="Frobenius exponent."),
    lam: str = typer.Option('-1', '--lam', help="Fourth point of case iv (field literal)."),
    route: Route = typer.Option(Route.table, '--route', help="table, cover or both."),
    fmt: OutputFormat = typer.Option(OutputFormat.tsv, '--format', help="Output format."),
):
    """Heights of one case for every prime p <= p-max."""
    tasks = table_tasks(case.value, p_max, e, lam, route.value)
    emit(run_rows(tasks, _options(ctx).workers), fmt)


@check_app.command('all')
def check_all(
    ctx: typer.Context,
    grid: Grid = typer.Option(Grid.small, '--grid', help="small or full."),
    fmt: OutputFormat = typer.Option(OutputFormat.tsv, '--format', help="Output format."),
):
    """Run every cross-check of the grid; exit 2 on any disagreement."""
    tasks = grid_tasks(grid.value)
    logger.info("running %d rows of the %s grid", len(tasks), grid.value)
    rows = run_rows(tasks, _options(ctx).workers, progress=err_console.is_terminal)
    violations = monotone_in_e(rows)
    for v in violations:
        err_console.print(f"[red]not monotone in e:[/red] {v}")
    sys.stdout.write(render(rows, fmt.value))
    summary = summarize(rows)
    err_console.print(f"{summary['rows']} rows, {summary['checked']} checked, "
                      f"{summary['disagreements']} disagreements, {len(violations)} monotonicity violations")
    if summary['disagreements'] or violations:
        raise typer.Exit(code=2)


@config_app.command('show')
def config_show():
    """Print the resolved configuration, its validation and the polynomial cache."""
    console.print(str(config), markup=False, highlight=False)
    console.print()
    console.print("[bold]Validation[/bold]")
    for name, info in config.validate().items():
        ok = info.get('exists', info.get('valid'))
        mark = '[green]ok[/green]' if ok else '[yellow]missing[/yellow]'
        console.print(f"  {name}: {mark}")
    stats = get_cache().get_stats()
    console.print()
    console.print("[bold]Polynomial cache[/bold]")
    console.print(f"  entries: {stats['entries']} ({stats['stale']} stale), {stats['total_size_kb']} KB",
                  highlight=False)
    console.print(f"  directory: {stats['cache_dir']}", markup=False, highlight=False)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI in-process and return its exit status."""
    args = list(sys.argv[1:] if argv is None else argv)
    try:
        result = app(args=args, prog_name='qfs', standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return 1
    except click.exceptions.Abort:
        err_console.print("aborted")
        return 1
    except QFSError as e:
        err_console.print(f"[red]error:[/red] {e}")
        return 1
    return result if isinstance(result, int) else 0
