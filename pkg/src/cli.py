"""Command-line front end for higher-order Gini deviations and coefficients."""

import sys
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import typer

try:  # newer typer vendors click; its exceptions are not the standalone click's
    from typer._click import exceptions as click
except ImportError:
    import click
from dependency_injector import providers
from rich.console import Console

from .application.dto.reports import PanelError
from .domain.exceptions import ConvergenceError, GiniDomainError, GroupedDataError
from .domain.value_objects.gini_order import GiniOrder
from .domain.value_objects.gini_target import GiniTarget
from .domain.value_objects.score_variant import ScoreKind, ScoreVariant
from .domain.value_objects.weight_scheme import WeightScheme
from .infrastructure.config.settings import GiniSettings
from .infrastructure.container.container import Container
from .infrastructure.io.percentile_csv import panel_records, parse_percentile_csv
from .infrastructure.io.sample_io import read_sample, read_tuples
from .infrastructure.logging.rich_logging import configure_logging, err_console
from .presentation.formatters import OutputFormat, emit, render_csv, render_json

app = typer.Typer(
    name="ginin",
    help="Higher-order Gini deviations GD_n and coefficients GC_n.",
    rich_markup_mode="rich",
    no_args_is_help=True,
    pretty_exceptions_enable=False,
)

console = Console()


class BoundKind(str, Enum):
    SD = "sd"
    RATIO = "ratio"
    CHOQUET = "choquet"


@dataclass
class CliState:
    container: Container
    settings: GiniSettings
    fmt: OutputFormat


def _state(ctx: typer.Context) -> CliState:
    state = ctx.find_root().obj
    if not isinstance(state, CliState):
        raise click.UsageError("global options were not initialised")
    return state


def _floats(text: str, name: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise typer.BadParameter(f"{name} must be comma-separated numbers, got {text!r}")


@app.callback()
def main_options(
    ctx: typer.Context,
    seed: int | None = typer.Option(None, "--seed", help="RNG seed (default GININ_SEED or 0)"),
    threads: int | None = typer.Option(None, "--threads", min=1, help="Replication worker threads"),
    fmt: OutputFormat = typer.Option(OutputFormat.CSV, "--format", help="Output format"),
    log_level: str | None = typer.Option(None, "--log-level", help="Logging level on stderr"),
) -> None:
    """Compute, estimate, bound and elicit higher-order Gini indices."""
    settings = GiniSettings.from_env()
    if seed is not None:
        settings.seed = seed
    if threads is not None:
        settings.threads = threads
    if log_level is not None:
        settings.log_level = log_level.upper()
    try:
        configure_logging(settings.log_level)
    except ValueError as exc:
        raise typer.BadParameter(str(exc), param_hint="--log-level")
    if settings.seed < 0:
        raise typer.BadParameter("seed must be nonnegative", param_hint="--seed")

    container = Container()
    container.settings.override(providers.Object(settings))
    ctx.obj = CliState(container=container, settings=settings, fmt=fmt)


@app.command()
def compute(
    ctx: typer.Context,
    dist: str = typer.Option(..., "--dist", help="Distribution, e.g. exponential:1 or pareto:3,2"),
    order: str = typer.Option(..., "--order", help="Order n or a list n1,n2,..."),
    quadrature: bool = typer.Option(False, "--quadrature", help="Skip closed forms"),
) -> None:
    """GD_n and GC_n of a parametric distribution."""
    state = _state(ctx)
    service = state.container.parametric_service()
    distribution = service.parse(dist)
    orders = GiniOrder.parse_list(order)
    if not orders:
        raise typer.BadParameter("at least one order is required", param_hint="--order")
    if quadrature:
        rows = []
        for n in orders:
            gd, gc = service.gd_gc_quadrature(distribution, n)
            rows.append({"distribution": distribution.label, "n": int(n), "gd": gd, "gc": gc, "method": "quadrature"})
        emit(rows, state.fmt, console, title="GD_n / GC_n")
    else:
        emit(service.compute(distribution, orders), state.fmt, console, title="GD_n / GC_n")


@app.command()
def estimate(
    ctx: typer.Context,
    input_path: Path = typer.Option(..., "--input", exists=True, dir_okay=False, help="One value per line"),
    order: int = typer.Option(..., "--order", help="Gini order n"),
    target: GiniTarget = typer.Option(GiniTarget.GD, "--target"),
    scheme: WeightScheme = typer.Option(WeightScheme.PAPER, "--scheme"),
    bootstrap: int = typer.Option(1000, "--bootstrap", min=1, help="Bootstrap resamples"),
    level: float = typer.Option(0.95, "--level", help="Confidence level"),
    dist: str | None = typer.Option(None, "--dist", help="Reference law for a plug-in asymptotic interval"),
) -> None:
    """Point estimate with a confidence interval from a sample file."""
    state = _state(ctx)
    service = state.container.estimation_service()
    sample = read_sample(input_path)
    if dist is not None:
        distribution = state.container.parametric_service().parse(dist)
        report = service.plugin_asymptotic_report(sample, order, target, level, distribution, scheme)
    else:
        report = service.bootstrap_ci(sample, order, target, level, bootstrap, state.settings.seed, scheme)
    emit(report, state.fmt, console, title="estimate")


@app.command()
def simulate(
    ctx: typer.Context,
    dist: str = typer.Option(..., "--dist"),
    order: int = typer.Option(..., "--order"),
    sample_size: int = typer.Option(..., "--sample-size", min=2),
    reps: int = typer.Option(..., "--reps", min=1),
    target: GiniTarget = typer.Option(GiniTarget.GD, "--target"),
    scheme: WeightScheme = typer.Option(WeightScheme.PAPER, "--scheme"),
    compare: bool = typer.Option(True, "--compare/--no-compare", help="Compare with the normal limit"),
) -> None:
    """Sampling distribution of the estimator over seeded replications."""
    state = _state(ctx)
    distribution = state.container.parametric_service().parse(dist)
    summary = state.container.estimation_service().simulate_sampling_distribution(
        distribution, order, sample_size, reps, state.settings.seed, target, scheme, compare
    )
    emit(summary, state.fmt, console, title="simulation")


@app.command()
def variance(
    ctx: typer.Context,
    dist: str = typer.Option(..., "--dist"),
    orders: str = typer.Option("2,3,4,5", "--orders"),
) -> None:
    """Asymptotic variances of the GD_n and GC_n estimators."""
    state = _state(ctx)
    distribution = state.container.parametric_service().parse(dist)
    rows = state.container.estimation_service().variance_curve(distribution, GiniOrder.parse_list(orders))
    emit(rows, state.fmt, console, title="asymptotic variance")


@app.command()
def bounds(
    ctx: typer.Context,
    kind: BoundKind = typer.Option(..., "--kind"),
    m: int | None = typer.Option(None, "--m", help="Lower order (ratio, choquet)"),
    n: int | None = typer.Option(None, "--n", help="Order (sd) or upper order (ratio, choquet)"),
    grid: int | None = typer.Option(None, "--grid", help="Witness or scan grid size"),
    h: str | None = typer.Option(None, "--h", help="Power coefficients of h, overriding --n"),
    g: str | None = typer.Option(None, "--g", help="Power coefficients of g, overriding --m"),
) -> None:
    """Sharp bounds and their witnesses."""
    state = _state(ctx)
    service = state.container.bounds_service()
    if kind is BoundKind.SD:
        if n is None:
            raise typer.BadParameter("the SD bound needs --n", param_hint="--n")
        report = service.sd_bound(n, grid or 10_000)
    elif kind is BoundKind.RATIO:
        if m is None or n is None:
            raise typer.BadParameter("ratio bounds need --m and --n")
        report = service.ratio_bounds(m, n)
    else:
        report = service.choquet_bounds(
            m,
            n,
            _floats(h, "--h") if h else None,
            _floats(g, "--g") if g else None,
            grid or 2001,
        )
    emit(report, state.fmt, console, title="bounds")


def _score_variant(variant: ScoreKind, order: int, coefficients: str | None) -> ScoreVariant:
    if variant is ScoreKind.POLY:
        if coefficients is None:
            raise typer.BadParameter("the poly score needs --coeffs", param_hint="--coeffs")
        built = ScoreVariant.poly(_floats(coefficients, "--coeffs"))
        if built.order != order:
            raise typer.BadParameter(f"--coeffs gives {built.order} coefficients for order {order}")
        return built
    return ScoreVariant(variant, GiniOrder(order))


@app.command()
def backtest(
    ctx: typer.Context,
    variant: ScoreKind = typer.Option(..., "--variant"),
    order: int = typer.Option(..., "--order"),
    input_path: Path = typer.Option(..., "--input", exists=True, dir_okay=False),
    a: float = typer.Option(..., "--a", help="Forecast A"),
    b: float = typer.Option(..., "--b", help="Forecast B"),
    coeffs: str | None = typer.Option(None, "--coeffs", help="Poly score coefficients a_1..a_n"),
) -> None:
    """Compare two forecasts under an n-observation score."""
    state = _state(ctx)
    score = _score_variant(variant, order, coeffs)
    tuples = read_tuples(input_path, score.order)
    report = state.container.elicitability_service().comparative_backtest(score, a, b, tuples)
    emit(report, state.fmt, console, title="backtest")


@app.command()
def erm(
    ctx: typer.Context,
    variant: ScoreKind = typer.Option(ScoreKind.GD_M1, "--variant"),
    order: int = typer.Option(..., "--order"),
    input_path: Path = typer.Option(..., "--input", exists=True, dir_okay=False),
    coeffs: str | None = typer.Option(None, "--coeffs"),
    reduced: bool = typer.Option(False, "--reduced", help="Odd n from tuples of n - 1"),
    dist: str | None = typer.Option(None, "--dist", help="Generating law, reported as the target"),
) -> None:
    """Empirical risk minimizer of a score over observation tuples."""
    state = _state(ctx)
    service = state.container.elicitability_service()
    if reduced:
        tuples = read_tuples(input_path, order - 1)
        distribution = state.container.parametric_service().parse(dist) if dist else None
        emit(service.check_n_minus_1_elicitability(order, tuples, distribution), state.fmt, console)
        return
    score = _score_variant(variant, order, coeffs)
    emit(service.erm_report(score, read_tuples(input_path, score.order)), state.fmt, console, title="ERM")


@app.command()
def analyze(
    ctx: typer.Context,
    input_path: Path = typer.Option(..., "--input", exists=True, dir_okay=False),
    orders: str = typer.Option("2,5,10,20", "--orders"),
    shares: str = typer.Option("0.01,0.1", "--shares"),
    allow_nonmonotone: bool | None = typer.Option(
        None, "--allow-nonmonotone/--strict", help="Rearrange decreasing bracket averages"
    ),
) -> None:
    """GC_n and top-share panel for grouped percentile data."""
    state = _state(ctx)
    lenient = state.settings.allow_nonmonotone if allow_nonmonotone is None else allow_nonmonotone
    rejected: list[PanelError] = []

    def reject(entity: str, year: int, exc: GroupedDataError) -> None:
        rejected.append(PanelError(entity=entity, year=year, message=str(exc)))

    data = parse_percentile_csv(input_path, lenient, on_error=reject)
    table = state.container.panel_service().gini_panel(data, GiniOrder.parse_list(orders), _floats(shares, "--shares"))
    table.errors[:0] = rejected
    for error in table.errors:
        err_console.print(f"[yellow]skipped[/yellow] {error.entity} {error.year}: {error.message}", markup=True)
    records = panel_records(table)
    if state.fmt is OutputFormat.JSON:
        typer.echo(render_json(records))
    elif state.fmt is OutputFormat.CSV:
        typer.echo(render_csv(records, table.columns()), nl=False)
    else:
        emit(records, state.fmt, console, title="GC_n panel")


@app.command()
def monotone(
    ctx: typer.Context,
    dist: str = typer.Option(..., "--dist"),
    n_max: int = typer.Option(20, "--n-max", min=2),
    versus: str | None = typer.Option(None, "--versus", help="Second law for GC crossing detection"),
) -> None:
    """GD_n and GC_n over n = 2..n_max, with an optional GC crossing search."""
    state = _state(ctx)
    parametric = state.container.parametric_service()
    other = parametric.parse(versus) if versus else None
    report = state.container.bounds_service().monotonicity(parametric.parse(dist), n_max, other)
    if state.fmt is OutputFormat.JSON:
        emit(report, state.fmt, console)
        return
    rows = []
    for i, n in enumerate(report.orders):
        row: dict[str, object] = {"n": n, "gd": report.gd[i], "gc": report.gc[i] if report.gc else None}
        if report.versus_gc is not None:
            row["versus_gc"] = report.versus_gc[i]
        rows.append(row)
    emit(rows, state.fmt, console, title=f"{report.distribution}, crossing at n={report.crossing_order}")


def run(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and map failures to exit codes: 1 for bad input, 2 for non-convergence."""
    try:
        result = app(args=list(argv) if argv is not None else None, prog_name="ginin", standalone_mode=False)
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return 1
    except click.Abort:
        return 1
    except GiniDomainError as exc:
        err_console.print(f"error: {exc}", markup=False)
        return 1
    except ConvergenceError as exc:
        err_console.print(f"numerical failure: {exc}", markup=False)
        return 2
    return result if isinstance(result, int) else 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
