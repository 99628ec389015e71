"""CLI entry point for algoprob."""

import json
import logging
from enum import Enum
from pathlib import Path
from typing import Annotated

import typer
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from algoprob import __version__
from algoprob.config import Settings, get_settings
from algoprob.models import (
    AlgoProbError,
    Binarization,
    InitialCondition,
    InitMode,
    PatternDistribution,
    SupportPolicy,
    WhichRows,
)

app = typer.Typer(
    name="algoprob",
    help="Experimental algorithmic probability: enumerate machines, sample automata, compare distributions.",
    no_args_is_help=True,
)
console = Console()
err_console = Console(stderr=True)


class OutputFormat(str, Enum):
    JSON = "json"
    CSV = "csv"


class Dims(str, Enum):
    ONE = "1"
    TWO = "2"


def _fail(error: Exception) -> typer.Exit:
    err_console.print(f"[red]Error:[/red] {error}", highlight=False, soft_wrap=True)
    return typer.Exit(1)


def _settings() -> Settings:
    try:
        return get_settings()
    except ValueError as e:
        raise _fail(e)


def _show_version(value: bool) -> None:
    """Print version and exit when --version/-v is provided."""
    if value:
        console.print(f"algoprob {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    version: Annotated[
        bool,
        typer.Option(
            "--version",
            "-v",
            callback=_show_version,
            is_eager=True,
            help="Show algoprob version and exit",
        ),
    ] = False,
    verbose: Annotated[
        bool,
        typer.Option("--verbose", "-V", help="Log progress details to stderr"),
    ] = False,
) -> None:
    """algoprob CLI."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


@app.command()
def version() -> None:
    """Show algoprob version."""
    console.print(f"algoprob {__version__}")


def _write_distribution(d: PatternDistribution, out: Path, fmt: OutputFormat) -> None:
    from algoprob.storage import save_distribution, save_distribution_csv

    if fmt is OutputFormat.CSV:
        save_distribution_csv(d, out)
    else:
        save_distribution(d, out)
    console.print(f"[green]Wrote[/green] {d.support_size} strings to {out}", highlight=False)


def _print_distribution(d: PatternDistribution, title: str, limit: int = 16) -> None:
    from algoprob.distribution import ctm_table

    table = Table(title=title)
    table.add_column("String", style="cyan")
    table.add_column("Count", justify="right")
    table.add_column("Frequency", justify="right")
    table.add_column("CTM (bits)", justify="right")
    entries = d.entries()
    for entry, (_, bits) in list(zip(entries, ctm_table(d)))[:limit]:
        table.add_row(entry.string, str(entry.count), f"{entry.frequency:.6f}", f"{bits:.4f}")
    console.print(table)
    console.print(
        f"{d.contributing_runs}/{d.total_runs} contributing runs, "
        f"{d.support_size} distinct strings"
        + (f" (showing {limit})" if len(entries) > limit else ""),
        highlight=False,
    )


def _emit(d: PatternDistribution, out: Path | None, fmt: OutputFormat, title: str) -> None:
    if out is None:
        _print_distribution(d, title)
    else:
        _write_distribution(d, out, fmt)


StatesOption = Annotated[int, typer.Option("--states", "-n", help="Number of machine states")]
CapOption = Annotated[int | None, typer.Option("--cap", help="Step cap per run (default from config)")]
WorkersOption = Annotated[int | None, typer.Option("--workers", "-w", help="Worker processes (default from config)")]
OutOption = Annotated[Path | None, typer.Option("--out", "-o", help="Write the result to this file")]
FormatOption = Annotated[OutputFormat, typer.Option("--format", help="Distribution file format")]
KOption = Annotated[int, typer.Option("--k", help="Tuple length")]
OverlapOption = Annotated[
    bool, typer.Option("--overlap/--no-overlap", help="Sliding windows or disjoint blocks")
]
SeedOption = Annotated[int | None, typer.Option("--seed", help="Seed (default from config)")]


@app.command("enumerate")
def enumerate_machines(
    states: StatesOption = 1,
    cap: CapOption = None,
    init: Annotated[InitMode, typer.Option("--init", help="Initial tape")] = InitMode.BLANK,
    seg_len: Annotated[int | None, typer.Option("--seg-len", help="Random segment length")] = None,
    samples: Annotated[int | None, typer.Option("--samples", help="Random tapes per machine")] = None,
    seed: SeedOption = None,
    workers: WorkersOption = None,
    mirror: Annotated[
        bool, typer.Option("--mirror/--no-mirror", help="Mirror reduction (blank tape only)")
    ] = False,
    out: OutOption = None,
    fmt: FormatOption = OutputFormat.JSON,
) -> None:
    """Build the output distribution of every halting machine in (n,2)."""
    from algoprob.distribution import build_distribution

    settings = _settings()
    if init is InitMode.RANDOM and seed is None:
        seed = settings.default_seed

    with console.status("[bold blue]Enumerating machines...") as status:
        try:
            d = build_distribution(
                states,
                settings.default_cap if cap is None else cap,
                init_mode=init,
                segment_length=seg_len,
                samples=samples,
                seed=seed,
                workers=workers,
                use_mirror=mirror,
                progress_callback=lambda done, total: status.update(
                    f"[bold blue]Enumerating machines... shard {done}/{total}"
                ),
            )
        except (AlgoProbError, ValueError) as e:
            raise _fail(e)

    try:
        _emit(d, out, fmt, f"({states},2) output distribution")
    except OSError as e:
        raise _fail(e)


@app.command()
def busybeaver(
    states: StatesOption = 2,
    cap: CapOption = None,
    workers: WorkersOption = None,
    mirror: Annotated[
        bool, typer.Option("--mirror/--no-mirror", help="Simulate one machine per mirror pair")
    ] = True,
) -> None:
    """Exhaustive Busy Beaver search: Σ(n) and S(n) under a step cap."""
    from algoprob.machines import busy_beaver_search, decode_machine, format_machine

    settings = _settings()
    with console.status("[bold blue]Searching...") as status:
        try:
            result = busy_beaver_search(
                states,
                settings.default_cap if cap is None else cap,
                workers=workers,
                use_mirror=mirror,
                progress_callback=lambda done, total: status.update(
                    f"[bold blue]Searching... shard {done}/{total}"
                ),
            )
        except (AlgoProbError, ValueError) as e:
            raise _fail(e)

    typer.echo(
        f"sigma={result.sigma} s_max={result.s_max} "
        f"halting={result.halting_count}/{result.total_count}"
    )
    if result.sigma_index is not None:
        champion = format_machine(decode_machine(result.sigma_index, states))
        console.print(f"[dim]sigma champion #{result.sigma_index}: {champion}[/dim]", highlight=False)
    if result.s_max_index is not None:
        champion = format_machine(decode_machine(result.s_max_index, states))
        console.print(f"[dim]s_max champion #{result.s_max_index}: {champion}[/dim]", highlight=False)
    console.print(f"[dim]cap used: {result.cap_used}[/dim]", highlight=False)


@app.command()
def ca(
    dims: Annotated[Dims, typer.Option("--dims", help="1 = elementary, 2 = totalistic 9-neighbor")] = Dims.ONE,
    rule: Annotated[int, typer.Option("--rule", help="Rule number")] = 30,
    width: Annotated[int, typer.Option("--width", help="Cells per row")] = 101,
    height: Annotated[int, typer.Option("--height", help="Rows of the 2D grid")] = 100,
    steps: Annotated[int, typer.Option("--steps", help="Number of updates")] = 100,
    init: Annotated[
        InitialCondition, typer.Option("--init", help="1D initial row")
    ] = InitialCondition.SINGLE,
    seed: SeedOption = None,
    snapshot_every: Annotated[int, typer.Option("--snapshot-every", help="2D snapshot interval")] = 6,
    k: KOption = 4,
    overlap: OverlapOption = True,
    rows: Annotated[WhichRows, typer.Option("--rows", help="Rows sampled for tuples")] = WhichRows.FINAL,
    images: Annotated[
        Path | None, typer.Option("--images", help="Export 2D snapshots as PBM into this directory")
    ] = None,
    show: Annotated[bool, typer.Option("--show", help="Print the 1D space-time diagram")] = False,
    out: OutOption = None,
    fmt: FormatOption = OutputFormat.JSON,
) -> None:
    """Run a cellular automaton and count k-tuples at the cutoff."""
    from algoprob.automata import ca2d_run, cutoff_distribution, eca_run, export_pbm, render_rows

    settings = _settings()
    if seed is None and (dims is Dims.TWO or init is InitialCondition.RANDOM):
        seed = settings.default_seed

    try:
        if dims is Dims.ONE:
            source = eca_run(rule, width, steps, init=init, seed=seed)
            if show:
                console.print(render_rows(source), highlight=False, soft_wrap=True)
        else:
            source = ca2d_run(rule, (height, width), steps, seed=seed, snapshot_every=snapshot_every)
            if images is not None:
                paths = export_pbm(source, images, prefix=f"rule{rule}")
                console.print(f"[green]Exported[/green] {len(paths)} snapshots to {images}", highlight=False)
        d = cutoff_distribution(source, k, overlap=overlap, which_rows=rows)
        _emit(d, out, fmt, f"{dims.value}D rule {rule} cutoff {k}-tuples")
    except (AlgoProbError, ValueError, OSError) as e:
        raise _fail(e)


@app.command()
def ingest(
    file: Annotated[
        Path,
        typer.Option("--file", "-f", help="Data file to read", exists=True, dir_okay=False, resolve_path=True),
    ],
    binarize: Annotated[
        Binarization, typer.Option("--binarize", help="Bytes to bits method")
    ] = Binarization.RAW_BITS,
    k: KOption = 4,
    overlap: OverlapOption = True,
    out: OutOption = None,
    fmt: FormatOption = OutputFormat.JSON,
) -> None:
    """Count the k-tuples of a binarized data file."""
    from algoprob.ingest import read_bitstream, tuple_counts

    try:
        d = tuple_counts(read_bitstream(file, binarize), k, overlap=overlap)
        _emit(d, out, fmt, f"{file.name} {k}-tuples")
    except (AlgoProbError, ValueError, OSError) as e:
        raise _fail(e)


def _load(path: Path) -> PatternDistribution:
    from algoprob.storage import load_distribution

    return load_distribution(path)


@app.command()
def compare(
    a: Annotated[Path, typer.Option("--a", help="First distribution file")],
    b: Annotated[Path, typer.Option("--b", help="Second distribution file")],
    k: KOption = 4,
    policy: Annotated[
        SupportPolicy, typer.Option("--policy", help="Support alignment")
    ] = SupportPolicy.INTERSECTION,
    permutations: Annotated[
        int | None, typer.Option("--permutations", help="Shuffles for the p-value (default from config)")
    ] = None,
    seed: SeedOption = None,
    probe: Annotated[
        list[str] | None, typer.Option("--probe", help="Report the rank of this string (repeatable)")
    ] = None,
    out: OutOption = None,
) -> None:
    """Spearman rank correlation of two distributions with a permutation p-value."""
    from algoprob.ranking import compare_report
    from algoprob.storage import save_report

    try:
        report = compare_report(
            _load(a),
            _load(b),
            k,
            policy=policy,
            permutations=permutations,
            seed=seed,
            probes=probe or [],
        )
        if out is not None:
            save_report(report, out)
    except (AlgoProbError, ValueError, OSError) as e:
        raise _fail(e)

    typer.echo(
        f"rho={report.rho:.6f} p={report.p_value:.6g} pairs={report.pair_count} "
        f"k={report.k} policy={report.support_policy.value}"
    )
    if report.probes:
        table = Table(title="Probe ranks")
        table.add_column("String", style="cyan")
        table.add_column("Rank in a", justify="right")
        table.add_column("Rank in b", justify="right")
        table.add_column("Length rank a", justify="right")
        table.add_column("Length rank b", justify="right")
        for p in report.probes:
            cells = [p.rank_a, p.rank_b, p.length_rank_a, p.length_rank_b]
            table.add_row(p.string, *("-" if c is None else str(c) for c in cells))
        console.print(table)
    if out is not None:
        console.print(f"[green]Wrote[/green] report to {out}", highlight=False)


@app.command()
def symmetry(
    count: Annotated[int | None, typer.Option("--count", help="Orbits among strings of this length")] = None,
    orbit_of: Annotated[str | None, typer.Option("--orbit", help="Show the orbit of this string")] = None,
    collapse: Annotated[
        Path | None, typer.Option("--collapse", help="Collapse this distribution file by symmetry")
    ] = None,
    out: OutOption = None,
    fmt: FormatOption = OutputFormat.JSON,
) -> None:
    """String symmetry group: Burnside counts, orbits, collapsed distributions."""
    from algoprob.symmetry import burnside_count, collapse_by_symmetry, orbit

    if count is None and orbit_of is None and collapse is None:
        err_console.print("Use --count, --orbit or --collapse.")
        raise typer.Exit(2)
    try:
        if count is not None:
            typer.echo(str(burnside_count(count)))
        if orbit_of is not None:
            result = orbit(orbit_of)
            typer.echo(f"{result.canonical}: {' '.join(sorted(result.members))}")
        if collapse is not None:
            d = collapse_by_symmetry(_load(collapse))
            _emit(d, out, fmt, f"{collapse.name} collapsed by symmetry")
    except (AlgoProbError, ValueError, OSError) as e:
        raise _fail(e)


@app.command()
def complexity(
    a: Annotated[Path, typer.Option("--a", help="Distribution file")],
    string: Annotated[
        list[str] | None, typer.Option("--string", "-s", help="String to estimate (repeatable)")
    ] = None,
    length_restricted: Annotated[
        bool, typer.Option("--length-restricted", help="Rank among strings of equal length")
    ] = False,
) -> None:
    """CTM complexity estimates (-log2 frequency) and ranks."""
    from algoprob.distribution import ctm_complexity, rank_of

    try:
        d = _load(a)
        if not string:
            _print_distribution(d, f"{a.name} CTM estimates", limit=d.support_size)
            return
        for s in string:
            bits = ctm_complexity(d, s)
            rank = rank_of(d, s, length_restricted=length_restricted)
            typer.echo(f"{s} ctm={bits:.6f} rank={rank}")
    except (AlgoProbError, ValueError, OSError) as e:
        raise _fail(e)


@app.command()
def pi(
    count: Annotated[int, typer.Option("--count", help="Number of decimal digits")] = 2400,
    compress: Annotated[
        bool, typer.Option("--compress", help="Report compression ratios vs. random digits")
    ] = False,
    seed: SeedOption = None,
    out: OutOption = None,
) -> None:
    """First digits of π by a spigot, optionally with a compressibility report."""
    from algoprob.ingest import compression_report, pi_digits
    from algoprob.storage import write_text_atomic

    try:
        digits = pi_digits(count)
        if out is not None:
            write_text_atomic(out, digits + "\n")
            console.print(f"[green]Wrote[/green] {count} digits to {out}", highlight=False)
        else:
            typer.echo(digits)
        if compress:
            seed = get_settings().default_seed if seed is None else seed
            report = compression_report(count, seed)
            typer.echo(json.dumps(report.model_dump(), indent=2))
    except (AlgoProbError, ValueError, OSError) as e:
        raise _fail(e)


@app.command()
def config(
    show: Annotated[
        bool,
        typer.Option(
            "--show",
            "-s",
            help="Show current configuration",
        ),
    ] = False,
) -> None:
    """View or manage configuration."""
    if show:
        settings = _settings()
        table = Table(title="Current Configuration", show_header=False)
        table.add_column("Setting", style="cyan")
        table.add_column("Value")

        table.add_row("Workers", str(settings.workers))
        table.add_row("Shards per worker", str(settings.shards_per_worker))
        table.add_row("Max states", str(settings.max_states))
        table.add_row("Long-running from n", str(settings.long_running_states))
        table.add_row("Default cap", str(settings.default_cap))
        table.add_row("Default seed", str(settings.default_seed))
        table.add_row("Permutations", str(settings.permutations))

        console.print(table)
    else:
        console.print("Use --show to view current configuration.")
        console.print()
        console.print("Configuration can be set via:")
        console.print("  - Environment variables (ALGOPROB_*)")
        console.print("  - Config file (~/.algoprob/config.toml)")


if __name__ == "__main__":
    app()
