import typer
from rich.table import Table

from structlabel.config.settings import get_settings
from structlabel.models.run_schemas import Command, RunConfig
from structlabel.services.kernel_selfcheck_service import run_selfcheck
from structlabel.utils.cli_helpers import EXIT_CHECK_FAILED, console, handle_errors

router = typer.Typer()


@router.command("kernels-selfcheck")
def kernels_selfcheck(
    T: int | None = typer.Option(None, "--T", help="Diffusion steps"),
    s: int | None = typer.Option(None, "--s", help="Skipped steps per DDIM jump"),
    beta_start: float | None = typer.Option(None, "--beta-start"),
    beta_end: float | None = typer.Option(None, "--beta-end"),
    schedule: str | None = typer.Option(None, "--schedule", help="linear, scaled_linear or cosine"),
    seed: int | None = typer.Option(None, "--seed"),
):
    """Run the numeric invariant suite of the label kernels."""
    settings = get_settings()
    with handle_errors():
        config = RunConfig(
            command=Command.KERNELS_SELFCHECK,
            T=T if T is not None else settings.diffusion_steps,
            s=s if s is not None else settings.skip_steps,
            beta_start=beta_start if beta_start is not None else settings.beta_start,
            beta_end=beta_end if beta_end is not None else settings.beta_end,
            schedule_kind=schedule or settings.schedule_kind,
            seed=seed if seed is not None else settings.seed,
        )
        results = run_selfcheck(config)

    table = Table(title=f"kernel self-check (T={config.T}, s={config.s}, seed={config.seed})")
    table.add_column("check")
    table.add_column("residual", justify="right")
    table.add_column("tolerance", justify="right")
    table.add_column("result")
    for result in results:
        verdict = "[green]PASS[/green]" if result.passed else "[bold red]FAIL[/bold red]"
        table.add_row(result.name, f"{result.residual:.3e}", f"{result.tolerance:.0e}", verdict)
        typer.echo(f"{result.name}\t{result.residual:.6e}\t{'PASS' if result.passed else 'FAIL'}")
    console.print(table)

    if not all(r.passed for r in results):
        raise typer.Exit(EXIT_CHECK_FAILED)
