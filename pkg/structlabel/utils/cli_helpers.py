import sys
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from structlabel.config.logger_config import logger
from structlabel.utils.exceptions import StructLabelError

# Summaries go to stderr; stdout carries label files, treebanks and reports.
console = Console(stderr=True)

EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

STDIO = Path("-")


@contextmanager
def handle_errors() -> Iterator[None]:
    """Map domain and validation errors to exit code 2."""
    try:
        yield
    except StructLabelError as e:
        logger.error(f"{type(e).__name__}: {e}")
        console.print(f"[bold red]error:[/bold red] {e}")
        raise typer.Exit(EXIT_USAGE)
    except ValidationError as e:
        message = "; ".join(err["msg"] for err in e.errors())
        logger.error(f"invalid options: {message}")
        console.print(f"[bold red]error:[/bold red] {message}")
        raise typer.Exit(EXIT_USAGE)


def read_lines(path: Path) -> list[str]:
    if path == STDIO:
        return sys.stdin.readlines()
    try:
        with path.open(encoding="utf-8") as f:
            return f.readlines()
    except OSError as e:
        raise StructLabelError(f"cannot read {path}: {e.strerror}")


def write_text(text: str, path: Path | None) -> None:
    if path is None or path == STDIO:
        typer.echo(text, nl=False)
        return
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise StructLabelError(f"cannot write {path}: {e.strerror}")
    logger.info(f"wrote {path}")


def summary_table(title: str, rows: dict[str, object]) -> Table:
    table = Table(title=title, show_header=False)
    table.add_column("key", style="cyan")
    table.add_column("value", justify="right")
    for key, value in rows.items():
        table.add_row(key, str(value))
    return table
