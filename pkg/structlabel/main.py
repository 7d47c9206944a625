import typer

from structlabel.config.logger_config import logger, set_log_level
from structlabel.config.settings import get_settings
from structlabel.controllers.codec_controller import router as codec_router
from structlabel.controllers.eval_controller import router as eval_router
from structlabel.controllers.kernel_controller import router as kernel_router
from structlabel.controllers.roundtrip_controller import router as roundtrip_router

app = typer.Typer(
    name="structlabel",
    help="Linearize syntactic structures into per-token labels and back.",
    no_args_is_help=True,
    add_completion=False,
)

for router in (codec_router, roundtrip_router, eval_router, kernel_router):
    app.registered_commands.extend(router.registered_commands)


@app.callback()
def main(
    log_level: str | None = typer.Option(None, "--log-level", help="DEBUG, INFO, WARNING or ERROR"),
):
    """Batch tools for structure linearization and the label kernels."""
    level = log_level or get_settings().log_level
    try:
        set_log_level(level)
    except ValueError:
        raise typer.BadParameter(f"unknown log level {level!r}", param_hint="--log-level")
    logger.debug(f"log level {level}")


if __name__ == "__main__":
    app()
