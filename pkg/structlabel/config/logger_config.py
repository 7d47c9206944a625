import logging
import sys

_names: set[str] = set()


def get_logger(name: str = __name__, level: str | int = logging.INFO) -> logging.Logger:
    """
    Create and configure a logger.

    Records go to stderr so label files streamed to stdout stay clean.

    Args:
        name (str): The name of the logger. Defaults to the module name.
        level (str | int): Logger threshold.

    Returns:
        logging.Logger: Configured logger instance.
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(logging.DEBUG)

    formatter = logging.Formatter(
        "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
    console_handler.setFormatter(formatter)

    if not logger.handlers:
        logger.addHandler(console_handler)

    _names.add(name)
    return logger


def set_log_level(level: str | int) -> None:
    """Change the threshold of every toolkit logger (CLI ``--log-level``)."""
    if isinstance(level, str):
        level = level.upper()
    for name in _names:
        logging.getLogger(name).setLevel(level)


logger = get_logger("StructLabel")
