"""Logging for the pattern_release package.

Modules log through children of the ``pattern_release`` logger, which owns
the only rich handler, so the CLI verbosity is set in one place.
"""

from __future__ import annotations

import logging

from rich.logging import RichHandler

PACKAGE_LOGGER = "pattern_release"


def pr_logger(name: str | None = None, log_level: str = "INFO") -> logging.Logger:
    """Return the package logger, or its child for module ``name``.

    The handler is attached and ``log_level`` applied on the first call only.
    """
    package_log = logging.getLogger(PACKAGE_LOGGER)
    if not package_log.handlers:
        handler = RichHandler(show_path=False, log_time_format="[%X]")
        handler.setFormatter(logging.Formatter("%(message)s"))
        package_log.addHandler(handler)
        package_log.setLevel(log_level)

    if name is None or name == PACKAGE_LOGGER:
        return package_log
    return package_log.getChild(name.removeprefix(f"{PACKAGE_LOGGER}."))
