"""Self-describing, atomically written text outputs."""
import logging
import os
import tempfile
from collections.abc import Iterable, Mapping
from contextlib import contextmanager
from pathlib import Path

logger = logging.getLogger(__name__)


def header_lines(echo: Mapping[str, object]) -> list[str]:
    """Render a config echo as ``# key: value`` comment lines, keys sorted."""
    return [f"# {key}: {echo[key]}" for key in sorted(echo)]


@contextmanager
def atomic_write(path: Path | str):
    """Write to a temporary file next to ``path`` and rename it into place.

    The target is only touched once the block completes; on error the
    temporary file is removed and nothing is left behind.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            yield handle
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    logger.debug("wrote %s", path)


def write_text(path: Path | str, echo: Mapping[str, object], body: Iterable[str]) -> Path:
    """Write ``body`` lines below a config-echo header, atomically."""
    with atomic_write(path) as handle:
        for line in header_lines(echo):
            handle.write(line + "\n")
        for line in body:
            handle.write(line + "\n")
    return Path(path)


def write_frame(path: Path | str, echo: Mapping[str, object], frame) -> Path:
    """Write a pandas DataFrame as delimited text below a config-echo header."""
    with atomic_write(path) as handle:
        for line in header_lines(echo):
            handle.write(line + "\n")
        frame.to_csv(handle, index=False, lineterminator="\n")
    return Path(path)
