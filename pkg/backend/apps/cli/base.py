"""Shared plumbing for the recalibration management commands."""
from __future__ import annotations

import logging
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from apps.cli.dataset import FORMATS
from apps.core.exceptions import InputError, RecalError
from apps.core.files import write_frame, write_text
from apps.harness.recalibrators import RECALIBRATORS, FitOptions

logger = logging.getLogger(__name__)


def parse_floats(text: str, name: str) -> list[float]:
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise InputError(f"--{name} expects comma-separated numbers, got {text!r}") from None
    if not values:
        raise InputError(f"--{name} is empty")
    return values


def parse_levels(text: str) -> list[float]:
    levels = parse_floats(text, "levels")
    for level in levels:
        if not 0.0 < level < 1.0:
            raise InputError(f"coverage level {level} is outside (0, 1)")
    return levels


def parse_windows(text: str) -> list[int]:
    windows = parse_floats(text, "windows")
    if any(window != int(window) or window < 1 for window in windows):
        raise InputError(f"--windows expects positive integers, got {text!r}")
    return [int(window) for window in windows]


def parse_names(text: str) -> list[str]:
    names = [part.strip() for part in text.split(",") if part.strip()]
    unknown = [name for name in names if name not in RECALIBRATORS]
    if unknown or not names:
        raise InputError(
            f"--recalibrators must name some of {', '.join(RECALIBRATORS)}, got {text!r}"
        )
    return names


class RecalCommand(BaseCommand):
    """Base command: common flags, config echo and failure cleanup.

    Subclasses implement ``run``. A ``RecalError`` becomes a ``CommandError``
    carrying its exit code, and any file written before the failure is removed.
    """

    requires_system_checks: list = []

    def add_arguments(self, parser):
        parser.add_argument("--seed", type=int, default=None, help="base seed")
        parser.add_argument("--out", default=None, help="output directory")

    def add_data_arguments(self, parser):
        parser.add_argument("--data", required=True, help="dataset file")
        parser.add_argument("--format", choices=FORMATS, default=None, dest="fmt")

    def add_model_arguments(self, parser):
        parser.add_argument("--recalibrator", choices=list(RECALIBRATORS), default="mos-t")
        parser.add_argument("--detrend", action="store_true")
        parser.add_argument("--bootstrap-k", type=int, default=None, dest="bootstrap_k")

    def handle(self, *args, **options):
        self.written: list[Path] = []
        self.out_dir = Path(options["out"] or settings.RECAL_OUTPUT_DIR)
        self.seed = settings.RECAL_SEED if options["seed"] is None else options["seed"]
        try:
            self.run(**options)
        except BaseException as exc:
            for path in self.written:
                path.unlink(missing_ok=True)
            if isinstance(exc, RecalError):
                logger.debug("command failed", exc_info=True)
                raise CommandError(str(exc), returncode=exc.exit_code) from exc
            raise

    def run(self, **options):
        raise NotImplementedError

    def fit_options(self, options) -> FitOptions:
        return FitOptions.from_settings(seed=self.seed, bootstrap_k=options.get("bootstrap_k"))

    def echo(self, options, **extra) -> dict[str, object]:
        """Config echo for output headers; excludes anything that may vary between equal runs."""
        echo: dict[str, object] = {"command": self.command_name, "seed": self.seed}
        for key in ("data", "fmt", "recalibrator", "detrend", "targets"):
            if options.get(key) is not None:
                echo[key] = options[key]
        echo.update(extra)
        return echo

    def write_record(self, name: str, echo, record: dict[str, object]) -> Path:
        path = self.out_dir / name
        write_text(path, echo, (f"{key}: {value}" for key, value in record.items()))
        self.written.append(path)
        return path

    def write_table(self, name: str, echo, frame) -> Path:
        path = self.out_dir / name
        write_frame(path, echo, frame)
        self.written.append(path)
        return path

    def done(self, message: str):
        logger.info(message)
        self.stdout.write(message)

    @property
    def command_name(self) -> str:
        return self.__module__.rsplit(".", 1)[-1]
