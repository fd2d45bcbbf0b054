#!/usr/bin/env python
"""Recalibration command line: fit, predict, evaluate, synth and sweep.

    python manage.py evaluate --data archive.csv --recalibrator mos-t --window 25
"""
import os
import sys


def main():
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "config.settings.local")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Install the backend requirements "
            + "(poetry install) and activate that environment."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == "__main__":
    main()
