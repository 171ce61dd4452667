from __future__ import annotations

import argparse
import logging

from django.conf import settings
from django.core.exceptions import ValidationError
from django.core.management.base import BaseCommand, CommandError

from baselines.services import DimensionExceededError
from channel.services import (
    DimensionMismatchError,
    InvalidDimensionError,
    InvalidSymbolError,
)
from cli.matrix_io import MatrixFormatError
from harness.results import ResultsParseError

logger = logging.getLogger(__name__)

# Hatalı girdi/konfigürasyon: çıkış kodu 2. Diğer her şey: 1.
USAGE_ERRORS = (
    ValidationError,
    MatrixFormatError,
    ResultsParseError,
    DimensionExceededError,
    DimensionMismatchError,
    InvalidDimensionError,
    InvalidSymbolError,
)


def error_message(exc: BaseException) -> str:
    if isinstance(exc, ValidationError):
        return "; ".join(exc.messages)
    return str(exc)


class SimulationCommand(BaseCommand):
    """
    Base for the simulation commands: subclasses implement ``run`` and get
    the exit-code mapping (2 for bad input, 1 for runtime failures).
    """

    def run(self, **options):
        raise NotImplementedError

    def handle(self, *args, **options):
        try:
            return self.run(**options)
        except CommandError:
            raise
        except USAGE_ERRORS as exc:
            raise CommandError(error_message(exc), returncode=2) from exc
        except Exception as exc:
            logger.exception("%s failed", self.__module__.rsplit(".", 1)[-1])
            raise CommandError(f"{type(exc).__name__}: {exc}", returncode=1) from exc

    def add_solver_arguments(self, parser) -> None:
        soav = settings.SOAV_DEFAULTS
        parser.add_argument(
            "--lambda",
            dest="lam",
            type=float,
            default=None,
            help=f"SOAV data-fit weight λ (default: {soav['lam']}).",
        )
        parser.add_argument(
            "--lipschitz",
            type=float,
            default=None,
            help=f"Lipschitz constant L, step 1/L (default: {soav['lipschitz']}).",
        )
        parser.add_argument(
            "--auto-lipschitz",
            action="store_true",
            default=None,
            help="Estimate L = 2λσ_max(H)² by power iteration (default: off).",
        )
        parser.add_argument(
            "--max-iter",
            type=int,
            default=None,
            help=f"FISTA iterations (default: {soav['max_iter']}).",
        )
        parser.add_argument(
            "--tol",
            type=float,
            default=None,
            help=f"Early-stop step tolerance, 0 disables (default: {soav['tol']}).",
        )
        parser.add_argument(
            "--epsilon",
            type=float,
            default=None,
            help="ℓ∞ residual bound ε (default: sqrt(rows·N0/2)).",
        )
        parser.add_argument(
            "--ml-max-dimension",
            type=int,
            default=None,
            help=(
                "Largest K the ML oracle may enumerate "
                f"(default: {settings.ML_DEFAULTS['max_dimension']})."
            ),
        )

    @staticmethod
    def solver_values(options) -> dict:
        """Solver flags under the experiment-file key names."""
        mapping = {
            "lam": "soav_lambda",
            "lipschitz": "soav_lipschitz",
            "auto_lipschitz": "soav_auto_lipschitz",
            "max_iter": "soav_max_iter",
            "tol": "soav_tol",
            "epsilon": "linf_epsilon",
            "ml_max_dimension": "ml_max_dimension",
        }
        return {
            key: options[option]
            for option, key in mapping.items()
            if options.get(option) is not None
        }


def argument_type(parse):
    """Adapts a parser raising ``ValidationError`` to an argparse ``type``."""

    def convert(text: str):
        try:
            return parse(text)
        except ValidationError as exc:
            raise argparse.ArgumentTypeError(error_message(exc)) from exc

    convert.__name__ = parse.__name__
    return convert
