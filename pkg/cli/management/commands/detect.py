from pathlib import Path

from django.core.management.base import CommandError

from cli.base import SimulationCommand
from cli.matrix_io import read_matrix_file
from harness.config import build_detector_spec
from harness.detectors import DETECTORS


class Command(SimulationCommand):
    help = (
        "Detects ±1 symbols from a matrix file (first line 'rows cols', "
        "row-major H, then 'y:' and the observation)."
    )

    def add_arguments(self, parser):
        parser.add_argument("input", type=Path, help="Matrix file with H and y.")
        parser.add_argument(
            "--detector",
            choices=list(DETECTORS),
            default="soav",
            help="Detector to run (default: soav).",
        )
        parser.add_argument(
            "--dump-z",
            action="store_true",
            help="Also print the relaxed solution z* on a second line.",
        )
        parser.add_argument(
            "--n0",
            type=float,
            default=0.0,
            help="Noise level N0, used for the default ℓ∞ ε (default: 0.0).",
        )
        self.add_solver_arguments(parser)

    def run(self, **options):
        path = options["input"]
        if not path.is_file():
            raise CommandError(f"Input file {path} does not exist.", returncode=2)
        if options["n0"] < 0:
            raise CommandError("--n0 must be non-negative.", returncode=2)

        system = read_matrix_file(path, n0=options["n0"])
        spec = build_detector_spec(options["detector"], self.solver_values(options))
        result = spec.run(system)

        self.stdout.write(" ".join(str(int(v)) for v in result.decisions))
        if options["dump_z"]:
            self.stdout.write(" ".join(f"{v:.10g}" for v in result.z_star))
        if options["verbosity"] > 1:
            self.stderr.write(
                f"{spec.name}: {result.iterations} iterations, "
                f"{result.wall_time:.6f} s, converged={result.converged}"
            )
        if not result.converged:
            self.stderr.write(
                self.style.WARNING("Residual bound not reached; best iterate used.")
            )
