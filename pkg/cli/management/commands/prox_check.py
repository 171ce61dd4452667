from django.core.management.base import CommandError

from cli.base import SimulationCommand
from cli.selfcheck import GRID_STEP, grid_prox, prox_value
from soav.services import prox_soav


class Command(SimulationCommand):
    help = "Evaluates the closed-form SOAV proximity operator on the given values."

    def add_arguments(self, parser):
        parser.add_argument(
            "values", nargs="+", type=float, help="Points β to evaluate."
        )
        parser.add_argument(
            "--gamma",
            type=float,
            default=1.0,
            help="Scale γ of the operator prox_{γg} (default: 1.0).",
        )
        parser.add_argument(
            "--verify",
            action="store_true",
            help=f"Compare against a brute-force grid search (step {GRID_STEP:g}).",
        )

    def run(self, **options):
        gamma = options["gamma"]
        if not gamma > 0:
            raise CommandError("--gamma must be positive.", returncode=2)

        failures = 0
        for beta in options["values"]:
            value = float(prox_soav(beta, gamma))
            line = f"{beta:.10g} -> {value:.10g}"
            if options["verify"]:
                grid_u, grid_best = grid_prox(beta, gamma)
                excess = float(prox_value(value, beta, gamma)) - grid_best
                ok = excess <= 1e-6
                failures += not ok
                status = self.style.SUCCESS("ok") if ok else self.style.ERROR("FAIL")
                line += f"  grid {grid_u:.6f}  {status}"
            self.stdout.write(line)

        if failures:
            raise CommandError(f"{failures} value(s) disagree with the grid.", returncode=1)
