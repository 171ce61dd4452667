from django.conf import settings
from django.core.management.base import CommandError

from cli.base import SimulationCommand
from cli.selfcheck import FISTA_MIN_REALIZATIONS, SUITES, run_suites


class Command(SimulationCommand):
    help = "Runs the property suites of every module and prints a pass/fail table."

    def add_arguments(self, parser):
        parser.add_argument(
            "--suite",
            action="append",
            choices=list(SUITES),
            help="Run only this suite; repeatable (default: all).",
        )
        parser.add_argument(
            "--samples",
            type=int,
            default=settings.SELFCHECK_DEFAULT_SAMPLES,
            help=(
                "Sample budget; each suite scales it to its cost, and the fista "
                f"suite never runs fewer than {FISTA_MIN_REALIZATIONS} realizations "
                f"(default: {settings.SELFCHECK_DEFAULT_SAMPLES})."
            ),
        )
        parser.add_argument(
            "--seed", type=int, default=0, help="Seed for the random cases (default: 0)."
        )

    def run(self, **options):
        if options["samples"] < 1:
            raise CommandError("--samples must be positive.", returncode=2)

        results = run_suites(options["suite"], options["samples"], options["seed"])
        width = max(len(result.suite) for result in results)
        for result in results:
            status = (
                self.style.SUCCESS("PASS") if result.passed else self.style.ERROR("FAIL")
            )
            self.stdout.write(f"{result.suite:<{width}}  {status}  {result.detail}")

        failed = [result.suite for result in results if not result.passed]
        if failed:
            raise CommandError(f"Failed suites: {', '.join(failed)}", returncode=1)
        self.stdout.write(self.style.SUCCESS(f"All {len(results)} suites passed."))
