from pathlib import Path

from django.conf import settings

from channel.types import Modulation
from cli.base import SimulationCommand, argument_type
from harness.config import build_detector_spec
from harness.detectors import parse_detector_names
from harness.results import write_timing_results
from harness.services import run_timing_benchmark


class Command(SimulationCommand):
    help = "Benchmarks the mean/p50/p95 wall time of one detector solve."

    def add_arguments(self, parser):
        defaults = settings.TIMING_DEFAULTS
        parser.add_argument(
            "--n",
            dest="n_symbols",
            type=int,
            default=defaults["n_symbols"],
            help=f"Symbols per frame N (default: {defaults['n_symbols']}).",
        )
        parser.add_argument(
            "--m",
            dest="n_dims",
            type=int,
            default=defaults["n_dims"],
            help=f"Signal dimensions M (default: {defaults['n_dims']}).",
        )
        parser.add_argument(
            "--modulation",
            choices=Modulation.values,
            default=Modulation.QPSK.value,
            help="Symbol alphabet (default: qpsk).",
        )
        parser.add_argument(
            "--trials",
            type=int,
            default=defaults["trials"],
            help=(
                f"Timed solves per detector, at least {defaults['min_trials']} "
                f"(default: {defaults['trials']})."
            ),
        )
        parser.add_argument(
            "--warmup",
            type=int,
            default=defaults["warmup"],
            help=f"Untimed solves before timing (default: {defaults['warmup']}).",
        )
        parser.add_argument(
            "--detectors",
            type=argument_type(parse_detector_names),
            default=defaults["detectors"],
            help=f"Comma-separated detectors (default: {','.join(defaults['detectors'])}).",
        )
        parser.add_argument(
            "--seed", type=int, default=0, help="Seed for the drawn systems (default: 0)."
        )
        parser.add_argument(
            "--snr",
            type=float,
            default=defaults["snr_db"],
            help=f"SNR of the drawn systems in dB (default: {defaults['snr_db']}).",
        )
        parser.add_argument("--out", type=Path, help="Optional timing CSV path.")
        self.add_solver_arguments(parser)

    def run(self, **options):
        values = self.solver_values(options)
        specs = [build_detector_spec(name, values) for name in options["detectors"]]
        records = run_timing_benchmark(
            n_symbols=options["n_symbols"],
            n_dims=options["n_dims"],
            modulation=options["modulation"],
            trials=options["trials"],
            detectors=specs,
            seed=options["seed"],
            snr_db=options["snr"],
            warmup=options["warmup"],
        )

        self.stdout.write(
            f"Solve time, N={options['n_symbols']}, M={options['n_dims']}, "
            f"{options['trials']} trials"
        )
        self.stdout.write(f"{'detector':<10}{'mean_s':>12}{'p50_s':>12}{'p95_s':>12}")
        for record in records:
            self.stdout.write(
                f"{record.detector:<10}{record.mean_seconds:>12.6f}"
                f"{record.p50_seconds:>12.6f}{record.p95_seconds:>12.6f}"
            )

        reference = records[0]
        for record in records[1:]:
            if reference.mean_seconds > 0:
                ratio = record.mean_seconds / reference.mean_seconds
                self.stdout.write(
                    f"mean ratio {record.detector}/{reference.detector}: {ratio:.2f}x"
                )

        if options["out"]:
            write_timing_results(records, options["out"])
            self.stdout.write(self.style.SUCCESS(f"Wrote {options['out']}."))
