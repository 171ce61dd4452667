from pathlib import Path

from django.conf import settings
from django.core.management.base import CommandError

from channel.types import Modulation
from cli.base import SimulationCommand, argument_type
from harness.config import build_experiment_config, read_experiment_config
from harness.detectors import parse_detector_names
from harness.results import emit_plot_data
from harness.services import run_ber_experiment
from harness.snr import parse_snr_grid


class Command(SimulationCommand):
    help = "Runs a BER-vs-SNR Monte Carlo sweep and writes the results CSV and plot data."

    def add_arguments(self, parser):
        defaults = settings.EXPERIMENT_DEFAULTS
        parser.add_argument(
            "--config",
            type=Path,
            help="Experiment file with 'key = value' lines; flags override it.",
        )
        parser.add_argument("--n", dest="n_symbols", type=int, help="Symbols per frame N.")
        parser.add_argument("--m", dest="n_dims", type=int, help="Signal dimensions M.")
        parser.add_argument(
            "--modulation",
            choices=Modulation.values,
            help=f"Symbol alphabet (default: {defaults['modulation']}).",
        )
        parser.add_argument(
            "--snr",
            dest="snr_grid_db",
            type=argument_type(parse_snr_grid),
            help=(
                "SNR grid in dB, start:step:stop or a,b,c "
                f"(default: {defaults['snr_grid']})."
            ),
        )
        parser.add_argument(
            "--realizations",
            type=int,
            help=f"Matrix draws per SNR point (default: {defaults['realizations']}).",
        )
        parser.add_argument(
            "--bits-per-realization",
            type=int,
            help=(
                "Bits sent through each matrix "
                f"(default: {defaults['vectors_per_realization']} vectors × K)."
            ),
        )
        parser.add_argument(
            "--detectors",
            type=argument_type(parse_detector_names),
            help=(
                "Comma-separated detectors "
                f"(default: {','.join(defaults['detectors'])})."
            ),
        )
        parser.add_argument(
            "--seed",
            dest="master_seed",
            type=int,
            help=f"Master seed (default: {defaults['master_seed']}).",
        )
        parser.add_argument(
            "--workers",
            type=int,
            help=f"Worker threads across realizations (default: {defaults['workers']}).",
        )
        parser.add_argument(
            "--out", dest="output_path", type=Path, help="Results CSV path (required)."
        )
        parser.add_argument(
            "--plot-out",
            type=Path,
            help="Plot-data file (default: <out>.plot.txt).",
        )
        parser.add_argument(
            "--resume",
            action="store_true",
            default=None,
            help="Skip cells already present in the results CSV (default: off).",
        )
        parser.add_argument(
            "--time-detectors",
            action="store_true",
            default=None,
            help="Fill mean_detect_time_s; the CSV is then not reproducible (default: off).",
        )
        self.add_solver_arguments(parser)

    def _collect_values(self, options) -> dict:
        values = read_experiment_config(options["config"]) if options["config"] else {}
        for key in (
            "n_symbols",
            "n_dims",
            "modulation",
            "snr_grid_db",
            "realizations",
            "bits_per_realization",
            "detectors",
            "master_seed",
            "workers",
            "output_path",
            "resume",
            "time_detectors",
        ):
            if options.get(key) is not None:
                values[key] = options[key]
        values.update(self.solver_values(options))
        return values

    def run(self, **options):
        if options["config"] and not options["config"].is_file():
            raise CommandError(
                f"Config file {options['config']} does not exist.", returncode=2
            )
        values = self._collect_values(options)
        if values.get("output_path") is None:
            raise CommandError(
                "An output path is required (--out or output_path in --config).",
                returncode=2,
            )

        cfg = build_experiment_config(values)
        plot_path = options["plot_out"] or cfg.output_path.with_name(
            cfg.output_path.name + ".plot.txt"
        )
        if options["verbosity"] > 1:
            self.stdout.write(
                f"N={cfg.n_symbols}, M={cfg.n_dims}, {cfg.modulation}, "
                f"{cfg.realizations} realizations × {cfg.vectors_per_realization} vectors, "
                f"SNR {', '.join(f'{s:g}' for s in cfg.snr_grid_db)} dB"
            )

        records = run_ber_experiment(cfg)
        emit_plot_data(records, plot_path)

        self.stdout.write(f"{'snr_db':>8}  {'detector':<8}  {'ber':>12}")
        for record in records:
            self.stdout.write(
                f"{record.snr_db:>8g}  {record.detector:<8}  {record.ber:>12.4e}"
            )
        self.stdout.write(
            self.style.SUCCESS(
                f"Wrote {len(records)} records to {cfg.output_path} and plot data to "
                f"{plot_path}."
            )
        )
