import tempfile
from io import StringIO
from pathlib import Path
from unittest.mock import patch

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from cli.selfcheck import SUITES, CheckResult
from harness.results import read_results


class CommandTestMixin:
    def setUp(self):
        super().setUp()
        self._tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self._tmp.cleanup)
        self.dir = Path(self._tmp.name)

    def call(self, *args):
        out, err = StringIO(), StringIO()
        call_command(*args, stdout=out, stderr=err)
        return out.getvalue(), err.getvalue()


class DetectCommandTests(CommandTestMixin, SimpleTestCase):
    def write_system(self, text):
        path = self.dir / "system.txt"
        path.write_text(text, encoding="utf-8")
        return str(path)

    def test_identity(self):
        path = self.write_system("2 2\n1 0\n0 1\ny: 1.2 -0.4\n")
        out, _ = self.call("detect", path)
        self.assertEqual(out, "1 -1\n")

    def test_dump_z(self):
        path = self.write_system("2 2\n1 0\n0 1\ny: 1.2 -0.4\n")
        out, _ = self.call("detect", path, "--dump-z")
        decisions, z = out.splitlines()
        self.assertEqual(decisions, "1 -1")
        self.assertEqual(len(z.split()), 2)
        self.assertGreater(float(z.split()[0]), 0)

    def test_ml_detector(self):
        path = self.write_system("3 2\n1 0\n0 1\n1 1\ny: 0.8 -1.3 -0.2\n")
        out, _ = self.call("detect", path, "--detector", "ml")
        self.assertEqual(out, "1 -1\n")

    def test_infeasible_linf_warns(self):
        path = self.write_system("2 2\n1 0\n0 1\ny: 1 -1\n")
        with self.assertLogs("baselines.services", level="WARNING"):
            out, err = self.call("detect", path, "--detector", "linf", "--epsilon", "0")
        self.assertEqual(out, "1 -1\n")
        self.assertIn("Residual bound not reached", err)

    def test_verbose_details_go_to_stderr(self):
        path = self.write_system("2 2\n1 0\n0 1\ny: 1.2 -0.4\n")
        out, err = self.call("detect", path, "--max-iter", "20", "--verbosity", "2")
        self.assertEqual(out, "1 -1\n")
        self.assertIn("soav: 20 iterations", err)

    def test_malformed_file(self):
        path = self.write_system("2 2\n1 0\n0 x\ny: 1 1\n")
        with self.assertRaises(CommandError) as ctx:
            self.call("detect", path)
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertIn("line 3", str(ctx.exception))

    def test_missing_file(self):
        with self.assertRaises(CommandError) as ctx:
            self.call("detect", str(self.dir / "nope.txt"))
        self.assertEqual(ctx.exception.returncode, 2)

    def test_invalid_solver_flag(self):
        path = self.write_system("1 1\n1\ny: 1\n")
        with self.assertRaises(CommandError) as ctx:
            self.call("detect", path, "--lambda", "-1")
        self.assertEqual(ctx.exception.returncode, 2)

    def test_ml_dimension_limit(self):
        path = self.write_system("1 3\n1 1 1\ny: 1\n")
        with self.assertRaises(CommandError) as ctx:
            self.call("detect", path, "--detector", "ml", "--ml-max-dimension", "2")
        self.assertEqual(ctx.exception.returncode, 2)

    def test_runtime_failure_exits_with_one(self):
        path = self.write_system("2 2\n1 0\n0 1\ny: 1.2 -0.4\n")
        with (
            patch("harness.detectors.DetectorSpec.run", side_effect=RuntimeError("boom")),
            self.assertLogs("cli.base", level="ERROR"),
            self.assertRaises(CommandError) as ctx,
        ):
            self.call("detect", path)
        self.assertEqual(ctx.exception.returncode, 1)


class BerCommandTests(CommandTestMixin, SimpleTestCase):
    small = ("--n", "4", "--m", "3", "--snr", "0,6", "--realizations", "2",
             "--bits-per-realization", "40")

    def test_sweep_writes_csv_and_plot_data(self):
        csv_path = self.dir / "ber.csv"
        out, _ = self.call("ber", *self.small, "--out", str(csv_path))

        records = read_results(csv_path)
        self.assertEqual([(r.snr_db, r.detector) for r in records], [
            (0.0, "soav"), (0.0, "linf"), (6.0, "soav"), (6.0, "linf"),
        ])
        self.assertTrue(all(r.bits_total == 80 for r in records))

        plot = (self.dir / "ber.csv.plot.txt").read_text(encoding="utf-8")
        self.assertEqual(plot.count("snr_db,ber"), 2)
        self.assertIn("snr_db  detector", out)
        self.assertIn("Wrote 4 records", out)

    def test_detector_selection_and_plot_path(self):
        csv_path, plot_path = self.dir / "ber.csv", self.dir / "plot.txt"
        self.call(
            "ber", *self.small, "--detectors", "soav,ml",
            "--out", str(csv_path), "--plot-out", str(plot_path),
        )
        self.assertEqual({r.detector for r in read_results(csv_path)}, {"soav", "ml"})
        self.assertTrue(plot_path.read_text().startswith("# soav\n"))

    def test_same_seed_same_file(self):
        first, second = self.dir / "a.csv", self.dir / "b.csv"
        self.call("ber", *self.small, "--seed", "9", "--out", str(first))
        self.call("ber", *self.small, "--seed", "9", "--workers", "2", "--out", str(second))
        self.assertEqual(first.read_bytes(), second.read_bytes())

    def test_config_file_with_flag_override(self):
        config = self.dir / "experiment.cfg"
        config.write_text(
            "n_symbols = 4\nn_dims = 3\nsnr_grid_db = 0:5:10\nrealizations = 1\n"
            "bits_per_realization = 8\ndetectors = soav\n"
            f"output_path = {self.dir / 'from_config.csv'}\n",
            encoding="utf-8",
        )
        self.call("ber", "--config", str(config), "--snr", "3")
        records = read_results(self.dir / "from_config.csv")
        self.assertEqual([r.snr_db for r in records], [3.0])

    def test_missing_output_path(self):
        with self.assertRaises(CommandError) as ctx:
            self.call("ber", "--n", "4", "--m", "3")
        self.assertEqual(ctx.exception.returncode, 2)

    def test_missing_sizes(self):
        with self.assertRaises(CommandError) as ctx:
            self.call("ber", "--out", str(self.dir / "x.csv"))
        self.assertEqual(ctx.exception.returncode, 2)

    def test_bad_config_line(self):
        config = self.dir / "experiment.cfg"
        config.write_text("n_symbols = 4\ncolour = blue\n", encoding="utf-8")
        with self.assertRaises(CommandError) as ctx:
            self.call("ber", "--config", str(config), "--out", str(self.dir / "x.csv"))
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertIn("line 2", str(ctx.exception))

    def test_resume_with_another_seed(self):
        csv_path = self.dir / "ber.csv"
        self.call("ber", *self.small, "--seed", "1", "--out", str(csv_path))
        written = csv_path.read_bytes()
        with self.assertRaises(CommandError) as ctx:
            self.call(
                "ber", *self.small, "--seed", "2", "--resume", "--out", str(csv_path)
            )
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertIn("master_seed=1", str(ctx.exception))
        self.assertEqual(csv_path.read_bytes(), written)

    def test_bad_snr_grid(self):
        with self.assertRaises(CommandError):
            self.call("ber", *self.small[:4], "--snr", "4:1:0", "--out", "x.csv")


class TimingCommandTests(CommandTestMixin, SimpleTestCase):
    def test_table(self):
        out, _ = self.call("timing")
        self.assertIn("Solve time, N=15, M=10, 10 trials", out)
        self.assertIn("mean ratio linf/soav", out)

    def test_csv_output(self):
        path = self.dir / "timing.csv"
        self.call("timing", "--detectors", "soav", "--out", str(path))
        lines = path.read_text(encoding="utf-8").splitlines()
        self.assertEqual(len(lines), 2)
        self.assertTrue(lines[1].startswith("soav,15,10,10,"))

    def test_too_few_trials(self):
        with self.assertRaises(CommandError) as ctx:
            self.call("timing", "--trials", "5")
        self.assertEqual(ctx.exception.returncode, 2)


class ProxCheckCommandTests(CommandTestMixin, SimpleTestCase):
    def test_values(self):
        out, _ = self.call("prox_check", "-3", "-1.5", "0", "1.5", "3")
        self.assertEqual(
            out.splitlines(),
            ["-3 -> -2", "-1.5 -> -1", "0 -> 0", "1.5 -> 1", "3 -> 2"],
        )

    def test_gamma(self):
        out, _ = self.call("prox_check", "5", "12", "--gamma", "10")
        self.assertEqual(out.splitlines(), ["5 -> 1", "12 -> 2"])

    def test_verify(self):
        out, _ = self.call("prox_check", "0.3", "2.7", "--verify")
        self.assertEqual(out.count("ok"), 2)

    def test_gamma_must_be_positive(self):
        with self.assertRaises(CommandError) as ctx:
            self.call("prox_check", "1", "--gamma", "0")
        self.assertEqual(ctx.exception.returncode, 2)


class SelfcheckCommandTests(CommandTestMixin, SimpleTestCase):
    def test_single_suite(self):
        out, _ = self.call("selfcheck", "--suite", "prox")
        self.assertIn("PASS", out)
        self.assertIn("All 1 suites passed.", out)

    def test_all_suites(self):
        out, _ = self.call("selfcheck")
        self.assertIn(f"All {len(SUITES)} suites passed.", out)

    def test_failing_suite_exits_with_one(self):
        def broken(samples, rng):
            return CheckResult("prox", False, "broken on purpose")

        with (
            patch.dict(SUITES, {"prox": broken}),
            self.assertRaises(CommandError) as ctx,
        ):
            self.call("selfcheck", "--suite", "prox", "--suite", "ml")
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertIn("prox", str(ctx.exception))

    def test_raising_suite_is_reported_as_failure(self):
        with (
            patch("cli.selfcheck.prox_soav", side_effect=ArithmeticError("nan")),
            self.assertLogs("cli.selfcheck", level="ERROR"),
            self.assertRaises(CommandError),
        ):
            self.call("selfcheck", "--suite", "prox")
