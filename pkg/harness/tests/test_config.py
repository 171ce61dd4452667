import tempfile
from pathlib import Path

from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from baselines.types import LinfConfig
from channel.types import Modulation
from harness.config import (
    build_detector_spec,
    build_experiment_config,
    parse_bool,
    read_experiment_config,
)
from harness.detectors import parse_detector_names
from harness.snr import parse_snr_grid
from soav.types import SoavConfig


class SnrGridTests(SimpleTestCase):
    def test_range_includes_stop(self):
        self.assertEqual(parse_snr_grid("0:2:16"), tuple(float(v) for v in range(0, 17, 2)))

    def test_range_stops_below_unreachable_stop(self):
        self.assertEqual(parse_snr_grid("0:3:10"), (0.0, 3.0, 6.0, 9.0))

    def test_fractional_step_does_not_drift(self):
        self.assertEqual(parse_snr_grid("0:0.1:0.3"), (0.0, 0.1, 0.2, 0.3))

    def test_comma_list(self):
        self.assertEqual(parse_snr_grid("4, 8,12"), (4.0, 8.0, 12.0))

    def test_invalid(self):
        for text in ("", "0:2", "0:0:4", "0:-1:4", "4:1:0", "a,b", "1,inf"):
            with self.subTest(text=text), self.assertRaises(ValidationError):
                parse_snr_grid(text)


class DetectorNameTests(SimpleTestCase):
    def test_names(self):
        self.assertEqual(parse_detector_names("soav, linf,ml"), ("soav", "linf", "ml"))

    def test_invalid(self):
        for text in ("", ",", "soav,soav", "soav,zf"):
            with self.subTest(text=text), self.assertRaises(ValidationError):
                parse_detector_names(text)


class ParseBoolTests(SimpleTestCase):
    def test_values(self):
        self.assertTrue(parse_bool("Yes"))
        self.assertFalse(parse_bool("0"))
        with self.assertRaises(ValueError):
            parse_bool("maybe")


class ReadExperimentConfigTests(SimpleTestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self._tmp.cleanup)
        self.path = Path(self._tmp.name) / "experiment.cfg"

    def read(self, text):
        self.path.write_text(text, encoding="utf-8")
        return read_experiment_config(self.path)

    def test_typed_values(self):
        values = self.read(
            "# küçük tarama\n"
            "n_symbols = 15\n"
            "n_dims = 10\n"
            "\n"
            "modulation = BPSK\n"
            "snr_grid_db = 0:4:8  # dB\n"
            "detectors = soav,ml\n"
            "output_path = out/ber.csv\n"
            "time_detectors = true\n"
            "soav_lambda = 0.02\n"
        )
        self.assertEqual(
            values,
            {
                "n_symbols": 15,
                "n_dims": 10,
                "modulation": Modulation.BPSK,
                "snr_grid_db": (0.0, 4.0, 8.0),
                "detectors": ("soav", "ml"),
                "output_path": Path("out/ber.csv"),
                "time_detectors": True,
                "soav_lambda": 0.02,
            },
        )

    def test_errors_name_the_line(self):
        cases = {
            "n_symbols = 15\nfoo = 1\n": "line 2: unknown key",
            "n_symbols = 15\n\nn_symbols = 16\n": "line 3: 'n_symbols' is set twice",
            "n_dims 10\n": "line 1: expected",
            "n_symbols = 15\nrealizations = many\n": "line 2: bad value for 'realizations'",
            "snr_grid_db = 4:1:0\n": "line 1: bad value for 'snr_grid_db'",
        }
        for text, message in cases.items():
            with self.subTest(text=text):
                with self.assertRaises(ValidationError) as ctx:
                    self.read(text)
                self.assertIn(message, ctx.exception.messages[0])


class BuildExperimentConfigTests(SimpleTestCase):
    def test_defaults(self):
        cfg = build_experiment_config({"n_symbols": 15, "n_dims": 10})
        self.assertEqual(cfg.modulation, Modulation.QPSK)
        self.assertEqual([spec.name for spec in cfg.detectors], ["soav", "linf"])
        self.assertTrue(all(spec.config is None for spec in cfg.detectors))

    def test_detector_overrides(self):
        cfg = build_experiment_config(
            {
                "n_symbols": 15,
                "n_dims": 10,
                "detectors": ("linf", "soav"),
                "soav_lambda": 0.05,
                "soav_max_iter": 250,
                "linf_epsilon": 0.3,
                "realizations": 2,
            }
        )
        linf, soav = cfg.detectors
        self.assertEqual(linf.config, LinfConfig(epsilon=0.3))
        self.assertEqual(soav.config, SoavConfig(lam=0.05, max_iter=250))
        self.assertEqual(cfg.realizations, 2)

    def test_overrides_only_touch_their_detector(self):
        spec = build_detector_spec("ml", {"soav_lambda": 0.05})
        self.assertIsNone(spec.config)

    def test_required_sizes(self):
        with self.assertRaises(ValidationError):
            build_experiment_config({"n_symbols": 15})

    def test_invalid_values_are_rejected(self):
        with self.assertRaises(ValidationError):
            build_experiment_config({"n_symbols": 15, "n_dims": 10, "soav_lambda": -1.0})
