import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from channel.types import Modulation
from cli.matrix_io import MatrixFormatError, parse_matrix_text, read_matrix_file


class ParseMatrixTextTests(SimpleTestCase):
    def test_identity(self):
        system = parse_matrix_text("2 2\n1 0\n0 1\ny: 1.2 -0.4\n")
        np.testing.assert_array_equal(system.h, np.eye(2))
        np.testing.assert_array_equal(system.y, [1.2, -0.4])
        self.assertEqual(system.n0, 0.0)
        self.assertEqual(system.modulation, Modulation.BPSK)

    def test_free_line_breaks_and_comments(self):
        text = "# 2×3\n\n2 3\n1 2 3 4\n5 6  # son satır\ny:\n0.5\n-0.5\n"
        system = parse_matrix_text(text, n0=0.1)
        np.testing.assert_array_equal(system.h, [[1, 2, 3], [4, 5, 6]])
        np.testing.assert_array_equal(system.y, [0.5, -0.5])
        self.assertEqual(system.n0, 0.1)

    def test_errors_name_the_line(self):
        cases = {
            "": 1,
            "2\n": 1,
            "2 x\n": 1,
            "0 2\n": 1,
            "2 2\n1 0\n0 one\ny: 1 1\n": 3,
            "2 2\n1 0 0\ny: 1 1\n": 3,
            "2 2\n1 0 0 1 5\ny: 1 1\n": 2,
            "2 2\n1 0\n0 1\n": 3,
            "2 2\n1 0\n0 1\ny: 1\n": 4,
            "2 2\n1 0\n0 1\ny: 1 2 3\n": 4,
            "1 1\nnan\ny: 1\n": 2,
        }
        for text, line in cases.items():
            with self.subTest(text=text):
                with self.assertRaises(MatrixFormatError) as ctx:
                    parse_matrix_text(text)
                self.assertEqual(ctx.exception.line, line)
                self.assertTrue(str(ctx.exception).startswith(f"line {line}:"))

    def test_read_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "system.txt"
            path.write_text("1 2\n3 4\ny: 5\n", encoding="utf-8")
            system = read_matrix_file(path)
        np.testing.assert_array_equal(system.h, [[3, 4]])
