"""
Plain-text input for ``manage.py detect``.

    # 2×2 identity
    2 2
    1 0
    0 1
    y: 1.2 -0.4

The first line holds ``rows cols``. The matrix follows in row-major order
(any line breaks), then a ``y:`` marker and the ``rows`` observation values.
Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from channel.types import Modulation, RealLinearSystem


class MatrixFormatError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


def _numbers(tokens: list[str], line: int) -> list[float]:
    try:
        values = [float(token) for token in tokens]
    except ValueError as exc:
        raise MatrixFormatError(line, f"not a number ({exc}).") from exc
    if not all(np.isfinite(values)):
        raise MatrixFormatError(line, "values must be finite.")
    return values


def parse_matrix_text(text: str, *, n0: float = 0.0) -> RealLinearSystem:
    shape: tuple[int, int] | None = None
    h_values: list[float] = []
    y_values: list[float] | None = None
    last_line = 0

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        last_line = number

        if shape is None:
            parts = line.split()
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise MatrixFormatError(number, "expected 'rows cols' header.")
            rows, cols = int(parts[0]), int(parts[1])
            if rows < 1 or cols < 1:
                raise MatrixFormatError(number, "rows and cols must be positive.")
            shape = (rows, cols)
            continue

        if y_values is None and line.startswith("y:"):
            if len(h_values) != shape[0] * shape[1]:
                raise MatrixFormatError(
                    number,
                    f"matrix has {len(h_values)} values, expected "
                    f"{shape[0] * shape[1]}.",
                )
            y_values = _numbers(line[2:].split(), number)
        elif y_values is None:
            h_values.extend(_numbers(line.split(), number))
            if len(h_values) > shape[0] * shape[1]:
                raise MatrixFormatError(number, "too many matrix values.")
        else:
            y_values.extend(_numbers(line.split(), number))
        if y_values is not None and len(y_values) > shape[0]:
            raise MatrixFormatError(number, f"y has more than {shape[0]} values.")

    if shape is None:
        raise MatrixFormatError(max(last_line, 1), "file is empty.")
    if y_values is None:
        raise MatrixFormatError(last_line, "missing 'y:' marker.")
    if len(y_values) != shape[0]:
        raise MatrixFormatError(
            last_line, f"y has {len(y_values)} values, expected {shape[0]}."
        )

    return RealLinearSystem(
        h=np.array(h_values).reshape(shape),
        y=np.array(y_values),
        n0=n0,
        modulation=Modulation.BPSK,
    )


def read_matrix_file(path: Path | str, *, n0: float = 0.0) -> RealLinearSystem:
    return parse_matrix_text(Path(path).read_text(encoding="utf-8"), n0=n0)
