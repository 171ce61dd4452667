from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from django.core.exceptions import ValidationError
from django.db import models

# Entries are exactly +1 or -1. A K×B array holds B column vectors.
SymbolVector = npt.NDArray[np.float64]


class Modulation(models.TextChoices):
    BPSK = "bpsk", "BPSK"
    QPSK = "qpsk", "QPSK"


@dataclass(frozen=True)
class ComplexModulationMatrix:
    """M×N complex modulation matrix with i.i.d. CN(0, 1/M) entries."""

    entries: npt.NDArray[np.complex128]

    @property
    def n_rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def n_cols(self) -> int:
        return int(self.entries.shape[1])


@dataclass(frozen=True)
class RealLinearSystem:
    """
    Real-valued observation model y = Hx + w.

    ``y`` may be a single observation (length R) or an R×B block of observations
    that share the same ``h``.
    """

    h: npt.NDArray[np.float64]
    y: npt.NDArray[np.float64]
    n0: float = 0.0
    modulation: Modulation = Modulation.QPSK

    def __post_init__(self):
        if self.h.ndim != 2:
            raise ValueError("h must be a 2-D matrix.")
        if self.y.ndim not in (1, 2) or self.y.shape[0] != self.h.shape[0]:
            raise ValueError(
                f"y has {self.y.shape[0] if self.y.ndim else 0} rows, "
                f"h has {self.h.shape[0]}."
            )

    @property
    def n_rows(self) -> int:
        return int(self.h.shape[0])

    @property
    def n_cols(self) -> int:
        return int(self.h.shape[1])


@dataclass(frozen=True)
class ChannelConfig:
    n_symbols: int
    n_dims: int
    modulation: Modulation = Modulation.QPSK
    snr_db: float = 10.0
    seed: int = 0

    def clean(self) -> None:
        if self.n_symbols < 1 or self.n_dims < 1:
            raise ValidationError("n_symbols and n_dims must be positive.")
        if not math.isfinite(self.snr_db):
            raise ValidationError("snr_db must be finite.")
        if not 0 <= self.seed < 2**64:
            raise ValidationError("seed must be a 64-bit unsigned integer.")
