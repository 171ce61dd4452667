from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from django.conf import settings
from django.core.exceptions import ValidationError

from baselines.types import MlConfig
from channel.types import ChannelConfig, Modulation
from harness.detectors import DetectorSpec
from harness.snr import parse_snr_grid


def _default_grid() -> tuple[float, ...]:
    return parse_snr_grid(settings.EXPERIMENT_DEFAULTS["snr_grid"])


def _default_detectors() -> tuple[DetectorSpec, ...]:
    names = settings.EXPERIMENT_DEFAULTS["detectors"]
    return tuple(DetectorSpec(name) for name in names)


def _experiment_default(key: str):
    return field(default_factory=lambda: settings.EXPERIMENT_DEFAULTS[key])


@dataclass(frozen=True)
class ExperimentConfig:
    """
    One BER-vs-SNR sweep.

    Each realization draws one modulation matrix and sends
    ``bits_per_realization`` bits through it as K-bit vectors (K = 2N for
    QPSK). ``bits_per_realization=None`` means 900 vectors per realization.
    """

    n_symbols: int
    n_dims: int
    modulation: Modulation = field(
        default_factory=lambda: Modulation(settings.EXPERIMENT_DEFAULTS["modulation"])
    )
    snr_grid_db: tuple[float, ...] = field(default_factory=_default_grid)
    realizations: int = _experiment_default("realizations")
    bits_per_realization: int | None = None
    detectors: tuple[DetectorSpec, ...] = field(default_factory=_default_detectors)
    master_seed: int = _experiment_default("master_seed")
    output_path: Path | None = None
    workers: int = _experiment_default("workers")
    resume: bool = False
    time_detectors: bool = False

    @property
    def bits_per_vector(self) -> int:
        if self.modulation == Modulation.QPSK:
            return 2 * self.n_symbols
        return self.n_symbols

    @property
    def resolved_bits_per_realization(self) -> int:
        if self.bits_per_realization is not None:
            return self.bits_per_realization
        vectors = settings.EXPERIMENT_DEFAULTS["vectors_per_realization"]
        return vectors * self.bits_per_vector

    @property
    def vectors_per_realization(self) -> int:
        return self.resolved_bits_per_realization // self.bits_per_vector

    def channel_config(self, snr_db: float) -> ChannelConfig:
        return ChannelConfig(
            n_symbols=self.n_symbols,
            n_dims=self.n_dims,
            modulation=Modulation(self.modulation),
            snr_db=snr_db,
            seed=self.master_seed,
        )

    def run_metadata(self) -> dict:
        """What a resume must match beyond the CSV columns: seed and detector settings."""
        return {
            "master_seed": self.master_seed,
            "detectors": {
                spec.name: repr(spec.resolved_config()) for spec in self.detectors
            },
        }

    def clean(self) -> None:
        if self.n_symbols < 1 or self.n_dims < 1:
            raise ValidationError("n_symbols and n_dims must be positive.")
        if self.modulation not in Modulation.values:
            raise ValidationError(f"Unknown modulation {self.modulation!r}.")
        if self.realizations < 1:
            raise ValidationError("realizations must be at least 1.")
        if not self.snr_grid_db:
            raise ValidationError("snr_grid_db must not be empty.")
        if not all(math.isfinite(v) for v in self.snr_grid_db):
            raise ValidationError("SNR values must be finite.")
        if any(b <= a for a, b in zip(self.snr_grid_db, self.snr_grid_db[1:])):
            raise ValidationError("snr_grid_db must be strictly increasing.")
        if not self.detectors:
            raise ValidationError("At least one detector is required.")
        names = [spec.name for spec in self.detectors]
        if len(set(names)) != len(names):
            raise ValidationError("Each detector may appear only once.")
        bits = self.resolved_bits_per_realization
        if bits < self.bits_per_vector or bits % self.bits_per_vector:
            raise ValidationError(
                f"bits_per_realization={bits} must be a positive multiple of "
                f"{self.bits_per_vector} bits per channel use."
            )
        if not 0 <= self.master_seed < 2**64:
            raise ValidationError("master_seed must be a 64-bit unsigned integer.")
        if self.workers < 1:
            raise ValidationError("workers must be at least 1.")
        if self.resume and self.output_path is None:
            raise ValidationError("resume needs an output_path to resume from.")
        for spec in self.detectors:
            config = spec.resolved_config()
            config.clean()
            if not isinstance(config, MlConfig):
                continue
            if self.bits_per_vector > config.max_dimension:
                raise ValidationError(
                    f"ML detector cannot search K={self.bits_per_vector} "
                    f"(max_dimension={config.max_dimension})."
                )


@dataclass(frozen=True)
class BerRecord:
    detector: str
    modulation: str
    n_symbols: int
    n_dims: int
    snr_db: float
    realizations_done: int
    bits_total: int
    bit_errors: int
    mean_detect_time: float | None = None
    ber: float = field(init=False)

    def __post_init__(self):
        if not 0 <= self.bit_errors <= self.bits_total:
            raise ValueError("bit_errors must lie between 0 and bits_total.")
        ber = self.bit_errors / self.bits_total if self.bits_total else 0.0
        object.__setattr__(self, "ber", ber)


@dataclass(frozen=True)
class TimingRecord:
    detector: str
    n_symbols: int
    n_dims: int
    trials: int
    mean_seconds: float
    p50_seconds: float
    p95_seconds: float
