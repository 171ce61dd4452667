"""
Monte Carlo BER sweeps and solve-time benchmarks.

Every random draw comes from ``substream(seed, *counters)`` keyed by loop
indices, so a sweep gives the same numbers in any execution order, with any
number of workers and after a resume.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from django.conf import settings
from django.core.exceptions import ValidationError

from channel.services import build_system, substream
from channel.types import ChannelConfig, Modulation
from core.timing import timed_call
from harness.detectors import DetectorSpec
from harness.results import metadata_path, read_metadata, read_results, write_results
from harness.types import BerRecord, ExperimentConfig, TimingRecord

logger = logging.getLogger(__name__)

MATRIX_STREAM, SYMBOL_STREAM, NOISE_STREAM = 0, 1, 2


@dataclass(frozen=True)
class RealizationOutcome:
    bit_errors: dict[str, int]
    detect_seconds: dict[str, float]


def _draw_system(
    channel: ChannelConfig, seed: int, counters: tuple[int, ...], n_vectors: int | None
):
    return build_system(
        channel,
        n_vectors=n_vectors,
        matrix_rng=substream(seed, *counters, MATRIX_STREAM),
        symbol_rng=substream(seed, *counters, SYMBOL_STREAM),
        noise_rng=substream(seed, *counters, NOISE_STREAM),
    )


def _run_realization(
    cfg: ExperimentConfig,
    snr_index: int,
    snr_db: float,
    realization: int,
    specs: Sequence[DetectorSpec],
) -> RealizationOutcome:
    system, x = _draw_system(
        cfg.channel_config(snr_db),
        cfg.master_seed,
        (snr_index, realization),
        cfg.vectors_per_realization,
    )
    errors: dict[str, int] = {}
    seconds: dict[str, float] = {}
    # Aynı (H, y) bloğu tüm dedektörlere verilir.
    for spec in specs:
        result = spec.run(system)
        errors[spec.name] = int(np.count_nonzero(result.decisions != x))
        seconds[spec.name] = result.wall_time
    logger.debug("SNR %.2f dB realization %d: %s", snr_db, realization, errors)
    return RealizationOutcome(bit_errors=errors, detect_seconds=seconds)


def run_snr_point(
    cfg: ExperimentConfig,
    snr_index: int,
    specs: Sequence[DetectorSpec] | None = None,
) -> list[RealizationOutcome]:
    """Per-realization outcomes at one grid point, in realization order."""
    snr_db = cfg.snr_grid_db[snr_index]
    specs = cfg.detectors if specs is None else specs

    def run(realization: int) -> RealizationOutcome:
        return _run_realization(cfg, snr_index, snr_db, realization, specs)

    realizations = range(cfg.realizations)
    if cfg.workers == 1:
        return [run(r) for r in realizations]
    with ThreadPoolExecutor(max_workers=cfg.workers) as executor:
        # map() sonuçları gönderim sırasıyla döner.
        return list(executor.map(run, realizations))


def _check_run_metadata(cfg: ExperimentConfig) -> dict:
    stored = read_metadata(cfg.output_path)
    if stored is None:
        raise ValidationError(
            f"Cannot resume from {cfg.output_path}: {metadata_path(cfg.output_path)} "
            "is missing, so the run that wrote it is unknown."
        )
    current = cfg.run_metadata()
    if stored.get("master_seed") != current["master_seed"]:
        raise ValidationError(
            f"Cannot resume from {cfg.output_path}: it was written with "
            f"master_seed={stored.get('master_seed')}, not {cfg.master_seed}."
        )
    stored_detectors = stored.get("detectors")
    if not isinstance(stored_detectors, dict):
        raise ValidationError(
            f"Cannot resume from {cfg.output_path}: the run metadata lists no detectors."
        )
    changed = [
        name
        for name, config in current["detectors"].items()
        if name in stored_detectors and stored_detectors[name] != config
    ]
    if changed:
        raise ValidationError(
            f"Cannot resume from {cfg.output_path}: settings of {', '.join(changed)} "
            "differ from the run that wrote it."
        )
    return stored


def _completed_cells(cfg: ExperimentConfig) -> dict[tuple[str, float], BerRecord]:
    """Cells of an earlier run of the same experiment found in ``output_path``."""
    if not (cfg.resume and cfg.output_path and cfg.output_path.exists()):
        return {}

    stored = _check_run_metadata(cfg)
    expected_bits = cfg.realizations * cfg.resolved_bits_per_realization
    names = {spec.name for spec in cfg.detectors} & set(stored["detectors"])
    cells = {}
    for record in read_results(cfg.output_path):
        if (
            record.detector in names
            and record.modulation == cfg.modulation
            and record.n_symbols == cfg.n_symbols
            and record.n_dims == cfg.n_dims
            and record.snr_db in cfg.snr_grid_db
            and record.realizations_done == cfg.realizations
            and record.bits_total == expected_bits
            and (record.mean_detect_time is not None) == cfg.time_detectors
        ):
            cells[(record.detector, record.snr_db)] = record
    logger.info(
        "Resuming from %s: %d completed cells found.", cfg.output_path, len(cells)
    )
    return cells


def _aggregate(
    cfg: ExperimentConfig, spec: DetectorSpec, snr_db: float, outcomes
) -> BerRecord:
    bit_errors = sum(outcome.bit_errors[spec.name] for outcome in outcomes)
    mean_time = None
    if cfg.time_detectors:
        total = sum(outcome.detect_seconds[spec.name] for outcome in outcomes)
        mean_time = total / (cfg.realizations * cfg.vectors_per_realization)
    return BerRecord(
        detector=spec.name,
        modulation=str(cfg.modulation),
        n_symbols=cfg.n_symbols,
        n_dims=cfg.n_dims,
        snr_db=snr_db,
        realizations_done=cfg.realizations,
        bits_total=cfg.realizations * cfg.resolved_bits_per_realization,
        bit_errors=bit_errors,
        mean_detect_time=mean_time,
    )


def run_ber_experiment(cfg: ExperimentConfig) -> list[BerRecord]:
    """
    BER for every (SNR, detector) cell of ``cfg``.

    Records come SNR-major in detector declaration order. With an
    ``output_path`` the CSV is rewritten after each SNR point.
    """
    cfg.clean()
    completed = _completed_cells(cfg)
    records: list[BerRecord] = []

    for snr_index, snr_db in enumerate(cfg.snr_grid_db):
        pending = [
            spec for spec in cfg.detectors if (spec.name, snr_db) not in completed
        ]
        pending_names = {spec.name for spec in pending}
        outcomes = run_snr_point(cfg, snr_index, pending) if pending else []

        for spec in cfg.detectors:
            if spec.name in pending_names:
                records.append(_aggregate(cfg, spec, snr_db, outcomes))
            else:
                records.append(completed[(spec.name, snr_db)])

        summary = ", ".join(
            f"{r.detector}={r.ber:.3e}" for r in records[-len(cfg.detectors) :]
        )
        if pending:
            logger.info("SNR %g dB done: %s", snr_db, summary)
        else:
            logger.info("SNR %g dB taken from previous run: %s", snr_db, summary)

        if cfg.output_path is not None:
            later = [record for (_, snr), record in completed.items() if snr > snr_db]
            write_results(records + later, cfg.output_path, metadata=cfg.run_metadata())

    return records


def _resolve_specs(detectors: Iterable[DetectorSpec | str]) -> list[DetectorSpec]:
    specs = [d if isinstance(d, DetectorSpec) else DetectorSpec(d) for d in detectors]
    if not specs:
        raise ValidationError("At least one detector is required.")
    return specs


def run_timing_benchmark(
    n_symbols: int,
    n_dims: int,
    modulation: Modulation | str,
    trials: int,
    detectors: Iterable[DetectorSpec | str],
    seed: int,
    snr_db: float | None = None,
    warmup: int | None = None,
) -> list[TimingRecord]:
    """
    Mean/p50/p95 wall time of one detector solve on a single vector.

    Matrix draws and stacking happen outside the timed call. Every detector
    solves the same ``trials`` systems after ``warmup`` untimed solves.
    """
    defaults = settings.TIMING_DEFAULTS
    if trials < defaults["min_trials"]:
        raise ValidationError(f"trials must be at least {defaults['min_trials']}.")
    warmup = defaults["warmup"] if warmup is None else warmup
    snr_db = defaults["snr_db"] if snr_db is None else snr_db
    channel = ChannelConfig(
        n_symbols=n_symbols,
        n_dims=n_dims,
        modulation=Modulation(modulation),
        snr_db=snr_db,
        seed=seed,
    )
    channel.clean()

    records = []
    for spec in _resolve_specs(detectors):
        for trial in range(warmup):
            spec.run(_draw_system(channel, seed, (trial,), None)[0])

        durations = np.empty(trials)
        for trial in range(trials):
            system, _ = _draw_system(channel, seed, (trial,), None)
            _, durations[trial] = timed_call(spec.run, system)

        p50, p95 = np.percentile(durations, [50.0, 95.0])
        record = TimingRecord(
            detector=spec.name,
            n_symbols=n_symbols,
            n_dims=n_dims,
            trials=trials,
            mean_seconds=float(durations.mean()),
            p50_seconds=float(p50),
            p95_seconds=float(p95),
        )
        logger.info(
            "%s: mean %.6f s, p50 %.6f s, p95 %.6f s over %d solves (N=%d, M=%d).",
            record.detector,
            record.mean_seconds,
            record.p50_seconds,
            record.p95_seconds,
            trials,
            n_symbols,
            n_dims,
        )
        records.append(record)
    return records
