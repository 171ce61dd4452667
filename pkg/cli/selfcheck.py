"""
Property suites behind ``manage.py selfcheck``.

Every suite takes a sample budget and its own random stream and returns one
``CheckResult``. A suite that raises is reported as a failed row.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Callable
from dataclasses import dataclass, replace

import numpy as np
from django.conf import settings

from baselines.services import linf_detect, ml_oracle, project_l1_ball
from channel.services import (
    build_system,
    sample_modulation_matrix,
    sample_qpsk_symbols,
    sample_real_matrix,
    snr_to_n0,
    stack_observation,
    stack_real,
    stack_symbols,
    substream,
    transmit,
)
from channel.types import ChannelConfig, Modulation, RealLinearSystem
from core.decorators import log_exceptions
from harness.detectors import DetectorSpec
from harness.services import run_ber_experiment, run_snr_point
from harness.types import ExperimentConfig
from soav.services import fista_detect, grad_f, objective, prox_soav
from soav.types import SoavConfig

logger = logging.getLogger(__name__)

GRID_STEP = 1e-4
CONVERGENCE_SEED = 20_100
FISTA_MIN_REALIZATIONS = 500


@dataclass(frozen=True)
class CheckResult:
    suite: str
    passed: bool
    detail: str


Suite = Callable[[int, np.random.Generator], CheckResult]
SUITES: dict[str, Suite] = {}


def suite(name: str):
    def register(func: Callable[[int, np.random.Generator], tuple[bool, str]]) -> Suite:
        @log_exceptions(
            fallback_factory=lambda exc: CheckResult(name, False, f"error: {exc}"),
            include_traceback=True,
        )
        def run(samples: int, rng: np.random.Generator) -> CheckResult:
            passed, detail = func(samples, rng)
            return CheckResult(name, passed, detail)

        run.__name__ = func.__name__
        SUITES[name] = run
        return run

    return register


def grid_prox(beta: float, gamma: float, step: float = GRID_STEP) -> tuple[float, float]:
    """Brute-force minimizer of γ·g(u) + ½(u − β)² on a grid; returns (u, value)."""
    # Minimizer lies between β and the box [−1, 1].
    lower, upper = min(beta, -1.0), max(beta, 1.0)
    coarse_step = 100 * step
    coarse = np.arange(lower, upper + coarse_step, coarse_step)
    center = float(coarse[np.argmin(prox_value(coarse, beta, gamma))])
    # Convex in u: the fine-grid minimum lies within one coarse step of the coarse one.
    u = np.arange(center - coarse_step, center + coarse_step + step, step)
    values = prox_value(u, beta, gamma)
    best = int(np.argmin(values))
    return float(u[best]), float(values[best])


def prox_value(u, beta: float, gamma: float):
    u = np.asarray(u, dtype=np.float64)
    return gamma * 0.5 * (np.abs(u - 1.0) + np.abs(u + 1.0)) + 0.5 * (u - beta) ** 2


@suite("prox")
def check_prox(samples: int, rng: np.random.Generator) -> tuple[bool, str]:
    pairs = 10 * samples
    worst = 0.0
    for _ in range(pairs):
        gamma = 15.0 * (1.0 - float(rng.random()))
        beta = float(rng.uniform(-20.0, 20.0))
        closed = float(prox_soav(beta, gamma))
        _, grid_best = grid_prox(beta, gamma)
        worst = max(worst, float(prox_value(closed, beta, gamma)) - grid_best)
    return worst <= 1e-6, f"{pairs} pairs, worst excess {worst:.2e}"


@suite("gradient")
def check_gradient(samples: int, rng: np.random.Generator) -> tuple[bool, str]:
    instances = max(samples // 20, 5)
    h_fd = 1e-3
    worst = 0.0
    for _ in range(instances):
        k = int(rng.integers(2, 41))
        rows = int(rng.integers(1, 41))
        h = rng.standard_normal((rows, k))
        y = rng.standard_normal(rows)
        z = rng.standard_normal(k)
        lam = float(rng.uniform(0.01, 1.0))
        analytic = grad_f(z, h, y, lam)
        numeric = np.empty(k)
        for j in range(k):
            e = np.zeros(k)
            e[j] = h_fd
            forward = _data_fit(z + e, h, y, lam)
            backward = _data_fit(z - e, h, y, lam)
            numeric[j] = (forward - backward) / (2.0 * h_fd)
        scale = max(float(np.linalg.norm(analytic)), 1e-12)
        worst = max(worst, float(np.linalg.norm(numeric - analytic)) / scale)
    return worst < 1e-6, f"{instances} instances, worst relative error {worst:.2e}"


def _data_fit(z, h, y, lam: float) -> float:
    residual = y - h @ z
    return lam * float(residual @ residual)


@suite("stacking")
def check_stacking(samples: int, rng: np.random.Generator) -> tuple[bool, str]:
    instances = max(samples // 10, 5)
    worst = 0.0
    for _ in range(instances):
        n, m = int(rng.integers(1, 20)), int(rng.integers(1, 20))
        h_complex = sample_modulation_matrix(n, m, rng)
        x_complex = sample_qpsk_symbols(n, rng)
        lhs = stack_observation(h_complex.entries @ x_complex)
        rhs = stack_real(h_complex) @ stack_symbols(x_complex)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst < 1e-12, f"{instances} instances, worst deviation {worst:.2e}"


@suite("calibration")
def check_calibration(samples: int, rng: np.random.Generator) -> tuple[bool, str]:
    n_entries = max(100 * samples, 20_000)
    m = 10
    h = sample_modulation_matrix(n_entries // m, m, rng).entries
    entry_ratio = float(np.mean(np.abs(h) ** 2)) * m

    n0 = snr_to_n0(6.0, 15, 10)
    noise = transmit(np.zeros((n_entries, 1)), np.ones(1), n0, rng)
    noise_ratio = float(np.var(noise)) / (n0 / 2.0)

    real_ratio = float(np.var(sample_real_matrix(n_entries // m, m, rng))) * m
    passed = all(abs(r - 1.0) <= 0.05 for r in (entry_ratio, noise_ratio, real_ratio))
    return passed, (
        f"{n_entries} samples, E|h|²·M={entry_ratio:.4f}, "
        f"var(w)/(N0/2)={noise_ratio:.4f}, BPSK var·M={real_ratio:.4f}"
    )


def _reference_l1_projection(v: np.ndarray, radius: float) -> np.ndarray:
    if np.sum(np.abs(v)) <= radius:
        return v.copy()
    low, high = 0.0, float(np.max(np.abs(v)))
    for _ in range(200):
        theta = 0.5 * (low + high)
        if np.sum(np.maximum(np.abs(v) - theta, 0.0)) > radius:
            low = theta
        else:
            high = theta
    return np.sign(v) * np.maximum(np.abs(v) - 0.5 * (low + high), 0.0)


@suite("projection")
def check_projection(samples: int, rng: np.random.Generator) -> tuple[bool, str]:
    instances = max(samples // 5, 10)
    worst = 0.0
    for _ in range(instances):
        v = rng.standard_normal(int(rng.integers(1, 30))) * rng.uniform(0.1, 5.0)
        radius = float(rng.uniform(0.05, 3.0))
        projected = project_l1_ball(v, radius)
        if np.sum(np.abs(projected)) > radius * (1.0 + 1e-9) + 1e-12:
            return False, f"projection leaves the ball (radius {radius:.4g})"
        worst = max(
            worst, float(np.max(np.abs(projected - _reference_l1_projection(v, radius))))
        )
    return worst < 1e-9, f"{instances} vectors, worst deviation {worst:.2e}"


@suite("ml")
def check_ml(samples: int, rng: np.random.Generator) -> tuple[bool, str]:
    instances = max(samples // 50, 5)
    for _ in range(instances):
        k = int(rng.integers(1, 9))
        h = rng.standard_normal((int(rng.integers(1, 9)), k))
        y = rng.standard_normal(h.shape[0])
        result = ml_oracle(RealLinearSystem(h=h, y=y))
        best = min(
            float(np.sum((y - h @ np.array(c)) ** 2))
            for c in itertools.product((1.0, -1.0), repeat=k)
        )
        found = float(np.sum((y - h @ result.decisions) ** 2))
        if found > best + 1e-12 or result.iterations != 2**k:
            return False, f"K={k}: cost {found:.6g} vs exhaustive {best:.6g}"
    return True, f"{instances} instances match exhaustive search"


@suite("fista")
def check_fista(samples: int, rng: np.random.Generator) -> tuple[bool, str]:
    """Noiseless N=15, M=10 QPSK recovery with the default detector settings."""
    realizations = max(samples // 2, FISTA_MIN_REALIZATIONS)
    seed = int(rng.integers(0, 2**63))
    cfg = SoavConfig(lam=0.01, lipschitz=0.1, max_iter=100, initial_point="ones")
    channel = ChannelConfig(n_symbols=15, n_dims=10, modulation=Modulation.QPSK)
    recovered = 0
    for realization in range(realizations):
        system, x = build_system(
            channel,
            matrix_rng=substream(seed, realization, 0),
            symbol_rng=substream(seed, realization, 1),
            noise_rng=substream(seed, realization, 2),
        )
        noiseless = RealLinearSystem(
            h=system.h, y=system.h @ x, modulation=system.modulation
        )
        result = fista_detect(noiseless, cfg)
        recovered += bool(np.array_equal(result.decisions, x))
    rate = recovered / realizations
    return rate >= 0.95, f"{recovered}/{realizations} exact recoveries ({rate:.1%})"


@suite("firm_nonexpansive")
def check_firm_nonexpansive(samples: int, rng: np.random.Generator) -> tuple[bool, str]:
    """‖p(a) − p(b)‖² ≤ ⟨p(a) − p(b), a − b⟩ for p = prox of γ·g."""
    worst = 0.0
    for _ in range(samples):
        gamma = 15.0 * (1.0 - float(rng.random()))
        a, b = rng.uniform(-20.0, 20.0, size=(2, 10))
        moved = prox_soav(a, gamma) - prox_soav(b, gamma)
        inner = float(moved @ (a - b))
        worst = max(worst, (float(moved @ moved) - inner) / max(inner, 1.0))
    return worst <= 1e-12, f"{samples} pairs of 10-vectors, worst excess {worst:.2e}"


def _objective_at(z, system: RealLinearSystem, lam: float) -> float:
    return objective(z, system.h, system.y, lam)


@suite("convergence")
def check_convergence(samples: int, rng: np.random.Generator) -> tuple[bool, str]:
    # Step from the power-iteration estimate; L = 0.1 only bounds 2λσ²_max near N/M = 1.5.
    cfg = SoavConfig(auto_lipschitz=True)
    instances = max(samples // 50, 5)
    for _ in range(instances):
        n = int(rng.integers(2, 16))
        channel = ChannelConfig(
            n_symbols=n,
            n_dims=int(rng.integers(1, n + 1)),
            snr_db=float(rng.uniform(0.0, 20.0)),
        )
        system, _ = build_system(channel, matrix_rng=rng, symbol_rng=rng, noise_rng=rng)
        start = _objective_at(np.ones(system.h.shape[1]), system, cfg.lam)
        end = _objective_at(fista_detect(system, cfg).z_star, system, cfg.lam)
        if end > start * (1.0 + 1e-12):
            return False, f"N={n}: objective rose from {start:.6g} to {end:.6g}"

    worst = 0.0
    long_cfg = replace(cfg, max_iter=10_000)
    channel = ChannelConfig(n_symbols=15, n_dims=10, snr_db=10.0)
    for instance in range(10):
        system, _ = build_system(
            channel,
            matrix_rng=substream(CONVERGENCE_SEED, instance, 0),
            symbol_rng=substream(CONVERGENCE_SEED, instance, 1),
            noise_rng=substream(CONVERGENCE_SEED, instance, 2),
        )
        short = _objective_at(fista_detect(system, cfg).z_star, system, cfg.lam)
        reference = _objective_at(fista_detect(system, long_cfg).z_star, system, cfg.lam)
        worst = max(worst, abs(short - reference) / reference)
    return worst <= 1e-4, (
        f"{instances} runs end below their start, worst 100 vs 10000 iteration "
        f"gap {worst:.2e}"
    )


@suite("symmetry")
def check_symmetry(samples: int, rng: np.random.Generator) -> tuple[bool, str]:
    """Negating y negates z* (zero start, H fixed, noiseless)."""
    instances = max(samples // 20, 5)
    cfg = SoavConfig(initial_point="zeros")
    channel = ChannelConfig(n_symbols=8, n_dims=6)
    for _ in range(instances):
        system, x = build_system(channel, matrix_rng=rng, symbol_rng=rng, noise_rng=rng)
        y = system.h @ x
        plus = fista_detect(RealLinearSystem(h=system.h, y=y), cfg)
        minus = fista_detect(RealLinearSystem(h=system.h, y=-y), cfg)
        nonzero = plus.z_star != 0
        if not (
            np.array_equal(minus.z_star, -plus.z_star)
            and np.array_equal(minus.decisions[nonzero], -plus.decisions[nonzero])
        ):
            return False, "z* of −y is not −z* of y"
    return True, f"{instances} noiseless systems antisymmetric"


@suite("linf_residual")
def check_linf_residual(samples: int, rng: np.random.Generator) -> tuple[bool, str]:
    """‖y − Hz*‖ ≤ 1.01·ε whenever the ℓ∞ detector reports a feasible iterate."""
    instances = max(samples // 20, 5)
    feasible = 0
    worst = 0.0
    for _ in range(instances):
        channel = ChannelConfig(
            n_symbols=15, n_dims=10, snr_db=float(rng.uniform(0.0, 20.0))
        )
        system, _ = build_system(channel, matrix_rng=rng, symbol_rng=rng, noise_rng=rng)
        result = linf_detect(system)
        if not result.converged:
            continue
        feasible += 1
        epsilon = np.sqrt(system.h.shape[0] * system.n0 / 2.0)
        residual = float(np.linalg.norm(system.y - system.h @ result.z_star))
        worst = max(worst, residual / epsilon)
    return worst <= 1.01, f"{feasible}/{instances} feasible, worst residual {worst:.4f}·ε"


@suite("harness")
def check_harness(samples: int, rng: np.random.Generator) -> tuple[bool, str]:
    """Same records with 1 and 2 workers; bit errors add up over realizations."""
    cfg = ExperimentConfig(
        n_symbols=4,
        n_dims=3,
        snr_grid_db=(0.0, 10.0),
        realizations=max(samples // 50, 2),
        bits_per_realization=8 * 10,
        detectors=(DetectorSpec("soav"), DetectorSpec("linf")),
        master_seed=int(rng.integers(0, 2**63)),
    )
    records = run_ber_experiment(cfg)
    if records != run_ber_experiment(replace(cfg, workers=2)):
        return False, "records differ between 1 and 2 workers"

    expected_bits = cfg.realizations * cfg.resolved_bits_per_realization
    outcomes = {
        snr_db: run_snr_point(cfg, index) for index, snr_db in enumerate(cfg.snr_grid_db)
    }
    for record in records:
        summed = sum(o.bit_errors[record.detector] for o in outcomes[record.snr_db])
        if record.bit_errors != summed or record.bits_total != expected_bits:
            return False, (
                f"{record.detector} at {record.snr_db:g} dB: {record.bit_errors} "
                f"errors over {record.bits_total} bits, realizations sum to {summed} "
                f"over {expected_bits}"
            )
    return True, f"{len(records)} cells reproducible, bit counts conserved"


def run_suites(
    names: list[str] | None = None, samples: int | None = None, seed: int = 0
) -> list[CheckResult]:
    samples = settings.SELFCHECK_DEFAULT_SAMPLES if samples is None else samples
    selected = names or list(SUITES)
    results = []
    for index, name in enumerate(SUITES):
        if name not in selected:
            continue
        result = SUITES[name](samples, substream(seed, index))
        logger.debug("Self-check %s: %s (%s)", name, result.passed, result.detail)
        results.append(result)
    return results
