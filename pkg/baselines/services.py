"""
Reference detectors: ℓ∞ minimization and exhaustive maximum likelihood.

The ℓ∞ detector keeps the first-order structure of the SOAV solver (same
momentum sequence, same block handling) so that timing comparisons measure the
formulation rather than the solver engineering.
"""

from __future__ import annotations

import logging
import math

import numpy as np
import numpy.typing as npt

from baselines.types import LinfConfig, MlConfig
from channel.services import DimensionMismatchError
from channel.types import RealLinearSystem
from core.timing import timed_call
from soav.services import decide, largest_singular_value_squared
from soav.types import DetectionResult, FistaState

logger = logging.getLogger(__name__)


class DimensionExceededError(ValueError):
    pass


def _as_block(system: RealLinearSystem) -> tuple[np.ndarray, np.ndarray]:
    h = np.asarray(system.h, dtype=np.float64)
    y = np.asarray(system.y, dtype=np.float64)
    if h.ndim != 2 or y.shape[0] != h.shape[0]:
        raise DimensionMismatchError(f"H{h.shape} and y{y.shape} are not compatible.")
    return h, (y[:, None] if y.ndim == 1 else y)


def _restore_shape(values: np.ndarray, system: RealLinearSystem) -> np.ndarray:
    return values[:, 0] if np.ndim(system.y) == 1 else values


def project_l1_ball(v: npt.ArrayLike, radius: float) -> npt.NDArray[np.float64]:
    """
    Euclidean projection onto {u : ‖u‖₁ ≤ radius} by sort-and-threshold.

    A 2-D input is projected column by column.
    """
    if not radius > 0:
        raise ValueError("radius must be positive.")
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim == 1:
        return _project_columns(arr[:, None], radius)[:, 0]
    return _project_columns(arr, radius)


def _project_columns(v: np.ndarray, radius: float) -> np.ndarray:
    magnitude = np.abs(v)
    inside = magnitude.sum(axis=0) <= radius
    if np.all(inside):
        return v.copy()

    descending = -np.sort(-magnitude, axis=0)
    ranks = np.arange(1, v.shape[0] + 1, dtype=np.float64)[:, None]
    theta = (np.cumsum(descending, axis=0) - radius) / ranks
    # Active coordinates form a prefix of the sorted order; keep its last index.
    active = descending > theta
    last = v.shape[0] - 1 - np.argmax(active[::-1], axis=0)
    threshold = theta[last, np.arange(v.shape[1])]

    projected = np.sign(v) * np.maximum(magnitude - threshold, 0.0)
    return np.where(inside, v, projected)


def _prox_linf(v: np.ndarray, step: float) -> np.ndarray:
    # Moreau: prox_{t‖·‖∞}(v) = v − Π_{‖·‖₁ ≤ t}(v)
    return v - project_l1_ball(v, step)


def _penalty_solve(
    h: np.ndarray,
    y: np.ndarray,
    z_start: np.ndarray,
    mu: float,
    sigma_sq: float,
    cfg: LinfConfig,
) -> tuple[np.ndarray, int]:
    """Accelerated proximal gradient on μ‖y − Hz‖² + ‖z‖∞, warm-started."""
    step = 1.0 / (2.0 * mu * sigma_sq)
    state = FistaState(z_prev=z_start, z_cur=z_start, z_tilde=z_start.copy())
    for _ in range(cfg.max_inner):
        gradient = (2.0 * mu) * (h.T @ (h @ state.z_tilde - y))
        z = _prox_linf(state.z_tilde - step * gradient, step)
        if state.advance(z) < cfg.inner_tol:
            break
    return state.z_cur, state.k


def _linf_iterate(
    h: np.ndarray, y: np.ndarray, epsilon: float, cfg: LinfConfig
) -> tuple[np.ndarray, int, bool]:
    n_vectors = y.shape[1]
    # A zero matrix leaves z = 0; any positive curvature keeps the step finite.
    sigma_sq = largest_singular_value_squared(h) or 1.0
    z = np.zeros((h.shape[1], n_vectors))
    final = np.zeros_like(z)
    best = np.zeros_like(z)
    best_residual = np.full(n_vectors, np.inf)
    pending = np.arange(n_vectors)
    iterations = 0

    for mu in cfg.penalty_schedule:
        z_stage, used = _penalty_solve(
            h, y[:, pending], z[:, pending], mu, sigma_sq, cfg
        )
        iterations += used
        z[:, pending] = z_stage

        residual = np.linalg.norm(y[:, pending] - h @ z_stage, axis=0)
        improved = residual < best_residual[pending]
        best[:, pending[improved]] = z_stage[:, improved]
        best_residual[pending[improved]] = residual[improved]

        feasible = residual <= cfg.residual_slack * epsilon
        final[:, pending[feasible]] = z_stage[:, feasible]
        pending = pending[~feasible]
        if pending.size == 0:
            return final, iterations, True

    final[:, pending] = best[:, pending]
    logger.warning(
        "ℓ∞ detector: residual above ε=%.4g for %d of %d vectors even at μ=%g; "
        "returning the best iterate (smallest residual %.4g).",
        epsilon,
        pending.size,
        n_vectors,
        cfg.penalty_schedule[-1],
        float(best_residual[pending].min()),
    )
    return final, iterations, False


def linf_detect(
    system: RealLinearSystem, cfg: LinfConfig | None = None
) -> DetectionResult:
    """
    ℓ∞-minimization detector: sign of the minimal-‖z‖∞ solution within ε.

    The first μ of the schedule whose residual is within ``residual_slack``·ε
    is kept. When no μ reaches it the best iterate is returned with
    ``converged=False``.
    """
    cfg = cfg or LinfConfig()
    cfg.clean()
    h, y = _as_block(system)
    if cfg.epsilon is not None:
        epsilon = cfg.epsilon
    else:
        epsilon = math.sqrt(h.shape[0] * system.n0 / 2.0)

    (z_star, iterations, converged), elapsed = timed_call(
        _linf_iterate, h, y, epsilon, cfg
    )
    z_star = _restore_shape(z_star, system)
    return DetectionResult(
        z_star=z_star,
        decisions=decide(z_star),
        iterations=iterations,
        wall_time=elapsed,
        converged=converged,
    )


def candidate_vectors(k: int, start: int, stop: int) -> np.ndarray:
    """
    Sign vectors for candidate indices [start, stop) as K×(stop − start) columns.

    Index i maps to z_j = +1 if bit (K − 1 − j) of i is 0, else −1; index 0 is
    the all-ones vector.
    """
    indices = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(k - 1, -1, -1, dtype=np.int64)
    bits = (indices[None, :] >> shifts[:, None]) & 1
    return 1.0 - 2.0 * bits


def _ml_search(
    h: np.ndarray, y: np.ndarray, chunk_size: int
) -> tuple[np.ndarray, int]:
    k = h.shape[1]
    n_candidates = 1 << k
    best_cost = np.full(y.shape[1], np.inf)
    best_index = np.zeros(y.shape[1], dtype=np.int64)
    evaluated = 0

    for start in range(0, n_candidates, chunk_size):
        stop = min(start + chunk_size, n_candidates)
        projected = h @ candidate_vectors(k, start, stop)
        for column in range(y.shape[1]):
            diff = projected - y[:, column : column + 1]
            cost = np.einsum("ij,ij->j", diff, diff)
            winner = int(np.argmin(cost))
            # Strict comparison keeps the lowest index on ties across chunks.
            if cost[winner] < best_cost[column]:
                best_cost[column] = cost[winner]
                best_index[column] = start + winner
        evaluated += stop - start

    decisions = np.column_stack(
        [candidate_vectors(k, int(i), int(i) + 1)[:, 0] for i in best_index]
    )
    return decisions, evaluated


def ml_oracle(system: RealLinearSystem, cfg: MlConfig | None = None) -> DetectionResult:
    """Exhaustive min ‖y − Hz‖₂ over z ∈ {±1}^K; ``iterations`` counts candidates."""
    cfg = cfg or MlConfig()
    cfg.clean()
    h, y = _as_block(system)
    if h.shape[1] > cfg.max_dimension:
        raise DimensionExceededError(
            f"ML search over K={h.shape[1]} exceeds max_dimension={cfg.max_dimension}."
        )

    (decisions, evaluated), elapsed = timed_call(_ml_search, h, y, cfg.chunk_size)
    decisions = _restore_shape(decisions, system)
    return DetectionResult(
        z_star=decisions.copy(),
        decisions=decisions,
        iterations=evaluated,
        wall_time=elapsed,
    )
