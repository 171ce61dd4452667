"""
SOAV detector: objective, closed-form proximity operator, gradient and FISTA.

Problem:  min_z  f(z) + g(z),
          f(z) = λ‖y − Hz‖₂²,   g(z) = ½‖z − 1‖₁ + ½‖z + 1‖₁.

All operations accept either a single vector or a K×B block of column vectors.
The FISTA momentum sequence does not depend on the data, so a block solve is
exactly B independent solves sharing one loop.
"""

from __future__ import annotations

import logging

import numpy as np
import numpy.typing as npt
from django.conf import settings

from channel.services import DimensionMismatchError
from channel.types import RealLinearSystem, SymbolVector
from core.timing import timed_call
from soav.types import DetectionResult, FistaState, InitialPoint, SoavConfig

logger = logging.getLogger(__name__)


class DivergenceError(ValueError):
    def __init__(self, iteration: int):
        self.iteration = iteration
        super().__init__(f"FISTA produced non-finite values at iteration {iteration}.")


def _check_compatible(
    z: npt.NDArray[np.float64], h: npt.NDArray[np.float64], y: npt.NDArray[np.float64]
) -> None:
    if h.ndim != 2:
        raise DimensionMismatchError("h must be a 2-D matrix.")
    if z.shape[0] != h.shape[1] or y.shape[0] != h.shape[0] or z.shape[1:] != y.shape[1:]:
        raise DimensionMismatchError(
            f"z{z.shape}, H{h.shape} and y{y.shape} are not compatible."
        )


def objective(
    z: npt.NDArray[np.float64],
    h: npt.NDArray[np.float64],
    y: npt.NDArray[np.float64],
    lam: float,
) -> float:
    """λ‖y − Hz‖₂² + ½‖z − 1‖₁ + ½‖z + 1‖₁ (summed over columns for a block)."""
    z = np.asarray(z, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    _check_compatible(z, h, y)
    residual = y - h @ z
    data_fit = lam * float(np.sum(residual * residual))
    return data_fit + 0.5 * float(np.sum(np.abs(z - 1.0))) + 0.5 * float(
        np.sum(np.abs(z + 1.0))
    )


def prox_soav(z: npt.ArrayLike, gamma: float) -> npt.NDArray[np.float64]:
    """
    prox of γ·g, coordinatewise:

        β + γ   if β < −1 − γ
        −1      if −1 − γ ≤ β < −1
        β       if −1 ≤ β < 1
        1       if 1 ≤ β < 1 + γ
        β − γ   if β ≥ 1 + γ

    γ = 1 gives the unscaled operator with breakpoints ±1 and ±2.
    """
    if not gamma > 0:
        raise ValueError("gamma must be positive.")
    beta = np.asarray(z, dtype=np.float64)
    upper = 1.0 + gamma
    return np.select(
        [beta < -upper, beta < -1.0, beta < 1.0, beta < upper],
        [beta + gamma, -1.0, beta, 1.0],
        default=beta - gamma,
    )


def _gradient(z, h, y, lam):
    return (2.0 * lam) * (h.T @ (h @ z - y))


def grad_f(
    z: npt.NDArray[np.float64],
    h: npt.NDArray[np.float64],
    y: npt.NDArray[np.float64],
    lam: float,
) -> npt.NDArray[np.float64]:
    """2λHᵀ(Hz − y)."""
    z = np.asarray(z, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    _check_compatible(z, h, y)
    return _gradient(z, h, y, lam)


def largest_singular_value_squared(
    h: npt.NDArray[np.float64],
    *,
    tol: float | None = None,
    max_iter: int | None = None,
) -> float:
    """σ_max(H)² by power iteration on HᵀH from a fixed start vector."""
    tol = settings.POWER_ITERATION_TOL if tol is None else tol
    max_iter = settings.POWER_ITERATION_MAX_ITER if max_iter is None else max_iter
    v = np.full(h.shape[1], 1.0 / np.sqrt(h.shape[1]))
    estimate = 0.0
    for _ in range(max_iter):
        w = h.T @ (h @ v)
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return 0.0
        v = w / norm
        if abs(norm - estimate) <= tol * norm:
            return norm
        estimate = norm
    return estimate


def estimate_lipschitz(h: npt.NDArray[np.float64], lam: float) -> float:
    """Lipschitz constant 2λσ_max(H)² of ∇f."""
    return 2.0 * lam * largest_singular_value_squared(h)


def decide(z_star: npt.ArrayLike) -> SymbolVector:
    """sign(z) with sign(0) = +1."""
    z = np.asarray(z_star, dtype=np.float64)
    if not np.all(np.isfinite(z)):
        raise ValueError("cannot decide on non-finite values.")
    return np.where(z >= 0.0, 1.0, -1.0)


def _initial_point(
    initial: InitialPoint, n_cols: int, y: npt.NDArray[np.float64]
) -> npt.NDArray[np.float64]:
    shape = (n_cols,) + y.shape[1:]
    if isinstance(initial, str):
        return np.ones(shape) if initial == "ones" else np.zeros(shape)
    start = np.asarray(initial, dtype=np.float64)
    if start.shape == shape:
        return start.copy()
    if start.ndim == 1 and y.ndim == 2 and start.shape[0] == n_cols:
        return np.repeat(start[:, None], y.shape[1], axis=1)
    raise DimensionMismatchError(
        f"initial point has shape {start.shape}, expected {shape}."
    )


def _iterate(
    h: npt.NDArray[np.float64],
    y: npt.NDArray[np.float64],
    z_start: npt.NDArray[np.float64],
    cfg: SoavConfig,
    lipschitz: float,
) -> tuple[FistaState, list[float] | None]:
    step = 1.0 / lipschitz
    state = FistaState(z_prev=z_start, z_cur=z_start, z_tilde=z_start.copy())
    trace: list[float] | None = [] if cfg.objective_trace else None

    for k in range(1, cfg.max_iter + 1):
        gradient = _gradient(state.z_tilde, h, y, cfg.lam)
        z = prox_soav(state.z_tilde - step * gradient, step)
        if not np.all(np.isfinite(z)):
            raise DivergenceError(k)
        change = state.advance(z)
        if trace is not None:
            trace.append(objective(z, h, y, cfg.lam))
        if cfg.tol > 0 and change < cfg.tol:
            break

    return state, trace


def fista_detect(
    system: RealLinearSystem, cfg: SoavConfig | None = None
) -> DetectionResult:
    """
    Solves the SOAV problem with FISTA and returns sign decisions.

    z⁽ᵏ⁾ = prox_{g/L}(z̃⁽ᵏ⁾ − ∇f(z̃⁽ᵏ⁾)/L),
    z̃⁽ᵏ⁺¹⁾ = z⁽ᵏ⁾ + ((t_k − 1)/t_{k+1})(z⁽ᵏ⁾ − z⁽ᵏ⁻¹⁾),  z⁽⁰⁾ = z̃⁽¹⁾.
    """
    cfg = cfg or SoavConfig()
    cfg.clean()
    h = np.asarray(system.h, dtype=np.float64)
    y = np.asarray(system.y, dtype=np.float64)
    z_start = _initial_point(cfg.initial_point, h.shape[1], y)
    _check_compatible(z_start, h, y)

    lipschitz = cfg.lipschitz
    if cfg.auto_lipschitz:
        estimate = estimate_lipschitz(h, cfg.lam)
        logger.debug(
            "Power-iteration Lipschitz estimate %.6g (configured %.6g).",
            estimate,
            lipschitz,
        )
        if estimate > 0:
            lipschitz = estimate

    (state, trace), elapsed = timed_call(_iterate, h, y, z_start, cfg, lipschitz)
    return DetectionResult(
        z_star=state.z_cur,
        decisions=decide(state.z_cur),
        iterations=state.k,
        objective_trace=tuple(trace) if trace is not None else None,
        wall_time=elapsed,
    )
