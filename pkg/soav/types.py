from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import numpy.typing as npt
from django.conf import settings
from django.core.exceptions import ValidationError

from channel.types import SymbolVector

InitialPoint = Literal["ones", "zeros"] | npt.NDArray[np.float64]


def _soav_default(key: str):
    return field(default_factory=lambda: settings.SOAV_DEFAULTS[key])


@dataclass(frozen=True)
class SoavConfig:
    """
    FISTA parameters for min λ‖y − Hz‖² + ½‖z − 1‖₁ + ½‖z + 1‖₁.

    ``lam`` is λ. ``tol`` = 0 disables early stopping. With ``auto_lipschitz``
    the step constant is 2λσ_max(H)² instead of ``lipschitz``.
    """

    lam: float = _soav_default("lam")
    lipschitz: float = _soav_default("lipschitz")
    max_iter: int = _soav_default("max_iter")
    tol: float = _soav_default("tol")
    initial_point: InitialPoint = _soav_default("initial_point")
    objective_trace: bool = _soav_default("objective_trace")
    auto_lipschitz: bool = _soav_default("auto_lipschitz")

    def clean(self) -> None:
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise ValidationError("lambda must be a positive number.")
        if not (math.isfinite(self.lipschitz) and self.lipschitz > 0):
            raise ValidationError("lipschitz must be a positive number.")
        if self.max_iter < 1:
            raise ValidationError("max_iter must be at least 1.")
        if self.tol < 0:
            raise ValidationError("tol must be non-negative.")
        if isinstance(self.initial_point, str) and self.initial_point not in (
            "ones",
            "zeros",
        ):
            raise ValidationError(
                f"Unknown initial point {self.initial_point!r}; use 'ones' or 'zeros'."
            )


@dataclass(frozen=True)
class DetectionResult:
    z_star: npt.NDArray[np.float64]
    decisions: SymbolVector
    iterations: int
    objective_trace: tuple[float, ...] | None = None
    wall_time: float = 0.0
    converged: bool = True


@dataclass
class FistaState:
    z_prev: npt.NDArray[np.float64]
    z_cur: npt.NDArray[np.float64]
    z_tilde: npt.NDArray[np.float64]
    t_cur: float = 1.0
    k: int = 0

    def advance(self, z_next: npt.NDArray[np.float64]) -> float:
        """Takes z⁽ᵏ⁾, updates t and z̃⁽ᵏ⁺¹⁾; returns max column ‖z⁽ᵏ⁾ − z⁽ᵏ⁻¹⁾‖₂."""
        t_next = next_momentum(self.t_cur)
        step = z_next - self.z_cur
        self.z_tilde = z_next + ((self.t_cur - 1.0) / t_next) * step
        self.z_prev, self.z_cur = self.z_cur, z_next
        self.t_cur = t_next
        self.k += 1
        return float(np.max(np.linalg.norm(step, axis=0)))


def next_momentum(t: float) -> float:
    """t_{k+1} = (1 + √(1 + 4t_k²)) / 2."""
    return (1.0 + math.sqrt(1.0 + 4.0 * t * t)) / 2.0
