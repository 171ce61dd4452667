from __future__ import annotations

from dataclasses import dataclass, field

from django.conf import settings
from django.core.exceptions import ValidationError


def _linf_default(key: str):
    return field(default_factory=lambda: settings.LINF_DEFAULTS[key])


def _ml_default(key: str):
    return field(default_factory=lambda: settings.ML_DEFAULTS[key])


@dataclass(frozen=True)
class LinfConfig:
    """
    min ‖z‖∞ s.t. ‖y − Hz‖₂ ≤ ε, solved through min μ‖y − Hz‖₂² + ‖z‖∞ over an
    increasing μ schedule.

    ``epsilon=None`` uses ε² = R·N0/2 (the expected squared noise norm of the
    R-row real system; M·N0 for stacked QPSK).
    """

    epsilon: float | None = _linf_default("epsilon")
    penalty_schedule: tuple[float, ...] = _linf_default("penalty_schedule")
    inner_tol: float = _linf_default("inner_tol")
    max_inner: int = _linf_default("max_inner")
    residual_slack: float = _linf_default("residual_slack")

    @property
    def max_outer(self) -> int:
        return len(self.penalty_schedule)

    def clean(self) -> None:
        if self.epsilon is not None and self.epsilon < 0:
            raise ValidationError("epsilon must be non-negative.")
        if not self.penalty_schedule:
            raise ValidationError("penalty_schedule must not be empty.")
        if any(mu <= 0 for mu in self.penalty_schedule):
            raise ValidationError("penalty weights must be positive.")
        if any(b <= a for a, b in zip(self.penalty_schedule, self.penalty_schedule[1:])):
            raise ValidationError("penalty_schedule must be strictly increasing.")
        if self.inner_tol <= 0:
            raise ValidationError("inner_tol must be positive.")
        if self.max_inner < 1:
            raise ValidationError("max_inner must be at least 1.")
        if self.residual_slack < 1:
            raise ValidationError("residual_slack must be at least 1.")


@dataclass(frozen=True)
class MlConfig:
    max_dimension: int = _ml_default("max_dimension")
    chunk_size: int = _ml_default("chunk_size")

    def clean(self) -> None:
        if not 1 <= self.max_dimension <= settings.ML_MAX_DIMENSION_LIMIT:
            raise ValidationError(
                f"max_dimension must be between 1 and {settings.ML_MAX_DIMENSION_LIMIT}."
            )
        if self.chunk_size < 1:
            raise ValidationError("chunk_size must be positive.")
