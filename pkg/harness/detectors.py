from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

from django.core.exceptions import ValidationError

from baselines.services import linf_detect, ml_oracle
from baselines.types import LinfConfig, MlConfig
from channel.types import RealLinearSystem
from soav.services import fista_detect
from soav.types import DetectionResult, SoavConfig


@dataclass(frozen=True)
class DetectorEntry:
    detect: Callable[[RealLinearSystem, Any], DetectionResult]
    config_class: type


DETECTORS: dict[str, DetectorEntry] = {
    "soav": DetectorEntry(fista_detect, SoavConfig),
    "linf": DetectorEntry(linf_detect, LinfConfig),
    "ml": DetectorEntry(ml_oracle, MlConfig),
}


@dataclass(frozen=True)
class DetectorSpec:
    """A registered detector name plus its config (``None`` = defaults)."""

    name: str
    config: Any = None

    def __post_init__(self):
        if self.name not in DETECTORS:
            raise ValidationError(
                f"Unknown detector {self.name!r}; choose from {', '.join(DETECTORS)}."
            )
        if self.config is not None and not isinstance(
            self.config, DETECTORS[self.name].config_class
        ):
            raise ValidationError(
                f"Detector {self.name!r} expects a "
                f"{DETECTORS[self.name].config_class.__name__}."
            )

    def resolved_config(self):
        return self.config or DETECTORS[self.name].config_class()

    def run(self, system: RealLinearSystem) -> DetectionResult:
        return DETECTORS[self.name].detect(system, self.resolved_config())


def parse_detector_names(text: str) -> tuple[str, ...]:
    names = tuple(part.strip() for part in text.split(",") if part.strip())
    if not names:
        raise ValidationError("At least one detector is required.")
    if len(set(names)) != len(names):
        raise ValidationError(f"Detector list {text!r} has duplicates.")
    for name in names:
        if name not in DETECTORS:
            raise ValidationError(
                f"Unknown detector {name!r}; choose from {', '.join(DETECTORS)}."
            )
    return names
