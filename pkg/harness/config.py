"""
Flat ``key = value`` experiment files.

    # Small-matrix sweep
    n_symbols = 15
    n_dims = 10
    snr_grid_db = 0:2:16
    detectors = soav,linf
    output_path = results/small.csv

Blank lines and ``#`` comments are ignored. Unknown keys, repeated keys and
values that do not parse raise ``ValidationError`` naming the line.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping
from pathlib import Path
from typing import Any

from django.conf import settings
from django.core.exceptions import ValidationError

from channel.types import Modulation
from harness.detectors import DETECTORS, DetectorSpec, parse_detector_names
from harness.snr import parse_snr_grid
from harness.types import ExperimentConfig


def parse_bool(text: str) -> bool:
    value = text.strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"{text!r} is not a boolean.")


def _modulation(text: str) -> Modulation:
    value = text.strip().lower()
    if value not in Modulation.values:
        raise ValueError(f"unknown modulation {text!r}.")
    return Modulation(value)


EXPERIMENT_KEYS: dict[str, Callable[[str], Any]] = {
    "n_symbols": int,
    "n_dims": int,
    "modulation": _modulation,
    "snr_grid_db": parse_snr_grid,
    "realizations": int,
    "bits_per_realization": int,
    "detectors": parse_detector_names,
    "master_seed": int,
    "output_path": Path,
    "workers": int,
    "resume": parse_bool,
    "time_detectors": parse_bool,
    "soav_lambda": float,
    "soav_lipschitz": float,
    "soav_auto_lipschitz": parse_bool,
    "soav_max_iter": int,
    "soav_tol": float,
    "linf_epsilon": float,
    "ml_max_dimension": int,
}

_DETECTOR_KEYS = {
    "soav_lambda": "lam",
    "soav_lipschitz": "lipschitz",
    "soav_auto_lipschitz": "auto_lipschitz",
    "soav_max_iter": "max_iter",
    "soav_tol": "tol",
    "linf_epsilon": "epsilon",
    "ml_max_dimension": "max_dimension",
}


def read_experiment_config(path: Path | str) -> dict[str, Any]:
    """Parses an experiment file into typed values keyed like ``EXPERIMENT_KEYS``."""
    values: dict[str, Any] = {}
    text = Path(path).read_text(encoding="utf-8")
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep:
            raise ValidationError(f"line {number}: expected 'key = value'.")
        if key not in EXPERIMENT_KEYS:
            raise ValidationError(f"line {number}: unknown key {key!r}.")
        if key in values:
            raise ValidationError(f"line {number}: {key!r} is set twice.")
        try:
            values[key] = EXPERIMENT_KEYS[key](value.strip())
        except (ValueError, ValidationError) as exc:
            if isinstance(exc, ValidationError):
                detail = "; ".join(exc.messages)
            else:
                detail = str(exc)
            raise ValidationError(
                f"line {number}: bad value for {key!r}: {detail}"
            ) from exc
    return values


def build_detector_spec(name: str, values: Mapping[str, Any]) -> DetectorSpec:
    """Detector with the ``<name>_*`` keys of ``values`` applied to its config."""
    overrides = {
        field: values[key]
        for key, field in _DETECTOR_KEYS.items()
        if key.startswith(f"{name}_") and values.get(key) is not None
    }
    if name not in DETECTORS:
        return DetectorSpec(name)
    config = DETECTORS[name].config_class(**overrides) if overrides else None
    return DetectorSpec(name, config)


def build_experiment_config(values: Mapping[str, Any]) -> ExperimentConfig:
    """
    ExperimentConfig from parsed values. Missing keys take the settings
    defaults; ``n_symbols`` and ``n_dims`` are required.
    """
    for required in ("n_symbols", "n_dims"):
        if values.get(required) is None:
            raise ValidationError(f"{required} is required.")

    names = values.get("detectors") or settings.EXPERIMENT_DEFAULTS["detectors"]
    specs = [build_detector_spec(name, values) for name in names]

    kwargs = {
        key: values[key]
        for key in (
            "modulation",
            "snr_grid_db",
            "realizations",
            "bits_per_realization",
            "master_seed",
            "output_path",
            "workers",
            "resume",
            "time_detectors",
        )
        if values.get(key) is not None
    }
    cfg = ExperimentConfig(
        n_symbols=values["n_symbols"],
        n_dims=values["n_dims"],
        detectors=tuple(specs),
        **kwargs,
    )
    cfg.clean()
    return cfg
