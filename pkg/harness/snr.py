from __future__ import annotations

import math

from django.core.exceptions import ValidationError


def parse_snr_grid(text: str) -> tuple[float, ...]:
    """
    ``start:step:stop`` (stop included when exactly reachable) or ``a,b,c``.

    >>> parse_snr_grid("0:2:16")[-1]
    16.0
    """
    text = text.strip()
    if not text:
        raise ValidationError("SNR grid is empty.")
    try:
        if ":" not in text:
            values = tuple(float(part) for part in text.split(",") if part.strip())
        else:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValidationError(f"SNR range {text!r} must be start:step:stop.")
            start, step, stop = (float(p) for p in parts)
            if not step > 0:
                raise ValidationError("SNR step must be positive.")
            count = math.floor((stop - start) / step + 1e-9) + 1
            if count < 1:
                raise ValidationError(f"SNR range {text!r} is empty.")
            # Rounding keeps 0.1-style steps from drifting (0.30000000000000004).
            values = tuple(round(start + i * step, 10) for i in range(count))
    except ValueError as exc:
        raise ValidationError(f"Invalid SNR grid {text!r}: {exc}") from exc

    if not all(math.isfinite(v) for v in values):
        raise ValidationError("SNR values must be finite.")
    return values
