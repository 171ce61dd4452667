"""
Random channel model: modulation matrices, symbols, AWGN and QPSK real stacking.

Her fonksiyon saf; rastgelelik yalnızca parametre olarak verilen
``numpy.random.Generator`` üzerinden gelir. Deneme başına akışlar
``substream`` ile ana seed'den türetilir, böylece denemeler sıradan bağımsızdır.
"""

from __future__ import annotations

import logging
import math

import numpy as np
import numpy.typing as npt

from channel.types import (
    ChannelConfig,
    ComplexModulationMatrix,
    Modulation,
    RealLinearSystem,
    SymbolVector,
)

logger = logging.getLogger(__name__)


class InvalidDimensionError(ValueError):
    pass


class InvalidSymbolError(ValueError):
    pass


class DimensionMismatchError(ValueError):
    pass


def substream(master_seed: int, *counters: int) -> np.random.Generator:
    """
    Counter-derived random stream.

    The stream for (master_seed, c1, c2, ...) is
    ``SeedSequence(entropy=master_seed, spawn_key=(c1, c2, ...))``, so any trial
    can be regenerated alone, in any order and on any worker.
    """
    if not 0 <= master_seed < 2**64:
        raise ValueError("master_seed must be a 64-bit unsigned integer.")
    if any(c < 0 for c in counters):
        raise ValueError("stream counters must be non-negative.")
    sequence = np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(counters))
    return np.random.default_rng(sequence)


def _check_sizes(n_symbols: int, n_dims: int) -> None:
    if n_symbols < 1 or n_dims < 1:
        raise InvalidDimensionError(
            f"n_symbols and n_dims must be positive (got N={n_symbols}, M={n_dims})."
        )


def sample_modulation_matrix(
    n_symbols: int, n_dims: int, rng: np.random.Generator
) -> ComplexModulationMatrix:
    """M×N matrix whose real and imaginary parts are i.i.d. N(0, 1/(2M))."""
    _check_sizes(n_symbols, n_dims)
    scale = math.sqrt(1.0 / (2.0 * n_dims))
    real = rng.standard_normal((n_dims, n_symbols))
    imag = rng.standard_normal((n_dims, n_symbols))
    return ComplexModulationMatrix(entries=scale * (real + 1j * imag))


def sample_real_matrix(
    n_symbols: int, n_dims: int, rng: np.random.Generator
) -> npt.NDArray[np.float64]:
    """Real M×N matrix with i.i.d. N(0, 1/M) entries (BPSK path)."""
    _check_sizes(n_symbols, n_dims)
    return rng.standard_normal((n_dims, n_symbols)) / math.sqrt(n_dims)


def stack_real(
    h_complex: ComplexModulationMatrix | npt.NDArray[np.complex128],
) -> npt.NDArray[np.float64]:
    """[[Re H, -Im H], [Im H, Re H]] (2M×2N)."""
    entries = (
        h_complex.entries
        if isinstance(h_complex, ComplexModulationMatrix)
        else np.asarray(h_complex)
    )
    re, im = entries.real, entries.imag
    return np.block([[re, -im], [im, re]])


def _stack_complex(values: npt.ArrayLike) -> npt.NDArray[np.float64]:
    arr = np.asarray(values, dtype=np.complex128)
    return np.concatenate([arr.real, arr.imag], axis=0)


def stack_symbols(x_complex: npt.ArrayLike, *, scale: float = 1.0) -> SymbolVector:
    """
    [Re x; Im x] for QPSK symbols (±1 ± i)·scale.

    A 2-D input is treated as N×B columns and stacked along the first axis.
    """
    stacked = _stack_complex(x_complex) / scale
    valid = (stacked == 1.0) | (stacked == -1.0)
    if not np.all(valid):
        row = int(np.argwhere(~valid)[0][0])
        raise InvalidSymbolError(
            f"entry {row % (stacked.shape[0] // 2)} is not a QPSK symbol."
        )
    return stacked


def unstack_symbols(
    x: SymbolVector, *, scale: float = 1.0
) -> npt.NDArray[np.complex128]:
    x = np.asarray(x, dtype=np.float64)
    if x.shape[0] % 2:
        raise DimensionMismatchError("a stacked vector has even length.")
    half = x.shape[0] // 2
    return scale * (x[:half] + 1j * x[half:])


def stack_observation(y_complex: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Real-stacked form [Re y; Im y] of a complex observation or noise vector."""
    return _stack_complex(y_complex)


def sample_symbols(
    k: int, rng: np.random.Generator, n_vectors: int | None = None
) -> SymbolVector:
    """i.i.d. equiprobable ±1 entries; length k, or k×n_vectors when given."""
    if k < 1:
        raise InvalidDimensionError("k must be positive.")
    shape = (k,) if n_vectors is None else (k, n_vectors)
    bits = rng.integers(0, 2, size=shape)
    return 2.0 * bits - 1.0


def sample_qpsk_symbols(
    n: int, rng: np.random.Generator, n_vectors: int | None = None
) -> npt.NDArray[np.complex128]:
    """QPSK symbols a + ib with a, b ∈ {±1} (no 1/√2 normalization)."""
    if n < 1:
        raise InvalidDimensionError("n must be positive.")
    shape = (n,) if n_vectors is None else (n, n_vectors)
    real = 2.0 * rng.integers(0, 2, size=shape) - 1.0
    imag = 2.0 * rng.integers(0, 2, size=shape) - 1.0
    return real + 1j * imag


def snr_to_n0(snr_db: float, n_symbols: int, n_dims: int) -> float:
    """
    N0 for a received per-real-dimension SNR of (N/M) / (N0/2).

    With CN(0, 1/M) entries every stacked row of Hx has variance N/M, and the
    noise per real dimension has variance N0/2.
    """
    if not math.isfinite(snr_db):
        raise ValueError("snr_db must be finite.")
    _check_sizes(n_symbols, n_dims)
    return (2.0 * n_symbols / n_dims) * 10.0 ** (-snr_db / 10.0)


def transmit(
    h: npt.NDArray[np.float64],
    x: SymbolVector,
    n0: float,
    rng: np.random.Generator,
) -> npt.NDArray[np.float64]:
    """y = Hx + w with w ~ N(0, (N0/2)·I); ``x`` may hold column vectors."""
    if n0 < 0 or not math.isfinite(n0):
        raise ValueError("n0 must be a finite non-negative number.")
    if h.ndim != 2 or x.shape[0] != h.shape[1]:
        raise DimensionMismatchError(
            f"h is {h.shape[0]}×{h.shape[1] if h.ndim == 2 else '?'} "
            f"but x has {x.shape[0]} rows."
        )
    clean = h @ x
    noise = rng.standard_normal(clean.shape)
    return clean + math.sqrt(n0 / 2.0) * noise


def build_system(
    cfg: ChannelConfig,
    *,
    n_vectors: int | None = None,
    matrix_rng: np.random.Generator,
    symbol_rng: np.random.Generator,
    noise_rng: np.random.Generator,
) -> tuple[RealLinearSystem, SymbolVector]:
    """Draws H (stacked for QPSK), the transmitted symbols and y in one call."""
    cfg.clean()
    n0 = snr_to_n0(cfg.snr_db, cfg.n_symbols, cfg.n_dims)
    if cfg.modulation == Modulation.QPSK:
        h = stack_real(sample_modulation_matrix(cfg.n_symbols, cfg.n_dims, matrix_rng))
        x = stack_symbols(sample_qpsk_symbols(cfg.n_symbols, symbol_rng, n_vectors))
    else:
        h = sample_real_matrix(cfg.n_symbols, cfg.n_dims, matrix_rng)
        x = sample_symbols(cfg.n_symbols, symbol_rng, n_vectors)
    y = transmit(h, x, n0, noise_rng)
    logger.debug(
        "Drew %s system %s×%s at %.2f dB (N0=%.4g).",
        cfg.modulation,
        h.shape[0],
        h.shape[1],
        cfg.snr_db,
        n0,
    )
    return RealLinearSystem(h=h, y=y, n0=n0, modulation=Modulation(cfg.modulation)), x
