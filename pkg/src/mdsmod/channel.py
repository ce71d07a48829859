"""i.i.d. Rayleigh fading with complex Gaussian noise, and zero-forcing equalization.

SNR convention: symbols carry unit average energy, so the symbol SNR is
``1/N0`` and ``Eb/N0 = 1 / (N0 * eta * rate)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateChannelError, DomainError

H_EPS = 1e-12


@dataclass(frozen=True)
class ChannelRealization:
    h: np.ndarray
    w: np.ndarray
    y: np.ndarray


def complex_normal(rng: np.random.Generator, shape, variance: float = 1.0) -> np.ndarray:
    """CN(0, variance) samples."""
    if isinstance(shape, int):
        shape = (shape,)
    z = rng.standard_normal((2, *shape))
    return np.sqrt(variance / 2) * (z[0] + 1j * z[1])


def transmit(codeword, N0, rng: np.random.Generator, h=None) -> ChannelRealization:
    """Pass codeword(s) through the channel.

    ``N0`` may be an array broadcastable to the codeword shape. Gains are
    drawn before noise. ``h`` overrides the fading draw (test hook);
    noise is still drawn from ``rng``.
    """
    if np.any(np.asarray(N0) < 0):
        raise DomainError(f"N0 must be non-negative, got {N0}")
    s = np.asarray(codeword, dtype=np.complex128)
    if h is None:
        h = complex_normal(rng, s.shape)
    else:
        h = np.broadcast_to(np.asarray(h, dtype=np.complex128), s.shape).copy()
    w = complex_normal(rng, s.shape, N0)
    return ChannelRealization(h, w, h * s + w)


def equalize(realization: ChannelRealization) -> np.ndarray:
    """Return ``y / h``; use ``.real`` / ``.imag`` for the I and Q observations."""
    h = realization.h
    if np.any(np.abs(h) <= H_EPS):
        raise DegenerateChannelError("fading gain below 1e-12; redraw the trial")
    return realization.y / h


def snr_to_n0(snr_db: float) -> float:
    return float(10.0 ** (-snr_db / 10.0))


def ebn0_db(snr_db: float, eta: float, rate: float = 1.0) -> float:
    return float(snr_db - 10.0 * np.log10(eta * rate))


def snr_from_ebn0(ebn0: float, eta: float, rate: float = 1.0) -> float:
    return float(ebn0 + 10.0 * np.log10(eta * rate))
