"""Rate-1/2 feedforward convolutional codes with hard and soft Viterbi decoding.

Generators are coefficient tuples with the D^0 term first. The encoder state
holds the last K-1 inputs, newest bit in the least significant position.
Viterbi ties are resolved toward the survivor whose oldest state bit is 0,
and toward state 0 when an unterminated trellis ends.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DomainError


@dataclass(frozen=True)
class ConvCode:
    generators: tuple[tuple[int, ...], tuple[int, ...]]
    name: str = ""
    _tables: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        g0, g1 = self.generators
        if len(g0) != len(g1) or len(g0) < 2:
            raise DomainError("both generators need the same length K >= 2")
        if not (g0[0] and g1[0]):
            raise DomainError("generators need a nonzero D^0 coefficient")

    @property
    def K(self) -> int:
        return len(self.generators[0])

    @property
    def rate(self) -> float:
        return 0.5

    @property
    def n_states(self) -> int:
        return 1 << (self.K - 1)

    def trellis(self):
        """``(pred, pred_out)``: the two predecessors of each state and the output
        pair index (``2*c0 + c1``) on the branch from each."""
        if not self._tables:
            K, S = self.K, self.n_states
            g = np.array(self.generators, dtype=np.int64)
            ns = np.arange(S)
            pred = np.empty((S, 2), dtype=np.int64)
            pred_out = np.empty((S, 2), dtype=np.int64)
            for oldest in (0, 1):
                # bit i of reg_int is the input delayed by i steps
                reg_int = ns | (oldest << (K - 1))
                reg = (reg_int[:, None] >> np.arange(K)) & 1
                out = (reg @ g.T) & 1
                pred[:, oldest] = (ns >> 1) | (oldest << (K - 2))
                pred_out[:, oldest] = 2 * out[:, 0] + out[:, 1]
            self._tables["pred"] = pred
            self._tables["pred_out"] = pred_out
        return self._tables["pred"], self._tables["pred_out"]


def _poly(*powers: int, K: int) -> tuple[int, ...]:
    return tuple(1 if i in powers else 0 for i in range(K))


# G(D) = [1 + D + D^2 + D^3 + D^6, 1 + D^2 + D^3 + D^5 + D^6]
K7 = ConvCode((_poly(0, 1, 2, 3, 6, K=7), _poly(0, 2, 3, 5, 6, K=7)), "k7")
# G(D) = [1 + D^2, 1 + D + D^2], octal (5, 7)
K3 = ConvCode((_poly(0, 2, K=3), _poly(0, 1, 2, K=3)), "k3")

CODES = {"k7": K7, "k3": K3}


def conv_encode(data, code: ConvCode, terminate: bool = True) -> np.ndarray:
    """Encode bits; output interleaves the two generator outputs per input bit."""
    u = np.asarray(data, dtype=np.uint8)
    if u.ndim != 1 or u.size == 0:
        raise DomainError("data must be a non-empty bit vector")
    if terminate:
        u = np.concatenate([u, np.zeros(code.K - 1, dtype=np.uint8)])
    out = np.empty((u.size, 2), dtype=np.uint8)
    for j, g in enumerate(code.generators):
        out[:, j] = np.convolve(u.astype(np.int64), np.asarray(g, dtype=np.int64))[: u.size] & 1
    return out.ravel()


def _steps(n_coded: int, code: ConvCode, terminate: bool) -> int:
    if n_coded % 2:
        raise DomainError("coded length must be even for a rate-1/2 code")
    steps = n_coded // 2
    if terminate and steps < code.K:
        raise DomainError(f"terminated block needs at least {code.K} output pairs")
    return steps


_PAIRS = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=np.float64)


def viterbi_soft(llrs, code: ConvCode, terminate: bool = True) -> np.ndarray:
    """Decode coded-bit LLRs (positive favours 0) by maximizing ``sum (1 - 2c) L``."""
    L = np.asarray(llrs, dtype=np.float64)
    steps = _steps(L.size, code, terminate)
    # gain of output pair p = 2*c0 + c1
    gains = L.reshape(steps, 2) @ (1 - 2 * _PAIRS).T
    pred, pred_out = code.trellis()
    bits = kernels.viterbi_max(np.ascontiguousarray(gains), pred, pred_out, terminate)
    return bits[: steps - (code.K - 1)] if terminate else bits


def viterbi_hard(coded, code: ConvCode, terminate: bool = True) -> np.ndarray:
    """Minimum Hamming distance decoding of hard coded bits."""
    c = np.asarray(coded, dtype=np.uint8)
    steps = _steps(c.size, code, terminate)
    rx = c.reshape(steps, 2).astype(np.float64)
    gains = -(np.abs(rx[:, None, :] - _PAIRS[None, :, :]).sum(axis=2))
    pred, pred_out = code.trellis()
    bits = kernels.viterbi_max(np.ascontiguousarray(gains), pred, pred_out, terminate)
    return bits[: steps - (code.K - 1)] if terminate else bits
