"""Soft bit information for MDS streams.

Sign convention: positive LLR means bit 0 is more likely. Each element
contributes the Gaussian log-likelihood ``-|h|^2 |y~ - s|^2 / N0``. For an
I or Q part this is exact for per-dimension noise variance ``N0/2``, and for
a complex PSK element it is exact for complex variance ``N0``. All sums run
in the log domain and every output is clamped to +-30.

Bit positions, element positions and bit-within-group indices are zero based
in this API.

Three routes are provided:

* ``optimal``: marginalize over the whole stream codebook.
* ``elementwise``: use only the observation of the element that carries the
  bit group, ignoring the parity element.
* ``elementwise_spc``: element-wise LLRs for all N elements of a bitwise SPC
  codebook, then one single-parity-check extrinsic update per bit plane.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import kernels
from .constellation import DisjointConstellationSet, rank_labels
from .counters import DistanceCounter
from .detect import stream_observations
from .errors import ConfigurationError, DomainError
from .mds_code import Mapping, Parity, label_table
from .modem import ModemConfig, StreamCodebook

LLR_CLAMP = 30.0


class SpcMethod(enum.Enum):
    TANH = "tanh"
    MINSUM = "minsum"


class LlrMethod(enum.Enum):
    OPTIMAL = "optimal"
    ELEMENTWISE = "elementwise"
    ELEMENTWISE_SPC = "elementwise_spc"


def clamp(x):
    return np.clip(x, -LLR_CLAMP, LLR_CLAMP)


def _exponents(obs, gain, points, N0):
    if N0 <= 0:
        raise DomainError(f"N0 must be positive, got {N0}")
    diff = obs[..., None] - points
    return -gain[..., None] * (diff.real**2 + diff.imag**2) / N0


# --- optimal ---------------------------------------------------------------


def stream_llr_optimal(obs, gain, cb: StreamCodebook, N0: float, counter: DistanceCounter | None = None):
    """LLRs of every stream bit, ``(B, stream_bits)``, by full marginalization."""
    if cb.bits.shape[1] == 0:
        return np.zeros((obs.shape[0], 0))
    if counter is not None:
        counter.add(cb.size * cb.bits.shape[1])
    diff = obs[:, None, :] - cb.points[None, :, :]
    e = -(gain[:, None, :] * (diff.real**2 + diff.imag**2)).sum(axis=2) / N0
    return clamp(kernels.llr_lse(np.ascontiguousarray(e), cb.bits))


def llr_optimal(obs, h, cb: StreamCodebook, delta: int, N0: float, counter: DistanceCounter | None = None) -> float:
    """LLR of stream bit ``delta`` given one equalized stream observation vector."""
    if N0 <= 0:
        raise DomainError(f"N0 must be positive, got {N0}")
    if not 0 <= delta < cb.bits.shape[1]:
        raise DomainError(f"bit position {delta} outside 0..{cb.bits.shape[1] - 1}")
    column = cb.bits[:, delta]
    if column.all() or not column.any():
        raise ConfigurationError(f"bit {delta} takes a single value over the codebook")
    obs = np.asarray(obs)[None, :]
    gain = (np.abs(np.asarray(h)) ** 2)[None, :]
    if counter is not None:
        counter.add(cb.size)
    diff = obs[:, None, :] - cb.points[None, :, :]
    e = -(gain[:, None, :] * (diff.real**2 + diff.imag**2)).sum(axis=2) / N0
    return float(clamp(kernels.llr_lse(np.ascontiguousarray(e), column[:, None].copy()))[0, 0])


# --- element-wise ----------------------------------------------------------


def point_labels(sets: DisjointConstellationSet, mapping: Mapping) -> np.ndarray:
    """Bits of each point ``(Q*M1, l + l_sym)``: class label bits, then rank label bits.

    Rows follow ``sets.points.ravel()`` (class major).
    """
    Q, M1 = sets.Q, sets.M1
    l = Q.bit_length() - 1
    l_sym = M1.bit_length() - 1
    cls = label_table(Q, mapping)
    rnk = rank_labels(M1)
    cls_bits = (cls[:, None] >> np.arange(l - 1, -1, -1)) & 1
    rnk_bits = (rnk[:, None] >> np.arange(l_sym - 1, -1, -1)) & 1
    rows = np.concatenate(
        [np.repeat(cls_bits, M1, axis=0), np.tile(rnk_bits, (Q, 1))], axis=1
    )
    return rows.astype(np.uint8)


def elementwise_llrs(obs, gain, sets: DisjointConstellationSet, mapping: Mapping, N0: float, counter=None):
    """Per-element LLRs of class-label bits and rank-label bits.

    ``obs`` and ``gain`` are ``(B, N)``; returns ``(B, N, l)`` and ``(B, N, l_sym)``.
    """
    B, N = obs.shape
    labels = point_labels(sets, mapping)
    l = sets.Q.bit_length() - 1
    if labels.shape[1] == 0:
        return np.zeros((B, N, 0)), np.zeros((B, N, 0))
    if counter is not None:
        counter.add(sets.points.size * labels.shape[1] * B * N)
    e = _exponents(obs, gain, sets.points.ravel(), N0).reshape(B * N, -1)
    out = clamp(kernels.llr_lse(np.ascontiguousarray(e), labels)).reshape(B, N, -1)
    return out[..., :l], out[..., l:]


def llr_index_elementwise(obs, h, sets, phi: int, N0: float, mapping: Mapping = Mapping.GRAY, counter=None) -> float:
    """LLR of class-label bit ``phi`` from a single element's observation."""
    l = sets.Q.bit_length() - 1
    if not 0 <= phi < l:
        raise DomainError(f"phi {phi} outside 0..{l - 1}")
    labels = point_labels(sets, mapping)[:, phi : phi + 1].copy()
    if counter is not None:
        counter.add(sets.points.size)
    e = _exponents(np.asarray([obs]), np.asarray([abs(h) ** 2]), sets.points.ravel(), N0)
    return float(clamp(kernels.llr_lse(e, labels))[0, 0])


def llr_symbol_elementwise(obs, h, sets, m1: int, N0: float, counter=None) -> float:
    """LLR of rank-label bit ``m1`` of the point sent on one element."""
    l_sym = sets.M1.bit_length() - 1
    if l_sym == 0:
        raise ConfigurationError("M1 = 1 carries no symbol bits")
    if not 0 <= m1 < l_sym:
        raise DomainError(f"m1 {m1} outside 0..{l_sym - 1}")
    l = sets.Q.bit_length() - 1
    labels = point_labels(sets, Mapping.GRAY)[:, l + m1 : l + m1 + 1].copy()
    if counter is not None:
        counter.add(sets.points.size)
    e = _exponents(np.asarray([obs]), np.asarray([abs(h) ** 2]), sets.points.ravel(), N0)
    return float(clamp(kernels.llr_lse(e, labels))[0, 0])


# --- single parity check ---------------------------------------------------


def spc_extrinsic(llrs, method: SpcMethod = SpcMethod.TANH):
    """Extrinsic LLR of the XOR of the bits whose LLRs are given (last axis)."""
    L = np.asarray(llrs, dtype=np.float64)
    if L.shape[-1] < 1:
        raise DomainError("need at least one input LLR")
    if method is SpcMethod.MINSUM:
        return np.prod(np.sign(L), axis=-1) * np.min(np.abs(L), axis=-1)
    # 2 atanh(prod tanh(L/2)), folded pairwise in the log domain; the direct
    # form loses digits once tanh rounds toward 1
    acc = L[..., 0]
    for k in range(1, L.shape[-1]):
        b = L[..., k]
        acc = (
            np.sign(acc) * np.sign(b) * np.minimum(np.abs(acc), np.abs(b))
            + np.log1p(np.exp(-np.abs(acc + b)))
            - np.log1p(np.exp(-np.abs(acc - b)))
        )
    return acc


def spc_update(llrs, method: SpcMethod = SpcMethod.TANH, N: int | None = None):
    """Add the parity extrinsic to each data position.

    ``llrs`` holds one bit plane over positions ``0..N-1`` on its last axis,
    the parity position last. Returns the updated ``N-1`` data-position LLRs.
    """
    L = np.asarray(llrs, dtype=np.float64)
    if N is not None and L.shape[-1] != N:
        raise DomainError(f"expected {N} LLRs, got {L.shape[-1]}")
    n = L.shape[-1]
    if n < 2:
        raise DomainError("an SPC plane needs at least two positions")
    out = np.empty(L.shape[:-1] + (n - 1,))
    for pos in range(n - 1):
        others = np.delete(L, pos, axis=-1)
        out[..., pos] = L[..., pos] + spc_extrinsic(others, method)
    return clamp(out)


# --- frames ----------------------------------------------------------------


@dataclass
class LlrFrame:
    """LLRs for a batch of codewords, leading axes ``(streams, B)``.

    ``index`` is ``(S, B, N-1, l)``, ``parity`` is ``(S, B, l)`` (updated SPC
    route only, else None), ``symbol`` is ``(S, B, N, l_sym)``.
    """

    index: np.ndarray
    parity: np.ndarray | None
    symbol: np.ndarray

    def flat(self) -> np.ndarray:
        """LLRs in modem bit order, ``(B, total_bits)``."""
        S, B = self.index.shape[:2]
        parts = []
        for s in range(S):
            parts.append(self.index[s].reshape(B, -1))
            parts.append(self.symbol[s].reshape(B, -1))
        return np.concatenate(parts, axis=1)


def compute_llr_frame(
    yt,
    gain,
    sets: DisjointConstellationSet,
    cfg: ModemConfig,
    N0: float,
    method: LlrMethod,
    codebook: StreamCodebook | None = None,
    spc_method: SpcMethod = SpcMethod.TANH,
) -> LlrFrame:
    """LLRs of every bit of a batch of equalized codewords ``yt`` with gains ``|h|^2``."""
    if method is LlrMethod.ELEMENTWISE_SPC and cfg.parity is not Parity.SPC:
        raise ConfigurationError("the SPC update needs the bitwise SPC codebook")
    N, l, l_sym = cfg.N, cfg.l, cfg.l_sym
    gain = np.asarray(gain, dtype=np.float64)
    index, parity, symbol = [], [], []
    for obs in stream_observations(np.asarray(yt), cfg):
        B = obs.shape[0]
        if method is LlrMethod.OPTIMAL:
            if codebook is None:
                raise ConfigurationError("optimal LLRs need the stream codebook")
            flat = stream_llr_optimal(obs, gain, codebook, N0)
            n_index = (N - 1) * l
            index.append(flat[:, :n_index].reshape(B, N - 1, l))
            symbol.append(flat[:, n_index:].reshape(B, N, l_sym))
            continue
        idx, sym = elementwise_llrs(obs, gain, sets, cfg.mapping, N0)
        symbol.append(sym)
        if method is LlrMethod.ELEMENTWISE:
            index.append(idx[:, : N - 1])
        else:
            planes = np.swapaxes(idx, 1, 2)  # (B, l, N)
            index.append(np.swapaxes(spc_update(planes, spc_method), 1, 2))
            parity.append(idx[:, N - 1])
    return LlrFrame(np.stack(index), np.stack(parity) if parity else None, np.stack(symbol))
