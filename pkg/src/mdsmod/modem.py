"""Bits to MDS-IQM / MDS-PSK codewords and back.

MDS-IQM runs two independent MDS streams, one on the in-phase and one on the
quadrature part of each codeword element; MDS-PSK runs a single complex
stream. Per stream the bit layout is ``[index bits | symbol bits]`` where the
index bits select the class tuple and the symbol bits (grouped by element,
MSB first) select a point within each class. A full IQM codeword carries
``[I-index | I-symbols | Q-index | Q-symbols]``.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import mds_code
from .constellation import (
    DisjointConstellationSet,
    build_pam_partition,
    build_psk_partition,
    rank_from_label,
    rank_labels,
    symbol_bits,
)
from .errors import ConfigurationError, DomainError
from .mds_code import Mapping, MappingMode, Parity


class Scheme(enum.Enum):
    IQM = "iqm"
    PSK = "psk"


@dataclass(frozen=True)
class ModemConfig:
    N: int
    Q: int
    M1: int = 1
    scheme: Scheme = Scheme.IQM
    mapping: Mapping = Mapping.GRAY
    parity: Parity = Parity.MODQ

    def __post_init__(self):
        if self.N < 2:
            raise ConfigurationError(f"N must be >= 2, got {self.N}")
        mds_code.bits_per_class(self.Q)
        try:
            symbol_bits(self.M1)
        except DomainError as exc:
            raise ConfigurationError(str(exc)) from None

    @property
    def mode(self) -> MappingMode:
        return MappingMode(self.mapping, self.parity)

    @property
    def n_streams(self) -> int:
        return 2 if self.scheme is Scheme.IQM else 1

    @property
    def l(self) -> int:
        return mds_code.bits_per_class(self.Q)

    @property
    def l_sym(self) -> int:
        return symbol_bits(self.M1)

    @property
    def stream_bits(self) -> int:
        index_bits, sym_bits = bits_per_codeword(self)
        return index_bits + sym_bits

    @property
    def total_bits(self) -> int:
        return self.n_streams * self.stream_bits


def build_sets(cfg: ModemConfig) -> DisjointConstellationSet:
    """Constellation family for ``cfg`` with unit average energy per complex element."""
    if cfg.scheme is Scheme.IQM:
        return build_pam_partition(cfg.Q, cfg.M1, 0.5)
    return build_psk_partition(cfg.Q, cfg.M1, 1.0)


def spectral_efficiency(cfg: ModemConfig) -> float:
    """Information bits per codeword element."""
    # floor(log2(Q^(N-1))) in exact integer arithmetic
    index_bits = (cfg.Q ** (cfg.N - 1)).bit_length() - 1
    per_stream = index_bits + cfg.N * np.log2(cfg.M1)
    return float(cfg.n_streams * per_stream / cfg.N)


def bits_per_codeword(cfg: ModemConfig) -> tuple[int, int]:
    """``(index_bits, symbol_bits)`` carried by one stream of a codeword."""
    return (cfg.N - 1) * cfg.l, cfg.N * cfg.l_sym


def _split_streams(bits: np.ndarray, cfg: ModemConfig) -> np.ndarray:
    return bits.reshape(bits.shape[0], cfg.n_streams, cfg.stream_bits).transpose(1, 0, 2)


def encode_stream(bits: np.ndarray, cfg: ModemConfig) -> tuple[np.ndarray, np.ndarray]:
    """Stream bits ``(B, stream_bits)`` to class tuples and in-class ranks, both ``(B, N)``."""
    n_index, _ = bits_per_codeword(cfg)
    classes = mds_code.encode_tuples(bits[:, :n_index], cfg.mode, cfg.N, cfg.Q)
    B = bits.shape[0]
    if cfg.l_sym == 0:
        ranks = np.zeros((B, cfg.N), dtype=np.int64)
    else:
        weights = 1 << np.arange(cfg.l_sym - 1, -1, -1)
        labels = bits[:, n_index:].reshape(B, cfg.N, cfg.l_sym).astype(np.int64) @ weights
        ranks = rank_from_label(cfg.M1)[labels]
    return classes, ranks


def decode_stream(classes: np.ndarray, ranks: np.ndarray, cfg: ModemConfig) -> np.ndarray:
    index_bits = mds_code.decode_tuples(classes, cfg.mode, cfg.Q)
    B = index_bits.shape[0]
    if cfg.l_sym == 0:
        return index_bits
    labels = rank_labels(cfg.M1)[np.asarray(ranks, dtype=np.int64)]
    shifts = np.arange(cfg.l_sym - 1, -1, -1)
    sym = ((labels[..., None] >> shifts) & 1).reshape(B, cfg.N * cfg.l_sym).astype(np.uint8)
    return np.concatenate([index_bits, sym], axis=1)


def modulate(bits, cfg: ModemConfig, sets: DisjointConstellationSet) -> np.ndarray:
    """Map bits to codewords.

    ``bits`` is either one codeword's worth (1-D) or a batch ``(B, total_bits)``;
    the result is ``(N,)`` or ``(B, N)`` complex samples accordingly.
    """
    arr = np.asarray(bits, dtype=np.uint8)
    single = arr.ndim == 1
    if single:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != cfg.total_bits:
        raise DomainError(f"expected {cfg.total_bits} bits per codeword, got shape {np.shape(bits)}")
    streams = []
    for stream_bits in _split_streams(arr, cfg):
        classes, ranks = encode_stream(stream_bits, cfg)
        streams.append(sets.points[classes - 1, ranks])
    if cfg.scheme is Scheme.IQM:
        samples = streams[0] + 1j * streams[1]
    else:
        samples = streams[0].astype(np.complex128)
    return samples[0] if single else samples


def demap_hard(tuple_i, tuple_q, symbols, cfg: ModemConfig) -> np.ndarray:
    """Bits carried by detected tuples and in-class point ranks.

    For PSK pass ``tuple_q=None`` and ``symbols`` as a single rank vector; for
    IQM ``symbols`` is the pair ``(ranks_i, ranks_q)``. Batched inputs with a
    leading axis are accepted.
    """
    if cfg.scheme is Scheme.IQM:
        tuples, ranks = (tuple_i, tuple_q), symbols
    else:
        tuples, ranks = (tuple_i,), (symbols,)
    tuples = [np.asarray(t, dtype=np.int64) for t in tuples]
    single = tuples[0].ndim == 1
    parts = []
    for t, r in zip(tuples, ranks):
        r = np.asarray(r, dtype=np.int64)
        if single:
            t, r = t[None, :], r[None, :]
        parts.append(decode_stream(t, r, cfg))
    out = np.concatenate(parts, axis=1)
    return out[0] if single else out


def all_bit_patterns(n: int) -> np.ndarray:
    """Every n-bit word, in increasing integer order, as ``(2**n, n)`` uint8."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.uint8)
    values = np.arange(1 << n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1)
    return ((values[:, None] >> shifts) & 1).astype(np.uint8)


@dataclass(frozen=True)
class StreamCodebook:
    """All stream codewords; row m carries the bit pattern with integer value m."""

    points: np.ndarray
    classes: np.ndarray
    ranks: np.ndarray
    bits: np.ndarray

    @cached_property
    def size(self) -> int:
        return self.points.shape[0]


def stream_codebook(cfg: ModemConfig, sets: DisjointConstellationSet) -> StreamCodebook:
    bits = all_bit_patterns(cfg.stream_bits)
    classes, ranks = encode_stream(bits, cfg)
    return StreamCodebook(sets.points[classes - 1, ranks], classes, ranks, bits)


def codebook(cfg: ModemConfig, sets: DisjointConstellationSet) -> tuple[np.ndarray, np.ndarray]:
    """Full complex codebook ``(M, N)`` and its bits ``(M, total_bits)``.

    For IQM row ``m = m_i * Mc + m_q`` pairs stream codewords ``m_i`` and ``m_q``.
    """
    sc = stream_codebook(cfg, sets)
    if cfg.scheme is Scheme.PSK:
        return sc.points.astype(np.complex128), sc.bits
    Mc = sc.size
    mi, mq = np.divmod(np.arange(Mc * Mc), Mc)
    words = sc.points[mi] + 1j * sc.points[mq]
    return words, np.concatenate([sc.bits[mi], sc.bits[mq]], axis=1)


def iter_tuples_and_ranks(cfg: ModemConfig):
    """Yield every ``(classes, ranks)`` pair of one stream (used by tests)."""
    tuples = mds_code.enumerate_tuples(cfg.N, cfg.Q, cfg.parity, cfg.mapping)
    for t in tuples:
        for r in itertools.product(range(cfg.M1), repeat=cfg.N):
            yield t, r
