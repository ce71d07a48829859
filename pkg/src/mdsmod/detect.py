"""Hard ML detection.

``ml_exhaustive`` searches the whole codebook. ``detect_trellis`` gets the
same answer in O(N*(Q*M1 + Q^2)) per stream: the metric separates over
elements, so the best point of each class is found first and a dynamic
program over the running parity state then picks the best valid tuple.
Ties go to the lexicographically smallest tuple.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .constellation import DisjointConstellationSet
from .counters import DistanceCounter
from .mds_code import Parity, label_table
from .modem import ModemConfig, Scheme


def ml_exhaustive(y, h, codebook):
    """Index and metric of ``argmin_s sum_n |y(n) - s(n) h(n)|^2``.

    ``y`` and ``h`` may carry a leading batch axis; ties resolve to the lowest
    codeword index.
    """
    y = np.asarray(y, dtype=np.complex128)
    h = np.asarray(h, dtype=np.complex128)
    codebook = np.asarray(codebook)
    if codebook.shape[0] == 0:
        raise ValueError("empty codebook")
    single = y.ndim == 1
    if single:
        y, h = y[None], h[None]
    idx = np.empty(y.shape[0], dtype=np.int64)
    metric = np.empty(y.shape[0])
    chunk = max(1, 2_000_000 // (codebook.size or 1))
    for start in range(0, y.shape[0], chunk):
        sl = slice(start, start + chunk)
        diff = y[sl, None, :] - codebook[None, :, :] * h[sl, None, :]
        m = (diff.real**2 + diff.imag**2).sum(axis=2)
        idx[sl] = np.argmin(m, axis=1)
        metric[sl] = m[np.arange(m.shape[0]), idx[sl]]
    if single:
        return int(idx[0]), float(metric[0])
    return idx, metric


def parity_transitions(cfg: ModemConfig) -> np.ndarray:
    """``next[s, q]``: parity state after appending class ``q + 1`` in state ``s``."""
    Q = cfg.Q
    states = np.arange(Q)[:, None]
    q = np.arange(Q)[None, :]
    if cfg.parity is Parity.MODQ:
        return ((states + q + 1) % Q).astype(np.int64)
    return (states ^ label_table(Q, cfg.mapping)[None, :]).astype(np.int64)


def stream_observations(yt: np.ndarray, cfg: ModemConfig) -> list[np.ndarray]:
    """Per-stream views of the equalized observation: I and Q parts, or the complex value."""
    if cfg.scheme is Scheme.IQM:
        return [yt.real, yt.imag]
    return [yt]


def class_distances(obs, gain, points):
    """``gain * |obs - p|^2`` for every point: ``(B, N)`` inputs give ``(B, N, Q, M1)``."""
    diff = obs[:, :, None, None] - points[None, None, :, :]
    return gain[:, :, None, None] * (diff.real**2 + diff.imag**2)


def detect_streams(yt, gain, sets: DisjointConstellationSet, cfg: ModemConfig, counter=None):
    """Batched trellis detection.

    Returns ``classes`` and ``ranks`` of shape ``(streams, B, N)`` and the
    total metric per codeword.
    """
    yt = np.asarray(yt)
    gain = np.asarray(gain, dtype=np.float64)
    nxt = parity_transitions(cfg)
    classes, ranks, metric = [], [], 0.0
    for obs in stream_observations(yt, cfg):
        dist = class_distances(obs, gain, sets.points)
        if counter is not None:
            counter.add(dist[0].size)
        best_rank = np.argmin(dist, axis=3)
        d = np.take_along_axis(dist, best_rank[..., None], axis=3)[..., 0]
        choice, m = kernels.trellis_min(np.ascontiguousarray(d), nxt)
        classes.append(choice + 1)
        ranks.append(np.take_along_axis(best_rank, choice[..., None], axis=2)[..., 0])
        metric = metric + m
    return np.stack(classes), np.stack(ranks), metric


@dataclass(frozen=True)
class TrellisDecision:
    tuple_i: tuple[int, ...]
    tuple_q: tuple[int, ...] | None
    symbols_i: tuple[int, ...]
    symbols_q: tuple[int, ...] | None
    metric: float
    distance_evals: int


def detect_trellis(y, h, sets: DisjointConstellationSet, cfg: ModemConfig, counter: DistanceCounter | None = None):
    """Exact ML decision for one received codeword via the parity trellis.

    ``symbols_*`` are zero-based in-class point ranks; ``tuple_q`` and
    ``symbols_q`` are None for PSK.
    """
    y = np.asarray(y, dtype=np.complex128)
    h = np.asarray(h, dtype=np.complex128)
    local = DistanceCounter()
    classes, ranks, metric = detect_streams((y / h)[None], (np.abs(h) ** 2)[None], sets, cfg, local)
    if counter is not None:
        counter.add(local.evals)

    def tup(a):
        return tuple(int(v) for v in a)

    iq = cfg.scheme is Scheme.IQM
    return TrellisDecision(
        tup(classes[0, 0]),
        tup(classes[1, 0]) if iq else None,
        tup(ranks[0, 0]),
        tup(ranks[1, 0]) if iq else None,
        float(metric[0]),
        local.evals,
    )
