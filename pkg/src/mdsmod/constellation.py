"""Disjoint constellation families.

PAM: a (Q*M1)-ary odd-integer grid split by Ungerboeck partitioning, so
class q holds every Q-th grid point starting at position q-1. PSK: class q
is the M1-PSK rotated by ``2*pi*(q-1)/(M1*Q)``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .mds_code import gray_encode


class ConstellationKind(enum.Enum):
    PAM_PARTITION = "pam"
    PSK_ROTATION = "psk"


@dataclass(frozen=True)
class DisjointConstellationSet:
    """``points[q-1, r]`` is the point of rank r inside class q.

    Ranks follow amplitude (PAM) or angle (PSK). ``scale`` is the factor
    applied to the unit grid.
    """

    points: np.ndarray
    scale: float
    kind: ConstellationKind
    grid: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        self.points.setflags(write=False)

    @property
    def Q(self) -> int:
        return self.points.shape[0]

    @property
    def M1(self) -> int:
        return self.points.shape[1]

    @property
    def classes(self) -> list[np.ndarray]:
        return [self.points[q] for q in range(self.Q)]

    def average_energy(self) -> float:
        return float(np.mean(np.abs(self.points) ** 2))


def build_pam_partition(Q: int, M1: int, target_avg_energy: float | None = 0.5) -> DisjointConstellationSet:
    """Split (Q*M1)-PAM into Q classes of M1 points.

    ``target_avg_energy=None`` leaves the odd-integer grid unscaled.

    >>> build_pam_partition(2, 2, None).points.tolist()
    [[-3.0, 1.0], [-1.0, 3.0]]
    """
    if Q < 1 or M1 < 1:
        raise DomainError(f"Q and M1 must be >= 1, got Q={Q}, M1={M1}")
    size = Q * M1
    grid = np.arange(-(size - 1), size, 2, dtype=np.int64)
    # position j belongs to class j mod Q
    unscaled = grid.reshape(M1, Q).T.astype(np.float64)
    if target_avg_energy is None:
        scale = 1.0
    else:
        if target_avg_energy <= 0:
            raise DomainError("target_avg_energy must be positive")
        if size == 1:
            raise DomainError("a single-point PAM grid has zero energy and cannot be normalized")
        scale = float(np.sqrt(target_avg_energy / np.mean(grid.astype(np.float64) ** 2)))
    return DisjointConstellationSet(unscaled * scale, scale, ConstellationKind.PAM_PARTITION, grid)


def build_psk_partition(Q: int, M1: int, amplitude: float = 1.0) -> DisjointConstellationSet:
    """Q rotated copies of M1-PSK with class 1 unrotated."""
    if Q < 1 or M1 < 1:
        raise DomainError(f"Q and M1 must be >= 1, got Q={Q}, M1={M1}")
    m = np.arange(M1)
    q = np.arange(Q)
    angles = 2 * np.pi * m[None, :] / M1 + 2 * np.pi * q[:, None] / (M1 * Q)
    points = amplitude * np.exp(1j * angles)
    return DisjointConstellationSet(points, float(amplitude), ConstellationKind.PSK_ROTATION)


def symbol_bits(M1: int) -> int:
    if M1 < 1 or M1 & (M1 - 1):
        raise DomainError(f"M1 must be a power of two, got {M1}")
    return M1.bit_length() - 1


def point_label(q: int, m: int, l_sym: int) -> str:
    """Label of the rank-``m`` point (zero based) inside a class: Gray code of the rank.

    Labels do not depend on the class.
    """
    if not 0 <= m < (1 << l_sym):
        raise DomainError(f"point rank {m} outside 0..{(1 << l_sym) - 1}")
    g = gray_encode(m)
    return "".join(str((g >> (l_sym - 1 - i)) & 1) for i in range(l_sym))


def rank_labels(M1: int) -> np.ndarray:
    """Integer label of each in-class rank."""
    symbol_bits(M1)
    return gray_encode(np.arange(M1, dtype=np.int64))


def rank_from_label(M1: int) -> np.ndarray:
    labels = rank_labels(M1)
    inverse = np.empty(M1, dtype=np.int64)
    inverse[labels] = np.arange(M1)
    return inverse
