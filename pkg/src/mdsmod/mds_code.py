"""(N, N-1) MDS tuple code over the class alphabet {1..Q} and its bit labelings.

A tuple ``(I_1, ..., I_N)`` is a codeword when its elements sum to zero
modulo Q (``Parity.MODQ``). The first N-1 elements each carry ``l = log2(Q)``
bits, most-significant bit first, groups ordered by element index. The
``Parity.SPC`` variant instead picks the last element so that the XOR of all
N class labels is zero, i.e. a bitwise single parity check on the labels.

Scalar helpers work on bit strings such as ``"0110"``; the ``*_array``
functions are the vectorized forms used by the modem.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import ConfigurationError, DomainError, IntegrityError

Bits = Union[str, Sequence[int]]


class Mapping(enum.Enum):
    GRAY = "gray"
    NATURAL = "natural"


class Parity(enum.Enum):
    MODQ = "modq"
    SPC = "spc"


@dataclass(frozen=True)
class MappingMode:
    mapping: Mapping = Mapping.GRAY
    parity: Parity = Parity.MODQ


def bits_per_class(Q: int) -> int:
    """Return ``l`` with ``Q == 2**l``; other Q cannot be bit-mapped."""
    if Q < 1 or Q & (Q - 1):
        raise ConfigurationError(f"bit mapping needs Q to be a power of two, got Q={Q}")
    return Q.bit_length() - 1


def _as_bits(bits: Bits) -> list[int]:
    if isinstance(bits, str):
        out = [ord(c) - 48 for c in bits if not c.isspace()]
    else:
        out = [int(b) for b in bits]
    if any(b not in (0, 1) for b in out):
        raise DomainError(f"not a bit string: {bits!r}")
    return out


def _to_str(bits: Sequence[int]) -> str:
    return "".join("1" if b else "0" for b in bits)


def _int_to_bits(value: int, width: int) -> list[int]:
    return [(value >> (width - 1 - i)) & 1 for i in range(width)]


def _bits_to_int(bits: Sequence[int]) -> int:
    value = 0
    for b in bits:
        value = (value << 1) | b
    return value


def _check_class(k: int, Q: int) -> None:
    if not 1 <= k <= Q:
        raise DomainError(f"class index {k} outside 1..{Q}")


def gray_encode(value):
    """Reflected binary code of a non-negative integer (works on arrays too)."""
    return value ^ (value >> 1)


def gray_decode(code):
    """Inverse of :func:`gray_encode`."""
    value = np.array(code, dtype=np.int64, copy=True)
    shift = value >> 1
    while np.any(shift):
        value ^= shift
        shift >>= 1
    return int(value) if value.ndim == 0 else value


def parity_element(prefix: Sequence[int], Q: int) -> int:
    """Last tuple element making the tuple sum to zero modulo Q.

    >>> parity_element((1, 2), 4)
    1
    """
    if Q < 1:
        raise DomainError(f"Q must be >= 1, got {Q}")
    for k in prefix:
        _check_class(k, Q)
    k = (-sum(prefix)) % Q
    return Q if k == 0 else k


def gray_label(k: int, l: int) -> str:
    _check_class(k, 1 << l)
    return _to_str(_int_to_bits(gray_encode(k - 1), l))


def gray_class(bits: Bits) -> int:
    b = _as_bits(bits)
    return gray_decode(_bits_to_int(b)) + 1


def natural_label(k: int, l: int) -> str:
    _check_class(k, 1 << l)
    return _to_str(_int_to_bits(k - 1, l))


def natural_class(bits: Bits) -> int:
    return _bits_to_int(_as_bits(bits)) + 1


def label_table(Q: int, mapping: Mapping) -> np.ndarray:
    """Integer label of each class; entry ``k-1`` belongs to class ``k``."""
    bits_per_class(Q)
    ranks = np.arange(Q, dtype=np.int64)
    return gray_encode(ranks) if mapping is Mapping.GRAY else ranks


def class_table(Q: int, mapping: Mapping) -> np.ndarray:
    """Inverse of :func:`label_table`: zero-based class rank for each label."""
    labels = label_table(Q, mapping)
    inverse = np.empty(Q, dtype=np.int64)
    inverse[labels] = np.arange(Q)
    return inverse


def encode_tuple(bits: Bits, mode: MappingMode, N: int, Q: int) -> tuple[int, ...]:
    """Map ``(N-1)*log2(Q)`` bits to a codeword tuple.

    >>> encode_tuple("1101", MappingMode(), 3, 4)
    (3, 2, 3)
    """
    b = np.asarray(_as_bits(bits), dtype=np.uint8)
    return tuple(int(k) for k in encode_tuples(b[None, :], mode, N, Q)[0])


def decode_tuple(tup: Sequence[int], mode: MappingMode, Q: int) -> str:
    """Bit string carried by a codeword tuple; raises on a parity violation."""
    arr = np.asarray(tup, dtype=np.int64)
    if arr.ndim != 1 or arr.size < 2:
        raise DomainError(f"tuple needs at least two elements: {tup!r}")
    if np.any(arr < 1) or np.any(arr > Q):
        raise DomainError(f"tuple {tuple(tup)} has elements outside 1..{Q}")
    return _to_str(decode_tuples(arr[None, :], mode, Q)[0])


def encode_tuples(bits: np.ndarray, mode: MappingMode, N: int, Q: int) -> np.ndarray:
    """Vectorized :func:`encode_tuple`: ``(B, (N-1)*l)`` bits to ``(B, N)`` classes."""
    if N < 2:
        raise DomainError(f"N must be >= 2, got {N}")
    l = bits_per_class(Q)
    bits = np.asarray(bits)
    if bits.ndim != 2 or bits.shape[1] != (N - 1) * l:
        raise DomainError(f"expected {(N - 1) * l} bits per tuple, got shape {bits.shape}")
    B = bits.shape[0]
    classes = np.empty((B, N), dtype=np.int64)
    if l == 0:
        classes[:] = 1
        return classes
    weights = 1 << np.arange(l - 1, -1, -1)
    labels = bits.reshape(B, N - 1, l).astype(np.int64) @ weights
    inverse = class_table(Q, mode.mapping)
    classes[:, : N - 1] = inverse[labels] + 1
    if mode.parity is Parity.MODQ:
        last = (-classes[:, : N - 1].sum(axis=1)) % Q
        classes[:, N - 1] = np.where(last == 0, Q, last)
    else:
        parity_label = np.bitwise_xor.reduce(labels, axis=1)
        classes[:, N - 1] = inverse[parity_label] + 1
    return classes


def decode_tuples(classes: np.ndarray, mode: MappingMode, Q: int) -> np.ndarray:
    """Vectorized :func:`decode_tuple`: ``(B, N)`` classes to ``(B, (N-1)*l)`` bits."""
    l = bits_per_class(Q)
    classes = np.asarray(classes, dtype=np.int64)
    B, N = classes.shape
    if not tuple_is_valid(classes, mode, Q).all():
        raise IntegrityError("tuple violates the parity rule")
    if l == 0:
        return np.zeros((B, 0), dtype=np.uint8)
    labels = label_table(Q, mode.mapping)[classes[:, : N - 1] - 1]
    shifts = np.arange(l - 1, -1, -1)
    return ((labels[..., None] >> shifts) & 1).reshape(B, (N - 1) * l).astype(np.uint8)


def tuple_is_valid(classes: np.ndarray, mode: MappingMode, Q: int) -> np.ndarray:
    classes = np.asarray(classes, dtype=np.int64)
    if mode.parity is Parity.MODQ:
        return classes.sum(axis=-1) % Q == 0
    labels = label_table(Q, mode.mapping)[classes - 1]
    return np.bitwise_xor.reduce(labels, axis=-1) == 0


def enumerate_tuples(
    N: int, Q: int, parity: Parity = Parity.MODQ, mapping: Mapping = Mapping.GRAY
) -> list[tuple[int, ...]]:
    """All ``Q**(N-1)`` codeword tuples, in lexicographic order of their prefix.

    ``mapping`` only matters for ``Parity.SPC``, whose parity element is
    defined through the class labels.
    """
    if N < 2:
        raise DomainError(f"N must be >= 2, got {N}")
    if Q < 1:
        raise DomainError(f"Q must be >= 1, got {Q}")
    out = []
    if parity is Parity.MODQ:
        for prefix in itertools.product(range(1, Q + 1), repeat=N - 1):
            out.append(prefix + (parity_element(prefix, Q),))
        return out
    labels = label_table(Q, mapping)
    inverse = class_table(Q, mapping)
    for prefix in itertools.product(range(1, Q + 1), repeat=N - 1):
        acc = 0
        for k in prefix:
            acc ^= int(labels[k - 1])
        out.append(prefix + (int(inverse[acc]) + 1,))
    return out
