"""Quick oracle checks runnable from an installed package (``mdsmod selftest``)."""
from __future__ import annotations

import itertools

import numpy as np

from . import kernels
from .channel import transmit
from .detect import detect_trellis, ml_exhaustive
from .fec import K3, K7, conv_encode, viterbi_hard, viterbi_soft
from .llr import llr_optimal
from .mds_code import Mapping, MappingMode, decode_tuple, encode_tuple, enumerate_tuples
from .modem import ModemConfig, build_sets, codebook, stream_codebook

# (tuple, bits under the natural baseline mapping, bits under Gray mapping)
MAPPING_TABLE = [
    ((1, 1, 2), "0000", "0000"), ((1, 2, 1), "0001", "0001"),
    ((1, 3, 4), "0010", "0011"), ((1, 4, 3), "0011", "0010"),
    ((2, 4, 2), "0111", "0110"), ((3, 4, 1), "1011", "1110"),
    ((4, 4, 4), "1111", "1010"), ((4, 3, 1), "1110", "1011"),
    ((4, 2, 2), "1101", "1001"), ((4, 1, 3), "1100", "1000"),
    ((3, 1, 4), "1000", "1100"), ((2, 1, 1), "0100", "0100"),
    ((2, 2, 4), "0101", "0101"), ((2, 3, 3), "0110", "0111"),
    ((3, 3, 2), "1010", "1111"), ((3, 2, 3), "1001", "1101"),
]


def check_mapping_table():
    for tup, natural, gray in MAPPING_TABLE:
        for mapping, bits in ((Mapping.NATURAL, natural), (Mapping.GRAY, gray)):
            mode = MappingMode(mapping)
            if encode_tuple(bits, mode, 3, 4) != tup or decode_tuple(tup, mode, 4) != bits:
                return False, f"{mapping.value} row {tup}"
    return True, "16 rows, both mappings"


def check_enumeration():
    for N, Q in itertools.product(range(2, 6), (1, 2, 3, 4, 5, 8)):
        if Q ** (N - 1) > 4096:
            continue
        tuples = enumerate_tuples(N, Q)
        if len(set(tuples)) != Q ** (N - 1) or any(sum(t) % Q for t in tuples):
            return False, f"N={N} Q={Q}"
    return True, "counts and parity"


def check_trellis(n=300, seed=1):
    rng = np.random.default_rng(seed)
    cfg = ModemConfig(3, 4, 2)
    sets = build_sets(cfg)
    words, _ = codebook(cfg, sets)
    for _ in range(n):
        real = transmit(words[rng.integers(len(words))], 0.3, rng)
        _, m_ex = ml_exhaustive(real.y, real.h, words)
        dec = detect_trellis(real.y, real.h, sets, cfg)
        if abs(dec.metric - m_ex) > 1e-9 * max(1.0, m_ex):
            return False, f"metric {dec.metric} vs {m_ex}"
    return True, f"{n} instances"


def check_llr(n=100, seed=2):
    rng = np.random.default_rng(seed)
    cfg = ModemConfig(2, 2, 1)
    sets = build_sets(cfg)
    cb = stream_codebook(cfg, sets)
    N0 = 0.5
    for _ in range(n):
        real = transmit(sets.points[0, 0] * np.ones(2), N0, rng)
        obs = (real.y / real.h).real
        p = [np.prod(np.exp(-np.abs(real.h) ** 2 * (obs - s) ** 2 / N0)) for s in cb.points]
        p0 = sum(pi for pi, b in zip(p, cb.bits[:, 0]) if b == 0)
        p1 = sum(pi for pi, b in zip(p, cb.bits[:, 0]) if b == 1)
        ref = np.clip(np.log(p0 / p1), -30, 30)
        got = llr_optimal(obs, real.h, cb, 0, N0)
        if abs(got - ref) > 1e-6 * max(1.0, abs(ref)):
            return False, f"{got} vs {ref}"
    return True, f"{n} instances"


def check_fec():
    for code in (K3, K7):
        imp = conv_encode([1] + [0] * (code.K - 1), code, terminate=False).reshape(-1, 2)
        if [tuple(c) for c in imp.T] != [tuple(g) for g in code.generators]:
            return False, f"impulse response of {code.name}"
    rng = np.random.default_rng(3)
    data = rng.integers(0, 2, 20).astype(np.uint8)
    c = conv_encode(data, K3)
    for i in range(c.size):
        bad = c.copy()
        bad[i] ^= 1
        if not (viterbi_hard(bad, K3) == data).all() or not (viterbi_soft(1.0 - 2 * bad, K3) == data).all():
            return False, f"flip {i}"
    return True, "impulse responses, single flips"


def check_backends(seed=4):
    rng = np.random.default_rng(seed)
    d = rng.random((50, 4, 4))
    nxt = (np.arange(4)[:, None] + np.arange(4)[None, :] + 1) % 4
    a = kernels.trellis_min_nb(d, nxt)
    b = kernels.trellis_min_np(d, nxt)
    if not (np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])):
        return False, "trellis kernels disagree"
    return True, f"active backend {kernels.BACKEND}"


CHECKS = {
    "mapping_table": check_mapping_table,
    "enumeration": check_enumeration,
    "trellis_vs_exhaustive": check_trellis,
    "llr_vs_bruteforce": check_llr,
    "fec": check_fec,
    "kernel_backends": check_backends,
}


def run(echo=print) -> bool:
    ok = True
    for name, fn in CHECKS.items():
        passed, detail = fn()
        ok &= passed
        echo(f"{'PASS' if passed else 'FAIL'} {name}: {detail}")
    return ok
