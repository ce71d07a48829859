import os
import subprocess
import sys

import numpy as np
import pytest

from mdsmod import kernels
from mdsmod.fec import K3, K7


def _modq_table(Q):
    return ((np.arange(Q)[:, None] + np.arange(Q)[None, :] + 1) % Q).astype(np.int64)


def _brute_trellis(d, Q):
    """Enumerate every valid class tuple; lexicographically first minimum wins."""
    import itertools

    B, N, _ = d.shape
    choice = np.empty((B, N), dtype=np.int64)
    metric = np.empty(B)
    for b in range(B):
        best, arg = np.inf, None
        for t in itertools.product(range(Q), repeat=N):
            if sum(q + 1 for q in t) % Q:
                continue
            m = sum(d[b, n, t[n]] for n in range(N))
            if m < best:
                best, arg = m, t
        choice[b], metric[b] = arg, best
    return choice, metric


@pytest.mark.parametrize("N, Q", [(2, 2), (3, 4), (4, 3)])
def test_trellis_against_enumeration(impl, N, Q, rng):
    d = rng.random((40, N, Q))
    choice, metric = impl["trellis_min"](d, _modq_table(Q))
    ref_c, ref_m = _brute_trellis(d, Q)
    assert np.array_equal(choice, ref_c)
    np.testing.assert_allclose(metric, ref_m, rtol=1e-12)


def test_trellis_ties(impl):
    d = np.zeros((1, 3, 4))
    choice, metric = impl["trellis_min"](d, _modq_table(4))
    assert choice.tolist() == [[0, 0, 1]] and metric[0] == 0


def test_backends_agree_exactly(rng):
    nb, np_ = kernels.IMPLEMENTATIONS["numba"], kernels.IMPLEMENTATIONS["numpy"]
    d = rng.random((200, 5, 8))
    nxt = _modq_table(8)
    a, b = nb["trellis_min"](d, nxt), np_["trellis_min"](d, nxt)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    for code in (K3, K7):
        pred, out = code.trellis()
        g = rng.normal(size=(300, 4))
        for term in (True, False):
            assert np.array_equal(nb["viterbi_max"](g, pred, out, term), np_["viterbi_max"](g, pred, out, term))
    e = rng.normal(0, 10, (100, 32))
    labels = rng.integers(0, 2, (32, 5)).astype(np.uint8)
    labels[0], labels[1] = 0, 1
    np.testing.assert_allclose(nb["llr_lse"](e, labels), np_["llr_lse"](e, labels), rtol=1e-12, atol=1e-12)


def test_llr_lse_against_direct(impl, rng):
    e = rng.normal(0, 3, (20, 16))
    labels = ((np.arange(16)[:, None] >> np.arange(4)) & 1).astype(np.uint8)
    out = impl["llr_lse"](e, labels)
    p = np.exp(e)
    for j in range(4):
        ref = np.log(p[:, labels[:, j] == 0].sum(1) / p[:, labels[:, j] == 1].sum(1))
        np.testing.assert_allclose(out[:, j], ref, rtol=1e-12)


def test_env_flag_selects_numpy():
    env = dict(os.environ, MDSMOD_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "import mdsmod.kernels as k; print(k.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "numpy"
