"""Inner loops shared by detection, LLR computation and Viterbi decoding.

Every kernel exists twice: a numba loop version (``*_nb``) and a vectorized
numpy version (``*_np``). The public name points at the numba version unless
``MDSMOD_DISABLE_NUMBA=1`` is set. The trellis and Viterbi versions perform
identical additions and comparisons, so their outputs agree exactly; the
log-sum-exp versions sum in different orders and agree to rounding.
"""
import numpy as np

from ._jit import USE_NUMBA, njit

__all__ = ["trellis_min", "viterbi_max", "llr_lse", "IMPLEMENTATIONS", "BACKEND"]


# --- parity trellis -------------------------------------------------------


@njit
def trellis_min_nb(d, next_state):
    B, N, Q = d.shape
    S = next_state.shape[0]
    choice = np.empty((B, N), dtype=np.int64)
    metric = np.empty(B, dtype=np.float64)
    V = np.empty((N + 1, S), dtype=np.float64)
    for b in range(B):
        for s in range(S):
            V[N, s] = 0.0 if s == 0 else np.inf
        for n in range(N - 1, -1, -1):
            for s in range(S):
                best = np.inf
                for q in range(Q):
                    c = d[b, n, q] + V[n + 1, next_state[s, q]]
                    if c < best:
                        best = c
                V[n, s] = best
        metric[b] = V[0, 0]
        s = 0
        for n in range(N):
            target = V[n, s]
            pick = 0
            for q in range(Q):
                if d[b, n, q] + V[n + 1, next_state[s, q]] == target:
                    pick = q
                    break
            choice[b, n] = pick
            s = next_state[s, pick]
    return choice, metric


def trellis_min_np(d, next_state):
    B, N, Q = d.shape
    S = next_state.shape[0]
    V = np.empty((N + 1, B, S))
    V[N] = np.inf
    V[N, :, 0] = 0.0
    for n in range(N - 1, -1, -1):
        c = d[:, n, None, :] + V[n + 1][:, next_state]
        V[n] = c.min(axis=2)
    rows = np.arange(B)
    s = np.zeros(B, dtype=np.int64)
    choice = np.empty((B, N), dtype=np.int64)
    for n in range(N):
        c = d[:, n, :] + V[n + 1][rows[:, None], next_state[s]]
        pick = np.argmax(c == V[n, rows, s][:, None], axis=1)
        choice[:, n] = pick
        s = next_state[s, pick]
    return choice, V[0, :, 0].copy()


# --- Viterbi --------------------------------------------------------------


@njit
def viterbi_max_nb(gains, pred, pred_out, terminated):
    T = gains.shape[0]
    S = pred.shape[0]
    pm = np.full(S, -np.inf)
    pm[0] = 0.0
    new = np.empty(S)
    surv = np.empty((T, S), dtype=np.int8)
    for t in range(T):
        for ns in range(S):
            a = pm[pred[ns, 0]] + gains[t, pred_out[ns, 0]]
            c = pm[pred[ns, 1]] + gains[t, pred_out[ns, 1]]
            if c > a:
                new[ns] = c
                surv[t, ns] = 1
            else:
                new[ns] = a
                surv[t, ns] = 0
        for ns in range(S):
            pm[ns] = new[ns]
    state = 0
    if not terminated:
        best = pm[0]
        for ns in range(1, S):
            if pm[ns] > best:
                best = pm[ns]
                state = ns
    bits = np.empty(T, dtype=np.uint8)
    for t in range(T - 1, -1, -1):
        bits[t] = state & 1
        state = pred[state, surv[t, state]]
    return bits


def viterbi_max_np(gains, pred, pred_out, terminated):
    T = gains.shape[0]
    S = pred.shape[0]
    pm = np.full(S, -np.inf)
    pm[0] = 0.0
    surv = np.empty((T, S), dtype=np.int8)
    for t in range(T):
        cand = pm[pred] + gains[t][pred_out]
        take1 = cand[:, 1] > cand[:, 0]
        surv[t] = take1
        pm = np.where(take1, cand[:, 1], cand[:, 0])
    state = 0 if terminated else int(np.argmax(pm))
    bits = np.empty(T, dtype=np.uint8)
    for t in range(T - 1, -1, -1):
        bits[t] = state & 1
        state = pred[state, surv[t, state]]
    return bits


# --- log-sum-exp LLR ------------------------------------------------------


@njit
def llr_lse_nb(e, labels):
    B, M = e.shape
    nb = labels.shape[1]
    out = np.empty((B, nb))
    for b in range(B):
        for j in range(nb):
            m0 = -np.inf
            m1 = -np.inf
            for m in range(M):
                v = e[b, m]
                if labels[m, j] == 0:
                    if v > m0:
                        m0 = v
                elif v > m1:
                    m1 = v
            s0 = 0.0
            s1 = 0.0
            for m in range(M):
                if labels[m, j] == 0:
                    s0 += np.exp(e[b, m] - m0)
                else:
                    s1 += np.exp(e[b, m] - m1)
            out[b, j] = (m0 + np.log(s0)) - (m1 + np.log(s1))
    return out


def llr_lse_np(e, labels):
    out = np.empty((e.shape[0], labels.shape[1]))
    for j in range(labels.shape[1]):
        zero = labels[:, j] == 0
        lse = []
        for sel in (zero, ~zero):
            x = e[:, sel]
            mx = x.max(axis=1)
            lse.append(mx + np.log(np.exp(x - mx[:, None]).sum(axis=1)))
        out[:, j] = lse[0] - lse[1]
    return out


IMPLEMENTATIONS = {
    "numba": {"trellis_min": trellis_min_nb, "viterbi_max": viterbi_max_nb, "llr_lse": llr_lse_nb},
    "numpy": {"trellis_min": trellis_min_np, "viterbi_max": viterbi_max_np, "llr_lse": llr_lse_np},
}

BACKEND = "numba" if USE_NUMBA else "numpy"
trellis_min = IMPLEMENTATIONS[BACKEND]["trellis_min"]
viterbi_max = IMPLEMENTATIONS[BACKEND]["viterbi_max"]
llr_lse = IMPLEMENTATIONS[BACKEND]["llr_lse"]
