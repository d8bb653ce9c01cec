"""Hot inner loops, with numba and pure-numpy twins.

Backend selection: set ``LEVINEHAT_BACKEND`` to ``numba`` or ``numpy``;
the default (``auto``) uses numba when it is importable.  Both backends
implement the same algorithms with the same random stream and the same
integer arithmetic, so they produce bit-identical results; the numpy
twins are the readable reference, the numba twins are fast.

Everything here works on plain ndarrays; exact-rational wrapping happens
in the calling modules (a win count is exact, the probability is
count / 4**h).
"""

from __future__ import annotations

import math
import os

import numpy as np

from .rng import GAMMA, SplitMix64, uniforms

_env = os.environ.get("LEVINEHAT_BACKEND", "auto").strip().lower() or "auto"
if _env not in ("auto", "numba", "numpy"):
    raise ValueError(f"LEVINEHAT_BACKEND must be auto, numba or numpy, got {_env!r}")

_HAVE_NUMBA = False
if _env in ("auto", "numba"):
    try:
        from numba import njit

        _HAVE_NUMBA = True
    except ImportError:
        if _env == "numba":
            raise RuntimeError("LEVINEHAT_BACKEND=numba but numba is not installed")

USE_NUMBA = _HAVE_NUMBA


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# hill climbing
#
# One climb: draw both tables uniformly, then repeatedly sweep all
# single-entry mutations in a freshly shuffled order, applying every
# strictly improving one; stop when a full sweep applies none.  Draw
# order (fixed; both backends must match): 2**h values for k1, 2**h for
# k2, then one Fisher-Yates shuffle per sweep.
# ---------------------------------------------------------------------------


def _climb_np(bits: np.ndarray, h: int, seed: int):
    s = 1 << h
    nm1 = h - 1
    stream = SplitMix64(seed)
    k1 = np.array([1 + stream.below(h) for _ in range(s)], dtype=np.int64)
    k2 = np.array([1 + stream.below(h) for _ in range(s)], dtype=np.int64)
    d_a = bits[:, k1 - 1].copy()
    d_b = bits[:, k2 - 1].T.copy()
    count = int((d_a * d_b).sum())
    n_mut = 2 * s * nm1
    order = list(range(n_mut))
    evals = 0
    improved = True
    while improved and n_mut:
        improved = False
        stream.shuffle(order)
        for idx in order:
            which, rem = divmod(idx, s * nm1)
            pos, off = divmod(rem, nm1)
            if which == 0:
                cur = k1[pos]
                v = off + 1 if off + 1 < cur else off + 2
                delta = int(np.dot(bits[:, v - 1] - bits[:, cur - 1], d_b[:, pos]))
                evals += 1
                if delta > 0:
                    k1[pos] = v
                    d_a[:, pos] = bits[:, v - 1]
                    count += delta
                    improved = True
            else:
                cur = k2[pos]
                v = off + 1 if off + 1 < cur else off + 2
                delta = int(np.dot(d_a[pos, :], bits[:, v - 1] - bits[:, cur - 1]))
                evals += 1
                if delta > 0:
                    k2[pos] = v
                    d_b[pos, :] = bits[:, v - 1]
                    count += delta
                    improved = True
    return count, k1, k2, evals


# ---------------------------------------------------------------------------
# exhaustive search over first-player tables, each closed by the exact
# best response; scan order is lexicographic so ties keep the smallest
# table
# ---------------------------------------------------------------------------


def _best_response_np(bits: np.ndarray, k1: np.ndarray):
    """(count, k2) maximizing the joint win count against table k1."""
    d_a = bits[:, k1 - 1]
    scores = d_a @ bits                       # scores[i, l] over responses l+1
    k2 = np.argmax(scores, axis=1) + 1        # first max -> smallest index
    count = int(scores.max(axis=1).sum())
    return count, k2.astype(np.int64)


def _brute_force_np(bits: np.ndarray, h: int):
    s = 1 << h
    k1 = np.ones(s, dtype=np.int64)
    best = -1
    best_k1 = k1.copy()
    best_k2 = k1.copy()
    while True:
        count, k2 = _best_response_np(bits, k1)
        if count > best:
            best = count
            best_k1 = k1.copy()
            best_k2 = k2
        # lexicographic odometer, last position fastest
        pos = s - 1
        while pos >= 0 and k1[pos] == h:
            k1[pos] = 1
            pos -= 1
        if pos < 0:
            break
        k1[pos] += 1
    return best, best_k1, best_k2


# ---------------------------------------------------------------------------
# Monte Carlo win estimation for the continuous game
#
# Strategy encoding per player: kind 0 = first black hat (two-player),
# kind 1 = table constant on dyadic cells (two-player; covers both step
# strategies and lifted finite tables), kind 2 = m times the product of
# the other coordinates (any n).  Sample j, coordinate i reads element
# base + j*n + i of the counter stream, so shards merge exactly.
# ---------------------------------------------------------------------------


def _fbh_value_np(y: np.ndarray) -> np.ndarray:
    # 2**(-floor(log2 y)) via frexp, exact on dyadic inputs
    _, e = np.frexp(y)
    out = np.ldexp(1.0, 1 - e)
    out[y <= 0.0] = 0.0
    return out


def _mc_wins_np(kinds, scalars, tables, tlens, n, samples, seed, base):
    if samples == 0:
        return 0
    u = uniforms(seed, base, samples * n).reshape(samples, n)
    win = np.ones(samples, dtype=bool)
    for i in range(n):
        kind = kinds[i]
        if kind == 2:
            f = np.full(samples, scalars[i])
            for j in range(n):
                if j != i:
                    f = f * u[:, j]
        else:
            y = u[:, 1 - i]
            if kind == 0:
                f = _fbh_value_np(y)
            else:
                length = tlens[i]
                cell = np.minimum((y * length).astype(np.int64), length - 1)
                f = tables[i, cell]
        v = f * u[:, i]
        win &= ((np.floor(v).astype(np.int64) & 1) == 1)
    return int(win.sum())


# ---------------------------------------------------------------------------
# rendering: per-coordinate batch scan of a recursive strategy, joint
# grids from chosen indices, and biased bit decoding
# ---------------------------------------------------------------------------


def _scan_levels_np(res_log2, t, depth_cap, ktable, skip_mono):
    """Chosen hat index per coordinate cell, or -1 when the scan is not
    settled by the cell's known bits within depth_cap batches."""
    r = res_log2
    res = 1 << r
    full = (1 << t) - 1
    max_l = min(depth_cap, r // t)
    c = np.arange(res, dtype=np.int64)
    out = np.full(res, -1, dtype=np.int64)
    resolved = np.zeros(res, dtype=bool)
    for level in range(1, max_l + 1):
        batch = (c >> (r - level * t)) & full
        stop = batch != 0
        if skip_mono:
            stop &= batch != full
        newly = stop & ~resolved
        out[newly] = (level - 1) * t + ktable[batch[newly]]
        resolved |= stop
        if resolved.all():
            break
    return out


def _joint_grid_np(key1, key2, res_log2):
    """Grid g[cx, cy] in {0 white, 1 black, 2 gray} from per-axis indices.

    key1[cy] is the first player's chosen index given the second
    player's coordinate, key2[cx] the converse; a pixel is gray when
    either is unresolved (< 0).
    """
    r = res_log2
    res = 1 << r
    mid = 2 * np.arange(res, dtype=np.int64) + 1
    sh1 = np.maximum(r + 1 - key1, 0)
    sh2 = np.maximum(r + 1 - key2, 0)
    bit_a = (mid[:, None] >> sh1[None, :]) & 1     # [cx, cy]
    bit_b = (mid[:, None] >> sh2[None, :]) & 1     # [cy, cx]
    g = (bit_a * bit_b.T).astype(np.uint8)
    gray = (key2[:, None] < 0) | (key1[None, :] < 0)
    g[gray] = 2
    return g


def _biased_bits_np(res, p, nbits):
    """First nbits of each pixel midpoint under biased splitting.

    Splitting at 1-p instead of 1/2 makes cell widths carry the biased
    stack weights; at p = 1/2 this is the plain binary expansion.
    """
    u = (2.0 * np.arange(res) + 1.0) / (2.0 * res)
    q = 1.0 - p
    bits = np.empty((res, nbits), dtype=np.uint8)
    for b in range(nbits):
        black = u >= q
        bits[:, b] = black
        u = np.where(black, (u - q) / p, u / q)
    return bits


if USE_NUMBA:

    @njit(cache=True)
    def _mix64_nb(z):
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))

    @njit(cache=True)
    def _climb_nb(bits, h, seed):
        s = 1 << h
        nm1 = h - 1
        state = np.uint64(seed)
        gamma = np.uint64(GAMMA)
        hh = np.uint64(h)
        k1 = np.empty(s, dtype=np.int64)
        k2 = np.empty(s, dtype=np.int64)
        for j in range(s):
            state = state + gamma
            k1[j] = 1 + np.int64(_mix64_nb(state) % hh)
        for i in range(s):
            state = state + gamma
            k2[i] = 1 + np.int64(_mix64_nb(state) % hh)
        d_a = np.empty((s, s), dtype=np.int64)
        d_b = np.empty((s, s), dtype=np.int64)
        count = 0
        for i in range(s):
            for j in range(s):
                d_a[i, j] = bits[i, k1[j] - 1]
                d_b[i, j] = bits[j, k2[i] - 1]
                count += d_a[i, j] * d_b[i, j]
        n_mut = 2 * s * nm1
        order = np.arange(n_mut, dtype=np.int64)
        evals = 0
        improved = True
        while improved and n_mut > 0:
            improved = False
            for i in range(n_mut - 1, 0, -1):
                state = state + gamma
                j = np.int64(_mix64_nb(state) % np.uint64(i + 1))
                tmp = order[i]
                order[i] = order[j]
                order[j] = tmp
            for ti in range(n_mut):
                idx = order[ti]
                which = idx // (s * nm1)
                rem = idx % (s * nm1)
                pos = rem // nm1
                off = rem % nm1
                if which == 0:
                    cur = k1[pos]
                    v = off + 1 if off + 1 < cur else off + 2
                    delta = 0
                    for i in range(s):
                        delta += (bits[i, v - 1] - bits[i, cur - 1]) * d_b[i, pos]
                    evals += 1
                    if delta > 0:
                        k1[pos] = v
                        for i in range(s):
                            d_a[i, pos] = bits[i, v - 1]
                        count += delta
                        improved = True
                else:
                    cur = k2[pos]
                    v = off + 1 if off + 1 < cur else off + 2
                    delta = 0
                    for j in range(s):
                        delta += d_a[pos, j] * (bits[j, v - 1] - bits[j, cur - 1])
                    evals += 1
                    if delta > 0:
                        k2[pos] = v
                        for j in range(s):
                            d_b[pos, j] = bits[j, v - 1]
                        count += delta
                        improved = True
        return count, k1, k2, evals

    @njit(cache=True)
    def _brute_force_nb(bits, h):
        s = 1 << h
        k1 = np.ones(s, dtype=np.int64)
        k2 = np.empty(s, dtype=np.int64)
        best = -1
        best_k1 = np.ones(s, dtype=np.int64)
        best_k2 = np.ones(s, dtype=np.int64)
        sums = np.empty(h, dtype=np.int64)
        while True:
            count = 0
            for i in range(s):
                for l in range(h):
                    sums[l] = 0
                for j in range(s):
                    if bits[i, k1[j] - 1] == 1:
                        for l in range(h):
                            sums[l] += bits[j, l]
                best_l = 0
                for l in range(1, h):
                    if sums[l] > sums[best_l]:
                        best_l = l
                k2[i] = best_l + 1
                count += sums[best_l]
            if count > best:
                best = count
                best_k1[:] = k1
                best_k2[:] = k2
            pos = s - 1
            while pos >= 0 and k1[pos] == h:
                k1[pos] = 1
                pos -= 1
            if pos < 0:
                break
            k1[pos] += 1
        return best, best_k1, best_k2

    @njit(cache=True)
    def _uniform_at_nb(seed, index):
        z = np.uint64(seed) + np.uint64(index + 1) * np.uint64(GAMMA)
        return (_mix64_nb(z) >> np.uint64(11)) * 2.0**-53

    @njit(cache=True)
    def _mc_wins_nb(kinds, scalars, tables, tlens, n, samples, seed, base):
        wins = 0
        x = np.empty(n, dtype=np.float64)
        for smp in range(samples):
            for i in range(n):
                x[i] = _uniform_at_nb(seed, base + smp * n + i)
            ok = True
            for i in range(n):
                kind = kinds[i]
                if kind == 2:
                    f = scalars[i]
                    for j in range(n):
                        if j != i:
                            f = f * x[j]
                else:
                    y = x[1 - i]
                    if kind == 0:
                        if y <= 0.0:
                            f = 0.0
                        else:
                            _, e = math.frexp(y)
                            f = 2.0 ** (1 - e)
                    else:
                        length = tlens[i]
                        cell = int(y * length)
                        if cell >= length:
                            cell = length - 1
                        f = tables[i, cell]
                v = f * x[i]
                if (np.int64(np.floor(v)) & 1) != 1:
                    ok = False
                    break
            if ok:
                wins += 1
        return wins

    @njit(cache=True)
    def _scan_levels_nb(res_log2, t, depth_cap, ktable, skip_mono):
        r = res_log2
        res = 1 << r
        full = (1 << t) - 1
        max_l = min(depth_cap, r // t)
        out = np.full(res, -1, dtype=np.int64)
        for c in range(res):
            for level in range(1, max_l + 1):
                batch = (c >> (r - level * t)) & full
                if batch != 0 and not (skip_mono and batch == full):
                    out[c] = (level - 1) * t + ktable[batch]
                    break
        return out

    @njit(cache=True)
    def _joint_grid_nb(key1, key2, res_log2):
        r = res_log2
        res = 1 << r
        g = np.empty((res, res), dtype=np.uint8)
        for cx in range(res):
            kb = key2[cx]
            for cy in range(res):
                ka = key1[cy]
                if ka < 0 or kb < 0:
                    g[cx, cy] = 2
                else:
                    ba = ((2 * cx + 1) >> (r + 1 - ka)) & 1
                    bb = ((2 * cy + 1) >> (r + 1 - kb)) & 1
                    g[cx, cy] = ba * bb
        return g

    @njit(cache=True)
    def _biased_bits_nb(res, p, nbits):
        q = 1.0 - p
        bits = np.empty((res, nbits), dtype=np.uint8)
        for c in range(res):
            u = (2.0 * c + 1.0) / (2.0 * res)
            for b in range(nbits):
                if u >= q:
                    bits[c, b] = 1
                    u = (u - q) / p
                else:
                    bits[c, b] = 0
                    u = u / q
        return bits

    # seeds can exceed int64, so the jitted entry points take uint64
    def climb(bits, h, seed):
        return _climb_nb(bits, h, np.uint64(seed))

    def mc_wins(kinds, scalars, tables, tlens, n, samples, seed, base):
        return _mc_wins_nb(
            kinds, scalars, tables, tlens, n, samples, np.uint64(seed), base
        )

    brute_force = _brute_force_nb
    scan_levels = _scan_levels_nb
    joint_grid = _joint_grid_nb
    biased_bits = _biased_bits_nb
else:
    climb = _climb_np
    brute_force = _brute_force_np
    mc_wins = _mc_wins_np
    scan_levels = _scan_levels_np
    joint_grid = _joint_grid_np
    biased_bits = _biased_bits_np
