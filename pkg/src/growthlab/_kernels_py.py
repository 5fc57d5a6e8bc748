"""Pure-Python / numpy fallback for the hot kernels.

Mirrors growthlab._kernels (the Cython extension) function for function.
Integer-driven kernels (exclusion races, Hammersley pulls, LIS) reproduce the
compiled results bit for bit because both backends run the identical
splitmix64 pipeline; weight-valued kernels agree to ~1 ulp (numpy's
vectorized log need not bit-match libm). Throughput, not semantics, is the
difference; the benchmark in benchmarks/bench_kernels.py compares the two.
"""

from __future__ import annotations

import math
from bisect import bisect_left

import numpy as np

IS_COMPILED = False

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_SALT = 0xC2B2AE3D27D4EB4F
_INV32 = 2.0**-32
_INV53 = 2.0**-53


def _mix(x: int) -> int:
    x &= _MASK
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    x = (x ^ (x >> 27)) * 0x94D049BB133111EB & _MASK
    return x ^ (x >> 31)


def _draw(key: int, ctr: int) -> int:
    return _mix(key + (ctr + 1) * _GOLDEN)


# ---------------------------------------------------------------------------
# corner growth scan


def corner_value(key: int, law: int, param: float, rows: int, cols: int) -> float:
    """Last-passage value at (rows, cols) for counter-generated weights.

    Wavefront evaluation, O(cols) memory. law: 0 exponential(param),
    1 geometric(param).
    """
    g = np.zeros(cols + 1)
    jj = np.arange(1, cols + 1, dtype=np.uint64) * np.uint64(_SALT)
    log1mq = math.log1p(-param) if law == 1 else 0.0
    for k in range(1, rows + 1):
        # same per-site hash as randkit.site_weight: mix(mix(key+i*G)+j*S)
        ik = _mix(key + k * _GOLDEN)
        h = _mix_arr(np.uint64(ik) + jj)
        u = ((h >> np.uint64(11)).astype(np.float64) + 0.5) * _INV53
        if law == 0:
            y = -np.log(u) / param
        else:
            y = np.maximum(np.ceil(np.log(u) / log1mq), 1.0)
        # row scan g[l] = max(g[l], g[l-1]) + y[l] has an in-row dependency;
        # do it with a left-to-right python pass only when short, else the
        # numpy cummax trick below (exact same values, no reassociation).
        _row_update(g, y)
    return float(g[cols])


def _row_update(g: np.ndarray, y: np.ndarray) -> None:
    # G(k,l) = max(G(k,l-1), G(k-1,l)) + y_l. Sequential in l; numpy cannot
    # express the scan directly, so chunk through python. Correctness over
    # speed here; the compiled backend owns the fast path.
    acc = 0.0
    gv = g
    for l in range(1, len(g)):
        left = acc
        up = gv[l]
        acc = (left if left > up else up) + y[l - 1]
        gv[l] = acc


def _mix_arr(x: np.ndarray) -> np.ndarray:
    x = x.copy()
    x ^= x >> np.uint64(30)
    x *= np.uint64(0xBF58476D1CE4E5B9)
    x ^= x >> np.uint64(27)
    x *= np.uint64(0x94D049BB133111EB)
    x ^= x >> np.uint64(31)
    return x


# ---------------------------------------------------------------------------
# exclusion-type height dynamics (columns 0 and m-1 frozen)


def exclusion_attempts(eta, heights, K: int, p01: float, n_attempts: int,
                       key: int, ctr: int):
    """Run n_attempts of the uniform-column race; mutates eta/heights.

    Returns (ctr, lo, hi): advanced counter and the extreme columns at which
    a jump executed (lo > hi means none).
    """
    m = len(eta)
    n_active = m - 2
    lo, hi = m, -1
    # batch the raw draws; state updates stay sequential
    chunk = 1 << 14
    done = 0
    while done < n_attempts:
        take = min(chunk, n_attempts - done)
        hs = _draw_arr(key, ctr, take)
        ctr += take
        done += take
        for h in hs:
            h = int(h)
            col = 1 + (((h >> 32) * n_active) >> 32)
            down = ((h & 0xFFFFFFFF) + 0.5) * _INV32 < p01
            if down:
                if eta[col] >= 1 and eta[col + 1] <= K - 1:
                    eta[col] -= 1
                    eta[col + 1] += 1
                    heights[col] -= 1
                    if col < lo:
                        lo = col
                    if col > hi:
                        hi = col
            else:
                if eta[col] <= K - 1 and eta[col + 1] >= 1:
                    eta[col] += 1
                    eta[col + 1] -= 1
                    heights[col] += 1
                    if col < lo:
                        lo = col
                    if col > hi:
                        hi = col
    return ctr, lo, hi


def _draw_arr(key: int, ctr: int, n: int) -> np.ndarray:
    cc = np.arange(ctr + 1, ctr + n + 1, dtype=np.uint64)
    return _mix_arr(np.uint64(key) + cc * np.uint64(_GOLDEN))


def exclusion_run_log(eta, heights, K: int, p01: float, key: int, ctr: int,
                      times, out_t, out_col, out_down):
    """Attempt race with an executed-event log; attempt times supplied.

    Returns (n_exec, ctr)."""
    m = len(eta)
    n_active = m - 2
    n_exec = 0
    hs = _draw_arr(key, ctr, len(times))
    ctr += len(times)
    for a in range(len(times)):
        h = int(hs[a])
        col = 1 + (((h >> 32) * n_active) >> 32)
        down = ((h & 0xFFFFFFFF) + 0.5) * _INV32 < p01
        if down:
            ok = eta[col] >= 1 and eta[col + 1] <= K - 1
        else:
            ok = eta[col] <= K - 1 and eta[col + 1] >= 1
        if ok:
            d = -1 if down else 1
            eta[col] += d
            eta[col + 1] -= d
            heights[col] += d
            out_t[n_exec] = times[a]
            out_col[n_exec] = col
            out_down[n_exec] = 1 if down else 0
            n_exec += 1
    return n_exec, ctr


def exclusion_apply_attempts(eta, heights, K: int, cols, downs) -> int:
    """Apply a given attempt sequence (shared-clock couplings). Returns the
    number executed."""
    n_exec = 0
    for a in range(len(cols)):
        col = int(cols[a])
        if downs[a]:
            if eta[col] >= 1 and eta[col + 1] <= K - 1:
                eta[col] -= 1
                eta[col + 1] += 1
                heights[col] -= 1
                n_exec += 1
        else:
            if eta[col] <= K - 1 and eta[col + 1] >= 1:
                eta[col] += 1
                eta[col + 1] -= 1
                heights[col] += 1
                n_exec += 1
    return n_exec


def coupled_attempts(eta, zeta, p01: float, n_attempts: int, key: int,
                     ctr: int, q: int):
    """Second-class coupling: run both K=1 configurations under shared draws.

    eta/zeta differ at exactly one site q (zeta has the particle). Returns
    (ctr, q, q_lo, q_hi, ok); ok=0 flags a broken discrepancy invariant.
    """
    m = len(eta)
    n_active = m - 2
    q_lo = q_hi = q
    ok = 1
    chunk = 1 << 14
    done = 0
    while done < n_attempts:
        take = min(chunk, n_attempts - done)
        hs = _draw_arr(key, ctr, take)
        ctr += take
        done += take
        for h in hs:
            h = int(h)
            col = 1 + (((h >> 32) * n_active) >> 32)
            down = ((h & 0xFFFFFFFF) + 0.5) * _INV32 < p01
            if down:
                if eta[col] == 1 and eta[col + 1] == 0:
                    eta[col] = 0
                    eta[col + 1] = 1
                if zeta[col] == 1 and zeta[col + 1] == 0:
                    zeta[col] = 0
                    zeta[col + 1] = 1
            else:
                if eta[col] == 0 and eta[col + 1] == 1:
                    eta[col] = 1
                    eta[col + 1] = 0
                if zeta[col] == 0 and zeta[col + 1] == 1:
                    zeta[col] = 1
                    zeta[col + 1] = 0
            if col == q or col + 1 == q:
                if zeta[col] != eta[col]:
                    q = col
                elif zeta[col + 1] != eta[col + 1]:
                    q = col + 1
                else:
                    ok = 0
                if q < q_lo:
                    q_lo = q
                if q > q_hi:
                    q_hi = q
    return ctr, q, q_lo, q_hi, ok


def ring_attempts(eta, K: int, n_attempts: int, key: int, ctr: int):
    """Totally asymmetric K-exclusion on a ring; returns (ctr, accepted)."""
    L = len(eta)
    accepted = 0
    chunk = 1 << 14
    done = 0
    while done < n_attempts:
        take = min(chunk, n_attempts - done)
        hs = _draw_arr(key, ctr, take)
        ctr += take
        done += take
        for h in hs:
            h = int(h)
            i = ((h >> 32) * L) >> 32
            j = i + 1 if i + 1 < L else 0
            if eta[i] >= 1 and eta[j] <= K - 1:
                eta[i] -= 1
                eta[j] += 1
                accepted += 1
    return ctr, accepted


# ---------------------------------------------------------------------------
# Hammersley graphical construction and LIS


def hammersley_pulls(positions, xs, out_idx) -> int:
    """Each x pulls the leftmost particle strictly right of it to x.

    positions: sorted float64 array, mutated in place. out_idx[k] records the
    moved particle's array index, -1 for a right-boundary miss. Returns the
    number of boundary misses."""
    n = len(positions)
    misses = 0
    for k in range(len(xs)):
        x = xs[k]
        idx = int(np.searchsorted(positions, x, side="right"))
        if idx >= n:
            out_idx[k] = -1
            misses += 1
        else:
            positions[idx] = x
            out_idx[k] = idx
    return misses


def lis_strict(ts) -> int:
    """Length of the longest strictly increasing subsequence.

    Input must already be ordered by the other coordinate (x ascending, ties
    broken by t descending so no tie can chain)."""
    tails: list[float] = []
    for t in ts:
        pos = bisect_left(tails, t)
        if pos == len(tails):
            tails.append(t)
        else:
            tails[pos] = t
    return len(tails)


def lis_tail_hits(key: int, ctr: int, width: float, height: float,
                  thresh: int, reps: int, lower: int):
    """Streaming Monte Carlo for LIS tail events over a width x height box.

    Points are generated in x order (gaps Exp(height), t uniform), so the
    patience pass needs no sort. Counts replicates with L >= thresh
    (lower=0) or L <= thresh (lower=1). Returns (hits, ctr).
    """
    hits = 0
    for _ in range(reps):
        tails: list[float] = []
        x = 0.0
        while True:
            h1 = _draw(key, ctr)
            ctr += 1
            u1 = ((h1 >> 11) + 0.5) * _INV53
            x += -math.log(u1) / height
            if x > width:
                break
            h2 = _draw(key, ctr)
            ctr += 1
            t = height * ((h2 >> 11) + 0.5) * _INV53
            pos = bisect_left(tails, t)
            if pos == len(tails):
                tails.append(t)
            else:
                tails[pos] = t
        L = len(tails)
        if (L <= thresh) if lower else (L >= thresh):
            hits += 1
    return hits, ctr
