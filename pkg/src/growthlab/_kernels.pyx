# Compiled hot kernels. Semantics are pinned by growthlab._kernels_py; keep
# the two in lockstep (identical splitmix64 pipeline, identical update rules).

from libc.math cimport ceil, log, log1p
from libc.stdint cimport int8_t, int32_t, int64_t, uint32_t, uint64_t

import numpy as np

IS_COMPILED = True

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15UL
cdef uint64_t SALT = 0xC2B2AE3D27D4EB4FUL
cdef double INV32 = 1.0 / 4294967296.0
cdef double INV53 = 1.0 / 9007199254740992.0


cdef inline uint64_t _mix(uint64_t x) nogil:
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9UL
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBUL
    return x ^ (x >> 31)


cdef inline uint64_t _draw(uint64_t key, uint64_t ctr) nogil:
    return _mix(key + (ctr + 1) * GOLDEN)


cdef inline double _unit(uint64_t h) nogil:
    return (<double>(h >> 11) + 0.5) * INV53


# ---------------------------------------------------------------------------
# corner growth scan

def corner_value(key, int law, double param, int rows, int cols):
    cdef uint64_t k64 = <uint64_t>(<object>key & 0xFFFFFFFFFFFFFFFF)
    cdef double[::1] g = np.zeros(cols + 1)
    cdef int k, l
    cdef uint64_t ik, h
    cdef double u, y, left, up, acc
    cdef double log1mq = log1p(-param) if law == 1 else 0.0
    with nogil:
        for k in range(1, rows + 1):
            ik = _mix(k64 + (<uint64_t>k) * GOLDEN)
            acc = 0.0
            for l in range(1, cols + 1):
                h = _mix(ik + (<uint64_t>l) * SALT)
                u = _unit(h)
                if law == 0:
                    y = -log(u) / param
                else:
                    y = ceil(log(u) / log1mq)
                    if y < 1.0:
                        y = 1.0
                left = acc
                up = g[l]
                acc = (left if left > up else up) + y
                g[l] = acc
    return float(g[cols])


# ---------------------------------------------------------------------------
# exclusion-type height dynamics

def exclusion_attempts(int8_t[::1] eta, int64_t[::1] heights, int K,
                       double p01, n_attempts, key, ctr):
    cdef uint64_t k64 = <uint64_t>(<object>key & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t c = <uint64_t>(<object>ctr & 0xFFFFFFFFFFFFFFFF)
    cdef int64_t n_att = <int64_t>n_attempts
    cdef int64_t m = eta.shape[0]
    cdef uint64_t n_active = <uint64_t>(m - 2)
    cdef int64_t lo = m, hi = -1
    cdef int64_t a, col
    cdef uint64_t h
    cdef int kk = K
    with nogil:
        for a in range(n_att):
            h = _draw(k64, c)
            c += 1
            col = 1 + <int64_t>(((h >> 32) * n_active) >> 32)
            if (<double>(h & 0xFFFFFFFFUL) + 0.5) * INV32 < p01:
                if eta[col] >= 1 and eta[col + 1] <= kk - 1:
                    eta[col] -= 1
                    eta[col + 1] += 1
                    heights[col] -= 1
                    if col < lo:
                        lo = col
                    if col > hi:
                        hi = col
            else:
                if eta[col] <= kk - 1 and eta[col + 1] >= 1:
                    eta[col] += 1
                    eta[col + 1] -= 1
                    heights[col] += 1
                    if col < lo:
                        lo = col
                    if col > hi:
                        hi = col
    return int(c), int(lo), int(hi)


def exclusion_run_log(int8_t[::1] eta, int64_t[::1] heights, int K,
                      double p01, key, ctr, double[::1] times,
                      double[::1] out_t, int32_t[::1] out_col,
                      int8_t[::1] out_down):
    cdef uint64_t k64 = <uint64_t>(<object>key & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t c = <uint64_t>(<object>ctr & 0xFFFFFFFFFFFFFFFF)
    cdef int64_t m = eta.shape[0]
    cdef uint64_t n_active = <uint64_t>(m - 2)
    cdef int64_t n_exec = 0
    cdef int64_t a, col
    cdef uint64_t h
    cdef bint down, ok
    cdef int kk = K
    with nogil:
        for a in range(times.shape[0]):
            h = _draw(k64, c)
            c += 1
            col = 1 + <int64_t>(((h >> 32) * n_active) >> 32)
            down = (<double>(h & 0xFFFFFFFFUL) + 0.5) * INV32 < p01
            if down:
                ok = eta[col] >= 1 and eta[col + 1] <= kk - 1
            else:
                ok = eta[col] <= kk - 1 and eta[col + 1] >= 1
            if ok:
                if down:
                    eta[col] -= 1
                    eta[col + 1] += 1
                    heights[col] -= 1
                else:
                    eta[col] += 1
                    eta[col + 1] -= 1
                    heights[col] += 1
                out_t[n_exec] = times[a]
                out_col[n_exec] = <int32_t>col
                out_down[n_exec] = 1 if down else 0
                n_exec += 1
    return int(n_exec), int(c)


def exclusion_apply_attempts(int8_t[::1] eta, int64_t[::1] heights, int K,
                             int32_t[::1] cols, int8_t[::1] downs):
    cdef int64_t n_exec = 0
    cdef int64_t a, col
    cdef int kk = K
    with nogil:
        for a in range(cols.shape[0]):
            col = cols[a]
            if downs[a]:
                if eta[col] >= 1 and eta[col + 1] <= kk - 1:
                    eta[col] -= 1
                    eta[col + 1] += 1
                    heights[col] -= 1
                    n_exec += 1
            else:
                if eta[col] <= kk - 1 and eta[col + 1] >= 1:
                    eta[col] += 1
                    eta[col + 1] -= 1
                    heights[col] += 1
                    n_exec += 1
    return int(n_exec)


def coupled_attempts(int8_t[::1] eta, int8_t[::1] zeta, double p01,
                     n_attempts, key, ctr, q):
    cdef uint64_t k64 = <uint64_t>(<object>key & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t c = <uint64_t>(<object>ctr & 0xFFFFFFFFFFFFFFFF)
    cdef int64_t n_att = <int64_t>n_attempts
    cdef int64_t m = eta.shape[0]
    cdef uint64_t n_active = <uint64_t>(m - 2)
    cdef int64_t qq = <int64_t>q
    cdef int64_t q_lo = qq, q_hi = qq
    cdef int ok = 1
    cdef int64_t a, col
    cdef uint64_t h
    with nogil:
        for a in range(n_att):
            h = _draw(k64, c)
            c += 1
            col = 1 + <int64_t>(((h >> 32) * n_active) >> 32)
            if (<double>(h & 0xFFFFFFFFUL) + 0.5) * INV32 < p01:
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
            if col == qq or col + 1 == qq:
                if zeta[col] != eta[col]:
                    qq = col
                elif zeta[col + 1] != eta[col + 1]:
                    qq = col + 1
                else:
                    ok = 0
                if qq < q_lo:
                    q_lo = qq
                if qq > q_hi:
                    q_hi = qq
    return int(c), int(qq), int(q_lo), int(q_hi), int(ok)


def ring_attempts(int8_t[::1] eta, int K, n_attempts, key, ctr):
    cdef uint64_t k64 = <uint64_t>(<object>key & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t c = <uint64_t>(<object>ctr & 0xFFFFFFFFFFFFFFFF)
    cdef int64_t n_att = <int64_t>n_attempts
    cdef int64_t L = eta.shape[0]
    cdef int64_t accepted = 0
    cdef int64_t a, i, j
    cdef uint64_t h
    cdef int kk = K
    with nogil:
        for a in range(n_att):
            h = _draw(k64, c)
            c += 1
            i = <int64_t>(((h >> 32) * <uint64_t>L) >> 32)
            j = i + 1 if i + 1 < L else 0
            if eta[i] >= 1 and eta[j] <= kk - 1:
                eta[i] -= 1
                eta[j] += 1
                accepted += 1
    return int(c), int(accepted)


# ---------------------------------------------------------------------------
# Hammersley graphical construction and LIS

def hammersley_pulls(double[::1] positions, double[::1] xs,
                     int64_t[::1] out_idx):
    cdef int64_t n = positions.shape[0]
    cdef int64_t misses = 0
    cdef int64_t k, idx, a, b, mid
    cdef double x
    with nogil:
        for k in range(xs.shape[0]):
            x = xs[k]
            # first index with positions[idx] > x  (bisect_right)
            a = 0
            b = n
            while a < b:
                mid = (a + b) >> 1
                if positions[mid] <= x:
                    a = mid + 1
                else:
                    b = mid
            idx = a
            if idx >= n:
                out_idx[k] = -1
                misses += 1
            else:
                positions[idx] = x
                out_idx[k] = idx
    return int(misses)


def lis_strict(double[::1] ts):
    cdef int64_t n = ts.shape[0]
    cdef double[::1] tails = np.empty(n if n > 0 else 1)
    cdef int64_t L = 0
    cdef int64_t k, a, b, mid
    cdef double t
    with nogil:
        for k in range(n):
            t = ts[k]
            a = 0
            b = L
            while a < b:  # bisect_left
                mid = (a + b) >> 1
                if tails[mid] < t:
                    a = mid + 1
                else:
                    b = mid
            tails[a] = t
            if a == L:
                L += 1
    return int(L)


def lis_tail_hits(key, ctr, double width, double height, int64_t thresh,
                  int64_t reps, int lower):
    cdef uint64_t k64 = <uint64_t>(<object>key & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t c = <uint64_t>(<object>ctr & 0xFFFFFFFFFFFFFFFF)
    cdef double area = width * height
    cdef int64_t cap = <int64_t>(area + 20.0 * (area ** 0.5) + 128.0)
    cdef double[::1] tails = np.empty(cap)
    cdef int64_t hits = 0
    cdef int64_t r, L, a, b, mid
    cdef double x, t
    cdef uint64_t h
    cdef int overflow = 0
    with nogil:
        for r in range(reps):
            L = 0
            x = 0.0
            while True:
                h = _draw(k64, c)
                c += 1
                x += -log(_unit(h)) / height
                if x > width:
                    break
                h = _draw(k64, c)
                c += 1
                t = height * _unit(h)
                a = 0
                b = L
                while a < b:
                    mid = (a + b) >> 1
                    if tails[mid] < t:
                        a = mid + 1
                    else:
                        b = mid
                tails[a] = t
                if a == L:
                    L += 1
                    if L >= cap:
                        overflow = 1
                        break
            if overflow:
                break
            if (L <= thresh) if lower else (L >= thresh):
                hits += 1
    if overflow:
        raise RuntimeError("patience pile buffer overflow (area estimate off)")
    return int(hits), int(c)
