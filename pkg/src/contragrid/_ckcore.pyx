# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for exhaustive two-coloring scans.

Mask conventions and return values match contragrid._ckcore_py exactly;
see that module for documentation.
"""

import numpy as np

cdef extern from *:
    int __builtin_ctz(unsigned int) nogil


cdef inline int _diam(unsigned int* rows, int n, unsigned int full) nogil:
    cdef int s, k, v, worst = 0
    cdef unsigned int reach, nxt, m
    for s in range(n):
        reach = (<unsigned int> 1) << s
        k = 0
        while reach != full:
            nxt = reach
            m = reach
            while m:
                v = __builtin_ctz(m)
                nxt |= rows[v]
                m &= m - 1
            if nxt == reach:
                return n
            reach = nxt
            k += 1
        if k > worst:
            worst = k
    return worst


def min_two_color_diameter(int n, unsigned long long mask):
    cdef unsigned int rows[32]
    cdef unsigned int crows[32]
    cdef int eu[496]
    cdef int ev[496]
    cdef int e = 0, u, v, i, d1, d2
    cdef unsigned int full
    if n == 1:
        return 0
    for u in range(n):
        for v in range(u + 1, n):
            eu[e] = u
            ev[e] = v
            e += 1
    full = ((<unsigned int> 1) << n) - 1
    for i in range(n):
        rows[i] = 0
    for i in range(e):
        if (mask >> i) & 1:
            rows[eu[i]] |= (<unsigned int> 1) << ev[i]
            rows[ev[i]] |= (<unsigned int> 1) << eu[i]
    for i in range(n):
        crows[i] = rows[i] ^ (full ^ ((<unsigned int> 1) << i))
    d1 = _diam(rows, n, full)
    d2 = _diam(crows, n, full)
    return d1 if d1 < d2 else d2


def scan_two_coloring_diameters(int n, unsigned long long lo, unsigned long long hi):
    cdef int E = n * (n - 1) // 2
    cdef int eu[32]
    cdef int ev[32]
    cdef int e = 0, u, v, i, d1, d2, val
    cdef unsigned int rows[32]
    cdef unsigned int crows[32]
    cdef unsigned int full
    cdef unsigned long long mask
    cdef int best = -1
    cdef unsigned long long best_mask = 0
    counts_arr = np.zeros(n + 1, dtype=np.int64)
    cdef long long[::1] counts = counts_arr
    if hi <= lo:
        return -1, 0, counts_arr
    if n == 1:
        counts_arr[0] = hi - lo
        return 0, int(lo), counts_arr
    for u in range(n):
        for v in range(u + 1, n):
            eu[e] = u
            ev[e] = v
            e += 1
    full = ((<unsigned int> 1) << n) - 1
    for mask in range(lo, hi):
        for i in range(n):
            rows[i] = 0
        for i in range(E):
            if (mask >> i) & 1:
                rows[eu[i]] |= (<unsigned int> 1) << ev[i]
                rows[ev[i]] |= (<unsigned int> 1) << eu[i]
        for i in range(n):
            crows[i] = rows[i] ^ (full ^ ((<unsigned int> 1) << i))
        d1 = _diam(rows, n, full)
        d2 = _diam(crows, n, full)
        val = d1 if d1 < d2 else d2
        counts[val] += 1
        if val > best:
            best = val
            best_mask = mask
    return best, int(best_mask), counts_arr
