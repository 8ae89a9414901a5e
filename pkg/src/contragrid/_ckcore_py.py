"""Pure-Python (numpy) kernels for exhaustive two-coloring scans.

Fallback twin of the compiled module ``_ckcore``; both expose the same
functions with identical results.  A two-coloring of K_n is an edge mask:
bit e set means edge e has color 1, clear means color 2.  Edges are
numbered (0,1), (0,2), .., in lexicographic order.

Diameters use the sentinel value ``n`` for a disconnected color class
(real diameters never exceed n - 1).
"""

from __future__ import annotations

import numpy as np


def edge_list(n: int) -> list[tuple[int, int]]:
    return [(u, v) for u in range(n) for v in range(u + 1, n)]


def min_two_color_diameter(n: int, mask: int) -> int:
    """min over the two colors of the diameter of that color's graph."""
    if n == 1:
        return 0
    rows = [0] * n
    for e, (u, v) in enumerate(edge_list(n)):
        if (mask >> e) & 1:
            rows[u] |= 1 << v
            rows[v] |= 1 << u
    full = (1 << n) - 1
    crows = [rows[i] ^ (full ^ (1 << i)) for i in range(n)]

    def diam(adj: list[int]) -> int:
        worst = 0
        for s in range(n):
            reach = 1 << s
            k = 0
            while reach != full:
                nxt = reach
                m = reach
                while m:
                    v = (m & -m).bit_length() - 1
                    nxt |= adj[v]
                    m &= m - 1
                if nxt == reach:
                    return n
                reach = nxt
                k += 1
            worst = max(worst, k)
        return worst

    return min(diam(rows), diam(crows))


def scan_two_coloring_diameters(n: int, lo: int, hi: int):
    """Scan masks in [lo, hi); vectorized over the whole range.

    Returns (best, best_mask, counts): the largest per-coloring value,
    the smallest mask attaining it, and a histogram of values (length
    n + 1, sentinel bucket included).
    """
    masks = np.arange(lo, hi, dtype=np.int64)
    m = len(masks)
    counts = np.zeros(n + 1, dtype=np.int64)
    if m == 0:
        return -1, 0, counts
    if n == 1:
        counts[0] = m
        return 0, int(masks[0]), counts
    full = (1 << n) - 1
    rows = np.zeros((n, m), dtype=np.uint32)
    for e, (u, v) in enumerate(edge_list(n)):
        bit = ((masks >> e) & 1).astype(np.uint32)
        rows[u] |= bit << v
        rows[v] |= bit << u
    crows = np.empty_like(rows)
    for u in range(n):
        crows[u] = rows[u] ^ np.uint32(full ^ (1 << u))

    def diam_vec(adj: np.ndarray) -> np.ndarray:
        worst = np.zeros(m, dtype=np.uint8)
        for s in range(n):
            reach = np.full(m, 1 << s, dtype=np.uint32)
            ecc = np.zeros(m, dtype=np.uint8)
            for k in range(1, n):
                nbr = np.zeros(m, dtype=np.uint32)
                for v in range(n):
                    hasv = ((reach >> v) & 1).astype(bool)
                    nbr |= np.where(hasv, adj[v], 0)
                reach |= nbr
                newly = (reach == full) & (ecc == 0)
                ecc[newly] = k
            ecc[reach != full] = n
            np.maximum(worst, ecc, out=worst)
        return worst

    vals = np.minimum(diam_vec(rows), diam_vec(crows))
    counts += np.bincount(vals, minlength=n + 1).astype(np.int64)
    best = int(vals.max())
    best_mask = int(masks[int(np.argmax(vals == best))])
    return best, best_mask, counts
