"""Numba kernels for the matching engine.

All graph state is passed as flat arrays (CSR adjacency) so the kernels stay
cache-friendly and compile once per dtype signature.
"""

from __future__ import annotations

import numpy as np
from numba import njit

INF = np.inf


@njit(cache=True)
def dijkstra_csr(indptr, indices, hweight, heid, src, num_real):
    """Single-source shortest paths with a manual binary heap.

    Node ``num_real`` is the virtual boundary: its distance is recorded but
    it is never expanded, so path costs through the boundary are excluded.
    Returns (dist, pred_halfedge) where pred_halfedge[v] indexes into the
    half-edge arrays (-1 if unreached).
    """
    n = num_real + 1
    dist = np.full(n, INF)
    pred = np.full(n, -1, dtype=np.int64)
    done = np.zeros(n, dtype=np.uint8)

    cap = 4 * (indptr.shape[0] + 16)
    heap_d = np.empty(cap, dtype=np.float64)
    heap_v = np.empty(cap, dtype=np.int64)
    hs = 0

    dist[src] = 0.0
    heap_d[0] = 0.0
    heap_v[0] = src
    hs = 1
    while hs > 0:
        # pop min
        d0 = heap_d[0]
        v0 = heap_v[0]
        hs -= 1
        heap_d[0] = heap_d[hs]
        heap_v[0] = heap_v[hs]
        i = 0
        while True:
            l = 2 * i + 1
            r = l + 1
            m = i
            if l < hs and heap_d[l] < heap_d[m]:
                m = l
            if r < hs and heap_d[r] < heap_d[m]:
                m = r
            if m == i:
                break
            heap_d[i], heap_d[m] = heap_d[m], heap_d[i]
            heap_v[i], heap_v[m] = heap_v[m], heap_v[i]
            i = m
        if done[v0] or d0 > dist[v0]:
            continue
        done[v0] = 1
        if v0 == num_real:
            continue
        for k in range(indptr[v0], indptr[v0 + 1]):
            w = indices[k]
            nd = d0 + hweight[k]
            if nd < dist[w]:
                dist[w] = nd
                pred[w] = k
                # push
                if hs >= cap:
                    # heap full; should not happen with the sized buffer
                    break
                j = hs
                heap_d[j] = nd
                heap_v[j] = w
                hs += 1
                while j > 0:
                    par = (j - 1) // 2
                    if heap_d[par] <= heap_d[j]:
                        break
                    heap_d[par], heap_d[j] = heap_d[j], heap_d[par]
                    heap_v[par], heap_v[j] = heap_v[j], heap_v[par]
                    j = par
    return dist, pred


@njit(cache=True)
def pairing_dp(cost, bcost):
    """Exact minimum-cost pairing of k defects with a per-defect boundary
    option, by DP over subsets.  cost[i, j] = inf forbids the pair.

    Returns (total cost, match) with match[i] = j or -1 for boundary.
    """
    k = cost.shape[0]
    size = 1 << k
    dp = np.full(size, INF)
    sel = np.full(size, -2, dtype=np.int64)
    dp[0] = 0.0
    for mask in range(1, size):
        i = 0
        while not (mask >> i) & 1:
            i += 1
        rest = mask & ~(1 << i)
        best = bcost[i] + dp[rest]
        bj = -1
        for j in range(i + 1, k):
            if (rest >> j) & 1:
                c = cost[i, j] + dp[rest & ~(1 << j)]
                if c < best:
                    best = c
                    bj = j
        dp[mask] = best
        sel[mask] = bj
    match = np.full(k, -1, dtype=np.int64)
    mask = size - 1
    while mask:
        i = 0
        while not (mask >> i) & 1:
            i += 1
        j = sel[mask]
        mask &= ~(1 << i)
        if j >= 0:
            match[i] = j
            match[j] = i
            mask &= ~(1 << j)
    return dp[size - 1], match
