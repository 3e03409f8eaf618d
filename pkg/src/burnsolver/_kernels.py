"""Compiled inner loops. All kernels release the GIL and write disjoint output."""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def bfs_into(indptr, indices, source, dist, order, parent):
    """BFS from ``source``; fills ``dist`` (-1 = unseen), ``order``, ``parent``.

    Returns the number of reached vertices.
    """
    dist[:] = -1
    dist[source] = 0
    parent[source] = source
    order[0] = source
    head = 0
    tail = 1
    while head < tail:
        u = order[head]
        head += 1
        du = dist[u] + 1
        for k in range(indptr[u], indptr[u + 1]):
            w = indices[k]
            if dist[w] < 0:
                dist[w] = du
                parent[w] = u
                order[tail] = w
                tail += 1
    return tail


@njit(cache=True, nogil=True)
def apsp_rows(indptr, indices, sources, out, unreachable):
    n = indptr.shape[0] - 1
    dist = np.empty(n, np.int64)
    order = np.empty(n, np.int64)
    parent = np.empty(n, np.int64)
    for s in sources:
        bfs_into(indptr, indices, s, dist, order, parent)
        for u in range(n):
            out[s, u] = dist[u] if dist[u] >= 0 else unreachable


@njit(cache=True, nogil=True)
def middle_rows(indptr, indices, sources, dmat, out, unreachable):
    """Two-pointer scan over the BFS order of each source."""
    n = indptr.shape[0] - 1
    dist = np.empty(n, np.int64)
    order = np.empty(n, np.int64)
    parent = np.empty(n, np.int64)
    for v in sources:
        reached = bfs_into(indptr, indices, v, dist, order, parent)
        for u in range(n):
            out[v, u] = unreachable
        i = 0
        j = 0
        while i < reached:
            u = order[i]
            mid = order[j]
            dvu = np.int64(dmat[v, u])
            dvm = np.int64(dmat[v, mid])
            dmu = np.int64(dmat[mid, u])
            if dvu % 2 == 1:
                out[v, u] = out[v, parent[u]]
                i += 1
            elif dvm == dmu and dvm + dmu == dvu:
                out[v, u] = mid
                i += 1
            else:
                j += 1
                if j > i:
                    raise AssertionError("middle pointer overran the scan pointer")


@njit(cache=True, nogil=True)
def brandes_partial(indptr, indices, sources):
    """Sum of single-source dependencies over ``sources`` (ordered pairs)."""
    n = indptr.shape[0] - 1
    bc = np.zeros(n, np.float64)
    dist = np.empty(n, np.int64)
    order = np.empty(n, np.int64)
    parent = np.empty(n, np.int64)
    sigma = np.empty(n, np.float64)
    delta = np.empty(n, np.float64)
    for s in sources:
        reached = bfs_into(indptr, indices, s, dist, order, parent)
        for k in range(reached):
            sigma[order[k]] = 0.0
            delta[order[k]] = 0.0
        sigma[s] = 1.0
        for k in range(reached):
            u = order[k]
            for e in range(indptr[u], indptr[u + 1]):
                w = indices[e]
                if dist[w] == dist[u] + 1:
                    sigma[w] += sigma[u]
        for k in range(reached - 1, 0, -1):
            w = order[k]
            coeff = (1.0 + delta[w]) / sigma[w]
            for e in range(indptr[w], indptr[w + 1]):
                u = indices[e]
                if dist[u] == dist[w] - 1:
                    delta[u] += sigma[u] * coeff
            bc[w] += delta[w]
    return bc


@njit(cache=True, nogil=True)
def prefix_residual(dist, prefix, b, unreachable, inf_d):
    """Per-vertex ``min_j dist(i, v_j) - (b - j)`` over the prefix (1-based j)."""
    n = dist.shape[0]
    r = np.full(n, inf_d, np.int64)
    for j in range(prefix.shape[0]):
        row = dist[prefix[j]]
        off = b - 1 - j
        for i in range(n):
            d = np.int64(row[i])
            if d != unreachable:
                val = d - off
                if val < r[i]:
                    r[i] = val
    return r


@njit(cache=True, nogil=True)
def complete_prefix(dist, prefix, b, skip, unreachable, inf_d):
    """Best suffix for a chromosome prefix.

    Returns ``(cost, suffix, unburned_count)``. ``cost`` is -1 when the
    prefix leaves more than ``skip`` vertices unburned and -2 when every
    completion leaves some vertex with no reachable fire source.
    """
    n = dist.shape[0]
    chr_size = prefix.shape[0]
    r = prefix_residual(dist, prefix, b, unreachable, inf_d)
    count = 0
    for i in range(n):
        if r[i] > 0:
            count += 1
    empty = np.empty(0, np.int64)
    if count > skip:
        return np.int64(-1), empty, count
    if count == 0:
        return np.int64(0), empty, 0

    cand = np.empty(count, np.int64)
    k = 0
    for i in range(n):
        if r[i] > 0:
            cand[k] = i
            k += 1
    # Stable ascending order by prefix residual, ties by vertex id.
    cand = cand[np.argsort(r[cand], kind="mergesort")]
    base = r[cand]
    sub = np.empty((count, count), np.int64)
    for a in range(count):
        for c in range(count):
            d = np.int64(dist[cand[a], cand[c]])
            sub[a, c] = d if d != unreachable else inf_d

    length = min(b - chr_size, count)
    if length == 0:
        return _score(base, n), empty, count

    cur = np.empty((length + 1, count), np.int64)
    cur[0, :] = base
    pick = np.zeros(length, np.int64)
    used = np.zeros(count, np.bool_)
    best = np.int64(-3)
    best_pick = np.zeros(length, np.int64)

    depth = 0
    pick[0] = -1
    while depth >= 0:
        # Advance the candidate at this depth.
        if pick[depth] >= 0:
            used[pick[depth]] = False
        c = pick[depth] + 1
        while c < count:
            if not used[c]:
                ok = True
                for a in range(depth):
                    if sub[pick[a], c] < depth - a:
                        ok = False
                        break
                if ok:
                    break
            c += 1
        if c >= count:
            pick[depth] = -1
            depth -= 1
            continue
        pick[depth] = c
        used[c] = True
        off = b - 1 - (chr_size + depth)
        for u in range(count):
            val = sub[c, u] - off
            prev = cur[depth, u]
            cur[depth + 1, u] = val if val < prev else prev
        if depth + 1 == length:
            cost = _score(cur[length], n)
            if cost >= 0 and (best < 0 or cost < best):
                best = cost
                best_pick[:] = pick
                if cost == 0:
                    break
        else:
            depth += 1
            pick[depth] = -1
    if best < 0:
        return np.int64(-2), empty, count
    return best, cand[best_pick], count


@njit(cache=True, nogil=True)
def _score(resid, n):
    total = np.int64(0)
    for u in range(resid.shape[0]):
        d = resid[u]
        if d > n:
            return np.int64(-2)
        if d > 0:
            total += d * d
    return total
