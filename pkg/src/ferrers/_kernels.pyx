# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled GF(p) kernels. Same contracts as ``_pykernels``."""
from libcpp.vector cimport vector
from libcpp.unordered_map cimport unordered_map
from libc.stdint cimport int64_t, int32_t, uint64_t

import numpy as np

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef struct Entry:
    int32_t row
    int64_t val

ctypedef vector[Entry] Column


cdef inline int64_t modinv(int64_t a, int64_t p) nogil:
    cdef int64_t t = 0, newt = 1, r = p, newr = a, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


cdef inline void insert_sorted(Column& col, int32_t row, int64_t val) nogil:
    cdef Entry e
    e.row = row
    e.val = val
    col.push_back(e)
    cdef size_t i = col.size() - 1
    while i > 0 and col[i - 1].row > row:
        col[i] = col[i - 1]
        i -= 1
    col[i] = e


cdef void axpy(Column& c, Column& other, int64_t f, int64_t p, Column& tmp) nogil:
    # c <- c - f * other, both sorted by row
    cdef size_t a = 0, b = 0
    cdef size_t na = c.size(), nb = other.size()
    cdef Entry e
    cdef int64_t v
    tmp.clear()
    while a < na or b < nb:
        if b >= nb or (a < na and c[a].row < other[b].row):
            tmp.push_back(c[a])
            a += 1
        elif a >= na or other[b].row < c[a].row:
            e.row = other[b].row
            e.val = (p - (f * other[b].val) % p) % p
            if e.val:
                tmp.push_back(e)
            b += 1
        else:
            v = (c[a].val - f * other[b].val) % p
            if v < 0:
                v += p
            if v:
                e.row = c[a].row
                e.val = v
                tmp.push_back(e)
            a += 1
            b += 1
    c.swap(tmp)


cdef int64_t reduce_level(vector[Column]& cols, int32_t nrows, int64_t p,
                          vector[char]& skip, vector[char]& lowflag) nogil:
    cdef vector[int32_t] pivot = vector[int32_t](nrows, -1)
    cdef Column tmp
    cdef int64_t rank = 0, f, inv
    cdef int32_t low, k
    cdef size_t j, t
    for j in range(cols.size()):
        if skip[j]:
            cols[j].clear()
            continue
        while not cols[j].empty():
            low = cols[j].back().row
            k = pivot[low]
            if k < 0:
                break
            f = cols[j].back().val
            axpy(cols[j], cols[k], f, p, tmp)
        if not cols[j].empty():
            # normalize so the pivot entry is 1
            inv = modinv(cols[j].back().val, p)
            for t in range(cols[j].size()):
                cols[j][t].val = (cols[j][t].val * inv) % p
            pivot[low] = <int32_t>j
            lowflag[low] = 1
            rank += 1
    return rank


cdef list chain_betti_c(vector[vector[Column]]& bnd, vector[int64_t]& counts, int64_t p):
    cdef int top = <int>counts.size() - 1
    cdef vector[int64_t] ranks = vector[int64_t](top + 2, 0)
    cdef vector[char] skip, lowflag
    cdef int k
    skip = vector[char](counts[top] if top >= 0 else 0, 0)
    for k in range(top, 0, -1):
        lowflag = vector[char](counts[k - 1], 0)
        with nogil:
            ranks[k] = reduce_level(bnd[k], <int32_t>counts[k - 1], p, skip, lowflag)
        skip.swap(lowflag)
    return [counts[k] - ranks[k] - ranks[k + 1] for k in range(top + 1)]


cdef inline int64_t sign(int t, int64_t p) nogil:
    return 1 if t % 2 == 0 else p - 1


def simplicial_betti(masks, int64_t p):
    cdef const int64_t[::1] mv = np.ascontiguousarray(masks, dtype=np.int64)
    cdef Py_ssize_t nf = mv.shape[0], i
    if nf == 0:
        return []
    cdef vector[int32_t] level = vector[int32_t](nf)
    cdef vector[int32_t] pos = vector[int32_t](nf)
    cdef vector[int64_t] counts
    cdef unordered_map[int64_t, int32_t] idx
    cdef int top = 0, lv, t
    cdef uint64_t rest, bit
    cdef int64_t sub
    for i in range(nf):
        lv = __builtin_popcountll(<unsigned long long>mv[i])
        level[i] = lv
        if lv > top:
            top = lv
    counts = vector[int64_t](top + 1, 0)
    for i in range(nf):
        pos[i] = <int32_t>counts[level[i]]
        counts[level[i]] += 1
        idx[mv[i]] = pos[i]
    cdef vector[vector[Column]] bnd = vector[vector[Column]](top + 1)
    for lv in range(top + 1):
        bnd[lv].resize(counts[lv])
    for i in range(nf):
        if level[i] == 0:
            continue
        rest = <uint64_t>mv[i]
        t = 0
        while rest:
            bit = rest & (~rest + 1)
            rest ^= bit
            sub = mv[i] & ~(<int64_t>bit)
            if idx.count(sub) == 0:
                raise ValueError("face set is not closed under taking faces")
            insert_sorted(bnd[level[i]][pos[i]], idx[sub], sign(t, p))
            t += 1
    return chain_betti_c(bnd, counts, p)


def cell_betti(rows, cols, int64_t p):
    cdef const int64_t[::1] rv = np.ascontiguousarray(rows, dtype=np.int64)
    cdef const int64_t[::1] cv = np.ascontiguousarray(cols, dtype=np.int64)
    cdef Py_ssize_t nf = rv.shape[0], i
    if nf == 0:
        return []
    cdef vector[int32_t] level = vector[int32_t](nf)
    cdef vector[int32_t] pos = vector[int32_t](nf)
    cdef vector[int64_t] counts
    cdef unordered_map[int64_t, int32_t] idx
    cdef int top = 0, lv, t, ns, nt
    cdef uint64_t rest, bit
    cdef int64_t key, s, c, base
    for i in range(nf):
        lv = __builtin_popcountll(<unsigned long long>rv[i]) + __builtin_popcountll(<unsigned long long>cv[i]) - 1
        level[i] = lv
        if lv > top:
            top = lv
    counts = vector[int64_t](top + 1, 0)
    counts[0] = 1
    idx[0] = 0
    for i in range(nf):
        pos[i] = <int32_t>counts[level[i]]
        counts[level[i]] += 1
        idx[(rv[i] << 32) | cv[i]] = pos[i]
    cdef vector[vector[Column]] bnd = vector[vector[Column]](top + 1)
    for lv in range(top + 1):
        bnd[lv].resize(counts[lv])
    for i in range(nf):
        s = rv[i]
        c = cv[i]
        ns = __builtin_popcountll(<unsigned long long>s)
        nt = __builtin_popcountll(<unsigned long long>c)
        if ns == 1 and nt == 1:
            insert_sorted(bnd[level[i]][pos[i]], 0, 1)
        if ns >= 2:
            rest = <uint64_t>s
            t = 0
            while rest:
                bit = rest & (~rest + 1)
                rest ^= bit
                key = ((s & ~(<int64_t>bit)) << 32) | c
                if idx.count(key) == 0:
                    raise ValueError("cell set is not closed under taking faces")
                insert_sorted(bnd[level[i]][pos[i]], idx[key], sign(t, p))
                t += 1
        if nt >= 2:
            rest = <uint64_t>c
            t = ns - 1
            while rest:
                bit = rest & (~rest + 1)
                rest ^= bit
                key = (s << 32) | (c & ~(<int64_t>bit))
                if idx.count(key) == 0:
                    raise ValueError("cell set is not closed under taking faces")
                insert_sorted(bnd[level[i]][pos[i]], idx[key], sign(t, p))
                t += 1
    return chain_betti_c(bnd, counts, p)


def taylor_betti(keys, int64_t p):
    cdef const int64_t[::1] kv = np.ascontiguousarray(keys, dtype=np.int64)
    cdef Py_ssize_t total = kv.shape[0]
    masks_np = np.arange(1, total, dtype=np.int64)
    keys_np = np.asarray(kv[1:])
    pc_np = np.bitwise_count(masks_np).astype(np.int64)
    order = np.lexsort((masks_np, pc_np, keys_np))
    cdef const int64_t[::1] sm = np.ascontiguousarray(masks_np[order])
    cdef const int64_t[::1] sk = np.ascontiguousarray(keys_np[order])
    cdef const int64_t[::1] spc = np.ascontiguousarray(pc_np[order])
    cdef vector[int32_t] loc = vector[int32_t](total, -1)
    cdef Py_ssize_t n = sm.shape[0], start = 0, end, i
    cdef int64_t key, mask, sub
    cdef int top, lv, t
    cdef uint64_t rest, bit
    cdef vector[int64_t] counts
    cdef vector[vector[Column]] bnd
    out = {}
    while start < n:
        key = sk[start]
        end = start
        while end < n and sk[end] == key:
            end += 1
        top = <int>spc[end - 1]
        counts = vector[int64_t](top + 1, 0)
        for i in range(start, end):
            loc[sm[i]] = <int32_t>counts[spc[i]]
            counts[spc[i]] += 1
        bnd = vector[vector[Column]](top + 1)
        for lv in range(top + 1):
            bnd[lv].resize(counts[lv])
        for i in range(start, end):
            mask = sm[i]
            lv = <int>spc[i]
            if lv < 2:
                continue
            rest = <uint64_t>mask
            t = 0
            while rest:
                bit = rest & (~rest + 1)
                rest ^= bit
                sub = mask & ~(<int64_t>bit)
                if kv[sub] == key:
                    insert_sorted(bnd[lv][loc[mask]], loc[sub], sign(t, p))
                t += 1
        out[key] = chain_betti_c(bnd, counts, p)
        start = end
    return out
