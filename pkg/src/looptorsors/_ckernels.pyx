# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``; same signatures."""
from collections import deque

from libc.stdlib cimport free, malloc
from libc.string cimport memcpy
from cpython.bytes cimport PyBytes_AS_STRING, PyBytes_FromStringAndSize

from looptorsors._pykernels import generator_moves


cdef inline void _apply(const int* src, int* dst, int n, int modulus,
                        int kind, int i, int j) noexcept nogil:
    cdef int k, t
    memcpy(dst, src, n * n * sizeof(int))
    if kind == 0:
        for k in range(n):
            dst[i * n + k] = (dst[i * n + k] + dst[j * n + k]) % modulus
        for k in range(n):
            dst[k * n + i] = (dst[k * n + i] + dst[k * n + j]) % modulus
    elif kind == 1:
        for k in range(n):
            t = dst[i * n + k]
            dst[i * n + k] = dst[j * n + k]
            dst[j * n + k] = t
        for k in range(n):
            t = dst[k * n + i]
            dst[k * n + i] = dst[k * n + j]
            dst[k * n + j] = t
    else:
        for k in range(n):
            dst[i * n + k] = (modulus - dst[i * n + k]) % modulus
            dst[k * n + i] = (modulus - dst[k * n + i]) % modulus


cdef bytes _pack(const int* m, int size):
    return PyBytes_FromStringAndSize(<const char*> m, size * sizeof(int))


def congruence_bfs(start, target, int n, int modulus, long budget):
    cdef int size = n * n
    cdef int* cur = <int*> malloc(size * sizeof(int))
    cdef int* nxt = <int*> malloc(size * sizeof(int))
    cdef int idx, nmoves
    cdef bytes key, skey, tkey
    cdef list moves = generator_moves(n)
    cdef int* kinds
    cdef int* mi
    cdef int* mj
    nmoves = len(moves)
    kinds = <int*> malloc(nmoves * sizeof(int))
    mi = <int*> malloc(nmoves * sizeof(int))
    mj = <int*> malloc(nmoves * sizeof(int))
    try:
        for idx in range(nmoves):
            kinds[idx], mi[idx], mj[idx] = moves[idx]
        for idx in range(size):
            cur[idx] = start[idx]
        skey = _pack(cur, size)
        for idx in range(size):
            cur[idx] = target[idx]
        tkey = _pack(cur, size)
        if skey == tkey:
            return [], 1
        parent = {skey: None}
        queue = deque([skey])
        while queue:
            key = queue.popleft()
            memcpy(cur, PyBytes_AS_STRING(key), size * sizeof(int))
            for idx in range(nmoves):
                _apply(cur, nxt, n, modulus, kinds[idx], mi[idx], mj[idx])
                nkey = _pack(nxt, size)
                if nkey in parent:
                    continue
                parent[nkey] = (key, idx)
                if nkey == tkey:
                    path = []
                    while parent[nkey] is not None:
                        nkey, step = parent[nkey]
                        path.append(step)
                    return path[::-1], len(parent)
                if len(parent) >= budget:
                    return None, len(parent)
                queue.append(nkey)
        return None, len(parent)
    finally:
        free(cur)
        free(nxt)
        free(kinds)
        free(mi)
        free(mj)


def finite_field_has_zero(coeffs, add, mul):
    cdef int q = len(add)
    cdef int d = len(coeffs)
    cdef int* addt = <int*> malloc(q * q * sizeof(int))
    cdef int* mult = <int*> malloc(q * q * sizeof(int))
    cdef int* a = <int*> malloc((d + 1) * sizeof(int))
    cdef int* v = <int*> malloc((d + 1) * sizeof(int))
    cdef int x, y, i, s, nonzero
    try:
        for x in range(q):
            for y in range(q):
                addt[x * q + y] = add[x][y]
                mult[x * q + y] = mul[x][y]
        for i in range(d):
            a[i] = coeffs[i]
            v[i] = 0
        while True:
            # advance odometer; the all-zero vector is skipped
            i = 0
            while i < d:
                v[i] += 1
                if v[i] < q:
                    break
                v[i] = 0
                i += 1
            if i == d:
                return False
            s = 0
            nonzero = 0
            for i in range(d):
                if v[i]:
                    nonzero = 1
                s = addt[s * q + mult[a[i] * q + mult[v[i] * q + v[i]]]]
            if nonzero and s == 0:
                return True
    finally:
        free(addt)
        free(mult)
        free(a)
        free(v)
