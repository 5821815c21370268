# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled spectra kernels; same contracts as ``_pykernels``.

Every kernel releases the GIL so callers can run disjoint ranges in threads.
"""
from libc.stdint cimport int64_t, int32_t
from libc.stdlib cimport malloc, calloc, free

cdef extern from *:
    """
    static inline int pp_parity64(long long x) {
        return __builtin_parityll((unsigned long long)x);
    }
    """
    int pp_parity64(long long x) nogil


def ddt_block(const int64_t[::1] table, Py_ssize_t a0, Py_ssize_t a1, int32_t[:, ::1] out):
    cdef Py_ssize_t q = table.shape[0]
    cdef Py_ssize_t a, x
    with nogil:
        for a in range(a0, a1):
            for x in range(q):
                out[a - a0, table[x] ^ table[x ^ a]] += 1


cdef void _fwht(int32_t* v, Py_ssize_t q) noexcept nogil:
    cdef Py_ssize_t h = 1, i, j
    cdef int32_t u, w
    while h < q:
        i = 0
        while i < q:
            for j in range(i, i + h):
                u = v[j]
                w = v[j + h]
                v[j] = u + w
                v[j + h] = u - w
            i += 2 * h
        h <<= 1


def walsh_block(const int64_t[::1] table, Py_ssize_t v0, Py_ssize_t v1, int32_t[:, ::1] out):
    cdef Py_ssize_t q = table.shape[0]
    cdef Py_ssize_t v, x
    with nogil:
        for v in range(v0, v1):
            for x in range(q):
                out[v - v0, x] = 1 - 2 * pp_parity64(v & table[x])
            _fwht(&out[v - v0, 0], q)


def bct_block(const int64_t[::1] table, Py_ssize_t b0, Py_ssize_t b1, int32_t[:, ::1] out):
    cdef Py_ssize_t q = table.shape[0]
    cdef Py_ssize_t width = b1 - b0
    cdef Py_ssize_t alpha, x, b, i, j, lo, hi
    cdef int64_t* d
    cdef Py_ssize_t* count
    cdef Py_ssize_t* start
    cdef int64_t* bucket
    if width <= 0:
        return
    d = <int64_t*> malloc(q * sizeof(int64_t))
    count = <Py_ssize_t*> calloc(width + 1, sizeof(Py_ssize_t))
    start = <Py_ssize_t*> malloc((width + 1) * sizeof(Py_ssize_t))
    bucket = <int64_t*> malloc(q * sizeof(int64_t))
    if d == NULL or count == NULL or start == NULL or bucket == NULL:
        free(d); free(count); free(start); free(bucket)
        raise MemoryError()
    with nogil:
        for alpha in range(1, q):
            for b in range(width + 1):
                count[b] = 0
            for x in range(q):
                d[x] = table[x] ^ table[x ^ alpha]
                if b0 <= d[x] < b1:
                    count[d[x] - b0 + 1] += 1
            for b in range(width):
                count[b + 1] += count[b]
            for b in range(width + 1):
                start[b] = count[b]
            for x in range(q):
                if b0 <= d[x] < b1:
                    b = d[x] - b0
                    bucket[start[b]] = x
                    start[b] += 1
            for b in range(width):
                lo = count[b]
                hi = count[b + 1]
                for i in range(lo, hi):
                    for j in range(i + 1, hi):
                        out[bucket[i] ^ bucket[j], b + b0] += 2
    free(d); free(count); free(start); free(bucket)
