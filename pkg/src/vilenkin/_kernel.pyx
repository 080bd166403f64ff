# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled mixed-radix stages for the Vilenkin-Fourier transform.

Same contract as ``vilenkin._fallback.vilenkin_transform``. Each stage reads
one buffer and writes the other; the innermost loop runs over contiguous
atoms that share all digits but the current one.
"""
import numpy as np

ctypedef double complex cplx


cdef void _stage(const cplx* src, cplx* dst, const cplx* T, Py_ssize_t p,
                 Py_ssize_t outer, Py_ssize_t inner, double scale) noexcept nogil:
    cdef Py_ssize_t o, r, a, k, span = p * inner
    cdef const cplx* s
    cdef cplx* d
    cdef cplx c, x, y
    for o in range(outer):
        s = src + o * span
        d = dst + o * span
        if p == 2:
            for r in range(inner):
                x = s[r]
                y = s[inner + r]
                d[r] = (x + y) * scale
                d[inner + r] = (x - y) * scale
            continue
        for k in range(p):
            c = T[k * p] * scale
            for r in range(inner):
                d[k * inner + r] = c * s[r]
            for a in range(1, p):
                c = T[k * p + a] * scale
                for r in range(inner):
                    d[k * inner + r] = d[k * inner + r] + c * s[a * inner + r]


def vilenkin_transform(x, radices, perm, bint inverse):
    shape = np.shape(x)
    cdef Py_ssize_t N = shape[len(shape) - 1]
    cdef cplx[:, ::1] data = np.ascontiguousarray(x, dtype=np.complex128).reshape(-1, N)
    cdef const long long[::1] pr = np.ascontiguousarray(radices, dtype=np.int64)
    cdef const long long[::1] pm = np.ascontiguousarray(perm, dtype=np.int64)
    cdef Py_ssize_t B = data.shape[0], K = pr.shape[0]
    cdef Py_ssize_t b, i, n, outer, inner, p
    cdef double scale
    cdef double sign = 1.0 if inverse else -1.0

    # concatenated p_i x p_i DFT matrices with exactly reduced phases
    mats = []
    offsets = np.zeros(K, dtype=np.int64)
    pos = 0
    for i in range(K):
        p = pr[i]
        kk = np.arange(p)
        mats.append(np.exp(sign * 2j * np.pi * (np.outer(kk, kk) % p) / p).ravel())
        offsets[i] = pos
        pos += p * p
    cdef cplx[::1] T = np.ascontiguousarray(np.concatenate(mats))
    cdef const long long[::1] toff = offsets

    out_arr = np.empty((B, N), dtype=np.complex128)
    cdef cplx[:, ::1] out = out_arr
    cdef cplx[::1] buf0 = np.empty(N, dtype=np.complex128)
    cdef cplx[::1] buf1 = np.empty(N, dtype=np.complex128)
    cdef cplx* cur
    cdef cplx* nxt
    cdef cplx* swap
    with nogil:
        for b in range(B):
            cur = &buf0[0]
            nxt = &buf1[0]
            if inverse:
                for n in range(N):
                    cur[pm[n]] = data[b, n]
            else:
                for n in range(N):
                    cur[n] = data[b, n]
            outer = 1
            inner = N
            for i in range(K):
                p = pr[i]
                inner = inner // p
                scale = 1.0 if inverse else 1.0 / p
                _stage(cur, nxt, &T[toff[i]], p, outer, inner, scale)
                swap = cur
                cur = nxt
                nxt = swap
                outer = outer * p
            if inverse:
                for n in range(N):
                    out[b, n] = cur[n]
            else:
                for n in range(N):
                    out[b, n] = cur[pm[n]]
    return out_arr.reshape(shape)
