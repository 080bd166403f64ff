"""Numpy implementation of the mixed-radix transform stages.

Used when the compiled ``_kernel`` extension is unavailable, or when
``VILENKIN_BACKEND=numpy`` is set.
"""
import numpy as np


def _dft_matrix(p, inverse):
    k = np.arange(p)
    phase = np.outer(k, k) % p
    sign = 1.0 if inverse else -1.0
    return np.exp(sign * 2j * np.pi * phase / p)


def vilenkin_transform(x, radices, perm, inverse):
    """Apply the K radix stages to the last axis of ``x``.

    Atom index j has big-endian digits (a_1, ..., a_K), so a C-order reshape
    to ``radices`` exposes a_i on axis i. Stage i replaces a_i by the
    frequency digit alpha_i. ``perm[n]`` is the flat position, after all
    stages, of the coefficient with index n (little-endian digits).
    """
    x = np.asarray(x, dtype=np.complex128)
    lead = x.shape[:-1]
    N = x.shape[-1]
    data = x.reshape(-1, N)
    if inverse:
        work = np.empty_like(data)
        work[:, perm] = data
    else:
        work = data.copy()
    work = work.reshape((-1,) + tuple(int(p) for p in radices))
    for i, p in enumerate(radices):
        p = int(p)
        D = _dft_matrix(p, inverse)
        if not inverse:
            D = D / p
        work = np.moveaxis(np.tensordot(work, D, axes=([i + 1], [1])), -1, i + 1)
    work = work.reshape(-1, N)
    if not inverse:
        work = work[:, perm]
    return np.ascontiguousarray(work).reshape(lead + (N,))
