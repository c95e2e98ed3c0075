# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of _kernels.classify_batch; see that module for the
contract. Outputs must stay bit-identical with the fallback."""

import numpy as np

from libc.stdint cimport int64_t, uint8_t

BACKEND = "cython"


def classify_batch(intAs_in, dens_in, P_in, blocks_in, nonblock_in, m_active_in):
    cdef int64_t[:, :, ::1] intAs = np.ascontiguousarray(intAs_in, dtype=np.int64)
    cdef int64_t[::1] dens = np.ascontiguousarray(dens_in, dtype=np.int64)
    cdef int64_t[:, ::1] P = np.ascontiguousarray(P_in, dtype=np.int64)
    cdef int64_t[:, ::1] blocks = np.ascontiguousarray(
        blocks_in.reshape(-1, 2), dtype=np.int64)
    cdef int64_t[::1] nonblock = np.ascontiguousarray(nonblock_in, dtype=np.int64)
    cdef uint8_t[::1] m_active = np.ascontiguousarray(
        m_active_in, dtype=np.uint8)

    cdef Py_ssize_t N = P.shape[0]
    cdef Py_ssize_t n = P.shape[1]
    cdef Py_ssize_t F = intAs.shape[0]
    cdef Py_ssize_t nb = blocks.shape[0]
    cdef Py_ssize_t nn = nonblock.shape[0]

    fin_np = np.zeros((N, F), dtype=bool)
    slow_np = np.zeros(N, dtype=bool)
    cdef uint8_t[:, ::1] fin = fin_np.view(np.uint8)
    cdef uint8_t[::1] slow = slow_np.view(np.uint8)
    q_np = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] q = q_np

    cdef Py_ssize_t s, f, i, c, j, r, u
    cdef int64_t d, acc, qr, qu, tr, tu
    cdef bint member, ok, qz, tz

    for s in range(N):
        for f in range(F):
            d = dens[f]
            member = True
            for i in range(n):
                acc = 0
                for c in range(n):
                    acc += intAs[f, i, c] * P[s, c]
                q[i] = acc
                if acc != d * P[s, i]:
                    member = False
            if member:
                fin[s, f] = 1
                continue
            ok = True
            for i in range(nn):
                c = nonblock[i]
                if q[c] != d * P[s, c]:
                    ok = False
                    break
            if ok:
                for j in range(nb):
                    r = blocks[j, 0]
                    u = blocks[j, 1]
                    qr = q[r]
                    qu = q[u]
                    tr = d * P[s, r]
                    tu = d * P[s, u]
                    qz = qr == 0 and qu == 0
                    tz = P[s, r] == 0 and P[s, u] == 0
                    if qz != tz:
                        ok = False
                        break
                    if tz:
                        continue
                    if qr == tr and qu == tu:
                        continue
                    if m_active[j]:
                        ok = False
                        break
                    if qr * qr + qu * qu != tr * tr + tu * tu:
                        ok = False
                        break
            if ok:
                slow[s] = 1
    return fin_np, slow_np
