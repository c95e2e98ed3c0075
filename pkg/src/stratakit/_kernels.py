"""Portable batch classifier for pair stabilizers, integer arithmetic only.

Given the finite part of a base-point stabilizer as scaled integer matrices
D_f * A_f, and a batch of integer covectors P (covectors are classified up
to positive scale, so numerators suffice), decide for every (sample, f)
whether f fixes the covector, and flag samples where f could re-enter with
a nonzero torus angle; those few go back to the exact rational path.

This module is the fallback twin of the compiled extension; both must
produce bit-identical outputs.
"""

import numpy as np

BACKEND = "numpy"


def classify_batch(intAs, dens, P, blocks, nonblock, m_active):
    """(fin, slow) masks for a batch of integer covectors.

    intAs: (F, n, n) int64, D_f * A_f rows; dens: (F,) int64; P: (N, n)
    int64; blocks: (nb, 2) int64 coordinate pairs; nonblock: (nn,) int64;
    m_active: (nb,) bool, blocks with base-point mass (these admit only the
    zero angle). Returns fin (N, F) bool and slow (N,) bool.
    """
    N = P.shape[0]
    F = intAs.shape[0]
    fin = np.zeros((N, F), dtype=bool)
    slow = np.zeros(N, dtype=bool)
    for f in range(F):
        q = P @ intAs[f].T
        t = dens[f] * P
        eq = q == t
        member = eq.all(axis=1)
        fin[:, f] = member
        ok = ~member
        if nonblock.size:
            ok &= eq[:, nonblock].all(axis=1)
        for j in range(blocks.shape[0]):
            r, u = blocks[j]
            qz = (q[:, r] == 0) & (q[:, u] == 0)
            tz = (P[:, r] == 0) & (P[:, u] == 0)
            ok &= qz == tz
            if m_active[j]:
                # base-point mass here, only the zero angle is available
                ok &= tz | (eq[:, r] & eq[:, u])
            else:
                nrm = q[:, r] ** 2 + q[:, u] ** 2 == t[:, r] ** 2 + t[:, u] ** 2
                ok &= tz | nrm
        slow |= ok
    return fin, slow
