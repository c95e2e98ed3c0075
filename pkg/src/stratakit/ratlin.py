"""Exact linear algebra over the rationals, plus integer lattice utilities.

Vectors are tuples of Fraction, matrices are tuples of row tuples. Nothing
here touches floats; these routines back every computation whose output has
to be discrete (ranks, kernels, subgroup lattices).
"""

from fractions import Fraction
from math import gcd, lcm

ZERO = Fraction(0)
ONE = Fraction(1)


def frac(x):
    """Coerce ints, Fractions and 'p/q' strings to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError("not an exact rational: %r" % (x,))


def vec(xs):
    return tuple(frac(x) for x in xs)


def mat(rows):
    return tuple(vec(r) for r in rows)


def zeros(n):
    return (ZERO,) * n


def unit(n, i):
    return tuple(ONE if j == i else ZERO for j in range(n))


def identity(n):
    return tuple(unit(n, i) for i in range(n))


def vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(c, a):
    return tuple(c * x for x in a)


def dot(a, b):
    return sum((x * y for x, y in zip(a, b)), ZERO)


def is_zero_vec(a):
    return all(x == 0 for x in a)


def mat_vec(A, v):
    return tuple(dot(row, v) for row in A)


def mat_mul(A, B):
    Bt = transpose(B)
    return tuple(tuple(dot(r, c) for c in Bt) for r in A)


def transpose(A):
    return tuple(zip(*A)) if A else ()


def mat_sub(A, B):
    return tuple(vec_sub(r, s) for r, s in zip(A, B))


def rref(rows):
    """Reduced row echelon form. Returns (rref rows as tuples, pivot cols)."""
    R = [list(vec(r)) for r in rows]
    if not R:
        return (), ()
    n = len(R[0])
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(R)) if R[i][c] != 0), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        inv = ONE / R[r][c]
        R[r] = [x * inv for x in R[r]]
        for i in range(len(R)):
            if i != r and R[i][c] != 0:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == len(R):
            break
    return tuple(tuple(row) for row in R[:r]), tuple(pivots)


def rank(rows):
    return len(rref(rows)[0])


def nullspace(rows, n=None):
    """Basis of the right kernel {x : A x = 0}.

    n must be given when rows is empty (kernel is all of R^n).
    """
    if not rows:
        if n is None:
            raise ValueError("nullspace of empty matrix needs n")
        return identity(n)
    n = len(rows[0])
    R, pivots = rref(rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fcol in free:
        v = [ZERO] * n
        v[fcol] = ONE
        for i, pcol in enumerate(pivots):
            v[pcol] = -R[i][fcol]
        basis.append(tuple(v))
    return tuple(basis)


def span_contains(basis, v):
    """True iff v lies in the span of the basis vectors."""
    if is_zero_vec(v):
        return True
    if not basis:
        return False
    R, pivots = rref(basis)
    w = list(v)
    for row, p in zip(R, pivots):
        if w[p] != 0:
            f = w[p]
            w = [x - f * y for x, y in zip(w, row)]
    return all(x == 0 for x in w)


def spans_equal(U, W):
    return len(rref(U)[0]) == len(rref(W)[0]) == len(rref(tuple(U) + tuple(W))[0])


def intersect_spans(U, W, n):
    """Basis of span(U) intersected with span(W) inside R^n."""
    if not U or not W:
        return ()
    # solutions of sum a_i U_i - sum b_j W_j = 0; read off the U part
    cols = tuple(U) + tuple(vec_scale(-ONE, w) for w in W)
    ker = nullspace(transpose(cols), n=len(cols))
    out = []
    for coeffs in ker:
        v = zeros(n)
        for a, u in zip(coeffs[: len(U)], U):
            v = vec_add(v, vec_scale(a, u))
        if not is_zero_vec(v):
            out.append(v)
    R, _ = rref(out)
    return R


def orth_complement(basis, n):
    """Basis of the orthogonal complement of span(basis) in R^n."""
    return nullspace(tuple(basis), n=n)


def gram_schmidt(vectors):
    """Pairwise-orthogonal exact basis of the span (unnormalized).

    Normalizing would need square roots, which leave the rationals, so the
    vectors keep whatever lengths the elimination produces.
    """
    out = []
    for v in vectors:
        w = vec(v)
        for u in out:
            w = vec_sub(w, vec_scale(dot(w, u) / dot(u, u), u))
        if not is_zero_vec(w):
            out.append(w)
    return tuple(out)


def project_onto(basis, v):
    """Orthogonal projection of v onto span(basis); basis need not be orthogonal."""
    acc = zeros(len(v))
    for u in gram_schmidt(basis):
        acc = vec_add(acc, vec_scale(dot(v, u) / dot(u, u), u))
    return acc


def clear_denominators(v):
    """(integer tuple, positive denominator) with v = ints/den."""
    v = vec(v)
    den = lcm(*(x.denominator for x in v)) if v else 1
    return tuple(int(x * den) for x in v), den


def primitive_int_vector(v):
    """Scale a rational vector to a primitive integer vector (gcd 1)."""
    ints, _ = clear_denominators(v)
    g = gcd(*(abs(x) for x in ints)) if any(ints) else 1
    if g == 0:
        g = 1
    return tuple(x // g for x in ints)


# ---------------------------------------------------------------------------
# integer lattices (rows span a sublattice of Z^k)


def hnf(rows):
    """Row-style Hermite normal form of an integer matrix.

    Returns (H, U) with U unimodular, U*A = H, H in canonical echelon form:
    positive pivots, entries above each pivot reduced into [0, pivot).
    Zero rows of H sit at the bottom.
    """
    m = len(rows)
    if m == 0:
        return (), ()
    k = len(rows[0])
    H = [list(map(int, r)) for r in rows]
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]

    def combine(i, j, q):
        # row_i -= q * row_j
        H[i] = [a - q * b for a, b in zip(H[i], H[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    r = 0
    for c in range(k):
        while True:
            live = [i for i in range(r, m) if H[i][c] != 0]
            if not live:
                break
            i0 = min(live, key=lambda i: (abs(H[i][c]), i))
            if i0 != r:
                H[r], H[i0] = H[i0], H[r]
                U[r], U[i0] = U[i0], U[r]
            done = True
            for i in range(r + 1, m):
                if H[i][c] != 0:
                    combine(i, r, H[i][c] // H[r][c])
                    if H[i][c] != 0:
                        done = False
            if done:
                break
        if r < m and H[r][c] != 0:
            if H[r][c] < 0:
                H[r] = [-x for x in H[r]]
                U[r] = [-x for x in U[r]]
            for i in range(r):
                q = H[i][c] // H[r][c]
                if q:
                    combine(i, r, q)
            r += 1
            if r == m:
                break
    return tuple(tuple(x) for x in H), tuple(tuple(x) for x in U)


def lattice_canon(rows):
    """Canonical generator tuple (nonzero HNF rows) for the row lattice."""
    rows = [tuple(map(int, r)) for r in rows if any(r)]
    if not rows:
        return ()
    H, _ = hnf(rows)
    return tuple(r for r in H if any(r))


def lattice_contains(canon, v):
    """Membership of integer vector v in the lattice given by canonical rows."""
    w = list(map(int, v))
    for row in canon:
        c = next(i for i, x in enumerate(row) if x != 0)
        if w[c] % row[c] != 0:
            return False
        q = w[c] // row[c]
        w = [a - q * b for a, b in zip(w, row)]
    return all(x == 0 for x in w)


def lattice_subset(A_canon, B_canon):
    """True iff lattice A is contained in lattice B."""
    return all(lattice_contains(B_canon, r) for r in A_canon)


def left_kernel_lattice(rows, m=None):
    """Basis of the integer lattice {u : u * A = 0} for integer matrix A.

    Because the transform in hnf() is unimodular, the returned rows span the
    full integer left kernel (automatically saturated). m is the number of
    rows of A, needed when rows is empty.
    """
    if not rows:
        return identity_int(m or 0)
    H, U = hnf(rows)
    return tuple(u for h, u in zip(H, U) if not any(h))


def identity_int(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def snf_diagonal(rows):
    """Nonzero invariant factors d1 | d2 | ... of an integer matrix."""
    A = [list(map(int, r)) for r in rows if any(r)]
    if not A:
        return ()
    out = []
    while A and any(any(r) for r in A):
        # move a minimal nonzero entry to (0,0)
        while True:
            best = None
            for i, row in enumerate(A):
                for j, x in enumerate(row):
                    if x != 0 and (best is None or abs(x) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            bi, bj = best
            A[0], A[bi] = A[bi], A[0]
            for row in A:
                row[0], row[bj] = row[bj], row[0]
            p = A[0][0]
            dirty = False
            for i in range(1, len(A)):
                q = A[i][0] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[0])]
                if A[i][0] != 0:
                    dirty = True
            for j in range(1, len(A[0])):
                q = A[0][j] // p
                if q:
                    for row in A:
                        row[j] -= q * row[0]
                if A[0][j] != 0:
                    dirty = True
            if not dirty:
                break
        d = abs(A[0][0])
        # divisibility fixup: fold any non-multiple into the pivot and redo
        bad = next(
            (
                (i, j)
                for i in range(1, len(A))
                for j in range(1, len(A[0]))
                if A[i][j] % d != 0
            ),
            None,
        )
        if bad is not None:
            i, _ = bad
            A[0] = [a + b for a, b in zip(A[0], A[i])]
            continue
        out.append(d)
        A = [row[1:] for row in A[1:]]
    return tuple(out)
