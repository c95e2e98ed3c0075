"""Product-form closed subgroups of G = F x T^k and the stabilizer calculus.

A closed subgroup is stored as (finite part, torus part) where the torus
part is the solution set {theta : W theta = 0 mod full turns} of an integer
constraint matrix W, canonicalized by row Hermite normal form. Equality,
containment, dimension and component counts are then exact integer
computations; no angle representative is ever materialized.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import prod

from . import ratlin as rl
from .errors import (
    DimensionMismatch,
    InternalCheckError,
    NonProductStabilizer,
    NumericalAmbiguity,
)

_ONE = (Fraction(1), Fraction(0))


@dataclass(frozen=True)
class ClosedSubgroup:
    """A subgroup H_F x T_W of F x T^k in canonical form.

    finite_part: sorted element indices of H_F; constraints: canonical
    (Hermite) rows of the integer lattice W defining the torus part.
    """

    finite_part: tuple
    constraints: tuple
    torus_dim: int
    torus_components: int

    @property
    def dim(self):
        return self.torus_dim

    @property
    def finite_order(self):
        return len(self.finite_part)

    @property
    def components(self):
        return self.finite_order * self.torus_components


def make_subgroup(spec, finite_part, constraint_rows) -> ClosedSubgroup:
    canon = rl.lattice_canon(constraint_rows)
    dim = spec.k - len(canon)
    comps = prod(rl.snf_diagonal(canon)) if canon else 1
    return ClosedSubgroup(tuple(sorted(set(finite_part))), canon, dim, comps)


def full_group(spec) -> ClosedSubgroup:
    return make_subgroup(spec, range(spec.finite_order), ())


def trivial_subgroup(spec) -> ClosedSubgroup:
    return make_subgroup(spec, (0,), rl.identity_int(spec.k))


def is_full_group(spec, H) -> bool:
    return H.finite_order == spec.finite_order and H.constraints == ()


def is_trivial(H) -> bool:
    return H.finite_order == 1 and H.torus_dim == 0 and H.torus_components == 1


def subgroup_contains(spec, A, B) -> bool:
    """True iff B is a subgroup of A (no conjugation)."""
    return set(B.finite_part) <= set(A.finite_part) and rl.lattice_subset(
        A.constraints, B.constraints
    )


def conj_element(spec, f, a):
    """Index of f a f^-1 in the element list."""
    return spec.mult[spec.mult[f][a]][spec.inverse[f]]


def conjugate_finite(spec, f, finite_part):
    return tuple(sorted(conj_element(spec, f, a) for a in finite_part))


def canonical_subgroup(spec, H) -> ClosedSubgroup:
    """Representative with the lexicographically least conjugate finite part."""
    best = min(conjugate_finite(spec, f, H.finite_part) for f in range(spec.finite_order))
    return ClosedSubgroup(best, H.constraints, H.torus_dim, H.torus_components)


def class_key(spec, H):
    """Canonical key identifying the conjugacy class of H."""
    c = canonical_subgroup(spec, H)
    return (c.finite_part, c.constraints)


def subconjugate_subgroups(spec, A, B) -> bool:
    """True iff some conjugate of A is a subgroup of B.

    Conjugation in a direct product fixes the torus coordinate, so only the
    finite part moves; the torus condition is plain containment.
    """
    if not rl.lattice_subset(B.constraints, A.constraints):
        return False
    bf = set(B.finite_part)
    return any(
        set(conjugate_finite(spec, f, A.finite_part)) <= bf
        for f in range(spec.finite_order)
    )


@dataclass(frozen=True)
class IsotropyClass:
    """A conjugacy class of closed subgroups, with a stable string id."""

    id: str
    representative: ClosedSubgroup
    dim: int
    finite_order: int
    torus_components: int

    def key(self):
        return (self.representative.finite_part, self.representative.constraints)

    def sort_key(self):
        return self.id


def is_subconjugate(spec, H: IsotropyClass, K: IsotropyClass) -> bool:
    return subconjugate_subgroups(spec, H.representative, K.representative)


# ---------------------------------------------------------------------------
# stabilizers


def stabilizer(spec, m) -> ClosedSubgroup:
    """The isotropy subgroup of a point, in product form."""
    if len(m) != spec.n:
        raise DimensionMismatch("point has length %d, expected %d" % (len(m), spec.n))
    return _stabilizer_of_points(spec, (tuple(m),))


def stabilizer_pair(spec, m, p) -> ClosedSubgroup:
    """The isotropy subgroup of (m, p) under the diagonal cotangent action."""
    if len(m) != spec.n or len(p) != spec.n:
        raise DimensionMismatch("expected two vectors of length %d" % spec.n)
    return _stabilizer_of_points(spec, (tuple(m), tuple(p)))


def _is_exact(points):
    return all(isinstance(x, (int, Fraction)) for pt in points for x in pt)


def _stabilizer_of_points(spec, points):
    exact = _is_exact(points)
    if exact:
        points = tuple(rl.vec(pt) for pt in points)
    nonblock = _nonblock_coords(spec)
    fin = []
    for f in range(spec.finite_order):
        A = spec.elements[f]
        constraints = {}
        ok = True
        for x in points:
            v = rl.mat_vec(A, x)
            for c in nonblock:
                if not _num_eq(v[c], x[c], exact, spec.tolerance):
                    ok = False
                    break
            if not ok:
                break
            for j, (r, t) in enumerate(spec.blocks):
                res = _rotation_constraint(
                    (v[r], v[t]), (x[r], x[t]), exact, spec.tolerance
                )
                if res is None:
                    ok = False
                    break
                if res == "free":
                    continue
                if j in constraints:
                    if not _cs_eq(constraints[j], res, exact, spec.tolerance):
                        ok = False
                        break
                else:
                    constraints[j] = res
            if not ok:
                break
        if not ok:
            continue
        if all(_cs_eq(cs, _ONE, exact, spec.tolerance) for cs in constraints.values()):
            fin.append(f)
        elif _coset_solvable(spec, constraints, exact):
            raise NonProductStabilizer(
                "stabilizer mixes finite element %d with nonzero torus angles" % f
            )
    pattern = _active_blocks(spec, points, exact)
    rows = [spec.weight_column(j) for j in sorted(pattern)]
    return make_subgroup(spec, fin, rows)


def _nonblock_coords(spec):
    in_block = {i for b in spec.blocks for i in b}
    return tuple(i for i in range(spec.n) if i not in in_block)


def _active_blocks(spec, points, exact):
    out = set()
    for j, (r, t) in enumerate(spec.blocks):
        for x in points:
            if not (_num_zero(x[r], exact, spec.tolerance)
                    and _num_zero(x[t], exact, spec.tolerance)):
                out.add(j)
                break
    return out


def _num_zero(a, exact, tol):
    if exact:
        return a == 0
    if abs(a) <= tol:
        return True
    if abs(a) <= 10 * tol:
        raise NumericalAmbiguity("value %r within the gray zone of zero" % a)
    return False


def _num_eq(a, b, exact, tol):
    if exact:
        return a == b
    scale = 1.0 + abs(float(b))
    d = abs(float(a) - float(b))
    if d <= tol * scale:
        return True
    if d <= 10 * tol * scale:
        raise NumericalAmbiguity("values %r and %r within the gray zone" % (a, b))
    return False


def _cs_eq(cs1, cs2, exact, tol):
    return _num_eq(cs1[0], cs2[0], exact, tol) and _num_eq(cs1[1], cs2[1], exact, tol)


def _rotation_constraint(v2, x2, exact, tol):
    """Solve R(phi) v2 = x2 for one block.

    Returns "free" (no constraint), None (no solution), or the required
    (cos phi, sin phi).
    """
    vz = _num_zero(v2[0], exact, tol) and _num_zero(v2[1], exact, tol)
    xz = _num_zero(x2[0], exact, tol) and _num_zero(x2[1], exact, tol)
    if vz and xz:
        return "free"
    if vz != xz:
        return None
    nv = v2[0] * v2[0] + v2[1] * v2[1]
    nx = x2[0] * x2[0] + x2[1] * x2[1]
    if not _num_eq(nv, nx, exact, tol):
        return None
    c = (v2[0] * x2[0] + v2[1] * x2[1]) / nv
    s = (v2[0] * x2[1] - v2[1] * x2[0]) / nv
    return (c, s)


def _coset_solvable(spec, constraints, exact):
    """Whether angles theta exist with block turns matching the constraints.

    The constraint system phi_j(theta) = alpha_j is solvable iff every
    integer relation among the active weight columns is matched by the
    alphas, i.e. the product of (c_j + i s_j)^{u_j} is 1 for each generator
    u of the relation lattice.
    """
    active = sorted(j for j, cs in constraints.items()
                    if not _cs_eq(cs, _ONE, exact, spec.tolerance))
    if not active:
        return True
    keep = sorted(constraints)
    M = [spec.weight_column(j) for j in keep]
    for u in rl.left_kernel_lattice(M):
        re, im = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
        for uj, j in zip(u, keep):
            c, s = constraints[j]
            if uj < 0:
                c, s, uj = c, -s, -uj  # unit modulus: inverse is the conjugate
            for _ in range(uj):
                re, im = re * c - im * s, re * s + im * c
        if exact:
            if (re, im) != (Fraction(1), Fraction(0)):
                return False
        else:
            d = abs(re - 1.0) + abs(im)
            if d > 10 * spec.tolerance * (1 + sum(abs(x) for x in u)):
                return False
            if d > spec.tolerance * (1 + sum(abs(x) for x in u)):
                raise NumericalAmbiguity("coset solvability within the gray zone")
    return True


# ---------------------------------------------------------------------------
# fixed subspaces and candidate enumeration


def fixed_subspace(spec, H: ClosedSubgroup):
    """Exact orthogonal basis of Fix(H) = {v : h v = v for all h in H}.

    The torus condition is a character-triviality test per block (the weight
    column must lie in the constraint lattice), so the torus contributes
    coordinate conditions only; the finite part contributes exact kernels.
    """
    rows = []
    I = rl.identity(spec.n)
    for a in H.finite_part:
        if a == 0:
            continue
        rows.extend(rl.mat_sub(spec.elements[a], I))
    for j, (r, t) in enumerate(spec.blocks):
        if not rl.lattice_contains(H.constraints, spec.weight_column(j)):
            rows.append(rl.unit(spec.n, r))
            rows.append(rl.unit(spec.n, t))
    basis = rl.nullspace(tuple(rows), n=spec.n)
    return rl.gram_schmidt(basis)


@lru_cache(maxsize=None)
def f_subgroups(spec):
    """All subgroups of F, as sorted index tuples (exhaustive, capped)."""
    order = spec.finite_order

    def closure(seed):
        got = {0} | set(seed)
        frontier = list(got)
        while frontier:
            a = frontier.pop()
            for b in list(got):
                for c in (spec.mult[a][b], spec.mult[b][a]):
                    if c not in got:
                        got.add(c)
                        frontier.append(c)
            inv = spec.inverse[a]
            if inv not in got:
                got.add(inv)
                frontier.append(inv)
        return tuple(sorted(got))

    subs = {(0,)}
    for g in range(order):
        subs.add(closure((g,)))
    while True:
        new = set()
        for S in subs:
            for g in range(order):
                if g not in S:
                    T = closure(S + (g,))
                    if T not in subs:
                        new.add(T)
        if not new:
            break
        subs |= new
        if len(subs) > 512:
            raise InternalCheckError("subgroup enumeration exceeded 512 subgroups")
    return tuple(sorted(subs))


@lru_cache(maxsize=None)
def torus_types(spec):
    """Distinct torus stabilizer types over block support patterns."""
    nb = len(spec.blocks)
    if nb > 16:
        raise InternalCheckError("too many torus blocks for exhaustive patterns")
    seen = {}
    for mask in range(1 << nb):
        rows = tuple(spec.weight_column(j) for j in range(nb) if mask >> j & 1)
        canon = rl.lattice_canon(rows)
        if canon not in seen:
            seen[canon] = canon
    return tuple(sorted(seen))


def candidate_subgroups(spec):
    """Every product subgroup that can occur as a stabilizer."""
    out = []
    seen = set()
    for fin in f_subgroups(spec):
        for canon in torus_types(spec):
            H = make_subgroup(spec, fin, canon)
            key = (H.finite_part, H.constraints)
            if key not in seen:
                seen.add(key)
                out.append(H)
    return tuple(out)


def structural_label(spec, H: ClosedSubgroup) -> str:
    """Readable label from the isomorphism-ish shape of the subgroup.

    The whole group is "G" and the trivial subgroup is "1"; otherwise the
    finite part contributes Z<order> or F<order> and the torus part
    contributes S1 / T<dim> plus one Z<d> per nontrivial invariant factor.
    """
    if is_trivial(H):
        return "1"
    if is_full_group(spec, H):
        return "G"
    parts = []
    if H.finite_order > 1:
        parts.append(
            ("Z%d" if _is_cyclic(spec, H.finite_part) else "F%d") % H.finite_order
        )
    if H.torus_dim == 1:
        parts.append("S1")
    elif H.torus_dim > 1:
        parts.append("T%d" % H.torus_dim)
    for d in rl.snf_diagonal(H.constraints):
        if d > 1:
            parts.append("Z%d" % d)
    return "x".join(parts)


def _is_cyclic(spec, finite_part):
    want = set(finite_part)
    for a in finite_part:
        got = {0}
        x = a
        while x not in got:
            got.add(x)
            x = spec.mult[x][a]
        if got == want:
            return True
    return False
