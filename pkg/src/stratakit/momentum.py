"""Momentum map of the cotangent lift and the fiber structure of J^-1(0).

Covectors are identified with vectors through the Euclidean inner product,
which is invariant because the action is orthogonal. The zero fiber over a
base point is the annihilator of the orbit tangent, and splits into the
part dual to the fixed slice plus the conormal part.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from . import groups, lattice as latmod, ratlin as rl, subgroups as sg
from .errors import DimensionMismatch, InternalCheckError
from .kernels import classify_batch


@dataclass(frozen=True)
class MomentumValue:
    components: tuple

    def norm(self) -> float:
        return max((abs(float(c)) for c in self.components), default=0.0)


@dataclass(frozen=True)
class FiberDecomposition:
    """J_m^-1(0) = (dual of the fixed slice) + (conormal of the stratum)."""

    base_point: tuple
    subgroup: sg.ClosedSubgroup
    cotangent_part: tuple
    conormal_part: tuple
    annihilator: tuple


def momentum(spec, m, p) -> MomentumValue:
    if len(m) != spec.n or len(p) != spec.n:
        raise DimensionMismatch("expected two vectors of length %d" % spec.n)
    comps = tuple(
        rl.dot(p, rl.mat_vec(K, m)) for K in groups.torus_generator_matrices(spec)
    )
    return MomentumValue(comps)


def fiber_zero_basis(spec, m):
    """Orthogonal rational basis of the annihilator of the orbit tangent."""
    m = _rat(m)
    rows = tuple(
        rl.mat_vec(K, m) for K in groups.torus_generator_matrices(spec)
    )
    return rl.gram_schmidt(rl.nullspace(rows, n=spec.n))


def fiber_decomposition(spec, m) -> FiberDecomposition:
    m = _rat(m)
    sd = latmod.slice_at(spec, m)
    H = sg.stabilizer(spec, m)
    if not rl.spans_equal(sd.slice, sd.slice_fixed + sd.normal):
        raise InternalCheckError("fiber splitting does not span the annihilator")
    return FiberDecomposition(
        base_point=m,
        subgroup=H,
        cotangent_part=sd.slice_fixed,
        conormal_part=sd.normal,
        annihilator=sd.slice,
    )


def conormal_orbit_types(spec, H: sg.IsotropyClass):
    """Classes realized on the conormal bundle: the down-set of H."""
    lat = latmod.build_lattice(spec)
    return frozenset(lat.class_by_id(i) for i in lat.down_set(H.id))


def sample_fiber_classes(spec, m, budget, seed=42):
    """Classes of (m, p) over `budget` covectors p in the zero fiber at m.

    Directed draws along each candidate fixed subspace come first so that
    every realizable class is found deterministically; the remaining budget
    is spent on quasi-uniform draws from the unit ball of the annihilator,
    classified in bulk by the integer kernel.
    """
    if budget < 1:
        raise ValueError("budget must be positive")
    m = _rat(m)
    lat = latmod.build_lattice(spec)
    H = sg.stabilizer(spec, m)
    here = lat.classify_subgroup(H)
    down = set(lat.down_set(here.id))
    ann = fiber_zero_basis(spec, m)
    rng = random.Random(seed)

    # the zero covector is in every fiber and realizes the class of H itself,
    # which otherwise sits in a measure-zero corner no draw would hit
    observed = {lat.classify_pair(m, (0,) * spec.n).id}
    spent = 1
    for V in _directed_targets(spec, lat, H, ann):
        quota = max(1, min(25, budget // 8))
        for _ in range(quota):
            if spent >= budget:
                break
            coeffs = [Fraction(rng.randrange(-9, 10), rng.randrange(1, 8))
                      for _ in V]
            p = _combo(coeffs, V, spec.n)
            observed.add(lat.classify_pair(m, p).id)
            spent += 1

    bulk = budget - spent
    if bulk > 0:
        observed |= _bulk_classes(spec, lat, m, H, ann, bulk, rng)

    stray = observed - down
    if stray:
        raise InternalCheckError(
            "sampled classes %s are not below %s" % (sorted(stray), here.id)
        )
    return frozenset(lat.class_by_id(i) for i in sorted(observed))


def _rat(v):
    return tuple(x if isinstance(x, (int, Fraction)) else Fraction(x) for x in v)


def _combo(coeffs, basis, n):
    return tuple(
        sum((c * b[i] for c, b in zip(coeffs, basis)), Fraction(0))
        for i in range(n)
    )


def _directed_targets(spec, lat, H, ann):
    """Fix(L') intersected with the annihilator, one per subgroup L' <= H
    conjugate to a realized class."""
    out = []
    seen = set()
    for cls in lat.classes:
        rep = cls.representative
        for f in range(spec.finite_order):
            L = sg.ClosedSubgroup(
                sg.conjugate_finite(spec, f, rep.finite_part),
                rep.constraints,
                rep.torus_dim,
                rep.torus_components,
            )
            key = (L.finite_part, L.constraints)
            if key in seen or not sg.subgroup_contains(spec, H, L):
                continue
            seen.add(key)
            V = rl.intersect_spans(sg.fixed_subspace(spec, L), ann, spec.n)
            if V:
                out.append(rl.gram_schmidt(V))
    return out


def _bulk_classes(spec, lat, m, H, ann, count, rng):
    n = spec.n
    if not ann:
        # the orbit tangent fills R^n, the only covector in the fiber is 0
        return {lat.classify_pair(m, (0,) * n).id}
    W = [_inf_normalize(v) for v in ann]
    norms2 = [rl.dot(w, w) for w in W]
    B = 64
    coeff_rows = []
    for _ in range(count):
        for _ in range(200):
            c = [rng.randrange(-B, B + 1) for _ in W]
            if sum(ci * ci * n2 for ci, n2 in zip(c, norms2)) <= B * B:
                break
        else:
            c = [0] * len(W)
        coeff_rows.append(c)
    Wint, _ = _int_rows(W)
    P_rows = [
        [sum(ci * wi[j] for ci, wi in zip(c, Wint)) for j in range(n)]
        for c in coeff_rows
    ]
    return _classify_int_rows(spec, lat, m, H, P_rows)


def _inf_normalize(v):
    scale = max(abs(x) for x in v)
    return tuple(x / scale for x in v)


def _int_rows(vectors):
    """Clear one common denominator across a list of rational vectors."""
    den = lcm(*(x.denominator for v in vectors for x in v))
    out = [[int(x * den) for x in v] for v in vectors]
    return out, den


def _classify_int_rows(spec, lat, m, H, P_rows):
    """Class ids for integer covector rows at a fixed base point."""
    n = spec.n
    Hf = H.finite_part
    intAs = []
    dens = []
    for f in Hf:
        flat = [x for row in spec.elements[f] for x in row]
        ints, d = rl.clear_denominators(flat)
        intAs.append([list(ints[i * n:(i + 1) * n]) for i in range(n)])
        dens.append(d)
    m_active = [not (m[r] == 0 and m[t] == 0) for (r, t) in spec.blocks]
    in_block = {i for b in spec.blocks for i in b}
    nonblock = [i for i in range(n) if i not in in_block]

    max_p = max((abs(x) for row in P_rows for x in row), default=0)
    max_d = max(dens, default=1)
    if 2 * (n * max_d * max_p) ** 2 >= 2 ** 63:
        return _classify_exact(spec, lat, m, P_rows)

    fin, slow = classify_batch(
        np.array(intAs, dtype=np.int64).reshape(len(Hf), n, n),
        np.array(dens, dtype=np.int64),
        np.array(P_rows, dtype=np.int64).reshape(len(P_rows), n),
        np.array(spec.blocks, dtype=np.int64).reshape(len(spec.blocks), 2),
        np.array(nonblock, dtype=np.int64),
        np.array(m_active, dtype=np.uint8),
    )
    out = set()
    cache = {}
    for s, row in enumerate(P_rows):
        if slow[s]:
            p = tuple(Fraction(x) for x in row)
            out.add(lat.classify_pair(m, p).id)
            continue
        elems = tuple(Hf[i] for i in range(len(Hf)) if fin[s, i])
        active = tuple(
            j for j, (r, t) in enumerate(spec.blocks)
            if m_active[j] or row[r] != 0 or row[t] != 0
        )
        key = (elems, active)
        if key not in cache:
            sub = sg.make_subgroup(
                spec, elems, [spec.weight_column(j) for j in active]
            )
            cache[key] = lat.classify_subgroup(sub).id
        out.add(cache[key])
    return out


def _classify_exact(spec, lat, m, P_rows):
    out = set()
    for row in P_rows:
        p = tuple(Fraction(x) for x in row)
        out.add(lat.classify_pair(m, p).id)
    return out
