"""Isotropy classes of the base action, witnesses, slices, and the lattice.

Enumeration is exact: candidates are all products of an F-subgroup with a
block-pattern torus type, a candidate is realized iff no strictly larger
candidate has the same fixed subspace, and witnesses are random rational
points of the fixed subspace whose stabilizer is then recomputed exactly.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import groups, ratlin as rl, subgroups as sg
from .errors import (
    ClassNotFound,
    InternalCheckError,
    NoUniqueMinimum,
    WitnessSearchFailed,
)


@dataclass(frozen=True)
class SliceData:
    """Orthogonal splitting of R^n at a point: orbit, slice, and the
    H-fixed / normal split of the slice."""

    orbit_tangent: tuple
    slice: tuple
    slice_fixed: tuple
    normal: tuple


@dataclass(frozen=True)
class StratumInfo:
    cls: sg.IsotropyClass
    witness: tuple
    dim_stratum: int
    dim_quotient: int
    slice: SliceData


def slice_at(spec, m) -> SliceData:
    """Splitting T_m R^n = (orbit tangent) + (fixed slice) + (normal)."""
    m = _rationalize(m)
    H = sg.stabilizer(spec, m)
    orbit = rl.gram_schmidt(
        tuple(rl.mat_vec(K, m) for K in groups.torus_generator_matrices(spec))
    )
    slc = rl.orth_complement(orbit, spec.n)
    fix = sg.fixed_subspace(spec, H)
    fixed = rl.gram_schmidt(rl.intersect_spans(fix, slc, spec.n))
    normal = rl.orth_complement(orbit + fixed, spec.n)
    return SliceData(orbit, slc, fixed, normal)


def _rationalize(m):
    return tuple(x if isinstance(x, (int, Fraction)) else Fraction(x) for x in m)


def stratum_dimension(s: StratumInfo):
    return (s.dim_stratum, s.dim_quotient)


def enumerate_orbit_types(spec, seed=42):
    """One StratumInfo per realized isotropy class of the base action."""
    cands = sg.candidate_subgroups(spec)
    fixes = {i: sg.fixed_subspace(spec, H) for i, H in enumerate(cands)}
    realized = []
    for i, H in enumerate(cands):
        dead = any(
            len(fixes[j]) == len(fixes[i])
            and cands[j] != H
            and sg.subgroup_contains(spec, cands[j], H)
            for j in range(len(cands))
        )
        if not dead:
            realized.append(sg.canonical_subgroup(spec, H))
    # one representative per conjugacy class, ordered by canonical key
    by_key = {}
    for H in realized:
        by_key.setdefault((H.finite_part, H.constraints), H)
    reps = [by_key[k] for k in sorted(by_key)]
    ids = _assign_ids(spec, reps)
    rng = random.Random(seed)
    out = []
    for cid, H in zip(ids, reps):
        m = _find_witness(spec, H, rng)
        sd = slice_at(spec, m)
        dim_stratum = len(sd.orbit_tangent) + len(sd.slice_fixed)
        if dim_stratum != len(sg.fixed_subspace(spec, H)):
            raise InternalCheckError(
                "stratum dimension disagrees with the fixed subspace at %r" % (m,)
            )
        cls = sg.IsotropyClass(
            id=cid,
            representative=H,
            dim=H.torus_dim,
            finite_order=H.finite_order,
            torus_components=H.torus_components,
        )
        out.append(
            StratumInfo(
                cls=cls,
                witness=m,
                dim_stratum=dim_stratum,
                dim_quotient=dim_stratum - spec.k + H.torus_dim,
                slice=sd,
            )
        )
    return sorted(out, key=lambda s: s.cls.id)


def _assign_ids(spec, reps):
    """Structural labels, with a/b/... suffixes on collisions."""
    labels = [sg.structural_label(spec, H) for H in reps]
    counts = {}
    for lab in labels:
        counts[lab] = counts.get(lab, 0) + 1
    seen = {}
    out = []
    for lab in labels:
        if counts[lab] == 1:
            out.append(lab)
        else:
            i = seen.get(lab, 0)
            seen[lab] = i + 1
            out.append(lab + string.ascii_lowercase[i])
    return out


def _find_witness(spec, H, rng):
    basis = sg.fixed_subspace(spec, H)
    if not basis:
        if sg.stabilizer(spec, (0,) * spec.n) == H:
            return (Fraction(0),) * spec.n
        raise WitnessSearchFailed("origin stabilizer is not %r" % (H,))
    for _ in range(100):
        coeffs = [
            Fraction(rng.randrange(-97, 98), rng.randrange(1, 98)) for _ in basis
        ]
        m = tuple(
            sum(c * b[i] for c, b in zip(coeffs, basis)) for i in range(spec.n)
        )
        if sg.stabilizer(spec, m) == H:
            return m
    raise WitnessSearchFailed(
        "no witness found in 100 draws for candidate %r" % (H,)
    )


@dataclass(frozen=True, eq=False)
class IsotropyLattice:
    spec: object
    strata: tuple  # StratumInfo, sorted by class id
    order: tuple  # all strict pairs (lower_id, upper_id)
    hasse_edges: tuple  # transitive reduction of `order`
    principal: str

    @property
    def classes(self):
        return tuple(s.cls for s in self.strata)

    def class_by_id(self, cid) -> sg.IsotropyClass:
        for s in self.strata:
            if s.cls.id == cid:
                return s.cls
        raise ClassNotFound("no isotropy class %r" % cid)

    def stratum_by_id(self, cid) -> StratumInfo:
        for s in self.strata:
            if s.cls.id == cid:
                return s
        raise ClassNotFound("no isotropy class %r" % cid)

    def classify_subgroup(self, H) -> sg.IsotropyClass:
        key = sg.class_key(self.spec, H)
        for s in self.strata:
            if s.cls.key() == key:
                return s.cls
        raise ClassNotFound("subgroup %r is not a realized isotropy class" % (H,))

    def classify(self, m) -> sg.IsotropyClass:
        return self.classify_subgroup(sg.stabilizer(self.spec, m))

    def classify_pair(self, m, p) -> sg.IsotropyClass:
        return self.classify_subgroup(sg.stabilizer_pair(self.spec, m, p))

    def down_set(self, cid):
        """Ids of classes <= the given class, itself included."""
        below = {a for a, b in self.order if b == cid}
        below.add(self.class_by_id(cid).id)
        return tuple(sorted(below))

    def leq(self, low_id, high_id) -> bool:
        return low_id == high_id or (low_id, high_id) in self.order


def build_isotropy_lattice(spec, strata) -> IsotropyLattice:
    strata = tuple(sorted(strata, key=lambda s: s.cls.id))
    cls = {s.cls.id: s.cls for s in strata}
    ids = sorted(cls)
    order = tuple(
        (a, b)
        for a in ids
        for b in ids
        if a != b and sg.is_subconjugate(spec, cls[a], cls[b])
    )
    strict = set(order)
    for a, b in strict:
        if (b, a) in strict:
            raise InternalCheckError(
                "subconjugacy order is not antisymmetric between %s and %s" % (a, b)
            )
    hasse = tuple(
        (a, b)
        for a, b in order
        if not any((a, c) in strict and (c, b) in strict for c in ids)
    )
    minimal = [a for a in ids if not any((x, a) in strict for x in ids)]
    if len(minimal) != 1:
        raise NoUniqueMinimum("minimal classes: %s" % (minimal,))
    principal = minimal[0]
    if any((principal, b) not in strict for b in ids if b != principal):
        raise NoUniqueMinimum(
            "principal class %s is not below every other class" % principal
        )
    return IsotropyLattice(
        spec=spec,
        strata=strata,
        order=order,
        hasse_edges=hasse,
        principal=principal,
    )


@lru_cache(maxsize=None)
def build_lattice(spec, seed=42) -> IsotropyLattice:
    """Cached end-to-end construction for one loaded spec."""
    return build_isotropy_lattice(spec, enumerate_orbit_types(spec, seed))
