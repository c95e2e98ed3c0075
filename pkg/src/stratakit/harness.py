"""Sampling-based verification of the reduced space against a region model.

Three layers: residuals of the declared polynomial relations on seeded
zero-momentum draws, region classification of zero-level points through the
invariant map, and constructed per-piece samples that must land in the
cone-region product belonging to their class pair with the right local
dimension.

Region classification is fixture-driven.  The only built-in model is the
double cone (one flip-symmetric plane block plus one weight-one circle
block on a line); operations gated on it raise NotExampleSpec for specs
without that fixture.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import groups, invariants as invs, lattice as latmod, ratlin as rl
from . import strata, subgroups as sg
from .errors import (
    DimensionMismatch,
    InternalCheckError,
    NotExampleSpec,
    NotOnZeroLevel,
)


@dataclass(frozen=True)
class InvariantSet:
    polynomials: tuple
    relations: tuple
    tolerance: float


def invariant_set(spec) -> InvariantSet:
    return InvariantSet(spec.invariants, spec.relations, spec.tolerance)


@dataclass(frozen=True)
class ConeRegion:
    cone: int
    label: str  # "V" vertex, "E" edge line, "B" backward line, "I" interior

    @property
    def broad(self) -> str:
        """Label with the backward line folded into the interior."""
        return "I" if self.label == "B" else self.label


def eval_invariants(inv: InvariantSet, z) -> dict:
    """Invariant name -> value at one phase point; exact on rational input."""
    out = {}
    for poly in inv.polynomials:
        if poly.terms and len(z) != len(poly.terms[0][1]):
            raise DimensionMismatch(
                "point has %d coordinates, %r wants %d"
                % (len(z), poly.name, len(poly.terms[0][1]))
            )
        out[poly.name] = invs.eval_invariant(poly, z)
    return out


def check_relations(inv: InvariantSet, samples, tol=None) -> dict:
    """Residual report for every relation over an (N, 2n) sample array.

    Identities report the largest and mean absolute residual, sign
    constraints the largest violation; each entry is flagged ok iff its
    maximum stays within tolerance.
    """
    if len(samples) == 0:
        raise ValueError("need at least one sample")
    tol = inv.tolerance if tol is None else float(tol)
    Z = np.asarray(samples, dtype=float)
    values = {p.name: invs.eval_invariant_batch(p, Z) for p in inv.polynomials}
    report = {}
    worst = 0.0
    for rel in inv.relations:
        vals = invs.eval_relation(rel, values)
        res = np.abs(vals) if rel.kind == "zero" else np.maximum(0.0, -vals)
        mx = float(res.max())
        report[rel.name] = {
            "kind": rel.kind,
            "max_residual": mx,
            "mean_residual": float(res.mean()),
            "ok": mx <= tol,
        }
        worst = max(worst, mx)
    return {
        "relations": report,
        "max_residual": worst,
        "ok": all(r["ok"] for r in report.values()),
    }


def sample_zero_level(spec, budget, seed=42):
    """Seeded (budget, 2n) array of zero-momentum phase points.

    Base points are uniform in the unit ball; covectors are ball draws
    pushed onto the annihilator of the orbit tangent by orthogonal
    projection (so their distribution is a projected ball, supported on the
    whole fiber ball).
    """
    if budget < 1:
        raise ValueError("budget must be positive")
    rng = np.random.default_rng(seed)
    m = _ball(rng, budget, spec.n)
    q = _ball(rng, budget, spec.n)
    if spec.k == 0:
        p = q
    else:
        Kf = np.array(
            [
                [[float(x) for x in row] for row in K]
                for K in groups.torus_generator_matrices(spec)
            ]
        )
        A = np.einsum("iab,Nb->Nia", Kf, m)
        p = q - (np.linalg.pinv(A) @ (A @ q[:, :, None]))[:, :, 0]
        res = float(np.abs(np.einsum("Nia,Na->Ni", A, p)).max(initial=0.0))
        if res > spec.tolerance:
            raise InternalCheckError(
                "projected covectors leave the zero level by %g" % res
            )
    return np.concatenate([m, p], axis=1)


def _ball(rng, count, dim):
    x = rng.standard_normal((count, dim))
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return x / norms * rng.random((count, 1)) ** (1.0 / dim)


_CONE_NAMES = ("sigma1", "sigma2", "sigma3", "rho1", "rho2", "rho3", "j")

# cone-region product of each class pair in the double-cone model
_DOUBLE_CONE_REGIONS = {
    ("1", "1"): ("I", "I"),
    ("Z2", "Z2"): ("I", "V"),
    ("S1", "S1"): ("V", "I"),
    ("G", "G"): ("V", "V"),
    ("Z2", "1"): ("I", "E"),
    ("S1", "1"): ("E", "I"),
    ("G", "1"): ("E", "E"),
    ("G", "Z2"): ("E", "V"),
    ("G", "S1"): ("V", "E"),
}


def _require_double_cone(spec):
    fx = spec.fixtures or {}
    if fx.get("region_model") != "double_cone":
        raise NotExampleSpec("this operation needs the double-cone region model")
    names = {p.name for p in spec.invariants}
    if not set(_CONE_NAMES) <= names:
        raise NotExampleSpec(
            "double-cone model needs invariants %s" % (sorted(_CONE_NAMES),)
        )


def classify_image(spec, z, tol=None):
    """(cone-1 region, cone-2 region) of a zero-level point under the
    invariant map of the double-cone model.

    Cone 1 carries the plane-block invariants, cone 2 the line-block ones.
    Boundary tests use the band tol*(1 + apex_value) so exact rational
    points never straddle a line.
    """
    _require_double_cone(spec)
    tol = spec.tolerance if tol is None else float(tol)
    vals = eval_invariants(invariant_set(spec), tuple(z))
    if abs(vals["j"]) > tol:
        raise NotOnZeroLevel("j = %s, not zero within %g" % (vals["j"], tol))
    return (
        ConeRegion(1, _cone_label(vals["sigma1"], vals["sigma3"], tol)),
        ConeRegion(2, _cone_label(vals["rho1"], vals["rho3"], tol)),
    )


def _cone_label(c1, c3, tol):
    band = tol * (1.0 + float(c1))
    if c1 <= band:
        return "V"
    if abs(c1 - c3) <= band:
        return "E"
    if abs(c1 + c3) <= band:
        return "B"
    return "I"


class PieceSampler:
    """Exact, class-checked draws from one piece of the zero momentum level.

    A draw picks a base point whose stabilizer is exactly the upper
    representative, a covector part along the fixed slice, and for seams a
    conormal part along the fixed subspace of a lower-class subgroup; the
    pair class is recomputed exactly and wrong draws are rejected.
    """

    def __init__(self, spec, lat, pair):
        self.spec = spec
        self.lat = lat
        self.pair = pair
        self.upper_rep = lat.class_by_id(pair.upper.id).representative
        self.base_basis = sg.fixed_subspace(spec, self.upper_rep)
        self.Ks = groups.torus_generator_matrices(spec)
        self.lower_fix = None if pair.diagonal else self._pick_conormal_subgroup()

    def draw(self, rng):
        """((base coeffs, slice coeffs, conormal coeffs), (m, p)), exact."""
        for _ in range(60):
            got = self._attempt(rng)
            if got is not None:
                return got
        raise InternalCheckError(
            "no draw of class %s over %s in 60 attempts"
            % (self.pair.lower.id, self.pair.upper.id)
        )

    def build(self, coeffs):
        """Rebuild a phase point from given coefficients; None if it falls
        off the piece (wrong stabilizer or wrong pair class)."""
        mc, ac, bc = coeffs
        m = _combo(mc, self.base_basis, self.spec.n)
        if sg.stabilizer(self.spec, m) != self.upper_rep:
            return None
        cot, bvecs = self._covector_bases(m)
        if len(ac) != len(cot) or len(bc) != len(bvecs):
            return None
        p = tuple(
            a + b
            for a, b in zip(
                _combo(ac, cot, self.spec.n), _combo(bc, bvecs, self.spec.n)
            )
        )
        if self.lat.classify_pair(m, p).id != self.pair.lower.id:
            return None
        return m, p

    def _attempt(self, rng, fix="unset"):
        if fix == "unset":
            fix = self.lower_fix
        mc = tuple(_coeff(rng) for _ in self.base_basis)
        m = _combo(mc, self.base_basis, self.spec.n)
        if sg.stabilizer(self.spec, m) != self.upper_rep:
            return None
        cot, bvecs = self._covector_bases(m, fix)
        ac = tuple(_coeff(rng) for _ in cot)
        bc = tuple(_coeff(rng) for _ in bvecs)
        p = tuple(
            a + b
            for a, b in zip(
                _combo(ac, cot, self.spec.n), _combo(bc, bvecs, self.spec.n)
            )
        )
        if self.lat.classify_pair(m, p).id != self.pair.lower.id:
            return None
        return (mc, ac, bc), (m, p)

    def _covector_bases(self, m, fix="unset"):
        """Orthogonal bases of the fixed-slice part and of the conormal
        target at a base point with exact stabilizer."""
        if fix == "unset":
            fix = self.lower_fix
        n = self.spec.n
        orbit = rl.gram_schmidt(tuple(rl.mat_vec(K, m) for K in self.Ks))
        slc = rl.orth_complement(orbit, n)
        cot = rl.gram_schmidt(rl.intersect_spans(self.base_basis, slc, n))
        if fix is None:
            return cot, ()
        normal = rl.orth_complement(orbit + cot, n)
        return cot, rl.gram_schmidt(rl.intersect_spans(fix, normal, n))

    def _pick_conormal_subgroup(self):
        """Fixed subspace of the first conjugate of the lower representative
        inside the upper subgroup whose generic conormal draws land on the
        lower class exactly."""
        rep = self.lat.class_by_id(self.pair.lower.id).representative
        cands = []
        seen = set()
        for f in range(self.spec.finite_order):
            L = sg.ClosedSubgroup(
                sg.conjugate_finite(self.spec, f, rep.finite_part),
                rep.constraints,
                rep.torus_dim,
                rep.torus_components,
            )
            key = (L.finite_part, L.constraints)
            if key in seen or not sg.subgroup_contains(self.spec, self.upper_rep, L):
                continue
            seen.add(key)
            cands.append(L)
        probe = random.Random(11)
        for L in cands:
            fix = sg.fixed_subspace(self.spec, L)
            if any(self._attempt(probe, fix) is not None for _ in range(8)):
                return fix
        raise InternalCheckError(
            "no conormal subgroup realizes class %s inside %s"
            % (self.pair.lower.id, self.pair.upper.id)
        )


def _coeff(rng):
    return Fraction(rng.randrange(-97, 98), rng.randrange(1, 98))


def _combo(coeffs, basis, n):
    return tuple(
        sum((c * b[i] for c, b in zip(coeffs, basis)), Fraction(0))
        for i in range(n)
    )


def local_dimension(spec, sampler: PieceSampler, rng, draws=30, h=Fraction(1, 10**10)):
    """Rank of the invariant-map image of a piece near one sample.

    Plain difference quotients: exact rational rebuilds at coefficient
    offsets of size h around a drawn center, differences scaled by 1/h, and
    singular values cut at 1e-8 of the largest (or of 1).  The offsets stay
    small enough that every rebuilt point keeps the exact pair class.
    """
    inv = invariant_set(spec)
    coeffs, (m0, p0) = sampler.draw(rng)
    v0 = eval_invariants(inv, m0 + p0)
    names = sorted(v0)
    rows = []
    tries = 0
    while len(rows) < draws:
        tries += 1
        if tries > 40 * draws:
            raise InternalCheckError("local dimension probe keeps leaving the piece")
        shifted = tuple(
            tuple(c + h * Fraction(rng.randrange(-9, 10), rng.randrange(1, 8)) for c in grp)
            for grp in coeffs
        )
        built = sampler.build(shifted)
        if built is None:
            continue
        m1, p1 = built
        v1 = eval_invariants(inv, m1 + p1)
        rows.append([float((v1[k] - v0[k]) / h) for k in names])
    M = np.array(rows)
    if not M.size or not M.any():
        return 0
    svals = np.linalg.svd(M, compute_uv=False)
    return int((svals > 1e-8 * max(1.0, float(svals[0]))).sum())


def verify_piece_regions(spec, budget=1000, seed=42) -> dict:
    """Constructed-sample check of every piece against the double-cone model.

    For each class pair: `budget` exact draws from the piece, classified
    through the invariant map and matched against the region product of
    that pair (backward lines count as interior), plus a local dimension
    estimate that must equal the piece dimension.
    """
    _require_double_cone(spec)
    if budget < 1:
        raise ValueError("budget must be positive")
    lat = latmod.build_lattice(spec)
    rng = random.Random(seed)
    out = {"pairs": {}, "ok": True}
    for pair in strata.connectable_pairs(lat):
        key = (pair.upper.id, pair.lower.id)
        if key not in _DOUBLE_CONE_REGIONS:
            raise NotExampleSpec("double-cone model has no region for pair %r" % (key,))
        piece = strata.piece_dimensions(pair, lat)
        expected = _DOUBLE_CONE_REGIONS[key]
        sampler = PieceSampler(spec, lat, pair)
        hits = 0
        for _ in range(budget):
            _, (m, p) = sampler.draw(rng)
            r1, r2 = classify_image(spec, m + p)
            hits += (r1.broad, r2.broad) == expected
        dim_est = local_dimension(spec, sampler, rng)
        entry = {
            "expected": list(expected),
            "samples": budget,
            "hits": hits,
            "region_ok": hits == budget,
            "local_dim": dim_est,
            "dim_W": piece.dim_W,
            "dim_ok": dim_est == piece.dim_W,
        }
        entry["ok"] = entry["region_ok"] and entry["dim_ok"]
        out["pairs"][piece.label] = entry
        out["ok"] = out["ok"] and entry["ok"]
    return out
