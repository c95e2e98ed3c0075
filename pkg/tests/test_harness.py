"""Invariant evaluation, zero-level sampling, cone-region classification,
and the constructed per-piece verifier."""

import random
from fractions import Fraction

import numpy as np
import pytest

from stratakit import groups, harness, invariants, lattice, momentum, strata
from stratakit.errors import (
    DimensionMismatch,
    NotExampleSpec,
    NotOnZeroLevel,
)

from conftest import load

EXPECTED_REGIONS = {
    "C_1": ("I", "I"),
    "C_Z2": ("I", "V"),
    "C_S1": ("V", "I"),
    "C_G": ("V", "V"),
    "S_Z2->1": ("I", "E"),
    "S_S1->1": ("E", "I"),
    "S_G->1": ("E", "E"),
    "S_G->Z2": ("E", "V"),
    "S_G->S1": ("V", "E"),
}

DIMS = {
    "C_1": 4, "C_Z2": 2, "C_S1": 2, "C_G": 0,
    "S_Z2->1": 3, "S_S1->1": 3, "S_G->1": 2, "S_G->Z2": 1, "S_G->S1": 1,
}


def iset(spec):
    return harness.invariant_set(spec)


def test_eval_invariants_worked_points(example_spec):
    vals = harness.eval_invariants(iset(example_spec), (1, 0, 0, 0, 1, 0))
    assert vals == {
        "sigma1": 2, "sigma2": 0, "sigma3": 0,
        "rho1": 0, "rho2": 0, "rho3": 0, "j": 1,
    }
    assert all(v == 0 for v in harness.eval_invariants(iset(example_spec), (0,) * 6).values())
    vals = harness.eval_invariants(iset(example_spec), (0, 0, 1, 0, 0, 1))
    assert (vals["rho1"], vals["rho2"], vals["rho3"]) == (2, 2, 0)
    assert vals["sigma1"] == vals["sigma2"] == vals["sigma3"] == vals["j"] == 0
    # exact rational output on rational input
    vals = harness.eval_invariants(iset(example_spec), tuple(Fraction(1, 3) for _ in range(6)))
    assert isinstance(vals["sigma1"], Fraction)
    assert vals["sigma1"] == Fraction(4, 9)


def test_eval_invariants_dimension_mismatch(example_spec):
    with pytest.raises(DimensionMismatch):
        harness.eval_invariants(iset(example_spec), (1, 0, 0))


def test_relation_identities_hold_exactly(example_spec):
    # expansion oracle: the two cone identities vanish identically on R^6,
    # not just on the zero level
    inv = iset(example_spec)
    rels = {r.name: r for r in inv.relations}
    rng = random.Random(5)
    for _ in range(10):
        z = tuple(Fraction(rng.randrange(-30, 31), rng.randrange(1, 12)) for _ in range(6))
        vals = harness.eval_invariants(inv, z)
        assert invariants.eval_relation(rels["cone_sigma"], vals) == 0
        assert invariants.eval_relation(rels["cone_rho"], vals) == 0
        assert invariants.eval_relation(rels["sigma1_nonneg"], vals) >= 0
        assert invariants.eval_relation(rels["rho1_nonneg"], vals) >= 0


def test_check_relations_bulk(example_spec):
    Z = harness.sample_zero_level(example_spec, 2000, seed=1)
    rep = harness.check_relations(iset(example_spec), Z)
    assert rep["ok"]
    assert rep["max_residual"] <= 1e-12
    assert set(rep["relations"]) == {
        "cone_sigma", "cone_rho", "sigma1_nonneg", "rho1_nonneg",
    }
    for entry in rep["relations"].values():
        assert 0.0 <= entry["mean_residual"] <= entry["max_residual"]


def test_check_relations_flags_violations(example_spec):
    bogus = invariants.Relation(
        "bogus", "zero", ((Fraction(1), (("sigma1", 1),)), (Fraction(-1), ()))
    )
    inv = harness.InvariantSet(
        example_spec.invariants, (bogus,), example_spec.tolerance
    )
    Z = harness.sample_zero_level(example_spec, 50, seed=2)
    rep = harness.check_relations(inv, Z)
    assert not rep["ok"]
    assert not rep["relations"]["bogus"]["ok"]
    with pytest.raises(ValueError):
        harness.check_relations(inv, np.zeros((0, 6)))


def test_sample_zero_level_basic(example_spec):
    Z = harness.sample_zero_level(example_spec, 500, seed=9)
    assert Z.shape == (500, 6)
    j = invariants.eval_invariant_batch(
        next(i for i in example_spec.invariants if i.name == "j"), Z
    )
    assert np.abs(j).max() <= 1e-12
    # both halves stay in the unit ball
    assert np.linalg.norm(Z[:, :3], axis=1).max() <= 1.0 + 1e-12
    assert np.linalg.norm(Z[:, 3:], axis=1).max() <= 1.0 + 1e-12
    assert np.array_equal(Z, harness.sample_zero_level(example_spec, 500, seed=9))
    assert harness.sample_zero_level(example_spec, 1, seed=0).shape == (1, 6)
    with pytest.raises(ValueError):
        harness.sample_zero_level(example_spec, 0)


def test_sample_zero_level_exact_momentum_check(example_spec):
    Z = harness.sample_zero_level(example_spec, 200, seed=4)
    for row in Z[:20]:
        J = momentum.momentum(example_spec, tuple(row[:3]), tuple(row[3:]))
        assert J.norm() <= 1e-12


def test_sample_zero_level_no_torus():
    # with no torus factor the covector is unconstrained
    Z = harness.sample_zero_level(load("z2z2_plane"), 100, seed=3)
    assert Z.shape == (100, 4)
    Z1 = harness.sample_zero_level(load("trivial"), 10, seed=3)
    assert Z1.shape == (10, 2)


def test_classify_image_worked_points(example_spec):
    r1, r2 = harness.classify_image(example_spec, (1, 0, 0, 1, 0, 0))
    assert (r1.label, r2.label) == ("I", "V")
    assert (r1.cone, r2.cone) == (1, 2)
    r1, r2 = harness.classify_image(example_spec, (1, 0, 0, 0, 0, 1))
    assert (r1.label, r2.label) == ("B", "E")
    assert (r1.broad, r2.broad) == ("I", "E")
    r1, r2 = harness.classify_image(example_spec, (0,) * 6)
    assert (r1.label, r2.label) == ("V", "V")


def test_classify_image_rejects_nonzero_momentum(example_spec):
    with pytest.raises(NotOnZeroLevel):
        harness.classify_image(example_spec, (1, 0, 0, 0, 1, 0))


def test_region_model_gating():
    with pytest.raises(NotExampleSpec):
        harness.classify_image(load("z2_line"), (1, 1))
    with pytest.raises(NotExampleSpec):
        harness.verify_piece_regions(load("s1_plane"), budget=1)


def test_classify_image_group_invariance(example_spec):
    # exact rational points on the zero level, exact quarter-turn elements
    spec = example_spec
    rng = random.Random(12)
    for _ in range(25):
        m = tuple(Fraction(rng.randrange(-20, 21), rng.randrange(1, 9)) for _ in range(3))
        basis = momentum.fiber_zero_basis(spec, m)
        coeffs = [Fraction(rng.randrange(-20, 21), rng.randrange(1, 9)) for _ in basis]
        p = tuple(
            sum((c * b[i] for c, b in zip(coeffs, basis)), Fraction(0))
            for i in range(3)
        )
        base = harness.classify_image(spec, m + p)
        for f in range(spec.finite_order):
            for quarter in range(4):
                g = groups.element(spec, f, (Fraction(quarter, 4),))
                gm, gp = groups.cotangent_act(spec, g, m, p)
                assert harness.classify_image(spec, gm + gp) == base


def test_distinct_regions_are_never_group_related(example_spec):
    # points whose cone classifications differ can not lie on one orbit;
    # bulk draws all land in the interior product, so constructed boundary
    # points provide the distinct labels
    spec = example_spec
    lat = lattice.build_lattice(spec)
    rng = random.Random(17)
    pts = []
    for pair in strata.connectable_pairs(lat):
        sampler = harness.PieceSampler(spec, lat, pair)
        _, (m, p) = sampler.draw(rng)
        pts.append(tuple(float(x) for x in m + p))
    Z = harness.sample_zero_level(spec, 20, seed=21)
    pts += [tuple(row) for row in Z]
    labels = [
        tuple(r.label for r in harness.classify_image(spec, z)) for z in pts
    ]
    angles = [t / 64 for t in range(64)]
    checked = 0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if labels[i] == labels[j]:
                continue
            Zi, Zj = np.array(pts[i]), np.array(pts[j])
            best = min(
                np.linalg.norm(
                    np.concatenate(
                        groups.cotangent_act(
                            spec,
                            groups.element(spec, f, (a,)),
                            tuple(Zi[:3]),
                            tuple(Zi[3:]),
                        )
                    ).astype(float)
                    - Zj
                )
                for f in range(spec.finite_order)
                for a in angles
            )
            assert best > 10 * spec.tolerance
            checked += 1
            if checked >= 40:
                return
    assert checked > 0


def test_piece_sampler_classes_are_exact(example_spec):
    lat = lattice.build_lattice(example_spec)
    pair = next(
        pr for pr in strata.connectable_pairs(lat)
        if pr.upper.id == "Z2" and pr.lower.id == "1"
    )
    sampler = harness.PieceSampler(example_spec, lat, pair)
    rng = random.Random(0)
    for _ in range(25):
        _, (m, p) = sampler.draw(rng)
        assert m[2] == 0 and p[2] != 0  # base in the plane, conormal off it
        assert lat.classify(m).id == "Z2"
        assert lat.classify_pair(m, p).id == "1"
        J = momentum.momentum(example_spec, m, p)
        assert all(c == 0 for c in J.components)


def test_piece_sampler_rebuild_matches_draw(example_spec):
    lat = lattice.build_lattice(example_spec)
    pair = next(
        pr for pr in strata.connectable_pairs(lat)
        if pr.upper.id == "G" and pr.lower.id == "S1"
    )
    sampler = harness.PieceSampler(example_spec, lat, pair)
    coeffs, (m, p) = sampler.draw(random.Random(6))
    assert sampler.build(coeffs) == (m, p)


def test_local_dimension_selected_pieces(example_spec):
    lat = lattice.build_lattice(example_spec)
    rng = random.Random(8)
    for upper, lower, want in (
        ("Z2", "1", 3), ("1", "1", 4), ("G", "G", 0), ("G", "Z2", 1),
    ):
        pair = next(
            pr for pr in strata.connectable_pairs(lat)
            if pr.upper.id == upper and pr.lower.id == lower
        )
        sampler = harness.PieceSampler(example_spec, lat, pair)
        assert harness.local_dimension(example_spec, sampler, rng) == want


def test_verify_piece_regions_small_budget(example_spec):
    rep = harness.verify_piece_regions(example_spec, budget=40, seed=3)
    assert rep["ok"]
    assert set(rep["pairs"]) == set(EXPECTED_REGIONS)
    for lab, entry in rep["pairs"].items():
        assert tuple(entry["expected"]) == EXPECTED_REGIONS[lab]
        assert entry["hits"] == entry["samples"] == 40
        assert entry["region_ok"] and entry["dim_ok"] and entry["ok"]
        assert entry["local_dim"] == entry["dim_W"] == DIMS[lab]
    with pytest.raises(ValueError):
        harness.verify_piece_regions(example_spec, budget=0)


def test_verify_piece_regions_deterministic(example_spec):
    a = harness.verify_piece_regions(example_spec, budget=15, seed=10)
    b = harness.verify_piece_regions(example_spec, budget=15, seed=10)
    assert a == b
