"""Command line front end.

Four subcommands over one loaded action document: `lattice` prints the
isotropy classes and their order, `reduce` prints the piece table and the
three decomposition lattices, `verify` runs the sampling checks, and
`export-dot` renders one lattice as a DOT digraph.  Reports go to --out as
JSON; a short human summary always goes to stdout.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import dot as dotmod
from . import groups, harness, lattice as latmod, momentum, report, strata
from .errors import ParseError, StratakitError, VerificationFailure


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stratakit",
        description="Orbit-type lattices and the zero-momentum reduced space "
        "of a finite-times-torus action.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("lattice", "isotropy classes, witnesses, and the class order"),
        ("reduce", "pieces of the reduced space and all decomposition lattices"),
        ("verify", "sampling checks: fiber classes, relations, regions"),
        ("export-dot", "write one decomposition lattice as a DOT digraph"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("spec", help="path to an action document (JSON)")
        p.add_argument(
            "--seed",
            type=int,
            default=None,
            help="sampling seed (default: STRATAKIT_SEED or 42)",
        )
        p.add_argument(
            "--samples",
            type=int,
            default=10000,
            help="sampling budget (verify: per witness; a tenth per piece "
            "for region draws)",
        )
        p.add_argument(
            "--tol",
            type=float,
            default=1e-9,
            help="comparison tolerance for verification checks",
        )
        p.add_argument("--out", default=None, help="write the report/graph here")
        if name == "export-dot":
            p.add_argument(
                "--which",
                default="coisotropic",
                help="symplectic | coisotropic | secondary:<class-id>",
            )
    return parser


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    raw = os.environ.get("STRATAKIT_SEED")
    if raw is None:
        return 42
    try:
        return int(raw)
    except ValueError:
        raise ParseError("STRATAKIT_SEED must be an integer, got %r" % raw) from None


def _validate(args) -> None:
    if args.samples < 1:
        raise ParseError("--samples must be at least 1")
    if not args.tol > 0:
        raise ParseError("--tol must be positive")


def _vec(v) -> str:
    return "(%s)" % ", ".join(str(x) for x in report.encode(tuple(v)))


def _maybe_write(doc, args) -> None:
    if args.out:
        report.write(doc, args.out)


def cmd_lattice(spec, args) -> int:
    lat = latmod.build_lattice(spec, seed=_seed(args))
    print("classes: %d" % len(lat.classes))
    for s in lat.strata:
        print(
            "  %s: dim %d, quotient %d, witness %s"
            % (s.cls.id, s.dim_stratum, s.dim_quotient, _vec(s.witness))
        )
    edges = ", ".join("%s < %s" % e for e in sorted(lat.hasse_edges))
    print("hasse: %s" % (edges or "none"))
    print("principal: %s" % lat.principal)
    doc = report.empty("lattice")
    doc["classes"] = report.classes_block(lat)
    doc["strata"] = report.strata_block(lat)
    doc["lattices"]["isotropy"] = report.isotropy_block(lat)
    _maybe_write(doc, args)
    return 0


def cmd_reduce(spec, args) -> int:
    lat = latmod.build_lattice(spec, seed=_seed(args))
    sym, secondary, coiso = strata.all_lattices(lat)
    finer, strict = strata.refinement_check(coiso, sym)
    print("pieces: %d" % len(coiso.nodes))
    for p in coiso.nodes:
        print(
            "  %s: dim %d, ambient %d, rank %d, %s"
            % (p.label, p.dim_W, p.dim_V, p.rank, p.classification)
        )
    print("edges: %d" % len(coiso.edges))
    print("open dense: %s" % coiso.open_dense)
    print("refinement: finer=%s strict=%s" % (finer, strict))
    doc = report.empty("reduce")
    doc["classes"] = report.classes_block(lat)
    doc["strata"] = report.strata_block(lat)
    doc["pieces"] = report.pieces_block(coiso)
    doc["lattices"]["isotropy"] = report.isotropy_block(lat)
    doc["lattices"]["symplectic"] = report.strat_lattice_block(sym)
    doc["lattices"]["coisotropic"] = report.strat_lattice_block(coiso)
    for cid, sec in secondary.items():
        doc["lattices"][sec.kind] = report.strat_lattice_block(sec)
    doc["checks"]["coisotropy_identity"] = {"ok": True}
    doc["checks"]["refinement"] = {"finer": finer, "strict": strict}
    _maybe_write(doc, args)
    return 0


def cmd_verify(spec, args) -> int:
    seed = _seed(args)
    lat = latmod.build_lattice(spec, seed=seed)
    checks = {}
    failed = []

    fiber = {}
    for s in lat.strata:
        observed = momentum.sample_fiber_classes(spec, s.witness, args.samples, seed=seed)
        got = sorted(c.id for c in observed)
        want = list(lat.down_set(s.cls.id))
        ok = got == want
        fiber[s.cls.id] = {
            "witness": report.encode(s.witness),
            "observed": got,
            "expected": want,
            "ok": ok,
        }
        if not ok:
            failed.append("fiber_down_set:%s" % s.cls.id)
    checks["fiber_down_sets"] = fiber
    print(
        "fiber down-sets: %s (%d witnesses)"
        % ("ok" if not failed else "FAIL", len(fiber))
    )

    fx = spec.fixtures or {}
    labels_ok = True
    if "expected_classes" in fx:
        want = sorted(str(x) for x in fx["expected_classes"])
        got = sorted(c.id for c in lat.classes)
        labels_ok = want == got
        checks["expected_classes"] = {"expected": want, "observed": got, "ok": labels_ok}
        if not labels_ok:
            failed.append("expected_classes")
        print("expected classes: %s" % ("ok" if labels_ok else "FAIL (%s != %s)" % (got, want)))

    if spec.relations:
        Z = harness.sample_zero_level(spec, args.samples, seed=seed)
        rel = harness.check_relations(harness.invariant_set(spec), Z, tol=args.tol)
        checks["relations"] = rel
        if not rel["ok"]:
            failed += [
                "relation:%s" % nm
                for nm, entry in sorted(rel["relations"].items())
                if not entry["ok"]
            ]
        print(
            "relations: max residual %.3g, %s"
            % (rel["max_residual"], "ok" if rel["ok"] else "FAIL")
        )
    else:
        checks["relations"] = "skipped"
        print("relations: skipped")

    if fx.get("region_model") == "double_cone" and labels_ok:
        reg = harness.verify_piece_regions(
            spec, budget=max(1, args.samples // 10), seed=seed
        )
        checks["piece_regions"] = reg
        if not reg["ok"]:
            failed += [
                "piece_region:%s" % lab
                for lab, entry in sorted(reg["pairs"].items())
                if not entry["ok"]
            ]
        hits = sum(e["ok"] for e in reg["pairs"].values())
        print("piece regions: %d/%d ok" % (hits, len(reg["pairs"])))
    else:
        checks["piece_regions"] = "skipped"
        print("piece regions: skipped")

    doc = report.empty("verify")
    doc["classes"] = report.classes_block(lat)
    doc["strata"] = report.strata_block(lat)
    doc["checks"] = checks
    _maybe_write(doc, args)
    if failed:
        raise VerificationFailure("failed checks: %s" % ", ".join(failed))
    return 0


def cmd_export_dot(spec, args) -> int:
    lat = latmod.build_lattice(spec, seed=_seed(args))
    which = args.which
    if which == "symplectic":
        latt = strata.symplectic_lattice(lat)
    elif which == "coisotropic":
        latt = strata.coisotropic_lattice(lat)
    elif which.startswith("secondary:"):
        latt = strata.secondary_lattice(lat, which.split(":", 1)[1])
    else:
        raise ParseError(
            "--which must be symplectic, coisotropic, or secondary:<class-id>"
        )
    text = dotmod.dot_graph(latt)
    if args.out:
        report.write_text(text, args.out)
    else:
        sys.stdout.write(text)
    return 0


_COMMANDS = {
    "lattice": cmd_lattice,
    "reduce": cmd_reduce,
    "verify": cmd_verify,
    "export-dot": cmd_export_dot,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _validate(args)
        spec = groups.load_spec_file(args.spec)
        return _COMMANDS[args.command](spec, args)
    except StratakitError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
