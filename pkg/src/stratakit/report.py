"""Structured JSON reports with a stable layout.

Every command emits one document with the same top-level keys (schema,
command, classes, strata, pieces, lattices, checks); sections a command does
not produce stay empty.  Rational numbers appear as "p/q" strings (plain
integers when the denominator is one), keys are sorted, and files are
written to a temporary name and renamed so a failed run never leaves a
partial file.
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction

SCHEMA = 1


def encode(x):
    """JSON-safe copy of nested report data; exact rationals as strings."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return int(x)
        return "%d/%d" % (x.numerator, x.denominator)
    if isinstance(x, bool) or x is None or isinstance(x, (int, float, str)):
        return x
    if isinstance(x, dict):
        return {str(k): encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        seq = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [encode(v) for v in seq]
    raise TypeError("cannot encode %r in a report" % type(x))


def empty(command: str) -> dict:
    return {
        "schema": SCHEMA,
        "command": command,
        "classes": {},
        "strata": {},
        "pieces": {},
        "lattices": {},
        "checks": {},
    }


def classes_block(lat) -> dict:
    return {
        c.id: {
            "torus_dim": c.dim,
            "finite_order": c.finite_order,
            "torus_components": c.torus_components,
        }
        for c in lat.classes
    }


def strata_block(lat) -> dict:
    return {
        s.cls.id: {
            "witness": encode(s.witness),
            "dim_stratum": s.dim_stratum,
            "dim_quotient": s.dim_quotient,
        }
        for s in lat.strata
    }


def isotropy_block(lat) -> dict:
    return {
        "kind": "isotropy",
        "hasse_edges": [list(e) for e in sorted(lat.hasse_edges)],
        "principal": lat.principal,
    }


def strat_lattice_block(latt) -> dict:
    return {
        "kind": latt.kind,
        "nodes": {nd.label: nd.dim for nd in latt.nodes},
        "edges": [list(e) for e in sorted(latt.edges)],
        "open_dense": latt.open_dense,
    }


def pieces_block(coiso) -> dict:
    return {
        p.label: {
            "upper": p.pair.upper.id,
            "lower": p.pair.lower.id,
            "kind": p.kind,
            "dim_W": p.dim_W,
            "dim_V": p.dim_V,
            "rank": p.rank,
            "classification": p.classification,
        }
        for p in coiso.nodes
    }


def render(doc: dict) -> str:
    return json.dumps(encode(doc), sort_keys=True, indent=2) + "\n"


def write_text(text: str, path: str) -> None:
    """Atomic write: temp file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-report-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write(doc: dict, path: str) -> None:
    write_text(render(doc), path)
