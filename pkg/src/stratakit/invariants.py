"""Polynomials given as exponent/coefficient data, over points of R^{2n}.

An invariant polynomial is stored as a list of (coefficient, multi-index)
terms in the 2n variables (x_1..x_n, y_1..y_n). A relation is a polynomial
in the *named* invariant values, either an identity (kind "zero") or a sign
constraint (kind "nonneg").
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ParseError
from .ratlin import frac


@dataclass(frozen=True)
class Invariant:
    name: str
    terms: tuple  # ((coeff, exponents), ...) with exponents a tuple of ints


@dataclass(frozen=True)
class Relation:
    name: str
    kind: str  # "zero" | "nonneg"
    terms: tuple  # ((coeff, ((invariant_name, exp), ...)), ...)


def parse_invariants(raw, n):
    if not isinstance(raw, list):
        raise ParseError("invariants must be a list")
    out = []
    seen = set()
    for item in raw:
        if not isinstance(item, dict) or "name" not in item or "terms" not in item:
            raise ParseError("invariant entries need 'name' and 'terms'")
        name = item["name"]
        if not isinstance(name, str) or not name:
            raise ParseError("invariant name must be a nonempty string")
        if name in seen:
            raise ParseError("duplicate invariant name %r" % name)
        seen.add(name)
        terms = []
        for t in item["terms"]:
            try:
                coeff, exps = t
            except (TypeError, ValueError):
                raise ParseError("invariant term must be [coeff, exponents]") from None
            exps = tuple(int(e) for e in exps)
            if len(exps) != 2 * n or any(e < 0 for e in exps):
                raise ParseError(
                    "invariant %r: exponent vector must have %d nonnegative entries"
                    % (name, 2 * n)
                )
            terms.append((_coeff(coeff, name), exps))
        out.append(Invariant(name, tuple(terms)))
    return tuple(out)


def parse_relations(raw, invariant_names):
    if not isinstance(raw, list):
        raise ParseError("relations must be a list")
    out = []
    for item in raw:
        if not isinstance(item, dict) or "name" not in item or "terms" not in item:
            raise ParseError("relation entries need 'name' and 'terms'")
        name = item["name"]
        kind = item.get("kind", "zero")
        if kind not in ("zero", "nonneg"):
            raise ParseError("relation %r: kind must be 'zero' or 'nonneg'" % name)
        terms = []
        for t in item["terms"]:
            try:
                coeff, mono = t
            except (TypeError, ValueError):
                raise ParseError("relation term must be [coeff, monomial]") from None
            if not isinstance(mono, dict):
                raise ParseError("relation monomial must map invariant names to powers")
            for nm in mono:
                if nm not in invariant_names:
                    raise ParseError("relation %r uses unknown invariant %r" % (name, nm))
            mono = tuple(sorted((nm, int(e)) for nm, e in mono.items()))
            terms.append((_coeff(coeff, name), mono))
        out.append(Relation(name, kind, tuple(terms)))
    return tuple(out)


def _coeff(c, ctx):
    try:
        return frac(c)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ParseError("bad rational coefficient %r in %r" % (c, ctx)) from None


def eval_invariant(inv, z):
    """Evaluate at a point; exact when every coordinate is a Fraction."""
    total = Fraction(0)
    for coeff, exps in inv.terms:
        term = coeff
        for zi, e in zip(z, exps):
            if e:
                term = term * zi**e
        total = total + term
    return total


def eval_invariant_batch(inv, Z):
    """Vectorized float evaluation over an (N, 2n) array."""
    total = np.zeros(len(Z))
    for coeff, exps in inv.terms:
        term = np.full(len(Z), float(coeff))
        for i, e in enumerate(exps):
            if e:
                term = term * Z[:, i] ** e
        total += term
    return total


def eval_relation(rel, values):
    """Evaluate a relation polynomial on a dict of invariant values."""
    first = next(iter(values.values()))
    total = np.zeros_like(first, dtype=float) if isinstance(first, np.ndarray) else Fraction(0)
    for coeff, mono in rel.terms:
        term = coeff if not isinstance(first, np.ndarray) else float(coeff)
        for name, e in mono:
            term = term * values[name] ** e
        total = total + term
    return total
