"""The group G = F x (S^1)^k, its representation on R^n, and the action-spec
document format.

Angles live as "turns" (fractions of a full rotation) so that quarter-turn
elements stay exact: a turn stored as a Fraction with denominator 1, 2 or 4
has a rational rotation matrix, anything else degrades to floats guarded by
the spec tolerance.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import invariants as _inv
from . import ratlin as rl
from .errors import (
    DimensionMismatch,
    IncompatibleBlocks,
    InfiniteFiniteGroup,
    NonOrthogonalGenerator,
    ParseError,
)


class GroupElement(NamedTuple):
    """An element (f, theta) of F x (S^1)^k.

    finite_part indexes the enumerated element list of F; torus_part is a
    tuple of k turns, each a Fraction (exact) or a float, normalized to
    [0, 1).
    """

    finite_part: int
    torus_part: tuple


@dataclass(frozen=True, eq=False)
class ActionSpec:
    """Parsed and validated description of the action of G on R^n.

    Immutable; hashing is by identity so derived data may be cached per
    loaded spec.
    """

    n: int
    generators: tuple  # raw finite generators, rational matrices
    k: int
    blocks: tuple  # ((r, t), ...) 0-based coordinate pairs
    weights: tuple  # k rows, one weight per block
    tolerance: float
    elements: tuple  # all of F, enumerated, identity first
    mult: tuple  # mult[i][j] = index of elements[i] @ elements[j]
    inverse: tuple
    invariants: tuple
    relations: tuple
    fixtures: dict = field(default_factory=dict)

    @property
    def finite_order(self):
        return len(self.elements)

    def weight_column(self, j):
        """Weight vector of block j across the k torus factors."""
        return tuple(self.weights[i][j] for i in range(self.k))


def identity_element(spec) -> GroupElement:
    return GroupElement(0, (Fraction(0),) * spec.k)


def element(spec, finite_part=0, torus_part=()) -> GroupElement:
    """Build a normalized group element from a finite index and turns."""
    if not 0 <= finite_part < spec.finite_order:
        raise ValueError("finite_part out of range")
    turns = list(torus_part) + [Fraction(0)] * (spec.k - len(torus_part))
    if len(turns) != spec.k:
        raise ValueError("expected at most %d turns" % spec.k)
    return GroupElement(finite_part, tuple(_norm_turn(t) for t in turns))


def compose(spec, a: GroupElement, b: GroupElement) -> GroupElement:
    f = spec.mult[a.finite_part][b.finite_part]
    turns = tuple(_norm_turn(x + y) for x, y in zip(a.torus_part, b.torus_part))
    return GroupElement(f, turns)


def inverse(spec, a: GroupElement) -> GroupElement:
    return GroupElement(
        spec.inverse[a.finite_part], tuple(_norm_turn(-t) for t in a.torus_part)
    )


def act(spec, g: GroupElement, v):
    """Apply g to a point of R^n (finite part first, then the rotations)."""
    if len(v) != spec.n:
        raise DimensionMismatch("point has length %d, expected %d" % (len(v), spec.n))
    w = list(rl.mat_vec(spec.elements[g.finite_part], v))
    for j, (r, t) in enumerate(spec.blocks):
        turn = _block_turn(spec, g.torus_part, j)
        c, s = _cos_sin(turn)
        w[r], w[t] = c * w[r] - s * w[t], s * w[r] + c * w[t]
    return tuple(w)


def cotangent_act(spec, g: GroupElement, m, p):
    """Diagonal (cotangent-lifted) action on a point/covector pair."""
    return act(spec, g, m), act(spec, g, p)


def torus_generator_matrices(spec):
    """Infinitesimal generator matrix of each torus factor (k matrices)."""
    out = []
    for i in range(spec.k):
        K = [[rl.ZERO] * spec.n for _ in range(spec.n)]
        for j, (r, t) in enumerate(spec.blocks):
            w = Fraction(spec.weights[i][j])
            K[r][t] = -w
            K[t][r] = w
        out.append(tuple(tuple(row) for row in K))
    return tuple(out)


def _norm_turn(t):
    if isinstance(t, int):
        t = Fraction(t)
    if isinstance(t, Fraction):
        return t % 1
    return float(t) % 1.0


def _block_turn(spec, turns, j):
    total = Fraction(0)
    for i in range(spec.k):
        w = spec.weights[i][j]
        if w:
            total = total + w * turns[i]
    return _norm_turn(total)


_QUARTER = {
    (0, 1): (Fraction(1), Fraction(0)),
    (1, 4): (Fraction(0), Fraction(1)),
    (1, 2): (Fraction(-1), Fraction(0)),
    (3, 4): (Fraction(0), Fraction(-1)),
}


def _cos_sin(turn):
    """(cos, sin) of 2*pi*turn; exact Fractions for quarter turns."""
    if isinstance(turn, Fraction):
        key = (turn.numerator, turn.denominator)
        if key in _QUARTER:
            return _QUARTER[key]
        turn = float(turn)
    a = 2.0 * math.pi * turn
    return math.cos(a), math.sin(a)


def load_spec(text, *, max_order=256) -> ActionSpec:
    """Parse and validate an action-spec document (JSON-compatible text)."""
    if isinstance(text, (bytes, str)):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError("invalid document: %s (line %d column %d)"
                             % (e.msg, e.lineno, e.colno)) from None
    else:
        doc = text
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")

    n = doc.get("n")
    if not isinstance(n, int) or n < 1:
        raise ParseError("'n' must be a positive integer")

    gens = []
    for g in doc.get("finite_generators", []):
        gens.append(_parse_matrix(g, n))
    for A in gens:
        if rl.mat_mul(rl.transpose(A), A) != rl.identity(n):
            raise NonOrthogonalGenerator("finite generator is not orthogonal: %s"
                                         % _show_matrix(A))

    torus = doc.get("torus", {}) or {}
    if not isinstance(torus, dict):
        raise ParseError("'torus' must be an object")
    blocks = []
    used = set()
    for pair in torus.get("blocks", []):
        try:
            r, t = (int(x) for x in pair)
        except (TypeError, ValueError):
            raise ParseError("torus block must be a pair of indices") from None
        if not (1 <= r <= n and 1 <= t <= n) or r == t:
            raise ParseError("torus block %s out of range for n=%d" % (pair, n))
        if r in used or t in used:
            raise ParseError("torus blocks must be disjoint (index %s reused)" % pair)
        used.update((r, t))
        blocks.append((r - 1, t - 1))
    weights = []
    for row in torus.get("weights", []):
        if len(row) != len(blocks):
            raise ParseError("each weight row needs one entry per block")
        try:
            weights.append(tuple(int(w) for w in row))
        except (TypeError, ValueError):
            raise ParseError("weights must be integers") from None
    k = len(weights)

    tolerance = doc.get("tolerance", 1e-9)
    if not isinstance(tolerance, (int, float)) or tolerance < 0:
        raise ParseError("'tolerance' must be a nonnegative number")
    tolerance = float(tolerance) or 1e-9

    elements = _enumerate_finite_group(gens, n, max_order)
    index = {A: i for i, A in enumerate(elements)}
    mult = tuple(
        tuple(index[rl.mat_mul(a, b)] for b in elements) for a in elements
    )
    inv = tuple(row.index(0) for row in mult)

    fixtures = doc.get("fixtures", {}) or {}
    if not isinstance(fixtures, dict):
        raise ParseError("'fixtures' must be an object")

    invs = _inv.parse_invariants(doc.get("invariants", []), n)
    rels = _inv.parse_relations(
        doc.get("relations", []), {p.name for p in invs}
    )

    spec = ActionSpec(
        n=n,
        generators=tuple(gens),
        k=k,
        blocks=tuple(blocks),
        weights=tuple(weights),
        tolerance=tolerance,
        elements=elements,
        mult=mult,
        inverse=inv,
        invariants=invs,
        relations=rels,
        fixtures=fixtures,
    )
    _check_block_compatibility(spec)
    if invs:
        _check_invariance(spec)
    return spec


def load_spec_file(path, **kw) -> ActionSpec:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ParseError("cannot read %s: %s" % (path, e)) from None
    return load_spec(text, **kw)


def _parse_matrix(rows, n):
    try:
        M = rl.mat(rows)
    except (TypeError, ValueError, ZeroDivisionError):
        raise ParseError("finite generator entries must be rationals") from None
    if len(M) != n or any(len(r) != n for r in M):
        raise ParseError("finite generator must be a %dx%d matrix" % (n, n))
    return M


def _show_matrix(A):
    return "[" + "; ".join(" ".join(str(x) for x in row) for row in A) + "]"


def _enumerate_finite_group(gens, n, max_order):
    """BFS closure of the generators under multiplication, identity first."""
    elements = [rl.identity(n)]
    index = {elements[0]: 0}
    queue = list(elements)
    while queue:
        A = queue.pop(0)
        for B in gens:
            C = rl.mat_mul(A, B)
            if C not in index:
                if len(elements) >= max_order:
                    raise InfiniteFiniteGroup(
                        "finite-part closure exceeds cap %d" % max_order
                    )
                index[C] = len(elements)
                elements.append(C)
                queue.append(C)
    return tuple(elements)


def _check_block_compatibility(spec):
    # commuting with every torus Lie-algebra generator is exactly what makes
    # the direct-product action well defined, so that is the check
    for K in torus_generator_matrices(spec):
        for A in spec.generators:
            if rl.mat_mul(A, K) != rl.mat_mul(K, A):
                raise IncompatibleBlocks(
                    "finite generator does not commute with the torus action: %s"
                    % _show_matrix(A)
                )


def _check_invariance(spec):
    """Every declared invariant must be constant along the group action."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(20240817)))
    quarter = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4))
    for _ in range(200):
        f = int(rng.integers(spec.finite_order))
        turns = tuple(quarter[int(rng.integers(4))] for _ in range(spec.k))
        g = GroupElement(f, turns)
        z = tuple(
            Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 5)))
            for _ in range(2 * spec.n)
        )
        gz = cotangent_act(spec, g, z[: spec.n], z[spec.n :])
        gz = gz[0] + gz[1]
        for P in spec.invariants:
            if _inv.eval_invariant(P, gz) != _inv.eval_invariant(P, z):
                raise ParseError("invariant %r is not G-invariant" % P.name)
    for _ in range(50):
        f = int(rng.integers(spec.finite_order))
        turns = tuple(float(rng.random()) for _ in range(spec.k))
        g = GroupElement(f, turns)
        z = tuple(rng.uniform(-2, 2) for _ in range(2 * spec.n))
        gz = cotangent_act(spec, g, z[: spec.n], z[spec.n :])
        gz = gz[0] + gz[1]
        for P in spec.invariants:
            a = float(_inv.eval_invariant(P, gz))
            b = float(_inv.eval_invariant(P, z))
            if abs(a - b) > spec.tolerance * (1.0 + abs(b)):
                raise ParseError("invariant %r is not G-invariant" % P.name)
