"""Decomposition of the reduced space at zero momentum into pieces.

A piece is either the cotangent piece C_L of an isotropy class L or a seam
S_{H->L} attached to a strictly ordered pair of classes.  All dimension data
(piece dimension, ambient stratum dimension, symplectic rank) are exact
integers computed from the stratum table, and every piece is classified as
symplectic, Lagrangian, or properly coisotropic.

The three lattices built here (symplectic strata, the secondary lattice of
one stratum, and the coisotropic lattice of all pieces) share one arrow
convention: R -> S means R is contained in the frontier of S, i.e. the
closure of S contains R but S itself does not meet R.  Note this is the
reverse of the subgroup-containment arrows in the isotropy lattice.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import subgroups as sg
from .errors import CoisotropyIdentityViolation, InternalCheckError

SYMPLECTIC = "symplectic"
LAGRANGIAN = "Lagrangian"
COISOTROPIC_PROPER = "coisotropic-proper"


@dataclass(frozen=True)
class ConnectablePair:
    """Ordered pair of isotropy classes with lower <= upper."""

    upper: sg.IsotropyClass
    lower: sg.IsotropyClass

    @property
    def diagonal(self) -> bool:
        return self.upper.id == self.lower.id


@dataclass(frozen=True)
class Piece:
    """One piece of the reduced space, with its exact dimension data.

    dim_W is the dimension of the piece itself, dim_V the dimension of the
    ambient symplectic stratum (the one of the lower class), and rank the
    rank of the restricted two-form on the piece.
    """

    pair: ConnectablePair
    kind: str  # "cotangent" (diagonal pair) or "seam"
    dim_W: int
    dim_V: int
    rank: int
    classification: str

    @property
    def label(self) -> str:
        if self.kind == "cotangent":
            return "C_%s" % self.pair.lower.id
        return "S_%s->%s" % (self.pair.upper.id, self.pair.lower.id)

    @property
    def dim(self) -> int:
        return self.dim_W

    @property
    def base_class(self) -> sg.IsotropyClass:
        """Class of the base orbit-type stratum the piece fibers over."""
        return self.pair.upper


@dataclass(frozen=True)
class StratumNode:
    """A whole symplectic stratum of the reduced space (node of the
    symplectic lattice)."""

    cls: sg.IsotropyClass
    dim: int

    @property
    def label(self) -> str:
        return "P0_(%s)" % self.cls.id


@dataclass(frozen=True)
class StratLattice:
    """A decomposition lattice: nodes plus frontier arrows.

    edges is the transitive reduction of the strict closure order; `order`
    keeps the full order so consumers can query non-adjacent frontier
    relations directly.
    """

    kind: str  # "symplectic" | "secondary:<class-id>" | "coisotropic"
    nodes: tuple
    edges: tuple
    order: frozenset
    open_dense: str

    def node(self, label: str):
        for nd in self.nodes:
            if nd.label == label:
                return nd
        raise KeyError(label)

    def in_frontier_of(self, a: str, b: str) -> bool:
        """True iff node a lies in the closure of node b (a != b)."""
        return (a, b) in self.order


def connectable_pairs(lat) -> tuple:
    """All ordered class pairs (upper, lower) with lower <= upper.

    Diagonal pairs included; sorted by (lower id, upper id).
    """
    out = []
    for lo in lat.classes:
        for up in lat.classes:
            if lat.leq(lo.id, up.id):
                out.append(ConnectablePair(upper=up, lower=lo))
    return tuple(sorted(out, key=lambda pr: (pr.lower.id, pr.upper.id)))


def piece_dimensions(pair: ConnectablePair, lat) -> Piece:
    """Exact dimension data and classification for one piece.

    The ambient dimension is twice the quotient dimension of the lower
    stratum and the rank twice that of the upper one; the piece dimension
    couples the two strata.  rank = 2*dim_W - dim_V ties together numbers
    stored independently in the stratum table, so a failure here means the
    table upstream is inconsistent, not that the input is bad.
    """
    up = lat.stratum_by_id(pair.upper.id)
    lo = lat.stratum_by_id(pair.lower.id)
    k = lat.spec.k
    dim_V = 2 * lo.dim_quotient
    rank = 2 * up.dim_quotient
    dim_W = (
        up.dim_stratum + lo.dim_stratum - 2 * k + pair.upper.dim + pair.lower.dim
    )
    if rank != 2 * dim_W - dim_V:
        raise CoisotropyIdentityViolation(
            "piece %s->%s: rank %d != 2*dim_W %d - dim_V %d"
            % (pair.upper.id, pair.lower.id, rank, dim_W, dim_V)
        )
    if not 0 <= rank <= dim_W <= dim_V:
        raise InternalCheckError(
            "piece %s->%s has out-of-order dimensions (%d, %d, %d)"
            % (pair.upper.id, pair.lower.id, rank, dim_W, dim_V)
        )
    if pair.diagonal:
        kind, classification = "cotangent", SYMPLECTIC
    elif up.dim_quotient == 0:
        # the base stratum is a single reduced point, so the seam is an
        # isotropic piece of half the ambient dimension
        kind, classification = "seam", LAGRANGIAN
    else:
        kind, classification = "seam", COISOTROPIC_PROPER
    return Piece(
        pair=pair,
        kind=kind,
        dim_W=dim_W,
        dim_V=dim_V,
        rank=rank,
        classification=classification,
    )


def _transitive_closure(pairs) -> frozenset:
    """Closure of a strict relation; rejects cycles."""
    rel = set(pairs)
    changed = True
    while changed:
        changed = False
        for a, b in list(rel):
            for c, d in list(rel):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
    for a, b in rel:
        if a == b or (b, a) in rel:
            raise InternalCheckError("frontier order has a cycle through %r" % (a,))
    return frozenset(rel)


def _transitive_reduction(order) -> tuple:
    labels = {x for pr in order for x in pr}
    return tuple(
        sorted(
            (a, b)
            for a, b in order
            if not any((a, c) in order and (c, b) in order for c in labels)
        )
    )


def symplectic_lattice(lat) -> StratLattice:
    """One node per symplectic stratum of the reduced space.

    An arrow runs from the stratum of the larger class into the stratum of
    the smaller one, whose closure contains it.
    """
    nodes = tuple(StratumNode(cls=s.cls, dim=2 * s.dim_quotient) for s in lat.strata)
    lab = {nd.cls.id: nd.label for nd in nodes}
    order = frozenset((lab[hi], lab[lo]) for lo, hi in lat.order)
    edges = tuple(sorted((lab[hi], lab[lo]) for lo, hi in lat.hasse_edges))
    return StratLattice(
        kind="symplectic",
        nodes=nodes,
        edges=edges,
        order=order,
        open_dense=lab[lat.principal],
    )


def secondary_lattice(lat, cls) -> StratLattice:
    """Decomposition of one symplectic stratum: its dense cotangent piece
    plus every seam landing on the given class.

    Each seam bounds the cotangent piece, and a seam bounds another iff its
    upper class strictly dominates the other's.
    """
    cid = cls if isinstance(cls, str) else cls.id
    low = lat.class_by_id(cid)
    uppers = [c for c in lat.classes if lat.leq(low.id, c.id)]
    pieces = tuple(
        sorted(
            (piece_dimensions(ConnectablePair(upper=u, lower=low), lat) for u in uppers),
            key=lambda p: p.label,
        )
    )
    cot = "C_%s" % low.id
    raw = set()
    for u in uppers:
        if u.id == low.id:
            continue
        seam = "S_%s->%s" % (u.id, low.id)
        raw.add((seam, cot))
        for u2 in uppers:
            if u2.id not in (low.id, u.id) and lat.leq(u.id, u2.id):
                raw.add(("S_%s->%s" % (u2.id, low.id), seam))
    order = _transitive_closure(raw)
    return StratLattice(
        kind="secondary:%s" % low.id,
        nodes=pieces,
        edges=_transitive_reduction(order),
        order=order,
        open_dense=cot,
    )


def coisotropic_lattice(lat) -> StratLattice:
    """All pieces of the reduced space with the full frontier order.

    The strict order is generated by five rules over ordered class pairs
    H < K (and H < K2 < K where a third class enters):

      C_K        -> C_H          a more singular cotangent piece bounds a
                                 less singular one
      S_{K->H}   -> C_H          every seam bounds the cotangent piece of
                                 its lower class
      C_K        -> S_{K->H}     the upper cotangent piece bounds its seams
      S_{K'->H}  -> S_{K->H}     for K < K', seams over one lower class nest
                                 by their upper classes
      S_{K->K2}  -> S_{K->H}     for H < K2 < K, seams of one upper class
                                 nest by their lower classes
    """
    pieces = tuple(
        sorted(
            (piece_dimensions(pr, lat) for pr in connectable_pairs(lat)),
            key=lambda p: p.label,
        )
    )
    ids = [c.id for c in lat.classes]

    def lt(a, b):
        return a != b and lat.leq(a, b)

    raw = set()
    for H in ids:
        for K in ids:
            if not lt(H, K):
                continue
            seam = "S_%s->%s" % (K, H)
            raw.add(("C_%s" % K, "C_%s" % H))
            raw.add((seam, "C_%s" % H))
            raw.add(("C_%s" % K, seam))
            for K2 in ids:
                if lt(K, K2):
                    raw.add(("S_%s->%s" % (K2, H), seam))
                if lt(H, K2) and lt(K2, K):
                    raw.add(("S_%s->%s" % (K, K2), seam))
    order = _transitive_closure(raw)
    return StratLattice(
        kind="coisotropic",
        nodes=pieces,
        edges=_transitive_reduction(order),
        order=order,
        open_dense="C_%s" % lat.principal,
    )


def refinement_check(coiso: StratLattice, symp: StratLattice) -> tuple:
    """(finer, strict): every coisotropic piece lies inside one symplectic
    stratum, and frontier inclusions of pieces descend to frontier
    inclusions of their ambient strata.

    The refinement is strict exactly when there is more than one stratum;
    with a single class the two decompositions coincide.
    """
    sym_label = {nd.cls.id: nd.label for nd in symp.nodes}
    ambient = {}
    for p in coiso.nodes:
        if p.pair.lower.id not in sym_label:
            return (False, False)
        ambient[p.label] = sym_label[p.pair.lower.id]

    def stratum_in_closure(a, b):
        return a == b or (a, b) in symp.order

    ok = all(stratum_in_closure(ambient[r], ambient[s]) for r, s in coiso.order)
    return (ok, ok and len(sym_label) > 1)


def projection_image(piece: Piece) -> sg.IsotropyClass:
    """Class of the orbit-type stratum of M/G that the piece projects onto."""
    return piece.pair.upper


def all_lattices(lat):
    """(symplectic, {class id: secondary}, coisotropic) for one base lattice."""
    secondary = {c.id: secondary_lattice(lat, c) for c in lat.classes}
    return symplectic_lattice(lat), secondary, coisotropic_lattice(lat)
