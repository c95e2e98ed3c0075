"""DOT digraph rendering of decomposition lattices.

Node ids are the piece or stratum labels, each carrying its dimension as an
attribute; an edge a -> b means a lies in the frontier of b.  Output is
byte-stable: nodes and edges are emitted in sorted order.
"""

from __future__ import annotations


def _quote(s: str) -> str:
    return '"%s"' % s.replace("\\", "\\\\").replace('"', '\\"')


def dot_graph(latt) -> str:
    lines = ["digraph %s {" % _quote(latt.kind)]
    for nd in sorted(latt.nodes, key=lambda nd: nd.label):
        lines.append("  %s [dim=%d];" % (_quote(nd.label), nd.dim))
    for a, b in sorted(latt.edges):
        lines.append("  %s -> %s;" % (_quote(a), _quote(b)))
    lines.append("}")
    return "\n".join(lines) + "\n"
