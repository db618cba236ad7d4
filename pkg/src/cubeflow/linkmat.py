"""One-circle resolutions, arc chord diagrams and the arc-linking matrix.

At a resolution with a single circle every crossing leaves a short arc joining
the two strands of its smoothing. Walking along the circle, an arc sits to the
left of the walker when the walk turns counterclockwise through the site and to
the right otherwise; both passages agree. Left arcs are drawn above the circle's
plane and right arcs below, so two interleaved arcs always lie on opposite sides
and link once.

Linking sign: orient each arc from its first endpoint to its second. For an upper
arc i from p_i to q_i and a lower arc j, the pair links with sign -1 when the
tail p_j lies in (p_i, q_i) and +1 when the head q_j does. Diagonal entries are
(-1)^digit. Flipping an arc negates its row and column, a congruence.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .diagram import (
    DiagramError,
    LinkDiagram,
    circle_labels,
    crossing_signs,
    edge_faces,
    faces,
    resolve,
)
from .f2core import SymIntMatrix, signature_det_nullity

EXHAUSTIVE_LIMIT = 20


def checkerboard(d: LinkDiagram) -> tuple[dict, list[int]]:
    """Face index per corner and a 0/1 colour per face (1 = black).

    The face to the left of the smallest edge label is the unbounded one and is white.
    """
    face, nf = faces(d)
    adj: list[set[int]] = [set() for _ in range(nf)]
    for e in d.edges:
        a, b = edge_faces(d, face, e)
        adj[a].add(b)
        adj[b].add(a)
    colour = [-1] * nf
    start = edge_faces(d, face, min(d.edges))[0]
    colour[start] = 0
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in sorted(adj[u]):
            if colour[w] < 0:
                colour[w] = 1 - colour[u]
                queue.append(w)
            elif colour[w] == colour[u]:
                raise DiagramError("faces are not two-colourable; PD code is not planar")
    return face, colour


def black_graph(d: LinkDiagram) -> list[tuple[int, int, int]]:
    """Edges (crossing, black face, black face); the black corners at a crossing are
    either {0, 2} or {1, 3}."""
    face, colour = checkerboard(d)
    out = []
    for i in range(d.n):
        corners = [p for p in range(4) if colour[face[(i, p)]] == 1]
        if len(corners) != 2 or (corners[1] - corners[0]) != 2:
            raise DiagramError("checkerboard colouring is inconsistent at a crossing")
        out.append((i, face[(i, corners[0])], face[(i, corners[1])]))
    return out


def _tree_vertex(d: LinkDiagram) -> tuple[int, ...]:
    face, colour = checkerboard(d)
    parent = {}

    def find(a):
        while parent.setdefault(a, a) != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    digits = []
    for i, f, g in black_graph(d):
        black_odd = colour[face[(i, 1)]] == 1
        # digit 0 joins corners 1 and 3, digit 1 joins corners 0 and 2
        join = 0 if black_odd else 1
        ra, rb = find(f), find(g)
        if ra != rb:
            parent[ra] = rb
            digits.append(join)
        else:
            digits.append(1 - join)
    return tuple(digits)


def find_onecircle_vertex(d: LinkDiagram) -> tuple[int, ...]:
    """A vertex whose resolution is a single circle."""
    if not d.is_connected():
        raise DiagramError("diagram is not connected")
    if d.n == 0:
        return ()
    v = _tree_vertex(d)
    if circle_labels(d, v)[1] == 1:
        return v
    if d.n > EXHAUSTIVE_LIMIT:
        raise DiagramError("spanning-tree resolution failed and the diagram is too large to search")
    for w in itertools.product((0, 1), repeat=d.n):
        if circle_labels(d, w)[1] == 1:
            return w
    raise DiagramError("no one-circle resolution")


def onecircle_vertices(d: LinkDiagram) -> list[tuple[int, ...]]:
    """Every one-circle vertex (exhaustive; small diagrams only)."""
    if d.n > EXHAUSTIVE_LIMIT:
        raise DiagramError("too many crossings for exhaustive search")
    return [w for w in itertools.product((0, 1), repeat=d.n) if circle_labels(d, w)[1] == 1]


@dataclass(frozen=True)
class ArcDiagram:
    istar: tuple[int, ...]
    sequence: tuple[int, ...]  # arc index at each of the 2l endpoint slots along the circle
    upper: tuple[bool, ...]  # arc drawn to the left of the walk
    ends: tuple[tuple[int, int], ...]  # (first, second) slot of each arc

    def linked(self, i: int, j: int) -> bool:
        a, b = self.ends[i]
        c, e = self.ends[j]
        return (a < c < b) != (a < e < b)

    def linked_pairs(self) -> list[tuple[int, int]]:
        n = len(self.ends)
        return [(i, j) for i in range(n) for j in range(i + 1, n) if self.linked(i, j)]


def arcs_and_links(d: LinkDiagram, istar: Sequence[int]) -> ArcDiagram:
    r = resolve(d, istar)
    if r.count != 1:
        raise DiagramError(f"resolution {tuple(istar)} has {r.count} circles, not one")
    n = d.n
    seq = [-1] * (2 * n)
    upper = []
    ends = []
    for i in range(n):
        sides = set()
        slots = []
        for (circle, pos), (p, q) in zip(r.site_visits[i], r.visit_dirs[i]):
            seq[pos] = i
            slots.append(pos)
            sides.add(q == (p + 1) % 4)
        if len(sides) != 1:
            raise AssertionError("the two passages through a site disagree about the arc side")
        upper.append(sides.pop())
        ends.append(tuple(sorted(slots)))
    return ArcDiagram(tuple(istar), tuple(seq), tuple(upper), tuple(ends))


def link_sign(arcs: ArcDiagram, i: int, j: int) -> int:
    if arcs.upper[i] == arcs.upper[j]:
        raise AssertionError("interleaved arcs on the same side")
    if not arcs.upper[i]:
        i, j = j, i
    p, q = arcs.ends[i]
    pj, qj = arcs.ends[j]
    return -1 if p < pj < q else 1


def build_A(d: LinkDiagram, istar: Sequence[int] | None = None,
            flips: Sequence[int] | None = None) -> SymIntMatrix:
    """Arc-linking matrix; ``flips`` (entries +-1) reverse chosen arc orientations."""
    if istar is None:
        istar = find_onecircle_vertex(d)
    arcs = arcs_and_links(d, istar)
    n = d.n
    f = list(flips) if flips is not None else [1] * n
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = -1 if istar[i] else 1
    for i, j in arcs.linked_pairs():
        s = link_sign(arcs, i, j) * f[i] * f[j]
        rows[i][j] = rows[j][i] = s
    return SymIntMatrix.from_rows(rows)


def signature_formula(d: LinkDiagram, istar: Sequence[int] | None = None,
                      flips: Sequence[int] | None = None) -> tuple[int, int, int]:
    """(sigma, det, nullity) from the arc-linking matrix at a one-circle vertex."""
    if istar is None:
        istar = find_onecircle_vertex(d)
    a = build_A(d, istar, flips)
    s, det, nul = signature_det_nullity(a)
    _, nneg = crossing_signs(d)
    return s + sum(istar) - nneg, abs(det), nul


def to_json(d: LinkDiagram, istar: Sequence[int] | None = None) -> dict:
    if istar is None:
        istar = find_onecircle_vertex(d)
    a = build_A(d, istar)
    sigma, det, nul = signature_formula(d, istar)
    return {"sigma": sigma, "det": det, "nullity": nul, "istar": list(istar), "A": a.tolist()}
