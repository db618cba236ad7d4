"""Planar diagrams given as PD codes, their resolutions and the cube of resolutions.

A crossing is a 4-tuple of edge labels listed counterclockwise, starting with the
incoming under-strand. Smoothing conventions (frozen after calibration against
the Frobenius oracle on the right-handed trefoil):

* digit 0 joins positions (0,1) and (2,3)
* digit 1 joins positions (0,3) and (1,2)

With this choice the 0-smoothing of a positive crossing is the oriented one.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from typing import Iterable, Sequence

DEFAULT_MAX_CROSSINGS = 24

SMOOTHING = {
    0: ((0, 1), (2, 3)),
    1: ((0, 3), (1, 2)),
}


class DiagramError(ValueError):
    """Malformed or unsupported diagram input."""


def max_crossings() -> int:
    raw = os.environ.get("CUBEFLOW_MAX_CROSSINGS")
    if raw is None:
        return DEFAULT_MAX_CROSSINGS
    try:
        return int(raw)
    except ValueError:
        raise DiagramError(f"CUBEFLOW_MAX_CROSSINGS is not an integer: {raw!r}")


Occ = tuple[int, int]  # (crossing index, position 0..3)


@dataclass(frozen=True)
class LinkDiagram:
    crossings: tuple[tuple[int, int, int, int], ...]
    name: str = ""

    def __post_init__(self):
        counts: dict[int, int] = {}
        for x in self.crossings:
            if len(x) != 4:
                raise DiagramError(f"crossing {x} does not have 4 entries")
            for e in x:
                if not isinstance(e, int):
                    raise DiagramError(f"edge label {e!r} is not an integer")
                counts[e] = counts.get(e, 0) + 1
        bad = sorted(e for e, c in counts.items() if c != 2)
        if bad:
            raise DiagramError(f"edge labels not occurring exactly twice: {bad}")

    @classmethod
    def from_pd(cls, pd: Iterable[Sequence[int]], name: str = "") -> "LinkDiagram":
        try:
            xs = tuple(tuple(int(v) for v in x) for x in pd)
        except (TypeError, ValueError) as exc:
            raise DiagramError(f"bad PD code: {exc}")
        return cls(xs, name)

    @property
    def n(self) -> int:
        return len(self.crossings)

    @cached_property
    def edges(self) -> tuple[int, ...]:
        return tuple(sorted({e for x in self.crossings for e in x}))

    @cached_property
    def occurrences(self) -> dict[int, tuple[Occ, Occ]]:
        occ: dict[int, list[Occ]] = {}
        for i, x in enumerate(self.crossings):
            for p, e in enumerate(x):
                occ.setdefault(e, []).append((i, p))
        return {e: (o[0], o[1]) for e, o in occ.items()}

    def other(self, o: Occ) -> Occ:
        e = self.crossings[o[0]][o[1]]
        a, b = self.occurrences[e]
        return b if a == o else a

    @cached_property
    def heads(self) -> dict[int, Occ]:
        """For each edge, the occurrence where it enters a crossing."""
        return _orient(self)

    @cached_property
    def signs(self) -> tuple[int, ...]:
        out = []
        for i, x in enumerate(self.crossings):
            if self.heads[x[3]] == (i, 3):
                out.append(1)
            elif self.heads[x[1]] == (i, 1):
                out.append(-1)
            else:
                raise DiagramError(f"orientation inconsistency at crossing {i}")
        return tuple(out)

    @cached_property
    def components(self) -> list[list[int]]:
        """Link components as edge sequences in the direction of orientation."""
        seen: set[int] = set()
        comps = []
        for e0 in self.edges:
            if e0 in seen:
                continue
            comp = []
            e = e0
            while e not in seen:
                seen.add(e)
                comp.append(e)
                i, p = self.heads[e]
                e = self.crossings[i][(p + 2) % 4]
            comps.append(comp)
        return comps

    def writhe(self) -> int:
        return sum(self.signs)

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        parent = list(range(self.n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for (i, _), (j, _) in self.occurrences.values():
            parent[find(i)] = find(j)
        return len({find(i) for i in range(self.n)}) == 1

    def to_json(self) -> dict:
        return {"name": self.name, "pd": [list(x) for x in self.crossings]}


def _orient(d: LinkDiagram) -> dict[int, Occ]:
    heads: dict[int, Occ] = {}
    # straight-through continuation: position p exits through p+2
    def walk(e: int, head: Occ):
        while e not in heads:
            heads[e] = head
            i, p = head
            out = (i, (p + 2) % 4)
            e = d.crossings[i][out[1]]
            head = d.other(out)
            if heads.get(e) is not None and heads[e] != head:
                raise DiagramError("orientation inconsistency")

    for i, x in enumerate(d.crossings):
        e = x[0]
        if e not in heads:
            walk(e, (i, 0))
        elif heads[e] != (i, 0):
            raise DiagramError(f"edge {e} enters crossing {i} as under-strand but is oriented otherwise")
    for e in d.edges:
        if e in heads:
            continue
        # component passing only over other strands: orient by increasing labels
        a, b = d.occurrences[e]
        nxt_a = d.crossings[a[0]][(a[1] + 2) % 4]
        walk(e, a if nxt_a == e + 1 else b)
    return heads


def crossing_signs(d: LinkDiagram) -> tuple[int, int]:
    s = d.signs
    return sum(1 for v in s if v > 0), sum(1 for v in s if v < 0)


def mirror(d: LinkDiagram) -> LinkDiagram:
    out = []
    for x, s in zip(d.crossings, d.signs):
        a, b, c, e = x
        out.append((e, a, b, c) if s > 0 else (b, c, e, a))
    return LinkDiagram(tuple(out), (d.name + "*") if d.name else "")


def from_braid(word: Sequence[int], strands: int | None = None, name: str = "") -> LinkDiagram:
    """PD code of a braid closure; generator k > 0 is a positive crossing of strands k, k+1."""
    if strands is None:
        strands = max((abs(g) for g in word), default=0) + 1
    nseg = strands
    current = list(range(strands))  # segment id at each strand position
    raw = []
    for g in word:
        k = abs(g) - 1
        if not 0 <= k < strands - 1:
            raise DiagramError(f"generator {g} out of range for {strands} strands")
        a, b = current[k], current[k + 1]
        a2, b2 = nseg, nseg + 1
        nseg += 2
        if g > 0:
            raw.append((b, a2, b2, a))
        else:
            raw.append((a, b, a2, b2))
        # left strand ends top-right, right strand ends top-left
        current[k], current[k + 1] = b2, a2
    # closure identifies top segment at position k with bottom segment k
    alias = {current[k]: k for k in range(strands)}

    def canon(s):
        return alias.get(s, s)

    xs = [tuple(canon(s) for s in x) for x in raw]
    if not xs:
        raise DiagramError("empty braid word")
    # relabel following orientation so labels increase along each component
    heads: dict[int, Occ] = {}
    for i, (g, x) in enumerate(zip(word, xs)):
        heads[x[0]] = (i, 0)
        # positive: over strand enters at position 3, negative: at position 1
        heads[x[3] if g > 0 else x[1]] = (i, 3) if g > 0 else (i, 1)
    label: dict[int, int] = {}
    nxt = 1
    for s0 in sorted(heads):
        if s0 in label:
            continue
        s = s0
        while s not in label:
            label[s] = nxt
            nxt += 1
            i, p = heads[s]
            s = xs[i][(p + 2) % 4]
    pd = tuple(tuple(label[s] for s in x) for x in xs)
    return LinkDiagram(pd, name)


# resolutions -------------------------------------------------------------------

@dataclass(frozen=True)
class ResolvedDiagram:
    vertex: tuple[int, ...]
    circles: tuple[tuple[int, ...], ...]
    site_visits: tuple[tuple[tuple[int, int], tuple[int, int]], ...]
    visit_dirs: tuple[tuple[tuple[int, int], tuple[int, int]], ...] = field(default=())

    @property
    def count(self) -> int:
        return len(self.circles)


def _check_vertex(d: LinkDiagram, v: Sequence[int]) -> tuple[int, ...]:
    v = tuple(int(x) for x in v)
    if len(v) != d.n or any(x not in (0, 1) for x in v):
        raise DiagramError(f"vertex {v} is not a 0/1 vector of length {d.n}")
    return v


def circle_labels(d: LinkDiagram, v: Sequence[int]) -> tuple[dict[int, int], int]:
    """Union-find circle index per edge label; circles ordered by minimal edge label."""
    parent = {e: e for e in d.edges}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x, digit in zip(d.crossings, v):
        for p, q in SMOOTHING[digit]:
            ra, rb = find(x[p]), find(x[q])
            if ra != rb:
                if ra < rb:
                    parent[rb] = ra
                else:
                    parent[ra] = rb
    roots = sorted({find(e) for e in d.edges})
    index = {r: k for k, r in enumerate(roots)}
    return {e: index[find(e)] for e in d.edges}, max(len(roots), 1)


def _partner(digit: int, p: int) -> int:
    for a, b in SMOOTHING[digit]:
        if p == a:
            return b
        if p == b:
            return a
    raise AssertionError


def resolve(d: LinkDiagram, v: Sequence[int]) -> ResolvedDiagram:
    v = _check_vertex(d, v)
    if d.n == 0:
        return ResolvedDiagram(v, ((),), ())
    labels, c = circle_labels(d, v)
    circles: list[tuple[int, ...]] = []
    visits: dict[int, list[tuple[int, int]]] = {i: [] for i in range(d.n)}
    dirs: dict[int, list[tuple[int, int]]] = {i: [] for i in range(d.n)}
    for k in range(c):
        start = min(e for e, lab in labels.items() if lab == k)
        seq = []
        e = start
        o = d.heads[start]
        while True:
            seq.append(e)
            i, p = o
            q = _partner(v[i], p)
            visits[i].append((k, len(seq) - 1))
            dirs[i].append((p, q))
            e = d.crossings[i][q]
            o = d.other((i, q))
            if e == start and o == d.heads[start]:
                break
        circles.append(tuple(seq))
    return ResolvedDiagram(
        v,
        tuple(circles),
        tuple((visits[i][0], visits[i][1]) for i in range(d.n)),
        tuple((dirs[i][0], dirs[i][1]) for i in range(d.n)),
    )


@dataclass(frozen=True)
class CubeEdge:
    source: tuple[int, ...]
    target: tuple[int, ...]
    crossing: int
    kind: str  # "merge" or "split"
    touched: tuple[int, ...]  # merge: (a, b) in source; split: (c,) in source
    created: tuple[int, ...]  # merge: (c,) in target; split: (a, b) in target
    circle_map: tuple[int, ...]  # source circle -> target circle (for a split parent: child a)


@dataclass
class Cube:
    diagram: LinkDiagram
    counts: dict[tuple[int, ...], int]
    labels: dict[tuple[int, ...], dict[int, int]]
    edges: list[CubeEdge]


def all_vertices(n: int) -> list[tuple[int, ...]]:
    """Vertices of {0,1}^n ordered by weight, then lexicographically."""
    verts = [tuple((m >> (n - 1 - i)) & 1 for i in range(n)) for m in range(1 << n)]
    verts.sort(key=lambda v: (sum(v), v))
    return verts


def cube(d: LinkDiagram, bound: int | None = None) -> Cube:
    bound = max_crossings() if bound is None else bound
    if d.n > bound:
        raise DiagramError(f"{d.n} crossings exceeds the bound {bound} (set CUBEFLOW_MAX_CROSSINGS)")
    verts = all_vertices(d.n)
    labels = {}
    counts = {}
    for v in verts:
        lab, c = circle_labels(d, v)
        labels[v] = lab
        counts[v] = c
    edges = []
    for v in verts:
        for i in range(d.n):
            if v[i]:
                continue
            w = v[:i] + (1,) + v[i + 1:]
            edges.append(cube_edge(d, v, w, i, labels[v], labels[w], counts[v], counts[w]))
    return Cube(d, counts, labels, edges)


def cube_edge(d, v, w, i, lab_v, lab_w, cv, cw) -> CubeEdge:
    x = d.crossings[i]
    (p, q), (r, s) = SMOOTHING[0]
    ca, cb = lab_v[x[p]], lab_v[x[r]]
    cmap = [0] * cv
    seen = [False] * cv
    for e, k in lab_v.items():
        if not seen[k]:
            seen[k] = True
            cmap[k] = lab_w[e]
    if d.n == 0:
        raise AssertionError
    if ca != cb:
        if cw != cv - 1:
            raise AssertionError("merge must lower the circle count")
        a, b = sorted((ca, cb))
        return CubeEdge(v, w, i, "merge", (a, b), (lab_w[x[p]],), tuple(cmap))
    if cw != cv + 1:
        raise AssertionError("split must raise the circle count")
    # children are the circles through the two 1-smoothing strands
    (p1, _), (r1, _) = SMOOTHING[1]
    a, b = sorted((lab_w[x[p1]], lab_w[x[r1]]))
    cmap[ca] = a
    return CubeEdge(v, w, i, "split", (ca,), (a, b), tuple(cmap))


# corpus ------------------------------------------------------------------------

def load_pd_json(path: str) -> LinkDiagram:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DiagramError(f"cannot read PD file {path}: {exc}")
    if not isinstance(data, dict) or "pd" not in data:
        raise DiagramError("PD JSON must be an object with a 'pd' field")
    return LinkDiagram.from_pd(data["pd"], data.get("name", ""))


def load_corpus() -> list[dict]:
    text = resources.files("cubeflow.data").joinpath("knots.json").read_text()
    return json.loads(text)["knots"]


def corpus_diagrams(max_crossings: int = 9) -> list[LinkDiagram]:
    return [LinkDiagram.from_pd(k["pd"], k["name"]) for k in load_corpus()
            if k["crossings"] <= max_crossings]


def named(name: str) -> LinkDiagram:
    for k in load_corpus():
        if k["name"] == name:
            return LinkDiagram.from_pd(k["pd"], k["name"])
    raise KeyError(name)


def unknot() -> LinkDiagram:
    return LinkDiagram((), "0_1")


def torus_3(q: int) -> LinkDiagram:
    """Positive torus knot T(3, q) as the closure of (s1 s2)^q."""
    return from_braid([1, 2] * q, 3, f"T(3,{q})")


# planar structure ---------------------------------------------------------------

def faces(d: LinkDiagram) -> tuple[dict[Occ, int], int]:
    """Face index of every corner (i, p), the corner lying counterclockwise after position p.

    Walking out of crossing i along position p + 1, corner (i, p) is on the right;
    the corner on the right at the far end is (j, q) where (j, q) is the other
    occurrence of that edge.
    """
    face: dict[Occ, int] = {}
    nf = 0
    for i in range(d.n):
        for p in range(4):
            if (i, p) in face:
                continue
            c = (i, p)
            while c not in face:
                face[c] = nf
                c = d.other((c[0], (c[1] + 1) % 4))
            nf += 1
    return face, nf


def tail(d: LinkDiagram, e: int) -> Occ:
    a, b = d.occurrences[e]
    return b if d.heads[e] == a else a


def edge_faces(d: LinkDiagram, face: dict[Occ, int], e: int) -> tuple[int, int]:
    """(left face, right face) of edge e with respect to its orientation."""
    i, p = tail(d, e)
    return face[(i, p)], face[(i, (p - 1) % 4)]
