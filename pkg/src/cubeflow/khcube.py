"""Exterior-algebra cube complex over F2 and its homology.

At a vertex with c circles the space is U = {v in F2^c : sum(v) = 0}, the first
homology of the branched double cover of the resolution. Its basis is
f_i = e_i + e_{c-1} for i < c - 1, so a vector of U is stored by its first c - 1
coordinates. The chain group is the exterior algebra on U with monomials as
bitmasks over the f_i.

Edges act by
  merge (a, b -> c):  the map induced by e_a, e_b -> e_c,
  split (c -> a, b):  xi -> (e_a + e_b) ^ i(xi), with i(e_c) = e_a, a the smaller child.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .diagram import Cube, CubeEdge, LinkDiagram, crossing_signs, cube
from .f2core import F2Matrix, rank_of_rows, wedge_monomial_list


def reduced_dim(c: int) -> int:
    return c - 1


def _coords(full: int, c: int) -> int:
    """Coordinates in U of a sum-zero vector of F2^c."""
    if bin(full).count("1") % 2:
        raise AssertionError("vector is not in the sum-zero subspace")
    return full & ((1 << (c - 1)) - 1)


def _lift(mask: int, c: int) -> int:
    """Sum-zero vector of F2^c from its U coordinates."""
    return mask | ((bin(mask).count("1") & 1) << (c - 1))


def edge_images(e: CubeEdge, c_src: int, c_tgt: int) -> tuple[list[int], int]:
    """Images of the basis f_i under the underlying linear map, plus the wedge factor (0 for merges)."""
    top = c_src - 1
    imgs = []
    for i in range(top):
        full = (1 << e.circle_map[i]) ^ (1 << e.circle_map[top])
        imgs.append(_coords(full, c_tgt))
    extra = 0
    if e.kind == "split":
        a, b = e.created
        extra = _coords((1 << a) | (1 << b), c_tgt)
    return imgs, extra


def apply_edge(imgs: Sequence[int], extra: int, mono: int) -> set[int]:
    vecs = [imgs[i] for i in range(len(imgs)) if (mono >> i) & 1]
    if extra:
        vecs.append(extra)
    return wedge_monomial_list(vecs)


@dataclass
class KhComplex:
    diagram: LinkDiagram
    cube: Cube
    npos: int
    nneg: int
    _images: dict = field(default_factory=dict, repr=False)
    _out: dict = field(default_factory=dict, repr=False)

    def dim_at(self, v) -> int:
        return 1 << (self.cube.counts[v] - 1)

    @property
    def total_dim(self) -> int:
        return sum(self.dim_at(v) for v in self.cube.counts)

    def generators(self) -> Iterable[tuple[tuple[int, ...], int]]:
        for v in self.cube.counts:
            for m in range(self.dim_at(v)):
                yield v, m

    def grading(self, v, mono: int) -> tuple[int, int]:
        """(t, q) of a basis monomial at vertex v."""
        c = self.cube.counts[v]
        w = sum(v)
        r = bin(mono).count("1")
        q = (c - 1) - 2 * r + w + self.npos - 2 * self.nneg
        return w - self.nneg, q

    def out_edges(self, v) -> list[CubeEdge]:
        return self._out.get(v, [])

    def images(self, e: CubeEdge):
        key = (e.source, e.crossing)
        got = self._images.get(key)
        if got is None:
            got = edge_images(e, self.cube.counts[e.source], self.cube.counts[e.target])
            self._images[key] = got
        return got

    def d(self, v, mono: int) -> dict[tuple, set[int]]:
        """Boundary of a basis monomial, grouped by target vertex."""
        out = {}
        for e in self.out_edges(v):
            imgs, extra = self.images(e)
            img = apply_edge(imgs, extra, mono)
            if img:
                out[e.target] = img
        return out

    def block(self, e: CubeEdge) -> F2Matrix:
        """Matrix of one edge map; rows are source monomials, columns target monomials."""
        imgs, extra = self.images(e)
        ncols = self.dim_at(e.target)
        rows = []
        for m in range(self.dim_at(e.source)):
            r = 0
            for t in apply_edge(imgs, extra, m):
                r |= 1 << t
            rows.append(r)
        return F2Matrix(len(rows), ncols, tuple(rows))


def build_complex(d: LinkDiagram, bound: int | None = None) -> KhComplex:
    cb = cube(d, bound)
    npos, nneg = crossing_signs(d)
    k = KhComplex(d, cb, npos, nneg)
    for e in cb.edges:
        k._out.setdefault(e.source, []).append(e)
    return k


def gradings(k: KhComplex) -> dict[tuple, tuple[int, int, float]]:
    """(t, q, delta) for every basis element (vertex, monomial)."""
    out = {}
    for v, m in k.generators():
        t, q = k.grading(v, m)
        out[(v, m)] = (t, q, q / 2 - t)
    return out


def check_d_squared(k: KhComplex) -> bool:
    for v, m in k.generators():
        acc: dict[tuple, set[int]] = defaultdict(set)
        for w, img in k.d(v, m).items():
            for t in img:
                for u, img2 in k.d(w, t).items():
                    acc[u] ^= img2
        if any(acc.values()):
            return False
    return True


def homology(k: KhComplex) -> dict[tuple[int, int], int]:
    """Rank of homology in each (t, q)."""
    blocks: dict[tuple[int, int], dict] = defaultdict(dict)
    for v, m in k.generators():
        blk = blocks[k.grading(v, m)]
        blk[(v, m)] = len(blk)
    drank = {}
    for (t, q), blk in blocks.items():
        tgt = blocks.get((t + 1, q))
        if not tgt:
            drank[(t, q)] = 0
            continue
        rows = []
        for v, m in blk:
            r = 0
            for w, img in k.d(v, m).items():
                for x in img:
                    r ^= 1 << tgt[(w, x)]
            rows.append(r)
        drank[(t, q)] = rank_of_rows(rows)
    table = {}
    for (t, q), blk in sorted(blocks.items()):
        h = len(blk) - drank[(t, q)] - drank.get((t - 1, q), 0)
        if h:
            table[(t, q)] = h
    return table


def khovanov_polynomial(table: dict[tuple[int, int], int], shift: int = 0) -> dict[tuple[int, int], int]:
    """Rank table with q lowered by ``shift`` (the q-normalization used for torus knots)."""
    return {(t, q - shift): r for (t, q), r in table.items()}


def table_to_json(table: dict[tuple[int, int], int]) -> dict:
    return {"ranks": [{"t": t, "q": q, "rank": r} for (t, q), r in sorted(table.items())]}


def table_to_text(table: dict[tuple[int, int], int]) -> str:
    lines = [f"{'t':>4} {'q':>4} {'delta':>6} {'rank':>5}"]
    for (t, q), r in sorted(table.items()):
        lines.append(f"{t:>4} {q:>4} {q / 2 - t:>6g} {r:>5}")
    return "\n".join(lines)


# Donaldson's map -----------------------------------------------------------------

def donaldson_map(gamma: Sequence[tuple[int, int]], n0: int, n1: int) -> list[set[int]]:
    """The map Lambda U0 -> Lambda U1 attached to a subspace of U0 (+) U1.

    ``gamma`` is a spanning list of pairs (u0, u1) of coordinate bitsets. The wedge
    of the pairs lives in Lambda(U0 (+) U1); a term e_S (x) beta sends e_{S^c} to
    beta. Returns the image of every monomial of Lambda U0 as a set of monomials.
    """
    vecs = [u0 | (u1 << n0) for u0, u1 in gamma]
    terms = wedge_monomial_list(vecs)
    full = (1 << n0) - 1
    out = [set() for _ in range(1 << n0)]
    for t in terms:
        s = t & full
        beta = t >> n0
        out[full ^ s] ^= {beta}
    return out


def edge_gamma(e: CubeEdge, c_src: int, c_tgt: int) -> list[tuple[int, int]]:
    """Subspace of U_src (+) U_tgt attached to an edge: the graph of the linear map,
    plus (0, e_a + e_b) for a split."""
    imgs, extra = edge_images(e, c_src, c_tgt)
    gamma = [(1 << i, img) for i, img in enumerate(imgs)]
    if extra:
        gamma.append((0, extra))
    return gamma


def rank_table_json(table) -> str:
    return json.dumps(table_to_json(table), sort_keys=True)
