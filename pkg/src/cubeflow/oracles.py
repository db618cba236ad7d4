"""Independent reference computations.

* ``seifert_form``: symmetrized Seifert form of the surface from Seifert's algorithm.
* ``frobenius_kh_reduced``: reduced Khovanov homology over F2 from the Frobenius
  algebra F2[x]/x^2 with a marked point.
* ``kauffman_jones``: Jones polynomial from the Kauffman bracket state sum.

None of these share code with the exterior-algebra complex or the arc-linking
matrix beyond PD bookkeeping in ``diagram``.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Sequence

from .diagram import (
    LinkDiagram,
    SMOOTHING,
    circle_labels,
    edge_faces,
    faces,
    resolve,
)
from .f2core import SymIntMatrix, rank_of_rows, signature_det_nullity


# Seifert surface ----------------------------------------------------------------
#
# At every crossing turn the picture so both strands point up. The oriented
# smoothing leaves a left arc and a right arc, joined by a half-twisted band.
# Positive crossing X[a,b,c,d]: left arc d->c, right arc a->b, the gap between the
# arcs holds corners 1 and 3. Negative: left arc a->d, right arc b->c, gap corners
# 0 and 2.
_ARCS = {1: (3, 0), -1: (0, 1)}
_GAP = {1: (1, 3), -1: (0, 2)}


@dataclass(frozen=True)
class Band:
    crossing: int
    sign: int
    left: int
    right: int
    kind: str  # "flat", or "nested" when one disk lies under the band
    outer: int | None


@dataclass(frozen=True)
class SeifertData:
    circles: tuple[tuple[int, ...], ...]
    counterclockwise: tuple[bool, ...]
    bands: tuple[Band, ...]
    cycles: tuple[tuple[tuple[int, int, int], ...], ...]
    form: SymIntMatrix  # V + V^T on the cycle basis

    @property
    def rank(self) -> int:
        return self.form.n


def _regions(d: LinkDiagram, face: dict, nf: int) -> list[int]:
    parent = list(range(nf))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, s in enumerate(d.signs):
        g, h = _GAP[s]
        ra, rb = find(face[(i, g)]), find(face[(i, h)])
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return [find(f) for f in range(nf)]


def seifert_data(d: LinkDiagram, infinity: int | None = None, route: int = 1) -> SeifertData:
    """Seifert circles, bands and the form lk(a, b+) + lk(b, a+) on a cycle basis.

    ``infinity`` is the face placed at infinity (default: left of the smallest
    edge label); ``route`` picks which way cycles run around each disk. Neither
    changes the resulting invariants, which the tests exploit.

    The form is computed as lk(a, tau b) with tau b the two-sided push-off. On
    disks the two push-offs cancel, so only bands contribute: each half twist
    gives -sign(crossing) per pair of passages, and where a band lies over the
    collar of a nested (outer) disk, curves running along that collar pick up
    one more term for each passage through the band.
    """
    if route not in (1, -1):
        raise ValueError("route must be +1 or -1")
    signs = d.signs
    if d.n == 0:
        return SeifertData(((),), (True,), (), (), SymIntMatrix(0, ()))
    oriented = tuple(0 if s > 0 else 1 for s in signs)
    res = resolve(d, oriented)
    circles = res.circles
    circ = {e: k for k, seq in enumerate(circles) for e in seq}
    face, nf = faces(d)
    region = _regions(d, face, nf)

    sides = []
    for seq in circles:
        lr = {(region[a], region[b]) for a, b in (edge_faces(d, face, e) for e in seq)}
        if len(lr) != 1:
            raise AssertionError("Seifert circle meets more than one region on a side")
        sides.append(lr.pop())

    # regions and circles form a tree; the disk of a circle is its side away from infinity
    adj = defaultdict(list)
    for k, (lf, rt) in enumerate(sides):
        adj[lf].append(rt)
        adj[rt].append(lf)
    if infinity is None:
        infinity = edge_faces(d, face, min(d.edges))[0]
    root = region[infinity]
    depth = {root: 0}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in depth:
                depth[w] = depth[u] + 1
                queue.append(w)
    if len(depth) != len(circles) + 1:
        raise AssertionError("region tree is not a tree")
    ccw = tuple(depth[lf] > depth[rt] for lf, rt in sides)

    bands = []
    for i, (x, s) in enumerate(zip(d.crossings, signs)):
        lp, rp = _ARCS[s]
        left, right = circ[x[lp]], circ[x[rp]]
        if left == right:
            raise AssertionError("band joins a Seifert circle to itself")
        left_in = not ccw[left]  # disk to the right of the left arc covers the gap
        right_in = ccw[right]
        if left_in and right_in:
            raise AssertionError("both disks cover the gap")
        outer = left if left_in else right if right_in else None
        bands.append(Band(i, s, left, right, "nested" if outer is not None else "flat", outer))

    # clockwise cyclic order of band sites along each circle
    order = []
    for k, seq in enumerate(circles):
        sites = [d.heads[e][0] for e in seq]
        if ccw[k]:
            sites.reverse()
        order.append({x: j for j, x in enumerate(sites)})

    cycles = _cycle_basis(len(circles), bands)
    data = [_cycle_terms(cyc, bands, order, route) for cyc in cycles]
    n = len(cycles)
    rows = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            val = _pair(data[a], data[b], bands)
            if val.denominator != 1:
                raise AssertionError("non-integral linking form entry")
            rows[a][b] = rows[b][a] = int(val)
    return SeifertData(circles, ccw, tuple(bands), tuple(cycles), SymIntMatrix.from_rows(rows))


def _cycle_basis(ncirc: int, bands: list[Band]) -> list[tuple[tuple[int, int, int], ...]]:
    """Fundamental cycles of the Seifert graph as closed walks of (band, from, to)."""
    adj = defaultdict(list)
    for b in bands:
        adj[b.left].append((b.crossing, b.right))
        adj[b.right].append((b.crossing, b.left))
    parent: dict[int, tuple[int, int] | None] = {}
    tree = set()
    for start in range(ncirc):
        if start in parent:
            continue
        parent[start] = None
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for x, w in sorted(adj[u]):
                if w not in parent:
                    parent[w] = (x, u)
                    tree.add(x)
                    queue.append(w)

    def to_root(u):
        path = []
        while parent[u] is not None:
            x, p = parent[u]
            path.append((x, u, p))
            u = p
        return path

    cycles = []
    for b in bands:
        if b.crossing in tree:
            continue
        up = to_root(b.right)  # right -> root
        down = to_root(b.left)  # left -> root
        # trim the common part near the root
        while up and down and up[-1][0] == down[-1][0]:
            up.pop()
            down.pop()
        walk = [(b.crossing, b.left, b.right)] + up + [(x, p, u) for x, u, p in reversed(down)]
        cycles.append(tuple(walk))
    return cycles


def _cycle_terms(walk, bands, order, route):
    through = defaultdict(int)  # signed passages per band
    side_sum = defaultdict(int)  # passages weighted by the collar side at the outer disk
    passes = defaultdict(int)  # collar passes under nested bands
    k = len(walk)
    for j, (x, src, dst) in enumerate(walk):
        band = bands[x]
        if band.kind == "nested":
            dirn = 1 if src == band.outer else -1
        else:
            dirn = 1 if src == band.left else -1
        through[x] += dirn
        if band.kind != "nested":
            continue
        # collar segment on the outer disk adjacent to this passage
        if src == band.outer:
            side = route  # we came along the outer collar and left through the band
        else:
            side = -route  # we arrive on the outer collar and move on
        side_sum[x] += side * dirn
    for j in range(k):
        x_in, _, c = walk[j]
        x_out, c2, _ = walk[(j + 1) % k]
        assert c == c2
        pos = order[c]
        m = len(pos)
        a, b = pos[x_in], pos[x_out]
        step = 1 if route == 1 else -1
        t = (a + step) % m
        inv = {v: u for u, v in pos.items()}
        while t != b:
            y = inv[t]
            if bands[y].kind == "nested" and bands[y].outer == c:
                passes[y] += route
            t = (t + step) % m
    return through, side_sum, passes


def _pair(ta, tb, bands) -> Fraction:
    thr_a, side_a, pass_a = ta
    thr_b, side_b, pass_b = tb
    total = Fraction(0)
    for band in bands:
        x = band.crossing
        total += -band.sign * thr_a[x] * thr_b[x]
        if band.kind == "nested":
            total += pass_a[x] * thr_b[x] + pass_b[x] * thr_a[x]
            total += Fraction(side_a[x] * thr_b[x] + thr_a[x] * side_b[x], 2)
    return total


def seifert_signature(d: LinkDiagram, **kw) -> tuple[int, int, int]:
    """(sigma, det, nullity) with the right-handed trefoil at sigma = +2."""
    s, det, nul = signature_det_nullity(seifert_data(d, **kw).form)
    return -s, abs(det), nul


# Frobenius algebra Khovanov homology --------------------------------------------

RankTable = dict  # (t, q) -> rank


def frobenius_generators(d: LinkDiagram, marked_edge: int | None = None):
    """Per vertex: list of (x-mask, q) for generators with the marked circle labelled x.

    A circle labelled 1 contributes +1 to q and a circle labelled x contributes -1,
    except the marked circle, which contributes 0.
    """
    from .diagram import cube

    cb = cube(d)
    npos = sum(1 for s in d.signs if s > 0)
    nneg = d.n - npos
    if marked_edge is None:
        marked_edge = min(d.edges) if d.n else None
    gens = {}
    marked = {}
    for v, c in cb.counts.items():
        m = cb.labels[v][marked_edge] if d.n else 0
        marked[v] = m
        r = sum(v)
        out = []
        for mask in range(1 << c):
            if not (mask >> m) & 1:
                continue
            xs = bin(mask).count("1") - 1
            ones = c - 1 - xs
            out.append((mask, ones - xs + r + npos - 2 * nneg))
        gens[v] = out
    return cb, gens, marked, nneg


def _frobenius_image(e, mask: int, cw: int) -> list[int]:
    def move(msk):
        out = 0
        for k, t in enumerate(e.circle_map):
            if (msk >> k) & 1:
                out |= 1 << t
        return out

    if e.kind == "merge":
        a, b = e.touched
        xa, xb = (mask >> a) & 1, (mask >> b) & 1
        if xa and xb:
            return []
        rest = mask & ~((1 << a) | (1 << b))
        out = move(rest)
        (c,) = e.created
        out &= ~(1 << c)
        if xa or xb:
            out |= 1 << c
        return [out]
    (c,) = e.touched
    a, b = e.created
    xc = (mask >> c) & 1
    rest = move(mask & ~(1 << c)) & ~((1 << a) | (1 << b))
    if xc:
        return [rest | (1 << a) | (1 << b)]
    return [rest | (1 << a), rest | (1 << b)]


def frobenius_kh_reduced(d: LinkDiagram, marked_edge: int | None = None) -> RankTable:
    """Reduced Khovanov ranks over F2 per (t, q), marked point on ``marked_edge``."""
    if d.n == 0:
        return {(0, 0): 1}
    cb, gens, marked, nneg = frobenius_generators(d, marked_edge)
    index: dict[tuple, dict] = defaultdict(dict)  # (r, q) -> {(v, mask): position}
    for v, lst in gens.items():
        r = sum(v)
        for mask, q in lst:
            blk = index[(r, q)]
            blk[(v, mask)] = len(blk)
    out_edges = defaultdict(list)
    for e in cb.edges:
        out_edges[e.source].append(e)
    # differential rows: one bitset over the target block per source generator
    drank = {}
    for (r, q), blk in index.items():
        tgt = index.get((r + 1, q), {})
        rows = []
        for (v, mask) in blk:
            row = 0
            for e in out_edges[v]:
                for img in _frobenius_image(e, mask, cb.counts[e.target]):
                    row ^= 1 << tgt[(e.target, img)]
            rows.append(row)
        drank[(r, q)] = rank_of_rows(rows)
    table = {}
    for (r, q), blk in index.items():
        h = len(blk) - drank[(r, q)] - drank.get((r - 1, q), 0)
        if h:
            table[(r - nneg, q)] = h
    return table


# Kauffman bracket ----------------------------------------------------------------

def kauffman_bracket(d: LinkDiagram) -> dict[int, int]:
    """<D> as {exponent of A: coefficient}, normalized so the unknot is 1.

    Smoothing 0 is the A-smoothing.
    """
    if d.n == 0:
        return {0: 1}
    loop = {2: -1, -2: -1}
    out: dict[int, int] = defaultdict(int)
    for v in product((0, 1), repeat=d.n):
        _, c = circle_labels(d, v)
        term = {d.n - 2 * sum(v): 1}
        for _ in range(c - 1):
            term = _mul(term, loop)
        for k, a in term.items():
            out[k] += a
    return {k: a for k, a in out.items() if a}


def _mul(p: dict[int, int], r: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = defaultdict(int)
    for a, x in p.items():
        for b, y in r.items():
            out[a + b] += x * y
    return {k: v for k, v in out.items() if v}


def kauffman_jones(d: LinkDiagram) -> dict[int, int]:
    """Jones polynomial as {2*exponent of q: coefficient}, with A = q^(-1/4).

    The right-handed trefoil gives q + q^3 - q^4.
    """
    w = d.writhe()
    br = kauffman_bracket(d)
    norm = {-3 * w: (-1) ** (w % 2)}
    poly = _mul(br, norm)
    out = {}
    for k, a in poly.items():
        if k % 2:
            raise AssertionError("odd A-exponent in a Jones polynomial")
        out[-k // 2] = a
    return dict(sorted(out.items()))


def jones_at_minus_one(v: dict[int, int]) -> int:
    """|V(-1)| with q^(1/2) = i, which is the determinant.

    The value is real for links with an odd number of components and purely
    imaginary otherwise; exact Gaussian integer arithmetic avoids rounding.
    """
    re = im = 0
    for k, a in v.items():
        unit = k % 4  # i^k = 1, i, -1, -i
        if unit == 0:
            re += a
        elif unit == 1:
            im += a
        elif unit == 2:
            re -= a
        else:
            im -= a
    if re and im:
        raise AssertionError(f"V(-1) = {re} + {im}i is neither real nor imaginary")
    return abs(re) + abs(im)
