"""Product-of-chains lattices, tubings of graphs, hypersurface catalogs and polytope realizations.

A lattice {0..n_1} x ... x {0..n_l} is stored by its chain lengths. The three-element
chain {0, 1, oo} is the chain of length 2 with oo written as the digit 2, so the
weight of a vertex is always its digit sum.

Graph nodes are pairs (factor, k) with 1 <= k <= n_factor. Nodes (f, 1) form a
clique and (f, 1), (f, 2), ... (f, n_f) is the path hanging off it. With this
labeling a lattice vertex I maps to the tube made of the first m_f nodes of every
factor, and its size is w(I).
"""

from __future__ import annotations

import itertools
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import networkx as nx

Vertex = tuple[int, ...]
Tube = frozenset
Tubing = frozenset

NODE_BOUND = 8


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class ProductLattice:
    chain_lengths: tuple[int, ...]

    def __post_init__(self):
        if not self.chain_lengths or any(n < 1 for n in self.chain_lengths):
            raise LatticeError("need at least one factor and every chain length >= 1")

    @classmethod
    def hypercube(cls, l: int) -> "ProductLattice":
        return cls((1,) * l)

    @classmethod
    def mixed(cls, m: int, k: int) -> "ProductLattice":
        """{0, 1, oo}^m x {0, 1}^k."""
        return cls((2,) * m + (1,) * k)

    @property
    def l(self) -> int:
        return len(self.chain_lengths)

    @property
    def initial(self) -> Vertex:
        return (0,) * self.l

    @property
    def final(self) -> Vertex:
        return tuple(self.chain_lengths)

    @property
    def top_weight(self) -> int:
        return sum(self.chain_lengths)

    def vertices(self) -> list[Vertex]:
        return list(itertools.product(*(range(n + 1) for n in self.chain_lengths)))

    def internal(self) -> list[Vertex]:
        ends = {self.initial, self.final}
        return [v for v in self.vertices() if v not in ends]

    @staticmethod
    def weight(v: Sequence[int]) -> int:
        return sum(v)

    @staticmethod
    def leq(a: Sequence[int], b: Sequence[int]) -> bool:
        return all(x <= y for x, y in zip(a, b))

    def nodes(self) -> list[tuple[int, int]]:
        return [(f, k) for f, n in enumerate(self.chain_lengths) for k in range(1, n + 1)]

    def tube_of(self, v: Sequence[int]) -> Tube:
        return frozenset((f, k) for f, m in enumerate(v) for k in range(1, m + 1))


def rho(i: Sequence[int], j: Sequence[int]) -> int:
    """How far two vertices are from being ordered."""
    if len(i) != len(j):
        raise LatticeError("vertices of different length")
    up = sum(1 for a, b in zip(i, j) if a > b)
    down = sum(1 for a, b in zip(i, j) if b > a)
    return min(up, down)


@dataclass
class ChainReport:
    start: Vertex
    end: Vertex
    paths: list[tuple[Vertex, ...]]
    formula: int

    @property
    def count(self) -> int:
        return len(self.paths)


def paths_and_chains(lat: ProductLattice, i: Sequence[int] | None = None,
                     j: Sequence[int] | None = None) -> ChainReport:
    """Every maximal chain from i to j (sequences of immediate successors) and the multinomial count."""
    i = tuple(lat.initial if i is None else i)
    j = tuple(lat.final if j is None else j)
    if not lat.leq(i, j):
        raise LatticeError("start is not below end")
    steps = [b - a for a, b in zip(i, j)]
    formula = math.factorial(sum(steps))
    for s in steps:
        formula //= math.factorial(s)
    out = []

    def walk(cur, acc):
        if cur == j:
            out.append(tuple(acc))
            return
        for f in range(lat.l):
            if cur[f] < j[f]:
                nxt = cur[:f] + (cur[f] + 1,) + cur[f + 1:]
                acc.append(nxt)
                walk(nxt, acc)
                acc.pop()

    walk(i, [i])
    return ChainReport(i, j, out, formula)


def graph_of_lattice(lat: ProductLattice) -> nx.Graph:
    """Clique on the first node of every factor, with a path of n_f - 1 further nodes on factor f."""
    g = nx.Graph()
    g.add_nodes_from(lat.nodes())
    for a, b in itertools.combinations(range(lat.l), 2):
        g.add_edge((a, 1), (b, 1))
    for f, n in enumerate(lat.chain_lengths):
        for k in range(1, n):
            g.add_edge((f, k), (f, k + 1))
    return g


# tubes and tubings ---------------------------------------------------------------

def _check_bound(g: nx.Graph, bound: int | None):
    bound = NODE_BOUND if bound is None else bound
    if g.number_of_nodes() > bound:
        raise LatticeError(f"graph has {g.number_of_nodes()} nodes, bound is {bound}")
    if g.number_of_nodes() == 0 or not nx.is_connected(g):
        raise LatticeError("graph must be connected and nonempty")


def tubes(g: nx.Graph) -> list[Tube]:
    """Proper nonempty node sets inducing connected subgraphs, grown from a least node."""
    order = {v: k for k, v in enumerate(sorted(g.nodes))}
    nodes = frozenset(g.nodes)
    found: set[Tube] = set()

    def grow(cur: frozenset, frontier: frozenset, banned: frozenset, root):
        found.add(cur)
        cand = sorted(frontier - banned, key=order.get)
        for k, v in enumerate(cand):
            # v joins; earlier candidates are banned so each set is produced once
            nb = frozenset(w for w in g.neighbors(v) if order[w] > order[root])
            grow(cur | {v}, (frontier | nb) - cur - {v}, banned | frozenset(cand[:k]), root)

    for root in sorted(g.nodes, key=order.get):
        nb = frozenset(w for w in g.neighbors(root) if order[w] > order[root])
        grow(frozenset([root]), nb, frozenset(), root)
    found.discard(nodes)
    return sorted(found, key=lambda t: (len(t), sorted(order[v] for v in t)))


def tubes_bruteforce(g: nx.Graph) -> list[Tube]:
    out = []
    nodes = sorted(g.nodes)
    for r in range(1, len(nodes)):
        for sub in itertools.combinations(nodes, r):
            if nx.is_connected(g.subgraph(sub)):
                out.append(frozenset(sub))
    return out


def compatible(g: nx.Graph, a: Tube, b: Tube) -> bool:
    """Nested, or disjoint with a disconnected union."""
    if a <= b or b <= a:
        return True
    if a & b:
        return False
    return not any(g.has_edge(x, y) for x in a for y in b)


@dataclass
class TubingPoset:
    graph: nx.Graph
    tubes: list[Tube]
    tubings: list[Tubing]

    @property
    def dimension(self) -> int:
        return self.graph.number_of_nodes() - 1

    @property
    def maximal(self) -> list[Tubing]:
        return [t for t in self.tubings if len(t) == self.dimension]

    @property
    def facets(self) -> list[Tubing]:
        return [t for t in self.tubings if len(t) == 1]

    def face_dimension(self, t: Tubing) -> int:
        return self.dimension - len(t)

    def f_vector(self) -> list[int]:
        """Number of faces of each dimension 0 .. n - 1."""
        out = [0] * (self.dimension + 1)
        for t in self.tubings:
            out[self.face_dimension(t)] += 1
        return out

    @staticmethod
    def below(a: Tubing, b: Tubing) -> bool:
        """Face order: a <= b when a is obtained from b by adding tubes."""
        return b <= a


def tubings(g: nx.Graph, bound: int | None = None) -> TubingPoset:
    """All tubings (including the empty one, the whole polytope) by backtracking."""
    _check_bound(g, bound)
    ts = tubes(g)
    comp = [[compatible(g, a, b) for b in ts] for a in ts]
    out: list[Tubing] = []

    def extend(chosen: list[int], start: int):
        out.append(frozenset(ts[k] for k in chosen))
        for k in range(start, len(ts)):
            if all(comp[k][c] for c in chosen):
                chosen.append(k)
                extend(chosen, k + 1)
                chosen.pop()

    extend([], 0)
    return TubingPoset(g, ts, out)


def tubings_bruteforce(g: nx.Graph) -> set[Tubing]:
    """Cliques of the tube compatibility graph, built independently through networkx."""
    ts = tubes_bruteforce(g)
    cg = nx.Graph()
    cg.add_nodes_from(ts)
    for a, b in itertools.combinations(ts, 2):
        if compatible(g, a, b):
            cg.add_edge(a, b)
    out = {frozenset()}
    for cl in nx.enumerate_all_cliques(cg):
        out.add(frozenset(cl))
    return out


def count_maximal_tubings(g: nx.Graph) -> int:
    """Vertices of the graph associahedron without listing faces.

    In a maximal tubing of a connected graph exactly one node lies outside every
    tube; removing it leaves components that each carry a maximal tubing of their
    own, plus the component itself as a tube. Disconnected inputs multiply.
    """
    memo: dict[frozenset, int] = {}

    def count(nodes: frozenset) -> int:
        if len(nodes) <= 1:
            return 1
        got = memo.get(nodes)
        if got is None:
            got = 0
            for v in nodes:
                prod = 1
                for comp in nx.connected_components(g.subgraph(nodes - {v})):
                    prod *= count(frozenset(comp))
                got += prod
            memo[nodes] = got
        return got

    total = 1
    for comp in nx.connected_components(g):
        total *= count(frozenset(comp))
    return total


def cube_count(m: int, k: int) -> int:
    """Cubes in the cubical subdivision of the polytope for {0, 1, oo}^m x {0, 1}^k."""
    return sum(math.comb(m, i) * math.factorial(2 * m + k - i) // 2 ** (m - i) for i in range(m + 1))


# hypersurface catalog ---------------------------------------------------------------

@dataclass
class HypersurfaceCatalog:
    lattice: ProductLattice
    surfaces: list[tuple]  # ("Y", I), ("S", f) for a {0,1,oo} factor, ("S", f, j, k) on a single chain
    disjoint: set[frozenset]
    tube: dict  # surface -> tube of graph_of_lattice
    rule: str

    def is_disjoint(self, a, b) -> bool:
        return frozenset((a, b)) in self.disjoint

    def components(self, a, b) -> int:
        """Number of intersection components (tori) of two distinct surfaces."""
        if self.is_disjoint(a, b):
            return 0
        if a[0] == "Y" and b[0] == "Y":
            return rho(a[1], b[1])
        return 1

    def disjointness_graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.surfaces)
        for p in self.disjoint:
            a, b = tuple(p)
            g.add_edge(a, b)
        return g

    def cliques(self) -> set[frozenset]:
        out = {frozenset()}
        for cl in nx.enumerate_all_cliques(self.disjointness_graph()):
            out.add(frozenset(cl))
        return out


def catalog(lat: ProductLattice) -> HypersurfaceCatalog:
    """Internal and auxiliary hypersurfaces with their disjointness relation."""
    if lat.l == 1:
        return _chain_catalog(lat)
    if any(n > 2 for n in lat.chain_lengths):
        raise LatticeError("products containing a chain of length three or more are not supported")
    surfaces = [("Y", v) for v in lat.internal()]
    surfaces += [("S", f) for f, n in enumerate(lat.chain_lengths) if n == 2]
    disjoint = set()
    for a, b in itertools.combinations(surfaces, 2):
        if a[0] == "Y" and b[0] == "Y":
            ok = rho(a[1], b[1]) == 0
        elif a[0] == "S" and b[0] == "S":
            ok = True
        else:
            y, s = (a, b) if a[0] == "Y" else (b, a)
            ok = y[1][s[1]] != 1
        if ok:
            disjoint.add(frozenset((a, b)))
    tube = {}
    for s in surfaces:
        tube[s] = lat.tube_of(s[1]) if s[0] == "Y" else frozenset([(s[1], 2)])
    return HypersurfaceCatalog(lat, surfaces, disjoint, tube, "product")


def _chain_catalog(lat: ProductLattice) -> HypersurfaceCatalog:
    n = lat.chain_lengths[0]
    surfaces = [("Y", (i,)) for i in range(1, n)]
    surfaces += [("S", 0, j, k) for j in range(1, n + 1) for k in range(j + 1, n + 1)]
    disjoint = set()
    for a, b in itertools.combinations(surfaces, 2):
        if a[0] == "Y" and b[0] == "Y":
            ok = True
        elif a[0] == "S" and b[0] == "S":
            j1, k1 = a[2], a[3]
            j2, k2 = b[2], b[3]
            overlap = max(j1, j2) <= min(k1, k2)
            nested = (j1 <= j2 and k2 <= k1) or (j2 <= j1 and k1 <= k2)
            ok = not (overlap and not nested)
        else:
            y, s = (a, b) if a[0] == "Y" else (b, a)
            i = y[1][0]
            ok = not (s[2] <= i < s[3])
        if ok:
            disjoint.add(frozenset((a, b)))
    tube = {}
    for s in surfaces:
        if s[0] == "Y":
            tube[s] = lat.tube_of(s[1])
        else:
            tube[s] = frozenset((0, k) for k in range(s[2] + 1, s[3] + 1))
    return HypersurfaceCatalog(lat, surfaces, disjoint, tube, "chain")


@dataclass
class DualityReport:
    bijective: bool
    relation_matches: bool
    isomorphic: bool
    cliques: int
    tubings: int

    @property
    def ok(self) -> bool:
        return self.bijective and self.relation_matches and self.isomorphic and self.cliques == self.tubings


def check_duality(cat: HypersurfaceCatalog) -> DualityReport:
    """Compare the clique poset of disjoint surfaces with the tubing poset of the lattice graph.

    Two checks: the explicit surface -> tube map carries disjointness to compatibility,
    and, independently, the two 1-skeleta are isomorphic as graphs (both posets are flag
    complexes, so this identifies them)."""
    g = graph_of_lattice(cat.lattice)
    ts = set(tubes(g))
    images = [cat.tube[s] for s in cat.surfaces]
    bij = len(set(images)) == len(images) and set(images) == ts
    rel = all(cat.is_disjoint(a, b) == compatible(g, cat.tube[a], cat.tube[b])
              for a, b in itertools.combinations(cat.surfaces, 2))
    cg = nx.Graph()
    cg.add_nodes_from(ts)
    for a, b in itertools.combinations(sorted(ts, key=sorted), 2):
        if compatible(g, a, b):
            cg.add_edge(a, b)
    iso = nx.is_isomorphic(cat.disjointness_graph(), cg)
    ncl = len(cat.cliques())
    ntb = len(tubings(g, bound=max(NODE_BOUND, g.number_of_nodes())).tubings)
    return DualityReport(bij, rel, iso, ncl, ntb)


# realizations ------------------------------------------------------------------------

def permutohedron(n: int) -> list[tuple[int, ...]]:
    """The n! permutations of (1, ..., n)."""
    return sorted(itertools.permutations(range(1, n + 1)))


@dataclass
class Realization:
    lattice: ProductLattice
    vertices: dict  # maximal tubing -> coordinates (Fractions until scaled)
    facets: dict  # tube -> (normal, offset): normal . x <= offset

    @property
    def dimension(self) -> int:
        return len(next(iter(self.vertices.values()))) if self.vertices else 0

    def points(self) -> list[tuple[int, ...]]:
        return sorted(self.vertices.values())

    def tight(self, x) -> set:
        return {t for t, (nrm, b) in self.facets.items() if _dot(nrm, x) == b}

    def valid(self) -> bool:
        """Every vertex satisfies every facet inequality and is tight on exactly its own tubes."""
        for tb, x in self.vertices.items():
            for t, (nrm, b) in self.facets.items():
                v = _dot(nrm, x)
                if v > b or ((v == b) != (t in tb)):
                    return False
        return True

    def edges(self) -> int:
        """Vertex pairs sharing all but one tight facet."""
        d = self.dimension
        keys = list(self.vertices)
        return sum(1 for a, b in itertools.combinations(keys, 2) if len(a & b) == d - 1)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _solve(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(rows)
    m = [list(r) + [v] for r, v in zip(rows, rhs)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise LatticeError("singular facet system at a vertex")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[r][n] for r in range(n)]


def _is_y_tube(lat: ProductLattice, t: Tube) -> bool:
    """A tube is internal-type when it meets the clique; its restriction to each factor is then a prefix."""
    return any(k == 1 for _, k in t)


def _tent(lat: ProductLattice, base: Realization, scale: Fraction) -> Realization:
    """Realization for lat x {0, 1} from one for lat: every internal facet gets a ridge
    at the height of its weight, pushed out by ``scale``."""
    N = lat.top_weight
    newlat = ProductLattice(lat.chain_lengths + (1,))
    z = (lat.l, 1)
    everything = frozenset(lat.nodes())
    verts = {}
    for tb, x in base.vertices.items():
        ys = sorted((t for t in tb if _is_y_tube(lat, t)), key=len)
        heights = [0] + [len(t) for t in ys] + [N]
        for h in heights:
            new = {t for t in tb if not _is_y_tube(lat, t)}
            rows, rhs = [], []
            for t in tb:
                nrm, b = base.facets[t]
                rows.append(list(nrm))
                if _is_y_tube(lat, t):
                    w = len(t)
                    rhs.append(b + scale * min(Fraction(h, w), Fraction(N - h, N - w)))
                else:
                    rhs.append(b)
            for t in ys:
                if len(t) <= h:
                    new.add(t)
                if len(t) >= h:
                    new.add(t | {z})
            if h == 0:
                new.add(frozenset([z]))
            if h == N:
                new.add(everything)
            pt = tuple(_solve(rows, rhs)) if rows else ()
            verts[frozenset(new)] = pt + (Fraction(h),)
    facets = {}
    d = base.dimension
    for t, (nrm, b) in base.facets.items():
        if _is_y_tube(lat, t):
            w = len(t)
            facets[t] = (tuple(nrm) + (scale / (N - w),), b + scale * Fraction(N, N - w))
            facets[t | {z}] = (tuple(nrm) + (-scale / w,), b)
        else:
            facets[t] = (tuple(nrm) + (Fraction(0),), b)
    facets[frozenset([z])] = ((Fraction(0),) * d + (Fraction(-1),), Fraction(0))
    facets[everything] = ((Fraction(0),) * d + (Fraction(1),), Fraction(N))
    return Realization(newlat, verts, facets)


def _relabel(r: Realization, lat: ProductLattice, mapping: dict) -> Realization:
    def mt(t):
        return frozenset(mapping[v] for v in t)

    verts = {frozenset(mt(t) for t in tb): x for tb, x in r.vertices.items()}
    facets = {mt(t): v for t, v in r.facets.items()}
    return Realization(lat, verts, facets)


def realize_lattice(lat: ProductLattice) -> Realization:
    """Recursive ridge refinement; needs every factor of length one, or a single chain."""
    lengths = lat.chain_lengths
    if lengths == (1,):
        return Realization(lat, {frozenset(): ()}, {})
    if lat.l == 1:
        n = lengths[0]
        prev = realize_lattice(ProductLattice((n - 1, 1)))
        # the path (1,1) - (0,1) - ... - (0,n-1) becomes (0,1) - (0,2) - ... - (0,n)
        mapping = {(1, 1): (0, 1)}
        mapping.update({(0, k): (0, k + 1) for k in range(1, n)})
        return _relabel(prev, lat, mapping)
    ones = [f for f, n in enumerate(lengths) if n == 1]
    if not ones:
        raise LatticeError("ridge refinement needs a factor of length one")
    f = ones[-1]
    rest = ProductLattice(lengths[:f] + lengths[f + 1:])
    base = realize_lattice(rest)
    scale = Fraction(1, 2)
    for _ in range(12):
        r = _tent(rest, base, scale)
        if r.valid():
            break
        scale /= 2
    else:
        raise LatticeError("ridge refinement did not produce a valid realization")
    # move the new factor (last) back to position f
    mapping = {}
    for g, n in enumerate(lengths[:f] + lengths[f + 1:]):
        for k in range(1, n + 1):
            mapping[(g, k)] = (g if g < f else g + 1, k)
    mapping[(rest.l, 1)] = (f, 1)
    return _relabel(r, lat, mapping)


def integral(r: Realization) -> Realization:
    """Scale coordinates and offsets by a common denominator."""
    dens = [x.denominator for p in r.vertices.values() for x in p]
    lcm = 1
    for d in dens:
        lcm = lcm * d // math.gcd(lcm, d)
    verts = {tb: tuple(int(x * lcm) for x in p) for tb, p in r.vertices.items()}
    facets = {t: (nrm, b * lcm) for t, (nrm, b) in r.facets.items()}
    return Realization(r.lattice, verts, facets)


def realize(kind: str, n: int) -> Realization | list[tuple[int, ...]]:
    """``permutohedron`` P_n as permutation points; ``associahedron`` K_{n+2} and
    ``refined-permutohedron`` P_{n+1} as integral ridge refinements of hypercubes."""
    if kind == "permutohedron":
        return permutohedron(n)
    if kind == "associahedron":
        return integral(realize_lattice(ProductLattice((n + 1,))))
    if kind == "refined-permutohedron":
        return integral(realize_lattice(ProductLattice.hypercube(n + 1)))
    raise LatticeError(f"unknown realization {kind!r}")


def feasible(a_eq: list[list[Fraction]], b_eq: list[Fraction]) -> bool:
    """Exact Phase I simplex with Bland's rule: is {x >= 0 : A x = b} nonempty?"""
    m = len(a_eq)
    n = len(a_eq[0]) if m else 0
    rows = []
    for r, b in zip(a_eq, b_eq):
        r = [Fraction(x) for x in r]
        b = Fraction(b)
        if b < 0:
            r, b = [-x for x in r], -b
        rows.append(r + [Fraction(int(k == len(rows))) for k in range(m)] + [b])
    basis = [n + k for k in range(m)]
    width = n + m
    # reduced costs of the artificial objective
    cost = [Fraction(0)] * (width + 1)
    for r in rows:
        for c in range(width + 1):
            if c < n or c == width:
                cost[c] -= r[c]
    while True:
        enter = next((c for c in range(width) if cost[c] < 0), None)
        if enter is None:
            break
        best = None
        for k, r in enumerate(rows):
            if r[enter] > 0:
                ratio = r[width] / r[enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[k] < basis[best[1]]):
                    best = (ratio, k)
        if best is None:
            break  # unbounded direction; cannot happen for a bounded Phase I objective
        k = best[1]
        piv = rows[k][enter]
        rows[k] = [x / piv for x in rows[k]]
        for t, r in enumerate(rows):
            if t != k and r[enter] != 0:
                f = r[enter]
                rows[t] = [x - f * y for x, y in zip(r, rows[k])]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, rows[k])]
        basis[k] = enter
    return cost[width] == 0


def is_extreme(points: Sequence[Sequence[int]], k: int) -> bool:
    """Exact LP: point k is not a convex combination of the others."""
    others = [p for i, p in enumerate(points) if i != k]
    if not others:
        return True
    dim = len(points[k])
    a_eq = [[Fraction(p[c]) for p in others] for c in range(dim)] + [[Fraction(1)] * len(others)]
    b_eq = [Fraction(x) for x in points[k]] + [Fraction(1)]
    return not feasible(a_eq, b_eq)


# cube cancellation --------------------------------------------------------------------

def polygon_arcs(n: int) -> list[tuple]:
    """Arcs between non-adjacent sides of the polygon with sides a, 0, 1, ..., n.

    ("Y", i) joins a to side i; ("S", j, k) joins sides j and k."""
    arcs = [("Y", i) for i in range(1, n)]
    arcs += [("S", j, k) for j in range(n + 1) for k in range(j + 2, n + 1)]
    return arcs


def _ends(arc) -> tuple[int, int]:
    return (-1, arc[1]) if arc[0] == "Y" else (arc[1], arc[2])


def arcs_cross(a, b) -> bool:
    p, q = _ends(a)
    r, s = _ends(b)
    return (p < r < q < s) or (r < p < s < q)


def polygon_cubes(n: int) -> list[frozenset]:
    """Maximal sets of pairwise non-crossing arcs: one cube per vertex of the associahedron."""
    arcs = polygon_arcs(n)
    out = []

    def extend(chosen, start):
        if len(chosen) == n - 1:
            out.append(frozenset(chosen))
            return
        for k in range(start, len(arcs)):
            a = arcs[k]
            if all(not arcs_cross(a, b) for b in chosen):
                chosen.append(a)
                extend(chosen, k + 1)
                chosen.pop()

    extend([], 0)
    return out


def arc_tube(arc, n: int) -> Tube:
    """Tube of the n-node path (nodes (0, 1) .. (0, n)) attached to an arc."""
    if arc[0] == "Y":
        return frozenset((0, k) for k in range(1, arc[1] + 1))
    return frozenset((0, k) for k in range(arc[1] + 2, arc[2] + 1))


@dataclass
class CancellationReport:
    l: int
    paths: int
    cubes: int
    survivors: list[frozenset]
    classes: dict  # global stretched set -> multiplicity, non-survivors only
    assembles: bool

    @property
    def cancelling(self) -> int:
        return sum(self.classes.values())

    @property
    def all_even(self) -> bool:
        return all(v % 2 == 0 for v in self.classes.values())

    @property
    def ok(self) -> bool:
        return (len(self.survivors) == self.paths and len(set(self.survivors)) == self.paths
                and self.assembles and self.all_even)

    def to_json(self) -> dict:
        return {
            "l": self.l, "paths": self.paths, "cubes": self.cubes,
            "survivors": len(self.survivors), "cancelling": self.cancelling,
            "class_sizes": dict(sorted(Counter(self.classes.values()).items())),
            "all_even": self.all_even, "assembles": self.assembles, "ok": self.ok,
        }


def cube_cancellation(l: int) -> CancellationReport:
    if not 1 <= l <= 6:
        raise LatticeError("cube cancellation supports 1 <= l <= 6")
    lat = ProductLattice.hypercube(l)
    paths = paths_and_chains(lat).paths
    local = polygon_cubes(l)
    counts: Counter = Counter()
    survivors = []
    for gamma in paths:
        for cube in local:
            glob = []
            for arc in cube:
                if arc[0] == "Y":
                    glob.append(("Y", gamma[arc[1]]))
                else:
                    glob.append(("S", gamma[arc[1]], gamma[arc[2]]))
            key = frozenset(glob)
            if all(a[0] == "Y" for a in cube):
                survivors.append(key)
            else:
                counts[key] += 1
    chains = {frozenset(("Y", v) for v in p[1:-1]) for p in paths}
    facets: Counter = Counter()
    for s in survivors:
        for y in s:
            facets[s - {y}] += 1
    assembles = set(survivors) == chains and all(v == 2 for v in facets.values())
    return CancellationReport(l, len(paths), len(paths) * len(local), survivors, dict(counts), assembles)


def connected_graphs(max_nodes: int) -> Iterable[nx.Graph]:
    """All connected graphs with 1 .. max_nodes nodes, up to isomorphism (from the graph atlas)."""
    if max_nodes > 7:
        raise LatticeError("the atlas stops at seven nodes")
    for g in nx.graph_atlas_g():
        if 0 < g.number_of_nodes() <= max_nodes and nx.is_connected(g):
            yield g
