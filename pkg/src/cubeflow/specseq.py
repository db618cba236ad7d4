"""Spectral sequence of a finite filtered complex over F2, plus grading bookkeeping.

Generators carry a filtration weight t, a parity (the mod 2 grading, written
``delta`` below) and optionally a quantum grading q. The differential never
lowers t and always flips parity; when q is present it preserves q.
F_p is spanned by generators with t >= p.

Pages follow the subquotient description

    E^r_p = Z^r_p / (Z^{r-1}_{p+1} + d Z^{r-1}_{p-r+1}),   Z^r_p = F_p cap d^{-1} F_{p+r},

computed separately in every (parity, q) slot.
"""

from __future__ import annotations

import json
from bisect import bisect_left
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .f2core import F2Matrix, kernel_basis, rank_of_rows, row_reduce


class FiltrationError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    t: int
    delta: int
    q: int | None = None


@dataclass(frozen=True)
class FilteredComplex:
    generators: tuple[Generator, ...]
    d: tuple[int, ...]  # d[i] = bitset of the image of generator i

    def __post_init__(self):
        n = len(self.generators)
        if len(self.d) != n:
            raise ValueError("differential size mismatch")
        for i, img in enumerate(self.d):
            if img >> n:
                raise ValueError("image outside the generator range")
            g = self.generators[i]
            x = img
            while x:
                low = x & -x
                j = low.bit_length() - 1
                x ^= low
                h = self.generators[j]
                if h.t < g.t:
                    raise FiltrationError(f"d lowers the filtration from {i} to {j}")
                if h.delta == g.delta:
                    raise FiltrationError(f"d preserves parity from {i} to {j}")
                if g.q is not None and h.q != g.q:
                    raise FiltrationError(f"d changes q from {i} to {j}")
        for i in range(n):
            if self.apply(self.d[i]):
                raise FiltrationError("d^2 != 0")

    @property
    def n(self) -> int:
        return len(self.generators)

    @property
    def bigraded(self) -> bool:
        return bool(self.generators) and all(g.q is not None for g in self.generators)

    def apply(self, v: int) -> int:
        out = 0
        d = self.d
        while v:
            low = v & -v
            out ^= d[low.bit_length() - 1]
            v ^= low
        return out

    def matrix(self) -> F2Matrix:
        return F2Matrix(self.n, self.n, self.d)

    def key(self, i: int):
        g = self.generators[i]
        return (g.delta, g.q)

    def to_json(self) -> dict:
        gens = []
        for i, g in enumerate(self.generators):
            row = {"id": i, "t": g.t, "delta": g.delta}
            if g.q is not None:
                row["q"] = g.q
            gens.append(row)
        arrows = [[i, j] for i, img in enumerate(self.d) for j in range(self.n) if (img >> j) & 1]
        return {"generators": gens, "d": arrows}

    @classmethod
    def from_json(cls, data: dict) -> "FilteredComplex":
        gens = sorted(data["generators"], key=lambda g: g["id"])
        ids = [g["id"] for g in gens]
        if ids != list(range(len(ids))):
            raise ValueError("generator ids must be 0..n-1")
        out = [0] * len(gens)
        for a, b in data["d"]:
            out[a] ^= 1 << b
        return cls(tuple(Generator(g["t"], g["delta"] % 2, g.get("q")) for g in gens), tuple(out))


# subspace helpers ------------------------------------------------------------------

def _span_dim(vectors) -> int:
    return rank_of_rows(vectors)


def _basis(vectors) -> list[int]:
    basis: dict[int, int] = {}
    out = []
    for v in vectors:
        w = v
        while w:
            top = w.bit_length() - 1
            b = basis.get(top)
            if b is None:
                basis[top] = w
                out.append(v)
                break
            w ^= b
    return out


class _Engine:
    """Per-slot bookkeeping in local coordinates.

    A slot is one (parity, q) class. Its members are sorted by filtration level,
    so F_p is a suffix and "weight below t" is a prefix of local positions.
    The differential of a slot lands in the slot of opposite parity.
    """

    def __init__(self, c: FilteredComplex):
        self.c = c
        self.ts = sorted({g.t for g in c.generators})
        members: dict = defaultdict(list)
        for i in range(c.n):
            members[c.key(i)].append(i)
        self.slots: dict = {}
        self.levels: dict = {}
        pos = {}
        for key, idx in members.items():
            idx.sort(key=lambda i: (c.generators[i].t, i))
            self.slots[key] = idx
            self.levels[key] = [c.generators[i].t for i in idx]
            for a, i in enumerate(idx):
                pos[i] = a
        self.dloc: dict = {}
        for key, idx in self.slots.items():
            tkey = self.target_key(key)
            imgs = []
            for i in idx:
                v, loc = c.d[i], 0
                if v and tkey is None:
                    raise FiltrationError("differential leaves its (parity, q) slot")
                while v:
                    low = v & -v
                    loc |= 1 << pos[low.bit_length() - 1]
                    v ^= low
                imgs.append(loc)
            self.dloc[key] = imgs
        self._z: dict = {}

    def prefix(self, key, t: int) -> int:
        """Number of members of the slot with level below t."""
        return bisect_left(self.levels[key], t)

    def apply(self, key, v: int) -> int:
        """Image of a local vector of ``key`` in local coordinates of the target slot."""
        imgs = self.dloc[key]
        out = 0
        while v:
            low = v & -v
            out ^= imgs[low.bit_length() - 1]
            v ^= low
        return out

    def Z(self, r: int, p: int, key) -> list[int]:
        """Basis of Z^r_p in a slot (local bitsets); r < 0 means F_p."""
        k = (r, p, key)
        got = self._z.get(k)
        if got is not None:
            return got
        if key not in self.slots:
            return []
        first = self.prefix(key, p)
        size = len(self.slots[key])
        gens = range(first, size)
        if r < 0 or not gens:
            got = [1 << a for a in gens]
        else:
            tkey = self.target_key(key)
            mask = (1 << self.prefix(tkey, p + r)) - 1 if tkey is not None else 0
            imgs = self.dloc[key]
            nlo = size
            # kernel of x -> (d x below level p + r): eliminate the image part, the tags that
            # reduce to zero span the kernel
            pivots: dict[int, int] = {}
            got = []
            for a in gens:
                w = ((imgs[a] & mask) << nlo) | (1 << a)
                while w >> nlo:
                    top = w.bit_length() - 1
                    b = pivots.get(top)
                    if b is None:
                        pivots[top] = w
                        break
                    w ^= b
                else:
                    got.append(w)
            got = _basis(got)
        self._z[k] = got
        return got

    def boundary_part(self, r: int, p: int, key) -> list[int]:
        """Z^{r-1}_{p+1} + d Z^{r-1}_{p-r+1}, the denominator of E^r_p in a slot."""
        vecs = list(self.Z(r - 1, p + 1, key))
        src = self._source_key(key)
        if src is not None:
            vecs += [self.apply(src, z) for z in self.Z(r - 1, p - r + 1, src)]
        return _basis([v for v in vecs if v])

    def _source_key(self, key):
        delta, q = key
        cand = (1 - delta, q)
        return cand if cand in self.slots else None

    def target_key(self, key):
        return self._source_key(key)


def _quotient_basis(num: list[int], den: list[int]) -> list[int]:
    """Vectors of ``num`` extending a basis of ``den`` to one of num + den."""
    basis: dict[int, int] = {}

    def insert(v):
        w = v
        while w:
            top = w.bit_length() - 1
            b = basis.get(top)
            if b is None:
                basis[top] = w
                return True
            w ^= b
        return False

    for v in den:
        insert(v)
    return [v for v in num if insert(v)]


class _Reducer:
    """Coordinates modulo span(den) in the quotient basis qb."""

    def __init__(self, den: list[int], qb: list[int]):
        self.basis: dict[int, tuple[int, int]] = {}
        for v in den:
            self._insert(v, 0)
        for k, v in enumerate(qb):
            self._insert(v, 1 << k)

    def _insert(self, v: int, tag: int) -> None:
        w = v
        while w:
            top = w.bit_length() - 1
            b = self.basis.get(top)
            if b is None:
                self.basis[top] = (w, tag)
                return
            w ^= b[0]
            tag ^= b[1]
        if tag:
            raise AssertionError("quotient basis is dependent")

    def coords(self, y: int) -> int:
        w, tag = y, 0
        while w:
            b = self.basis.get(w.bit_length() - 1)
            if b is None:
                raise AssertionError("vector not in the span of the page")
            w ^= b[0]
            tag ^= b[1]
        return tag


def _coordinates(y: int, den: list[int], qb: list[int]) -> int:
    """Express y modulo span(den) in the quotient basis qb; returns a bitset over qb."""
    return _Reducer(den, qb).coords(y)


@dataclass
class Page:
    r: int
    ranks: dict  # (t, delta) -> rank, or (t, delta, q) -> rank when bigraded
    d: dict = field(default_factory=dict)  # (t, delta[, q]) -> F2Matrix into (t + r, 1 - delta[, q])
    bigraded: bool = False

    def total(self) -> int:
        return sum(self.ranks.values())

    def by_t_delta(self) -> dict:
        out: dict = defaultdict(int)
        for k, v in self.ranks.items():
            out[(k[0], k[1])] += v
        return {k: v for k, v in out.items() if v}

    def by_t_q(self) -> dict:
        if not self.bigraded:
            raise ValueError("page is not bigraded")
        out: dict = defaultdict(int)
        for (t, _, q), v in self.ranks.items():
            out[(t, q)] += v
        return {k: v for k, v in out.items() if v}

    def to_json(self) -> dict:
        rows = []
        for k, v in sorted(self.ranks.items(), key=lambda kv: tuple(x if x is not None else 0 for x in kv[0])):
            row = {"t": k[0], "delta": k[1], "rank": v}
            if self.bigraded:
                row["q"] = k[2]
            rows.append(row)
        return {"r": self.r, "ranks": rows}


def pages(c: FilteredComplex, r_max: int) -> list[Page]:
    """Pages E^1 .. E^{r_max} with ranks and the induced differentials d^r."""
    eng = _Engine(c)
    big = c.bigraded
    out = []
    for r in range(1, r_max + 1):
        ranks = {}
        bases = {}
        for key in sorted(eng.slots, key=lambda k: (k[0], k[1] if k[1] is not None else 0)):
            for p in eng.ts:
                num = eng.Z(r, p, key)
                den = eng.boundary_part(r, p, key)
                qb = _quotient_basis(num, den)
                if qb:
                    label = (p, key[0], key[1]) if big else (p, key[0])
                    ranks[label] = len(qb)
                    bases[(p, key)] = (qb, den, _Reducer(den, qb))
        dmaps = {}
        for (p, key), (qb, den, _) in bases.items():
            tkey = eng.target_key(key)
            tgt = bases.get((p + r, tkey)) if tkey is not None else None
            rows = []
            for x in qb:
                y = eng.apply(key, x)
                if tgt is None:
                    # y must vanish in the target page
                    rows.append(0)
                    continue
                rows.append(tgt[2].coords(y))
            if tgt is not None and any(rows):
                label = (p, key[0], key[1]) if big else (p, key[0])
                dmaps[label] = F2Matrix(len(rows), len(tgt[0]), tuple(rows))
        out.append(Page(r, ranks, dmaps, big))
    return out


def converged_r(c: FilteredComplex) -> int:
    """A page index past which the sequence is constant."""
    ts = [g.t for g in c.generators]
    return (max(ts) - min(ts) + 2) if ts else 1


def e_infinity_bruteforce(c: FilteredComplex) -> dict:
    """Associated graded of total homology, gr_p H = (F_p Z + B) / (F_{p+1} Z + B), per slot.

    Cycles come straight from kernel_basis, not from the page machinery.
    """
    eng = _Engine(c)
    out = {}
    for key, members in eng.slots.items():
        tkey = eng.target_key(key)
        ntgt = len(eng.slots[tkey]) if tkey is not None else 0
        src = eng._source_key(key)
        bnd = _basis([v for v in eng.dloc[src] if v]) if src is not None else []

        def graded_dim(p):
            first = eng.prefix(key, p)
            d = F2Matrix(len(members) - first, ntgt, tuple(eng.dloc[key][first:])).transpose()
            return _span_dim([v << first for v in kernel_basis(d)] + bnd)

        for p in eng.ts:
            dim = graded_dim(p) - graded_dim(p + 1)
            if dim:
                out[(p, key[0], key[1]) if c.bigraded else (p, key[0])] = dim
    return out


def homology_ranks(c: FilteredComplex) -> int:
    rk = rank_of_rows(c.d)
    return c.n - 2 * rk


def random_filtered_complex(rng: random.Random, n: int, tspan: int = 4, pairs: int | None = None) -> FilteredComplex:
    """A random filtered complex: elementary pairs conjugated by a filtered, parity-preserving change of basis."""
    ts = [rng.randrange(tspan) for _ in range(n)]
    ds = [rng.randrange(2) for _ in range(n)]
    order = list(range(n))
    rng.shuffle(order)
    used = set()
    d0 = [0] * n
    if pairs is None:
        pairs = rng.randrange(n // 2 + 1)
    made = 0
    for a in order:
        if made >= pairs:
            break
        if a in used:
            continue
        cands = [b for b in range(n) if b not in used and b != a and ts[b] >= ts[a] and ds[b] != ds[a]]
        if not cands:
            continue
        b = rng.choice(cands)
        used |= {a, b}
        d0[a] = 1 << b
        made += 1
    # P: g_i -> g_i + sum of g_j with t_j >= t_i, same parity, j != i (unitriangular in a fixed order)
    key = sorted(range(n), key=lambda i: (ts[i], i))
    pos = {g: k for k, g in enumerate(key)}
    P = [0] * n
    for i in range(n):
        v = 1 << i
        for j in range(n):
            if j != i and ds[j] == ds[i] and pos[j] > pos[i] and rng.random() < 0.3:
                v |= 1 << j
        P[i] = v
    Pinv = _invert(P, n)

    def app(m, v):
        out = 0
        i = 0
        while v:
            if v & 1:
                out ^= m[i]
            v >>= 1
            i += 1
        return out

    d = [app(P, app(d0, Pinv[i])) for i in range(n)]
    return FilteredComplex(tuple(Generator(ts[i], ds[i]) for i in range(n)), tuple(d))


def _invert(m: list[int], n: int) -> list[int]:
    """Inverse of an invertible map given by column images."""
    # rows of the augmented system: solve m x = e_i for each i
    aug = [(m[i], 1 << i) for i in range(n)]  # column i maps to m[i]
    basis: dict[int, tuple[int, int]] = {}
    for v, tag in aug:
        w = v
        while w:
            top = w.bit_length() - 1
            b = basis.get(top)
            if b is None:
                basis[top] = (w, tag)
                break
            w ^= b[0]
            tag ^= b[1]
        else:
            raise ValueError("matrix is singular")
    inv = []
    for i in range(n):
        w, tag = 1 << i, 0
        while w:
            top = w.bit_length() - 1
            b = basis[top]
            w ^= b[0]
            tag ^= b[1]
        inv.append(tag)
    return inv


# grading bookkeeping -----------------------------------------------------------------

@dataclass(frozen=True)
class CobordismData:
    chi: int
    sigma: int
    b1_in: int
    b1_out: int


def iota(w: CobordismData) -> Fraction:
    return Fraction(w.chi + w.sigma + w.b1_out - w.b1_in, 2)


def delta_check(gr: Fraction | int, weight: int, l: int, iota_to_final: Fraction | int) -> int:
    """Mod 2 grading of a generator at a vertex of weight ``weight`` in a cube of dimension l."""
    if l == 0:
        val = Fraction(gr)
    else:
        val = Fraction(gr) - (Fraction(iota_to_final) + weight) + l
    if val.denominator != 1:
        raise ValueError("grading combination is not an integer")
    return int(val) % 2


def edge_shift(iota_edge: Fraction | int, w_from: int, w_to: int) -> Fraction:
    """Mod 2 shift of the monopole grading along a component over a (w_to - w_from - 1)-dimensional family."""
    return Fraction(iota_edge) + (w_to - w_from - 1)


# page polynomials ----------------------------------------------------------------------

def page_polynomials(p: Page):
    """(E, V, U) as dicts: E {(t, q): c}; V {2*exp of q: c}; U {exp of delta (Fraction): c}."""
    if not p.bigraded:
        raise ValueError("page polynomials need a (t, q) bigrading")
    e = p.by_t_q()
    v: dict = defaultdict(int)
    u: dict = defaultdict(int)
    for (t, q), r in e.items():
        v[q] += (-1) ** (t % 2) * r
        u[Fraction(q, 2) - t] += (-1) ** (t % 2) * r
    return e, {k: c for k, c in sorted(v.items()) if c}, {k: c for k, c in sorted(u.items()) if c}


def euler_characteristic_delta(p: Page, nullity: int = 0) -> int:
    """|sum of (-1)^parity * rank| over the page; 0 when the nullity is positive."""
    if nullity > 0:
        return 0
    total = 0
    for k, r in p.ranks.items():
        total += (-1) ** k[1] * r
    return abs(total)


def signed_euler_characteristic_delta(p: Page) -> int:
    return sum((-1) ** k[1] * r for k, r in p.ranks.items())


# Khovanov instance -------------------------------------------------------------------------

def from_pd(d, sigma: int | None = None, nullity: int | None = None, bound: int | None = None) -> FilteredComplex:
    """Cube complex of a diagram, filtered by vertex weight, with the absolute parity
    delta - (sigma + nullity)/2 mod 2 (sigma and nullity from the arc-linking formula by default)."""
    from .khcube import build_complex
    from .linkmat import signature_formula

    if sigma is None or nullity is None:
        sigma, _, nullity = signature_formula(d)
    k = build_complex(d, bound)
    index = {}
    gens = []
    for v, m in k.generators():
        t, q = k.grading(v, m)
        val = Fraction(q, 2) - t - Fraction(sigma + nullity, 2)
        if val.denominator != 1:
            raise ValueError("half-integral delta parity")
        index[(v, m)] = len(gens)
        gens.append(Generator(t, int(val) % 2, q))
    dd = [0] * len(gens)
    for (v, m), i in index.items():
        img = 0
        for w, tgt in k.d(v, m).items():
            for x in tgt:
                img ^= 1 << index[(w, x)]
        dd[i] = img
    return FilteredComplex(tuple(gens), tuple(dd))


def load_complex(path: str) -> FilteredComplex:
    with open(path) as fh:
        return FilteredComplex.from_json(json.load(fh))
