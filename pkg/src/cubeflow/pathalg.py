"""Weighted path algebra over F2 with interval-decorated generators.

The quiver has three nodes: o (interior), s (boundary-stable) and u
(boundary-unstable). There are eight generator kinds

    interior  oo os uo us        weight 1
    barred    bss buu            weight 1
              bsu                weight 0  (boundary-obstructed)
              bus                weight 2

named source-then-target, so ``uo`` runs from u to o. Barred kinds also carry
B-weight 1, the weight used by the boundary relations.

A generator lives on an interval (I, J) of a product lattice; I == J gives a
cylinder generator. A word is a tuple of generators in the order they are
applied, so word[0] acts first. It is composable when each generator starts at
the node where the previous one ends, and chained when each interval starts
where the previous one stopped. Words print right to left, joined by a middle
dot, as ``kind[I,J]``.

Everything here is formal. Sums are sets of words with F2 coefficients, and
the identity checker compares two explicit expansions word by word.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

from .lattice import ProductLattice

Vertex = tuple[int, ...]
ENDS = ("o", "s")  # the nodes carrying chain groups of the mapping-cone complex


@dataclass(frozen=True)
class GeneratorKind:
    name: str
    src: str
    dst: str
    barred: bool
    weight: int

    @property
    def b_weight(self) -> int:
        return 1 if self.barred else 0


KINDS: dict[str, GeneratorKind] = {
    k.name: k
    for k in (
        GeneratorKind("oo", "o", "o", False, 1),
        GeneratorKind("os", "o", "s", False, 1),
        GeneratorKind("uo", "u", "o", False, 1),
        GeneratorKind("us", "u", "s", False, 1),
        GeneratorKind("bss", "s", "s", True, 1),
        GeneratorKind("bsu", "s", "u", True, 0),
        GeneratorKind("bus", "u", "s", True, 2),
        GeneratorKind("buu", "u", "u", True, 1),
    )
}
INTERIOR = ("oo", "os", "uo", "us")
BARRED = ("bss", "bsu", "bus", "buu")


class IntervalGenerator(NamedTuple):
    kind: str
    start: Vertex
    end: Vertex

    @property
    def cylinder(self) -> bool:
        return self.start == self.end

    @property
    def info(self) -> GeneratorKind:
        return KINDS[self.kind]


Word = tuple[IntervalGenerator, ...]


class PathAlgebraError(ValueError):
    pass


def word_weight(w: Word) -> int:
    return sum(g.info.weight for g in w)


def check_word(w: Word, lat: ProductLattice | None = None) -> None:
    """Raise unless the word is composable and chained (and inside ``lat``)."""
    if not w:
        raise PathAlgebraError("empty word")
    for g in w:
        if g.kind not in KINDS:
            raise PathAlgebraError(f"unknown kind {g.kind!r}")
        if not ProductLattice.leq(g.start, g.end):
            raise PathAlgebraError(f"interval {g.start} -> {g.end} is not ordered")
        if lat is not None and not (ProductLattice.leq(g.end, lat.final) and len(g.start) == lat.l):
            raise PathAlgebraError(f"interval {g.start} -> {g.end} leaves the lattice")
    for a, b in zip(w, w[1:]):
        if a.info.dst != b.info.src:
            raise PathAlgebraError(f"{a.kind} then {b.kind} is not composable")
        if a.end != b.start:
            raise PathAlgebraError(f"intervals {a.start}->{a.end} and {b.start}->{b.end} do not chain")


def has_good_break(w: Word) -> bool:
    """True when some junction of the word sits at an o or s node."""
    return any(g.info.dst in ENDS for g in w[:-1])


# rendering ------------------------------------------------------------------------

def vertex_text(v: Vertex, lat: ProductLattice | None = None) -> str:
    out = []
    for f, x in enumerate(v):
        if lat is not None and lat.chain_lengths[f] == 2 and x == 2:
            out.append("∞")
        else:
            out.append(str(x))
    return "".join(out)


def render_generator(g: IntervalGenerator, lat: ProductLattice | None = None) -> str:
    return f"{g.kind}[{vertex_text(g.start, lat)},{vertex_text(g.end, lat)}]"


def render_word(w: Word, lat: ProductLattice | None = None) -> str:
    return "·".join(render_generator(g, lat) for g in reversed(w))


# formal sums ----------------------------------------------------------------------

@dataclass(frozen=True)
class FormalSum:
    words: frozenset = frozenset()

    @classmethod
    def of(cls, words: Iterable[Word]) -> "FormalSum":
        acc: set = set()
        for w in words:
            acc ^= {w}
        return cls(frozenset(acc))

    def __add__(self, other: "FormalSum") -> "FormalSum":
        return FormalSum(self.words ^ other.words)

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __bool__(self) -> bool:
        return bool(self.words)

    def then(self, later: "FormalSum") -> "FormalSum":
        """Composite ``later ∘ self``."""
        return FormalSum.of(a + b for a in self.words for b in later.words)

    def rendered(self, lat: ProductLattice | None = None) -> list[str]:
        return sorted(render_word(w, lat) for w in self.words)


Matrix = dict[tuple[str, str], FormalSum]  # keyed (source node, target node) over ENDS


def _zero_matrix() -> Matrix:
    return {(x, y): FormalSum() for x in ENDS for y in ENDS}


# enumeration ----------------------------------------------------------------------

class PathAlgebra:
    """Word enumeration over one product lattice, memoized per interval."""

    def __init__(self, lat: ProductLattice):
        self.lat = lat
        self._words = lru_cache(maxsize=None)(self._words_uncached)

    def between(self, i: Vertex, j: Vertex) -> list[Vertex]:
        return list(itertools.product(*(range(a, b + 1) for a, b in zip(i, j))))

    def _check_pair(self, i, j, strict=False):
        i, j = tuple(i), tuple(j)
        if len(i) != self.lat.l or len(j) != self.lat.l:
            raise PathAlgebraError("vertex has the wrong length")
        if not ProductLattice.leq(j, self.lat.final) or min(i) < 0:
            raise PathAlgebraError("vertex outside the lattice")
        if not ProductLattice.leq(i, j) or (strict and i == j):
            raise PathAlgebraError(f"need {i} {'<' if strict else '<='} {j}")
        return i, j

    def _words_uncached(self, src: str, dst: str, i: Vertex, j: Vertex,
                        weight: int, barred: bool) -> tuple[Word, ...]:
        out: list[Word] = []
        if weight == 0 and src == dst and i == j:
            out.append(())
        for k in KINDS.values():
            if k.src != src or (barred and not k.barred):
                continue
            cost = k.b_weight if barred else k.weight
            if cost > weight:
                continue
            for mid in self.between(i, j):
                g = IntervalGenerator(k.name, i, mid)
                for rest in self._words(k.dst, dst, mid, j, weight - cost, barred):
                    out.append((g,) + rest)
        return tuple(out)

    def words(self, src: str, dst: str, i: Vertex, j: Vertex, weight: int,
              barred: bool = False) -> tuple[Word, ...]:
        """All nonempty words from node ``src`` at i to node ``dst`` at j of the given
        weight (B-weight, over barred letters only, when ``barred``)."""
        i, j = self._check_pair(i, j)
        return tuple(w for w in self._words(src, dst, i, j, weight, barred) if w)

    # single relations -------------------------------------------------------------

    def relation(self, kind: str, i, j) -> FormalSum:
        """The relation attached to a generator kind on (i, j): weight-2 words between
        its ends for interior kinds, two-letter barred words for barred kinds."""
        k = KINDS[kind]
        return FormalSum.of(self.words(k.src, k.dst, i, j, 2, barred=k.barred))

    # bundled operators ------------------------------------------------------------

    def differential(self, i, j) -> Matrix:
        i, j = self._check_pair(i, j)
        m = _zero_matrix()
        m[("o", "o")] = FormalSum.of([(IntervalGenerator("oo", i, j),)])
        m[("o", "s")] = FormalSum.of([(IntervalGenerator("os", i, j),)])
        so, ss = [], [(IntervalGenerator("bss", i, j),)]
        for k in self.between(i, j):
            obstructed = IntervalGenerator("bsu", i, k)
            so.append((obstructed, IntervalGenerator("uo", k, j)))
            ss.append((obstructed, IntervalGenerator("us", k, j)))
        m[("s", "o")] = FormalSum.of(so)
        m[("s", "s")] = FormalSum.of(ss)
        return m

    def _relation_expansion(self, i, j) -> dict[tuple[str, str], Counter]:
        """Left-hand side of the identity before cancellation."""
        i, j = self._check_pair(i, j)
        out = {key: Counter() for key in _zero_matrix()}
        out[("o", "o")].update(self.relation("oo", i, j))
        out[("o", "s")].update(self.relation("os", i, j))
        out[("s", "s")].update(self.relation("bss", i, j))
        for k in self.between(i, j):
            obstructed = (IntervalGenerator("bsu", i, k),)
            for tgt, kind in (("o", "uo"), ("s", "us")):
                acc = out[("s", tgt)]
                acc.update(obstructed + w for w in self.relation(kind, k, j))
                last = (IntervalGenerator(kind, k, j),)
                acc.update(w + last for w in self.relation("bsu", i, k))
        return out

    def relations(self, i, j) -> Matrix:
        exp = self._relation_expansion(i, j)
        return {key: FormalSum.of(c.elements()) for key, c in exp.items()}

    def _composite_expansion(self, i, j, mids: Iterable[Vertex]) -> dict[tuple[str, str], Counter]:
        out = {key: Counter() for key in _zero_matrix()}
        for k in mids:
            first = self.differential(i, k)
            second = self.differential(k, j)
            for x in ENDS:
                for z in ENDS:
                    for y in ENDS:
                        out[(x, y)].update(a + b for a in first[(x, z)] for b in second[(z, y)])
        return out

    def composites(self, i, j, strict: bool = False) -> Matrix:
        i, j = self._check_pair(i, j, strict=strict)
        mids = [k for k in self.between(i, j) if not strict or k not in (i, j)]
        exp = self._composite_expansion(i, j, mids)
        return {key: FormalSum.of(c.elements()) for key, c in exp.items()}


_ALGEBRAS: dict[tuple, PathAlgebra] = {}


def algebra(lat: ProductLattice) -> PathAlgebra:
    got = _ALGEBRAS.get(lat.chain_lengths)
    if got is None:
        got = _ALGEBRAS[lat.chain_lengths] = PathAlgebra(lat)
    return got


def gen_D(lat: ProductLattice, i, j) -> Matrix:
    """Components of the differential from vertex i to vertex j."""
    return algebra(lat).differential(i, j)


def gen_A(lat: ProductLattice, i, j) -> Matrix:
    """The bundled relation operator on (i, j), reduced mod 2."""
    return algebra(lat).relations(i, j)


def gen_Q(lat: ProductLattice, i, j) -> Matrix:
    """Composites through strictly intermediate vertices only."""
    return algebra(lat).composites(i, j, strict=True)


def gen_B(lat: ProductLattice, i, j) -> Matrix:
    """Composites through an end of the interval, D(i,j)D(i,i) + D(j,j)D(i,j)."""
    i, j = tuple(i), tuple(j)
    pa = algebra(lat)
    exp = pa._composite_expansion(i, j, [i] if i == j else [i, j])
    return {key: FormalSum.of(c.elements()) for key, c in exp.items()}


def matrix_sum(a: Matrix, b: Matrix) -> Matrix:
    return {key: a[key] + b[key] for key in a}


def matrix_is_zero(m: Matrix) -> bool:
    return not any(m.values())


# the identity ---------------------------------------------------------------------

@dataclass
class IdentityReport:
    start: Vertex
    end: Vertex
    residual: Matrix
    lhs_terms: int
    rhs_terms: int
    max_multiplicity: int
    unbroken_twice: bool  # every word without a good break occurs exactly twice on the left
    broken_once: bool  # every word with a good break occurs once on each side

    @property
    def ok(self) -> bool:
        return (matrix_is_zero(self.residual) and self.unbroken_twice and self.broken_once
                and self.max_multiplicity <= 2)

    def to_json(self, lat: ProductLattice | None = None) -> dict:
        return {
            "start": vertex_text(self.start, lat),
            "end": vertex_text(self.end, lat),
            "ok": self.ok,
            "lhs_terms": self.lhs_terms,
            "rhs_terms": self.rhs_terms,
            "max_multiplicity": self.max_multiplicity,
            "residual": {f"{x}{y}": s.rendered(lat) for (x, y), s in sorted(self.residual.items())},
        }


def verify_identity(lat: ProductLattice, i, j) -> IdentityReport:
    """Compare the relation operator with the sum of composites D(k,j) D(i,k) over i <= k <= j."""
    pa = algebra(lat)
    i, j = pa._check_pair(i, j)
    lhs = pa._relation_expansion(i, j)
    rhs = pa._composite_expansion(i, j, pa.between(i, j))
    residual = {}
    unbroken_twice = broken_once = True
    max_mult = 0
    nl = nr = 0
    for key in lhs:
        left, right = lhs[key], rhs[key]
        nl += sum(left.values())
        nr += sum(right.values())
        for w, c in left.items():
            check_word(w, lat)
            if has_good_break(w):
                broken_once &= c == 1
            else:
                unbroken_twice &= c == 2
        for w, c in right.items():
            check_word(w, lat)
            broken_once &= c == 1 and has_good_break(w)
        both = left + right
        if both:
            max_mult = max(max_mult, max(both.values()))
        residual[key] = FormalSum.of(left.elements()) + FormalSum.of(right.elements())
    return IdentityReport(i, j, residual, nl, nr, max_mult, unbroken_twice, broken_once)


def intervals(lat: ProductLattice) -> list[tuple[Vertex, Vertex]]:
    vs = lat.vertices()
    return [(a, b) for a in vs for b in vs if ProductLattice.leq(a, b)]


@dataclass
class LatticeVerdict:
    lattice: ProductLattice
    reports: list[IdentityReport] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports)

    @property
    def failures(self) -> list[IdentityReport]:
        return [r for r in self.reports if not r.ok]


def verify_lattice(lat: ProductLattice) -> LatticeVerdict:
    return LatticeVerdict(lat, [verify_identity(lat, a, b) for a, b in intervals(lat)])


# golden transcriptions ------------------------------------------------------------
#
# Each block is written as printed, in a compact notation: terms separated by "+",
# letters within a term separated by spaces and read right to left. A letter is a
# kind, optionally followed by "@label" naming its interval; a letter without a
# label is a cylinder at whatever vertex the chain has reached.

_CUBE2 = {"h": ("00", "11"), "ma": ("00", "01"), "mb": ("01", "11"),
          "mc": ("00", "10"), "md": ("10", "11")}
_CUBE3 = {
    "g": ("000", "111"),
    "ma": ("000", "100"), "mb": ("000", "010"), "mc": ("000", "001"),
    "md": ("100", "110"), "me": ("100", "101"), "mf": ("010", "110"),
    "mg": ("010", "011"), "mh": ("001", "101"), "mi": ("001", "011"),
    "mj": ("110", "111"), "mk": ("101", "111"), "ml": ("011", "111"),
    "ha": ("000", "110"), "hb": ("000", "101"), "hc": ("000", "011"),
    "hd": ("100", "111"), "he": ("010", "111"), "hf": ("001", "111"),
}
_TRIAD = {"h": ("0", "2"), "mk": ("0", "1"), "ml": ("1", "2")}

_L1_D = {
    "oo": "oo", "os": "os", "so": "uo bsu", "ss": "bss + us bsu",
}
_L1_M = {
    "oo": "oo@m", "os": "os@m", "so": "uo@m bsu + uo bsu@m",
    "ss": "bss@m + us@m bsu + us bsu@m",
}
_L1_A = {
    "oo": "oo oo + uo bsu os",
    "os": "os oo + bss os + us bsu os",
    "uo": "oo uo + uo buu + uo bsu us",
    "us": "bus + os uo + bss us + us buu + us bsu us",
    "bss": "bss bss + bus bsu",
    "bsu": "bsu bss + buu bsu",
    "bus": "bss bus + bus buu",
    "buu": "bsu bus + buu buu",
}
_L1_B = {
    "oo": "oo@m oo + oo oo@m + uo bsu os@m + uo bsu@m os + uo@m bsu os",
    "os": "os@m oo + os oo@m + us@m bsu os + us bsu@m os + us bsu os@m + bss@m os + bss os@m",
    "uo": "oo@m uo + oo uo@m + uo@m bsu us + uo bsu@m us + uo bsu us@m + uo@m buu + uo buu@m",
    "us": ("os@m uo + os uo@m + us@m bsu us + us bsu@m us + us bsu us@m + us@m buu + us buu@m"
           " + bss@m us + bss us@m + bus@m"),
    "bss": "bss@m bss + bss bss@m + bus@m bsu + bus bsu@m",
    "bsu": "bsu@m bss + bsu bss@m + buu@m bsu + buu bsu@m",
    "bus": "bss@m bus + bss bus@m + bus@m buu + bus buu@m",
    "buu": "bsu@m bus + bsu bus@m + buu@m buu + buu buu@m",
}
_L2_H = {
    "oo": "oo@h", "os": "os@h",
    "so": "uo@h bsu + uo bsu@h + uo@mb bsu@ma + uo@md bsu@mc",
    "ss": "bss@h + us@h bsu + us bsu@h + us@mb bsu@ma + us@md bsu@mc",
}
_L2_E = {
    "oo": ("oo@h oo + oo oo@h + uo bsu os@h + uo bsu@h os + uo@h bsu os"
           " + uo@mb bsu@ma os + uo@md bsu@mc os"
           " + oo@mb oo@ma + uo@mb bsu os@ma + uo bsu@mb os@ma"
           " + oo@md oo@mc + uo@md bsu os@mc + uo bsu@md os@mc"),
    "os": ("os@h oo + os oo@h + us@h bsu os + us bsu@h os + us bsu os@h + bss@h os + bss os@h"
           " + us@mb bsu@ma os + us@md bsu@mc os"
           " + os@mb oo@ma + us@md bsu os@mc + us bsu@md os@mc"
           " + os@md oo@mc + us@md bsu os@mc + us bsu@md os@mc"),
    "uo": ("oo@h uo + oo uo@h + uo@h bsu us + uo bsu@h us + uo bsu us@h + uo@h buu + uo buu@h"
           " + uo@mb bsu@ma us + uo@md bsu@mc us"
           " + oo@mb uo@ma + uo@mb bsu us@ma + uo bsu@mb us@ma + uo@mb buu@ma"
           " + oo@md uo@mc + uo@md bsu us@mc + uo bsu@md us@mc + uo@md buu@mc"),
    "us": ("os@h uo + os uo@h + us@h bsu us + us bsu@h us + us bsu us@h + us@h buu + us buu@h"
           " + bss@h us + bss us@h + bus@h"
           " + us@mb bsu@ma us + us@md bsu@mc us"
           " + os@mb uo@ma + us@mb bsu us@ma + us bsu@mb us@ma + bss@mb us@ma + us@mb buu@ma"
           " + os@md uo@mc + us@md bsu us@mc + us bsu@md us@mc + bss@md us@mc + us@md buu@mc"),
    "bss": ("bss@h bss + bss bss@h + bus@h bsu + bus bsu@h"
            " + bss@mb bss@ma + bus@mb bsu@ma + bss@md bss@mc + bus@md bsu@mc"),
    "bsu": ("bsu@h bss + bsu bss@h + buu@h bsu + buu bsu@h"
            " + bsu@mb bss@ma + buu@mb bsu@ma + bsu@md bss@mc + buu@md bsu@mc"),
    "bus": ("bss@h bus + bss bus@h + bus@h buu + bus buu@h"
            " + bss@mb bus@ma + bus@mb buu@ma + bss@md bus@mc + bus@md buu@mc"),
    "buu": ("bsu@h bus + bsu bus@h + buu@h buu + buu buu@h"
            " + bsu@mb bus@ma + buu@mb buu@ma + bsu@md bus@mc + buu@md buu@mc"),
}
_L2_Q_OO = ("oo@mb oo@ma + uo@mb bsu os@ma + uo bsu@mb os@ma"
            " + oo@md oo@mc + uo@md bsu os@mc + uo bsu@md os@mc")
_L3_F_OO = (
    "oo@g oo + oo oo@g + uo bsu os@g + uo bsu@g os + uo@g bsu os"
    " + oo@hd oo@ma + uo@hd bsu@ma os + uo@hd bsu os@ma + uo bsu@hd os@ma"
    " + oo@he oo@mb + uo@he bsu@mb os + uo@he bsu os@mb + uo bsu@he os@mb"
    " + oo@hf oo@mc + uo@hf bsu@mb os + uo@hf bsu os@mc + uo bsu@hf os@mc"
    " + oo@mj oo@ha + uo@mj bsu@ha os + uo@mj bsu os@ha + uo bsu@mj os@ha"
    " + oo@mk oo@hb + uo@mk bsu@hb os + uo@mk bsu os@hb + uo bsu@mk os@hb"
    " + oo@ml oo@hc + uo@ml bsu@hc os + uo@ml bsu os@hc + uo bsu@ml os@hc"
    " + uo@mj bsu@md os@ma + uo@mk bsu@me os@ma + uo@mj bsu@mf os@mb"
    " + uo@ml bsu@mg os@mb + uo@mk bsu@mh os@mc + uo@ml bsu@mi os@mc"
)
_TRIAD_H = {
    "oo": "oo@h", "os": "os@h",
    "so": "uo@h bsu + uo bsu@h + uo@ml bsu@mk",
    "ss": "bss@h + us@h bsu + us bsu@h + us@ml bsu@mk",
}
_TRIAD_E = {
    "oo": ("oo@h oo + oo oo@h + uo bsu os@h + uo bsu@h os + uo@h bsu os"
           " + uo@ml bsu@mk os + oo@ml oo@mk + uo@ml bsu os@mk + uo bsu@ml os@mk"),
    "os": ("os@h oo + os oo@h + us@h bsu os + us bsu@h os + us bsu os@h + bss@h os + bss os@h"
           " + us@ml bsu@mk os + os@ml oo@mk + us@md bsu os@mc + us bsu@md os@mc"),
    "uo": ("oo@h uo + oo uo@h + uo@h bsu us + uo bsu@h us + uo bsu us@h + uo@h buu + uo buu@h"
           " + uo@ml bsu@mk us + oo@ml uo@mk + uo@ml bsu us@mk + uo bsu@ml us@mk + uo@ml buu@mk"),
    "us": ("os@h uo + os uo@h + us@h bsu us + us bsu@h us + us bsu us@h + us@h buu + us buu@h"
           " + bss@h us + bss us@h + bus@h"
           " + us@ml bsu@mk us + os@ml uo@mk + us@ml bsu us@mk"
           " + us bsu@ml us@mk + bss@ml us@mk + us@ml buu@mk"),
    "bss": "bss@h bss + bss bss@h + bus@h bsu + bus bsu@h + bss@ml bss@mk + bus@ml bsu@mk",
    "bsu": "bsu@h bss + bsu bss@h + buu@h bsu + buu bsu@h + bsu@ml bss@mk + buu@ml bsu@mk",
    "bus": "bss@h bus + bss bus@h + bus@h buu + bus buu@h + bss@ml bus@mk + bus@ml buu@mk",
    "buu": "bsu@h bus + bsu bus@h + buu@h buu + buu buu@h + bsu@ml bus@mk + buu@ml buu@mk",
}

# Printed misprints, as (block, printed term or None, corrected term or None).
ERRATA: dict[str, list[tuple[str | None, str | None]]] = {
    "cube2 relation os": [
        ("us@md bsu os@mc", "us@mb bsu os@ma"),
        ("us bsu@md os@mc", "us bsu@mb os@ma"),
        (None, "bss@mb os@ma"),
        (None, "bss@md os@mc"),
    ],
    "cube3 relation oo": [
        ("uo@hf bsu@mb os", "uo@hf bsu@mc os"),
    ],
    "triad relation os": [
        ("us@md bsu os@mc", "us@ml bsu os@mk"),
        ("us bsu@md os@mc", "us bsu@ml os@mk"),
        (None, "bss@ml os@mk"),
    ],
}


def _parse_vertex(text: str) -> Vertex:
    return tuple(2 if ch in "∞i" else int(ch) for ch in text)


def parse_term(term: str, labels: dict, start: Vertex, end: Vertex) -> Word:
    """One printed term, letters right to left, into a word from start to end."""
    cur = start
    word = []
    for tok in reversed(term.split()):
        kind, _, label = tok.partition("@")
        if kind not in KINDS:
            raise PathAlgebraError(f"unknown kind in {tok!r}")
        if label:
            if label not in labels:
                raise PathAlgebraError(f"unknown interval label {label!r}")
            a, b = (_parse_vertex(x) for x in labels[label])
            if a != cur:
                raise PathAlgebraError(f"{term!r}: {tok} starts at {a}, chain is at {cur}")
            word.append(IntervalGenerator(kind, a, b))
            cur = b
        else:
            word.append(IntervalGenerator(kind, cur, cur))
    if cur != end:
        raise PathAlgebraError(f"{term!r} ends at {cur}, not {end}")
    w = tuple(word)
    check_word(w)
    return w


def parse_block(text: str, labels: dict, start: Vertex, end: Vertex) -> list[Word]:
    return [parse_term(t.strip(), labels, start, end) for t in text.split("+")]


@dataclass
class BlockComparison:
    name: str
    expected: list[str]
    generated: list[str]
    errata: list[tuple[str | None, str | None]]

    @property
    def missing(self) -> list[str]:
        return sorted(set(self.expected) - set(self.generated))

    @property
    def extra(self) -> list[str]:
        return sorted(set(self.generated) - set(self.expected))

    @property
    def ok(self) -> bool:
        return not self.missing and not self.extra and len(self.expected) == len(set(self.expected))

    def to_json(self) -> dict:
        return {"block": self.name, "ok": self.ok, "words": len(self.generated),
                "missing": self.missing, "extra": self.extra,
                "errata": [list(e) for e in self.errata]}


@dataclass
class AppendixReport:
    lattice: str
    blocks: list[BlockComparison]

    @property
    def ok(self) -> bool:
        return all(b.ok for b in self.blocks)

    def block(self, name: str) -> BlockComparison:
        for b in self.blocks:
            if b.name == name:
                return b
        raise KeyError(name)

    def to_json(self) -> dict:
        return {"lattice": self.lattice, "ok": self.ok, "blocks": [b.to_json() for b in self.blocks]}


APPENDIX_LATTICES = ("point", "cube1", "cube2", "cube3", "triad")


def _lattice_for(name: str) -> ProductLattice:
    return {
        "point": ProductLattice.hypercube(1),
        "cube1": ProductLattice.hypercube(1),
        "cube2": ProductLattice.hypercube(2),
        "cube3": ProductLattice.hypercube(3),
        "triad": ProductLattice((2,)),
    }[name]


def _expected(name: str, text: str, labels, start, end, lat, apply_errata: bool):
    terms = [t.strip() for t in text.split("+")]
    errata = ERRATA.get(name, []) if apply_errata else []
    for printed, fixed in errata:
        if printed is not None:
            terms.remove(printed)
        if fixed is not None:
            terms.append(fixed)
    out = []
    for t in terms:
        try:
            out.append(render_word(parse_term(t, labels, start, end), lat))
        except PathAlgebraError as exc:
            out.append(f"unparsable {t!r}: {exc}")
    return out, errata


def dump_appendix(name: str, apply_errata: bool = True) -> AppendixReport:
    """Generate the printed blocks for one small lattice and compare word by word."""
    if name not in APPENDIX_LATTICES:
        raise PathAlgebraError(f"no printed blocks for {name!r}; choose from {APPENDIX_LATTICES}")
    lat = _lattice_for(name)
    pa = algebra(lat)
    blocks: list[BlockComparison] = []

    def add(block, text, labels, start, end, generated: FormalSum):
        exp, err = _expected(block, text, labels, start, end, lat, apply_errata)
        blocks.append(BlockComparison(block, sorted(exp), generated.rendered(lat), err))

    def add_matrix(block, table, labels, start, end, matrix):
        for key, text in table.items():
            add(f"{block} {key}", text, labels, start, end, matrix[(key[0], key[1])])

    def add_relations(block, table, labels, start, end):
        for kind, text in table.items():
            add(f"{block} relation {kind}", text, labels, start, end, pa.relation(kind, start, end))

    zero, one = (0,), (1,)
    if name == "point":
        add_matrix("point differential", _L1_D, {}, zero, zero, pa.differential(zero, zero))
        add_relations("point", _L1_A, {}, zero, zero)
    elif name == "cube1":
        labels = {"m": ("0", "1")}
        add_matrix("cube1 differential", _L1_D, labels, one, one, pa.differential(one, one))
        add_matrix("cube1 map", _L1_M, labels, zero, one, pa.differential(zero, one))
        add_relations("cube1 cylinder", _L1_A, labels, zero, zero)
        add_relations("cube1", _L1_B, labels, zero, one)
    elif name == "cube2":
        s, e = (0, 0), (1, 1)
        add_matrix("cube2 map", _L2_H, _CUBE2, s, e, pa.differential(s, e))
        add_relations("cube2", _L2_E, _CUBE2, s, e)
        add("cube2 composites oo", _L2_Q_OO, _CUBE2, s, e, pa.composites(s, e, strict=True)[("o", "o")])
    elif name == "cube3":
        s, e = (0, 0, 0), (1, 1, 1)
        add("cube3 relation oo", _L3_F_OO, _CUBE3, s, e, pa.relation("oo", s, e))
    else:
        s, e = (0,), (2,)
        add_matrix("triad map", _TRIAD_H, _TRIAD, s, e, pa.differential(s, e))
        add_relations("triad", _TRIAD_E, _TRIAD, s, e)
    return AppendixReport(name, blocks)


def verify_chain_lengths(lengths: Sequence[int]) -> LatticeVerdict:
    return verify_lattice(ProductLattice(tuple(lengths)))
