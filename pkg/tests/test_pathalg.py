import pytest
from hypothesis import given, strategies as st

from cubeflow import pathalg as P
from cubeflow.lattice import ProductLattice


def gen(kind, a, b):
    return P.IntervalGenerator(kind, tuple(a), tuple(b))


def test_kind_table():
    assert set(P.KINDS) == set(P.INTERIOR) | set(P.BARRED)
    assert P.KINDS["bsu"].weight == 0 and P.KINDS["bus"].weight == 2
    assert all(P.KINDS[k].b_weight == 1 for k in P.BARRED)
    assert all(P.KINDS[k].b_weight == 0 for k in P.INTERIOR)


def test_rendering():
    lat = ProductLattice((2,))
    w = (gen("bsu", (0,), (1,)), gen("uo", (1,), (2,)))
    assert P.render_word(w, lat) == "uo[1,∞]·bsu[0,1]"
    assert P.vertex_text((0, 1)) == "01"


def test_check_word_rejections():
    with pytest.raises(P.PathAlgebraError):
        P.check_word(())
    with pytest.raises(P.PathAlgebraError):
        P.check_word((gen("oo", (0,), (1,)), gen("uo", (1,), (1,))))
    with pytest.raises(P.PathAlgebraError):
        P.check_word((gen("oo", (0,), (0,)), gen("oo", (1,), (1,))))
    with pytest.raises(P.PathAlgebraError):
        P.check_word((gen("oo", (1,), (0,)),))
    with pytest.raises(P.PathAlgebraError):
        P.check_word((gen("zz", (0,), (0,)),))


def test_good_break():
    broken = (gen("os", (0,), (0,)), gen("bss", (0,), (1,)))
    unbroken = (gen("bsu", (0,), (0,)), gen("us", (0,), (1,)))
    assert P.has_good_break(broken)
    assert not P.has_good_break(unbroken)


def test_formal_sum_is_mod_two():
    w = (gen("oo", (0,), (1,)),)
    assert not P.FormalSum.of([w, w])
    assert len(P.FormalSum.of([w]) + P.FormalSum.of([])) == 1


def test_differential_shape():
    lat = ProductLattice.hypercube(1)
    d = P.gen_D(lat, (0,), (1,))
    assert len(d[("o", "o")]) == 1 and len(d[("o", "s")]) == 1
    assert len(d[("s", "o")]) == 2 and len(d[("s", "s")]) == 3


def test_out_of_range_vertices():
    lat = ProductLattice.hypercube(2)
    with pytest.raises(P.PathAlgebraError):
        P.verify_identity(lat, (0, 0), (2, 1))
    with pytest.raises(P.PathAlgebraError):
        P.verify_identity(lat, (1, 0), (0, 1))
    with pytest.raises(P.PathAlgebraError):
        P.gen_Q(lat, (0, 0), (0, 0))


def test_printed_block_sizes():
    cube2 = P.dump_appendix("cube2")
    assert len(cube2.block("cube2 relation oo").generated) == 13
    assert len(cube2.block("cube2 composites oo").generated) == 6
    assert len(P.dump_appendix("cube3").block("cube3 relation oo").generated) == 35
    assert len(P.dump_appendix("triad").block("triad relation oo").generated) == 9


@pytest.mark.parametrize("name", P.APPENDIX_LATTICES)
def test_printed_blocks_match(name):
    report = P.dump_appendix(name)
    assert report.ok, [b.to_json() for b in report.blocks if not b.ok]


def test_errata_are_needed():
    for block in P.ERRATA:
        lattice = block.split()[0]
        raw = P.dump_appendix(lattice, apply_errata=False)
        assert not raw.block(block).ok
        assert P.dump_appendix(lattice).block(block).ok


def test_unknown_block_set():
    with pytest.raises(P.PathAlgebraError):
        P.dump_appendix("cube9")


def test_parse_term():
    word = P.parse_term("os@mb oo@ma", {"ma": ("00", "01"), "mb": ("01", "11")}, (0, 0), (1, 1))
    assert P.render_word(word) == "os[01,11]·oo[00,01]"


def test_generated_sums_decompose():
    lat = ProductLattice.hypercube(3)
    i, j = (0, 0, 0), (1, 1, 1)
    a, b, q = P.gen_A(lat, i, j), P.gen_B(lat, i, j), P.gen_Q(lat, i, j)
    assert P.matrix_is_zero(P.matrix_sum(a, P.matrix_sum(b, q)))
    assert len(q[("o", "o")]) == 24


@pytest.mark.parametrize("lengths", [(1,), (1, 1), (1, 1, 1), (1, 1, 1, 1), (2,), (2, 2), (2, 1), (3,)])
def test_identity_on_every_interval(lengths):
    verdict = P.verify_chain_lengths(lengths)
    assert verdict.ok, [r.to_json() for r in verdict.failures[:2]]


@st.composite
def intervals(draw):
    lengths = tuple(draw(st.lists(st.integers(1, 2), min_size=1, max_size=3)))
    lat = ProductLattice(lengths)
    i = tuple(draw(st.integers(0, n)) for n in lengths)
    j = tuple(draw(st.integers(a, n)) for a, n in zip(i, lengths))
    return lat, i, j


@given(intervals())
def test_identity_multiplicities(args):
    lat, i, j = args
    report = P.verify_identity(lat, i, j)
    assert report.ok
    assert report.max_multiplicity <= 2
    out = report.to_json(lat)
    assert out["ok"] and not any(out["residual"].values())


@given(intervals(), st.sampled_from(P.INTERIOR + P.BARRED))
def test_relation_words_are_well_formed(args, kind):
    lat, i, j = args
    for w in P.algebra(lat).relation(kind, i, j):
        P.check_word(w, lat)
        k = P.KINDS[kind]
        assert w[0].info.src == k.src and w[-1].info.dst == k.dst
        assert w[0].start == i and w[-1].end == j
        if k.barred:
            assert len(w) == 2 and all(g.info.barred for g in w)
        else:
            assert P.word_weight(w) == 2
