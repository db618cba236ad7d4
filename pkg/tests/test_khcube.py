from hypothesis import given

from cubeflow.diagram import mirror, named, unknot
from cubeflow.khcube import (
    build_complex,
    check_d_squared,
    donaldson_map,
    edge_gamma,
    homology,
    khovanov_polynomial,
    table_to_json,
    table_to_text,
)
from cubeflow.oracles import frobenius_kh_reduced

from strategies import braid_diagrams


def test_unknot():
    assert homology(build_complex(unknot())) == {(0, 0): 1}


def test_right_trefoil_positions():
    assert homology(build_complex(named("3_1"))) == {(0, 2): 1, (2, 6): 1, (3, 8): 1}


def test_left_trefoil_is_the_reflection():
    assert homology(build_complex(mirror(named("3_1")))) == {(0, -2): 1, (-2, -6): 1, (-3, -8): 1}


def test_figure_eight_is_thin_at_zero():
    table = homology(build_complex(named("4_1")))
    assert sum(table.values()) == 5
    assert {q / 2 - t for t, q in table} == {0}


def test_table_outputs():
    table = {(0, 2): 1, (2, 6): 1}
    assert table_to_json(table) == {"ranks": [{"t": 0, "q": 2, "rank": 1}, {"t": 2, "q": 6, "rank": 1}]}
    assert len(table_to_text(table).splitlines()) == 3
    assert khovanov_polynomial(table, 2) == {(0, 0): 1, (2, 4): 1}


def test_edge_maps_agree_with_donaldson_construction():
    kc = build_complex(named("5_2"))
    for e in kc.cube.edges:
        cs, ct = kc.cube.counts[e.source], kc.cube.counts[e.target]
        rows = kc.block(e).rows
        images = donaldson_map(edge_gamma(e, cs, ct), cs - 1, ct - 1)
        assert [sum(1 << m for m in img) for img in images] == list(rows)


@given(braid_diagrams())
def test_d_squared_vanishes(d):
    assert check_d_squared(build_complex(d))


@given(braid_diagrams())
def test_matches_frobenius_model(d):
    assert homology(build_complex(d)) == frobenius_kh_reduced(d)


@given(braid_diagrams(max_len=6))
def test_mirror_reflects_gradings(d):
    table = homology(build_complex(d))
    assert homology(build_complex(mirror(d))) == {(-t, -q): r for (t, q), r in table.items()}


@given(braid_diagrams())
def test_differential_preserves_q_and_raises_t(d):
    kc = build_complex(d)
    for v, m in kc.generators():
        t, q = kc.grading(v, m)
        for w, targets in kc.d(v, m).items():
            for x in targets:
                assert kc.grading(w, x) == (t + 1, q)
